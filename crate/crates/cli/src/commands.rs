use relayic::asymptotics::{alpha_map, linspace, scaled_channel, symmetric_map, MapRow};
use relayic::audit::{gap_audit, gap_audit_admissible, AuditSummary};
use relayic::detchannel::{verify_fixture, DetReport};
use relayic::model::{etw_split, ChannelParams, PowerSplit};
use relayic::regions::{cf_rates_order2, no_relay_hk_region, outer_bound_region, RatePolytope};
use relayic::strategies::{
    af_rates, quantizer_cf_order1, quantizer_cf_order2, tin_baseline, tin_cf_rates, tin_ghf_best,
};
use serde::Serialize;

use crate::config::{AuditConfig, MapConfig, MapMode, SweepSpec, SweepStrategy, SweepVariable};
use crate::format::{num, opt};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub strategy: &'static str,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "sumRate")]
    pub sum_rate: f64,
    #[serde(rename = "improvementSum")]
    pub improvement_sum: f64,
}

pub const SWEEP_HEADER: &str = "value,strategy,R1,R2,sumRate,improvementSum";

fn channel_at(spec: &SweepSpec, v: f64) -> ChannelParams {
    let b = spec.base;
    let snr = |db: f64| 10f64.powf(db / 10.0);
    match spec.variable {
        SweepVariable::SnrDb => b.with_snr_db(v),
        SweepVariable::G2 => ChannelParams { g2: v, ..b },
        SweepVariable::R0 => b.with_r0(v),
        SweepVariable::Alpha => scaled_channel(&b, v, spec.rho, snr(spec.snr_db)),
        SweepVariable::Rho => scaled_channel(&b, spec.alpha, v, snr(spec.snr_db)),
    }
}

fn max_sum_vertex(region: &RatePolytope) -> relayic::Result<(f64, f64)> {
    Ok(region.max_weighted_sum(1.0, 1.0)?.1)
}

/// Rate pair of one strategy. GHF, CF order 1 and AF treat interference as
/// noise, GHF taking the better of its two TIN quantizers; CF order 2 and the outer bound report the max-sum vertex of their
/// Han-Kobayashi regions.
pub fn strategy_rates(p: &ChannelParams, s: SweepStrategy) -> relayic::Result<(f64, f64)> {
    let tin = |r: relayic::strategies::TinRates| (r.r1, r.r2);
    let relay_off = p.r0 == 0.0;
    match s {
        SweepStrategy::Baseline => Ok(tin(tin_baseline(p)?)),
        SweepStrategy::Ghf if relay_off => Ok(tin(tin_baseline(p)?)),
        SweepStrategy::Ghf => Ok(tin(tin_ghf_best(p)?)),
        SweepStrategy::Cf1 if relay_off => Ok(tin(tin_baseline(p)?)),
        SweepStrategy::Cf1 => {
            let q = quantizer_cf_order1(p, &PowerSplit::all_private(p))?.q;
            Ok(tin(tin_cf_rates(p, q)?))
        }
        SweepStrategy::Af => Ok(tin(af_rates(p)?)),
        SweepStrategy::Cf2 => {
            let split = etw_split(p);
            if relay_off {
                max_sum_vertex(&no_relay_hk_region(p, &split)?)
            } else {
                let q = quantizer_cf_order2(p, &split)?.q;
                max_sum_vertex(&cf_rates_order2(p, &split, q)?)
            }
        }
        SweepStrategy::Outer => max_sum_vertex(&outer_bound_region(p)?),
    }
}

/// One row per `(value, strategy)`, values ascending, strategies in the
/// order given. A strategy that cannot operate at a point reports NaN rates.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &v in &spec.values {
        let p = channel_at(spec, v);
        p.validate()
            .map_err(|e| CliError::Config(format!("{v}: {e}")))?;
        let base = tin_baseline(&p)?;
        for &s in &spec.strategies {
            let (r1, r2) = strategy_rates(&p, s).unwrap_or((f64::NAN, f64::NAN));
            rows.push(SweepRow {
                value: v,
                strategy: s.name(),
                r1,
                r2,
                sum_rate: r1 + r2,
                improvement_sum: r1 + r2 - base.sum(),
            });
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(r.value),
            r.strategy,
            num(r.r1),
            num(r.r2),
            num(r.sum_rate),
            num(r.improvement_sum)
        ));
    }
    out
}

pub fn audit(cfg: &AuditConfig, seed: u64) -> Result<AuditSummary, CliError> {
    let summary = match cfg.target_admissible {
        Some(target) => gap_audit_admissible(seed, target, cfg.max_draws, &cfg.regime)?,
        None => gap_audit(seed, cfg.count, &cfg.regime)?,
    };
    Ok(summary)
}

pub fn audit_csv(s: &AuditSummary) -> String {
    let mut out = String::from("lo,hi,count\n");
    for b in &s.histogram {
        out.push_str(&format!("{},{},{}\n", num(b.lo), num(b.hi), b.count));
    }
    out
}

pub const MAP_HEADER: &str = "alpha1,alpha2,rho,d_ghf,d_cf1,d_cf2,gain_per_bit,label";

pub fn gdof_map(cfg: &MapConfig) -> Result<Vec<MapRow>, CliError> {
    if cfg.n == 0 {
        return Err(CliError::Usage("grid size must be positive".into()));
    }
    let grid = linspace(cfg.alpha_min, cfg.alpha_max, cfg.n);
    let alphas = cfg.alphas.clone().unwrap_or_else(|| grid.clone());
    let rows = match cfg.mode {
        MapMode::Alpha => {
            let alpha2s = cfg.alpha2s.clone().unwrap_or_else(|| alphas.clone());
            alpha_map(&alphas, &alpha2s, cfg.rho)?
        }
        MapMode::Symmetric => {
            let rhos = cfg
                .rhos
                .clone()
                .unwrap_or_else(|| linspace(0.0, cfg.rho_max, cfg.n));
            symmetric_map(&alphas, &rhos)?
        }
    };
    Ok(rows)
}

pub fn map_csv(rows: &[MapRow]) -> String {
    let mut out = String::from(MAP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            num(r.alpha1),
            num(r.alpha2),
            num(r.rho),
            num(r.d_ghf),
            opt(r.d_cf1),
            opt(r.d_cf2),
            opt(r.gain_per_bit),
            r.label
        ));
    }
    out
}

pub fn det_verify(names: &[String]) -> Result<Vec<DetReport>, CliError> {
    names
        .iter()
        .map(|n| verify_fixture(n).map_err(CliError::from))
        .collect()
}

pub fn det_csv(reports: &[DetReport]) -> String {
    let mut out = String::from("fixture,claim,pass\n");
    for r in reports {
        for c in &r.claims {
            out.push_str(&format!("{},\"{}\",{}\n", r.fixture, c.description, c.pass));
        }
    }
    out
}
