//! Randomized constant-gap audit of the HK+GHF region against the outer bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaussmi::{mi_term_set, MITermSet};
use crate::model::{etw_split, r0_admissible, ChannelParams};
use crate::regions::{constant_gap, outer_bound_region_with, region_from_terms, OuterVariant};
use crate::strategies::quantizer_ghf_weak;

/// `½ log₂ 15`, the worst-case gap of the weak-interference analysis.
pub fn gap_bound() -> f64 {
    0.5 * 15f64.log2()
}

/// `½ log₂ (5/2)`, the bound on each quantization loss.
pub fn quantization_loss_bound() -> f64 {
    0.5 * 2.5f64.log2()
}

/// `½ log₂ 3`, the worst shortfall of the relay gains below `R0`.
pub fn relay_shortfall_bound() -> f64 {
    0.5 * 3f64.log2()
}

/// Sampling ranges. Link strengths are drawn log-uniformly: SNR in
/// `[snr_min, snr_max]` shared by both users, then INR and relay SNR below it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegimeSpec {
    pub snr_min: f64,
    pub snr_max: f64,
    pub inr_min: f64,
    pub snr_r_min: f64,
    /// Align the relay with receiver 1 so that θ = 0 for every sample.
    pub degenerate_relay: bool,
    pub outer_variant: OuterVariant,
}

impl Default for RegimeSpec {
    fn default() -> Self {
        RegimeSpec {
            snr_min: 10.0,
            snr_max: 1e6,
            inr_min: 1.0,
            snr_r_min: 1.0,
            degenerate_relay: false,
            outer_variant: OuterVariant::Standard,
        }
    }
}

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return lo;
    }
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn sign<R: Rng>(rng: &mut R) -> f64 {
    if rng.gen_bool(0.5) {
        1.0
    } else {
        -1.0
    }
}

/// Draws a channel with unit powers and noise; `R0` is left at zero.
pub fn sample_channel<R: Rng>(rng: &mut R, spec: &RegimeSpec) -> ChannelParams {
    let snr = log_uniform(rng, spec.snr_min, spec.snr_max);
    let inr1 = log_uniform(rng, spec.inr_min, snr);
    let inr2 = log_uniform(rng, spec.inr_min, snr);
    let sr1 = log_uniform(rng, spec.snr_r_min, snr);
    let sr2 = log_uniform(rng, spec.snr_r_min, snr);
    let h = snr.sqrt();
    let h21 = sign(rng) * inr1.sqrt();
    let h12 = sign(rng) * inr2.sqrt();
    let g1 = sign(rng) * sr1.sqrt();
    let mut g2 = sign(rng) * sr2.sqrt();
    if spec.degenerate_relay {
        g2 = g1 * h21 / h;
    }
    ChannelParams {
        h11: h,
        h21,
        h12,
        h22: h,
        g1,
        g2,
        p1: 1.0,
        p2: 1.0,
        n: 1.0,
        r0: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub params: ChannelParams,
    pub max_r0: f64,
    pub delta: f64,
    pub contained: bool,
    pub terms: MITermSet,
}

/// Evaluates one admissible channel (with `R0` already set).
pub fn evaluate(p: &ChannelParams, variant: OuterVariant) -> Result<SampleOutcome> {
    let split = etw_split(p);
    let q = quantizer_ghf_weak(p, &split).q;
    let terms = mi_term_set(p, &split, q)?;
    let inner = region_from_terms(&terms);
    let outer = outer_bound_region_with(p, variant)?;
    let gap = constant_gap(&outer, &inner);
    Ok(SampleOutcome {
        params: *p,
        max_r0: r0_admissible(p).max_r0,
        delta: gap.delta,
        contained: gap.contained,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Gap,
    QuantizationLoss,
    RelayGain,
    Containment,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub value: f64,
    pub params: ChannelParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSummary {
    pub seed: u64,
    pub drawn: usize,
    pub admissible: usize,
    pub skipped: usize,
    pub gap_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_quantization_loss: Option<f64>,
    /// Smallest `min(Δe_i, Δg_i) − (R0 − ½log₂3)` over the samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_relay_margin: Option<f64>,
    pub violations: Vec<Violation>,
    pub histogram: Vec<HistogramBin>,
}

impl AuditSummary {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

const BIN_WIDTH: f64 = 0.1;
const BINS: usize = 20;

/// Draws `count` channels and checks every admissible one.
pub fn gap_audit(seed: u64, count: usize, spec: &RegimeSpec) -> Result<AuditSummary> {
    run(seed, spec, |s| s.drawn >= count)
}

/// Keeps drawing until `target` admissible channels were checked, giving up
/// after `max_draws` channels.
pub fn gap_audit_admissible(
    seed: u64,
    target: usize,
    max_draws: usize,
    spec: &RegimeSpec,
) -> Result<AuditSummary> {
    run(seed, spec, |s| {
        s.admissible >= target || s.drawn >= max_draws
    })
}

fn run(seed: u64, spec: &RegimeSpec, done: impl Fn(&AuditSummary) -> bool) -> Result<AuditSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = AuditSummary {
        seed,
        drawn: 0,
        admissible: 0,
        skipped: 0,
        gap_bound: gap_bound(),
        max_delta: None,
        max_quantization_loss: None,
        min_relay_margin: None,
        violations: Vec::new(),
        histogram: (0..BINS)
            .map(|i| HistogramBin {
                lo: i as f64 * BIN_WIDTH,
                hi: (i + 1) as f64 * BIN_WIDTH,
                count: 0,
            })
            .collect(),
    };
    let fmax = |acc: Option<f64>, x: f64| Some(acc.map_or(x, |a: f64| a.max(x)));
    let fmin = |acc: Option<f64>, x: f64| Some(acc.map_or(x, |a: f64| a.min(x)));
    while !done(&summary) {
        summary.drawn += 1;
        let base = sample_channel(&mut rng, spec);
        let u: f64 = rng.gen();
        let max_r0 = r0_admissible(&base).max_r0;
        if !(max_r0 > 0.0) || !max_r0.is_finite() {
            summary.skipped += 1;
            continue;
        }
        let p = base.with_r0((1.0 - u) * max_r0);
        let out = evaluate(&p, spec.outer_variant)?;
        summary.admissible += 1;

        let t = &out.terms;
        let loss = t.delta1.max(t.delta2);
        let gain = t.de1.min(t.de2).min(t.dg1).min(t.dg2);
        let margin = gain - (p.r0 - relay_shortfall_bound());
        summary.max_delta = fmax(summary.max_delta, out.delta);
        summary.max_quantization_loss = fmax(summary.max_quantization_loss, loss);
        summary.min_relay_margin = fmin(summary.min_relay_margin, margin);

        let bin = ((out.delta / BIN_WIDTH).floor().max(0.0) as usize).min(BINS - 1);
        summary.histogram[bin].count += 1;

        let mut flag = |kind, value| {
            summary.violations.push(Violation {
                kind,
                value,
                params: p,
            })
        };
        if out.delta > gap_bound() + 1e-6 {
            flag(ViolationKind::Gap, out.delta);
        }
        if loss > quantization_loss_bound() + 1e-9 {
            flag(ViolationKind::QuantizationLoss, loss);
        }
        if margin < -1e-9 {
            flag(ViolationKind::RelayGain, margin);
        }
        if !out.contained {
            flag(ViolationKind::Containment, out.delta);
        }
    }
    Ok(summary)
}
