//! Sum-rate GDoF formulas, regime maps and finite-SNR slope checks.
//!
//! GDoF values are in units of `½ log₂ SNR`; cross links scale as `SNR^α`
//! and the relay link carries `R0 = ½ ρ log₂ SNR` bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{etw_split, ChannelParams};
use crate::regions::{cf_rates_order2, cf_region_order1, hk_ghf_region, no_relay_hk_region};
use crate::strategies::{quantizer_cf_order1, quantizer_cf_order2, quantizer_ghf_weak};

/// Width of the band around a regime boundary labelled [`Regime::Boundary`].
pub const BOUNDARY_TOL: f64 = 1e-12;

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn check_alpha(a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "alpha = {a} must lie in (0, 1)"
        )))
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!(
            "rho = {rho} must be nonnegative"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GdofPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    pub rho: f64,
    pub d: f64,
}

/// HK+GHF sum GDoF for weak interference with a strong relay observation.
pub fn ghf_sum_gdof(alpha1: f64, alpha2: f64, rho: f64) -> Result<f64> {
    check_alpha(alpha1)?;
    check_alpha(alpha2)?;
    check_rho(rho)?;
    let m = rho.min(alpha1).min(alpha2);
    let shared = rho
        .min(alpha1)
        .min(alpha2)
        .min(1.0 - alpha1)
        .min(1.0 - alpha2);
    let c1 = (2.0 - alpha1) + m;
    let c2 = (2.0 - alpha2) + m;
    let c3 = (alpha1 + alpha2).max(2.0 - alpha1 - alpha2) + 2.0 * shared;
    Ok(c1.min(c2).min(c3))
}

pub fn no_relay_sum_gdof(alpha1: f64, alpha2: f64) -> Result<f64> {
    ghf_sum_gdof(alpha1, alpha2, 0.0)
}

pub fn ghf_sym_sum_gdof(alpha: f64, rho: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_rho(rho)?;
    let a = (2.0 - alpha) + rho.min(alpha);
    let b = 2.0 * alpha.max(1.0 - alpha) + 2.0 * rho.min(alpha).min(1.0 - alpha);
    Ok(a.min(b))
}

/// CF decoding the relay quantization first.
pub fn cf_order1_sym_sum_gdof(alpha: f64, rho: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_rho(rho)?;
    let a = (2.0 - alpha) + rho.min(alpha);
    let b = 2.0 * alpha.max(1.0 - alpha) + 2.0 * pos(rho + 1.0 - (2.0 * alpha).max(1.0))
        - 2.0 * pos(rho - alpha);
    Ok(a.min(b))
}

/// CF decoding the own common message before the relay quantization.
pub fn cf_order2_sym_sum_gdof(alpha: f64, rho: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_rho(rho)?;
    let a = 4.0 * (1.0 - alpha);
    let b = 2.0 * alpha.max(1.0 - alpha) + 2.0 * rho - 2.0 * pos(rho - alpha.min(1.0 - alpha));
    Ok(a.min(b))
}

/// Largest ρ for which the relay gains stay within a constant of `R0`.
pub fn rho_limit(alpha1: f64, alpha2: f64) -> Result<f64> {
    check_alpha(alpha1)?;
    check_alpha(alpha2)?;
    Ok(alpha1.min(alpha2).min(1.0 - alpha1).min(1.0 - alpha2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Each relayed bit adds two bits of sum rate.
    GainTwo,
    GainOne,
    Boundary,
    /// Outside the open unit square.
    Outside,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::GainTwo => "gain-2",
            Regime::GainOne => "gain-1",
            Regime::Boundary => "boundary",
            Regime::Outside => "outside",
        }
    }
}

pub fn classify(alpha1: f64, alpha2: f64) -> Regime {
    if !(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0) {
        return Regime::Outside;
    }
    let m = (alpha1 + 2.0 * alpha2).max(2.0 * alpha1 + alpha2) - 2.0;
    if m < -BOUNDARY_TOL {
        Regime::GainTwo
    } else if m > BOUNDARY_TOL {
        Regime::GainOne
    } else {
        Regime::Boundary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCell {
    pub alpha1: f64,
    pub alpha2: f64,
    pub regime: Regime,
}

/// Row-major classification: `alpha1` is the outer loop.
pub fn regime_map(alpha1s: &[f64], alpha2s: &[f64]) -> Vec<RegimeCell> {
    alpha1s
        .iter()
        .flat_map(|&a1| {
            alpha2s.iter().map(move |&a2| RegimeCell {
                alpha1: a1,
                alpha2: a2,
                regime: classify(a1, a2),
            })
        })
        .collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapRow {
    pub alpha1: f64,
    pub alpha2: f64,
    pub rho: f64,
    pub d_ghf: f64,
    /// CF values exist only on the symmetric diagonal.
    pub d_cf1: Option<f64>,
    pub d_cf2: Option<f64>,
    /// `(d(ρ) − d(0)) / ρ` for GHF; absent at ρ = 0.
    pub gain_per_bit: Option<f64>,
    pub label: &'static str,
}

pub fn map_row(alpha1: f64, alpha2: f64, rho: f64) -> Result<MapRow> {
    let d = ghf_sum_gdof(alpha1, alpha2, rho)?;
    let sym = alpha1 == alpha2;
    Ok(MapRow {
        alpha1,
        alpha2,
        rho,
        d_ghf: d,
        d_cf1: if sym {
            Some(cf_order1_sym_sum_gdof(alpha1, rho)?)
        } else {
            None
        },
        d_cf2: if sym {
            Some(cf_order2_sym_sum_gdof(alpha1, rho)?)
        } else {
            None
        },
        gain_per_bit: if rho > 0.0 {
            Some((d - no_relay_sum_gdof(alpha1, alpha2)?) / rho)
        } else {
            None
        },
        label: classify(alpha1, alpha2).label(),
    })
}

/// Map over `(alpha1, alpha2)` at fixed ρ, row-major in `alpha1`.
pub fn alpha_map(alpha1s: &[f64], alpha2s: &[f64], rho: f64) -> Result<Vec<MapRow>> {
    let mut rows = Vec::new();
    for &a1 in alpha1s {
        for &a2 in alpha2s {
            rows.push(map_row(a1, a2, rho)?);
        }
    }
    Ok(rows)
}

/// Map over symmetric `(alpha, rho)`, row-major in `alpha`.
pub fn symmetric_map(alphas: &[f64], rhos: &[f64]) -> Result<Vec<MapRow>> {
    let mut rows = Vec::new();
    for &a in alphas {
        for &r in rhos {
            rows.push(map_row(a, a, r)?);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Ghf,
    CfOrder1,
    CfOrder2,
    NoRelay,
}

impl Strategy {
    /// Predicted symmetric sum GDoF.
    pub fn predicted(self, alpha: f64, rho: f64) -> Result<f64> {
        match self {
            Strategy::Ghf => ghf_sym_sum_gdof(alpha, rho),
            Strategy::CfOrder1 => cf_order1_sym_sum_gdof(alpha, rho),
            Strategy::CfOrder2 => cf_order2_sym_sum_gdof(alpha, rho),
            Strategy::NoRelay => ghf_sym_sum_gdof(alpha, 0.0),
        }
    }
}

/// Channel at `SNR = h11² P1 / N` whose cross links satisfy `INR_i = SNR^α`.
/// Direct and relay gains and powers come from `template`.
pub fn scaled_channel(template: &ChannelParams, alpha: f64, rho: f64, snr: f64) -> ChannelParams {
    let t = template;
    let n = t.h11 * t.h11 * t.p1 / snr;
    let inr = snr.powf(alpha);
    let sgn = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
    ChannelParams {
        h21: sgn(t.h21) * (inr * n / t.p2).sqrt(),
        h12: sgn(t.h12) * (inr * n / t.p1).sqrt(),
        n,
        r0: 0.5 * rho * snr.log2(),
        ..*t
    }
}

/// Finite-SNR sum rate of `strategy` with the ETW split.
pub fn finite_sum_rate(p: &ChannelParams, strategy: Strategy) -> Result<f64> {
    let split = etw_split(p);
    let region = match strategy {
        Strategy::Ghf => hk_ghf_region(p, &split, quantizer_ghf_weak(p, &split).q)?,
        Strategy::NoRelay => no_relay_hk_region(p, &split)?,
        Strategy::CfOrder1 => cf_region_order1(p, &split, quantizer_cf_order1(p, &split)?.q)?,
        Strategy::CfOrder2 => cf_rates_order2(p, &split, quantizer_cf_order2(p, &split)?.q)?,
    };
    region.sum_rate()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeCheck {
    pub empirical: f64,
    pub predicted: f64,
    pub pass: bool,
}

/// Tolerance of [`gdof_slope_check`].
pub const SLOPE_TOL: f64 = 0.05;

fn slope(
    template: &ChannelParams,
    alpha: f64,
    rho: f64,
    snrs: &[f64],
    f: impl Fn(&ChannelParams) -> Result<f64>,
) -> Result<f64> {
    if snrs.len() < 2 || snrs.windows(2).any(|w| w[0] >= w[1]) || snrs[0] < 1e6 {
        return Err(Error::DomainError(
            "SNR list must be ascending with at least two entries, all >= 1e6".into(),
        ));
    }
    let (lo, hi) = (snrs[0], snrs[snrs.len() - 1]);
    let r_lo = f(&scaled_channel(template, alpha, rho, lo))?;
    let r_hi = f(&scaled_channel(template, alpha, rho, hi))?;
    Ok((r_hi - r_lo) / (0.5 * (hi.log2() - lo.log2())))
}

/// Slope of the finite-SNR sum rate against `½ log₂ SNR`.
pub fn gdof_slope_check(
    template: &ChannelParams,
    alpha: f64,
    rho: f64,
    snrs: &[f64],
    strategy: Strategy,
) -> Result<SlopeCheck> {
    let predicted = strategy.predicted(alpha, rho)?;
    let empirical = slope(template, alpha, rho, snrs, |p| finite_sum_rate(p, strategy))?;
    Ok(SlopeCheck {
        empirical,
        predicted,
        pass: (empirical - predicted).abs() <= SLOPE_TOL,
    })
}

/// Slope of the sum-rate gain of `strategy` over the no-relay HK scheme,
/// checked with tolerance `tol`.
pub fn gdof_gain_slope_check(
    template: &ChannelParams,
    alpha: f64,
    rho: f64,
    snrs: &[f64],
    strategy: Strategy,
    tol: f64,
) -> Result<SlopeCheck> {
    let predicted = strategy.predicted(alpha, rho)? - Strategy::NoRelay.predicted(alpha, rho)?;
    let empirical = slope(template, alpha, rho, snrs, |p| {
        Ok(finite_sum_rate(p, strategy)? - finite_sum_rate(p, Strategy::NoRelay)?)
    })?;
    Ok(SlopeCheck {
        empirical,
        predicted,
        pass: (empirical - predicted).abs() <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        assert_eq!(ghf_sym_sum_gdof(0.5, 0.0).unwrap(), 1.0);
        assert!((ghf_sym_sum_gdof(0.4, 0.3).unwrap() - 1.8).abs() < 1e-12);
        assert_eq!(
            cf_order1_sym_sum_gdof(0.6, 0.1).unwrap(),
            ghf_sym_sum_gdof(0.6, 0.0).unwrap()
        );
        assert!(
            cf_order2_sym_sum_gdof(0.55, 0.2).unwrap() > cf_order1_sym_sum_gdof(0.55, 0.2).unwrap()
        );
        assert!(
            ghf_sym_sum_gdof(2.0 / 3.0, 1.0 / 3.0).unwrap()
                > cf_order1_sym_sum_gdof(2.0 / 3.0, 1.0 / 3.0)
                    .unwrap()
                    .max(cf_order2_sym_sum_gdof(2.0 / 3.0, 1.0 / 3.0).unwrap())
        );
        assert!(cf_order2_sym_sum_gdof(1.0 - 1e-9, 0.3).unwrap() < 1e-8);
        assert!(matches!(
            ghf_sum_gdof(1.0, 0.5, 0.1),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            ghf_sym_sum_gdof(0.5, -0.1),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn per_bit_gains() {
        let d0 = ghf_sum_gdof(0.4, 0.4, 0.0).unwrap();
        assert!(((ghf_sum_gdof(0.4, 0.4, 0.1).unwrap() - d0) / 0.1 - 2.0).abs() < 1e-12);
        let d0 = ghf_sum_gdof(0.9, 0.9, 0.0).unwrap();
        assert!(((ghf_sum_gdof(0.9, 0.9, 0.05).unwrap() - d0) / 0.05 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho_limits() {
        assert_eq!(rho_limit(0.5, 0.5).unwrap(), 0.5);
        assert!((rho_limit(0.2, 0.9).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn regimes() {
        assert_eq!(classify(0.3, 0.3), Regime::GainTwo);
        assert_eq!(classify(0.9, 0.9), Regime::GainOne);
        assert_eq!(classify(2.0 / 3.0, 2.0 / 3.0), Regime::Boundary);
        assert_eq!(classify(0.0, 0.5), Regime::Outside);
        assert_eq!(regime_map(&[0.1, 0.2], &[0.3, 0.4, 0.5]).len(), 6);
    }

    #[test]
    fn map_rows() {
        let r = map_row(0.5, 0.5, 0.25).unwrap();
        assert!((r.gain_per_bit.unwrap() - 2.0).abs() < 1e-12);
        let r = map_row(0.65, 0.65, 0.3).unwrap();
        assert!(r.d_ghf > r.d_cf1.unwrap().max(r.d_cf2.unwrap()));
        let r = map_row(0.3, 0.6, 0.0).unwrap();
        assert!(r.d_cf1.is_none() && r.gain_per_bit.is_none());
        assert_eq!(
            symmetric_map(&linspace(0.2, 0.8, 3), &linspace(0.1, 0.3, 3))
                .unwrap()
                .len(),
            9
        );
    }

    #[test]
    fn scaled_channel_hits_targets() {
        let t = ChannelParams::symmetric(1.0, 0.5, 0.9, 0.9, 1.0, 1.0, 0.0);
        let p = scaled_channel(&t, 0.4, 0.3, 1e10);
        let lb = crate::model::link_budget(&p);
        assert!((lb.snr1 - 1e10).abs() < 1e-3);
        assert!((lb.alpha1.unwrap() - 0.4).abs() < 1e-12);
        assert!((p.r0 - 0.15 * 1e10f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn slope_check_rejects_bad_lists() {
        let t = ChannelParams::symmetric(1.0, 0.5, 0.9, 0.9, 1.0, 1.0, 0.0);
        assert!(gdof_slope_check(&t, 0.4, 0.3, &[1e8], Strategy::Ghf).is_err());
        assert!(gdof_slope_check(&t, 0.4, 0.3, &[1e12, 1e8], Strategy::Ghf).is_err());
    }
}
