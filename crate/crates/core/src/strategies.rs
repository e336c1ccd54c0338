//! Relay quantizers and the single-relay rate evaluators that treat
//! interference as noise: GHF, CF and AF.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussmi::{build_model, obs::*, GaussianModel};
use crate::model::{ChannelParams, PowerSplit};

/// Tolerance on the Wyner-Ziv rate constraints, in bits.
pub const WZ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantizerKind {
    /// `max{N, g1² pv1, g2² pv2}`: quantize just above the private signals.
    GhfWeak,
    /// Wyner-Ziv quantizer decodable at both receivers from `Y_i`.
    CfOrder1,
    /// Wyner-Ziv quantizer decodable at both receivers from `(Y_i, W_i)`.
    CfOrder2,
    /// Smaller of the two `Y_i`-conditioned Wyner-Ziv quantizers.
    MinOrder1,
    /// Smaller of the two `(Y_i, W_i)`-conditioned Wyner-Ziv quantizers.
    MinOrder2,
    /// High-SNR limit `min(a, b) / (2^{2R0} − 1)`.
    GhfTinMin,
    /// High-SNR limit `max(a, b) / (2^{2R0} − 1)`.
    CfTinMax,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerChoice {
    pub kind: QuantizerKind,
    pub q: f64,
}

impl QuantizerChoice {
    pub fn explicit(q: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::InvalidParams(format!(
                "quantizer variance {q} must be positive"
            )));
        }
        Ok(QuantizerChoice {
            kind: QuantizerKind::Explicit,
            q,
        })
    }
}

pub fn quantizer_ghf_weak(p: &ChannelParams, split: &PowerSplit) -> QuantizerChoice {
    let q =
        p.n.max(p.g1 * p.g1 * split.pv1)
            .max(p.g2 * p.g2 * split.pv2);
    QuantizerChoice {
        kind: QuantizerKind::GhfWeak,
        q,
    }
}

fn rate_scale(r0: f64) -> Result<f64> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidR0);
    }
    Ok((2f64).powf(2.0 * r0) - 1.0)
}

/// `var(Yr | Y1 ∪ extra1)` and `var(Yr | Y2 ∪ extra2)`.
fn relay_residuals(p: &ChannelParams, split: &PowerSplit, common: bool) -> Result<(f64, f64)> {
    let m = build_model(p, split, 1.0, None);
    let (c1, c2): (Vec<&str>, Vec<&str>) = if common {
        (vec![Y1, W1], vec![Y2, W2])
    } else {
        (vec![Y1], vec![Y2])
    };
    Ok((
        m.conditional_variance(YR, &c1)?,
        m.conditional_variance(YR, &c2)?,
    ))
}

pub fn quantizer_cf_order1(p: &ChannelParams, split: &PowerSplit) -> Result<QuantizerChoice> {
    let s = rate_scale(p.r0)?;
    let (v1, v2) = relay_residuals(p, split, false)?;
    Ok(QuantizerChoice {
        kind: QuantizerKind::CfOrder1,
        q: v1.max(v2) / s,
    })
}

pub fn quantizer_cf_order2(p: &ChannelParams, split: &PowerSplit) -> Result<QuantizerChoice> {
    let s = rate_scale(p.r0)?;
    let (v1, v2) = relay_residuals(p, split, true)?;
    Ok(QuantizerChoice {
        kind: QuantizerKind::CfOrder2,
        q: v1.max(v2) / s,
    })
}

/// The four min/max quantizers over both conditioning choices, in the order
/// order-2 max, order-2 min, order-1 max, order-1 min.
pub fn candidate_quantizers(p: &ChannelParams, split: &PowerSplit) -> Result<[QuantizerChoice; 4]> {
    let s = rate_scale(p.r0)?;
    let (c1, c2) = relay_residuals(p, split, true)?;
    let (u1, u2) = relay_residuals(p, split, false)?;
    let mk = |kind, q: f64| QuantizerChoice { kind, q: q / s };
    Ok([
        mk(QuantizerKind::CfOrder2, c1.max(c2)),
        mk(QuantizerKind::MinOrder2, c1.min(c2)),
        mk(QuantizerKind::CfOrder1, u1.max(u2)),
        mk(QuantizerKind::MinOrder1, u1.min(u2)),
    ])
}

/// Noise-free residual variances `(a, b)` of `Yr` given `Y1` and given `Y2`.
pub fn asymptotic_ab(p: &ChannelParams) -> (f64, f64) {
    let pp = p.p1 * p.p2;
    let a =
        (p.g1 * p.h21 - p.g2 * p.h11).powi(2) * pp / (p.h11 * p.h11 * p.p1 + p.h21 * p.h21 * p.p2);
    let b =
        (p.g1 * p.h22 - p.g2 * p.h12).powi(2) * pp / (p.h12 * p.h12 * p.p1 + p.h22 * p.h22 * p.p2);
    (a, b)
}

pub fn quantizer_ghf_tin_min(p: &ChannelParams) -> Result<QuantizerChoice> {
    let s = rate_scale(p.r0)?;
    let (a, b) = asymptotic_ab(p);
    Ok(QuantizerChoice {
        kind: QuantizerKind::GhfTinMin,
        q: a.min(b) / s,
    })
}

/// Finite-noise counterpart of [`quantizer_ghf_tin_min`]: the smaller of the
/// relay residual variances given `Y1` and given `Y2`, all power private.
pub fn quantizer_ghf_tin(p: &ChannelParams) -> Result<QuantizerChoice> {
    let s = rate_scale(p.r0)?;
    let (v1, v2) = relay_residuals(p, &PowerSplit::all_private(p), false)?;
    Ok(QuantizerChoice {
        kind: QuantizerKind::MinOrder1,
        q: v1.min(v2) / s,
    })
}

pub fn quantizer_cf_tin_max(p: &ChannelParams) -> Result<QuantizerChoice> {
    let s = rate_scale(p.r0)?;
    let (a, b) = asymptotic_ab(p);
    Ok(QuantizerChoice {
        kind: QuantizerKind::CfTinMax,
        q: a.max(b) / s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TinRates {
    pub r1: f64,
    pub r2: f64,
    pub r1_baseline: f64,
    pub r2_baseline: f64,
    pub improvement1: f64,
    pub improvement2: f64,
}

impl TinRates {
    fn new(r1: f64, r2: f64, r1_baseline: f64, r2_baseline: f64) -> Self {
        TinRates {
            r1,
            r2,
            r1_baseline,
            r2_baseline,
            improvement1: r1 - r1_baseline,
            improvement2: r2 - r2_baseline,
        }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }

    pub fn improvement_sum(&self) -> f64 {
        self.improvement1 + self.improvement2
    }
}

fn tin_model(p: &ChannelParams, q: f64) -> Result<GaussianModel> {
    if !(q > 0.0) {
        return Err(Error::InvalidParams(format!(
            "quantizer variance {q} must be positive"
        )));
    }
    Ok(build_model(p, &PowerSplit::all_private(p), q, None))
}

fn baselines(m: &GaussianModel) -> Result<(f64, f64)> {
    Ok((
        m.conditional_mi(&[X1], &[Y1], &[])?,
        m.conditional_mi(&[X2], &[Y2], &[])?,
    ))
}

/// No-relay rates with interference treated as noise.
pub fn tin_baseline(p: &ChannelParams) -> Result<TinRates> {
    let m = build_model(p, &PowerSplit::all_private(p), 1.0, None);
    let (b1, b2) = baselines(&m)?;
    Ok(TinRates::new(b1, b2, b1, b2))
}

pub fn tin_ghf_rates(p: &ChannelParams, q: f64) -> Result<TinRates> {
    let m = tin_model(p, q)?;
    let (b1, b2) = baselines(&m)?;
    let rate = |x: &str, y: &str, base: f64| -> Result<f64> {
        let gain = p.r0.min(m.conditional_mi(&[YHAT], &[YR], &[y])?);
        let loss = p.r0.min(m.conditional_mi(&[YHAT], &[YR], &[x, y])?);
        Ok(base + gain - loss)
    };
    Ok(TinRates::new(rate(X1, Y1, b1)?, rate(X2, Y2, b2)?, b1, b2))
}

/// GHF at the better (by sum rate) of the min-form and max-form TIN
/// quantizers. At the max form GHF reproduces CF, so this never falls below
/// [`tin_cf_rates`] with [`quantizer_cf_order1`].
pub fn tin_ghf_best(p: &ChannelParams) -> Result<TinRates> {
    let lo = tin_ghf_rates(p, quantizer_ghf_tin(p)?.q)?;
    let hi = tin_ghf_rates(p, quantizer_cf_order1(p, &PowerSplit::all_private(p))?.q)?;
    Ok(if hi.sum() > lo.sum() { hi } else { lo })
}

fn wyner_ziv_check(m: &GaussianModel, r0: f64, sides: [&[&str]; 2]) -> Result<()> {
    let mut required: f64 = 0.0;
    for side in sides {
        required = required.max(m.conditional_mi(&[YHAT], &[YR], side)?);
    }
    if r0 < required - WZ_TOL {
        return Err(Error::WynerZivInfeasible { required, r0 });
    }
    Ok(())
}

pub fn tin_cf_rates(p: &ChannelParams, q: f64) -> Result<TinRates> {
    let m = tin_model(p, q)?;
    wyner_ziv_check(&m, p.r0, [&[Y1], &[Y2]])?;
    let (b1, b2) = baselines(&m)?;
    let r1 = m.conditional_mi(&[X1], &[Y1, YHAT], &[])?;
    let r2 = m.conditional_mi(&[X2], &[Y2, YHAT], &[])?;
    Ok(TinRates::new(r1, r2, b1, b2))
}

/// `|I(Ŷr;Yr|Y1) − I(Ŷr;Yr|Y2)|` at quantizer `q`.
pub fn r_delta(p: &ChannelParams, q: f64) -> Result<f64> {
    let m = tin_model(p, q)?;
    let i1 = m.conditional_mi(&[YHAT], &[YR], &[Y1])?;
    let i2 = m.conditional_mi(&[YHAT], &[YR], &[Y2])?;
    Ok((i1 - i2).abs())
}

/// Relay amplifies `Yr` onto an analog link of capacity `R0`.
pub fn af_rates(p: &ChannelParams) -> Result<TinRates> {
    let power = (2f64).powf(2.0 * p.r0) - 1.0;
    let lambda = (power / (p.g1 * p.g1 * p.p1 + p.g2 * p.g2 * p.p2 + p.n)).sqrt();
    let m = build_model(p, &PowerSplit::all_private(p), 1.0, Some(lambda));
    let (b1, b2) = baselines(&m)?;
    let r1 = m.conditional_mi(&[X1], &[Y1, YAF1], &[])?;
    let r2 = m.conditional_mi(&[X2], &[Y2, YAF2], &[])?;
    Ok(TinRates::new(r1, r2, b1, b2))
}
