//! Channel parameters, link budget, ETW power split and the relay-rate
//! admissibility threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real Gaussian interference channel with an out-of-band relay link.
///
/// `Y1 = h11 X1 + h21 X2 + Z1`, `Y2 = h12 X1 + h22 X2 + Z2`,
/// `Yr = g1 X1 + g2 X2 + Zr`; all noises have variance `N` and the relay
/// reaches both receivers over a noiseless link of `R0` bits per use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub h11: f64,
    pub h21: f64,
    pub h12: f64,
    pub h22: f64,
    pub g1: f64,
    pub g2: f64,
    #[serde(rename = "P1")]
    pub p1: f64,
    #[serde(rename = "P2")]
    pub p2: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
}

impl ChannelParams {
    /// Symmetric channel: direct gain `h`, cross gain `c`, relay gains `g1, g2`.
    pub fn symmetric(h: f64, c: f64, g1: f64, g2: f64, p: f64, n: f64, r0: f64) -> Self {
        ChannelParams {
            h11: h,
            h21: c,
            h12: c,
            h22: h,
            g1,
            g2,
            p1: p,
            p2: p,
            n,
            r0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gains = [self.h11, self.h21, self.h12, self.h22, self.g1, self.g2];
        if gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidParams("gains must be finite".into()));
        }
        if !(self.p1 > 0.0 && self.p1.is_finite() && self.p2 > 0.0 && self.p2.is_finite()) {
            return Err(Error::InvalidParams("powers must be positive".into()));
        }
        if !(self.n > 0.0 && self.n.is_finite()) {
            return Err(Error::InvalidParams(
                "noise variance must be positive".into(),
            ));
        }
        if !(self.r0 >= 0.0 && self.r0.is_finite()) {
            return Err(Error::InvalidParams("R0 must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn with_r0(mut self, r0: f64) -> Self {
        self.r0 = r0;
        self
    }

    pub fn with_noise(mut self, n: f64) -> Self {
        self.n = n;
        self
    }

    /// Sets `N` so that `h11² P1 / N` equals `10^(db/10)`.
    pub fn with_snr_db(self, db: f64) -> Self {
        let n = self.h11 * self.h11 * self.p1 / 10f64.powf(db / 10.0);
        self.with_noise(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkBudget {
    pub snr1: f64,
    pub snr2: f64,
    /// Interference seen at receiver 1 (from user 2).
    pub inr1: f64,
    /// Interference seen at receiver 2 (from user 1).
    pub inr2: f64,
    pub snr_r1: f64,
    pub snr_r2: f64,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
}

fn exponent(num: f64, snr: f64) -> Option<f64> {
    if snr <= 1.0 || num <= 0.0 {
        None
    } else {
        Some(num.log2() / snr.log2())
    }
}

pub fn link_budget(p: &ChannelParams) -> LinkBudget {
    let snr1 = p.p1 * p.h11 * p.h11 / p.n;
    let snr2 = p.p2 * p.h22 * p.h22 / p.n;
    let inr1 = p.p2 * p.h21 * p.h21 / p.n;
    let inr2 = p.p1 * p.h12 * p.h12 / p.n;
    let snr_r1 = p.p1 * p.g1 * p.g1 / p.n;
    let snr_r2 = p.p2 * p.g2 * p.g2 / p.n;
    LinkBudget {
        snr1,
        snr2,
        inr1,
        inr2,
        snr_r1,
        snr_r2,
        alpha1: exponent(inr1, snr1),
        alpha2: exponent(inr2, snr2),
        beta1: exponent(snr_r1, snr1),
        beta2: exponent(snr_r2, snr2),
    }
}

/// Common (`pw`) and private (`pv`) power of each user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub pv1: f64,
    pub pw1: f64,
    pub pv2: f64,
    pub pw2: f64,
}

impl PowerSplit {
    /// Everything private: treating interference as noise.
    pub fn all_private(p: &ChannelParams) -> Self {
        PowerSplit {
            pv1: p.p1,
            pw1: 0.0,
            pv2: p.p2,
            pw2: 0.0,
        }
    }

    /// Same split with user 1's common part folded into its private part.
    pub fn without_w1(self) -> Self {
        PowerSplit {
            pv1: self.pv1 + self.pw1,
            pw1: 0.0,
            ..self
        }
    }

    pub fn without_w2(self) -> Self {
        PowerSplit {
            pv2: self.pv2 + self.pw2,
            pw2: 0.0,
            ..self
        }
    }
}

fn private_power(total: f64, cross: f64, n: f64) -> f64 {
    if cross == 0.0 {
        total
    } else {
        total.min(n / (cross * cross))
    }
}

/// Private power received at the noise floor of the unintended receiver.
pub fn etw_split(p: &ChannelParams) -> PowerSplit {
    let pv1 = private_power(p.p1, p.h12, p.n);
    let pv2 = private_power(p.p2, p.h21, p.n);
    PowerSplit {
        pv1,
        pw1: (p.p1 - pv1).max(0.0),
        pv2,
        pw2: (p.p2 - pv2).max(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theta {
    pub theta1: f64,
    pub theta2: f64,
    pub theta: f64,
}

pub fn theta_params(p: &ChannelParams) -> Result<Theta> {
    if p.h11 == 0.0 || p.h22 == 0.0 {
        return Err(Error::DegenerateChannel);
    }
    let d = p.h11 * p.h22;
    let t1 = ((p.g1 * p.h21 - p.g2 * p.h11) / d).powi(2);
    let t2 = ((p.g2 * p.h12 - p.g1 * p.h22) / d).powi(2);
    Ok(Theta {
        theta1: t1,
        theta2: t2,
        theta: t1.min(t2),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct R0Admissibility {
    pub admissible: bool,
    pub max_r0: f64,
    pub bounds: [f64; 6],
}

/// Largest relay rate for which the relay gains stay within ½log 3 of R0.
///
/// Each bound is ½log₂ of a ratio built from θ, SNR² and the interference and
/// relay link strengths. With unequal direct links `SNR²` becomes `SNR1·SNR2`
/// and a lone `SNR` becomes `max(SNR1, SNR2)`.
pub fn r0_admissible(p: &ChannelParams) -> R0Admissibility {
    let lb = link_budget(p);
    let theta = theta_params(p).map(|t| t.theta).unwrap_or(0.0);
    let half = |x: f64| 0.5 * x.log2();
    let bounds = if theta > 0.0 {
        let s2 = lb.snr1 * lb.snr2;
        let smax = lb.snr1.max(lb.snr2);
        [
            half(theta * s2 / smax),
            half(theta * s2 / smax * lb.inr2 / lb.snr_r1),
            half(theta * s2 / smax * lb.inr1 / lb.snr_r2),
            half(theta * s2 / (lb.inr1 * lb.inr2)),
            half(theta * s2 / (lb.inr1 * lb.snr_r1)),
            half(theta * s2 / (lb.inr2 * lb.snr_r2)),
        ]
    } else {
        [f64::NEG_INFINITY; 6]
    };
    let max_r0 = bounds
        .iter()
        .copied()
        .filter(|b| !b.is_nan())
        .fold(f64::INFINITY, f64::min);
    let admissible = if p.r0 == 0.0 {
        max_r0 >= 0.0
    } else {
        p.r0 <= max_r0
    };
    R0Admissibility {
        admissible,
        max_r0,
        bounds,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig(g2: f64) -> ChannelParams {
        ChannelParams::symmetric(1.0, 0.5, 0.5, g2, 10.0, 1.0, 1.0)
    }

    #[test]
    fn budget_of_reference_channel() {
        let lb = link_budget(&fig(0.5));
        assert_eq!(lb.snr1, 10.0);
        assert_eq!(lb.inr1, 2.5);
        assert_eq!(lb.inr2, 2.5);
        assert!((lb.snr_r1 - 2.5).abs() < 1e-12);
        assert!((lb.beta1.unwrap() - 0.397_940_008_672_037_6).abs() < 1e-12);
    }

    #[test]
    fn exponents_absent_when_undefined() {
        let mut p = fig(0.5);
        p.h21 = 0.0;
        let lb = link_budget(&p);
        assert_eq!(lb.inr1, 0.0);
        assert!(lb.alpha1.is_none());
        assert!(link_budget(&p.with_noise(20.0)).alpha2.is_none());
    }

    #[test]
    fn etw_split_and_cap() {
        let s = etw_split(&fig(0.5));
        assert_eq!((s.pv1, s.pw1), (4.0, 6.0));
        let mut p = fig(0.5);
        p.h12 = 0.3;
        let s = etw_split(&p);
        assert_eq!((s.pv1, s.pw1), (10.0, 0.0));
        p.h21 = 0.0;
        assert_eq!(etw_split(&p).pv2, 10.0);
    }

    #[test]
    fn theta_examples() {
        let t = theta_params(&fig(0.1)).unwrap();
        assert!((t.theta1 - 0.0225).abs() < 1e-12);
        assert!((t.theta2 - 0.2025).abs() < 1e-12);
        assert_eq!(t.theta, t.theta1);
        let mut p = fig(0.5);
        p.g1 = 1.0;
        assert_eq!(theta_params(&p).unwrap().theta, 0.0);
        p.h11 = 0.0;
        assert_eq!(theta_params(&p), Err(Error::DegenerateChannel));
    }

    #[test]
    fn zero_theta_is_never_admissible() {
        let mut p = fig(0.5);
        p.g1 = 1.0;
        let a = r0_admissible(&p.with_r0(0.1));
        assert!(!a.admissible);
        assert_eq!(a.max_r0, f64::NEG_INFINITY);
    }

    #[test]
    fn threshold_matches_six_terms_for_equal_snr() {
        let p = ChannelParams::symmetric(30.0, 4.0, 7.0, -2.0, 1.0, 1.0, 0.5);
        let lb = link_budget(&p);
        let th = theta_params(&p).unwrap().theta;
        let s = lb.snr1;
        let l = |x: f64| x.log2();
        let expect = [
            l(s) + l(th),
            l(s) + l(lb.inr2 / lb.snr_r1) + l(th),
            l(s) + l(lb.inr1 / lb.snr_r2) + l(th),
            l(s / lb.inr1) + l(s / lb.inr2) + l(th),
            l(s / lb.inr1) + l(s / lb.snr_r1) + l(th),
            l(s / lb.inr2) + l(s / lb.snr_r2) + l(th),
        ];
        let a = r0_admissible(&p);
        for (b, e) in a.bounds.iter().zip(expect) {
            assert!((b - 0.5 * e).abs() < 1e-12);
        }
    }

    #[test]
    fn json_field_names() {
        let s = serde_json::to_string(&fig(0.5)).unwrap();
        for k in ["\"h11\"", "\"P1\"", "\"N\"", "\"R0\"", "\"g2\""] {
            assert!(s.contains(k));
        }
        let back: ChannelParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fig(0.5));
    }
}
