//! Linear-Gaussian mutual information.
//!
//! Every observable is a linear combination of independent Gaussian latents.
//! Quantities are evaluated in square-root form: an observable is the vector
//! of its coefficients scaled by the latent standard deviations, so that
//! covariances are inner products and conditioning is orthogonal projection.
//! `½ log det Σ(A|C)` is then a sum of log residual norms, which avoids the
//! cancellation of determinant ratios when `N` is tiny.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ChannelParams, PowerSplit};

/// Names of the observables created by [`build_model`].
pub mod obs {
    pub const X1: &str = "X1";
    pub const X2: &str = "X2";
    pub const W1: &str = "W1";
    pub const W2: &str = "W2";
    pub const V1: &str = "V1";
    pub const V2: &str = "V2";
    pub const Y1: &str = "Y1";
    pub const Y2: &str = "Y2";
    pub const YR: &str = "Yr";
    pub const YHAT: &str = "Yhat";
    pub const YAF1: &str = "YrAF1";
    pub const YAF2: &str = "YrAF2";
}

/// Residual norms below this fraction of the original norm count as zero.
const DEP_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatentSource {
    pub name: String,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Observable {
    pub name: String,
    /// Dense weights, one per latent in declaration order.
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GaussianModel {
    pub latents: Vec<LatentSource>,
    pub observables: Vec<Observable>,
}

impl GaussianModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_latent(&mut self, name: &str, variance: f64) -> Result<()> {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "latent `{name}` has invalid variance {variance}"
            )));
        }
        if self.latents.iter().any(|l| l.name == name) {
            return Err(Error::InvalidParams(format!("duplicate latent `{name}`")));
        }
        self.latents.push(LatentSource {
            name: name.to_string(),
            variance,
        });
        for o in &mut self.observables {
            o.coefficients.push(0.0);
        }
        Ok(())
    }

    pub fn add_observable(&mut self, name: &str, terms: &[(&str, f64)]) -> Result<()> {
        if self.observables.iter().any(|o| o.name == name) {
            return Err(Error::InvalidParams(format!(
                "duplicate observable `{name}`"
            )));
        }
        let mut coefficients = vec![0.0; self.latents.len()];
        for &(latent, w) in terms {
            let k = self
                .latents
                .iter()
                .position(|l| l.name == latent)
                .ok_or_else(|| Error::UnknownObservable(latent.to_string()))?;
            coefficients[k] += w;
        }
        self.observables.push(Observable {
            name: name.to_string(),
            coefficients,
        });
        Ok(())
    }

    fn index(&self, name: &str) -> Result<usize> {
        self.observables
            .iter()
            .position(|o| o.name == name)
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))
    }

    fn row(&self, name: &str) -> Result<Vec<f64>> {
        let o = &self.observables[self.index(name)?];
        Ok(o.coefficients
            .iter()
            .zip(&self.latents)
            .map(|(c, l)| c * l.variance.sqrt())
            .collect())
    }

    pub fn covariance(&self, a: &str, b: &str) -> Result<f64> {
        Ok(dot(&self.row(a)?, &self.row(b)?))
    }

    pub fn covariance_matrix(&self, names: &[&str]) -> Result<Vec<Vec<f64>>> {
        let rows = names
            .iter()
            .map(|n| self.row(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(rows
            .iter()
            .map(|r| rows.iter().map(|s| dot(r, s)).collect())
            .collect())
    }

    /// Full observable covariance as CSV, header row first.
    pub fn covariance_csv(&self) -> String {
        let names: Vec<&str> = self.observables.iter().map(|o| o.name.as_str()).collect();
        let m = self.covariance_matrix(&names).expect("own observables");
        let mut out = format!("name,{}\n", names.join(","));
        for (n, row) in names.iter().zip(m) {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&format!("{n},{}\n", cells.join(",")));
        }
        out
    }

    fn basis(&self, names: &[&str]) -> Result<Basis> {
        let mut basis = Basis::default();
        for n in names {
            basis.absorb(&self.row(n)?);
        }
        Ok(basis)
    }

    /// Variance of `target` given the observables in `given`.
    pub fn conditional_variance(&self, target: &str, given: &[&str]) -> Result<f64> {
        if given.contains(&target) {
            return Ok(0.0);
        }
        let basis = self.basis(given)?;
        let r = basis.residual(&self.row(target)?);
        Ok(dot(&r, &r))
    }

    /// `I(A;B|C)` in bits.
    pub fn conditional_mi(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidSets);
        }
        let overlaps = |x: &[&str], y: &[&str]| x.iter().any(|n| y.contains(n));
        if overlaps(a, b) || overlaps(a, c) || overlaps(b, c) {
            return Err(Error::InvalidSets);
        }
        let rows_a = a.iter().map(|n| self.row(n)).collect::<Result<Vec<_>>>()?;
        for n in b {
            self.index(n)?;
        }

        // h(A|C): keep only the directions of A not already fixed by C.
        let mut given_c = self.basis(c)?;
        let mut kept = Vec::new();
        let mut log_c = 0.0;
        for r in &rows_a {
            let norm0 = dot(r, r).sqrt();
            let res = given_c.residual(r);
            let norm = dot(&res, &res).sqrt();
            if norm0 == 0.0 || norm <= DEP_TOL * norm0 {
                continue;
            }
            log_c += norm.ln();
            given_c.push_residual(res, norm);
            kept.push(r);
        }
        if kept.is_empty() {
            return Ok(0.0);
        }

        let mut given_bc = self.basis(&[c, b].concat())?;
        let mut log_bc = 0.0;
        for r in kept {
            let norm0 = dot(r, r).sqrt();
            let res = given_bc.residual(r);
            let norm = dot(&res, &res).sqrt();
            if norm <= DEP_TOL * norm0 {
                return Err(Error::SingularModel(format!(
                    "I({};{}|{}) is unbounded",
                    a.join(","),
                    b.join(","),
                    c.join(",")
                )));
            }
            log_bc += norm.ln();
            given_bc.push_residual(res, norm);
        }
        let bits = (log_c - log_bc) / std::f64::consts::LN_2;
        if bits < -1e-9 {
            return Err(Error::SingularModel(format!(
                "negative mutual information {bits}"
            )));
        }
        Ok(bits.max(0.0))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis grown by Gram-Schmidt with one reorthogonalization pass.
#[derive(Default)]
struct Basis {
    q: Vec<Vec<f64>>,
}

impl Basis {
    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.q {
                let c = dot(&r, q);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        r
    }

    fn push_residual(&mut self, res: Vec<f64>, norm: f64) {
        self.q.push(res.into_iter().map(|x| x / norm).collect());
    }

    fn absorb(&mut self, v: &[f64]) {
        let norm0 = dot(v, v).sqrt();
        if norm0 == 0.0 {
            return;
        }
        let res = self.residual(v);
        let norm = dot(&res, &res).sqrt();
        if norm > DEP_TOL * norm0 {
            self.push_residual(res, norm);
        }
    }
}

/// Channel model with HK split, quantized relay output and optional AF outputs.
pub fn build_model(
    p: &ChannelParams,
    split: &PowerSplit,
    q: f64,
    af_lambda: Option<f64>,
) -> GaussianModel {
    use obs::*;
    let mut m = GaussianModel::new();
    let latents = [
        ("W1", split.pw1),
        ("V1", split.pv1),
        ("W2", split.pw2),
        ("V2", split.pv2),
        ("Z1", p.n),
        ("Z2", p.n),
        ("Zr", p.n),
        ("eta", q),
    ];
    for (n, v) in latents {
        m.add_latent(n, v).expect("valid latent");
    }
    let x1 = [("W1", 1.0), ("V1", 1.0)];
    let x2 = [("W2", 1.0), ("V2", 1.0)];
    let lin = |a: f64, b: f64, z: &'static str| {
        vec![("W1", a), ("V1", a), ("W2", b), ("V2", b), (z, 1.0)]
    };
    let yr = lin(p.g1, p.g2, "Zr");
    let mut yhat = yr.clone();
    yhat.push(("eta", 1.0));
    let defs: Vec<(&str, Vec<(&str, f64)>)> = vec![
        (X1, x1.to_vec()),
        (X2, x2.to_vec()),
        (W1, vec![("W1", 1.0)]),
        (W2, vec![("W2", 1.0)]),
        (V1, vec![("V1", 1.0)]),
        (V2, vec![("V2", 1.0)]),
        (Y1, lin(p.h11, p.h21, "Z1")),
        (Y2, lin(p.h12, p.h22, "Z2")),
        (YR, yr.clone()),
        (YHAT, yhat),
    ];
    for (n, t) in defs {
        m.add_observable(n, &t).expect("declared latents");
    }
    if let Some(l) = af_lambda {
        m.add_latent("Zp1", 1.0).expect("valid latent");
        m.add_latent("Zp2", 1.0).expect("valid latent");
        for (name, z) in [(YAF1, "Zp1"), (YAF2, "Zp2")] {
            let mut t: Vec<(&str, f64)> = yr.iter().map(|&(k, w)| (k, l * w)).collect();
            t.push((z, 1.0));
            m.add_observable(name, &t).expect("declared latents");
        }
    }
    m
}

/// The HK terms and relay corrections of the HK+GHF region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MITermSet {
    pub a1: f64,
    pub d1: f64,
    pub e1: f64,
    pub g1: f64,
    pub a2: f64,
    pub d2: f64,
    pub e2: f64,
    pub g2: f64,
    pub da1: f64,
    pub dd1: f64,
    pub de1: f64,
    pub dg1: f64,
    pub da2: f64,
    pub dd2: f64,
    pub de2: f64,
    pub dg2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

/// HK terms of one user on a model whose receiver outputs are `out`.
///
/// Returns `(a, d, e, g)` for the user owning `x` with common part `w_own`
/// and interfering common part `w_other`.
pub(crate) fn hk_terms(
    m: &GaussianModel,
    out: &[&str],
    x: &str,
    w_own: &str,
    w_other: &str,
) -> Result<[f64; 4]> {
    Ok([
        m.conditional_mi(out, &[x], &[w_own, w_other])?,
        m.conditional_mi(out, &[x], &[w_other])?,
        m.conditional_mi(out, &[x, w_other], &[w_own])?,
        m.conditional_mi(out, &[x, w_other], &[])?,
    ])
}

pub fn mi_term_set(p: &ChannelParams, split: &PowerSplit, q: f64) -> Result<MITermSet> {
    use obs::*;
    let m = build_model(p, split, q, None);
    let r0 = p.r0;
    let relay =
        |given: &[&str]| -> Result<f64> { Ok(r0.min(m.conditional_mi(&[YHAT], &[YR], given)?)) };
    let [a1, d1, e1, g1] = hk_terms(&m, &[Y1], X1, W1, W2)?;
    let [a2, d2, e2, g2] = hk_terms(&m, &[Y2], X2, W2, W1)?;
    Ok(MITermSet {
        a1,
        d1,
        e1,
        g1,
        a2,
        d2,
        e2,
        g2,
        da1: relay(&[Y1, W1, W2])?,
        dd1: relay(&[Y1, W2])?,
        de1: relay(&[Y1, W1])?,
        dg1: relay(&[Y1])?,
        da2: relay(&[Y2, W2, W1])?,
        dd2: relay(&[Y2, W1])?,
        de2: relay(&[Y2, W2])?,
        dg2: relay(&[Y2])?,
        delta1: relay(&[Y1, X1, W2])?,
        delta2: relay(&[Y2, X2, W1])?,
    })
}

#[cfg(test)]
mod tests {
    use super::obs::*;
    use super::*;
    use crate::model::etw_split;

    fn fig(g2: f64) -> ChannelParams {
        ChannelParams::symmetric(1.0, 0.5, 0.5, g2, 10.0, 1.0, 1.0)
    }

    fn scalar_pair() -> GaussianModel {
        let mut m = GaussianModel::new();
        m.add_latent("x", 1.0).unwrap();
        m.add_latent("z", 1.0).unwrap();
        m.add_observable("X", &[("x", 1.0)]).unwrap();
        m.add_observable("Y", &[("x", 1.0), ("z", 1.0)]).unwrap();
        m
    }

    #[test]
    fn half_bit_channel() {
        let m = scalar_pair();
        assert!((m.conditional_mi(&["X"], &["Y"], &[]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_sets() {
        let m = scalar_pair();
        assert_eq!(
            m.conditional_mi(&["X"], &["X"], &[]),
            Err(Error::InvalidSets)
        );
        assert_eq!(m.conditional_mi(&[], &["X"], &[]), Err(Error::InvalidSets));
        assert!(matches!(
            m.conditional_mi(&["X"], &["Q"], &[]),
            Err(Error::UnknownObservable(_))
        ));
    }

    #[test]
    fn deterministic_relation_is_singular() {
        let m = scalar_pair();
        let mut m2 = m.clone();
        m2.add_observable("X'", &[("x", 2.0)]).unwrap();
        assert!(matches!(
            m2.conditional_mi(&["X"], &["X'"], &[]),
            Err(Error::SingularModel(_))
        ));
    }

    #[test]
    fn tin_rate_of_reference_channel() {
        let p = fig(0.5);
        let m = build_model(&p, &PowerSplit::all_private(&p), 1.0, None);
        let i = m.conditional_mi(&[X1], &[Y1], &[]).unwrap();
        assert!((i - 0.5 * (1.0f64 + 10.0 / 3.5).log2()).abs() < 1e-12);
    }

    #[test]
    fn covariances() {
        let p = fig(0.1);
        let m = build_model(&p, &etw_split(&p), 1.0, None);
        assert!((m.covariance(YR, Y1).unwrap() - 5.5).abs() < 1e-12);
        assert!((m.covariance(Y1, Y1).unwrap() - 13.5).abs() < 1e-12);
        let yr = 0.25 * 10.0 + 0.01 * 10.0 + 1.0;
        assert!((m.conditional_variance(YR, &[]).unwrap() - yr).abs() < 1e-12);
        assert_eq!(m.conditional_variance(YR, &[YR]).unwrap(), 0.0);
        let tin = build_model(&p, &PowerSplit::all_private(&p), 1.0, None);
        assert_eq!(tin.covariance(W1, Y2).unwrap(), 0.0);
        assert!(m.covariance_csv().starts_with("name,X1,X2,W1"));
    }

    #[test]
    fn conditional_variance_approaches_limit() {
        let p = fig(0.1).with_noise(1e-9);
        let m = build_model(&p, &PowerSplit::all_private(&p), 1.0, None);
        assert!((m.conditional_variance(YR, &[Y1]).unwrap() - 0.18).abs() < 1e-7);
        assert!((m.conditional_variance(YR, &[Y2]).unwrap() - 1.62).abs() < 1e-7);
    }

    #[test]
    fn coarse_quantizer_kills_relay_terms() {
        let p = fig(0.5);
        let t = mi_term_set(&p, &etw_split(&p), 1e12).unwrap();
        for d in [
            t.da1, t.dd1, t.de1, t.dg1, t.da2, t.dd2, t.de2, t.dg2, t.delta1, t.delta2,
        ] {
            assert!(d < 1e-6);
        }
    }

    #[test]
    fn zero_common_power_is_handled() {
        let p = fig(0.5);
        let t = mi_term_set(&p, &PowerSplit::all_private(&p), 1.0).unwrap();
        assert!((t.a1 - t.d1).abs() < 1e-12);
        assert!((t.e1 - t.g1).abs() < 1e-12);
    }
}
