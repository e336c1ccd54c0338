//! Two-dimensional rate polytopes: HK+GHF, CF with either decoding order,
//! the no-relay HK baseline and the weak-interference outer bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussmi::{build_model, hk_terms, mi_term_set, obs::*, MITermSet};
use crate::model::{link_budget, ChannelParams, PowerSplit};
use crate::strategies::WZ_TOL;

/// Feasibility slack used by vertex enumeration and containment checks.
pub const FEAS_TOL: f64 = 1e-9;

/// Constraint normals `(c1, c2)` of the HK family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Normal {
    R1,
    R2,
    Sum,
    TwoR1R2,
    R1TwoR2,
}

impl Normal {
    pub const ALL: [Normal; 5] = [
        Normal::R1,
        Normal::R2,
        Normal::Sum,
        Normal::TwoR1R2,
        Normal::R1TwoR2,
    ];

    pub fn coeffs(self) -> (u32, u32) {
        match self {
            Normal::R1 => (1, 0),
            Normal::R2 => (0, 1),
            Normal::Sum => (1, 1),
            Normal::TwoR1R2 => (2, 1),
            Normal::R1TwoR2 => (1, 2),
        }
    }

    pub fn from_coeffs(c1: u32, c2: u32) -> Option<Normal> {
        Normal::ALL.into_iter().find(|n| n.coeffs() == (c1, c2))
    }

    pub fn weight(self) -> f64 {
        let (a, b) = self.coeffs();
        (a + b) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub c1: u32,
    pub c2: u32,
    pub b: f64,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    constraints: Vec<Constraint>,
}

/// `{(R1, R2) ≥ 0 : c1 R1 + c2 R2 ≤ b}` with one bound kept per normal.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "PolytopeJson", try_from = "PolytopeJson")]
pub struct RatePolytope {
    bounds: BTreeMap<Normal, f64>,
}

impl From<RatePolytope> for PolytopeJson {
    fn from(p: RatePolytope) -> Self {
        PolytopeJson {
            constraints: p.constraints(),
        }
    }
}

impl TryFrom<PolytopeJson> for RatePolytope {
    type Error = String;

    fn try_from(j: PolytopeJson) -> std::result::Result<Self, String> {
        let mut p = RatePolytope::new();
        for c in j.constraints {
            let n = Normal::from_coeffs(c.c1, c.c2)
                .ok_or_else(|| format!("unsupported normal ({}, {})", c.c1, c.c2))?;
            if !c.b.is_finite() {
                return Err("bounds must be finite".into());
            }
            p.add(n, c.b);
        }
        Ok(p)
    }
}

impl RatePolytope {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `n·R ≤ b`, keeping the tighter bound if `n` is already present.
    pub fn add(&mut self, n: Normal, b: f64) {
        let e = self.bounds.entry(n).or_insert(b);
        *e = e.min(b);
    }

    pub fn with(mut self, n: Normal, b: f64) -> Self {
        self.add(n, b);
        self
    }

    pub fn bound(&self, n: Normal) -> Option<f64> {
        self.bounds.get(&n).copied()
    }

    pub fn normals(&self) -> impl Iterator<Item = Normal> + '_ {
        self.bounds.keys().copied()
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        self.bounds
            .iter()
            .map(|(n, &b)| {
                let (c1, c2) = n.coeffs();
                Constraint { c1, c2, b }
            })
            .collect()
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        r1 >= -tol
            && r2 >= -tol
            && self.bounds.iter().all(|(n, &b)| {
                let (c1, c2) = n.coeffs();
                c1 as f64 * r1 + c2 as f64 * r2 <= b + tol
            })
    }

    /// Corner points, sorted by `R1` then `R2`.
    pub fn vertices(&self) -> Result<Vec<(f64, f64)>> {
        if self.bounds.values().any(|&b| b < -FEAS_TOL) {
            return Err(Error::EmptyRegion);
        }
        // a1 R1 + a2 R2 = b, including the two axes.
        let mut lines: Vec<(f64, f64, f64)> = vec![(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)];
        for (n, &b) in &self.bounds {
            let (c1, c2) = n.coeffs();
            lines.push((c1 as f64, c2 as f64, b));
        }
        let mut pts: Vec<(f64, f64)> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, a2, b) = lines[i];
                let (c1, c2, d) = lines[j];
                let det = a1 * c2 - a2 * c1;
                if det == 0.0 {
                    continue;
                }
                let r1 = ((b * c2 - a2 * d) / det).max(0.0);
                let r2 = ((a1 * d - b * c1) / det).max(0.0);
                if self.contains(r1, r2, FEAS_TOL)
                    && !pts
                        .iter()
                        .any(|&(x, y)| (x - r1).abs() <= 1e-12 && (y - r2).abs() <= 1e-12)
                {
                    pts.push((r1, r2));
                }
            }
        }
        if pts.is_empty() {
            return Err(Error::EmptyRegion);
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite vertices"));
        Ok(pts)
    }

    /// Maximizes `w1 R1 + w2 R2`; ties go to the lexicographically largest vertex.
    pub fn max_weighted_sum(&self, w1: f64, w2: f64) -> Result<(f64, (f64, f64))> {
        if !(w1 >= 0.0 && w2 >= 0.0) || (w1 == 0.0 && w2 == 0.0) {
            return Err(Error::DomainError(
                "weights must be nonnegative and not both zero".into(),
            ));
        }
        let caps_r1 = self.normals().any(|n| n.coeffs().0 > 0);
        let caps_r2 = self.normals().any(|n| n.coeffs().1 > 0);
        let verts = self.vertices()?;
        if (w1 > 0.0 && !caps_r1) || (w2 > 0.0 && !caps_r2) {
            return Err(Error::Unbounded);
        }
        let value = |&(r1, r2): &(f64, f64)| w1 * r1 + w2 * r2;
        let best = verts.iter().map(value).fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-12 * best.abs().max(1.0);
        let v = verts
            .iter()
            .filter(|v| value(v) >= best - tol)
            .copied()
            .fold(None, |acc: Option<(f64, f64)>, v| match acc {
                Some(a) if a >= v => Some(a),
                _ => Some(v),
            })
            .expect("at least one vertex");
        Ok((best, v))
    }

    pub fn sum_rate(&self) -> Result<f64> {
        Ok(self.max_weighted_sum(1.0, 1.0)?.0)
    }
}

/// Maximum of `w1 R1 + w2 R2` over a union of polytopes.
pub fn max_weighted_sum_union(
    polys: &[RatePolytope],
    w1: f64,
    w2: f64,
) -> Result<(f64, (f64, f64))> {
    let mut best: Option<(f64, (f64, f64))> = None;
    for p in polys {
        match p.max_weighted_sum(w1, w2) {
            Ok(r) => {
                if best.map_or(true, |b| r.0 > b.0) {
                    best = Some(r);
                }
            }
            Err(Error::EmptyRegion) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::EmptyRegion)
}

/// Effective HK terms of one user (relay corrections already folded in).
#[derive(Debug, Clone, Copy, PartialEq)]
struct Hk {
    a: f64,
    d: f64,
    e: f64,
    g: f64,
}

fn hk_polytope(u1: Hk, u2: Hk) -> RatePolytope {
    RatePolytope::new()
        .with(Normal::R1, u1.d)
        .with(Normal::R2, u2.d)
        .with(Normal::Sum, u1.a + u2.g)
        .with(Normal::Sum, u1.g + u2.a)
        .with(Normal::Sum, u1.e + u2.e)
        .with(Normal::TwoR1R2, u1.a + u1.g + u2.e)
        .with(Normal::R1TwoR2, u1.e + u2.a + u2.g)
}

/// HK+GHF polytope assembled from precomputed terms.
pub fn region_from_terms(t: &MITermSet) -> RatePolytope {
    let u1 = Hk {
        a: t.a1 + t.da1 - t.delta1,
        d: t.d1 + t.dd1 - t.delta1,
        e: t.e1 + t.de1 - t.delta1,
        g: t.g1 + t.dg1 - t.delta1,
    };
    let u2 = Hk {
        a: t.a2 + t.da2 - t.delta2,
        d: t.d2 + t.dd2 - t.delta2,
        e: t.e2 + t.de2 - t.delta2,
        g: t.g2 + t.dg2 - t.delta2,
    };
    hk_polytope(u1, u2)
}

/// HK region with joint decoding of the relay's hashed quantization index.
pub fn hk_ghf_region(p: &ChannelParams, split: &PowerSplit, q: f64) -> Result<RatePolytope> {
    Ok(region_from_terms(&mi_term_set(p, split, q)?))
}

/// The region under the given split and under the same split with user 1's
/// or user 2's common part removed. Each polytope is achievable on its own.
pub fn hk_ghf_split_variants(
    p: &ChannelParams,
    split: &PowerSplit,
    q: f64,
) -> Result<[RatePolytope; 3]> {
    Ok([
        hk_ghf_region(p, split, q)?,
        hk_ghf_region(p, &split.without_w1(), q)?,
        hk_ghf_region(p, &split.without_w2(), q)?,
    ])
}

fn plain(t: [f64; 4]) -> Hk {
    Hk {
        a: t[0],
        d: t[1],
        e: t[2],
        g: t[3],
    }
}

pub fn no_relay_hk_region(p: &ChannelParams, split: &PowerSplit) -> Result<RatePolytope> {
    let m = build_model(p, split, 1.0, None);
    let u1 = plain(hk_terms(&m, &[Y1], X1, W1, W2)?);
    let u2 = plain(hk_terms(&m, &[Y2], X2, W2, W1)?);
    Ok(hk_polytope(u1, u2))
}

fn wyner_ziv(
    p: &ChannelParams,
    m: &crate::gaussmi::GaussianModel,
    sides: [[&str; 2]; 2],
) -> Result<()> {
    let mut required: f64 = 0.0;
    for side in sides {
        let given: Vec<&str> = side.iter().copied().filter(|s| !s.is_empty()).collect();
        required = required.max(m.conditional_mi(&[YHAT], &[YR], &given)?);
    }
    if p.r0 < required - WZ_TOL {
        return Err(Error::WynerZivInfeasible { required, r0: p.r0 });
    }
    Ok(())
}

/// CF that reconstructs `Ŷr` first: the no-relay HK region with each output
/// `Y_i` replaced by `(Y_i, Ŷr)`.
pub fn cf_region_order1(p: &ChannelParams, split: &PowerSplit, q: f64) -> Result<RatePolytope> {
    let m = build_model(p, split, q, None);
    wyner_ziv(p, &m, [[Y1, ""], [Y2, ""]])?;
    let u1 = plain(hk_terms(&m, &[Y1, YHAT], X1, W1, W2)?);
    let u2 = plain(hk_terms(&m, &[Y2, YHAT], X2, W2, W1)?);
    Ok(hk_polytope(u1, u2))
}

/// CF that decodes the own common message first, then `Ŷr`, then the other
/// common message, then the private message without relay help.
///
/// The split rates of the two users are coupled only through their own
/// bounds, so the projection onto `(R1, R2)` is a box.
pub fn cf_rates_order2(p: &ChannelParams, split: &PowerSplit, q: f64) -> Result<RatePolytope> {
    let m = build_model(p, split, q, None);
    wyner_ziv(p, &m, [[Y1, W1], [Y2, W2]])?;
    let common = |w_own: &str, y_own: &str, w_other: &str, y_other: &str| -> Result<f64> {
        if m.conditional_variance(w_own, &[])? == 0.0 {
            return Ok(0.0);
        }
        let direct = m.conditional_mi(&[w_own], &[y_own], &[])?;
        let crossed = if m.conditional_variance(w_other, &[])? == 0.0 {
            m.conditional_mi(&[w_own], &[y_other, YHAT], &[])?
        } else {
            m.conditional_mi(&[w_own], &[y_other, YHAT], &[w_other])?
        };
        Ok(direct.min(crossed))
    };
    let t1 = common(W1, Y1, W2, Y2)?;
    let t2 = common(W2, Y2, W1, Y1)?;
    let s1 = m.conditional_mi(&[X1], &[Y1], &[W1, W2])?;
    let s2 = m.conditional_mi(&[X2], &[Y2], &[W1, W2])?;
    Ok(RatePolytope::new()
        .with(Normal::R1, s1 + t1)
        .with(Normal::R2, s2 + t2))
}

/// Pairing of the interference terms in the outer bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterVariant {
    /// Genie bounds where a receiver's own signal is degraded by the
    /// interference it causes at the other receiver.
    #[default]
    Standard,
    /// INR1 and INR2 exchanged. Not a valid bound in general; kept for comparison.
    Swapped,
}

pub fn outer_bound_region(p: &ChannelParams) -> Result<RatePolytope> {
    outer_bound_region_with(p, OuterVariant::Standard)
}

pub fn outer_bound_region_with(p: &ChannelParams, variant: OuterVariant) -> Result<RatePolytope> {
    let lb = link_budget(p);
    if !(lb.inr1 < lb.snr1 && lb.inr2 < lb.snr2) {
        return Err(Error::RegimeViolation);
    }
    let h = |x: f64| 0.5 * x.log2();
    let (s1, s2, i1, i2) = (lb.snr1, lb.snr2, lb.inr1, lb.inr2);
    let k1 = h((1.0 + s1 + lb.snr_r1) / (1.0 + s1));
    let k2 = h((1.0 + s2 + lb.snr_r2) / (1.0 + s2));
    let r0 = p.r0;
    // The swapped pairing exchanges INR1 and INR2 everywhere except in the
    // (1+SNR_i)/(1+INR_j) terms of the weighted bounds.
    let (j1, j2) = match variant {
        OuterVariant::Standard => (i1, i2),
        OuterVariant::Swapped => (i2, i1),
    };
    let poly = RatePolytope::new()
        .with(Normal::R1, h(1.0 + s1) + k1)
        .with(Normal::R2, h(1.0 + s2) + k2)
        .with(
            Normal::Sum,
            h(1.0 + s1) + h(1.0 + s2 / (1.0 + j2)) + r0 + k1,
        )
        .with(
            Normal::Sum,
            h(1.0 + s2) + h(1.0 + s1 / (1.0 + j1)) + r0 + k2,
        )
        .with(
            Normal::Sum,
            h(1.0 + j1 + s1 / (1.0 + j2)) + h(1.0 + j2 + s2 / (1.0 + j1)) + 2.0 * r0,
        )
        .with(
            Normal::TwoR1R2,
            h(1.0 + s1 + j1)
                + h(1.0 + j2 + s2 / (1.0 + j1))
                + h((1.0 + s1) / (1.0 + i2))
                + 2.0 * r0
                + k1,
        )
        .with(
            Normal::R1TwoR2,
            h(1.0 + s2 + j2)
                + h(1.0 + j1 + s1 / (1.0 + j2))
                + h((1.0 + s2) / (1.0 + i1))
                + 2.0 * r0
                + k2,
        );
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub per_constraint_gap: BTreeMap<Normal, f64>,
    pub delta: f64,
    pub contained: bool,
}

/// Per-normal distance between two polytopes, normalized by `c1 + c2`.
pub fn constant_gap(outer: &RatePolytope, inner: &RatePolytope) -> GapReport {
    let mut per = BTreeMap::new();
    let mut delta = f64::NEG_INFINITY;
    for n in outer.normals() {
        if let (Some(bo), Some(bi)) = (outer.bound(n), inner.bound(n)) {
            per.insert(n, bo - bi);
            delta = delta.max((bo - bi) / n.weight());
        }
    }
    let contained = match inner.vertices() {
        Ok(vs) => vs.iter().all(|&(r1, r2)| outer.contains(r1, r2, FEAS_TOL)),
        Err(_) => true,
    };
    GapReport {
        per_constraint_gap: per,
        delta: if delta.is_finite() { delta } else { 0.0 },
        contained,
    }
}
