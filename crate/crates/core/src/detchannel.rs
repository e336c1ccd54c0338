//! Linear deterministic interference channel with a digital relay over GF(2).
//!
//! Signals are bit vectors indexed MSB first. Bit `j` of user `k` reaches
//! receiver `i` at level `j + q_i − n_ki`, where `q_i` is the strongest link
//! into receiver `i`; levels add modulo two. The relay forwards `r0bits`
//! linear combinations of its received levels to both receivers.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_LEVELS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetChannelParams {
    pub n11: u32,
    pub n21: u32,
    pub n12: u32,
    pub n22: u32,
    pub nr1: u32,
    pub nr2: u32,
    pub r0bits: u32,
}

impl DetChannelParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.n11,
            self.n21,
            self.n12,
            self.n22,
            self.nr1,
            self.nr2,
            self.r0bits,
        ];
        if all.iter().any(|&n| n > MAX_LEVELS) {
            return Err(Error::DimensionMismatch(format!(
                "link strengths are limited to {MAX_LEVELS} levels"
            )));
        }
        Ok(())
    }

    /// Transmit length of user 1.
    pub fn len1(&self) -> usize {
        self.n11.max(self.n12).max(self.nr1) as usize
    }

    pub fn len2(&self) -> usize {
        self.n21.max(self.n22).max(self.nr2) as usize
    }

    /// Levels at receiver 1, receiver 2 and the relay.
    pub fn levels(&self) -> (usize, usize, usize) {
        (
            self.n11.max(self.n21) as usize,
            self.n12.max(self.n22) as usize,
            self.nr1.max(self.nr2) as usize,
        )
    }
}

type Matrix = Vec<Vec<u8>>;

/// Encoders map message bits to transmit levels; `relay_map` maps relay
/// levels to the forwarded bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetScheme {
    pub k1: usize,
    pub k2: usize,
    /// `len1 × k1`
    pub enc1: Matrix,
    /// `len2 × k2`
    pub enc2: Matrix,
    /// `r0bits × relay levels`
    pub relay_map: Matrix,
}

fn check_matrix(m: &Matrix, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be {rows}x{cols}"
        )));
    }
    if m.iter().flatten().any(|&v| v > 1) {
        return Err(Error::DimensionMismatch(format!(
            "{what} entries must be 0 or 1"
        )));
    }
    Ok(())
}

impl DetScheme {
    pub fn validate(&self, p: &DetChannelParams) -> Result<()> {
        p.validate()?;
        let (_, _, qr) = p.levels();
        check_matrix(&self.enc1, p.len1(), self.k1, "enc1")?;
        check_matrix(&self.enc2, p.len2(), self.k2, "enc2")?;
        check_matrix(&self.relay_map, p.r0bits as usize, qr, "relay_map")?;
        if self.k1 + self.k2 > 64 {
            return Err(Error::DimensionMismatch("at most 64 message bits".into()));
        }
        Ok(())
    }

    /// Uncoded transmission of the top `k_i` levels with the given relay map.
    pub fn uncoded(p: &DetChannelParams, k1: usize, k2: usize, relay_map: Matrix) -> Self {
        let ident = |len: usize, k: usize| -> Matrix {
            (0..len)
                .map(|r| (0..k).map(|c| u8::from(r == c)).collect())
                .collect()
        };
        DetScheme {
            k1,
            k2,
            enc1: ident(p.len1(), k1),
            enc2: ident(p.len2(), k2),
            relay_map,
        }
    }
}

/// Rows are bit masks over message variables (user 1 bits first).
fn rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Per-level expressions (as masks over message bits) of a transmitted signal.
fn transmit(enc: &Matrix, offset: usize) -> Vec<u64> {
    enc.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .fold(0u64, |m, (c, _)| m | 1 << (c + offset))
        })
        .collect()
}

/// Levels seen at a node with link strengths `n1`, `n2` from the two users.
fn receive(x1: &[u64], n1: usize, x2: &[u64], n2: usize) -> Vec<u64> {
    let q = n1.max(n2);
    let mut y = vec![0u64; q];
    for (x, n) in [(x1, n1), (x2, n2)] {
        for j in 0..n {
            y[j + q - n] ^= x[j];
        }
    }
    y
}

/// Stacked linear systems `(receiver 1, receiver 2)`: each row is one
/// observed bit as a mask over all message bits.
fn observations(p: &DetChannelParams, s: &DetScheme) -> (Vec<u64>, Vec<u64>) {
    let x1 = transmit(&s.enc1, 0);
    let x2 = transmit(&s.enc2, s.k1);
    let y1 = receive(&x1, p.n11 as usize, &x2, p.n21 as usize);
    let y2 = receive(&x1, p.n12 as usize, &x2, p.n22 as usize);
    let yr = receive(&x1, p.nr1 as usize, &x2, p.nr2 as usize);
    let relay: Vec<u64> = s
        .relay_map
        .iter()
        .map(|row| {
            row.iter()
                .zip(&yr)
                .filter(|(&v, _)| v == 1)
                .fold(0u64, |m, (_, &y)| m ^ y)
        })
        .collect();
    ([y1, relay.clone()].concat(), [y2, relay].concat())
}

fn decodable(rows: &[u64], own: u64, k_own: usize) -> bool {
    let other: Vec<u64> = rows.iter().map(|r| r & !own).collect();
    rank(rows) - rank(&other) == k_own
}

fn mask(k: usize, offset: usize) -> u64 {
    if k == 0 {
        0
    } else {
        (u64::MAX >> (64 - k)) << offset
    }
}

/// Whether each receiver can recover its own message bits.
pub fn simulate(p: &DetChannelParams, s: &DetScheme) -> Result<(bool, bool)> {
    s.validate(p)?;
    let (a1, a2) = observations(p, s);
    Ok((
        decodable(&a1, mask(s.k1, 0), s.k1),
        decodable(&a2, mask(s.k2, s.k1), s.k2),
    ))
}

/// Exhaustive check over all message pairs that each receiver's observation
/// determines its own message. Limited to 20 message bits.
pub fn simulate_exhaustive(p: &DetChannelParams, s: &DetScheme) -> Result<(bool, bool)> {
    s.validate(p)?;
    let total = s.k1 + s.k2;
    if total > 20 {
        return Err(Error::DimensionMismatch(
            "exhaustive check limited to 20 bits".into(),
        ));
    }
    let (a1, a2) = observations(p, s);
    let observe = |rows: &[u64], m: u64| -> u64 {
        rows.iter().enumerate().fold(0u64, |acc, (i, r)| {
            acc | (((r & m).count_ones() as u64) & 1) << i
        })
    };
    let check = |rows: &[u64], own: u64| -> bool {
        let mut seen = std::collections::HashMap::new();
        for m in 0..(1u64 << total) {
            let obs = observe(rows, m);
            if *seen.entry(obs).or_insert(m & own) != m & own {
                return false;
            }
        }
        true
    };
    Ok((check(&a1, mask(s.k1, 0)), check(&a2, mask(s.k2, s.k1))))
}

/// All `rows × cols` binary matrices with full column rank, one per column space.
fn encoders(rows: usize, cols: usize) -> Vec<Matrix> {
    if cols > rows {
        return vec![];
    }
    if cols == 0 {
        return vec![vec![vec![]; rows]];
    }
    let bits = rows * cols;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::new();
    for code in 0u64..(1u64 << bits) {
        // column c as a mask over rows
        let columns: Vec<u64> = (0..cols)
            .map(|c| (code >> (c * rows)) & ((1u64 << rows) - 1))
            .collect();
        if rank(&columns) < cols {
            continue;
        }
        if seen.insert(reduced_basis(&columns)) {
            out.push(
                (0..rows)
                    .map(|r| (0..cols).map(|c| ((columns[c] >> r) & 1) as u8).collect())
                    .collect(),
            );
        }
    }
    out
}

/// Canonical reduced basis of a span over GF(2).
fn reduced_basis(vectors: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // back-substitute so each leading bit appears in one vector only
    for i in 0..basis.len() {
        let lead = 63 - basis[i].leading_zeros();
        for j in 0..basis.len() {
            if j != i && (basis[j] >> lead) & 1 == 1 {
                basis[j] ^= basis[i];
            }
        }
    }
    basis.sort_unstable();
    basis
}

fn all_matrices(rows: usize, cols: usize) -> Vec<Matrix> {
    let bits = rows * cols;
    (0u64..(1u64 << bits))
        .map(|code| {
            (0..rows)
                .map(|r| {
                    (0..cols)
                        .map(|c| ((code >> (r * cols + c)) & 1) as u8)
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Which relay maps the search may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelaySearch {
    All,
    Fixed(Matrix),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub k_max: usize,
    /// Upper bound on evaluated (enc1, enc2, relay map) triples.
    pub budget: u64,
    pub relay: RelaySearch,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            k_max: 8,
            budget: 50_000_000,
            relay: RelaySearch::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Frontier {
    /// Pareto-optimal `(k1, k2)`, ascending in `k1`.
    pub points: Vec<(usize, usize)>,
    /// One decodable scheme per frontier point.
    pub witnesses: Vec<DetScheme>,
}

impl Frontier {
    /// Whether `(k1, k2)` is dominated by some frontier point.
    pub fn achieves(&self, k1: usize, k2: usize) -> bool {
        self.points.iter().any(|&(a, b)| a >= k1 && b >= k2)
    }
}

fn find_scheme(
    p: &DetChannelParams,
    k1: usize,
    k2: usize,
    relays: &[Matrix],
    spent: &mut u64,
    budget: u64,
) -> Result<Option<DetScheme>> {
    let e1 = encoders(p.len1(), k1);
    let e2 = encoders(p.len2(), k2);
    for relay in relays {
        for enc1 in &e1 {
            for enc2 in &e2 {
                *spent += 1;
                if *spent > budget {
                    return Err(Error::SearchBudgetExceeded(budget));
                }
                let s = DetScheme {
                    k1,
                    k2,
                    enc1: enc1.clone(),
                    enc2: enc2.clone(),
                    relay_map: relay.clone(),
                };
                if simulate(p, &s)? == (true, true) {
                    return Ok(Some(s));
                }
            }
        }
    }
    Ok(None)
}

/// Pareto frontier of jointly decodable message sizes, by exhaustive search
/// over encoder column spaces and relay maps.
pub fn brute_force_best(p: &DetChannelParams, opts: &SearchOptions) -> Result<Frontier> {
    p.validate()?;
    let (_, _, qr) = p.levels();
    let relays = match &opts.relay {
        RelaySearch::All => {
            if p.r0bits as usize * qr > 16 {
                return Err(Error::SearchBudgetExceeded(opts.budget));
            }
            all_matrices(p.r0bits as usize, qr)
        }
        RelaySearch::Fixed(m) => {
            check_matrix(m, p.r0bits as usize, qr, "relay_map")?;
            vec![m.clone()]
        }
    };
    let max1 = p.len1().min(opts.k_max);
    let max2 = p.len2().min(opts.k_max);
    let mut spent = 0u64;
    let mut best: Vec<(usize, usize, DetScheme)> = Vec::new();
    // Achievability is monotone, so the largest k2 per k1 is nonincreasing in k1.
    let mut cap = max2;
    for k1 in 0..=max1 {
        let mut found = None;
        for k2 in (0..=cap).rev() {
            if let Some(s) = find_scheme(p, k1, k2, &relays, &mut spent, opts.budget)? {
                found = Some((k2, s));
                break;
            }
        }
        match found {
            Some((k2, s)) => {
                cap = k2;
                best.push((k1, k2, s));
            }
            None => break,
        }
    }
    let mut points = Vec::new();
    let mut witnesses = Vec::new();
    for (i, (k1, k2, s)) in best.iter().enumerate() {
        let dominated = best[i + 1..].iter().any(|(_, b, _)| b >= k2);
        if !dominated {
            points.push((*k1, *k2));
            witnesses.push(s.clone());
        }
    }
    Ok(Frontier { points, witnesses })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub params: DetChannelParams,
    /// The scheme described for the example, with relay help.
    pub scheme: DetScheme,
    /// Relay map forwarding the alternative level, for comparison.
    pub alternative_relay_map: Matrix,
}

const FIG1: &str = include_str!("../fixtures/fig1.json");
const FIG2: &str = include_str!("../fixtures/fig2.json");

pub fn fixture(name: &str) -> Result<Fixture> {
    let text = match name {
        "fig1" => FIG1,
        "fig2" => FIG2,
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(serde_json::from_str(text).expect("bundled fixtures are valid"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub description: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetReport {
    pub fixture: String,
    pub scheme_rates: (usize, usize),
    pub baseline_frontier: Vec<(usize, usize)>,
    pub relay_frontier: Vec<(usize, usize)>,
    pub alternative_frontier: Vec<(usize, usize)>,
    pub claims: Vec<Claim>,
}

impl DetReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

fn no_relay(p: &DetChannelParams) -> DetChannelParams {
    DetChannelParams { r0bits: 0, ..*p }
}

fn claim(description: impl Into<String>, pass: bool) -> Claim {
    Claim {
        description: description.into(),
        pass,
    }
}

fn fixed(m: &Matrix) -> SearchOptions {
    SearchOptions {
        relay: RelaySearch::Fixed(m.clone()),
        ..SearchOptions::default()
    }
}

/// First example: forwarding `a1 ⊕ b1` lets both users add one bit to the
/// no-relay point `(1, 2)`.
pub fn verify_example1() -> Result<DetReport> {
    let f = fixture("fig1")?;
    let p = f.params;
    let s = &f.scheme;
    let (d1, d2) = simulate(&p, s)?;
    let exhaustive = simulate_exhaustive(&p, s)?;
    let silent = DetScheme {
        relay_map: vec![vec![0; s.relay_map[0].len()]; s.relay_map.len()],
        ..s.clone()
    };
    let without = simulate(&p, &silent)?;
    let base = brute_force_best(&no_relay(&p), &SearchOptions::default())?;
    let with = brute_force_best(&p, &fixed(&s.relay_map))?;
    let alt = brute_force_best(&p, &fixed(&f.alternative_relay_map))?;
    let claims = vec![
        claim(
            format!("scheme with relay decodes ({}, {})", s.k1, s.k2),
            d1 && d2 && exhaustive == (true, true),
        ),
        claim(
            "same scheme without the relay bit fails",
            without != (true, true),
        ),
        claim(
            "no-relay optimum contains (1, 2); (2, 2) and (1, 3) are not achievable",
            base.points.contains(&(1, 2)) && !base.achieves(2, 2) && !base.achieves(1, 3),
        ),
        claim(
            "relay adds one bit per user to the no-relay point (1, 2)",
            with.achieves(2, 3) && (s.k1, s.k2) == (2, 3),
        ),
    ];
    Ok(DetReport {
        fixture: f.name,
        scheme_rates: (s.k1, s.k2),
        baseline_frontier: base.points,
        relay_frontier: with.points,
        alternative_frontier: alt.points,
        claims,
    })
}

/// Second example: forwarding the relay's second level `a1 ⊕ b2` gives one
/// extra bit per user over the no-relay optimum, which forwarding the first
/// level does not.
pub fn verify_example2() -> Result<DetReport> {
    let f = fixture("fig2")?;
    let p = f.params;
    let s = &f.scheme;
    let (d1, d2) = simulate(&p, s)?;
    let exhaustive = simulate_exhaustive(&p, s)?;
    let base = brute_force_best(&no_relay(&p), &SearchOptions::default())?;
    let with = brute_force_best(&p, &fixed(&s.relay_map))?;
    let alt = brute_force_best(&p, &fixed(&f.alternative_relay_map))?;
    let plus_one = base
        .points
        .iter()
        .any(|&(a, b)| (a + 1, b + 1) == (s.k1, s.k2) && with.achieves(a + 1, b + 1));
    let alt_worse = with.points.iter().any(|&(a, b)| !alt.achieves(a, b));
    let claims = vec![
        claim(
            format!("scheme with relay decodes ({}, {})", s.k1, s.k2),
            d1 && d2 && exhaustive == (true, true),
        ),
        claim(
            "scheme rates are one bit per user above a no-relay optimum",
            plus_one,
        ),
        claim(
            "forwarding the other relay level loses a frontier point",
            alt_worse,
        ),
    ];
    Ok(DetReport {
        fixture: f.name,
        scheme_rates: (s.k1, s.k2),
        baseline_frontier: base.points,
        relay_frontier: with.points,
        alternative_frontier: alt.points,
        claims,
    })
}

pub fn verify_fixture(name: &str) -> Result<DetReport> {
    match name {
        "fig1" => verify_example1(),
        "fig2" => verify_example2(),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}
