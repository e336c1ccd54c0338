#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use relayic::gaussmi::GaussianModel;
use relayic::model::ChannelParams;

/// Model with linearly independent observables.
pub fn random_model(rng: &mut ChaCha8Rng) -> (GaussianModel, Vec<String>) {
    loop {
        let (m, names) = draw_model(rng);
        let cov = m.covariance_matrix(&refs(&names)).unwrap();
        let n = names.len();
        let diag: f64 = (0..n).map(|i| cov[i][i]).product();
        if DMatrix::from_fn(n, n, |i, j| cov[i][j]).determinant() > 1e-6 * diag {
            return (m, names);
        }
    }
}

fn draw_model(rng: &mut ChaCha8Rng) -> (GaussianModel, Vec<String>) {
    let latents = rng.gen_range(4..=7);
    let mut m = GaussianModel::new();
    for k in 0..latents {
        m.add_latent(&format!("z{k}"), rng.gen_range(0.1..5.0))
            .unwrap();
    }
    let count = rng.gen_range(4..=latents);
    let mut names = Vec::new();
    for i in 0..count {
        let name = format!("o{i}");
        let mut terms: Vec<(String, f64)> = (0..latents)
            .filter_map(|k| {
                rng.gen_bool(0.7)
                    .then(|| (format!("z{k}"), rng.gen_range(-2.0..2.0)))
            })
            .collect();
        if terms.is_empty() {
            terms.push((format!("z{}", i % latents), 1.0));
        }
        let refs: Vec<(&str, f64)> = terms.iter().map(|(n, w)| (n.as_str(), *w)).collect();
        m.add_observable(&name, &refs).unwrap();
        names.push(name);
    }
    (m, names)
}

pub fn random_channel(rng: &mut ChaCha8Rng) -> ChannelParams {
    let mut g = || rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let (h11, h21, h12, h22, g1, g2) = (g(), g(), g(), g(), g(), g());
    ChannelParams {
        h11,
        h21,
        h12,
        h22,
        g1,
        g2,
        p1: rng.gen_range(0.5..20.0),
        p2: rng.gen_range(0.5..20.0),
        n: rng.gen_range(0.05..2.0),
        r0: rng.gen_range(0.0..3.0),
    }
}

/// Splits shuffled names into `(A, B, B', C)`, each of the first three nonempty.
pub fn partition(rng: &mut ChaCha8Rng, names: &[String]) -> [Vec<String>; 4] {
    let mut v = names.to_vec();
    v.shuffle(rng);
    let c_len = rng.gen_range(0..=v.len() - 3);
    let c = v.split_off(v.len() - c_len);
    let a_len = rng.gen_range(1..=v.len() - 2);
    let rest = v.split_off(a_len);
    let b = vec![rest[0].clone()];
    let b2 = rest[1..].to_vec();
    [v, b, b2, c]
}

pub fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn join(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().chain(b).cloned().collect()
}

pub fn logdet(m: &GaussianModel, names: &[String]) -> f64 {
    if names.is_empty() {
        return 0.0;
    }
    let cov = m.covariance_matrix(&refs(names)).unwrap();
    let n = names.len();
    DMatrix::from_fn(n, n, |i, j| cov[i][j])
        .determinant()
        .log2()
}

/// Sample covariance of every observable pair against the analytic value.
/// Entries whose sample covariance lies beyond 3 SE, with their z-scores.
pub fn monte_carlo_check(
    m: &GaussianModel,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Vec<(f64, String)> {
    let sd: Vec<f64> = m.latents.iter().map(|l| l.variance.sqrt()).collect();
    let k = m.observables.len();
    let mut sum = vec![0.0; k];
    let mut prod = vec![vec![0.0; k]; k];
    let mut z = vec![0.0; sd.len()];
    let mut y = vec![0.0; k];
    for _ in 0..samples {
        for (zi, s) in z.iter_mut().zip(&sd) {
            *zi = s * rng.sample::<f64, _>(StandardNormal);
        }
        for (yi, o) in y.iter_mut().zip(&m.observables) {
            *yi = o.coefficients.iter().zip(&z).map(|(c, v)| c * v).sum();
        }
        for i in 0..k {
            sum[i] += y[i];
            for j in i..k {
                prod[i][j] += y[i] * y[j];
            }
        }
    }
    let n = samples as f64;
    let names: Vec<&str> = m.observables.iter().map(|o| o.name.as_str()).collect();
    let cov = m.covariance_matrix(&names).unwrap();
    let mut failures = Vec::new();
    for i in 0..k {
        for j in i..k {
            let sample = (prod[i][j] - sum[i] * sum[j] / n) / (n - 1.0);
            let se = ((cov[i][i] * cov[j][j] + cov[i][j] * cov[i][j]) / n).sqrt();
            let z = (sample - cov[i][j]).abs() / se;
            if z > 3.0 {
                failures.push((
                    z,
                    format!("{}/{}: {sample} vs {}", names[i], names[j], cov[i][j]),
                ));
            }
        }
    }
    failures
}

/// A 3 SE band misses about 0.27% of entries by chance, so a handful of
/// misses is expected over many entries. Accept at most 1% of entries beyond
/// 3 SE and none beyond 5 SE.
pub fn monte_carlo_ok(misses: &[(f64, String)], entries: usize) -> bool {
    misses.len() <= entries.div_ceil(100) && misses.iter().all(|(z, _)| *z <= 5.0)
}
