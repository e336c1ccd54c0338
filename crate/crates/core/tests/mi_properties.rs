mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relayic::gaussmi::obs::*;
use relayic::gaussmi::{build_model, mi_term_set};
use relayic::model::{etw_split, ChannelParams, PowerSplit};

const TOL: f64 = 1e-9;

#[test]
fn chain_rule_symmetry_and_determinant_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for _ in 0..1000 {
        let (m, names) = random_model(&mut rng);
        let [a, b, b2, c] = partition(&mut rng, &names);
        let mi = |x: &[String], y: &[String], z: &[String]| {
            m.conditional_mi(&refs(x), &refs(y), &refs(z)).unwrap()
        };
        let whole = mi(&a, &join(&b, &b2), &c);
        let split = mi(&a, &b, &c) + mi(&a, &b2, &join(&c, &b));
        assert!((whole - split).abs() < TOL, "chain rule {whole} vs {split}");
        assert!((mi(&a, &b, &c) - mi(&b, &a, &c)).abs() < TOL, "symmetry");

        let oracle = 0.5
            * (logdet(&m, &join(&a, &c)) + logdet(&m, &join(&b, &c))
                - logdet(&m, &c)
                - logdet(&m, &join(&join(&a, &b), &c)));
        let direct = mi(&a, &b, &c);
        assert!(
            (direct - oracle).abs() < 1e-8,
            "determinant oracle {direct} vs {oracle}"
        );
    }
}

#[test]
fn relay_terms_on_random_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(82);
    for _ in 0..1000 {
        let p = random_channel(&mut rng);
        let q = rng.gen_range(0.01..10.0);
        let split = etw_split(&p);
        let m = build_model(&p, &split, q, None);
        let mi = |a: &[&str], b: &[&str], c: &[&str]| m.conditional_mi(a, b, c).unwrap();

        // data processing through the quantizer
        for (s, c) in [
            ([X1], vec![]),
            ([X2], vec![Y1]),
            ([Y2], vec![W1]),
            ([W2], vec![Y1, X1]),
        ] {
            assert!(mi(&[YHAT], &s, &c) <= mi(&[YR], &s, &c) + TOL);
        }

        // GHF decomposition on each single-receiver submodel
        for (x, y) in [(X1, Y1), (X2, Y2)] {
            let lhs = mi(&[x], &[y, YHAT], &[]);
            let rhs = mi(&[x], &[y], &[]) + mi(&[YHAT], &[YR], &[y]) - mi(&[YHAT], &[YR], &[x, y]);
            assert!((lhs - rhs).abs() < TOL, "decomposition {lhs} vs {rhs}");
        }

        let t = mi_term_set(&p, &split, q).unwrap();
        for (a, d, e, g) in [(t.a1, t.d1, t.e1, t.g1), (t.a2, t.d2, t.e2, t.g2)] {
            assert!(a <= e + TOL && e <= g + TOL && d <= g + TOL && a <= d + TOL);
        }
        for (da, dd, de, dg) in [(t.da1, t.dd1, t.de1, t.dg1), (t.da2, t.dd2, t.de2, t.dg2)] {
            assert!(da <= de + TOL && de <= dg + TOL && dd <= dg + TOL);
            assert!(dg <= p.r0 + TOL);
        }
    }
}

#[test]
fn monte_carlo_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let mut checked = 0;
    let mut failures = Vec::new();
    for _ in 0..20 {
        let p = random_channel(&mut rng);
        let q = rng.gen_range(0.1..5.0);
        let m = build_model(&p, &PowerSplit::all_private(&p), q, None);
        failures.extend(monte_carlo_check(&m, &mut rng, 1_000_000));
        checked += m.observables.len() * (m.observables.len() + 1) / 2;
    }
    assert!(
        monte_carlo_ok(&failures, checked),
        "{} of {checked} entries outside 3 SE: {failures:?}",
        failures.len()
    );
}

#[test]
fn fig_example_covariance_by_monte_carlo() {
    let p = ChannelParams::symmetric(1.0, 0.5, 0.5, 0.1, 10.0, 1.0, 1.0);
    let m = build_model(&p, &etw_split(&p), 1.0, None);
    assert!((m.covariance(YR, Y1).unwrap() - 5.5).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    let failures = monte_carlo_check(&m, &mut rng, 1_000_000);
    let k = m.observables.len();
    assert!(monte_carlo_ok(&failures, k * (k + 1) / 2), "{failures:?}");
}
