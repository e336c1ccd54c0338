use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relayic::detchannel::*;

fn random_params(rng: &mut ChaCha8Rng) -> DetChannelParams {
    DetChannelParams {
        n11: rng.gen_range(1..=3),
        n21: rng.gen_range(0..=3),
        n12: rng.gen_range(0..=3),
        n22: rng.gen_range(1..=3),
        nr1: rng.gen_range(0..=3),
        nr2: rng.gen_range(0..=3),
        r0bits: rng.gen_range(0..=2),
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<u8>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..=1)).collect())
        .collect()
}

fn random_scheme(rng: &mut ChaCha8Rng, p: &DetChannelParams) -> DetScheme {
    let k1 = rng.gen_range(0..=p.len1());
    let k2 = rng.gen_range(0..=p.len2());
    let (_, _, qr) = p.levels();
    DetScheme {
        k1,
        k2,
        enc1: random_matrix(rng, p.len1(), k1),
        enc2: random_matrix(rng, p.len2(), k2),
        relay_map: random_matrix(rng, p.r0bits as usize, qr),
    }
}

#[test]
fn rank_test_matches_exhaustive_decoding() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..2000 {
        let p = random_params(&mut rng);
        let s = random_scheme(&mut rng, &p);
        assert_eq!(
            simulate(&p, &s).unwrap(),
            simulate_exhaustive(&p, &s).unwrap(),
            "{p:?} {s:?}"
        );
    }
}

#[test]
fn extra_relay_bits_never_hurt() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..2000 {
        let p = random_params(&mut rng);
        let s = random_scheme(&mut rng, &p);
        let (_, _, qr) = p.levels();
        let mut more = s.clone();
        more.relay_map
            .push(random_matrix(&mut rng, 1, qr).remove(0));
        let wider = DetChannelParams {
            r0bits: p.r0bits + 1,
            ..p
        };
        let (a1, a2) = simulate(&p, &s).unwrap();
        let (b1, b2) = simulate(&wider, &more).unwrap();
        assert!((!a1 || b1) && (!a2 || b2));
    }
}

#[test]
fn frontier_witnesses_decode_and_frontier_is_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..30 {
        let mut p = random_params(&mut rng);
        p.r0bits = p.r0bits.min(1);
        let f = brute_force_best(&p, &SearchOptions::default()).unwrap();
        for (w, &(k1, k2)) in f.witnesses.iter().zip(&f.points) {
            assert_eq!((w.k1, w.k2), (k1, k2));
            assert_eq!(simulate_exhaustive(&p, w).unwrap(), (true, true));
        }
        for &(k1, k2) in &f.points {
            // no single-user increment of a frontier point is achievable
            for (a, b) in [(k1 + 1, k2), (k1, k2 + 1)] {
                assert!(!f.achieves(a, b));
            }
        }
    }
}

#[test]
fn relay_frontier_dominates_no_relay_frontier() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..30 {
        let mut p = random_params(&mut rng);
        p.r0bits = 1;
        let with = brute_force_best(&p, &SearchOptions::default()).unwrap();
        let without = brute_force_best(
            &DetChannelParams { r0bits: 0, ..p },
            &SearchOptions::default(),
        )
        .unwrap();
        for &(a, b) in &without.points {
            assert!(with.achieves(a, b));
        }
    }
}

#[test]
fn fixtures_verify_quickly() {
    let start = std::time::Instant::now();
    assert!(verify_example1().unwrap().passed());
    assert!(verify_example2().unwrap().passed());
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

fn all_matrices(rows: usize, cols: usize) -> Vec<Vec<Vec<u8>>> {
    (0u32..1 << (rows * cols))
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

/// Achievability by trying every encoder and relay matrix with exhaustive decoding.
fn naive_achievable(p: &DetChannelParams, k1: usize, k2: usize) -> bool {
    let (_, _, qr) = p.levels();
    for relay_map in all_matrices(p.r0bits as usize, qr) {
        for enc1 in all_matrices(p.len1(), k1) {
            for enc2 in all_matrices(p.len2(), k2) {
                let s = DetScheme {
                    k1,
                    k2,
                    enc1: enc1.clone(),
                    enc2,
                    relay_map: relay_map.clone(),
                };
                if simulate_exhaustive(p, &s).unwrap() == (true, true) {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn frontier_matches_naive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..25 {
        let p = DetChannelParams {
            n11: rng.gen_range(1..=2),
            n21: rng.gen_range(0..=2),
            n12: rng.gen_range(0..=2),
            n22: rng.gen_range(1..=2),
            nr1: rng.gen_range(0..=2),
            nr2: rng.gen_range(0..=2),
            r0bits: rng.gen_range(0..=1),
        };
        let f = brute_force_best(&p, &SearchOptions::default()).unwrap();
        for k1 in 0..=p.len1() {
            for k2 in 0..=p.len2() {
                assert_eq!(
                    f.achieves(k1, k2),
                    naive_achievable(&p, k1, k2),
                    "{p:?} ({k1}, {k2})"
                );
            }
        }
    }
}
