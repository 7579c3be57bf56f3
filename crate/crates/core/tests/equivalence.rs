use polydec::battery::{random_code, random_costs, stream_rng};
use polydec::code::{EnumerationCaps, ParityCheckMatrix};
use polydec::decoder::{certify, lp_decode, ml_brute_force, solve_build, Outcome};
use polydec::decomposition::{lift_u_to_q, push_q_to_u, DEFAULT_MU_CAP};
use polydec::polytopes::{build, build_q, build_u, PolytopeKind};
use polydec::ring::RingSpec;
use proptest::prelude::*;

fn ring(i: usize) -> RingSpec {
    match i {
        0 => RingSpec::integers(2).unwrap(),
        1 => RingSpec::integers(3).unwrap(),
        2 => RingSpec::integers(4).unwrap(),
        _ => RingSpec::galois_default(2, 2).unwrap(),
    }
}

fn instance(seed: u64, r: usize, n: usize, m: usize) -> Option<(ParityCheckMatrix, polydec::channel::CostVector)> {
    let ring = ring(r);
    let mut rng = stream_rng(seed, 0);
    let h = random_code(&ring, n, m, 2..=4, &mut rng).ok()?;
    let c = random_costs(n, ring.cardinality(), &mut rng);
    Some((h, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn three_polytopes_share_the_optimum(seed in any::<u64>(), r in 0usize..4, n in 3usize..7, m in 1usize..3) {
        let Some((h, c)) = instance(seed, r, n, m) else { return Ok(()) };
        let caps = EnumerationCaps::default();
        let results: Vec<_> = PolytopeKind::ALL.iter().map(|&k| lp_decode(&h, &c, k, &caps)).collect();
        prop_assert!(results[0].objective.is_some());
        for r in &results[1..] {
            prop_assert_eq!(&r.objective, &results[0].objective);
        }
        let (_, ml) = ml_brute_force(&h, &c, &caps).unwrap();
        for r in &results {
            // the relaxation never does worse than ML
            prop_assert!(r.objective.as_ref().unwrap() <= &ml);
            if let Outcome::MlCertified(_) = r.outcome {
                prop_assert_eq!(r.objective.as_ref().unwrap(), &ml);
                prop_assert!(certify(r, &h, &c, &caps).unwrap());
            }
        }
    }

    #[test]
    fn vertices_map_between_q_and_u(seed in any::<u64>(), r in 0usize..4, n in 3usize..6) {
        let Some((h, c)) = instance(seed, r, n, 2) else { return Ok(()) };
        let caps = EnumerationCaps::default();
        let q = build_q(&h, &c, &caps).unwrap();
        let u = build_u(&h, &c, &caps).unwrap();
        let qv = solve_build(&q).unwrap().values;
        let uv = solve_build(&u).unwrap().values;
        let pushed = push_q_to_u(&q, &u, &qv).unwrap();
        prop_assert!(u.lp.is_feasible(&pushed));
        prop_assert_eq!(u.f_values(&pushed), q.f_values(&qv));
        prop_assert_eq!(u.lp.objective(&pushed), q.lp.objective(&qv));
        let lifted = lift_u_to_q(&u, &q, &uv, DEFAULT_MU_CAP).unwrap();
        prop_assert!(q.lp.is_feasible(&lifted));
        prop_assert_eq!(q.f_values(&lifted), u.f_values(&uv));
        prop_assert!(u.derived_constraints_hold(&uv).unwrap());
    }
}

#[test]
fn codewords_embed_into_every_polytope() {
    let caps = EnumerationCaps::default();
    for r in 0..4 {
        let Some((h, c)) = instance(99 + r as u64, r, 5, 2) else { continue };
        for word in h.enumerate_codebook(&caps).unwrap() {
            for kind in PolytopeKind::ALL {
                let b = build(kind, &h, &c, &caps).unwrap();
                let p = b.embed_codeword(&word).unwrap();
                assert!(b.lp.is_feasible(&p), "{kind} {word:?}");
                assert_eq!(b.lp.objective(&p), polydec::channel::word_cost(&c, &word).unwrap());
            }
        }
    }
}

#[test]
fn zero_divisor_rows_keep_q_and_s_equal() {
    // U is looser than Q when a check entry is a zero divisor, but the cascade
    // introduces only unit coefficients on the auxiliary symbols.
    let z4 = RingSpec::integers(4).unwrap();
    let caps = EnumerationCaps::default();
    let h = ParityCheckMatrix::from_codes(z4, &[vec![1, 2, 3, 2, 1], vec![2, 0, 1, 1, 0]]).unwrap();
    for seed in 0..10 {
        let c = random_costs(5, 4, &mut stream_rng(seed, 1));
        let q = lp_decode(&h, &c, PolytopeKind::Q, &caps).objective;
        let s = lp_decode(&h, &c, PolytopeKind::S, &caps).objective;
        assert!(q.is_some());
        assert_eq!(q, s, "seed {seed}");
    }
}
