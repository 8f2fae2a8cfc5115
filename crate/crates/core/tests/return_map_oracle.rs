use pulsecouple_core::analysis::{
    iterate_return_map, two_clique_map, two_clique_oracle_step, TwoCliqueMap, TwoCliqueState,
};
use pulsecouple_core::{CouplingParams, CurveSpec, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(n: usize) -> (CurveSpec, CouplingParams, ModelParams) {
    let curve = CurveSpec::exponential(1.05).unwrap();
    let coupling = CouplingParams::new(n, 0.001, 0.1).unwrap();
    (curve, coupling, ModelParams::new(curve, coupling).unwrap())
}

#[test]
fn map_matches_engine_on_small_networks() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for n in [2usize, 3, 7, 20] {
        let (c, k, p) = setup(n);
        for _ in 0..30 {
            let theta = rng.gen_range(1e-3..0.999);
            let m = rng.gen_range(1..n);
            let map = two_clique_map(&TwoCliqueState::new(theta, m, n - m).unwrap(), &c, &k).unwrap();
            let sim = two_clique_oracle_step(theta, m, n - m, &p).unwrap();
            assert!((map.theta - sim.theta).abs() <= 1e-9, "n {n} theta {theta} m {m}");
            assert_eq!((map.p, map.q), (sim.p, sim.q));
        }
    }
}

#[test]
fn orbit_follows_engine_for_several_cycles() {
    // iterate the fixed-labelling map and re-simulate every intermediate state
    let (c, k, p) = setup(100);
    let s0 = TwoCliqueState::new(0.02, 37, 63).unwrap();
    let orbit = iterate_return_map(&s0, 40, &c, &k, p.tol_phase).unwrap();
    for w in orbit.states.windows(2) {
        let sim = two_clique_oracle_step(w[0].theta, w[0].p, w[0].q, &p).unwrap();
        assert!((sim.theta - w[1].theta).abs() <= 1e-9);
        assert_eq!((sim.p, sim.q), (w[1].p, w[1].q));
    }
    assert!(!orbit.reached_zero);
}

#[test]
fn branches_positive() {
    let (c, k, _) = setup(100);
    for m in [1usize, 13, 50, 99] {
        let map = TwoCliqueMap::new(c, k, m).unwrap();
        for i in 1..1000 {
            let short = 0.1 * i as f64 / 1000.0;
            let long = 0.1 + 0.9 * (i - 1) as f64 / 1000.0;
            assert!(map.g1(short) > 0.0 && map.g2(short) > 0.0, "m {m} theta {short}");
            assert!(map.g3(long) > 0.0 && map.g4(long) > 0.0, "m {m} theta {long}");
        }
    }
}

#[test]
fn short_branch_expands() {
    // dG1/dtheta > 1 on (0, tau) together with G1(0) = 0 gives G1(theta) > theta.
    let (c, k, _) = setup(100);
    let map = TwoCliqueMap::new(c, k, 40).unwrap();
    for i in 1..100 {
        let theta = 0.1 * i as f64 / 100.0;
        assert!(map.g1(theta) > theta);
    }
}
