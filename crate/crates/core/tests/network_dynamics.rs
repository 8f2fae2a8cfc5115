use pulsecouple_core::analysis::{
    audit_run, cluster_partition, fig3_construct, is_completely_synchronized, Tolerances,
};
use pulsecouple_core::{validate_assumptions, CouplingParams, CurveSpec, ModelParams, NetworkState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(n: usize, epsilon: f64, tau: f64) -> ModelParams {
    ModelParams::new(
        CurveSpec::exponential(1.05).unwrap(),
        CouplingParams::new(n, epsilon, tau).unwrap(),
    )
    .unwrap()
}

fn uniform_phases(rng: &mut ChaCha8Rng, n: usize, low: f64, high: f64) -> Vec<f64> {
    (0..n).map(|_| high - rng.gen::<f64>() * (high - low)).collect()
}

/// Random (N, epsilon, tau) satisfying f(2 tau) + N epsilon < 1.
fn random_admissible(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let n = rng.gen_range(2..40);
        let tau = rng.gen_range(0.01..0.3);
        let epsilon = rng.gen_range(0.0..0.02);
        let p = model(n, epsilon, tau);
        if validate_assumptions(&p.curve, &p.coupling).unwrap().a2_holds {
            return p;
        }
    }
}

#[test]
fn refractory_and_single_pulse_audits_hold_for_admissible_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11d);
    for _ in 0..25 {
        let p = random_admissible(&mut rng);
        let phases = uniform_phases(&mut rng, p.n(), 0.0, 1.0);
        let mut s = NetworkState::new(p, &phases).unwrap();
        let reports = s.run_until_time(30.0).unwrap();
        let audit = audit_run(&reports, s.fire_logs(), &p);
        assert!(audit.lemma1_ok, "{p:?}: gap {}", audit.min_interfire_gap);
        assert!(audit.lemma2_ok, "{p:?}: {audit:?}");
    }
}

#[test]
fn strong_coupling_can_break_refractory_bound() {
    // Far outside the admissible region a pulse volley can fire a freshly
    // reset oscillator again; the audit must notice.
    let p = model(20, 0.2, 0.05);
    assert!(!validate_assumptions(&p.curve, &p.coupling).unwrap().a2_holds);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let phases = uniform_phases(&mut rng, 20, 0.0, 1.0);
    let mut s = NetworkState::new(p, &phases).unwrap();
    let reports = s.run_until_time(20.0).unwrap();
    let audit = audit_run(&reports, s.fire_logs(), &p);
    assert!(audit.min_interfire_gap < 2.0 * p.tau());
    assert!(!audit.lemma1_ok && !audit.lemma2_ok);
    assert!(audit.max_pipeline_per_source >= 2);
}

#[test]
fn one_pulse_absorbs_two_oscillators() {
    // N = 3, eps = 0.05, tau = 0.1. A fires at 0; its pulse lands at 0.1 on
    // B (0.9) and C (0.95). f^-1(1 - eps) ~= 0.7723 < 0.9, so both are
    // pulled to threshold together and reset as one.
    let p = model(3, 0.05, 0.1);
    let c = p.curve;
    let pull_in = c.inverse(1.0 - 0.05).unwrap();
    assert!((pull_in - 0.7723).abs() < 1e-3);
    assert!(0.9 > pull_in);
    let mut s = NetworkState::new(p, &[1.0, 0.8, 0.85]).unwrap();
    let first = s.step().unwrap();
    assert_eq!(first.fired, vec![0]);
    let second = s.step().unwrap();
    assert!((second.event_time - 0.1).abs() < 1e-15);
    assert_eq!(second.fired, vec![1, 2]);

    let tight = Tolerances::from(&p);
    for _ in 0..300 {
        s.step().unwrap();
        let part = cluster_partition(&s, tight);
        assert_eq!(part.cluster_of(1), part.cluster_of(2));
    }
}

#[test]
fn absorbed_clusters_persist() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..4 {
        let p = model(60, 0.002, 0.1);
        let phases = uniform_phases(&mut rng, 60, 0.0, 1.0);
        let mut s = NetworkState::new(p, &phases).unwrap();
        let tol = Tolerances::from(&p);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for _ in 0..20_000 {
            s.step().unwrap();
            let part = cluster_partition(&s, tol);
            for g in &groups {
                let k = part.cluster_of(g[0]);
                assert!(g.iter().all(|&i| part.cluster_of(i) == k), "group {g:?} split at {}", s.now());
            }
            for c in part.clusters.iter().filter(|c| c.len() > 1) {
                if !groups.contains(c) {
                    groups.push(c.clone());
                }
            }
        }
        assert!(!groups.is_empty());
    }
}

#[test]
fn equal_phase_and_pipeline_pairs_stay_equal() {
    // Duplicate two oscillators' initial phases: they start equal with empty
    // pipelines and must stay bit-identical.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut phases = uniform_phases(&mut rng, 30, 0.0, 1.0);
    phases[7] = phases[3];
    let mut s = NetworkState::new(model(30, 0.003, 0.1), &phases).unwrap();
    for _ in 0..5000 {
        s.step().unwrap();
        assert_eq!(s.phases()[3].to_bits(), s.phases()[7].to_bits());
        assert_eq!(s.offsets(3), s.offsets(7));
    }
}

#[test]
fn coincident_phases_without_synchrony() {
    let p = model(2, 0.001, 0.1);
    let sc = fig3_construct(&p).unwrap();
    let phi = sc.phi;
    let tol = Tolerances::from(&p);

    // sample several instants inside [tau, tau + phi)
    for frac in [0.0, 0.25, 0.5, 0.9] {
        let mut s = sc.state.clone();
        s.run_until_time(0.1 + frac * phi).unwrap();
        let v = is_completely_synchronized(&s, tol);
        assert!(v.phase_spread <= tol.phase, "spread {}", v.phase_spread);
        assert!(v.pipeline_mismatch && !v.synchronized);
    }

    // A's pulse reaches B at tau + phi and the phases split
    let mut s = sc.state.clone();
    let reports = s.run_until_time(0.1 + phi).unwrap();
    let last = reports.last().unwrap();
    assert!((last.event_time - (0.1 + phi)).abs() < 1e-12);
    assert_eq!(last.arrivals_per_receiver, vec![(1, 1)]);
    let v = is_completely_synchronized(&s, tol);
    assert!(v.phase_spread > 1e-6 && !v.synchronized);
}
