use proptest::prelude::*;
use qdm_core::dynamics::{propagator_expm, qubit_observables, steady_state};
use qdm_core::physics::hierarchy_ok;
use qdm_core::qcore::{hermitize, trace_distance, DensityMatrix};
use qdm_core::scenarios::{
    preset, run_scenario, sweep_t0, sweep_temperature, InitialState, ModelKind, ModelSystem, ScenarioConfig, TimeGrid,
};

fn short(mut cfg: ScenarioConfig, stop: f64, points: usize) -> ScenarioConfig {
    cfg.t_grid = TimeGrid { start: 0.0, stop, points };
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn long_time_state_forgets_initial_state(seed_a in any::<u64>(), seed_b in any::<u64>()) {
        let cfg = preset("fig3a").unwrap();
        let l = ModelSystem::build(&cfg).unwrap().liouvillian().unwrap();
        let p = propagator_expm(&l, 300.0).unwrap();
        let finals: Vec<DensityMatrix> = [seed_a, seed_b]
            .iter()
            .map(|&s| {
                let rho = InitialState::Random(s).build(l.basis()).unwrap();
                DensityMatrix::new(l.basis().clone(), hermitize(&p.apply_matrix(rho.matrix()))).unwrap()
            })
            .collect();
        prop_assert!(trace_distance(&finals[0], &finals[1]).unwrap() < 1e-6);
    }

    #[test]
    fn trajectories_stay_physical(
        seed in any::<u64>(),
        omega in 5.0f64..40.0,
        ratio in 0.2f64..0.8,
        temperature in 0.0f64..4.0,
    ) {
        let mut cfg = short(preset("fig3a").unwrap(), 6.0, 13);
        cfg.initial_state = InitialState::Random(seed);
        cfg.drive.omega = omega;
        cfg.drive.omega_m = ratio * omega;
        cfg.phonons = true;
        cfg.temperature = temperature;
        let system = ModelSystem::build(&cfg).unwrap();
        let l = system.liouvillian().unwrap();
        let rho0 = cfg.initial_state.build(system.basis()).unwrap();
        let traj = qdm_core::dynamics::evolve(&rho0, &l, &cfg.t_grid.times(), 1e-8).unwrap();
        for (state, pops) in traj.states.iter().zip(&traj.populations) {
            prop_assert!(state.min_eigenvalue() >= -1e-8);
            prop_assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            prop_assert!(pops.iter().all(|&p| p >= -1e-8));
        }
        for (&c, &leak) in traj.concurrence.iter().zip(&traj.leak) {
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&c));
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&leak));
        }
    }

    #[test]
    fn hierarchy_respecting_steady_states_do_not_leak(
        omega in 4.0f64..40.0,
        ratio in 0.2f64..0.8,
        temperature in 0.0f64..4.0,
        t_e in prop_oneof![Just(0.0), 10.0f64..3000.0],
        eight in any::<bool>(),
    ) {
        let mut cfg = preset(if eight { "fig4a" } else { "fig3a" }).unwrap();
        cfg.drive.omega = omega;
        cfg.drive.omega_m = ratio * omega;
        cfg.phonons = true;
        cfg.temperature = temperature;
        if eight {
            cfg.coupling.t_e = t_e;
        }
        prop_assume!(hierarchy_ok(&cfg.drive, &cfg.coupling));
        let system = ModelSystem::build(&cfg).unwrap();
        let rho0 = cfg.initial_state.build(system.basis()).unwrap();
        let keep = system.reachable_from(&rho0);
        let ss = steady_state(&system.restrict(&keep).liouvillian().unwrap()).unwrap();
        let (_, leak) = qubit_observables(&ss).unwrap();
        prop_assert!(leak < 0.05, "leak {leak}");
    }

    #[test]
    fn sweep_rows_match_grid(n_omega in 1usize..3, n_m in 1usize..4, n_t in 1usize..3, n_e in 1usize..3) {
        let mut cfg = preset("fig3a").unwrap();
        cfg.t_max_ns = Some(2.0);
        let omega: Vec<f64> = (0..n_omega).map(|k| 10.0 + 10.0 * k as f64).collect();
        let omega_m: Vec<f64> = (0..n_m).map(|k| 3.0 + 3.0 * k as f64).collect();
        let res = sweep_t0(&cfg, &omega, &omega_m, &[1.2]).unwrap();
        prop_assert_eq!(res.rows.len(), n_omega * n_m);
        prop_assert_eq!(res.minima.len(), n_omega);

        let cfg = preset("fig4b").unwrap();
        let temps: Vec<f64> = (0..n_t).map(|k| k as f64).collect();
        let t_e: Vec<f64> = (0..n_e).map(|k| 1000.0 * k as f64).collect();
        prop_assert_eq!(sweep_temperature(&cfg, &temps, &t_e).unwrap().rows.len(), n_t * n_e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn reruns_are_bit_identical(seed in any::<u64>(), model in prop_oneof![
        Just(ModelKind::Effective6),
        Just(ModelKind::Full9),
    ]) {
        let mut cfg = short(preset("fig3a").unwrap(), 40.0, 9);
        cfg.model = model;
        cfg.initial_state = InitialState::Random(seed);
        cfg.t_max_ns = Some(400.0);
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        prop_assert_eq!(a.config_hash, b.config_hash);
        prop_assert_eq!(a.summary, b.summary);
        prop_assert_eq!(a.trajectory.concurrence, b.trajectory.concurrence);
        prop_assert_eq!(a.trajectory.populations, b.trajectory.populations);
    }
}
