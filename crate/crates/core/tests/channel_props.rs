mod common;

use common::{random_state, rng};
use proptest::prelude::*;
use rand::Rng;
use sgad_core::channel::{default_step, integrate_master, LindbladMode, LindbladSpec};
use sgad_core::channel::{
    apply_correlated, apply_memory, apply_uncorrelated, asymptotic_state, choi_matrix, correlated_map,
    kraus_completeness_residual, kraus_single, memory_map, uncorrelated_map, ChannelTime, ChoiMode,
    MemoryParam, SgadParams,
};
use sgad_core::states::validate;

fn params(n: f64, frac: f64) -> SgadParams {
    SgadParams::unit_rate(n, frac * SgadParams::max_m(n)).unwrap()
}

fn at(p: &SgadParams, omega_t: f64) -> ChannelTime {
    ChannelTime::from_omega_t(omega_t, p).unwrap()
}

#[test]
fn kraus_completeness_on_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let n = 10.0 * i as f64 / 19.0;
        for j in 0..20 {
            let p = params(n, j as f64 / 19.0);
            for omega_t in [0.05, 0.7, 3.0] {
                let k = kraus_single(&p, at(&p, omega_t)).unwrap();
                worst = worst.max(kraus_completeness_residual(&k));
            }
        }
    }
    assert!(worst < 1e-12, "worst completeness residual {worst:e}");
}

#[test]
fn rk4_matches_closed_forms() {
    let mut seed = 0u64;
    for n in [0.1, 1.0, 5.0] {
        for frac in [0.0, 0.9] {
            let p = params(n, frac);
            for omega_t in [0.1, 1.0, 5.0] {
                let t = at(&p, omega_t);
                let dt = default_step(&p);
                for _ in 0..50 {
                    seed += 1;
                    let rho = random_state(seed);
                    for (mode, exact) in [
                        (LindbladMode::Uncorrelated, apply_uncorrelated(&rho, &p, t).unwrap()),
                        (LindbladMode::Correlated, apply_correlated(&rho, &p, t).unwrap()),
                    ] {
                        let spec = LindbladSpec::new(p, mode);
                        let numeric = integrate_master(&rho, &spec, t, dt).unwrap();
                        let err = numeric.matrix().max_abs_diff(exact.matrix());
                        assert!(err < 1e-7, "{mode:?} n={n} m/max={frac} Ωt={omega_t}: {err:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn memory_map_outputs_are_states() {
    let mut r = rng(11);
    for k in 0..100 {
        let rho = random_state(1000 + k);
        let n = r.random_range(0.0..10.0);
        let p = params(n, r.random::<f64>());
        let mem = MemoryParam::new(r.random()).unwrap();
        let t = at(&p, r.random_range(0.0..8.0));
        let out = memory_map(rho.matrix(), &p, t, mem).unwrap();
        assert!(validate(out).is_ok(), "case {k} not a state");
        assert!(apply_memory(&rho, &p, ChannelTime::Asymptotic, mem).is_ok());
    }
}

#[test]
fn choi_matrices_are_positive() {
    for n in [0.0, 0.1, 1.0, 10.0] {
        for frac in [0.0, 0.5, 1.0] {
            let p = params(n, frac);
            for omega_t in [0.01, 0.5, 4.0] {
                let t = at(&p, omega_t);
                for mode in [
                    ChoiMode::UncorrelatedSingle,
                    ChoiMode::Correlated,
                    ChoiMode::Memory(MemoryParam::new(0.3).unwrap()),
                ] {
                    let report = choi_matrix(&p, t, mode).unwrap();
                    assert!(report.is_cp(), "{mode:?} n={n} frac={frac} Ωt={omega_t}: {}", report.min_eigenvalue);
                }
            }
        }
    }
}

#[test]
fn asymptote_does_not_depend_on_m() {
    for n in [0.0, 0.5, 3.0] {
        for seed in 0..5 {
            let rho = random_state(seed);
            let mem = MemoryParam::new(0.6).unwrap();
            let a = asymptotic_state(&rho, &params(n, 0.0), mem).unwrap();
            let b = asymptotic_state(&rho, &params(n, 1.0), mem).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maps_preserve_trace_and_hermiticity(
        seed in any::<u64>(), n in 0.0f64..10.0, frac in 0.0f64..=1.0,
        omega_t in 0.0f64..10.0, mu in 0.0f64..=1.0,
    ) {
        let rho = random_state(seed);
        let p = params(n, frac);
        let t = at(&p, omega_t);
        let outs = [
            uncorrelated_map(rho.matrix(), &p, t).unwrap(),
            correlated_map(rho.matrix(), &p, t).unwrap(),
            memory_map(rho.matrix(), &p, t, MemoryParam::new(mu).unwrap()).unwrap(),
        ];
        for out in outs {
            prop_assert!((out.trace().re - 1.0).abs() < 1e-12);
            prop_assert!(out.trace().im.abs() < 1e-12);
            prop_assert!(out.hermitian_deviation() < 1e-12);
        }
    }

    #[test]
    fn evolution_is_a_semigroup(
        seed in any::<u64>(), n in 0.0f64..5.0, frac in 0.0f64..=1.0,
        s in 0.0f64..3.0, u in 0.0f64..3.0,
    ) {
        let rho = random_state(seed);
        let p = params(n, frac);
        let whole = at(&p, s + u);
        let (first, second) = (at(&p, s), at(&p, u));
        let direct = uncorrelated_map(rho.matrix(), &p, whole).unwrap();
        let composed = uncorrelated_map(&uncorrelated_map(rho.matrix(), &p, first).unwrap(), &p, second).unwrap();
        prop_assert!(direct.max_abs_diff(&composed) < 1e-12);
        let direct = correlated_map(rho.matrix(), &p, whole).unwrap();
        let composed = correlated_map(&correlated_map(rho.matrix(), &p, first).unwrap(), &p, second).unwrap();
        prop_assert!(direct.max_abs_diff(&composed) < 1e-12);
    }

    #[test]
    fn populations_do_not_depend_on_m(seed in any::<u64>(), n in 0.0f64..5.0, omega_t in 0.0f64..5.0) {
        let rho = random_state(seed);
        let (p0, p1) = (params(n, 0.0), params(n, 1.0));
        for map in [uncorrelated_map, correlated_map] {
            let a = map(rho.matrix(), &p0, at(&p0, omega_t)).unwrap().diagonal();
            let b = map(rho.matrix(), &p1, at(&p1, omega_t)).unwrap().diagonal();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn memory_interpolates_linearly(seed in any::<u64>(), n in 0.0f64..5.0, mu in 0.0f64..=1.0, omega_t in 0.0f64..5.0) {
        let rho = random_state(seed);
        let p = params(n, 0.5);
        let t = at(&p, omega_t);
        let mixed = memory_map(rho.matrix(), &p, t, MemoryParam::new(mu).unwrap()).unwrap();
        let u = uncorrelated_map(rho.matrix(), &p, t).unwrap();
        let c = correlated_map(rho.matrix(), &p, t).unwrap();
        let expected = &c.scale(mu) + &u.scale(1.0 - mu);
        prop_assert!(mixed.max_abs_diff(&expected) < 1e-14);
    }
}
