use irrtorus::mixed_norms::{mixed_norm, MixedNormSpec};
use irrtorus::nls::{linear_step, nonlinear_step, small_data_profile, solve, NlsProblem};
use irrtorus::verify::{fit_scaling, make_data, DataFamily, ExperimentConfig, ExperimentKind, Sign};
use irrtorus::{FourierState, FrequencyRegion, IrrationalTorus, LatticePoint};
use num_complex::Complex64;
use proptest::prelude::*;

fn trilinear_factors(seed: u64) -> Vec<FourierState> {
    let torus = IrrationalTorus::generic(2).unwrap();
    let regions = [
        FrequencyRegion::cube(LatticePoint::new(&[6, 0]), 2),
        FrequencyRegion::centered_cube(2, 1),
        FrequencyRegion::cube(LatticePoint::new(&[0, 2]), 1),
    ];
    regions
        .iter()
        .enumerate()
        .map(|(j, r)| make_data(&torus, r, DataFamily::RandomPhase, seed, j as u64).unwrap())
        .collect()
}

fn lhs(factors: &[FourierState]) -> f64 {
    let spec = MixedNormSpec::new(4.0, 2.0, (0.0, 1.0)).with_rtol(1e-6);
    mixed_norm(factors, &spec).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn lhs_ignores_unimodular_constants(seed in 0u64..1000, a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        let factors = trilinear_factors(seed);
        let base = lhs(&factors);
        let rotated: Vec<FourierState> = factors
            .iter()
            .zip([a, b, c])
            .map(|(f, turn)| f.scaled(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * turn)))
            .collect();
        prop_assert!((lhs(&rotated) - base).abs() <= 1e-10 * base);
    }

    #[test]
    fn lhs_and_ratio_are_homogeneous(seed in 0u64..1000, l1 in 0.1f64..10.0, l2 in 0.1f64..10.0, l3 in 0.1f64..10.0) {
        let factors = trilinear_factors(seed);
        let norms = |fs: &[FourierState]| fs.iter().map(|f| f.l2_norm()).product::<f64>();
        let base = lhs(&factors);
        let scaled: Vec<FourierState> = factors
            .iter()
            .zip([l1, l2, l3])
            .map(|(f, l)| f.scaled(Complex64::new(l, 0.0)))
            .collect();
        let value = lhs(&scaled);
        prop_assert!((value - l1 * l2 * l3 * base).abs() <= 1e-10 * value);
        let r0 = base / norms(&factors);
        let r1 = value / norms(&scaled);
        prop_assert!((r1 - r0).abs() <= 1e-10 * r0);
    }

    #[test]
    fn exponent_guards_follow_the_hypotheses(p in 1.0f64..12.0) {
        let check = |kind, ok: bool| {
            let mut cfg = ExperimentConfig::new(kind);
            cfg.p = Some(p);
            prop_assert_eq!(cfg.validate().is_ok(), ok, "{:?} p = {}", kind, p);
            Ok(())
        };
        check(ExperimentKind::Trilinear2d, p > 2.0 && p <= 4.0)?;
        check(ExperimentKind::Linear2d, p > 6.0)?;
        check(ExperimentKind::Linear3d, p > 16.0 / 3.0)?;
    }

    #[test]
    fn fit_recovers_power_laws(s in -3.0f64..3.0, c in 0.01f64..100.0) {
        let pts: Vec<(f64, f64)> = (2..8).map(|j| {
            let x = (1u64 << j) as f64;
            (x, c * x.powf(s))
        }).collect();
        let fit = fit_scaling(&pts).unwrap();
        prop_assert!((fit.slope - s).abs() < 1e-10);
        prop_assert!((fit.intercept - c.log2()).abs() < 1e-9);
        prop_assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn sub_steps_preserve_mass(seed in 0u64..1000, dt in -1.0f64..1.0) {
        let torus = IrrationalTorus::generic(3).unwrap();
        let phi = small_data_profile(&torus, 2, 2, seed).unwrap();
        prop_assert!((linear_step(&phi, dt).l2_norm() - phi.l2_norm()).abs() <= 1e-13 * phi.l2_norm());
        let mut field: Vec<Complex64> = phi.sample_grid(8).unwrap().values;
        let before: Vec<f64> = field.iter().map(|z| z.norm()).collect();
        nonlinear_step(&mut field, dt, 2, Sign::Focusing);
        for (z, m) in field.iter().zip(&before) {
            prop_assert!((z.norm() - m).abs() <= 1e-14 * m.max(1.0));
        }
    }

    #[test]
    fn gauge_covariance(seed in 0u64..1000, theta in 0.0f64..std::f64::consts::TAU) {
        let torus = IrrationalTorus::generic(2).unwrap();
        let phi = small_data_profile(&torus, 2, 1, seed).unwrap().scaled(Complex64::new(0.5, 0.0));
        let rot = Complex64::from_polar(1.0, theta);
        let run = |init: FourierState| solve(&NlsProblem::new(init, 1, Sign::Defocusing, 0.05, 1e-3)).unwrap().final_state;
        let a = run(phi.scaled(rot));
        let b = run(phi).scaled(rot);
        prop_assert!(a.l2_distance(&b) <= 1e-12 * b.l2_norm());
    }
}
