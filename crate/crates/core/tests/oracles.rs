//! Numerical oracle checks that span modules: flow positivity, steady state
//! against long-time integration, and closed forms on fresh random grids.

use std::f64::consts::{FRAC_PI_2, TAU};

use qfb_core::analytic;
use qfb_core::campaign::{self, Family, FormulaId, Status, ValidationGrid};
use qfb_core::metrics::{self, ObservablePair};
use qfb_core::{evolve, steady_state, DensityMatrix, EvolveOptions, FeedbackOperator, Method};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn time_grid(t_max: f64, dt: f64) -> Vec<f64> {
    let n = (t_max / dt).round() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

#[test]
fn positivity_along_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let f = if rng.gen_bool(0.5) {
            FeedbackOperator::Xy { lambda: rng.gen_range(-2.0..2.0), beta: rng.gen_range(0.0..TAU) }
        } else {
            FeedbackOperator::Z { mu: rng.gen_range(-2.0..2.0) }
        };
        let rho0 = DensityMatrix::initial(rng.gen_range(0.0..TAU));
        let traj = evolve(&rho0, &f, &EvolveOptions::new(Method::rk4(), time_grid(5.0, 0.05))).unwrap();
        for (_, rho) in traj.iter() {
            assert!(rho.min_eigenvalue() >= -1e-9);
            assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-9);
        }
        traj.validate().unwrap();
    }
}

#[test]
fn steady_state_equals_long_time_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        // stay away from the dephasing line λ cos β = −1/2 where relaxation is slow
        let f = FeedbackOperator::Xy { lambda: rng.gen_range(0.0..1.5), beta: rng.gen_range(0.0..TAU) };
        let ss = steady_state(&f).unwrap();
        let end = evolve(&DensityMatrix::maximally_mixed(), &f, &EvolveOptions::endpoint(50.0)).unwrap();
        assert!((*end.last().unwrap().matrix() - *ss.matrix()).max_abs() <= 1e-8, "{f:?}");
    }
}

#[test]
fn steady_metrics_reproduce_published_limits() {
    let pair = ObservablePair::sigma_x_sigma_z();
    let ss = steady_state(&FeedbackOperator::Xy { lambda: 1.0, beta: FRAC_PI_2 }).unwrap();
    assert!((metrics::tightness_u(&ss, &pair) - 8.0 / 9.0).abs() < 1e-12);
    let ss = steady_state(&FeedbackOperator::Xy { lambda: 1.0, beta: 0.0 }).unwrap();
    let rep = metrics::report(&ss, &pair);
    assert!((rep.u - 16.0 / 25.0).abs() < 1e-12);
    assert!((rep.y - 8.0 / 25.0).abs() < 1e-12);
}

#[test]
fn z_closed_form_state_tracks_numerics() {
    let (alpha, mu, t) = (std::f64::consts::FRAC_PI_4, 0.3, 0.7);
    let num = evolve(&DensityMatrix::initial(alpha), &FeedbackOperator::Z { mu }, &EvolveOptions::endpoint(t)).unwrap();
    let printed = analytic::rho_z(alpha, mu, t).unwrap();
    assert!((*num.last().unwrap().matrix() - *printed.matrix()).max_abs() < 1e-6);
}

/// Confirmed status on the default grid must survive a fresh random grid.
#[test]
fn confirmed_formulas_hold_on_random_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for family in [Family::Xy, Family::Z] {
        let default = campaign::cross_validate(family, &ValidationGrid::default_for(family), campaign::CAMPAIGN_TOL);
        let mut fresh = ValidationGrid::default_for(family);
        fresh.id = "random".into();
        fresh.alphas = (0..3).map(|_| rng.gen_range(0.0..TAU)).collect();
        fresh.strengths = (0..3)
            .map(|_| match family {
                Family::Xy => rng.gen_range(-1.5..1.5),
                Family::Z => rng.gen_range(-1.5..1.5f64),
            })
            .collect();
        if family == Family::Xy {
            fresh.betas = (0..3).map(|_| rng.gen_range(0.0..TAU)).collect();
            fresh.steady_lambdas = (0..5).map(|_| rng.gen_range(-1.5..1.5)).collect();
            fresh.steady_betas = (0..5).map(|_| rng.gen_range(0.0..TAU)).collect();
            fresh.consistency_lambdas = (0..50).map(|_| rng.gen_range(-3.0..3.0)).collect();
        }
        fresh.times = vec![0.0, rng.gen_range(0.1..1.0), rng.gen_range(1.0..3.0)];
        let again = campaign::cross_validate(family, &fresh, campaign::CAMPAIGN_TOL);
        for (a, b) in default.iter().zip(again.iter()) {
            assert_eq!(a.formula, b.formula);
            if a.status == Status::Confirmed && b.points > 0 {
                assert_eq!(b.status, Status::Confirmed, "{:?} fails on fresh grid: {}", b.formula, b.max_abs_error);
            }
        }
    }
}

#[test]
fn default_campaign_classification() {
    let xy = campaign::cross_validate(Family::Xy, &ValidationGrid::default_xy(), campaign::CAMPAIGN_TOL);
    let z = campaign::cross_validate(Family::Z, &ValidationGrid::default_z(), campaign::CAMPAIGN_TOL);
    let status = |id: FormulaId| xy.iter().chain(z.iter()).find(|s| s.formula == id).unwrap().status;
    use FormulaId::*;
    for id in [
        XyPopulation, XyCoherenceAmended, XyVarA, XyVarB, XyAnticommutator, XyMixedness,
        SteadyXyU, SteadyXyY, SteadySigmaXU, SteadySigmaXY, SteadySigmaYU, SteadySigmaYY,
        SpecializationSigmaX, SpecializationSigmaY, SteadyRatio,
        ZInitialState, ZPopulation, ZCoherence, ZVarA, ZVarB, ZAnticommutator, SteadyZ,
    ] {
        assert_eq!(status(id), Status::Confirmed, "{id:?}");
    }
    for id in [XyInitialState, XyCoherence, XyCommutator, ZCommutator, ZMixedness] {
        assert_eq!(status(id), Status::Discrepant, "{id:?}");
    }
}
