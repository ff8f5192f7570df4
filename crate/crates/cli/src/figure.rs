//! Fixed presets that regenerate the data behind each figure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use anyhow::Result;
use qfb_core::campaign::Family;
use qfb_core::Method;

use crate::sweep::{Axis, Fixed, SteadySpec, SweepSpec};

pub const FIGURE_IDS: std::ops::RangeInclusive<u8> = 2..=10;

/// Ground, superposition, excited.
pub const THREE_STATES: [f64; 3] = [0.0, FRAC_PI_4, FRAC_PI_2];

/// Evaluation time of the λ and μ scans.
pub const EARLY_TIME: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Sweep(SweepSpec),
    Steady(SteadySpec),
}

impl Preset {
    pub fn csv(&self) -> Result<String> {
        match self {
            Preset::Sweep(s) => s.csv(),
            Preset::Steady(s) => s.csv(),
        }
    }
}

fn trajectories(family: Family, p1: f64, p2: f64) -> SweepSpec {
    let fixed = match family {
        Family::Xy => Fixed { alphas: THREE_STATES.to_vec(), lambdas: vec![p1], betas: vec![p2], mus: vec![] },
        Family::Z => Fixed { alphas: THREE_STATES.to_vec(), lambdas: vec![], betas: vec![], mus: vec![p1] },
    };
    SweepSpec {
        family,
        axis: Axis::Time,
        range: Axis::Time.default_range(),
        fixed,
        t: EARLY_TIME,
        method: Method::rk4(),
        analytic: false,
    }
}

fn lambda_scan(beta: f64) -> SweepSpec {
    SweepSpec {
        family: Family::Xy,
        axis: Axis::Lambda,
        range: Axis::Lambda.default_range(),
        fixed: Fixed { alphas: THREE_STATES.to_vec(), lambdas: vec![], betas: vec![beta], mus: vec![] },
        t: EARLY_TIME,
        method: Method::rk4(),
        analytic: false,
    }
}

fn steady_lambda(betas: Vec<f64>) -> SteadySpec {
    SteadySpec { family: Family::Xy, axis: Axis::Lambda, range: Axis::Lambda.default_range(), lambdas: vec![], betas }
}

pub fn preset(id: u8) -> Option<Preset> {
    Some(match id {
        2 => Preset::Sweep(trajectories(Family::Xy, 1.0, FRAC_PI_2)),
        3 => Preset::Steady(steady_lambda(vec![FRAC_PI_2])),
        4 => Preset::Sweep(lambda_scan(FRAC_PI_2)),
        5 => Preset::Sweep(trajectories(Family::Xy, 1.0, 0.0)),
        6 => Preset::Steady(steady_lambda(vec![0.0])),
        7 => Preset::Sweep(lambda_scan(0.0)),
        8 => Preset::Steady(steady_lambda(Axis::Beta.default_range().values())),
        9 => Preset::Sweep(trajectories(Family::Z, 1.0, 0.0)),
        10 => Preset::Sweep(SweepSpec {
            family: Family::Z,
            axis: Axis::Mu,
            range: Axis::Mu.default_range(),
            fixed: Fixed {
                alphas: Axis::Alpha.default_range().values(),
                lambdas: vec![],
                betas: vec![],
                mus: vec![],
            },
            t: EARLY_TIME,
            method: Method::rk4(),
            analytic: false,
        }),
        _ => return None,
    })
}

pub fn file_name(id: u8) -> String {
    format!("fig{id}.csv")
}
