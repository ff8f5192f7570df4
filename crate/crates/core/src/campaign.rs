//! Errata campaign: every printed closed form is compared with the numerical
//! master equation (RK4 at the default step, metrics evaluated on the state)
//! or, for steady limits, with the Liouvillian null space.
//!
//! A discrepancy is data, not a failure. Each formula gets a
//! [`FormulaStatus`]; a small set of formulas must confirm for a run to pass
//! (see [`FormulaId::must_confirm`]).

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use core::fmt::Write;

use crate::algebra::DensityMatrix;
use crate::analytic;
use crate::dynamics::{evolve, steady_state, EvolveOptions, FeedbackOperator, Method};
use crate::metrics::{self, ObservablePair, TightnessReport};

/// Default agreement tolerance for formulas checked against numerics.
pub const CAMPAIGN_TOL: f64 = 1e-6;
/// Tolerance for checks that involve no integration.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Xy,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    XyInitialState,
    XyPopulation,
    XyCoherence,
    XyCoherenceAmended,
    XyVarA,
    XyVarB,
    XyCommutator,
    XyAnticommutator,
    XyMixedness,
    SteadySigmaXU,
    SteadySigmaXY,
    SteadySigmaYU,
    SteadySigmaYY,
    SteadyXyU,
    SteadyXyY,
    SpecializationSigmaX,
    SpecializationSigmaY,
    SteadyRatio,
    ZInitialState,
    ZPopulation,
    ZCoherence,
    ZVarA,
    ZVarB,
    ZCommutator,
    ZAnticommutator,
    ZMixedness,
    SteadyZ,
}

impl FormulaId {
    pub const XY: [FormulaId; 18] = [
        FormulaId::XyInitialState,
        FormulaId::XyPopulation,
        FormulaId::XyCoherence,
        FormulaId::XyCoherenceAmended,
        FormulaId::XyVarA,
        FormulaId::XyVarB,
        FormulaId::XyCommutator,
        FormulaId::XyAnticommutator,
        FormulaId::XyMixedness,
        FormulaId::SteadySigmaXU,
        FormulaId::SteadySigmaXY,
        FormulaId::SteadySigmaYU,
        FormulaId::SteadySigmaYY,
        FormulaId::SteadyXyU,
        FormulaId::SteadyXyY,
        FormulaId::SpecializationSigmaX,
        FormulaId::SpecializationSigmaY,
        FormulaId::SteadyRatio,
    ];

    pub const Z: [FormulaId; 9] = [
        FormulaId::ZInitialState,
        FormulaId::ZPopulation,
        FormulaId::ZCoherence,
        FormulaId::ZVarA,
        FormulaId::ZVarB,
        FormulaId::ZCommutator,
        FormulaId::ZAnticommutator,
        FormulaId::ZMixedness,
        FormulaId::SteadyZ,
    ];

    pub fn of_family(family: Family) -> &'static [FormulaId] {
        match family {
            Family::Xy => &Self::XY,
            Family::Z => &Self::Z,
        }
    }

    pub fn label(self) -> &'static str {
        use FormulaId::*;
        match self {
            XyInitialState => "xy.rho(t=0)",
            XyPopulation => "xy.rho_ee",
            XyCoherence => "xy.rho_eg",
            XyCoherenceAmended => "xy.rho_eg.amended",
            XyVarA => "xy.var_A",
            XyVarB => "xy.var_B",
            XyCommutator => "xy.comm_sq",
            XyAnticommutator => "xy.anticomm_sq",
            XyMixedness => "xy.Y",
            SteadySigmaXU => "xy.steady.U[beta=pi/2]",
            SteadySigmaXY => "xy.steady.Y[beta=pi/2]",
            SteadySigmaYU => "xy.steady.U[beta=0]",
            SteadySigmaYY => "xy.steady.Y[beta=0]",
            SteadyXyU => "xy.steady.U",
            SteadyXyY => "xy.steady.Y",
            SpecializationSigmaX => "xy.steady.general=special[beta=pi/2]",
            SpecializationSigmaY => "xy.steady.general=special[beta=0]",
            SteadyRatio => "xy.steady.U=2Y",
            ZInitialState => "z.rho(t=0)",
            ZPopulation => "z.rho_ee",
            ZCoherence => "z.rho_eg",
            ZVarA => "z.var_A",
            ZVarB => "z.var_B",
            ZCommutator => "z.comm_sq",
            ZAnticommutator => "z.anticomm_sq",
            ZMixedness => "z.Y",
            SteadyZ => "z.steady.U=Y=0",
        }
    }

    /// Formulas whose failure fails a verification run.
    pub fn must_confirm(self) -> bool {
        use FormulaId::*;
        matches!(
            self,
            XyInitialState
                | ZInitialState
                | ZPopulation
                | SpecializationSigmaX
                | SpecializationSigmaY
                | SteadyRatio
        )
    }

    /// Checks that involve no numerical integration use [`EXACT_TOL`].
    pub fn tolerance(self, campaign_tol: f64) -> f64 {
        use FormulaId::*;
        match self {
            XyInitialState | ZInitialState | SpecializationSigmaX | SpecializationSigmaY
            | SteadyRatio => EXACT_TOL,
            _ => campaign_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Confirmed,
    Discrepant,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Confirmed => "CONFIRMED",
            Status::Discrepant => "DISCREPANT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaStatus {
    pub formula: FormulaId,
    pub status: Status,
    /// Infinite when some evaluation was non-finite; NaN when nothing was evaluated.
    pub max_abs_error: f64,
    pub tolerance: f64,
    pub points: usize,
    pub grid_id: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyKind {
    General,
    /// β = π/2, compared with the `λσx` specialization.
    SigmaX,
    /// β = 0, compared with the `λσy` specialization.
    SigmaY,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridPoint {
    XyTransient { alpha: f64, lambda: f64, beta: f64 },
    ZTransient { alpha: f64, mu: f64 },
    XySteady { lambda: f64, beta: f64, kind: SteadyKind },
    ZSteady { mu: f64 },
    /// Internal consistency of the printed steady forms at one λ.
    Consistency { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationGrid {
    pub id: String,
    pub alphas: Vec<f64>,
    /// λ for the XY family, μ for the Z family.
    pub strengths: Vec<f64>,
    /// XY family only.
    pub betas: Vec<f64>,
    pub times: Vec<f64>,
    pub steady_lambdas: Vec<f64>,
    pub steady_betas: Vec<f64>,
    pub consistency_lambdas: Vec<f64>,
}

/// `n + 1` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n == 0 {
        return alloc::vec![start];
    }
    (0..=n).map(|i| start + (stop - start) * (i as f64) / (n as f64)).collect()
}

impl ValidationGrid {
    pub fn default_xy() -> Self {
        ValidationGrid {
            id: String::from("xy-default"),
            alphas: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2, 1.0],
            strengths: alloc::vec![-1.0, -0.6, -0.25, 0.4, 1.0],
            betas: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2, 2.0, PI, 1.5 * PI],
            times: alloc::vec![0.0, 0.5, 1.0, 2.0],
            steady_lambdas: linspace(-1.0, 1.0, 20),
            steady_betas: linspace(0.0, TAU, 20),
            consistency_lambdas: linspace(-2.0, 2.0, 400),
        }
    }

    pub fn default_z() -> Self {
        ValidationGrid {
            id: String::from("z-default"),
            alphas: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2, 1.0],
            strengths: alloc::vec![0.0, 0.3, 1.0, -0.7],
            betas: Vec::new(),
            times: alloc::vec![0.0, 0.5, 1.0, 2.0],
            steady_lambdas: Vec::new(),
            steady_betas: Vec::new(),
            consistency_lambdas: Vec::new(),
        }
    }

    pub fn default_for(family: Family) -> Self {
        match family {
            Family::Xy => Self::default_xy(),
            Family::Z => Self::default_z(),
        }
    }

    /// All evaluation points in a fixed order.
    pub fn points(&self, family: Family) -> Vec<GridPoint> {
        let mut out = Vec::new();
        match family {
            Family::Xy => {
                for &alpha in &self.alphas {
                    for &lambda in &self.strengths {
                        for &beta in &self.betas {
                            out.push(GridPoint::XyTransient { alpha, lambda, beta });
                        }
                    }
                }
                for &lambda in &self.steady_lambdas {
                    for &beta in &self.steady_betas {
                        out.push(GridPoint::XySteady { lambda, beta, kind: SteadyKind::General });
                    }
                    out.push(GridPoint::XySteady { lambda, beta: FRAC_PI_2, kind: SteadyKind::SigmaX });
                    out.push(GridPoint::XySteady { lambda, beta: 0.0, kind: SteadyKind::SigmaY });
                }
                for &lambda in &self.consistency_lambdas {
                    out.push(GridPoint::Consistency { lambda });
                }
            }
            Family::Z => {
                for &alpha in &self.alphas {
                    for &mu in &self.strengths {
                        out.push(GridPoint::ZTransient { alpha, mu });
                    }
                }
                for &mu in &self.strengths {
                    out.push(GridPoint::ZSteady { mu });
                }
            }
        }
        out
    }
}

/// Per-point deviations; `skipped` explains a point that produced none.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointOutcome {
    pub errors: Vec<(FormulaId, f64)>,
    pub skipped: Option<String>,
}

impl PointOutcome {
    fn skip(why: impl Into<String>) -> Self {
        PointOutcome { errors: Vec::new(), skipped: Some(why.into()) }
    }
}

fn abs_err(a: f64, b: f64) -> f64 {
    let e = (a - b).abs();
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

fn matrix_err(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let e = (*a.matrix() - *b.matrix()).max_abs();
    if e.is_nan() {
        f64::INFINITY
    } else {
        e
    }
}

fn numeric_trajectory(alpha: f64, feedback: &FeedbackOperator, times: &[f64]) -> Option<Vec<DensityMatrix>> {
    let opts = EvolveOptions::new(Method::rk4(), times.to_vec());
    evolve(&DensityMatrix::initial(alpha), feedback, &opts).ok().map(|t| t.states)
}

fn quantity_errors(
    out: &mut Vec<(FormulaId, f64)>,
    ids: [FormulaId; 5],
    printed: &analytic::PrintedQuantities,
    numeric: &TightnessReport,
) {
    out.push((ids[0], abs_err(printed.var_a, numeric.var_a)));
    out.push((ids[1], abs_err(printed.var_b, numeric.var_b)));
    out.push((ids[2], abs_err(printed.comm_sq, 4.0 * numeric.comm_term)));
    out.push((ids[3], abs_err(printed.anticomm_sq, 4.0 * numeric.anticomm_term)));
    out.push((ids[4], abs_err(printed.y, numeric.y)));
}

/// Compares every formula that applies at one grid point with the oracle.
pub fn evaluate_point(point: &GridPoint, times: &[f64]) -> PointOutcome {
    use FormulaId::*;
    let pair = ObservablePair::sigma_x_sigma_z();
    let mut errors = Vec::new();
    match *point {
        GridPoint::XyTransient { alpha, lambda, beta } => {
            // probe the singular band once, at the first time
            if let Err(e) = analytic::rho_xy(alpha, lambda, beta, times.first().copied().unwrap_or(0.0)) {
                return PointOutcome::skip(alloc::format!("{e}"));
            }
            let feedback = FeedbackOperator::Xy { lambda, beta };
            let Some(states) = numeric_trajectory(alpha, &feedback, times) else {
                return PointOutcome::skip("integration failed");
            };
            for (&t, num) in times.iter().zip(states.iter()) {
                let rep = metrics::report(num, &pair);
                match analytic::rho_xy(alpha, lambda, beta, t) {
                    Ok(printed) => {
                        errors.push((XyPopulation, abs_err(printed.excited_population(), num.excited_population())));
                        errors.push((XyCoherence, abs_err(0.0, (printed.coherence() - num.coherence()).norm())));
                        if t == 0.0 {
                            errors.push((XyInitialState, matrix_err(&printed, &DensityMatrix::initial(alpha))));
                        }
                    }
                    Err(_) => errors.push((XyCoherence, f64::INFINITY)),
                }
                if let Ok(amended) = analytic::rho_xy_amended(alpha, lambda, beta, t) {
                    errors.push((XyCoherenceAmended, abs_err(0.0, (amended.coherence() - num.coherence()).norm())));
                }
                match analytic::quantities_xy(alpha, lambda, beta, t) {
                    Ok(q) => quantity_errors(
                        &mut errors,
                        [XyVarA, XyVarB, XyCommutator, XyAnticommutator, XyMixedness],
                        &q,
                        &rep,
                    ),
                    Err(_) => errors.push((XyVarA, f64::INFINITY)),
                }
            }
        }
        GridPoint::ZTransient { alpha, mu } => {
            if let Err(e) = analytic::rho_z(alpha, mu, 0.0) {
                return PointOutcome::skip(alloc::format!("{e}"));
            }
            let feedback = FeedbackOperator::Z { mu };
            let Some(states) = numeric_trajectory(alpha, &feedback, times) else {
                return PointOutcome::skip("integration failed");
            };
            for (&t, num) in times.iter().zip(states.iter()) {
                let rep = metrics::report(num, &pair);
                match analytic::rho_z(alpha, mu, t) {
                    Ok(printed) => {
                        errors.push((ZPopulation, abs_err(printed.excited_population(), num.excited_population())));
                        errors.push((ZCoherence, abs_err(0.0, (printed.coherence() - num.coherence()).norm())));
                        if t == 0.0 {
                            errors.push((ZInitialState, matrix_err(&printed, &DensityMatrix::initial(alpha))));
                        }
                    }
                    Err(_) => errors.push((ZPopulation, f64::INFINITY)),
                }
                match analytic::quantities_z(alpha, mu, t) {
                    Ok(q) => quantity_errors(
                        &mut errors,
                        [ZVarA, ZVarB, ZCommutator, ZAnticommutator, ZMixedness],
                        &q,
                        &rep,
                    ),
                    Err(_) => errors.push((ZVarA, f64::INFINITY)),
                }
            }
        }
        GridPoint::XySteady { lambda, beta, kind } => {
            let feedback = FeedbackOperator::Xy { lambda, beta };
            let rho = match steady_state(&feedback) {
                Ok(rho) => rho,
                Err(e) => return PointOutcome::skip(alloc::format!("{e}")),
            };
            let u = metrics::tightness_u(&rho, &pair);
            let y = metrics::mixedness_y(&rho);
            let (printed, ids) = match kind {
                SteadyKind::General => match analytic::steady_xy(lambda, beta) {
                    Ok(s) => {
                        errors.push((SteadyRatio, abs_err(s.u_inf, 2.0 * s.y_inf)));
                        (s, [SteadyXyU, SteadyXyY])
                    }
                    Err(e) => return PointOutcome::skip(alloc::format!("{e}")),
                },
                SteadyKind::SigmaX => (analytic::steady_sigma_x(lambda), [SteadySigmaXU, SteadySigmaXY]),
                SteadyKind::SigmaY => (analytic::steady_sigma_y(lambda), [SteadySigmaYU, SteadySigmaYY]),
            };
            errors.push((ids[0], abs_err(printed.u_inf, u)));
            errors.push((ids[1], abs_err(printed.y_inf, y)));
        }
        GridPoint::ZSteady { mu } => {
            let rho = match steady_state(&FeedbackOperator::Z { mu }) {
                Ok(rho) => rho,
                Err(e) => return PointOutcome::skip(alloc::format!("{e}")),
            };
            let printed = analytic::steady_z();
            let u = abs_err(printed.u_inf, metrics::tightness_u(&rho, &pair));
            let y = abs_err(printed.y_inf, metrics::mixedness_y(&rho));
            errors.push((SteadyZ, u.max(y)));
        }
        GridPoint::Consistency { lambda } => {
            for (beta, special, id) in [
                (FRAC_PI_2, analytic::steady_sigma_x(lambda), SpecializationSigmaX),
                (0.0, analytic::steady_sigma_y(lambda), SpecializationSigmaY),
            ] {
                match analytic::steady_xy(lambda, beta) {
                    Ok(general) => {
                        let e = abs_err(general.u_inf, special.u_inf).max(abs_err(general.y_inf, special.y_inf));
                        errors.push((id, e));
                    }
                    Err(_) => errors.push((id, f64::INFINITY)),
                }
            }
        }
    }
    PointOutcome { errors, skipped: None }
}

/// Aggregates per-point outcomes (in grid order) into one status per formula.
pub fn summarize(
    grid_id: &str,
    campaign_tol: f64,
    formulas: &[FormulaId],
    outcomes: impl IntoIterator<Item = PointOutcome>,
) -> Vec<FormulaStatus> {
    let mut worst: Vec<(f64, usize)> = alloc::vec![(0.0, 0); formulas.len()];
    let mut skipped = 0usize;
    for outcome in outcomes {
        if let Some(why) = &outcome.skipped {
            log::debug!("grid point skipped: {why}");
            skipped += 1;
        }
        for (id, err) in outcome.errors {
            if let Some(k) = formulas.iter().position(|f| *f == id) {
                let slot = &mut worst[k];
                slot.0 = if err.is_nan() { f64::INFINITY } else { slot.0.max(err) };
                slot.1 += 1;
            }
        }
    }
    if skipped > 0 {
        log::info!("{grid_id}: {skipped} grid point(s) skipped");
    }
    formulas
        .iter()
        .zip(worst)
        .map(|(&formula, (max_err, points))| {
            let tolerance = formula.tolerance(campaign_tol);
            let max_abs_error = if points == 0 { f64::NAN } else { max_err };
            let status = if points > 0 && max_abs_error <= tolerance {
                Status::Confirmed
            } else {
                Status::Discrepant
            };
            FormulaStatus { formula, status, max_abs_error, tolerance, points, grid_id: String::from(grid_id) }
        })
        .collect()
}

/// Runs the whole campaign for one family sequentially.
pub fn cross_validate(family: Family, grid: &ValidationGrid, campaign_tol: f64) -> Vec<FormulaStatus> {
    let outcomes = grid.points(family).into_iter().map(|p| evaluate_point(&p, &grid.times));
    summarize(&grid.id, campaign_tol, FormulaId::of_family(family), outcomes)
}

pub fn must_confirm_passed(statuses: &[FormulaStatus]) -> bool {
    statuses
        .iter()
        .filter(|s| s.formula.must_confirm())
        .all(|s| s.status == Status::Confirmed)
}

/// Aligned plain-text table: formula, status, max error, tolerance, points, grid, required.
pub fn render_report(statuses: &[FormulaStatus]) -> String {
    let width = statuses.iter().map(|s| s.formula.label().len()).max().unwrap_or(7).max(7);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:<10}  {:>13}  {:>9}  {:>6}  {:<12}  required",
        "formula", "status", "max_abs_error", "tolerance", "points", "grid"
    );
    for s in statuses {
        let _ = writeln!(
            out,
            "{:<width$}  {:<10}  {:>13.6e}  {:>9.1e}  {:>6}  {:<12}  {}",
            s.formula.label(),
            s.status.as_str(),
            s.max_abs_error,
            s.tolerance,
            s.points,
            s.grid_id,
            if s.formula.must_confirm() { "yes" } else { "no" }
        );
    }
    out
}
