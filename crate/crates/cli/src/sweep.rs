//! Sweep and steady-state scan engines. Points are computed in a bounded
//! rayon pool and gathered in grid order, so output does not depend on the
//! number of workers.

use std::fmt::Write as _;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;

use qfb_core::analytic;
use qfb_core::campaign::Family;
use qfb_core::metrics::{self, ObservablePair, TightnessReport};
use qfb_core::{evolve, steady_state, DensityMatrix, Error, EvolveOptions, FeedbackOperator, Method};

use crate::values::{usage, Range, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Axis {
    Time,
    Lambda,
    Beta,
    Mu,
    Alpha,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Time => "time",
            Axis::Lambda => "lambda",
            Axis::Beta => "beta",
            Axis::Mu => "mu",
            Axis::Alpha => "alpha",
        }
    }

    pub fn default_range(self) -> Range {
        use std::f64::consts::{FRAC_PI_2, PI, TAU};
        let (start, stop, step) = match self {
            Axis::Time => (0.0, 6.0, 0.01),
            Axis::Lambda | Axis::Mu => (-1.0, 1.0, 0.01),
            Axis::Beta => (0.0, TAU, 0.02),
            Axis::Alpha => (0.0, FRAC_PI_2, PI / 40.0),
        };
        Range { start, stop, step }
    }

    pub fn check_family(self, family: Family) -> Result<(), UsageError> {
        match (self, family) {
            (Axis::Lambda | Axis::Beta, Family::Z) => {
                Err(usage(format!("axis {} needs --feedback xy", self.name())))
            }
            (Axis::Mu, Family::Xy) => Err(usage("axis mu needs --feedback z")),
            _ => Ok(()),
        }
    }
}

pub fn parse_family(raw: &str) -> Result<Family, UsageError> {
    match raw.trim().to_ascii_lowercase().as_str() {
        "xy" => Ok(Family::Xy),
        "z" => Ok(Family::Z),
        _ => Err(usage(format!("feedback must be xy or z, got {raw:?}"))),
    }
}

pub fn parse_axis(raw: &str) -> Result<Axis, UsageError> {
    <Axis as clap::ValueEnum>::from_str(raw.trim(), true).map_err(|_| usage(format!("unknown axis {raw:?}")))
}

/// Values held fixed (or listed as extra series) while the axis is swept.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixed {
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub betas: Vec<f64>,
    pub mus: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub axis: Axis,
    pub range: Range,
    pub fixed: Fixed,
    /// Evaluation time for every axis other than `time`.
    pub t: f64,
    pub method: Method,
    pub analytic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Params {
    alpha: f64,
    p1: f64,
    p2: f64,
}

impl Params {
    fn feedback(&self, family: Family) -> FeedbackOperator {
        match family {
            Family::Xy => FeedbackOperator::Xy { lambda: self.p1, beta: self.p2 },
            Family::Z => FeedbackOperator::Z { mu: self.p1 },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub t: f64,
    pub alpha: f64,
    pub p1: f64,
    pub p2: f64,
    pub rho: DensityMatrix,
    pub report: TightnessReport,
    pub printed: Option<(f64, f64)>,
}

pub const EVOLVE_HEADER: &str =
    "t,alpha,param1,param2,rho_ee_re,rho_eg_re,rho_eg_im,var_A,var_B,comm_term,anticomm_term,U,W,Y";

/// 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), UsageError> {
        self.range.validate()?;
        self.axis.check_family(self.family)?;
        if self.axis == Axis::Time && self.range.start < 0.0 {
            return Err(usage("time axis must start at t >= 0"));
        }
        if self.axis != Axis::Time && !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(usage(format!("evaluation time must be >= 0, got {}", self.t)));
        }
        let lists: [(&str, &[f64], bool); 4] = [
            ("alpha", &self.fixed.alphas, self.axis != Axis::Alpha),
            ("lambda", &self.fixed.lambdas, self.family == Family::Xy && self.axis != Axis::Lambda),
            ("beta", &self.fixed.betas, self.family == Family::Xy && self.axis != Axis::Beta),
            ("mu", &self.fixed.mus, self.family == Family::Z && self.axis != Axis::Mu),
        ];
        for (name, list, needed) in lists {
            if needed && list.is_empty() {
                return Err(usage(format!("no value for {name}")));
            }
        }
        Ok(())
    }

    /// One task per series on the time axis, one per point otherwise, in output order.
    fn tasks(&self) -> (Vec<Params>, Vec<f64>) {
        let axis_values = self.range.values();
        let pick = |axis: Axis, list: &[f64]| if self.axis == axis { axis_values.clone() } else { list.to_vec() };
        let alphas = pick(Axis::Alpha, &self.fixed.alphas);
        let (first, second) = match self.family {
            Family::Xy => (pick(Axis::Lambda, &self.fixed.lambdas), pick(Axis::Beta, &self.fixed.betas)),
            Family::Z => (pick(Axis::Mu, &self.fixed.mus), vec![0.0]),
        };
        let mut tasks = Vec::with_capacity(alphas.len() * first.len() * second.len());
        for &alpha in &alphas {
            for &p1 in &first {
                for &p2 in &second {
                    tasks.push(Params { alpha, p1, p2 });
                }
            }
        }
        let times = if self.axis == Axis::Time { axis_values } else { vec![self.t] };
        (tasks, times)
    }

    fn printed(&self, p: &Params, t: f64) -> (f64, f64) {
        let q = match self.family {
            Family::Xy => analytic::quantities_xy(p.alpha, p.p1, p.p2, t),
            Family::Z => analytic::quantities_z(p.alpha, p.p1, t),
        };
        match q {
            Ok(q) => (q.var_a * q.var_b - 0.25 * q.comm_sq, q.y),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }

    fn run_task(&self, p: &Params, times: &[f64]) -> Result<Vec<Row>> {
        let feedback = p.feedback(self.family);
        let opts = EvolveOptions::new(self.method, times.to_vec());
        let traj = evolve(&DensityMatrix::initial(p.alpha), &feedback, &opts)
            .with_context(|| format!("evolution failed at alpha={}, {feedback:?}", p.alpha))?;
        if let Some((t, e)) = traj.first_invalid() {
            return Err(anyhow!("state invalid at t={t}, alpha={}, {feedback:?}: {e}", p.alpha));
        }
        let pair = ObservablePair::sigma_x_sigma_z();
        Ok(traj
            .iter()
            .map(|(t, rho)| Row {
                t,
                alpha: p.alpha,
                p1: p.p1,
                p2: p.p2,
                rho: *rho,
                report: metrics::report(rho, &pair),
                printed: self.analytic.then(|| self.printed(p, t)),
            })
            .collect())
    }

    pub fn rows(&self) -> Result<Vec<Row>> {
        self.validate()?;
        let (tasks, times) = self.tasks();
        let chunks: Vec<Vec<Row>> = tasks.par_iter().map(|p| self.run_task(p, &times)).collect::<Result<_>>()?;
        Ok(chunks.into_iter().flatten().collect())
    }

    pub fn header(&self) -> String {
        let mut h = String::from(EVOLVE_HEADER);
        if self.analytic {
            h.push_str(",U_printed,Y_printed");
        }
        h
    }

    pub fn render(&self, rows: &[Row]) -> String {
        let mut out = self.header();
        out.push('\n');
        for r in rows {
            let m = &r.report;
            let coh = r.rho.coherence();
            let mut fields = vec![
                r.t,
                r.alpha,
                r.p1,
                r.p2,
                r.rho.excited_population(),
                coh.re,
                coh.im,
                m.var_a,
                m.var_b,
                m.comm_term,
                m.anticomm_term,
                m.u,
                m.w,
                m.y,
            ];
            if let Some((u, y)) = r.printed {
                fields.extend([u, y]);
            }
            let line: Vec<String> = fields.into_iter().map(fmt_f64).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn csv(&self) -> Result<String> {
        Ok(self.render(&self.rows()?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadySpec {
    pub family: Family,
    pub axis: Axis,
    pub range: Range,
    /// Series values for the XY parameter that is not swept.
    pub lambdas: Vec<f64>,
    pub betas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyRow {
    pub lambda: f64,
    pub beta: f64,
    pub u_numeric: f64,
    pub y_numeric: f64,
    pub u_printed: f64,
    pub y_printed: f64,
    pub status: String,
}

impl SteadyRow {
    pub fn abs_diff(&self) -> (f64, f64) {
        ((self.u_numeric - self.u_printed).abs(), (self.y_numeric - self.y_printed).abs())
    }
}

impl SteadySpec {
    pub fn validate(&self) -> Result<(), UsageError> {
        self.range.validate()?;
        self.axis.check_family(self.family)?;
        match (self.family, self.axis) {
            (Family::Xy, Axis::Lambda) if self.betas.is_empty() => Err(usage("no value for beta")),
            (Family::Xy, Axis::Beta) if self.lambdas.is_empty() => Err(usage("no value for lambda")),
            (_, Axis::Time | Axis::Alpha) => {
                Err(usage(format!("steady scan cannot run along {}", self.axis.name())))
            }
            _ => Ok(()),
        }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let values = self.range.values();
        match (self.family, self.axis) {
            (Family::Xy, Axis::Lambda) => {
                self.betas.iter().flat_map(|&b| values.iter().map(move |&l| (l, b))).collect()
            }
            (Family::Xy, _) => {
                self.lambdas.iter().flat_map(|&l| values.iter().map(move |&b| (l, b))).collect()
            }
            (Family::Z, _) => values.iter().map(|&m| (m, 0.0)).collect(),
        }
    }

    fn evaluate(&self, (p1, p2): (f64, f64)) -> SteadyRow {
        let (feedback, printed) = match self.family {
            Family::Xy => (FeedbackOperator::Xy { lambda: p1, beta: p2 }, analytic::steady_xy(p1, p2)),
            Family::Z => (FeedbackOperator::Z { mu: p1 }, Ok(analytic::steady_z())),
        };
        let pair = ObservablePair::sigma_x_sigma_z();
        let (u_numeric, y_numeric, mut status) = match steady_state(&feedback) {
            Ok(rho) => {
                let rep = metrics::report(&rho, &pair);
                (rep.u, rep.y, String::from("ok"))
            }
            Err(Error::DegenerateSteadyState { dimension }) => {
                (f64::NAN, f64::NAN, format!("degenerate(dim={dimension})"))
            }
            Err(e) => {
                log::warn!("steady state failed for {feedback:?}: {e}");
                (f64::NAN, f64::NAN, String::from("error"))
            }
        };
        let (u_printed, y_printed) = match printed {
            Ok(s) => (s.u_inf, s.y_inf),
            Err(_) => {
                if status == "ok" {
                    status = String::from("printed-undefined");
                }
                (f64::NAN, f64::NAN)
            }
        };
        SteadyRow { lambda: p1, beta: p2, u_numeric, y_numeric, u_printed, y_printed, status }
    }

    pub fn rows(&self) -> Result<Vec<SteadyRow>> {
        self.validate()?;
        Ok(self.points().into_par_iter().map(|p| self.evaluate(p)).collect())
    }

    pub fn header(&self) -> &'static str {
        match self.family {
            Family::Xy => "lambda,beta,U_inf_numeric,Y_inf_numeric,U_inf_printed,Y_inf_printed,abs_diff_U,abs_diff_Y,status",
            Family::Z => "mu,U_inf_numeric,Y_inf_numeric,U_inf_printed,Y_inf_printed,abs_diff_U,abs_diff_Y,status",
        }
    }

    pub fn render(&self, rows: &[SteadyRow]) -> String {
        let mut out = String::from(self.header());
        out.push('\n');
        for r in rows {
            let (du, dy) = r.abs_diff();
            let mut fields = vec![r.lambda];
            if self.family == Family::Xy {
                fields.push(r.beta);
            }
            fields.extend([r.u_numeric, r.y_numeric, r.u_printed, r.y_printed, du, dy]);
            let line: Vec<String> = fields.into_iter().map(fmt_f64).collect();
            let _ = writeln!(out, "{},{}", line.join(","), r.status);
        }
        out
    }

    pub fn csv(&self) -> Result<String> {
        Ok(self.render(&self.rows()?))
    }
}
