use alloc::vec::Vec;

use super::{FeedbackOperator, Generator};
use crate::algebra::{Complex2x2, DensityMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with at most `step` per stride.
    /// Each interval between record times is split evenly.
    Rk4 { step: f64 },
    /// Dormand–Prince 5(4) with mixed absolute/relative `tolerance`.
    Rk45 { tolerance: f64, min_step: f64 },
}

impl Method {
    pub const DEFAULT_STEP: f64 = 1e-3;

    pub fn rk4() -> Self {
        Method::Rk4 { step: Self::DEFAULT_STEP }
    }

    pub fn rk45(tolerance: f64) -> Self {
        Method::Rk45 { tolerance, min_step: 1e-12 }
    }
}

impl Default for Method {
    fn default() -> Self {
        Self::rk4()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOptions {
    pub method: Method,
    /// Times at which the state is recorded; strictly increasing, ≥ 0.
    pub record_times: Vec<f64>,
}

impl EvolveOptions {
    pub fn new(method: Method, record_times: Vec<f64>) -> Self {
        EvolveOptions { method, record_times }
    }

    /// RK4 at the default step, recording only at `t`.
    pub fn endpoint(t: f64) -> Self {
        Self::new(Method::rk4(), alloc::vec![t])
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            Method::Rk4 { step } if !(step > 0.0 && step.is_finite()) => {
                return Err(Error::InvalidOptions("RK4 step must be positive and finite"));
            }
            Method::Rk45 { tolerance, min_step }
                if !(tolerance > 0.0 && tolerance.is_finite() && min_step > 0.0) =>
            {
                return Err(Error::InvalidOptions("RK45 tolerance and minimum step must be positive"));
            }
            _ => {}
        }
        if self.record_times.is_empty() {
            return Err(Error::InvalidOptions("record grid is empty"));
        }
        if !self.record_times.iter().all(|t| t.is_finite() && *t >= 0.0) {
            return Err(Error::InvalidOptions("record times must be finite and non-negative"));
        }
        if self.record_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidOptions("record times must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn last(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    /// First recorded state that fails validation, with its time.
    pub fn first_invalid(&self) -> Option<(f64, Error)> {
        self.iter().find_map(|(t, rho)| rho.validate().err().map(|e| (t, e)))
    }

    pub fn validate(&self) -> Result<()> {
        match self.first_invalid() {
            Some((_, e)) => Err(e),
            None => Ok(()),
        }
    }
}

/// Integrates the master equation from `rho0` at `t = 0`.
pub fn evolve(
    rho0: &DensityMatrix,
    feedback: &FeedbackOperator,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    opts.validate()?;
    let generator = Generator::new(feedback);
    let mut state = *rho0.matrix();
    if !state.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut now = 0.0;
    let mut traj = Trajectory {
        times: Vec::with_capacity(opts.record_times.len()),
        states: Vec::with_capacity(opts.record_times.len()),
    };
    let mut adaptive_step = 1e-2;
    for &target in &opts.record_times {
        let span = target - now;
        if span > 0.0 {
            state = match opts.method {
                Method::Rk4 { step } => rk4_span(&generator, state, span, step),
                Method::Rk45 { tolerance, min_step } => {
                    dopri_span(&generator, state, now, span, tolerance, min_step, &mut adaptive_step)?
                }
            };
        }
        now = target;
        traj.times.push(target);
        traj.states.push(DensityMatrix::new(state));
    }
    Ok(traj)
}

fn rk4_step(g: &Generator, y: &Complex2x2, h: f64) -> Complex2x2 {
    let k1 = g.apply(y);
    let k2 = g.apply(&(*y + k1 * (0.5 * h)));
    let k3 = g.apply(&(*y + k2 * (0.5 * h)));
    let k4 = g.apply(&(*y + k3 * h));
    *y + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0)
}

fn rk4_span(g: &Generator, mut y: Complex2x2, span: f64, max_step: f64) -> Complex2x2 {
    // tolerate spans that are an integer multiple of the step up to round-off
    let n = libm::ceil(span / max_step - 1e-9).max(1.0) as usize;
    let h = span / n as f64;
    for _ in 0..n {
        y = rk4_step(g, &y, h);
    }
    y
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth- minus fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn error_norm(err: &Complex2x2, y0: &Complex2x2, y1: &Complex2x2, tol: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let scale = tol + tol * y0.get(r, c).norm().max(y1.get(r, c).norm());
            let ratio = err.get(r, c).norm() / scale;
            if ratio.is_nan() {
                return f64::INFINITY;
            }
            worst = worst.max(ratio);
        }
    }
    worst
}

fn dopri_span(
    g: &Generator,
    mut y: Complex2x2,
    start: f64,
    span: f64,
    tol: f64,
    min_step: f64,
    h: &mut f64,
) -> Result<Complex2x2> {
    let mut done = 0.0;
    while done < span {
        let remaining = span - done;
        let last = *h >= remaining;
        let step = if last { remaining } else { *h };

        let k1 = g.apply(&y);
        let k2 = g.apply(&(y + k1 * (A21 * step)));
        let k3 = g.apply(&(y + (k1 * A31 + k2 * A32) * step));
        let k4 = g.apply(&(y + (k1 * A41 + k2 * A42 + k3 * A43) * step));
        let k5 = g.apply(&(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * step));
        let k6 = g.apply(&(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * step));
        let y_new = y + (k1 * B1 + k3 * B3 + k4 * B4 + k5 * B5 + k6 * B6) * step;
        let k7 = g.apply(&y_new);
        let err = (k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * step;

        let norm = error_norm(&err, &y, &y_new, tol);
        let factor = if norm == 0.0 { 5.0 } else { (0.9 * libm::pow(norm, -0.2)).clamp(0.2, 5.0) };
        if norm <= 1.0 {
            y = y_new;
            done = if last { span } else { done + step };
            if !last {
                *h = step * factor;
            }
        } else {
            *h = step * factor;
            if *h < min_step {
                return Err(Error::StepSizeUnderflow { time: start + done, step: *h });
            }
        }
    }
    Ok(y)
}
