//! Variances, uncertainty-relation tightness and mixedness.
//!
//! `comm_term` and `anticomm_term` carry the ¼ normalization, so
//! `U = ΔA²ΔB² − comm_term` and `W = U − anticomm_term`.

use crate::algebra::{purity, DensityMatrix, HermitianObservable, Pauli};

/// Negative variance round-off above this magnitude is logged as a warning.
pub const VARIANCE_ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservablePair {
    pub a: HermitianObservable,
    pub b: HermitianObservable,
}

impl ObservablePair {
    pub const fn new(a: HermitianObservable, b: HermitianObservable) -> Self {
        ObservablePair { a, b }
    }

    /// `A = σx`, `B = σz`.
    pub const fn sigma_x_sigma_z() -> Self {
        Self::new(HermitianObservable::pauli(Pauli::X), HermitianObservable::pauli(Pauli::Z))
    }
}

impl Default for ObservablePair {
    fn default() -> Self {
        Self::sigma_x_sigma_z()
    }
}

fn mean(rho: &DensityMatrix, o: &HermitianObservable) -> f64 {
    rho.matrix().trace_product(o.matrix()).re
}

/// `⟨O²⟩ − ⟨O⟩²`, clamped at zero.
pub fn variance(rho: &DensityMatrix, o: &HermitianObservable) -> f64 {
    let m = o.matrix();
    let avg = mean(rho, o);
    let raw = rho.matrix().trace_product(&(*m * *m)).re - avg * avg;
    if raw < 0.0 {
        if raw < -VARIANCE_ROUNDOFF {
            log::warn!("variance {raw:e} is below round-off; state may be unphysical");
        } else {
            log::trace!("clamping variance {raw:e} to zero");
        }
        return 0.0;
    }
    raw
}

/// `|⟨[A, B]⟩|² / 4`.
pub fn comm_term(rho: &DensityMatrix, pair: &ObservablePair) -> f64 {
    let comm = pair.a.matrix().commutator(pair.b.matrix());
    0.25 * rho.matrix().trace_product(&comm).norm_sqr()
}

/// `|⟨{Ǎ, B̌}⟩/2|² = |⟨{A, B}⟩/2 − ⟨A⟩⟨B⟩|²`.
pub fn anticomm_term(rho: &DensityMatrix, pair: &ObservablePair) -> f64 {
    let anti = pair.a.matrix().anticommutator(pair.b.matrix());
    let cov = 0.5 * rho.matrix().trace_product(&anti).re - mean(rho, &pair.a) * mean(rho, &pair.b);
    cov * cov
}

/// Robertson gap.
pub fn tightness_u(rho: &DensityMatrix, pair: &ObservablePair) -> f64 {
    variance(rho, &pair.a) * variance(rho, &pair.b) - comm_term(rho, pair)
}

/// Schrödinger–Robertson gap.
pub fn tightness_w(rho: &DensityMatrix, pair: &ObservablePair) -> f64 {
    tightness_u(rho, pair) - anticomm_term(rho, pair)
}

/// `1 − Tr(ρ²)`.
pub fn mixedness_y(rho: &DensityMatrix) -> f64 {
    1.0 - purity(rho)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessReport {
    pub var_a: f64,
    pub var_b: f64,
    pub comm_term: f64,
    pub anticomm_term: f64,
    pub u: f64,
    pub w: f64,
    pub y: f64,
}

pub fn report(rho: &DensityMatrix, pair: &ObservablePair) -> TightnessReport {
    let var_a = variance(rho, &pair.a);
    let var_b = variance(rho, &pair.b);
    let comm = comm_term(rho, pair);
    let anti = anticomm_term(rho, pair);
    let u = var_a * var_b - comm;
    TightnessReport {
        var_a,
        var_b,
        comm_term: comm,
        anticomm_term: anti,
        u,
        w: u - anti,
        y: mixedness_y(rho),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rho_from_bloch, BlochVector};
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn bloch(x: f64, y: f64, z: f64) -> DensityMatrix {
        rho_from_bloch(&BlochVector::new(x, y, z)).unwrap()
    }

    const PAIR: ObservablePair = ObservablePair::sigma_x_sigma_z();

    #[test]
    fn variance_examples() {
        let sz = HermitianObservable::pauli(Pauli::Z);
        let sx = HermitianObservable::pauli(Pauli::X);
        assert_eq!(variance(&DensityMatrix::excited(), &sz), 0.0);
        assert_eq!(variance(&DensityMatrix::maximally_mixed(), &sx), 1.0);
        let v = variance(&DensityMatrix::initial(FRAC_PI_8), &sx);
        let s = libm::sin(FRAC_PI_4);
        assert!((v - (1.0 - s * s)).abs() < 1e-15);
    }

    #[test]
    fn comm_term_examples() {
        assert_eq!(comm_term(&DensityMatrix::maximally_mixed(), &PAIR), 0.0);
        assert!((comm_term(&bloch(0.0, 0.5, 0.0), &PAIR) - 0.25).abs() < 1e-15);
        let same = ObservablePair::new(PAIR.a, PAIR.a);
        assert_eq!(comm_term(&bloch(0.3, 0.2, 0.1), &same), 0.0);
    }

    #[test]
    fn anticomm_term_examples() {
        assert_eq!(anticomm_term(&DensityMatrix::maximally_mixed(), &PAIR), 0.0);
        assert!((anticomm_term(&bloch(0.6, 0.0, 0.8), &PAIR) - 0.2304).abs() < 1e-15);
        assert_eq!(anticomm_term(&DensityMatrix::excited(), &PAIR), 0.0);
    }

    #[test]
    fn u_and_w_examples() {
        assert!(tightness_u(&DensityMatrix::initial(FRAC_PI_4), &PAIR).abs() < 1e-15);
        assert_eq!(tightness_u(&DensityMatrix::maximally_mixed(), &PAIR), 1.0);
        assert!(tightness_w(&DensityMatrix::initial(0.37), &PAIR).abs() < 1e-15);
        assert_eq!(tightness_w(&DensityMatrix::maximally_mixed(), &PAIR), 1.0);
        assert!((tightness_w(&bloch(0.0, 0.36f64.sqrt(), 0.0), &PAIR) - 0.64).abs() < 1e-15);
        assert!((tightness_w(&bloch(0.48, 0.0, 0.36), &PAIR) - 0.64).abs() < 1e-15);
    }

    #[test]
    fn mixedness_examples() {
        assert!(mixedness_y(&DensityMatrix::initial(1.0)).abs() < 1e-15);
        assert_eq!(mixedness_y(&DensityMatrix::maximally_mixed()), 0.5);
        assert!((mixedness_y(&bloch(0.6, 0.0, 0.0)) - 0.32).abs() < 1e-15);
    }

    #[test]
    fn report_examples() {
        let r = report(&DensityMatrix::maximally_mixed(), &PAIR);
        assert_eq!(
            r,
            TightnessReport { var_a: 1.0, var_b: 1.0, comm_term: 0.0, anticomm_term: 0.0, u: 1.0, w: 1.0, y: 0.5 }
        );
        let r = report(&DensityMatrix::initial(FRAC_PI_4), &PAIR);
        for (got, want) in [
            (r.var_a, 0.0),
            (r.var_b, 1.0),
            (r.comm_term, 0.0),
            (r.anticomm_term, 0.0),
            (r.u, 0.0),
            (r.w, 0.0),
            (r.y, 0.0),
        ] {
            assert!((got - want).abs() < 1e-15, "{r:?}");
        }
    }
}
