//! The averaged feedback master equation
//!
//! ```text
//! dρ/dt = −i[(σ₊F + Fσ₋)/2, ρ] + D(σ₋ − iF)ρ
//! D(A)ρ = AρA† − (A†Aρ + ρA†A)/2
//! ```
//!
//! Time is measured in units of the inverse decay rate, which is fixed to 1.

mod integrate;
mod liouvillian;

pub use integrate::{evolve, EvolveOptions, Method, Trajectory};
pub use liouvillian::{liouvillian_matrix, steady_state, unvec, vec, Superoperator, NULL_SPACE_TOL};

use crate::algebra::{c, Complex2x2, DensityMatrix, HermitianObservable, Pauli};
use crate::error::{Error, Result};

/// The Hermitian operator `F` the homodyne current is fed back through.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedbackOperator {
    /// `λ(sin β σx + cos β σy)`
    Xy { lambda: f64, beta: f64 },
    /// `μ σz`
    Z { mu: f64 },
    General(HermitianObservable),
}

impl FeedbackOperator {
    pub fn matrix(&self) -> Complex2x2 {
        match *self {
            FeedbackOperator::Xy { lambda, beta } => {
                let (s, co) = libm::sincos(beta);
                (Pauli::X.matrix() * s + Pauli::Y.matrix() * co) * lambda
            }
            FeedbackOperator::Z { mu } => Pauli::Z.matrix() * mu,
            FeedbackOperator::General(op) => *op.matrix(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = match *self {
            FeedbackOperator::Xy { lambda, beta } => lambda.is_finite() && beta.is_finite(),
            FeedbackOperator::Z { mu } => mu.is_finite(),
            FeedbackOperator::General(_) => true,
        };
        if !finite {
            return Err(Error::NonFinite);
        }
        HermitianObservable::new(self.matrix()).validate()
    }
}

/// Precomputed pieces of the master-equation generator for one `F`.
#[derive(Debug, Clone, Copy)]
pub struct Generator {
    hamiltonian: Complex2x2,
    jump: Complex2x2,
    jump_dagger: Complex2x2,
    jump_dagger_jump: Complex2x2,
}

impl Generator {
    pub fn new(feedback: &FeedbackOperator) -> Self {
        let f = feedback.matrix();
        let plus = Pauli::Plus.matrix();
        let minus = Pauli::Minus.matrix();
        let hamiltonian = (plus * f + f * minus) * 0.5;
        let jump = minus - f * c(0.0, 1.0);
        let jump_dagger = jump.dagger();
        Generator { hamiltonian, jump, jump_dagger, jump_dagger_jump: jump_dagger * jump }
    }

    /// Feedback Hamiltonian `(σ₊F + Fσ₋)/2`.
    pub fn hamiltonian(&self) -> &Complex2x2 {
        &self.hamiltonian
    }

    /// Jump operator `σ₋ − iF`.
    pub fn jump(&self) -> &Complex2x2 {
        &self.jump
    }

    /// `dρ/dt` for an arbitrary (not necessarily physical) matrix.
    pub fn apply(&self, rho: &Complex2x2) -> Complex2x2 {
        let coherent = self.hamiltonian.commutator(rho) * c(0.0, -1.0);
        let jump = self.jump * *rho * self.jump_dagger;
        let anti = self.jump_dagger_jump.anticommutator(rho) * 0.5;
        coherent + jump - anti
    }
}

/// `D(A)ρ = AρA† − (A†Aρ + ρA†A)/2`.
pub fn dissipator(a: &Complex2x2, rho: &Complex2x2) -> Complex2x2 {
    let ad = a.dagger();
    *a * *rho * ad - (ad * *a).anticommutator(rho) * 0.5
}

/// Right-hand side of the feedback master equation.
pub fn feedback_rhs(rho: &DensityMatrix, feedback: &FeedbackOperator) -> Complex2x2 {
    Generator::new(feedback).apply(rho.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn dissipator_examples() {
        let minus = Pauli::Minus.matrix();
        let g = DensityMatrix::ground();
        assert_eq!(dissipator(&minus, g.matrix()), Complex2x2::ZERO);
        let e = DensityMatrix::excited();
        // hand product: σ₋|e⟩⟨e|σ₊ = |g⟩⟨g|, σ₊σ₋ = |e⟩⟨e|
        let expect = Complex2x2::from_real(-1.0, 0.0, 0.0, 1.0);
        assert_eq!(dissipator(&minus, e.matrix()), expect);
        let rho = DensityMatrix::initial(0.4);
        assert!(dissipator(&Complex2x2::IDENTITY, rho.matrix()).max_abs() < 1e-16);
    }

    #[test]
    fn rhs_examples() {
        let f = FeedbackOperator::Xy { lambda: 0.0, beta: 1.3 };
        assert!(feedback_rhs(&DensityMatrix::ground(), &f).max_abs() == 0.0);

        let f = FeedbackOperator::Z { mu: 0.0 };
        let d = feedback_rhs(&DensityMatrix::excited(), &f);
        assert_eq!(d, Complex2x2::from_real(-1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn rhs_matches_finite_difference_of_closed_form() {
        // The population closed form is exact; the coherence closed form
        // holds at λ = 1, β = π/2 where its printed denominator is harmless.
        let (alpha, lambda, beta) = (FRAC_PI_4, 1.0, FRAC_PI_2);
        let h = 1e-6;
        let plus = analytic::rho_xy(alpha, lambda, beta, h).unwrap();
        let zero = analytic::rho_xy(alpha, lambda, beta, 0.0).unwrap();
        // one-sided at t = 0 would be first order; use a symmetric stencil around t = h
        let plus2 = analytic::rho_xy(alpha, lambda, beta, 2.0 * h).unwrap();
        let fd_at_h = (*plus2.matrix() - *zero.matrix()) * (0.5 / h);
        let rhs_at_h = feedback_rhs(&plus, &FeedbackOperator::Xy { lambda, beta });
        assert!((fd_at_h - rhs_at_h).max_abs() < 1e-8, "{:?}", fd_at_h - rhs_at_h);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let g = Generator::new(&FeedbackOperator::Xy { lambda: 0.7, beta: 2.1 });
        assert!(g.hamiltonian().hermiticity_defect() < 1e-16);
    }

    #[test]
    fn feedback_validation() {
        assert!(FeedbackOperator::Z { mu: f64::NAN }.validate().is_err());
        assert!(FeedbackOperator::Xy { lambda: 1.0, beta: 0.2 }.validate().is_ok());
        let bad = HermitianObservable::new(Complex2x2::from_real(0.0, 1.0, 0.0, 0.0));
        assert!(FeedbackOperator::General(bad).validate().is_err());
    }
}
