//! Vectorized generator and its null space.
//!
//! Vectorization is column-stacking: `vec(ρ) = (ρ₀₀, ρ₁₀, ρ₀₁, ρ₁₁)`, so that
//! `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.

use super::{FeedbackOperator, Generator};
use crate::algebra::{c, Complex2x2, DensityMatrix, C64};
use crate::error::{Error, Result};
use crate::svd::{jacobi_svd, Matrix4};

/// Singular values at or below `NULL_SPACE_TOL · max(σ_max, 1)` count as zero.
pub const NULL_SPACE_TOL: f64 = 1e-9;

pub fn vec(m: &Complex2x2) -> [C64; 4] {
    [m.get(0, 0), m.get(1, 0), m.get(0, 1), m.get(1, 1)]
}

pub fn unvec(v: &[C64; 4]) -> Complex2x2 {
    Complex2x2::new(v[0], v[2], v[1], v[3])
}

fn kron(a: &Complex2x2, b: &Complex2x2) -> Matrix4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    out
}

fn axpy(acc: &mut Matrix4, s: C64, m: &Matrix4) {
    for (row, mrow) in acc.iter_mut().zip(m.iter()) {
        for (x, y) in row.iter_mut().zip(mrow.iter()) {
            *x += s * y;
        }
    }
}

/// The 4×4 matrix `L` with `vec(dρ/dt) = L vec(ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator {
    pub matrix: Matrix4,
}

impl Superoperator {
    pub fn apply_vec(&self, v: &[C64; 4]) -> [C64; 4] {
        core::array::from_fn(|i| self.matrix[i].iter().zip(v.iter()).map(|(a, b)| a * b).sum())
    }

    pub fn apply(&self, rho: &Complex2x2) -> Complex2x2 {
        unvec(&self.apply_vec(&vec(rho)))
    }

    /// `v† L` for a row vector `v`.
    pub fn apply_left(&self, v: &[C64; 4]) -> [C64; 4] {
        core::array::from_fn(|j| (0..4).map(|i| v[i].conj() * self.matrix[i][j]).sum())
    }

    /// Descending.
    pub fn singular_values(&self) -> [f64; 4] {
        jacobi_svd(&self.matrix).singular_values
    }

    fn null_threshold(sigma: &[f64; 4]) -> f64 {
        NULL_SPACE_TOL * sigma[0].max(1.0)
    }

    pub fn null_space_dimension(&self) -> usize {
        let s = self.singular_values();
        let thr = Self::null_threshold(&s);
        s.iter().filter(|&&x| x <= thr).count()
    }

    pub fn rank(&self) -> usize {
        4 - self.null_space_dimension()
    }
}

/// Builds `L` from Kronecker products, independently of [`Generator::apply`].
pub fn liouvillian_matrix(feedback: &FeedbackOperator) -> Superoperator {
    let g = Generator::new(feedback);
    let h = g.hamiltonian();
    let a = g.jump();
    let ada = a.dagger() * *a;
    let id = Complex2x2::IDENTITY;

    let mut l = [[c(0.0, 0.0); 4]; 4];
    // −i(Hρ − ρH)
    axpy(&mut l, c(0.0, -1.0), &kron(&id, h));
    axpy(&mut l, c(0.0, 1.0), &kron(&h.transpose(), &id));
    // AρA†
    axpy(&mut l, c(1.0, 0.0), &kron(&a.conj(), a));
    // −(A†Aρ + ρA†A)/2
    axpy(&mut l, c(-0.5, 0.0), &kron(&id, &ada));
    axpy(&mut l, c(-0.5, 0.0), &kron(&ada.transpose(), &id));
    Superoperator { matrix: l }
}

/// The unique stationary state, from the right singular vector of the
/// smallest singular value of `L`.
pub fn steady_state(feedback: &FeedbackOperator) -> Result<DensityMatrix> {
    let l = liouvillian_matrix(feedback);
    if !l.matrix.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let svd = jacobi_svd(&l.matrix);
    let thr = Superoperator::null_threshold(&svd.singular_values);
    let dimension = svd.singular_values.iter().filter(|&&x| x <= thr).count();
    if dimension != 1 {
        return Err(Error::DegenerateSteadyState { dimension });
    }
    let v: [C64; 4] = core::array::from_fn(|r| svd.v[r][3]);
    let m = unvec(&v);
    let tr = m.trace();
    let rho = (m * tr.inv()).hermitian_part();
    let residual = l.apply(&rho).max_abs();
    log::trace!("steady state residual {residual:e}");
    Ok(DensityMatrix::new(rho))
}
