//! 2×2 complex matrix algebra for a single qubit.
//!
//! Basis ordering is fixed throughout the crate: index 0 is the excited
//! state |e⟩ and index 1 is the ground state |g⟩. With that ordering
//! `σz = |e⟩⟨e| − |g⟩⟨g| = diag(+1, −1)`, `σ₋ = |g⟩⟨e|` and `σ₊ = |e⟩⟨g|`.

use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum `|M − M†|` entry accepted for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum `|Tr M − 1|` accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted for a density matrix.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Maximum `|M − M†|` entry accepted for an observable.
pub const OBSERVABLE_HERMITIAN_TOL: f64 = 1e-12;
/// Slack on `|r| ≤ 1` for Bloch vectors.
pub const BLOCH_TOL: f64 = 1e-10;
/// Largest imaginary part of `Tr(ρO)` treated as round-off.
pub const IMAGINARY_TOL: f64 = 1e-10;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

const ZERO: C64 = c(0.0, 0.0);
const ONE: C64 = c(1.0, 0.0);
const I: C64 = c(0.0, 1.0);

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex2x2 {
    pub entries: [[C64; 2]; 2],
}

impl Complex2x2 {
    pub const ZERO: Complex2x2 = Complex2x2 { entries: [[ZERO, ZERO], [ZERO, ZERO]] };
    pub const IDENTITY: Complex2x2 = Complex2x2 { entries: [[ONE, ZERO], [ZERO, ONE]] };

    pub const fn new(e00: C64, e01: C64, e10: C64, e11: C64) -> Self {
        Complex2x2 { entries: [[e00, e01], [e10, e11]] }
    }

    pub fn from_real(e00: f64, e01: f64, e10: f64, e11: f64) -> Self {
        Self::new(c(e00, 0.0), c(e01, 0.0), c(e10, 0.0), c(e11, 0.0))
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row][col]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.entries;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn transpose(&self) -> Self {
        let m = &self.entries;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn trace(&self) -> C64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let m = &self.entries;
        Self::new(f(m[0][0]), f(m[0][1]), f(m[1][0]), f(m[1][1]))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry of `|M − M†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.dagger()).scale_re(0.5)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        let a = &self.entries;
        let b = &other.entries;
        a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let h = self.hermitian_part();
        let a = h.entries[0][0].re;
        let d = h.entries[1][1].re;
        let b = h.entries[0][1];
        let mean = 0.5 * (a + d);
        let half_gap = libm::hypot(0.5 * (a - d), b.norm());
        [mean - half_gap, mean + half_gap]
    }
}

impl Add for Complex2x2 {
    type Output = Complex2x2;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl AddAssign for Complex2x2 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Complex2x2 {
    type Output = Complex2x2;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl Neg for Complex2x2 {
    type Output = Complex2x2;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul for Complex2x2 {
    type Output = Complex2x2;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<C64> for Complex2x2 {
    type Output = Complex2x2;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<f64> for Complex2x2 {
    type Output = Complex2x2;
    fn mul(self, rhs: f64) -> Self {
        self.scale_re(rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// σ₊ = |e⟩⟨g|
    Plus,
    /// σ₋ = |g⟩⟨e|
    Minus,
    Identity,
}

impl Pauli {
    pub const fn matrix(self) -> Complex2x2 {
        match self {
            Pauli::X => Complex2x2::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => Complex2x2::new(ZERO, c(0.0, -1.0), I, ZERO),
            Pauli::Z => Complex2x2::new(ONE, ZERO, ZERO, c(-1.0, 0.0)),
            Pauli::Plus => Complex2x2::new(ZERO, ONE, ZERO, ZERO),
            Pauli::Minus => Complex2x2::new(ZERO, ZERO, ONE, ZERO),
            Pauli::Identity => Complex2x2::IDENTITY,
        }
    }
}

pub const fn pauli(axis: Pauli) -> Complex2x2 {
    axis.matrix()
}

/// Real Bloch vector `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq())
    }
}

/// A 2×2 Hermitian operator.
///
/// Construction does not check hermiticity; call [`HermitianObservable::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianObservable {
    matrix: Complex2x2,
}

impl HermitianObservable {
    pub const fn new(matrix: Complex2x2) -> Self {
        HermitianObservable { matrix }
    }

    pub const fn pauli(axis: Pauli) -> Self {
        Self::new(axis.matrix())
    }

    /// `ε₁I + ε₂ a·σ`. The direction `a` is used as given (not normalized).
    pub fn from_decomposition(eps1: f64, eps2: f64, a: [f64; 3]) -> Self {
        let m = Pauli::Identity.matrix() * eps1
            + (Pauli::X.matrix() * a[0] + Pauli::Y.matrix() * a[1] + Pauli::Z.matrix() * a[2])
                * eps2;
        Self::new(m)
    }

    /// Inverse of [`from_decomposition`](Self::from_decomposition) with `ε₂ = 1`:
    /// returns `(ε₁, [a_x, a_y, a_z])` with `a` unnormalized.
    pub fn decomposition(&self) -> (f64, [f64; 3]) {
        let m = &self.matrix;
        let eps1 = 0.5 * m.trace().re;
        let a = [
            0.5 * m.trace_product(&Pauli::X.matrix()).re,
            0.5 * m.trace_product(&Pauli::Y.matrix()).re,
            0.5 * m.trace_product(&Pauli::Z.matrix()).re,
        ];
        (eps1, a)
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.matrix
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.matrix * s)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = self.matrix.hermiticity_defect();
        if deviation > OBSERVABLE_HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }
}

impl Add for HermitianObservable {
    type Output = HermitianObservable;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.matrix + rhs.matrix)
    }
}

/// A qubit density matrix.
///
/// Constructors never validate, so intermediate integrator values can be
/// carried in this type. Call [`DensityMatrix::validate`] where the
/// physical invariants are required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: Complex2x2,
}

impl DensityMatrix {
    pub const fn new(matrix: Complex2x2) -> Self {
        DensityMatrix { matrix }
    }

    pub fn matrix(&self) -> &Complex2x2 {
        &self.matrix
    }

    /// `|ψ⟩⟨ψ|` for amplitudes `(ψ_e, ψ_g)`; the ket is not normalized here.
    pub fn pure(psi: [C64; 2]) -> Self {
        let [a, b] = psi;
        Self::new(Complex2x2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj()))
    }

    /// `|φ₀(α)⟩⟨φ₀(α)|` with `|φ₀(α)⟩ = cos α |g⟩ + sin α |e⟩`.
    pub fn initial(alpha: f64) -> Self {
        let (s, co) = libm::sincos(alpha);
        Self::new(Complex2x2::from_real(s * s, s * co, s * co, co * co))
    }

    pub fn excited() -> Self {
        Self::new(Complex2x2::from_real(1.0, 0.0, 0.0, 0.0))
    }

    pub fn ground() -> Self {
        Self::new(Complex2x2::from_real(0.0, 0.0, 0.0, 1.0))
    }

    pub fn maximally_mixed() -> Self {
        Self::new(Complex2x2::from_real(0.5, 0.0, 0.0, 0.5))
    }

    /// Population of |e⟩.
    pub fn excited_population(&self) -> f64 {
        self.matrix.entries[0][0].re
    }

    /// The ⟨e|ρ|g⟩ coherence.
    pub fn coherence(&self) -> C64 {
        self.matrix.entries[0][1]
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < -POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    /// Projects a slightly unphysical state back onto the Bloch ball.
    ///
    /// Returns the projected state and the clip amount `|r| − 1` (zero when
    /// nothing was changed). The matrix is symmetrized and trace-normalized.
    pub fn clipped(&self) -> (DensityMatrix, f64) {
        let tr = self.matrix.trace().re;
        let normalized = DensityMatrix::new(self.matrix.hermitian_part() * (1.0 / tr));
        let r = bloch_from_rho(&normalized);
        let norm = r.norm();
        if norm <= 1.0 {
            return (normalized, 0.0);
        }
        let clip = norm - 1.0;
        log::debug!("clipping Bloch vector of length {norm} back to the unit sphere");
        let s = 1.0 / norm;
        (bloch_to_matrix(&BlochVector::new(r.x * s, r.y * s, r.z * s)), clip)
    }
}

/// `Tr(ρO)`.
///
/// Fails when the imaginary residue exceeds [`IMAGINARY_TOL`], which only
/// happens for non-Hermitian inputs.
pub fn expectation(rho: &DensityMatrix, observable: &HermitianObservable) -> Result<f64> {
    let value = rho.matrix.trace_product(&observable.matrix);
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    if value.im.abs() > IMAGINARY_TOL {
        return Err(Error::ImaginaryExpectation { residue: value.im });
    }
    Ok(value.re)
}

pub fn bloch_from_rho(rho: &DensityMatrix) -> BlochVector {
    let m = &rho.matrix.entries;
    // Tr(ρσx) = 2 Re ρ01, Tr(ρσy) = −2 Im ρ01 after symmetrization
    let off = 0.5 * (m[0][1] + m[1][0].conj());
    BlochVector::new(2.0 * off.re, -2.0 * off.im, m[0][0].re - m[1][1].re)
}

fn bloch_to_matrix(r: &BlochVector) -> DensityMatrix {
    DensityMatrix::new(Complex2x2::new(
        c(0.5 * (1.0 + r.z), 0.0),
        c(0.5 * r.x, -0.5 * r.y),
        c(0.5 * r.x, 0.5 * r.y),
        c(0.5 * (1.0 - r.z), 0.0),
    ))
}

/// `ρ = (I + r·σ)/2`, rejecting vectors outside the Bloch ball.
pub fn rho_from_bloch(r: &BlochVector) -> Result<DensityMatrix> {
    if !(r.x.is_finite() && r.y.is_finite() && r.z.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = r.norm();
    if norm > 1.0 + BLOCH_TOL {
        return Err(Error::OutsideBlochBall { norm });
    }
    Ok(bloch_to_matrix(r))
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix.trace_product(&rho.matrix).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn close(a: &Complex2x2, b: &Complex2x2, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol
    }

    #[test]
    fn pauli_identities() {
        let x = pauli(Pauli::X);
        assert!(close(&(x * x), &Complex2x2::IDENTITY, 0.0));
        let p = pauli(Pauli::Plus);
        assert!(close(&(p * p), &Complex2x2::ZERO, 0.0));
        assert!(close(&x, &(pauli(Pauli::Plus) + pauli(Pauli::Minus)), 0.0));
        // σ₋|e⟩ = |g⟩
        let m = pauli(Pauli::Minus);
        assert_eq!(m.get(1, 0), c(1.0, 0.0));
        assert_eq!(m.get(0, 0), c(0.0, 0.0));
        // σxσy = iσz
        let xy = pauli(Pauli::X) * pauli(Pauli::Y);
        assert!(close(&xy, &(pauli(Pauli::Z) * I), 0.0));
    }

    #[test]
    fn expectation_examples() {
        let sz = HermitianObservable::pauli(Pauli::Z);
        let sx = HermitianObservable::pauli(Pauli::X);
        assert_eq!(expectation(&DensityMatrix::excited(), &sz).unwrap(), 1.0);
        assert_eq!(expectation(&DensityMatrix::maximally_mixed(), &sx).unwrap(), 0.0);
        let phi = DensityMatrix::initial(FRAC_PI_4);
        assert!((expectation(&phi, &sx).unwrap() - 1.0).abs() < 1e-15);
        // ⟨σz⟩ = −cos 2α on |φ₀⟩
        let phi = DensityMatrix::initial(0.3);
        assert!((expectation(&phi, &sz).unwrap() + libm::cos(0.6)).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_non_hermitian_state() {
        let rho = DensityMatrix::new(Complex2x2::from_real(0.5, 1.0, 0.0, 0.5));
        let sy = HermitianObservable::pauli(Pauli::Y);
        assert!(matches!(
            expectation(&rho, &sy),
            Err(Error::ImaginaryExpectation { .. })
        ));
    }

    #[test]
    fn bloch_examples() {
        assert_eq!(bloch_from_rho(&DensityMatrix::ground()), BlochVector::new(0.0, 0.0, -1.0));
        assert_eq!(bloch_from_rho(&DensityMatrix::maximally_mixed()), BlochVector::default());
        let r = bloch_from_rho(&DensityMatrix::initial(FRAC_PI_4));
        assert!((r.x - 1.0).abs() < 1e-15 && r.y.abs() < 1e-15 && r.z.abs() < 1e-15);
    }

    #[test]
    fn rho_from_bloch_examples() {
        let mixed = rho_from_bloch(&BlochVector::default()).unwrap();
        assert_eq!(mixed, DensityMatrix::maximally_mixed());
        let up = rho_from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(up, DensityMatrix::excited());
        assert!(matches!(
            rho_from_bloch(&BlochVector::new(1.5, 0.0, 0.0)),
            Err(Error::OutsideBlochBall { .. })
        ));
        assert_eq!(
            rho_from_bloch(&BlochVector::new(f64::NAN, 0.0, 0.0)),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&DensityMatrix::initial(0.7)) - 1.0).abs() < 1e-15);
        assert_eq!(purity(&DensityMatrix::maximally_mixed()), 0.5);
        let rho = rho_from_bloch(&BlochVector::new(0.6, 0.0, 0.0)).unwrap();
        assert!((purity(&rho) - 0.68).abs() < 1e-15);
    }

    #[test]
    fn validation_catches_each_violation() {
        assert!(DensityMatrix::initial(FRAC_PI_8).validate().is_ok());
        let not_herm = DensityMatrix::new(Complex2x2::from_real(0.5, 0.1, 0.0, 0.5));
        assert!(matches!(not_herm.validate(), Err(Error::NotHermitian { .. })));
        let bad_trace = DensityMatrix::new(Complex2x2::from_real(0.6, 0.0, 0.0, 0.5));
        assert!(matches!(bad_trace.validate(), Err(Error::TraceNotOne { .. })));
        let negative = DensityMatrix::new(Complex2x2::from_real(1.1, 0.0, 0.0, -0.1));
        assert!(matches!(negative.validate(), Err(Error::NotPositive { .. })));
        let nan = DensityMatrix::new(Complex2x2::from_real(f64::NAN, 0.0, 0.0, 0.5));
        assert_eq!(nan.validate(), Err(Error::NonFinite));
    }

    #[test]
    fn clipping_reports_amount() {
        let over = DensityMatrix::new(Complex2x2::from_real(0.5, 0.5 + 1e-9, 0.5 + 1e-9, 0.5));
        let (fixed, amount) = over.clipped();
        assert!(amount > 0.0 && amount < 1e-8);
        assert!(fixed.validate().is_ok());
        assert!((bloch_from_rho(&fixed).norm() - 1.0).abs() < 1e-15);
        let (same, zero) = DensityMatrix::maximally_mixed().clipped();
        assert_eq!(zero, 0.0);
        assert_eq!(same, DensityMatrix::maximally_mixed());
    }

    #[test]
    fn observable_decomposition_round_trip() {
        let o = HermitianObservable::from_decomposition(0.3, -1.2, [0.6, 0.0, 0.8]);
        assert!(o.validate().is_ok());
        let (eps1, a) = o.decomposition();
        assert!((eps1 - 0.3).abs() < 1e-15);
        assert!((a[0] + 0.72).abs() < 1e-15 && a[1].abs() < 1e-15 && (a[2] + 0.96).abs() < 1e-15);
        let bad = HermitianObservable::new(Complex2x2::from_real(0.0, 1.0, 0.0, 0.0));
        assert!(matches!(bad.validate(), Err(Error::NotHermitian { .. })));
    }
}
