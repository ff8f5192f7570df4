//! Published closed forms for the two feedback families, transcribed as
//! printed.
//!
//! These are hypotheses checked against the numerical master equation by
//! [`crate::campaign`]; several of them disagree with it. Nothing on the
//! default computation path depends on this module. Initial state is
//! `|φ₀(α)⟩ = cos α |g⟩ + sin α |e⟩` and `A = σx`, `B = σz`.

use libm::{cos, cosh, exp, sin, sinh, sqrt};

use crate::algebra::{c, Complex2x2, DensityMatrix, C64};
use crate::error::{Error, Result};

/// Half-width of the band around `λ + cos β = 0` where the XY closed forms
/// divide by zero.
pub const XY_SINGULAR_BAND: f64 = 1e-6;
/// Half-width of the band around `1 − 4μ² = 0` where the Z closed forms
/// divide by zero.
pub const Z_SINGULAR_BAND: f64 = 1e-6;

fn check_finite(parameter: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { parameter, value })
    }
}

fn check_time(t: f64) -> Result<()> {
    check_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::Domain { parameter: "t", value: t });
    }
    Ok(())
}

/// Auxiliary symbols of the `λ(sin β σx + cos β σy)` solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyConstants {
    /// `exp(t + 4tλ² + 4tλ cos β)`
    pub o: f64,
    /// `λ + cos β`
    pub p: f64,
    /// `1 + 2λ² + 2λ cos β`, the population relaxation rate
    pub rate: f64,
    /// `1 + λ cos β`
    pub xi: f64,
    /// `1 + 2λ² e^{rate·t} − (1 + 2λ²) cos 2α + 4λ cos β sin²α`
    pub ell: f64,
    /// `P cosh(tλP) − (cos β + λ cos 2β) sinh(tλP)`
    pub g: f64,
}

impl XyConstants {
    pub fn new(alpha: f64, lambda: f64, beta: f64, t: f64) -> Result<Self> {
        check_finite("alpha", alpha)?;
        check_finite("lambda", lambda)?;
        check_finite("beta", beta)?;
        check_time(t)?;
        let cb = cos(beta);
        let rate = 1.0 + 2.0 * lambda * lambda + 2.0 * lambda * cb;
        if rate <= 0.0 {
            return Err(Error::Domain { parameter: "1 + 2λ² + 2λcos β", value: rate });
        }
        let p = lambda + cb;
        let sa = sin(alpha);
        let ell = 1.0 + 2.0 * lambda * lambda * exp(rate * t)
            - (1.0 + 2.0 * lambda * lambda) * cos(2.0 * alpha)
            + 4.0 * lambda * cb * sa * sa;
        let g = p * cosh(t * lambda * p) - (cb + lambda * cos(2.0 * beta)) * sinh(t * lambda * p);
        Ok(XyConstants {
            o: exp(t + 4.0 * t * lambda * lambda + 4.0 * t * lambda * cb),
            p,
            rate,
            xi: 1.0 + lambda * cb,
            ell,
            g,
        })
    }

    fn require_regular_p(&self) -> Result<()> {
        if self.p.abs() < XY_SINGULAR_BAND {
            return Err(Error::SingularParameter { parameter: "λ + cos β", value: self.p });
        }
        Ok(())
    }
}

/// Auxiliary symbols of the `μσz` solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZConstants {
    /// `exp(2tμ²)`
    pub gamma: f64,
    /// `(1 − 4μ²)²`
    pub r: f64,
}

impl ZConstants {
    pub fn new(mu: f64, t: f64) -> Result<Self> {
        check_finite("mu", mu)?;
        check_time(t)?;
        let gap = 1.0 - 4.0 * mu * mu;
        if gap.abs() < Z_SINGULAR_BAND {
            return Err(Error::SingularParameter { parameter: "1 − 4μ²", value: gap });
        }
        Ok(ZConstants { gamma: exp(2.0 * t * mu * mu), r: gap * gap })
    }
}

fn xy_population(alpha: f64, lambda: f64, beta: f64, t: f64, k: &XyConstants) -> f64 {
    let cb = cos(beta);
    let sa = sin(alpha);
    let e = exp(k.rate * t);
    (1.0 + 2.0 * e * lambda * lambda - (1.0 + 2.0 * lambda * lambda) * cos(2.0 * alpha)
        + 4.0 * lambda * cb * sa * sa)
        / (2.0 * k.rate * e)
}

/// The bracket `−2e^{iβ}ξ + 2i e^{2tλP}(1 + e^{iβ}λ) sin β` times `−sin 2α`.
fn xy_coherence_numerator(alpha: f64, lambda: f64, beta: f64, t: f64, k: &XyConstants) -> C64 {
    let phase = C64::from_polar(1.0, beta);
    let bracket = phase * (-2.0 * k.xi)
        + c(0.0, 2.0) * exp(2.0 * t * lambda * k.p) * (c(1.0, 0.0) + phase * lambda) * sin(beta);
    -bracket * sin(2.0 * alpha)
}

fn assemble(rho11: f64, rho12: C64) -> DensityMatrix {
    DensityMatrix::new(Complex2x2::new(c(rho11, 0.0), rho12, rho12.conj(), c(1.0 - rho11, 0.0)))
}

/// `ρ(t)` for `F = λ(sin β σx + cos β σy)` exactly as printed.
///
/// The printed coherence divides by `4√(O·P)`; the square root is taken in
/// the complex plane so `P < 0` still yields a value. The result is not
/// validated.
pub fn rho_xy(alpha: f64, lambda: f64, beta: f64, t: f64) -> Result<DensityMatrix> {
    let k = XyConstants::new(alpha, lambda, beta, t)?;
    k.require_regular_p()?;
    let rho11 = xy_population(alpha, lambda, beta, t, &k);
    let denom = c(k.o * k.p, 0.0).sqrt() * 4.0;
    Ok(assemble(rho11, xy_coherence_numerator(alpha, lambda, beta, t, &k) / denom))
}

/// [`rho_xy`] with the coherence denominator `4√O·P` in place of `4√(O·P)`.
///
/// At `t = 0` the printed bracket reduces to `2P`, so this is the form that
/// recovers `|φ₀⟩⟨φ₀|`; it also tracks the numerical solution.
pub fn rho_xy_amended(alpha: f64, lambda: f64, beta: f64, t: f64) -> Result<DensityMatrix> {
    let k = XyConstants::new(alpha, lambda, beta, t)?;
    k.require_regular_p()?;
    let rho11 = xy_population(alpha, lambda, beta, t, &k);
    let denom = 4.0 * sqrt(k.o) * k.p;
    Ok(assemble(rho11, xy_coherence_numerator(alpha, lambda, beta, t, &k) / denom))
}

/// `ρ(t)` for `F = μσz` as printed.
pub fn rho_z(alpha: f64, mu: f64, t: f64) -> Result<DensityMatrix> {
    check_finite("alpha", alpha)?;
    let k = ZConstants::new(mu, t)?;
    let sa = sin(alpha);
    let rho11 = exp(-t) * sa * sa;
    let re = exp(-0.5 * t) * sin(2.0 * alpha) / (2.0 * k.gamma);
    let im = 8.0 * exp(-t) * (exp(0.5 * t) - k.gamma) * mu * sa * sa
        / (2.0 * k.gamma * (1.0 - 4.0 * mu * mu));
    Ok(assemble(rho11, c(re, -im)))
}

/// The printed derived quantities.
///
/// `comm_sq = |⟨[A, B]⟩|²` and `anticomm_sq = |⟨{Ǎ, B̌}⟩|²` are unnormalized:
/// they are four times the `comm_term`/`anticomm_term` of [`crate::metrics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedQuantities {
    pub var_a: f64,
    pub var_b: f64,
    pub comm_sq: f64,
    pub anticomm_sq: f64,
    pub y: f64,
}

pub fn quantities_xy(alpha: f64, lambda: f64, beta: f64, t: f64) -> Result<PrintedQuantities> {
    let k = XyConstants::new(alpha, lambda, beta, t)?;
    k.require_regular_p()?;
    let (sb, cb) = (sin(beta), cos(beta));
    let s2a = sin(2.0 * alpha);
    let s2a_sq = s2a * s2a;
    let c2a = cos(2.0 * alpha);
    let p2 = k.p * k.p;
    let t2 = k.rate * k.rate;
    let e_rate = exp(k.rate * t);
    let e_lp = exp(2.0 * t * lambda * k.p);

    let inner_a = 2.0 * cb + lambda * (1.0 + cos(2.0 * beta) + 2.0 * e_lp * sb * sb);
    let var_a = 1.0 - s2a_sq * inner_a * inner_a / (4.0 * k.o * p2);

    let inner_b = k.rate * c2a + (e_rate - 1.0) * (1.0 + 2.0 * lambda * cb);
    let var_b = 1.0 - inner_b * inner_b / (t2 * e_rate * e_rate);

    let grow = exp(2.0 * k.p * t) - 1.0;
    let comm_sq = 4.0 * k.xi * k.xi * s2a_sq * sb * sb * grow * grow / (k.o * p2);

    let inner_c = (e_rate - 1.0) * (1.0 + 2.0 * lambda * cb) + c2a * k.rate;
    let anticomm_sq =
        4.0 * inner_c * inner_c * s2a_sq * k.g * k.g / (p2 * t2 * exp(3.0 * k.rate * t));

    let coh = k.xi * k.xi + e_lp * (-2.0 * k.xi + e_lp * (k.rate - lambda * lambda)) * sb * sb;
    let y = (-p2 * k.ell * (k.ell - 2.0 * k.rate * e_rate) - t2 * exp(t) * s2a_sq * coh)
        / (2.0 * e_rate * e_rate * t2 * p2);

    Ok(PrintedQuantities { var_a, var_b, comm_sq, anticomm_sq, y })
}

pub fn quantities_z(alpha: f64, mu: f64, t: f64) -> Result<PrintedQuantities> {
    check_finite("alpha", alpha)?;
    let k = ZConstants::new(mu, t)?;
    let sa = sin(alpha);
    let sa2 = sa * sa;
    let ca = cos(alpha);
    let mu2 = mu * mu;
    let s2a = sin(2.0 * alpha);

    let var_a = 0.5 * exp(-t * (1.0 + 4.0 * mu2)) * (-1.0 + 2.0 * exp(t + 4.0 * t * mu2) + cos(4.0 * alpha));
    let var_b = 2.0 * exp(-2.0 * t) * sa2 * (2.0 * exp(t) + cos(2.0 * alpha) - 1.0);
    // the exponent 2 − 2tμ² is kept verbatim
    let bracket = -1.0 + exp(2.0 - 2.0 * t * mu2);
    let comm_sq = 256.0 * exp(-2.0 * t) * bracket * bracket * mu2 * sa2 * sa2 / k.r;
    let lead = exp(t) - 2.0 * sa2;
    let anticomm_sq = 4.0 * exp(-t * (3.0 + 4.0 * mu2)) * lead * lead * s2a * s2a;
    let drift = exp(0.5 * t) - k.gamma;
    let y = sa2
        * (k.r * k.gamma * (2.0 * exp(t) + cos(2.0 * alpha) - 1.0)
            - 2.0 * (exp(t) * k.r * ca * ca + 16.0 * drift * drift * mu2 * sa2))
        / (k.r * k.gamma * exp(2.0 * t));

    Ok(PrintedQuantities { var_a, var_b, comm_sq, anticomm_sq, y })
}

/// Long-time limits of `U` and `Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyLimits {
    pub u_inf: f64,
    pub y_inf: f64,
}

/// General-β steady limits.
pub fn steady_xy(lambda: f64, beta: f64) -> Result<SteadyLimits> {
    check_finite("lambda", lambda)?;
    check_finite("beta", beta)?;
    let cb = cos(beta);
    let rate = 1.0 + 2.0 * lambda * lambda + 2.0 * lambda * cb;
    if rate <= 0.0 {
        return Err(Error::Domain { parameter: "1 + 2λ² + 2λcos β", value: rate });
    }
    let ratio = (1.0 + 2.0 * lambda * cb) / rate;
    let u_inf = 1.0 - ratio * ratio;
    let y_inf = 0.5 * (1.0 - ratio * ratio);
    Ok(SteadyLimits { u_inf, y_inf })
}

/// Printed specialization for `β = π/2` (feedback `λσx`).
pub fn steady_sigma_x(lambda: f64) -> SteadyLimits {
    let d = 1.0 + 2.0 * lambda * lambda;
    SteadyLimits { u_inf: 1.0 - 1.0 / (d * d), y_inf: 0.5 * (1.0 - 1.0 / (d * d)) }
}

/// Printed specialization for `β = 0` (feedback `λσy`).
pub fn steady_sigma_y(lambda: f64) -> SteadyLimits {
    let num = lambda * lambda * (1.0 + lambda) * (1.0 + lambda);
    let d = 1.0 + 2.0 * lambda + 2.0 * lambda * lambda;
    SteadyLimits { u_inf: 4.0 * num / (d * d), y_inf: 2.0 * num / (d * d) }
}

/// Printed steady limits for `μσz`: both vanish.
pub fn steady_z() -> SteadyLimits {
    SteadyLimits { u_inf: 0.0, y_inf: 0.0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};
    use proptest::prelude::*;

    fn max_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
        (*a.matrix() - *b.matrix()).max_abs()
    }

    #[test]
    fn xy_population_reduces_to_decay_without_feedback() {
        for &(alpha, t) in &[(0.3, 0.5), (1.2, 2.0), (FRAC_PI_2, 1.0)] {
            let rho = rho_xy(alpha, 0.0, 0.4, t).unwrap();
            let s = sin(alpha);
            assert!((rho.excited_population() - exp(-t) * s * s).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_coherence_misses_initial_state_off_unit_p() {
        // at t = 0 the printed coherence is √P·sin 2α / 2
        let (alpha, lambda, beta) = (FRAC_PI_4, 0.5, FRAC_PI_2);
        let rho = rho_xy(alpha, lambda, beta, 0.0).unwrap();
        assert!((rho.coherence().re - sqrt(0.5) / 2.0).abs() < 1e-15);
        let fixed = rho_xy_amended(alpha, lambda, beta, 0.0).unwrap();
        assert!(max_diff(&fixed, &DensityMatrix::initial(alpha)) < 1e-15);
        // where P = 1 both agree
        let a = rho_xy(alpha, 1.0, FRAC_PI_2, 0.0).unwrap();
        assert!(max_diff(&a, &DensityMatrix::initial(alpha)) < 1e-15);
    }

    #[test]
    fn z_examples() {
        let rho = rho_z(FRAC_PI_2, 1.0, 1.0).unwrap();
        assert!((rho.excited_population() - exp(-1.0)).abs() < 1e-15);
        assert!((rho.excited_population() - 0.3679).abs() < 1e-4);
        assert!(max_diff(&rho_z(0.8, 0.3, 0.0).unwrap(), &DensityMatrix::initial(0.8)) < 1e-15);
    }

    #[test]
    fn singular_bands() {
        assert!(matches!(rho_z(0.3, 0.5, 1.0), Err(Error::SingularParameter { .. })));
        assert!(matches!(quantities_z(0.3, -0.5 + 1e-8, 1.0), Err(Error::SingularParameter { .. })));
        assert!(rho_z(0.3, 0.5 + 1e-3, 1.0).is_ok());
        assert!(matches!(rho_xy(0.3, -1.0, 0.0, 1.0), Err(Error::SingularParameter { .. })));
        assert!(matches!(quantities_xy(0.3, 0.0, FRAC_PI_2, 1.0), Err(Error::SingularParameter { .. })));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(rho_xy(0.3, 1.0, 0.0, -0.1), Err(Error::Domain { .. })));
        assert!(matches!(rho_z(f64::NAN, 1.0, 0.1), Err(Error::Domain { .. })));
        assert!(matches!(steady_xy(f64::INFINITY, 0.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn quantities_at_initial_time() {
        let q = quantities_xy(FRAC_PI_4, 0.7, FRAC_PI_2, 0.0).unwrap();
        assert!(q.var_a.abs() < 1e-15);
        assert!(q.y.abs() < 1e-14);
        // Z family: var_A(0) = 1 − ⟨σx⟩₀² = 1 − sin² 2α
        for &alpha in &[0.0, 0.4, FRAC_PI_4, 1.3] {
            let q = quantities_z(alpha, 0.3, 0.0).unwrap();
            let sx = sin(2.0 * alpha);
            assert!((q.var_a - (1.0 - sx * sx)).abs() < 1e-15);
        }
    }

    #[test]
    fn z_ground_state_has_no_mixedness() {
        for &t in &[0.0, 0.3, 1.0, 5.0] {
            assert_eq!(quantities_z(0.0, 0.7, t).unwrap().y, 0.0);
        }
    }

    #[test]
    fn steady_examples() {
        let s = steady_xy(1.0, FRAC_PI_2).unwrap();
        assert!((s.u_inf - 8.0 / 9.0).abs() < 1e-15 && (s.y_inf - 4.0 / 9.0).abs() < 1e-15);
        let s = steady_xy(1.0, 0.0).unwrap();
        assert!((s.u_inf - 16.0 / 25.0).abs() < 1e-15 && (s.y_inf - 8.0 / 25.0).abs() < 1e-15);
        assert!(steady_xy(-1.0, 0.0).unwrap().u_inf.abs() < 1e-15);
        let s = steady_xy(0.0, 2.0).unwrap();
        assert_eq!((s.u_inf, s.y_inf), (0.0, 0.0));
        assert_eq!(steady_z(), SteadyLimits { u_inf: 0.0, y_inf: 0.0 });
    }

    #[test]
    fn specializations_agree_with_general_form() {
        for i in 0..=400 {
            let lambda = -2.0 + 0.01 * i as f64;
            let general = steady_xy(lambda, FRAC_PI_2).unwrap();
            let special = steady_sigma_x(lambda);
            assert!((general.u_inf - special.u_inf).abs() <= 1e-12);
            assert!((general.y_inf - special.y_inf).abs() <= 1e-12);
            let general = steady_xy(lambda, 0.0).unwrap();
            let special = steady_sigma_y(lambda);
            assert!((general.u_inf - special.u_inf).abs() <= 1e-12);
            assert!((general.y_inf - special.y_inf).abs() <= 1e-12);
            assert!((general.y_inf - 0.5 * general.u_inf).abs() <= 1e-15);
        }
    }

    proptest! {
        #[test]
        fn initial_state_recovery(alpha in 0.0..TAU) {
            let phi = DensityMatrix::initial(alpha);
            // the population formula and the Z family recover |φ₀⟩ everywhere
            let xy = rho_xy(alpha, 0.37, 1.9, 0.0).unwrap();
            prop_assert!((xy.excited_population() - phi.excited_population()).abs() <= 1e-12);
            prop_assert!(max_diff(&rho_xy_amended(alpha, 0.37, 1.9, 0.0).unwrap(), &phi) <= 1e-12);
            prop_assert!(max_diff(&rho_z(alpha, 0.8, 0.0).unwrap(), &phi) <= 1e-12);
            // the printed coherence only where λ + cos β = 1
            prop_assert!(max_diff(&rho_xy(alpha, 1.0, FRAC_PI_2, 0.0).unwrap(), &phi) <= 1e-12);
        }

        #[test]
        fn steady_ratio_is_two(lambda in -3.0f64..3.0, beta in 0.0..TAU) {
            let s = steady_xy(lambda, beta).unwrap();
            prop_assert!((s.u_inf - 2.0 * s.y_inf).abs() <= 1e-15);
        }
    }
}
