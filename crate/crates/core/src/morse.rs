//! The Morse oscillator model: parameters, the Laguerre basis that renders
//! the Hamiltonian tridiagonal, and the closed-form matrix elements of the
//! original and energy-shifted Hamiltonians.
//!
//! The Hamiltonian is H̃ = −(1/2) d²/dx² + V₀(e^{−2αx} − 2e^{−αx}) on the
//! whole line. In the basis
//!
//!   φ_n(x) = √(n! α / Γ(n+2γ+1)) ξ^{γ+1/2} e^{−ξ/2} L_n^{(2γ)}(ξ),
//!   ξ = α⁻¹ √(8V₀) e^{−αx},
//!
//! the matrix of H̃ is tridiagonal with
//!
//!   ã_n = (α²/2) [(n+γ+1/2−D)² + n(n+2γ) − D²]
//!   b̃_n = −(α²/2) √((n+1)(n+2γ+1)) (n+γ+1/2−D)
//!
//! where D = √(2V₀)/α − 1/2 is the dimensionless depth parameter. Adding the
//! shift α²D²/2 yields the positive semi-definite operator the factorization
//! machinery works with.

use crate::error::{Error, Result};
use crate::operator::TridiagonalOperator;
use crate::specfun::ln_gamma_real;

/// Morse oscillator parameters plus derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    /// Potential depth V₀ > 0 (energy units).
    pub v0: f64,
    /// Inverse-length width parameter α > 0.
    pub alpha: f64,
    /// Free basis scale parameter, restricted to 2γ > −1.
    pub gamma: f64,
    /// Dimensionless depth D = √(2V₀)/α − 1/2; bound states require D > 0.
    pub depth: f64,
    /// Energy shift α²D²/2 that makes the Hamiltonian positive semi-definite;
    /// also the continuum edge of the shifted spectrum.
    pub shift: f64,
}

impl MorseParams {
    /// Derives D and the shift from (V₀, α, γ), rejecting parameter sets
    /// without bound states (D ≤ 0) or with an inadmissible basis scale.
    pub fn new(v0: f64, alpha: f64, gamma: f64) -> Result<Self> {
        if !(v0.is_finite() && v0 > 0.0) {
            return Err(Error::InvalidParameter(format!("V0 must be > 0, got {v0}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be > 0, got {alpha}"
            )));
        }
        if !(gamma.is_finite() && 2.0 * gamma > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must satisfy 2*gamma > -1, got {gamma}"
            )));
        }
        let depth = (2.0 * v0).sqrt() / alpha - 0.5;
        if depth <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "no bound states: D = sqrt(2*V0)/alpha - 1/2 = {depth} must be > 0"
            )));
        }
        let shift = 0.5 * alpha * alpha * depth * depth;
        Ok(Self {
            v0,
            alpha,
            gamma,
            depth,
            shift,
        })
    }

    /// Same well with a different basis scale γ.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.v0, self.alpha, gamma)
    }

    /// The Morse potential V(x) = V₀(e^{−2αx} − 2e^{−αx}).
    pub fn potential(&self, x: f64) -> f64 {
        let u = (-self.alpha * x).exp();
        self.v0 * (u * u - 2.0 * u)
    }

    /// Basis argument ξ(x) = α⁻¹ √(8V₀) e^{−αx}.
    pub fn xi(&self, x: f64) -> f64 {
        self.xi_scale() * (-self.alpha * x).exp()
    }

    /// ξ(0) = √(8V₀)/α = 2D + 1.
    pub fn xi_scale(&self) -> f64 {
        (8.0 * self.v0).sqrt() / self.alpha
    }

    /// λ²(ℰ) = 2ℰ/α² − D² for a shifted energy ℰ.
    pub fn lambda_sq(&self, energy: f64) -> f64 {
        2.0 * energy / (self.alpha * self.alpha) - self.depth * self.depth
    }

    /// Shifted energy ℰ(λ) = (α²/2)(D² + λ²).
    pub fn energy_from_lambda(&self, lambda: f64) -> f64 {
        0.5 * self.alpha * self.alpha * (self.depth * self.depth + lambda * lambda)
    }

    /// Edge of the continuous spectrum of the shifted operator, α²D²/2.
    pub fn continuum_edge(&self) -> f64 {
        self.shift
    }

    /// Size N of the decoupled leading block when γ makes some b_{N−1}
    /// vanish, i.e. when D − γ − 1/2 is a nonnegative integer. Polynomials
    /// and closed forms are defined only up to degree N − 1 in that case.
    pub fn natural_truncation(&self) -> Option<usize> {
        let t = self.depth - self.gamma - 0.5;
        if t < -1e-9 {
            return None;
        }
        let rounded = t.round();
        if (t - rounded).abs() < 1e-9 {
            Some(rounded as usize + 1)
        } else {
            None
        }
    }

    /// The basis scale γ = D + 1/2 − N that decouples a leading N×N block.
    pub fn truncating_gamma(&self, block: usize) -> f64 {
        self.depth + 0.5 - block as f64
    }
}

/// A point of the (shifted) spectral axis together with λ² = 2ℰ/α² − D².
/// λ is real and nonnegative on the continuum ℰ ≥ α²D²/2 and pure imaginary
/// below it; all downstream formulas consume λ² directly, so no complex
/// arithmetic is needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub energy: f64,
    pub lambda_sq: f64,
}

impl SpectralPoint {
    pub fn new(params: &MorseParams, energy: f64) -> Self {
        Self {
            energy,
            lambda_sq: params.lambda_sq(energy),
        }
    }

    pub fn is_continuum(&self) -> bool {
        self.lambda_sq >= 0.0
    }

    /// λ ≥ 0 on the continuum; error below the edge.
    pub fn lambda(&self) -> Result<f64> {
        if self.lambda_sq < 0.0 {
            return Err(Error::Domain(format!(
                "energy {} lies below the continuum edge",
                self.energy
            )));
        }
        Ok(self.lambda_sq.sqrt())
    }
}

/// Generalized Laguerre polynomial L_n^{(a)}(x) by the stable three-term
/// recurrence (n+1) L_{n+1} = (2n+1+a−x) L_n − (n+a) L_{n−1}.
pub fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Basis function φ_n(x). The normalization is computed from log-gamma
/// differences so large n does not overflow.
pub fn basis_eval(params: &MorseParams, n: usize, x: f64) -> f64 {
    let xi = params.xi(x);
    let a = 2.0 * params.gamma;
    let ln_norm = 0.5
        * (ln_gamma_real(n as f64 + 1.0).expect("n+1 > 0") + params.alpha.ln()
            - ln_gamma_real(n as f64 + a + 1.0).expect("n + 2*gamma + 1 > 0"));
    let envelope = ln_norm + (params.gamma + 0.5) * xi.ln() - 0.5 * xi;
    envelope.exp() * laguerre(n, a, xi)
}

/// Matrix elements (ã_n, b̃_n) of the unshifted Hamiltonian H̃.
pub fn h_tilde_coefficients(params: &MorseParams, n: usize) -> (f64, f64) {
    let half_alpha_sq = 0.5 * params.alpha * params.alpha;
    let nf = n as f64;
    let offset = nf + params.gamma + 0.5 - params.depth;
    let a = half_alpha_sq
        * (offset * offset + nf * (nf + 2.0 * params.gamma) - params.depth * params.depth);
    let b = -half_alpha_sq * ((nf + 1.0) * (nf + 2.0 * params.gamma + 1.0)).sqrt() * offset;
    (a, b)
}

/// The shifted operator H = H̃ + α²D²/2 with a_n = ã_n + α²D²/2 and
/// b_n = b̃_n; equivalently a_n = (α²/2)[(n+γ+1/2−D)² + n(n+2γ)], which is
/// manifestly nonnegative.
pub fn shifted_operator(params: &MorseParams) -> TridiagonalOperator {
    let p = *params;
    TridiagonalOperator::from_fns(
        move |n| h_tilde_coefficients(&p, n).0 + p.shift,
        move |n| h_tilde_coefficients(&p, n).1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_panels;

    fn default_params() -> MorseParams {
        MorseParams::new(8.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn derive_params_known_cases() {
        let p = default_params();
        assert!((p.depth - 3.5).abs() < 1e-15);
        assert!((p.shift - 6.125).abs() < 1e-15);

        let p = MorseParams::new(2.0, 2.0, 0.25).unwrap();
        assert!((p.depth - 0.5).abs() < 1e-15);
        assert!((p.shift - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derive_params_rejects_threshold_well() {
        // V0 = α²/8 puts D exactly at zero: no bound states.
        assert!(MorseParams::new(0.125, 1.0, 0.0).is_err());
        assert!(MorseParams::new(8.0, 1.0, -0.5).is_err());
        assert!(MorseParams::new(-1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn basis_value_at_xi_eight() {
        // γ=0, α=1: φ₀ at the point where ξ = 8 is √8 e^{−4} (L₀ = 1).
        let p = default_params();
        assert!((p.xi(0.0) - 8.0).abs() < 1e-12);
        let want = 8.0_f64.sqrt() * (-4.0_f64).exp();
        assert!((basis_eval(&p, 0, 0.0) - want).abs() < 1e-14 * want);
    }

    #[test]
    fn basis_orthonormality_by_quadrature() {
        let p = default_params();
        for (n, m, want) in [(0usize, 0usize, 1.0), (0, 1, 0.0), (2, 2, 1.0), (3, 5, 0.0)] {
            let got = integrate_panels(
                |x| basis_eval(&p, n, x) * basis_eval(&p, m, x),
                -10.0 / p.alpha,
                40.0 / p.alpha,
                100,
                24,
            );
            assert!((got - want).abs() < 1e-8, "<{n}|{m}> = {got}");
        }
    }

    #[test]
    fn h_tilde_known_values() {
        let p = default_params();
        let (a0, b0) = h_tilde_coefficients(&p, 0);
        assert!((a0 - (-1.625)).abs() < 1e-15);
        assert!((b0 - 1.5).abs() < 1e-15);
        let (_, b3) = h_tilde_coefficients(&p, 3);
        assert_eq!(b3, 0.0); // n + γ + 1/2 − D = 0 exactly

        // γ = γ₁ = D − 1/2 makes b̃₀ = 0 and ã₀ = −α²D²/2.
        let p1 = p.with_gamma(p.depth - 0.5).unwrap();
        let (a0, b0) = h_tilde_coefficients(&p1, 0);
        assert_eq!(b0, 0.0);
        assert!((a0 + p.shift).abs() < 1e-12);
    }

    #[test]
    fn shifted_operator_hand_values() {
        let p = default_params();
        let op = shifted_operator(&p);
        let (diag, off) = op.truncation(4);
        for (got, want) in diag.iter().zip([4.5, 2.5, 2.5, 4.5].iter()) {
            assert!((got - want).abs() < 1e-14);
        }
        for (got, want) in off.iter().zip([1.5, 2.0, 1.5].iter()) {
            assert!((got - want).abs() < 1e-14);
        }
        // a_n ≥ 0 for the shifted operator.
        for n in 0..200 {
            assert!(op.diag(n) >= 0.0);
        }
        // a₀ = 0 at the zero-mode basis scale.
        let op1 = shifted_operator(&p.with_gamma(p.depth - 0.5).unwrap());
        assert!(op1.diag(0).abs() < 1e-12);
    }

    #[test]
    fn offdiag_single_sign_change() {
        // b_n is positive while n < D − γ − 1/2 and negative beyond; exactly
        // one sign change over any truncation for generic parameters.
        let p = MorseParams::new(12.5, 2.0, -0.25).unwrap(); // D = 2
        let op = shifted_operator(&p);
        let signs: Vec<f64> = (0..50).map(|n| op.offdiag(n).signum()).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1);
    }

    #[test]
    fn scale_covariance_in_alpha() {
        // Scaling α → sα with V₀ → s²V₀ holds D fixed and scales a, b by s².
        let base = MorseParams::new(8.0, 1.0, 0.1).unwrap();
        let s = 2.5;
        let scaled = MorseParams::new(8.0 * s * s, s, 0.1).unwrap();
        assert!((scaled.depth - base.depth).abs() < 1e-12);
        for n in 0..20 {
            let (a1, b1) = h_tilde_coefficients(&base, n);
            let (a2, b2) = h_tilde_coefficients(&scaled, n);
            assert!((a2 - s * s * a1).abs() < 1e-12 * a1.abs().max(1.0));
            assert!((b2 - s * s * b1).abs() < 1e-12 * b1.abs().max(1.0));
        }
    }

    #[test]
    fn natural_truncation_detection() {
        assert_eq!(default_params().natural_truncation(), Some(4));
        let p = MorseParams::new(2.0, 1.0, 0.25).unwrap(); // D = 1.5, γ = 0.25
        assert_eq!(p.natural_truncation(), None);
        assert_eq!(
            p.with_gamma(p.truncating_gamma(2))
                .unwrap()
                .natural_truncation(),
            Some(2)
        );
    }

    #[test]
    fn spectral_point_lambda_conventions() {
        let p = default_params();
        let above = SpectralPoint::new(&p, 8.125);
        assert!(above.is_continuum());
        assert!((above.lambda().unwrap() - 2.0).abs() < 1e-12); // λ² = 16.25 − 12.25

        let below = SpectralPoint::new(&p, 0.0);
        assert!(!below.is_continuum());
        assert!((below.lambda_sq + p.depth * p.depth).abs() < 1e-12);
        assert!(below.lambda().is_err());
    }
}
