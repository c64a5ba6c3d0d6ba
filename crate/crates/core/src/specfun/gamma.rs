//! Gamma-function machinery: log-gamma on the positive real axis, the modulus
//! of the gamma function on the complex plane, signed gamma for negative real
//! arguments, and pole-cancelling gamma ratios.
//!
//! Everything is built on a single Lanczos approximation (g = 7, 9 terms)
//! valid for Re(z) >= 0.5, extended by the reflection formula
//! Γ(z)Γ(1−z) = π/sin(πz) elsewhere. Only log-magnitudes and signs are ever
//! needed downstream, which sidesteps complex-log branch bookkeeping.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Lanczos g parameter.
const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for g = 7, n = 9 (GNU Scientific Library set).
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

const LN_SQRT_TWO_PI: f64 = 0.918938533204672741780329736406;
const LN_PI: f64 = 1.144729885849400174143427351353;

/// True when `x` sits exactly on a pole of Γ (a nonpositive integer).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn lanczos_series(z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + (k as f64 - 1.0));
    }
    acc
}

/// ln Γ(z) for Re(z) >= 0.5 via Lanczos. Real part is the log-modulus.
fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.5);
    let t = z + (LANCZOS_G - 0.5);
    (z - 0.5) * t.ln() - t + LN_SQRT_TWO_PI + lanczos_series(z).ln()
}

/// ln Γ(x) for x > 0 with relative error below 1e-13.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "ln_gamma_real requires x > 0, got {x}"
        )));
    }
    if x >= 0.5 {
        Ok(ln_gamma_lanczos(Complex64::new(x, 0.0)).re)
    } else {
        // Γ(x) = Γ(x+1)/x keeps the argument in the accurate range.
        Ok(ln_gamma_lanczos(Complex64::new(x + 1.0, 0.0)).re - x.ln())
    }
}

/// ln|sin(πx)| together with the sign of sin(πx), for real non-integer x.
///
/// The argument is reduced exactly with `round`, so integer x is detected
/// exactly and reported as `None`.
fn ln_abs_sinpi_real(x: f64) -> Option<(f64, f64)> {
    let k = x.round();
    let r = x - k;
    if r == 0.0 {
        return None;
    }
    let magnitude = (std::f64::consts::PI * r).sin().abs().ln();
    let parity = if (k as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let sign = parity * r.signum();
    Some((magnitude, sign))
}

/// ln|sin(πz)| for complex z, stable for large |Im z|.
fn ln_abs_sinpi_complex(z: Complex64) -> f64 {
    let r = z.re - z.re.round();
    let s = (std::f64::consts::PI * r).sin();
    let a = (std::f64::consts::PI * z.im).abs();
    if a == 0.0 && s == 0.0 {
        return f64::NEG_INFINITY;
    }
    if a <= 20.0 {
        0.5 * (s * s + a.sinh() * a.sinh()).ln()
    } else {
        let e2 = (-2.0 * a).exp();
        a - std::f64::consts::LN_2 + 0.5 * ((4.0 * s * s - 2.0) * e2 + e2 * e2).ln_1p()
    }
}

/// ln|Γ(z)| on the complex plane (reflection for Re(z) < 0.5).
///
/// Returns `GammaPole` when z is exactly a nonpositive real integer.
pub fn ln_abs_gamma_complex(z: Complex64) -> Result<f64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite gamma argument {z}")));
    }
    if z.im == 0.0 && is_gamma_pole(z.re) {
        return Err(Error::GammaPole { argument: z.re });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z).re)
    } else {
        let reflected = ln_abs_gamma_complex(Complex64::new(1.0 - z.re, -z.im))?;
        Ok(LN_PI - ln_abs_sinpi_complex(z) - reflected)
    }
}

/// |Γ(z)| with relative error below 1e-12.
pub fn gamma_abs_complex(z: Complex64) -> Result<f64> {
    Ok(ln_abs_gamma_complex(z)?.exp())
}

/// (ln|Γ(x)|, sign Γ(x)) for real non-pole x of either sign.
pub fn ln_gamma_signed_real(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma_real(x)?, 1.0));
    }
    if is_gamma_pole(x) {
        return Err(Error::GammaPole { argument: x });
    }
    let (ln_sin, sign_sin) =
        ln_abs_sinpi_real(x).expect("pole case handled above, sin(πx) cannot vanish");
    let ln_abs = LN_PI - ln_sin - ln_gamma_real(1.0 - x)?;
    Ok((ln_abs, sign_sin))
}

/// Π Γ(numerators) / Π Γ(denominators) for real arguments, with cancellation
/// of matched poles.
///
/// Poles are cancelled pairwise through the limit
/// Γ(−m+ε)/Γ(−k+ε) → (−1)^(m−k) k!/m!, which assumes all arguments approach
/// their poles at the same rate. That is the convention needed by the Thomae
/// prefactor, whose degenerate instances perturb every argument linearly in
/// the same parameter.
pub fn gamma_ratio(numerators: &[f64], denominators: &[f64]) -> Result<f64> {
    let mut log_acc = 0.0_f64;
    let mut sign = 1.0_f64;
    let mut num_poles: Vec<u64> = Vec::new();
    let mut den_poles: Vec<u64> = Vec::new();

    for &x in numerators {
        if is_gamma_pole(x) {
            num_poles.push((-x) as u64);
        } else {
            let (l, s) = ln_gamma_signed_real(x)?;
            log_acc += l;
            sign *= s;
        }
    }
    for &x in denominators {
        if is_gamma_pole(x) {
            den_poles.push((-x) as u64);
        } else {
            let (l, s) = ln_gamma_signed_real(x)?;
            log_acc -= l;
            sign *= s;
        }
    }

    if num_poles.len() > den_poles.len() {
        return Err(Error::GammaPole {
            argument: -(num_poles[0] as f64),
        });
    }
    if num_poles.len() < den_poles.len() {
        // Leftover Γ(pole) in the denominator forces the ratio to zero.
        return Ok(0.0);
    }
    for (&m, &k) in num_poles.iter().zip(den_poles.iter()) {
        if (m + k) % 2 == 1 {
            sign = -sign;
        }
        log_acc += ln_gamma_real(k as f64 + 1.0)? - ln_gamma_real(m as f64 + 1.0)?;
    }

    Ok(sign * log_acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn rel_err(got: f64, want: f64) -> f64 {
        (got - want).abs() / want.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_at_one_and_two_vanishes() {
        assert!(ln_gamma_real(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma_real(2.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_matches_integer_factorials() {
        // Γ(7) = 6! = 720, and a longer factorial for the large-x branch.
        assert!(rel_err(ln_gamma_real(7.0).unwrap(), 720.0_f64.ln()) < 1e-13);
        let fact20: f64 = (1..=20u64).map(|k| k as f64).product::<f64>();
        assert!(rel_err(ln_gamma_real(21.0).unwrap(), fact20.ln()) < 1e-13);
    }

    #[test]
    fn ln_gamma_half_integers() {
        // Γ(1/2) = √π, Γ(5/2) = 3√π/4.
        assert!(rel_err(ln_gamma_real(0.5).unwrap(), PI.sqrt().ln()) < 1e-13);
        assert!(rel_err(ln_gamma_real(2.5).unwrap(), (0.75 * PI.sqrt()).ln()) < 1e-13);
    }

    #[test]
    fn complex_modulus_known_values() {
        assert!(rel_err(gamma_abs_complex(Complex64::new(1.0, 0.0)).unwrap(), 1.0) < 1e-13);
        assert!(
            rel_err(
                gamma_abs_complex(Complex64::new(0.5, 0.0)).unwrap(),
                PI.sqrt()
            ) < 1e-12
        );
        // |Γ(iy)|² = π/(y sinh πy)
        let want = (PI / (1.0 * (PI).sinh())).sqrt();
        assert!(rel_err(gamma_abs_complex(Complex64::new(0.0, 1.0)).unwrap(), want) < 1e-12);
    }

    #[test]
    fn imaginary_axis_identity_oracle() {
        // |Γ(iy)|² = π/(y sinh πy) and |Γ(1/2 + iy)|² = π/cosh(πy).
        for &y in &[0.25, 0.8, 1.0, 2.5, 7.0, 15.0] {
            let got = gamma_abs_complex(Complex64::new(0.0, y)).unwrap();
            let want = (PI / (y * (PI * y).sinh())).sqrt();
            assert!(rel_err(got, want) < 1e-12, "y = {y}");

            let got = gamma_abs_complex(Complex64::new(0.5, y)).unwrap();
            let want = (PI / (PI * y).cosh()).sqrt();
            assert!(rel_err(got, want) < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for &(x, y) in &[(-3.3, 0.7), (-0.2, 2.0), (0.9, 5.5), (4.0, 0.01)] {
            let z = Complex64::new(x, y);
            let a = gamma_abs_complex(z).unwrap();
            let b = gamma_abs_complex(z.conj()).unwrap();
            assert!(rel_err(a, b) < 1e-14);
        }
    }

    #[test]
    fn negative_real_axis_signed_values() {
        // Γ(−2.5) = Γ(1/2)/((−2.5)(−1.5)(−0.5)) = −√π/1.875
        let (l, s) = ln_gamma_signed_real(-2.5).unwrap();
        assert_eq!(s, -1.0);
        assert!(rel_err(l.exp(), PI.sqrt() / 1.875) < 1e-13);
        // consistency with the complex modulus path
        let m = gamma_abs_complex(Complex64::new(-2.5, 0.0)).unwrap();
        assert!(rel_err(l.exp(), m) < 1e-12);
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(
            ln_gamma_signed_real(-3.0),
            Err(Error::GammaPole { .. })
        ));
        assert!(matches!(
            gamma_abs_complex(Complex64::new(0.0, 0.0)),
            Err(Error::GammaPole { .. })
        ));
    }

    #[test]
    fn gamma_ratio_cancels_matched_poles() {
        // Γ(−3)Γ(3) / (Γ(−1)Γ(1)): the pole pair contributes
        // Γ(−3+ε)/Γ(−1+ε) → 1!/3! = 1/6, so the ratio is 2/6 = 1/3.
        let r = gamma_ratio(&[-3.0, 3.0], &[-1.0, 1.0]).unwrap();
        assert!(rel_err(r, 1.0 / 3.0) < 1e-13);
        // Unmatched numerator pole is infinite.
        assert!(gamma_ratio(&[-2.0], &[1.5]).is_err());
        // Unmatched denominator pole gives zero.
        assert_eq!(gamma_ratio(&[1.5], &[-2.0]).unwrap(), 0.0);
    }

    #[test]
    fn gamma_ratio_plain_arguments() {
        // Γ(4)Γ(2)/Γ(3) = 6·1/2 = 3, no poles involved.
        let r = gamma_ratio(&[4.0, 2.0], &[3.0]).unwrap();
        assert!(rel_err(r, 3.0) < 1e-13);
        // Sign from a single negative argument: Γ(−1.5) = 4√π/3 · ... < 0.
        let r = gamma_ratio(&[-1.5], &[1.0]).unwrap();
        let want = 4.0 * PI.sqrt() / 3.0;
        assert!(rel_err(r, want) < 1e-13);
        assert!(r > 0.0);
    }
}
