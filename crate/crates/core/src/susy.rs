//! Supersymmetric factorization layer: the coefficients (c_n, d_n) of the
//! forward-shift operator A with H = A†A, its action on coefficient vectors,
//! and the partner operator H⁺ = AA†.
//!
//! In coefficient space, A acts as (Av)_n = c_n v_n + d_{n+1} v_{n+1} and its
//! adjoint as (A†v)_n = c_n v_n + d_n v_{n−1}, with d₀ = 0. The factorization
//! pins |c_n| and |d_n| through
//!
//!   d_{n+1}² = −b_n P_n(0)/P_{n+1}(0),   c_n² = −b_n P_{n+1}(0)/P_n(0),
//!
//! while the sign convention d_n ≤ 0, c_n d_{n+1} = b_n matches the Morse
//! closed forms c_n = (α/√2)(n+γ+1/2−D), d_{n+1} = −(α/√2)√((n+1)(n+1+2γ)).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::morse::MorseParams;
use crate::operator::TridiagonalOperator;

type Seq = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// Squares slightly below zero (rounding noise) are clamped; anything below
/// this signals a genuinely non-positive-semi-definite operator.
const NEGATIVE_SQUARE_TOLERANCE: f64 = 1e-12;

/// The sequences {c_n} and {d_n} defining the forward-shift operator.
#[derive(Clone)]
pub struct FactorCoefficients {
    c: Seq,
    d: Seq,
}

impl FactorCoefficients {
    /// Closed-form Morse coefficients.
    pub fn closed_form(params: &MorseParams) -> Self {
        let p = *params;
        Self {
            c: Arc::new(move |n| closed_form_cd(&p, n).0),
            d: Arc::new(move |n| {
                if n == 0 {
                    0.0
                } else {
                    closed_form_cd(&p, n - 1).1
                }
            }),
        }
    }

    /// Coefficients backed by materialized arrays (the polynomial route).
    /// Indexing past the materialized range is a caller bug and panics.
    pub fn from_values(c: Vec<f64>, d: Vec<f64>) -> Self {
        assert!(d.is_empty() || d[0] == 0.0, "d_0 must be 0");
        Self {
            c: Arc::new(move |n| {
                *c.get(n)
                    .unwrap_or_else(|| panic!("c_{n} beyond materialized factor coefficients"))
            }),
            d: Arc::new(move |n| {
                *d.get(n)
                    .unwrap_or_else(|| panic!("d_{n} beyond materialized factor coefficients"))
            }),
        }
    }

    pub fn c(&self, n: usize) -> f64 {
        (self.c)(n)
    }

    /// d_n, with d_0 = 0.
    pub fn d(&self, n: usize) -> f64 {
        (self.d)(n)
    }
}

impl std::fmt::Debug for FactorCoefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FactorCoefficients")
            .field("c[0..3]", &[self.c(0), self.c(1), self.c(2)])
            .field("d[0..3]", &[self.d(0), self.d(1), self.d(2)])
            .finish()
    }
}

/// Closed-form (c_n, d_{n+1}) for the shifted Morse operator.
pub fn closed_form_cd(params: &MorseParams, n: usize) -> (f64, f64) {
    let scale = params.alpha / std::f64::consts::SQRT_2;
    let nf = n as f64;
    let c = scale * (nf + params.gamma + 0.5 - params.depth);
    let d = -scale * ((nf + 1.0) * (nf + 1.0 + 2.0 * params.gamma)).sqrt();
    (c, d)
}

/// Factorization coefficients from the tridiagonal data and the values at
/// zero of consecutive polynomials, for n ≤ n_max. `p0` must provide
/// P_0(0)..P_{n_max+1}(0). Returns the coefficients together with the list of
/// indices whose squares fell in [−1e−12, 0) and were clamped to zero.
///
/// Both defining identities are validated to 1e−12 relative before returning;
/// a square below −1e−12 or a vanishing P_n(0) is an error.
pub fn factor_from_polynomials(
    op: &TridiagonalOperator,
    p0: &[f64],
    n_max: usize,
) -> Result<(FactorCoefficients, Vec<usize>)> {
    if p0.len() < n_max + 2 {
        return Err(Error::Factorization(format!(
            "need P_0(0)..P_{}(0), got {} values",
            n_max + 1,
            p0.len()
        )));
    }
    let mut clamped = Vec::new();
    let mut clamp = |value: f64, n: usize, label: &str| -> Result<f64> {
        if value >= 0.0 {
            Ok(value)
        } else if value >= -NEGATIVE_SQUARE_TOLERANCE {
            clamped.push(n);
            Ok(0.0)
        } else {
            Err(Error::Factorization(format!(
                "{label} squared is {value} at n = {n}: operator is not positive semi-definite"
            )))
        }
    };

    let mut c = Vec::with_capacity(n_max + 1);
    let mut d = vec![0.0_f64; n_max + 2];
    for n in 0..=n_max {
        if p0[n].abs() < 1e-300 || p0[n + 1].abs() < 1e-300 {
            return Err(Error::Factorization(format!(
                "P_{n}(0) or P_{}(0) vanishes: zero is an eigenvalue of a leading truncation",
                n + 1
            )));
        }
        let b = op.offdiag(n);
        let d_sq = clamp(-b * p0[n] / p0[n + 1], n + 1, "d")?;
        let c_sq = clamp(-b * p0[n + 1] / p0[n], n, "c")?;
        let d_next = -d_sq.sqrt();
        // d_{n+1} = 0 forces b_n = 0 and with it c_n² = 0.
        let c_n = if d_next != 0.0 { b / d_next } else { 0.0 };
        if (c_n * c_n - c_sq).abs() > 1e-10 * c_sq.max(1.0) {
            return Err(Error::Factorization(format!(
                "inconsistent c_{n}² between the two quotients: {} vs {c_sq}",
                c_n * c_n
            )));
        }
        c.push(c_n);
        d[n + 1] = d_next;
    }

    // Validate H = A†A component-wise: a_n = c_n² + d_n², b_n = c_n d_{n+1}.
    for n in 0..=n_max {
        let a = op.diag(n);
        let b = op.offdiag(n);
        let a_rebuilt = c[n] * c[n] + d[n] * d[n];
        if (a_rebuilt - a).abs() > 1e-12 * a.abs().max(1.0) {
            return Err(Error::Factorization(format!(
                "diagonal reconstruction failed at n = {n}: {a_rebuilt} vs {a}"
            )));
        }
        let b_rebuilt = c[n] * d[n + 1];
        if (b_rebuilt - b).abs() > 1e-12 * b.abs().max(1.0) {
            return Err(Error::Factorization(format!(
                "off-diagonal reconstruction failed at n = {n}: {b_rebuilt} vs {b}"
            )));
        }
    }

    Ok((FactorCoefficients::from_values(c, d), clamped))
}

/// Forward-shift action on expansion coefficients:
/// (Av)_n = c_n v_n + d_{n+1} v_{n+1}. Output has the input's length.
pub fn apply_a(fc: &FactorCoefficients, v: &[f64]) -> Vec<f64> {
    let len = v.len();
    (0..len)
        .map(|n| {
            let mut acc = fc.c(n) * v[n];
            if n + 1 < len {
                acc += fc.d(n + 1) * v[n + 1];
            }
            acc
        })
        .collect()
}

/// Adjoint action: (A†v)_n = c_n v_n + d_n v_{n−1}. Output is one entry
/// longer than the input, picking up the d_L v_{L−1} spill-over.
pub fn apply_a_dagger(fc: &FactorCoefficients, v: &[f64]) -> Vec<f64> {
    let len = v.len();
    (0..=len)
        .map(|n| {
            let mut acc = 0.0;
            if n < len {
                acc += fc.c(n) * v[n];
            }
            if n > 0 && n - 1 < len {
                acc += fc.d(n) * v[n - 1];
            }
            acc
        })
        .collect()
}

/// The partner operator H⁺ = AA†: a⁺_n = c_n² + d_{n+1}², b⁺_n = c_{n+1} d_{n+1}.
pub fn partner_operator(fc: &FactorCoefficients) -> TridiagonalOperator {
    let fc_a = fc.clone();
    let fc_b = fc.clone();
    TridiagonalOperator::from_fns(
        move |n| {
            let c = fc_a.c(n);
            let d = fc_a.d(n + 1);
            c * c + d * d
        },
        move |n| fc_b.c(n + 1) * fc_b.d(n + 1),
    )
}

/// Closed-form partner coefficients:
/// a⁺_n = (α²/2)[(n+1)(n+2γ+1) + (n+γ+1/2−D)²],
/// b⁺_n = −(α²/2)√((n+1)(n+2γ+1)) (n+γ+3/2−D).
pub fn partner_coefficients_closed(params: &MorseParams, n: usize) -> (f64, f64) {
    let half_alpha_sq = 0.5 * params.alpha * params.alpha;
    let nf = n as f64;
    let offset = nf + params.gamma + 0.5 - params.depth;
    let cross = (nf + 1.0) * (nf + 2.0 * params.gamma + 1.0);
    let a = half_alpha_sq * (cross + offset * offset);
    let b = -half_alpha_sq * cross.sqrt() * (offset + 1.0);
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::{h_tilde_coefficients, shifted_operator};

    fn default_params() -> MorseParams {
        MorseParams::new(8.0, 1.0, 0.0).unwrap()
    }

    /// Ground-truth polynomial values at zero by direct recursion on the
    /// operator data; independent of the closed forms under test.
    fn p_at_zero_by_recursion(op: &TridiagonalOperator, n_max: usize) -> Vec<f64> {
        let mut p = vec![1.0_f64];
        if n_max >= 1 {
            p.push((0.0 - op.diag(0)) / op.offdiag(0));
        }
        for n in 1..n_max {
            let next = (0.0 - op.diag(n)) * p[n] - op.offdiag(n - 1) * p[n - 1];
            p.push(next / op.offdiag(n));
        }
        p
    }

    #[test]
    fn closed_form_hand_values() {
        let p = default_params();
        let (c0, d1) = closed_form_cd(&p, 0);
        assert!((c0 + 3.0 / 2.0_f64.sqrt()).abs() < 1e-14);
        assert!((d1 + 1.0 / 2.0_f64.sqrt()).abs() < 1e-14);
        let (c1, d2) = closed_form_cd(&p, 1);
        assert!((c1 + 2.0_f64.sqrt()).abs() < 1e-14);
        assert!((d2 + 2.0_f64.sqrt()).abs() < 1e-14);
        // c₁ d₂ = b₁ = 2 (Morse off-diagonal identity).
        assert!((c1 * d2 - 2.0).abs() < 1e-14);
        // c₃ = 0 at the index where n + γ + 1/2 − D vanishes.
        assert_eq!(closed_form_cd(&p, 3).0, 0.0);
    }

    #[test]
    fn zero_mode_basis_scale_annihilates() {
        let p = default_params();
        let p1 = p.with_gamma(p.depth - 0.5).unwrap();
        let fc = FactorCoefficients::closed_form(&p1);
        assert_eq!(fc.c(0), 0.0);
        assert_eq!(fc.d(0), 0.0);
        // A annihilates the zero mode e₀.
        let out = apply_a(&fc, &[1.0]);
        assert_eq!(out, vec![0.0]);
    }

    #[test]
    fn polynomial_route_matches_closed_form_default() {
        let p = default_params();
        let op = shifted_operator(&p);
        let p0 = p_at_zero_by_recursion(&op, 3); // [1, −3, 3, −1]
        assert_eq!(p0, vec![1.0, -3.0, 3.0, -1.0]);
        let (fc, clamped) = factor_from_polynomials(&op, &p0, 2).unwrap();
        assert!(clamped.is_empty());
        for n in 0..=2 {
            let (c, d) = closed_form_cd(&p, n);
            assert!((fc.c(n) - c).abs() < 1e-12, "c_{n}");
            assert!((fc.d(n + 1) - d).abs() < 1e-12, "d_{}", n + 1);
        }
    }

    #[test]
    fn polynomial_route_matches_closed_form_deep() {
        // Non-truncating parameters allow a deep comparison.
        let p = MorseParams::new(2.0, 1.0, 0.25).unwrap();
        let op = shifted_operator(&p);
        let p0 = p_at_zero_by_recursion(&op, 32);
        let (fc, _) = factor_from_polynomials(&op, &p0, 30).unwrap();
        for n in 0..=30 {
            let (c, d) = closed_form_cd(&p, n);
            assert!((fc.c(n) - c).abs() < 1e-12 * c.abs().max(1.0), "c_{n}");
            assert!(
                (fc.d(n + 1) - d).abs() < 1e-12 * d.abs().max(1.0),
                "d_{}",
                n + 1
            );
        }
    }

    #[test]
    fn corrupted_operator_is_rejected() {
        let p = default_params();
        let op = shifted_operator(&p).with_offdiag_override(1, 2.3);
        let p0 = p_at_zero_by_recursion(&op, 3);
        assert!(factor_from_polynomials(&op, &p0, 2).is_err());
    }

    #[test]
    fn shift_operators_are_adjoint() {
        let p = MorseParams::new(2.0, 1.0, 0.25).unwrap();
        let fc = FactorCoefficients::closed_form(&p);
        // Deterministic pseudo-random vectors of length 20.
        let u: Vec<f64> = (0..20)
            .map(|i| ((i * 7 % 13) as f64 - 6.0) * 0.31)
            .collect();
        let v: Vec<f64> = (0..20)
            .map(|i| ((i * 11 % 17) as f64 - 8.0) * 0.17)
            .collect();
        let au = apply_a(&fc, &u);
        let adv = apply_a_dagger(&fc, &v);
        let lhs: f64 = au.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        let rhs: f64 = u.iter().zip(adv.iter()).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-14 * lhs.abs().max(1.0));

        // ‖Av‖² = v · (A†A v).
        let aav = apply_a_dagger(&fc, &au);
        let norm_sq: f64 = au.iter().map(|x| x * x).sum();
        let quad: f64 = u.iter().zip(aav.iter()).map(|(a, b)| a * b).sum();
        assert!((norm_sq - quad).abs() < 1e-12 * norm_sq.max(1.0));
    }

    #[test]
    fn unit_vector_actions() {
        let p = default_params();
        let fc = FactorCoefficients::closed_form(&p);
        // A e₁ = d₁ e₀ + c₁ e₁ in coefficient space.
        let out = apply_a(&fc, &[0.0, 1.0]);
        assert!((out[0] - fc.d(1)).abs() < 1e-15);
        assert!((out[1] - fc.c(1)).abs() < 1e-15);
        // A† e₀ = c₀ e₀ + d₁ e₁.
        let out = apply_a_dagger(&fc, &[1.0]);
        assert!((out[0] - fc.c(0)).abs() < 1e-15);
        assert!((out[1] - fc.d(1)).abs() < 1e-15);
        // A†A e₀ reproduces column 0 of H: (a₀, b₀).
        let op = shifted_operator(&p);
        let col = apply_a_dagger(&fc, &apply_a(&fc, &[1.0, 0.0]));
        assert!((col[0] - op.diag(0)).abs() < 1e-12);
        assert!((col[1] - op.offdiag(0)).abs() < 1e-12);
    }

    #[test]
    fn partner_operator_hand_values() {
        let p = default_params();
        let partner = partner_operator(&FactorCoefficients::closed_form(&p));
        let (diag, off) = partner.truncation(3);
        for (got, want) in diag.iter().zip([5.0, 4.0, 5.0].iter()) {
            assert!((got - want).abs() < 1e-12);
        }
        for (got, want) in off.iter().zip([1.0, 1.0].iter()) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(partner.offdiag(2).abs() < 1e-12); // n + γ + 3/2 − D = 0

        // Closed partner forms agree with c/d composition.
        for n in 0..40 {
            let (a, b) = partner_coefficients_closed(&p, n);
            assert!((partner.diag(n) - a).abs() < 1e-12 * a.max(1.0));
            assert!((partner.offdiag(n) - b).abs() < 1e-12 * b.abs().max(1.0));
        }
    }

    #[test]
    fn shape_invariance_up_to_additive_constant() {
        // b⁺_n(D) equals b_n with D → D−1 exactly; a⁺_n(D) equals
        // a_n(D → D−1) plus the constant (α²/2)(2D−1).
        let p = MorseParams::new(8.0, 1.0, 0.25).unwrap();
        let down = MorseParams::new((p.depth - 1.0 + 0.5).powi(2) / 2.0, 1.0, 0.25).unwrap();
        assert!((down.depth - (p.depth - 1.0)).abs() < 1e-12);
        let constant = 0.5 * (2.0 * p.depth - 1.0);
        for n in 0..=50 {
            let (a_plus, b_plus) = partner_coefficients_closed(&p, n);
            let (a_down, b_down) = h_tilde_coefficients(&down, n);
            let a_down = a_down + down.shift;
            assert!(
                (b_plus - b_down).abs() < 1e-12 * b_plus.abs().max(1.0),
                "b at {n}"
            );
            assert!(
                (a_plus - (a_down + constant)).abs() < 1e-12 * a_plus.max(1.0),
                "a at {n}"
            );
        }
    }

    #[test]
    fn factor_and_rebuild_round_trip() {
        let p = MorseParams::new(12.5, 2.0, -0.25).unwrap();
        let op = shifted_operator(&p);
        let fc = FactorCoefficients::closed_form(&p);
        for n in 0..=50 {
            let a = fc.c(n) * fc.c(n) + fc.d(n) * fc.d(n);
            let b = fc.c(n) * fc.d(n + 1);
            assert!((a - op.diag(n)).abs() < 1e-12 * op.diag(n).max(1.0));
            assert!((b - op.offdiag(n)).abs() < 1e-12 * op.offdiag(n).abs().max(1.0));
        }
    }

    #[test]
    fn intertwining_on_truncations() {
        // H⁺A = AH on interior indices of a 30×30 truncation.
        let p = MorseParams::new(2.0, 1.0, 0.25).unwrap();
        let h = shifted_operator(&p);
        let fc = FactorCoefficients::closed_form(&p);
        let h_plus = partner_operator(&fc);
        let size = 30;
        for j in 0..size - 1 {
            let mut e = vec![0.0; size];
            e[j] = 1.0;
            let lhs = h_plus.apply(&apply_a(&fc, &e));
            let rhs = apply_a(&fc, &h.apply(&e));
            for i in 0..size - 1 {
                assert!(
                    (lhs[i] - rhs[i]).abs() < 1e-12 * rhs[i].abs().max(1.0),
                    "row {i}, column {j}"
                );
            }
        }
    }
}
