//! Terminating generalized hypergeometric sums at unit argument, Pochhammer
//! symbols, the Thomae transformation, and the finite summation formula that
//! turns a sum of ₃F₂ values into a single ₄F₃.
//!
//! All terminating sums are evaluated by forward term recursion (each term is
//! the previous one times a rational multiplier) rather than by Pochhammer
//! quotients of gamma functions, which avoids spurious poles when parameters
//! sit near negative integers. Sums over real or conjugate-pair parameters
//! cancel heavily inside the polynomial oscillation region (terms reach ~1e5
//! times the result around n = 25), so those routes carry the term and the
//! running sum in double-double.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::dd::{two_prod, Dd};
use crate::specfun::gamma::gamma_ratio;

/// Magnitude below which a denominator factor counts as an exact zero.
const POLE_THRESHOLD: f64 = 1e-300;

/// Rising factorial (x)_k = x(x+1)···(x+k−1), with (x)_0 = 1.
pub fn pochhammer(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..k {
        acc *= x + j as f64;
    }
    acc
}

/// Rising factorial for a complex base.
pub fn pochhammer_complex(z: Complex64, k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= z + j as f64;
    }
    acc
}

/// Parameters of a terminating ₃F₂(−n, b, c; d, e | 1) sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp3F2Params {
    /// Terminating index: the first numerator parameter is −n.
    pub n: usize,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
}

impl Hyp3F2Params {
    pub fn new(n: usize, b: Complex64, c: Complex64, d: Complex64, e: Complex64) -> Result<Self> {
        let p = Self { n, b, c, d, e };
        p.validate()?;
        Ok(p)
    }

    /// Checks that all components are finite and that neither denominator
    /// parameter is a nonpositive integer of magnitude below n, which would
    /// put a Pochhammer zero inside the sum.
    pub fn validate(&self) -> Result<()> {
        for (label, z) in [("b", self.b), ("c", self.c), ("d", self.d), ("e", self.e)] {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite parameter {label} = {z}"
                )));
            }
        }
        for z in [self.d, self.e] {
            if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() && (-z.re) < self.n as f64 {
                return Err(Error::InvalidParameter(format!(
                    "denominator parameter {} is a nonpositive integer of magnitude < n = {}",
                    z.re, self.n
                )));
            }
        }
        Ok(())
    }
}

fn is_conjugate_pair(b: Complex64, c: Complex64) -> bool {
    b.re == c.re && b.im == -c.im && b.im != 0.0
}

/// Terminating real-parameter ₃F₂ with the term recursion carried in
/// double-double precision.
fn hyp3f2_real_dd(n: usize, b: f64, c: f64, d: f64, e: f64) -> Result<f64> {
    let mut sum = Dd::from_f64(1.0);
    let mut term = Dd::from_f64(1.0);
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        if ((d + kf) * (e + kf)).abs() < POLE_THRESHOLD {
            return Err(Error::PochhammerZero { term: k + 1 });
        }
        let numerator = two_prod(b + kf, c + kf).mul_f64(kf - nf);
        let denominator = two_prod(d + kf, e + kf).mul_f64(kf + 1.0);
        term = term.mul(numerator).div(denominator);
        sum = sum.add(term);
    }
    Ok(sum.value())
}

/// Terminating ₃F₂ at unit argument:
/// Σ_{k=0}^{n} (−n)_k (b)_k (c)_k / [(d)_k (e)_k k!].
///
/// Real parameter sets and conjugate numerator pairs over real denominators
/// are dispatched to real double-double routes, which also makes the result
/// exactly real in those cases (the regime where the sum of a conjugate pair
/// must be real by symmetry). Genuinely complex parameter sets fall back to
/// the complex term recursion.
pub fn hyp3f2_terminating(p: &Hyp3F2Params) -> Result<Complex64> {
    p.validate()?;
    if p.d.im == 0.0 && p.e.im == 0.0 {
        if p.b.im == 0.0 && p.c.im == 0.0 {
            let value = hyp3f2_real_dd(p.n, p.b.re, p.c.re, p.d.re, p.e.re)?;
            return Ok(Complex64::new(value, 0.0));
        }
        if is_conjugate_pair(p.b, p.c) {
            let value = hyp3f2_conjugate_real(p.n, p.b.re, p.b.im * p.b.im, p.d.re, p.e.re)?;
            return Ok(Complex64::new(value, 0.0));
        }
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let n = p.n as f64;
    for k in 0..p.n {
        let kf = k as f64;
        let den_d = p.d + kf;
        let den_e = p.e + kf;
        if den_d.norm() < POLE_THRESHOLD || den_e.norm() < POLE_THRESHOLD {
            return Err(Error::PochhammerZero { term: k + 1 });
        }
        term *= (kf - n) * (p.b + kf) * (p.c + kf) / (den_d * den_e * (kf + 1.0));
        sum += term;
    }
    Ok(sum)
}

/// Terminating ₃F₂(−n, p+iλ, p−iλ; d, e | 1) in real arithmetic.
///
/// The conjugate numerator pair enters only through
/// (p+k+iλ)(p+k−iλ) = (p+k)² + λ², so λ² may be of either sign; negative λ²
/// covers the regime where the pair degenerates to two real parameters.
pub fn hyp3f2_conjugate_real(n: usize, p: f64, lambda_sq: f64, d: f64, e: f64) -> Result<f64> {
    for x in [d, e] {
        if x <= 0.0 && x == x.round() && (-x) < n as f64 {
            return Err(Error::InvalidParameter(format!(
                "denominator parameter {x} is a nonpositive integer of magnitude < n = {n}"
            )));
        }
    }
    let mut sum = Dd::from_f64(1.0);
    let mut term = Dd::from_f64(1.0);
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        if ((d + kf) * (e + kf)).abs() < POLE_THRESHOLD {
            return Err(Error::PochhammerZero { term: k + 1 });
        }
        let pair = two_prod(p + kf, p + kf).add(Dd::from_f64(lambda_sq));
        let numerator = pair.mul_f64(kf - nf);
        let denominator = two_prod(d + kf, e + kf).mul_f64(kf + 1.0);
        term = term.mul(numerator).div(denominator);
        sum = sum.add(term);
    }
    Ok(sum.value())
}

/// The conjugate-pair sum with parameters supplied in double-double, for
/// callers that derive (p, λ², d, e) from exact inputs: at heavy
/// cancellation the sum is as sensitive to parameter rounding as to
/// summation rounding.
pub(crate) fn hyp3f2_conjugate_dd(n: usize, p: Dd, lambda_sq: Dd, d: Dd, e: Dd) -> Result<f64> {
    for x in [d.value(), e.value()] {
        if x <= 0.0 && x == x.round() && (-x) < n as f64 {
            return Err(Error::InvalidParameter(format!(
                "denominator parameter {x} is a nonpositive integer of magnitude < n = {n}"
            )));
        }
    }
    let mut sum = Dd::from_f64(1.0);
    let mut term = Dd::from_f64(1.0);
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        let d_k = d.add(Dd::from_f64(kf));
        let e_k = e.add(Dd::from_f64(kf));
        if (d_k.value() * e_k.value()).abs() < POLE_THRESHOLD {
            return Err(Error::PochhammerZero { term: k + 1 });
        }
        let p_k = p.add(Dd::from_f64(kf));
        let numerator = p_k.mul(p_k).add(lambda_sq).mul_f64(kf - nf);
        let denominator = d_k.mul(e_k).mul_f64(kf + 1.0);
        term = term.mul(numerator).div(denominator);
        sum = sum.add(term);
    }
    Ok(sum.value())
}

/// Terminating ₚ₊₁F_q(−n, a₁..a_p; b₁..b_q | 1) for arbitrary order.
pub fn hyp_pfq_terminating(n: usize, num: &[Complex64], den: &[Complex64]) -> Result<Complex64> {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let nf = n as f64;
    for k in 0..n {
        let kf = k as f64;
        let mut ratio = Complex64::new(kf - nf, 0.0) / (kf + 1.0);
        for &a in num {
            ratio *= a + kf;
        }
        for &b in den {
            let factor = b + kf;
            if factor.norm() < POLE_THRESHOLD {
                return Err(Error::PochhammerZero { term: k + 1 });
            }
            ratio /= factor;
        }
        term *= ratio;
        sum += term;
    }
    Ok(sum)
}

/// Thomae transformation of a terminating ₃F₂ with real denominator data:
///
/// ₃F₂(a, b, c; d, e | 1)
///   = Γ(e)Γ(d+e−a−b−c) / [Γ(e−a)Γ(d+e−b−c)] · ₃F₂(a, d−b, d−c; d, d+e−b−c | 1)
///
/// with a = −j. Returns the transformed parameter set together with the real
/// prefactor. Matched gamma poles in the prefactor (the degenerate instances
/// where d, e are nonpositive integers) cancel in the limit and are handled
/// by [`gamma_ratio`].
pub fn thomae_transform(p: &Hyp3F2Params) -> Result<(Hyp3F2Params, f64)> {
    p.validate()?;
    let j = p.n as f64;
    let bc_sum = p.b + p.c;
    let s = p.d + p.e - bc_sum;
    for (label, z) in [("d", p.d), ("e", p.e), ("d+e-b-c", s)] {
        if z.im.abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "thomae_transform requires real {label}, got {z}"
            )));
        }
    }
    let prefactor = gamma_ratio(&[p.e.re, s.re + j], &[p.e.re + j, s.re])?;
    let transformed = Hyp3F2Params {
        n: p.n,
        b: p.d - p.b,
        c: p.d - p.c,
        d: p.d,
        e: s,
    };
    transformed.validate()?;
    Ok((transformed, prefactor))
}

/// Two-sided check of the finite summation formula
///
/// Σ_{j=0}^{n} (σ)_j/j! ₃F₂(−j, a₁, a₂; b₁, b₂ | 1)
///   = (σ+1)_n/n! ₄F₃(−n, σ, a₁, a₂; σ+1, b₁, b₂ | 1).
///
/// The right side is evaluated with (σ+1)_n/(σ+1)_k merged into a single
/// Pochhammer (σ+1+k)_{n−k}, so integer σ (where the prefactor zero cancels a
/// pole inside the ₄F₃) is handled without special cases. Returns the maximum
/// two-sided deviation; the boolean is true when it stays below `tol` relative
/// to max(1, |lhs|, |rhs|).
pub fn kernel_sum_identity_check(
    sigma: f64,
    n: usize,
    a: [Complex64; 2],
    b: [Complex64; 2],
    tol: f64,
) -> Result<(bool, f64)> {
    // Left side: accumulate the inner terminating sums (the ₃F₂ dispatcher
    // picks the double-double route whenever the parameters allow it).
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut poch = 1.0_f64;
    for j in 0..=n {
        if j > 0 {
            poch *= (sigma + (j as f64 - 1.0)) / j as f64;
        }
        let inner = hyp3f2_terminating(&Hyp3F2Params {
            n: j,
            b: a[0],
            c: a[1],
            d: b[0],
            e: b[1],
        })?;
        lhs += poch * inner;
    }

    // Right side in merged form.
    let nf = n as f64;
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut core = Complex64::new(1.0, 0.0); // (−n)_k (σ)_k (a₁)_k (a₂)_k / [(b₁)_k (b₂)_k k!]
    for k in 0..=n {
        let kf = k as f64;
        if k > 0 {
            let den = b[0] + (kf - 1.0);
            let den2 = b[1] + (kf - 1.0);
            if den.norm() < POLE_THRESHOLD || den2.norm() < POLE_THRESHOLD {
                return Err(Error::PochhammerZero { term: k });
            }
            core *=
                (kf - 1.0 - nf) * (sigma + (kf - 1.0)) * (a[0] + (kf - 1.0)) * (a[1] + (kf - 1.0))
                    / (den * den2 * kf);
        }
        let tail = pochhammer(sigma + 1.0 + kf, n - k);
        rhs += core * tail;
    }
    let mut n_fact = 1.0;
    for j in 2..=n {
        n_fact *= j as f64;
    }
    rhs /= n_fact;

    let dev = (lhs - rhs).norm();
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    Ok((dev <= tol * scale, dev))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pochhammer_base_cases() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(-3.0, 2), 6.0); // (−3)(−2)
        assert_eq!(pochhammer(-3.0, 4), 0.0); // hits the zero factor
    }

    #[test]
    fn pochhammer_shift_identity_exact() {
        // (x)_k (x+k)_m = (x)_{k+m}, exact in integer cases.
        for &(x, k, m) in &[
            (2.0, 3usize, 4usize),
            (-5.0, 2, 2),
            (1.0, 0, 6),
            (-7.0, 3, 1),
        ] {
            let lhs = pochhammer(x, k) * pochhammer(x + k as f64, m);
            let rhs = pochhammer(x, k + m);
            assert_eq!(lhs, rhs, "x={x} k={k} m={m}");
        }
    }

    #[test]
    fn terminating_sum_n0_is_one() {
        let p = Hyp3F2Params::new(0, c(2.0, 1.0), c(2.0, -1.0), c(0.7, 0.0), c(1.3, 0.0)).unwrap();
        assert_eq!(hyp3f2_terminating(&p).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn terminating_sum_two_term_hand_value() {
        // n=1, b=−D+iλ, c=−D−iλ, d=e=γ+1/2−D with γ=0, D=3.5, λ²=−0.25:
        // 1 − (D²+λ²)/(γ+1/2−D)² = 1 − 12/9 = −1/3.
        let lam = 0.5; // λ = i/2, enters as λ² = −0.25 through the real path
        let p = Hyp3F2Params::new(
            1,
            c(-3.5, 0.0) + c(-lam, 0.0), // b = −D − |λ| (real pair, λ pure imaginary)
            c(-3.5, 0.0) + c(lam, 0.0),
            c(-3.0, 0.0),
            c(-3.0, 0.0),
        )
        .unwrap();
        let got = hyp3f2_terminating(&p).unwrap();
        assert!((got.re - (-1.0 / 3.0)).abs() < 1e-14);
        assert!(got.im.abs() < 1e-14);

        let fast = hyp3f2_conjugate_real(1, -3.5, -0.25, -3.0, -3.0).unwrap();
        assert!((fast - (-1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn terminating_sum_vanishing_second_term() {
        // ℰ = 0 makes D² + λ² = 0, so the k = 1 term vanishes and the sum is 1.
        let fast = hyp3f2_conjugate_real(1, -3.5, -(3.5_f64 * 3.5), -3.0, -3.0).unwrap();
        assert_eq!(fast, 1.0);
    }

    #[test]
    fn conjugate_real_matches_complex_path() {
        // Proper conjugate pair above the continuum: λ real.
        for &(n, p, lam, d, e) in &[
            (3usize, -3.5, 1.7, -3.0, -3.0),
            (8, -1.5, 0.3, -0.75, -0.75),
            (6, 0.75, 2.2, 1.25, 1.0),
        ] {
            let full = hyp3f2_terminating(
                &Hyp3F2Params::new(n, c(p, lam), c(p, -lam), c(d, 0.0), c(e, 0.0)).unwrap(),
            )
            .unwrap();
            let fast = hyp3f2_conjugate_real(n, p, lam * lam, d, e).unwrap();
            assert!(
                (full.re - fast).abs() <= 1e-12 * (1.0 + fast.abs()),
                "n={n} p={p} λ={lam}"
            );
        }
    }

    #[test]
    fn denominator_pole_inside_sum_is_rejected() {
        // d = −2 has magnitude 2 < n = 4: invalid parameters.
        assert!(Hyp3F2Params::new(4, c(0.3, 0.0), c(0.9, 0.0), c(-2.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(hyp3f2_conjugate_real(4, 0.3, 0.1, -2.0, 1.0).is_err());
    }

    #[test]
    fn thomae_identity_generic_point() {
        // j = 1, (a,b,c,d,e) = (−1, 0.3, 0.7, 1.2, 1.5): both sides numerically.
        let p = Hyp3F2Params::new(1, c(0.3, 0.0), c(0.7, 0.0), c(1.2, 0.0), c(1.5, 0.0)).unwrap();
        let original = hyp3f2_terminating(&p).unwrap().re;
        let (q, pref) = thomae_transform(&p).unwrap();
        let transformed = pref * hyp3f2_terminating(&q).unwrap().re;
        assert!((original - transformed).abs() < 1e-13 * original.abs().max(1.0));
    }

    #[test]
    fn thomae_degenerate_b_equals_d() {
        // b = d collapses the transformed sum: d−b = 0 puts a zero numerator
        // parameter in every k ≥ 1 term, so the transformed ₃F₂ is 1 and the
        // original sum equals the prefactor.
        let p = Hyp3F2Params::new(2, c(1.2, 0.0), c(0.4, 0.0), c(1.2, 0.0), c(2.0, 0.0)).unwrap();
        let original = hyp3f2_terminating(&p).unwrap().re;
        let (q, pref) = thomae_transform(&p).unwrap();
        let transformed = hyp3f2_terminating(&q).unwrap().re;
        assert!((transformed - 1.0).abs() < 1e-14);
        assert!((original - pref).abs() < 1e-13 * original.abs().max(1.0));
    }

    #[test]
    fn thomae_degenerate_morse_instance() {
        // a=−j, b=−D+iλ, c=−D−iλ, d=e=γ+1/2−D at γ=0, D=3.5, λ=1, j=2.
        // The prefactor is a ratio of two gamma poles with finite limit 1/3.
        let p =
            Hyp3F2Params::new(2, c(-3.5, 1.0), c(-3.5, -1.0), c(-3.0, 0.0), c(-3.0, 0.0)).unwrap();
        let original = hyp3f2_terminating(&p).unwrap().re;
        let (q, pref) = thomae_transform(&p).unwrap();
        assert!((pref - 1.0 / 3.0).abs() < 1e-13);
        let transformed = pref * hyp3f2_terminating(&q).unwrap().re;
        assert!((original - transformed).abs() < 1e-12 * original.abs().max(1.0));
        // Frozen two-sided value: 1 − 2·13.25/9 + (13.25·7.25)/(9·8) = 0.72395833…
        assert!((original - 0.7239583333333333).abs() < 1e-13);
    }

    #[test]
    fn summation_formula_trivial_and_generic() {
        // n = 0: both sides are 1.
        let (ok, dev) = kernel_sum_identity_check(
            0.37,
            0,
            [c(0.2, 0.0), c(0.9, 0.0)],
            [c(1.1, 0.0), c(1.7, 0.0)],
            1e-11,
        )
        .unwrap();
        assert!(ok && dev < 1e-15);

        // σ = 0.5, a = (0.2, 0.9), b = (1.1, 1.7), n = 4.
        let (ok, dev) = kernel_sum_identity_check(
            0.5,
            4,
            [c(0.2, 0.0), c(0.9, 0.0)],
            [c(1.1, 0.0), c(1.7, 0.0)],
            1e-11,
        )
        .unwrap();
        assert!(ok, "deviation {dev}");
    }

    #[test]
    fn summation_formula_morse_instance() {
        // σ = γ+1/2−D = −3 (integer), γ=0, D=3.5, n=3, λ=0.8: the inner sums
        // carry the conjugate pair γ+1/2±iλ over denominators (γ+1/2−D, 2γ+1).
        let lam = 0.8;
        let (ok, dev) = kernel_sum_identity_check(
            -3.0,
            3,
            [c(0.5, lam), c(0.5, -lam)],
            [c(-3.0, 0.0), c(1.0, 0.0)],
            1e-11,
        )
        .unwrap();
        assert!(ok, "deviation {dev}");
    }
}
