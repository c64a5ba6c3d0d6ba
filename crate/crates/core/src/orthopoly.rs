//! Orthogonal-polynomial engine for the shifted Morse operator and its
//! supersymmetric partner.
//!
//! The ground truth is the three-term recursion
//! ℰ P_n = b_{n−1} P_{n−1} + a_n P_n + b_n P_{n+1} with P₀ = 1 and
//! P₁ = (ℰ − a₀)/b₀. Both families also have closed forms in the continuous
//! dual Hahn family,
//!
//!   P_n(ℰ)  = (γ+1/2−D)_n / √(n!(2γ+1)_n) ₃F₂(−n, −D+iλ, −D−iλ; γ+1/2−D, γ+1/2−D | 1)
//!   P⁺_n(ℰ) = (γ+3/2−D)_n / √(n!(2γ+1)_n) ₃F₂(−n, 1−D+iλ, 1−D−iλ; γ+3/2−D, γ+3/2−D | 1)
//!
//! with λ² = 2ℰ/α² − D², i.e. one family is the other with the dual Hahn
//! parameter −D replaced by −D+1. The signs here are the recursion-consistent
//! ones: flipping the sign of every b_n maps P_n to (−1)^n P_n and leaves the
//! orthogonality measure unchanged, so alternating-sign prefactors seen in
//! other conventions are absent.
//!
//! The kernel polynomial K_n(ℰ,0) = Σ_{j≤n} P_j(ℰ) P_j(0) reproduces the
//! partner family up to the scalar √(b₀P₁(0)/(b_n P_n(0) P_{n+1}(0))).

use crate::error::{Error, Result};
use crate::morse::{shifted_operator, MorseParams};
use crate::operator::TridiagonalOperator;
use crate::specfun::dd::Dd;
use crate::specfun::hyp3f2_conjugate_dd;
use crate::susy::{partner_operator, FactorCoefficients};

/// Which of the two ways to evaluate a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Forward three-term recursion on the operator data (ground truth).
    Recursion,
    /// Terminating ₃F₂ closed form.
    ClosedForm,
}

/// Which operator the family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Original,
    Partner,
}

/// A polynomial family tied to Morse parameters, evaluable by recursion or
/// by closed form.
#[derive(Debug, Clone)]
pub struct PolyFamily {
    params: MorseParams,
    kind: FamilyKind,
    mode: EvalMode,
}

impl PolyFamily {
    pub fn original(params: MorseParams) -> Self {
        Self {
            params,
            kind: FamilyKind::Original,
            mode: EvalMode::Recursion,
        }
    }

    pub fn partner(params: MorseParams) -> Self {
        Self {
            params,
            kind: FamilyKind::Partner,
            mode: EvalMode::Recursion,
        }
    }

    pub fn with_mode(mut self, mode: EvalMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn params(&self) -> &MorseParams {
        &self.params
    }

    /// The family's source operator.
    pub fn operator(&self) -> TridiagonalOperator {
        match self.kind {
            FamilyKind::Original => shifted_operator(&self.params),
            FamilyKind::Partner => partner_operator(&FactorCoefficients::closed_form(&self.params)),
        }
    }

    /// P₀(ℰ)..P_{n_max}(ℰ) in the configured evaluation mode.
    pub fn eval(&self, energy: f64, n_max: usize) -> Result<Vec<f64>> {
        match self.mode {
            EvalMode::Recursion => eval_recursion(&self.operator(), energy, n_max),
            EvalMode::ClosedForm => (0..=n_max)
                .map(|n| match self.kind {
                    FamilyKind::Original => eval_closed_form(&self.params, energy, n),
                    FamilyKind::Partner => partner_closed_form(&self.params, energy, n),
                })
                .collect(),
        }
    }
}

/// Highest degree at which a family's polynomials exist. `None` means the
/// family never terminates. The original family stops at degree N−1 when a
/// leading N×N block decouples; the partner's off-diagonal b⁺_n vanishes one
/// index earlier, so its family stops at N−2 — except for N = 1, where the
/// partner operator has no vanishing off-diagonal at all.
pub fn family_degree_cap(params: &MorseParams, kind: FamilyKind) -> Option<usize> {
    let block = params.natural_truncation()?;
    match kind {
        FamilyKind::Original => Some(block - 1),
        FamilyKind::Partner => {
            if block >= 2 {
                Some(block - 2)
            } else {
                None
            }
        }
    }
}

/// Forward recursion P₀(ℰ)..P_{n_max}(ℰ) on a tridiagonal operator.
///
/// Fails with `NaturalTruncation` if some b_n vanishes strictly before
/// n_max: the polynomial family is not defined past a decoupled block.
pub fn eval_recursion(op: &TridiagonalOperator, energy: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max == 0 {
        return Ok(values);
    }
    let b0 = op.offdiag(0);
    if b0.abs() < 1e-300 {
        return Err(Error::NaturalTruncation { index: 0 });
    }
    values.push((energy - op.diag(0)) / b0);
    for n in 1..n_max {
        let b = op.offdiag(n);
        if b.abs() < 1e-300 {
            return Err(Error::NaturalTruncation { index: n });
        }
        let next = ((energy - op.diag(n)) * values[n] - op.offdiag(n - 1) * values[n - 1]) / b;
        values.push(next);
    }
    Ok(values)
}

/// Forward recursion carried in double-double arithmetic; same contract as
/// [`eval_recursion`].
///
/// At ℰ = 0 the polynomial solution decays while the companion solution of
/// the recurrence grows, so plain f64 forward recursion loses a digit per
/// few steps there; the factorization quotients P_n(0)/P_{n+1}(0) need the
/// extra headroom to meet their 1e−12 round-trip budget at n ≈ 30.
pub fn eval_recursion_precise(
    op: &TridiagonalOperator,
    energy: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(n_max + 1);
    let mut prev = Dd::from_f64(1.0);
    values.push(1.0);
    if n_max == 0 {
        return Ok(values);
    }
    let b0 = op.offdiag(0);
    if b0.abs() < 1e-300 {
        return Err(Error::NaturalTruncation { index: 0 });
    }
    let mut cur = Dd::from_f64(energy - op.diag(0)).div_f64(b0);
    values.push(cur.value());
    for n in 1..n_max {
        let b = op.offdiag(n);
        if b.abs() < 1e-300 {
            return Err(Error::NaturalTruncation { index: n });
        }
        let next = cur
            .mul_f64(energy - op.diag(n))
            .sub(prev.mul_f64(op.offdiag(n - 1)))
            .div_f64(b);
        values.push(next.value());
        prev = cur;
        cur = next;
    }
    Ok(values)
}

fn dd_sqrt(x: Dd) -> Dd {
    let s = x.hi.sqrt();
    if s == 0.0 {
        return Dd::from_f64(0.0);
    }
    let approx = Dd::from_f64(s);
    approx.add(x.sub(approx.mul(approx)).div_f64(2.0 * s))
}

/// Recurrence coefficients of either family rebuilt from the exact inputs
/// (V₀, α, γ) in double-double.
fn exact_coefficients(params: &MorseParams, kind: FamilyKind) -> impl Fn(usize) -> (Dd, Dd) {
    let half = Dd::from_f64(0.5);
    let alpha = Dd::from_f64(params.alpha);
    let half_alpha_sq = alpha.mul(alpha).div_f64(2.0);
    // D = √(2V₀)/α − 1/2 with a double-double square root.
    let depth = dd_sqrt(Dd::from_f64(2.0 * params.v0)).div(alpha).sub(half);
    let gamma = params.gamma;
    move |n: usize| -> (Dd, Dd) {
        let nf = Dd::from_f64(n as f64);
        let offset = nf.add(Dd::from_f64(gamma)).add(half).sub(depth);
        let up = Dd::from_f64(n as f64 + 1.0);
        let cross_up = up.mul(up.add(Dd::from_f64(2.0 * gamma)));
        match kind {
            FamilyKind::Original => {
                // a_n = (α²/2)[(n+γ+1/2−D)² + n(n+2γ)], b_n from the row above.
                let cross = nf.add(Dd::from_f64(2.0 * gamma)).mul(nf);
                let a = half_alpha_sq.mul(offset.mul(offset).add(cross));
                let b = half_alpha_sq
                    .mul(dd_sqrt(cross_up))
                    .mul(offset)
                    .mul_f64(-1.0);
                (a, b)
            }
            FamilyKind::Partner => {
                // a⁺_n = (α²/2)[(n+1)(n+2γ+1) + (n+γ+1/2−D)²],
                // b⁺_n = −(α²/2)√((n+1)(n+2γ+1)) (n+γ+3/2−D).
                let a = half_alpha_sq.mul(cross_up.add(offset.mul(offset)));
                let b = half_alpha_sq
                    .mul(dd_sqrt(cross_up))
                    .mul(offset.add(Dd::from_f64(1.0)))
                    .mul_f64(-1.0);
                (a, b)
            }
        }
    }
}

/// Forward recursion with both the arithmetic and the recurrence
/// coefficients carried in double-double, i.e. evaluated at the exact
/// parameters (V₀, α, γ) rather than at their f64-rounded images.
///
/// Polynomial values inherit the full sensitivity of the recurrence to its
/// data: f64-rounded coefficients alone contaminate subdominant values like
/// P_31(0) at the 1e−7 level in deep wells, no matter how the recursion
/// itself is summed. The closed forms evaluate at exact parameters by
/// construction, so route comparisons and the factorization quotients
/// d_{n+1}² = −b_n P_n(0)/P_{n+1}(0) use this evaluator.
pub fn eval_recursion_exact(
    params: &MorseParams,
    kind: FamilyKind,
    energy: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    let coeff = exact_coefficients(params, kind);
    let energy = Dd::from_f64(energy);
    let mut values = Vec::with_capacity(n_max + 1);
    let mut dd_values: Vec<Dd> = Vec::with_capacity(n_max + 1);
    dd_values.push(Dd::from_f64(1.0));
    values.push(1.0);
    if n_max == 0 {
        return Ok(values);
    }
    let (a0, b0) = coeff(0);
    if b0.value().abs() < 1e-300 {
        return Err(Error::NaturalTruncation { index: 0 });
    }
    let first = energy.sub(a0).div(b0);
    values.push(first.value());
    dd_values.push(first);
    for n in 1..n_max {
        let (a, b) = coeff(n);
        if b.value().abs() < 1e-300 {
            return Err(Error::NaturalTruncation { index: n });
        }
        let (_, b_prev) = coeff(n - 1);
        let next = energy
            .sub(a)
            .mul(dd_values[n])
            .sub(b_prev.mul(dd_values[n - 1]))
            .div(b);
        values.push(next.value());
        dd_values.push(next);
    }
    Ok(values)
}

/// P_0(0)..P_{n_max}(0) at exact parameters; feeds the factorization route.
pub fn p_at_zero_recursion(params: &MorseParams, n_max: usize) -> Result<Vec<f64>> {
    eval_recursion_exact(params, FamilyKind::Original, 0.0, n_max)
}

/// Recursion evaluation of the partner family on its operator data.
pub fn partner_eval_recursion(
    partner_op: &TridiagonalOperator,
    energy: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    eval_recursion(partner_op, energy, n_max)
}

/// D = √(2V₀)/α − 1/2 refined to double-double from the exact inputs.
fn depth_dd(params: &MorseParams) -> Dd {
    dd_sqrt(Dd::from_f64(2.0 * params.v0))
        .div(Dd::from_f64(params.alpha))
        .sub(Dd::from_f64(0.5))
}

/// λ²(ℰ) = 2ℰ/α² − D² in double-double.
fn lambda_sq_dd(params: &MorseParams, depth: Dd, energy: f64) -> Dd {
    let alpha_sq = Dd::from_f64(params.alpha).mul(Dd::from_f64(params.alpha));
    Dd::from_f64(2.0 * energy)
        .div(alpha_sq)
        .sub(depth.mul(depth))
}

fn pochhammer_dd(base: Dd, k: usize) -> Dd {
    let mut acc = Dd::from_f64(1.0);
    for j in 0..k {
        acc = acc.mul(base.add(Dd::from_f64(j as f64)));
    }
    acc
}

/// Shared closed form for both families: the dual Hahn parameter is
/// a = −D for the original family and a = −D+1 for the partner, with the
/// denominator parameter γ + 1/2 + a in both slots. Everything is carried in
/// double-double from the exact inputs; in deep wells the cancelling sum
/// amplifies even the f64 rounding of its own parameters past the agreement
/// budget.
fn closed_form_family(params: &MorseParams, a_offset: f64, energy: f64, n: usize) -> Result<f64> {
    let depth = depth_dd(params);
    let a = Dd::from_f64(a_offset).sub(depth);
    let denom = Dd::from_f64(params.gamma + 0.5 + a_offset).sub(depth);
    let denom_value = denom.value();
    if denom_value <= 0.0 && denom_value == denom_value.round() && (-denom_value) < n as f64 {
        return Err(Error::InvalidParameter(format!(
            "closed form undefined: {denom_value} is a nonpositive integer of magnitude < n = {n} \
             (evaluation beyond the natural truncation)"
        )));
    }
    let mut n_fact = 1.0;
    for k in 2..=n {
        n_fact *= k as f64;
    }
    let norm = dd_sqrt(pochhammer_dd(Dd::from_f64(2.0 * params.gamma + 1.0), n).mul_f64(n_fact));
    let prefactor = pochhammer_dd(denom, n).div(norm);
    let sum = hyp3f2_conjugate_dd(n, a, lambda_sq_dd(params, depth, energy), denom, denom)?;
    Ok(prefactor.value() * sum)
}

/// Closed-form P_n(ℰ) for the shifted Morse operator.
pub fn eval_closed_form(params: &MorseParams, energy: f64, n: usize) -> Result<f64> {
    closed_form_family(params, 0.0, energy, n)
}

/// Closed-form partner polynomial P⁺_n(ℰ).
pub fn partner_closed_form(params: &MorseParams, energy: f64, n: usize) -> Result<f64> {
    closed_form_family(params, 1.0, energy, n)
}

/// P_n(0) = (γ+1/2−D)_n / √(n!(2γ+1)_n): at zero energy λ² = −D² makes the
/// k = 0 numerator factor of the ₃F₂ vanish, so every later term drops and
/// only the prefactor survives.
pub fn p_at_zero(params: &MorseParams, n: usize) -> Result<f64> {
    let denom = Dd::from_f64(params.gamma + 0.5).sub(depth_dd(params));
    let denom_value = denom.value();
    if denom_value <= 0.0 && denom_value == denom_value.round() && (-denom_value) < n as f64 {
        return Err(Error::InvalidParameter(format!(
            "P_{n}(0) undefined: evaluation beyond the natural truncation"
        )));
    }
    let mut n_fact = 1.0;
    for k in 2..=n {
        n_fact *= k as f64;
    }
    let norm = dd_sqrt(pochhammer_dd(Dd::from_f64(2.0 * params.gamma + 1.0), n).mul_f64(n_fact));
    Ok(pochhammer_dd(denom, n).div(norm).value())
}

/// Kernel polynomial K_n(ℰ, 0) = Σ_{j=0}^{n} P_j(ℰ) P_j(0), with both factors
/// evaluated by recursion.
pub fn kernel_poly(op: &TridiagonalOperator, energy: f64, n: usize) -> Result<f64> {
    let at_energy = eval_recursion(op, energy, n)?;
    let at_zero = eval_recursion(op, 0.0, n)?;
    Ok(at_energy
        .iter()
        .zip(at_zero.iter())
        .map(|(p, q)| p * q)
        .sum())
}

/// The kernel polynomial in its single-sum form,
/// K_n(ℰ,0) = (γ+3/2−D)_n/n! ₃F₂(−n, γ+1/2−iλ, γ+1/2+iλ; γ+3/2−D, 2γ+1 | 1),
/// obtained from the direct sum by a Thomae transformation followed by the
/// finite summation formula.
pub fn kernel_closed_form(params: &MorseParams, energy: f64, n: usize) -> Result<f64> {
    let depth = depth_dd(params);
    let denom = Dd::from_f64(params.gamma + 1.5).sub(depth);
    let denom_value = denom.value();
    if denom_value <= 0.0 && denom_value == denom_value.round() && (-denom_value) < n as f64 {
        return Err(Error::InvalidParameter(format!(
            "kernel closed form undefined at n = {n}: beyond the partner truncation"
        )));
    }
    let mut n_fact = 1.0;
    for k in 2..=n {
        n_fact *= k as f64;
    }
    let sum = hyp3f2_conjugate_dd(
        n,
        Dd::from_f64(params.gamma + 0.5),
        lambda_sq_dd(params, depth, energy),
        denom,
        Dd::from_f64(2.0 * params.gamma + 1.0),
    )?;
    Ok(pochhammer_dd(denom, n).div_f64(n_fact).value() * sum)
}

/// Deviation of the Christoffel–Darboux identity
/// ℰ K_n(ℰ,0) = b_n [P_{n+1}(ℰ) P_n(0) − P_n(ℰ) P_{n+1}(0)],
/// relative to max(1, |lhs|, |rhs|). An independent link between the kernel
/// and the recursion, usable as a third oracle.
pub fn christoffel_darboux_deviation(
    op: &TridiagonalOperator,
    energy: f64,
    n: usize,
) -> Result<f64> {
    let at_energy = eval_recursion(op, energy, n + 1)?;
    let at_zero = eval_recursion(op, 0.0, n + 1)?;
    let kernel: f64 = at_energy[..=n]
        .iter()
        .zip(at_zero[..=n].iter())
        .map(|(p, q)| p * q)
        .sum();
    let lhs = energy * kernel;
    let rhs = op.offdiag(n) * (at_energy[n + 1] * at_zero[n] - at_energy[n] * at_zero[n + 1]);
    Ok((lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0))
}

#[derive(Debug, Clone, Copy)]
pub struct KernelRelationRow {
    pub n: usize,
    /// Least-squares proportionality constant P⁺_n = ρ_n K_n(·, 0).
    pub rho: f64,
    /// |ρ_n| predicted by √|b₀P₁(0)/(b_n P_n(0) P_{n+1}(0))|.
    pub rho_expected_abs: f64,
    /// max |P⁺_n − ρ_n K_n| over the grid, relative to max |P⁺_n|.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct KernelRelationReport {
    pub rows: Vec<KernelRelationRow>,
    pub max_residual: f64,
    pub max_rho_deviation: f64,
}

/// A default fit grid: points below the continuum edge (the discrete range)
/// and above it, at least a dozen in total.
pub fn default_energy_grid(params: &MorseParams) -> Vec<f64> {
    let edge = params.continuum_edge();
    let width = params.alpha * params.alpha * (params.depth + 1.0);
    let mut grid = Vec::with_capacity(16);
    for i in 0..8 {
        grid.push(edge * (i as f64 + 0.5) / 8.0);
    }
    for i in 0..8 {
        grid.push(edge + width * (i as f64 + 0.5) / 4.0);
    }
    grid
}

/// Fits P⁺_n(ℰ) = ρ_n K_n(ℰ, 0) by least squares over the grid for each
/// n ≤ n_max and checks exact proportionality (residual ≤ 1e−9) and the
/// predicted magnitude |ρ_n| (to 1e−10). Grid points where K_n nearly
/// vanishes are excluded from the fit; at least 12 must survive.
pub fn kernel_relation_check(
    params: &MorseParams,
    n_max: usize,
    grid: &[f64],
) -> Result<KernelRelationReport> {
    let op = shifted_operator(params);
    let p0 = p_at_zero_recursion(params, n_max + 1)?;

    let mut rows = Vec::with_capacity(n_max + 1);
    let mut max_residual = 0.0_f64;
    let mut max_rho_deviation = 0.0_f64;
    for n in 0..=n_max {
        let mut kernel_vals = Vec::with_capacity(grid.len());
        let mut partner_vals = Vec::with_capacity(grid.len());
        for &energy in grid {
            let at_energy = eval_recursion_exact(params, FamilyKind::Original, energy, n)?;
            let kernel = at_energy
                .iter()
                .zip(p0.iter())
                .map(|(p, q)| p * q)
                .sum::<f64>();
            kernel_vals.push(kernel);
            partner_vals.push(eval_recursion_exact(params, FamilyKind::Partner, energy, n)?[n]);
        }
        let kernel_scale = kernel_vals.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let keep: Vec<usize> = (0..grid.len())
            .filter(|&i| kernel_vals[i].abs() > 1e-8 * kernel_scale)
            .collect();
        if keep.len() < 12 {
            return Err(Error::Proportionality {
                n,
                detail: format!(
                    "only {} usable grid points after excluding kernel zeros",
                    keep.len()
                ),
            });
        }

        let num: f64 = keep.iter().map(|&i| kernel_vals[i] * partner_vals[i]).sum();
        let den: f64 = keep.iter().map(|&i| kernel_vals[i] * kernel_vals[i]).sum();
        let rho = num / den;
        let partner_scale = keep
            .iter()
            .fold(0.0_f64, |m, &i| m.max(partner_vals[i].abs()))
            .max(1e-300);
        let residual = keep.iter().fold(0.0_f64, |m, &i| {
            m.max((partner_vals[i] - rho * kernel_vals[i]).abs())
        }) / partner_scale;

        let b0 = op.offdiag(0);
        let bn = op.offdiag(n);
        let rho_expected_abs = (b0 * p0[1] / (bn * p0[n] * p0[n + 1])).abs().sqrt();
        let rho_deviation = (rho.abs() - rho_expected_abs).abs() / rho_expected_abs.abs().max(1.0);

        if residual > 1e-9 {
            return Err(Error::Proportionality {
                n,
                detail: format!("fit residual {residual}"),
            });
        }
        if rho_deviation > 1e-10 {
            return Err(Error::Proportionality {
                n,
                detail: format!(
                    "|rho| = {} does not match the predicted {rho_expected_abs}",
                    rho.abs()
                ),
            });
        }
        max_residual = max_residual.max(residual);
        max_rho_deviation = max_rho_deviation.max(rho_deviation);
        rows.push(KernelRelationRow {
            n,
            rho,
            rho_expected_abs,
            residual,
        });
    }
    Ok(KernelRelationReport {
        rows,
        max_residual,
        max_rho_deviation,
    })
}
