//! Taylor coefficients of the Plemelj factor `X(z) = (z − t1)^{−γ}(z − t2)^{γ−1}`.
//!
//! Inside the unit circle `X(z) = Σ_{k≥0} α_k z^k`, outside it
//! `X(z) = Σ_{k≥1} β_k z^{−k}`. `X` itself is never evaluated pointwise.

use std::f64::consts::PI;

use crate::model::ProblemSpec;
use crate::{Complex64, Error, Result};

/// Which period of `arg` is used for the fractional powers of `t1`, `t2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Both arguments reduced to `[−π, π)`.
    Principal,
    /// `arg t1` principal, `arg t2` taken one period above its principal value.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationParams {
    pub kappa: f64,
    /// `γ = 1/2 + iλ`.
    pub gamma: Complex64,
    /// `λ = ln κ / 2π`.
    pub lambda: f64,
    pub branch: Branch,
}

/// Index `n` of the period `[−π + 2nπ, π + 2nπ)` containing `theta`.
pub fn period_index(theta: f64) -> i64 {
    ((theta + PI) / (2.0 * PI)).floor() as i64
}

/// `theta` reduced to `[−π, π)`.
pub fn principal_arg(theta: f64) -> f64 {
    let reduced = theta - 2.0 * PI * period_index(theta) as f64;
    // rounding can land exactly on π
    if reduced >= PI {
        reduced - 2.0 * PI
    } else {
        reduced
    }
}

pub fn continuation_params(kappa: f64, branch: Branch) -> Result<ContinuationParams> {
    if !(kappa > 1.0) || !kappa.is_finite() {
        return Err(Error::DegenerateKappa(kappa));
    }
    let lambda = kappa.ln() / (2.0 * PI);
    Ok(ContinuationParams {
        kappa,
        gamma: Complex64::new(0.5, lambda),
        lambda,
        branch,
    })
}

impl ContinuationParams {
    /// Parameters whose branch keeps the `α` and `β` expansions consistent,
    /// i.e. `arg t2 − arg t1 = θ2 − θ1`.
    pub fn for_spec(spec: &ProblemSpec) -> Result<Self> {
        let branch = if period_index(spec.theta1) == period_index(spec.theta2) {
            Branch::Principal
        } else {
            Branch::Shifted
        };
        continuation_params(spec.kappa(), branch)
    }

    /// Arguments of `t1` and `t2` used in the fractional powers.
    pub fn args(&self, spec: &ProblemSpec) -> (f64, f64) {
        let a1 = principal_arg(spec.theta1);
        let a2 = principal_arg(spec.theta2);
        match self.branch {
            Branch::Principal => (a1, a2),
            Branch::Shifted => (a1, a2 + 2.0 * PI),
        }
    }
}

/// `(h(−γ, k), h(γ−1, k))`, the `k`-factor falling products
/// `−γ(−γ−1)⋯(−γ−k+1)` and `(γ−1)(γ−2)⋯(γ−k)`.
pub fn falling_products(gamma: Complex64, k: i64) -> Result<(Complex64, Complex64)> {
    if k <= 0 {
        return Err(Error::InvalidConfig(format!("falling product needs k >= 1, got {k}")));
    }
    let mut h1 = Complex64::new(1.0, 0.0);
    let mut h2 = Complex64::new(1.0, 0.0);
    for j in 0..k {
        h1 *= -gamma - j as f64;
        h2 *= gamma - 1.0 - j as f64;
    }
    Ok((h1, h2))
}

/// `h(−γ, l)/l!` and `h(γ−1, l)/l!` for `l = 0..=upto`, by the ratio
/// recursion (no factorials).
fn scaled_falling_products(gamma: Complex64, upto: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut a = Vec::with_capacity(upto + 1);
    let mut b = Vec::with_capacity(upto + 1);
    a.push(Complex64::new(1.0, 0.0));
    b.push(Complex64::new(1.0, 0.0));
    for l in 1..=upto {
        let lf = l as f64;
        a.push(a[l - 1] * (-gamma - (lf - 1.0)) / lf);
        b.push(b[l - 1] * (gamma - lf) / lf);
    }
    (a, b)
}

/// `e^{i·exponent·arg}`, the power of a unit-modulus number on an explicit branch.
fn unit_power(exponent: Complex64, arg: f64) -> Complex64 {
    (exponent * Complex64::new(0.0, arg)).exp()
}

/// `α_0..=α_upto` with `t1 = e^{i·arg1}`, `t2 = e^{i·arg2}`.
pub fn alpha_from_args(gamma: Complex64, arg1: f64, arg2: f64, upto: usize) -> Vec<Complex64> {
    let prefactor = -unit_power(-gamma, arg1) * unit_power(gamma - 1.0, arg2);
    let (h1, h2) = scaled_falling_products(gamma, upto);
    let u1: Vec<Complex64> = (0..=upto).map(|l| Complex64::cis(-(l as f64) * arg1)).collect();
    let u2: Vec<Complex64> = (0..=upto).map(|l| Complex64::cis(-(l as f64) * arg2)).collect();
    (0..=upto)
        .map(|k| {
            let conv: Complex64 = (0..=k).map(|l| h1[l] * u1[l] * h2[k - l] * u2[k - l]).sum();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            prefactor * conv * sign
        })
        .collect()
}

/// `β_1..=β_upto` (index 0 of the result is `β_1`). Only integer powers of
/// `t1`, `t2` appear, so the branch is irrelevant.
pub fn beta_from_args(gamma: Complex64, arg1: f64, arg2: f64, upto: usize) -> Vec<Complex64> {
    if upto == 0 {
        return Vec::new();
    }
    let (h1, h2) = scaled_falling_products(gamma, upto - 1);
    let u1: Vec<Complex64> = (0..upto).map(|l| Complex64::cis(l as f64 * arg1)).collect();
    let u2: Vec<Complex64> = (0..upto).map(|l| Complex64::cis(l as f64 * arg2)).collect();
    (1..=upto)
        .map(|k| {
            let m = k - 1;
            let conv: Complex64 = (0..=m).map(|l| h1[l] * u1[l] * h2[m - l] * u2[m - l]).sum();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            conv * sign
        })
        .collect()
}

pub fn alpha_coeffs(spec: &ProblemSpec, params: &ContinuationParams, upto: usize) -> Vec<Complex64> {
    let (a1, a2) = params.args(spec);
    alpha_from_args(params.gamma, a1, a2, upto)
}

pub fn beta_coeffs(spec: &ProblemSpec, params: &ContinuationParams, upto: usize) -> Vec<Complex64> {
    let (a1, a2) = params.args(spec);
    beta_from_args(params.gamma, a1, a2, upto)
}

/// `α_0..α_{2N}` and `β_1..β_{2N}` for truncation order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorCoefficients {
    pub n: usize,
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
}

impl TaylorCoefficients {
    pub fn new(spec: &ProblemSpec, params: &ContinuationParams, n: usize) -> Self {
        Self {
            n,
            alpha: alpha_coeffs(spec, params, 2 * n),
            beta: beta_coeffs(spec, params, 2 * n),
        }
    }

    /// `α_k`, zero outside `0..=2N`.
    pub fn alpha(&self, k: i64) -> Complex64 {
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.alpha.get(k as usize).copied().unwrap_or_default()
    }

    /// `β_k`, zero outside `1..=2N`.
    pub fn beta(&self, k: i64) -> Complex64 {
        if k < 1 {
            return Complex64::new(0.0, 0.0);
        }
        self.beta.get(k as usize - 1).copied().unwrap_or_default()
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alpha
    }

    /// `β_1..β_{2N}`.
    pub fn betas(&self) -> &[Complex64] {
        &self.beta
    }
}
