//! Arc integrals `c11_k` (free arc) and `c12_k` (fixed arc) of
//! `t^k X⁺(t)` used by the second solution and by the identity checks.
//!
//! Both integrands have inverse square-root endpoint singularities with a
//! `λ ln` oscillation. Two rules are offered: the equal-spaced open sum
//! (endpoints dropped) and a tanh-sinh substitution that makes the
//! singularity harmless. The sums are accumulated for every `k` at once
//! by stepping `e^{ikθ}`.

use std::f64::consts::PI;

use crate::model::{ProblemSpec, QuadratureRule, SolverConfig};
use crate::series::ContinuationParams;
use crate::{Complex64, Harmonics, Result};

/// Half-width of the truncated tanh-sinh variable range.
const DE_HALF_WIDTH: f64 = 4.5;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTable {
    /// `c11_k` for `k ∈ [−N−1, N]`.
    pub c11: Harmonics,
    /// `c12_k` for `k ∈ [−N−1, N]`.
    pub c12: Harmonics,
    pub m1: usize,
    pub m2: usize,
    pub k0: Complex64,
    pub rule: QuadratureRule,
}

impl QuadratureTable {
    pub fn new(spec: &ProblemSpec, config: &SolverConfig) -> Result<Self> {
        spec.validate()?;
        let params = ContinuationParams::for_spec(spec)?;
        let n = config.n;
        Ok(Self {
            c11: c11_table(spec.theta1, spec.theta2, params.lambda, n, config.m1, config.quadrature),
            c12: c12_table(spec.theta1, spec.theta2, params.lambda, n, config.m2, config.quadrature),
            m1: config.m1,
            m2: config.m2,
            k0: k0_constant(spec.theta1, spec.theta2, params.lambda),
            rule: config.quadrature,
        })
    }
}

/// `K0 = −(i/2) exp[λ(θ1−θ2)/2 − i(θ1+θ2)/4]`.
pub fn k0_constant(theta1: f64, theta2: f64, lambda: f64) -> Complex64 {
    let e = Complex64::new(lambda / 2.0 * (theta1 - theta2), -(theta1 + theta2) / 4.0).exp();
    Complex64::new(0.0, -0.5) * e
}

/// A node on `(0, 1)`: its distance from each end and its weight.
#[derive(Debug, Clone, Copy)]
struct Node {
    lo: f64,
    hi: f64,
    weight: f64,
}

fn nodes(rule: QuadratureRule, m: usize) -> Vec<Node> {
    match rule {
        QuadratureRule::OpenSum => {
            let h = 1.0 / (m as f64 + 1.0);
            (1..=m)
                .map(|j| {
                    let lo = j as f64 * h;
                    Node { lo, hi: (m + 1 - j) as f64 * h, weight: h }
                })
                .collect()
        }
        QuadratureRule::DoubleExponential => {
            let h = 2.0 * DE_HALF_WIDTH / (m as f64 + 1.0);
            (1..=m)
                .filter_map(|j| {
                    let t = -DE_HALF_WIDTH + j as f64 * h;
                    let s = PI / 2.0 * t.sinh();
                    let lo = 1.0 / (1.0 + (-2.0 * s).exp());
                    let hi = 1.0 / (1.0 + (2.0 * s).exp());
                    let weight = PI * t.cosh() * lo * hi * h;
                    (lo > 0.0 && hi > 0.0 && weight > 0.0).then_some(Node { lo, hi, weight })
                })
                .collect()
        }
    }
}

/// `Σ_nodes w · e^{i[(k+½)θ + λ ln(b/a)]} / √(ab)` for all `k ∈ [−n−1, n]`,
/// where `θ = start + L·lo`, and `a`, `b` come from `ends(node)`.
fn accumulate(
    start: f64,
    length: f64,
    lambda: f64,
    n: usize,
    nodes: &[Node],
    ends: impl Fn(&Node) -> (f64, f64),
) -> Harmonics {
    let lo_k = -(n as i64) - 1;
    let mut out = Harmonics::zeros(lo_k, n as i64);
    let count = 2 * n + 2;
    let mut sums = vec![Complex64::new(0.0, 0.0); count];
    for node in nodes {
        let theta = start + length * node.lo;
        let (a, b) = ends(node);
        let w = node.weight * length / (a * b).sqrt();
        let phase = (lo_k as f64 + 0.5) * theta + lambda * (b / a).ln();
        let mut z = Complex64::from_polar(w, phase);
        let step = Complex64::cis(theta);
        for s in sums.iter_mut() {
            *s += z;
            z *= step;
        }
    }
    for (i, s) in sums.into_iter().enumerate() {
        out.set(lo_k + i as i64, s);
    }
    out
}

/// `c12_k = −e^{πλ} K0 ∫_{θ1}^{θ2} e^{iη2(θ)} / √(sin((θ−θ1)/2) sin((θ2−θ)/2)) dθ`.
pub fn c12_table(theta1: f64, theta2: f64, lambda: f64, n: usize, m2: usize, rule: QuadratureRule) -> Harmonics {
    let length = theta2 - theta1;
    let nodes = nodes(rule, m2);
    let mut t = accumulate(theta1, length, lambda, n, &nodes, |nd| {
        ((length * nd.lo / 2.0).sin(), (length * nd.hi / 2.0).sin())
    });
    let pre = -(PI * lambda).exp() * k0_constant(theta1, theta2, lambda);
    for k in t.lo()..=t.hi() {
        t.set(k, pre * t.get(k));
    }
    t
}

/// `c11_k = i K0 ∫_{θ2}^{θ1+2π} e^{iη1(θ)} / √(sin((θ−θ1)/2) sin((θ−θ2)/2)) dθ`.
pub fn c11_table(theta1: f64, theta2: f64, lambda: f64, n: usize, m1: usize, rule: QuadratureRule) -> Harmonics {
    let length = theta1 - theta2 + 2.0 * PI;
    let nodes = nodes(rule, m1);
    // near θ1 + 2π, sin((θ−θ1)/2) = sin(π − L·hi/2)
    let mut t = accumulate(theta2, length, lambda, n, &nodes, |nd| {
        ((length * nd.hi / 2.0).sin(), (length * nd.lo / 2.0).sin())
    });
    let pre = Complex64::new(0.0, 1.0) * k0_constant(theta1, theta2, lambda);
    for k in t.lo()..=t.hi() {
        t.set(k, pre * t.get(k));
    }
    t
}

/// Exact values of both tables from the Taylor coefficients, valid on the
/// branch chosen by [`ContinuationParams::for_spec`] when `θ1` is principal:
/// `c12_k = 2πiκ/(1+κ) (β_{k+1} − α_{−1−k})`,
/// `c11_k = 2πi/(1+κ) (κ α_{−1−k} + β_{k+1})`.
pub fn closed_form_tables(alpha: &[Complex64], beta: &[Complex64], kappa: f64, n: usize) -> (Harmonics, Harmonics) {
    let a = |j: i64| if j >= 0 { alpha.get(j as usize).copied().unwrap_or_default() } else { Complex64::new(0.0, 0.0) };
    let b = |j: i64| if j >= 1 { beta.get(j as usize - 1).copied().unwrap_or_default() } else { Complex64::new(0.0, 0.0) };
    let lo = -(n as i64) - 1;
    let mut c11 = Harmonics::zeros(lo, n as i64);
    let mut c12 = Harmonics::zeros(lo, n as i64);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for k in lo..=n as i64 {
        c11.set(k, two_pi_i / (1.0 + kappa) * (kappa * a(-1 - k) + b(k + 1)));
        c12.set(k, two_pi_i * kappa / (1.0 + kappa) * (b(k + 1) - a(-1 - k)));
    }
    (c11, c12)
}

/// Largest `|x_k − y_k|` over the common range.
pub fn max_table_difference(x: &Harmonics, y: &Harmonics) -> f64 {
    (x.lo().min(y.lo())..=x.hi().max(y.hi()))
        .map(|k| (x.get(k) - y.get(k)).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_case_preset, CaseId, PlaneCondition, TractionSpectrum};
    use crate::series::{alpha_from_args, beta_from_args, continuation_params, Branch, TaylorCoefficients};

    fn lambda() -> f64 {
        1.8f64.ln() / (2.0 * PI)
    }

    fn exact(case: CaseId, n: usize) -> (Harmonics, Harmonics) {
        let (spec, _) = build_case_preset(case);
        let p = ContinuationParams::for_spec(&spec).unwrap();
        let tc = TaylorCoefficients::new(&spec, &p, n);
        closed_form_tables(tc.alphas(), tc.betas(), spec.kappa(), n)
    }

    #[test]
    fn k0_examples() {
        let k = k0_constant(-PI / 2.0, PI / 2.0, lambda());
        assert!(k.re.abs() < 1e-15);
        assert!((k.im + 0.431_670_0).abs() < 1e-7);
        let k = k0_constant(0.7, 0.7, lambda());
        let expect = Complex64::new(0.0, -0.5) * Complex64::cis(-0.35);
        assert!((k - expect).norm() < 1e-15);
    }

    #[test]
    fn de_rule_matches_closed_form() {
        for case in [CaseId::A, CaseId::B, CaseId::D] {
            let (spec, mut config) = build_case_preset(case);
            config.n = 20;
            config.m1 = 2000;
            config.m2 = 2000;
            let t = QuadratureTable::new(&spec, &config).unwrap();
            let (e11, e12) = exact(case, 20);
            assert!(max_table_difference(&t.c11, &e11) < 1e-11, "{case:?} c11");
            assert!(max_table_difference(&t.c12, &e12) < 1e-11, "{case:?} c12");
        }
    }

    #[test]
    fn open_sum_is_close_and_converges() {
        let (spec, mut config) = build_case_preset(CaseId::B);
        config.n = 10;
        config.quadrature = QuadratureRule::OpenSum;
        let (e11, e12) = exact(CaseId::B, 10);
        let scale = e12.max_abs();
        let mut errs = Vec::new();
        for m in [2000, 4000, 8000] {
            config.m1 = m;
            config.m2 = m;
            let t = QuadratureTable::new(&spec, &config).unwrap();
            let err = max_table_difference(&t.c12, &e12) / scale;
            assert!(err < 0.05, "open sum error {err}");
            assert!(max_table_difference(&t.c11, &e11) / e11.max_abs() < 0.05);
            errs.push(err);
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    }

    #[test]
    fn principal_args_across_periods_break_alpha_entries() {
        // θ2 past π: the principal arg of t2 drops by 2π, which scales every
        // α_k by −κ while β_k is untouched.
        let (theta1, theta2) = (2.0, 4.0);
        let spec = ProblemSpec {
            nu: 0.3,
            plane_condition: PlaneCondition::PlaneStrain,
            r: 0.3,
            theta1,
            theta2,
            traction: TractionSpectrum::new(),
        };
        let n = 8;
        let p = continuation_params(spec.kappa(), Branch::Principal).unwrap();
        let (a1, a2) = p.args(&spec);
        let al = alpha_from_args(p.gamma, a1, a2, 2 * n);
        let be = beta_from_args(p.gamma, a1, a2, 2 * n);
        let (_, wrong) = closed_form_tables(&al, &be, 1.8, n);
        let quad = c12_table(theta1, theta2, p.lambda, n, 2000, QuadratureRule::DoubleExponential);
        for k in -4..=4 {
            let expect = if k <= -1 { -1.8 } else { 1.0 };
            let ratio = wrong.get(k) / quad.get(k);
            assert!((ratio - Complex64::new(expect, 0.0)).norm() < 1e-9, "k={k} ratio={ratio}");
        }

        let fixed = ContinuationParams::for_spec(&spec).unwrap();
        assert_eq!(fixed.branch, Branch::Shifted);
        let tc = TaylorCoefficients::new(&spec, &fixed, n);
        let (_, right) = closed_form_tables(tc.alphas(), tc.betas(), 1.8, n);
        assert!(max_table_difference(&right, &quad) < 1e-10);
    }

    #[test]
    fn table_ranges() {
        let (spec, mut config) = build_case_preset(CaseId::C);
        config.n = 5;
        config.m1 = 200;
        config.m2 = 200;
        let t = QuadratureTable::new(&spec, &config).unwrap();
        assert_eq!((t.c11.lo(), t.c11.hi()), (-6, 5));
        assert_eq!((t.c12.lo(), t.c12.hi()), (-6, 5));
        assert_eq!(t.rule, QuadratureRule::DoubleExponential);
    }
}
