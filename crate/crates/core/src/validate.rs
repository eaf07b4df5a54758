//! Post-solve checks: constraint identities, coefficient identities against
//! the arc integrals, boundary residuals and cross-solution agreement.
//!
//! Everything here reads solver output and never feeds back into a solve.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::fields::{self, free_arc_samples, fixed_arc_samples, linspace, RigidBody, SeriesSolution};
use crate::model::{traction_eval, ProblemSpec};
use crate::quadrature::QuadratureTable;
use crate::series::{ContinuationParams, TaylorCoefficients};
use crate::{Complex64, Harmonics};

/// Components smaller than this fraction of their modulus are symmetry zeros.
const SYMMETRY_ZERO: f64 = 1e-9;

/// `|κA_{−1} + B_{−1}| / (1 + |A_{−1}|)`.
pub fn check_single_valuedness(sol: &SeriesSolution) -> f64 {
    let a = sol.a.get(-1);
    (sol.kappa * a + sol.b.get(-1)).norm() / (1.0 + a.norm())
}

/// `|(A_{−1} − B_{−1})/r − (p_{−1} + i q_{−1})|`.
pub fn check_resultant(sol: &SeriesSolution, spec: &ProblemSpec) -> f64 {
    ((sol.a.get(-1) - sol.b.get(-1)) / spec.r - spec.traction.get(-1)).norm()
}

/// Largest deviation of `A_{−1}`, `B_{−1}` from `±(p_{−1}+iq_{−1}) r` scaled by
/// `1/(1+κ)` and `κ/(1+κ)`.
pub fn check_closed_form(sol: &SeriesSolution, spec: &ProblemSpec) -> f64 {
    let kappa = spec.kappa();
    let base = spec.traction.get(-1) * spec.r / (1.0 + kappa);
    let ea = (sol.a.get(-1) - base).norm();
    let eb = (sol.b.get(-1) + kappa * base).norm();
    ea.max(eb)
}

/// Worst residual of the inner-boundary harmonic equations
/// `A_k r^k + (k+1) conj(A_{−k})(1−r^{−2}) r^{−k} − B_k r^{−k−2} = p_k + i q_k`
/// over the rows the iteration enforces, `k ∈ [−N, N−1]`, `k ≠ −1`.
pub fn truncated_row_residual(sol: &SeriesSolution, spec: &ProblemSpec) -> f64 {
    let r = spec.r;
    let s = 1.0 - r.powi(-2);
    let n = sol.n as i64;
    (-n..n)
        .filter(|&k| k != -1)
        .map(|k| {
            let rk = r.powi(k as i32);
            let lhs = sol.a.get(k) * rk + (k + 1) as f64 * sol.a.get(-k).conj() * s / rk - sol.b.get(k) / (rk * r * r);
            (lhs - spec.traction.get(k)).norm()
        })
        .fold(0.0, f64::max)
}

/// One ratio per `l`; `None` where the entry is a symmetry zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SRatios {
    /// `Re[2πiκ/(1+κ) α_l] / Re[c12_{−1−l}]`, `l = 0..=l_max`.
    pub s1: Vec<Option<f64>>,
    /// Imaginary parts of the same.
    pub s2: Vec<Option<f64>>,
    /// `Re[2πiκ/(1+κ) β_l] / Re[c12_{l−1}]`, `l = 1..=l_max`.
    pub s3: Vec<Option<f64>>,
    pub s4: Vec<Option<f64>>,
    pub skipped: usize,
}

impl SRatios {
    /// Largest `|S1+1|`, `|S2+1|`, `|S3−1|`, `|S4−1|` over the defined entries.
    pub fn max_deviation(&self) -> f64 {
        let dev = |v: &[Option<f64>], target: f64| v.iter().flatten().map(|x| (x - target).abs()).fold(0.0, f64::max);
        dev(&self.s1, -1.0)
            .max(dev(&self.s2, -1.0))
            .max(dev(&self.s3, 1.0))
            .max(dev(&self.s4, 1.0))
    }

    pub fn defined(&self) -> usize {
        [&self.s1, &self.s2, &self.s3, &self.s4]
            .iter()
            .map(|v| v.iter().flatten().count())
            .sum()
    }
}

fn ratio(num: f64, modulus: f64, den: f64, skipped: &mut usize) -> Option<f64> {
    if num.abs() < SYMMETRY_ZERO * modulus || den.abs() < SYMMETRY_ZERO {
        *skipped += 1;
        None
    } else {
        Some(num / den)
    }
}

/// Ratios of the Taylor coefficients to the fixed-arc integrals, expected to
/// be `−1` (S1, S2) and `+1` (S3, S4).
pub fn check_c12_identity(kappa: f64, alpha: &[Complex64], beta: &[Complex64], c12: &Harmonics, l_max: usize) -> SRatios {
    let fac = Complex64::new(0.0, 2.0 * PI * kappa / (1.0 + kappa));
    let mut out = SRatios::default();
    for l in 0..=l_max {
        let num = fac * alpha.get(l).copied().unwrap_or_default();
        let den = c12.get(-1 - l as i64);
        out.s1.push(ratio(num.re, num.norm(), den.re, &mut out.skipped));
        out.s2.push(ratio(num.im, num.norm(), den.im, &mut out.skipped));
    }
    for l in 1..=l_max {
        let num = fac * beta.get(l - 1).copied().unwrap_or_default();
        let den = c12.get(l as i64 - 1);
        out.s3.push(ratio(num.re, num.norm(), den.re, &mut out.skipped));
        out.s4.push(ratio(num.im, num.norm(), den.im, &mut out.skipped));
    }
    out
}

/// `max_k |d1_k − d2_k| / max_k |d1_k|`, zero when both vanish.
pub fn compare_solutions(first: &SeriesSolution, second: &SeriesSolution) -> f64 {
    let scale = first.d.max_abs();
    let lo = first.d.lo().min(second.d.lo());
    let hi = first.d.hi().max(second.d.hi());
    let diff = (lo..=hi)
        .map(|k| (first.d.get(k) - second.d.get(k)).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// `Σ_k c11_k d_k`.
pub fn check_c11_closure(sol: &SeriesSolution, c11: &Harmonics) -> Complex64 {
    sol.d.iter().map(|(k, d)| c11.get(k) * d).sum()
}

/// [`check_c11_closure`] divided by the largest single term.
pub fn c11_closure_relative(sol: &SeriesSolution, c11: &Harmonics) -> f64 {
    let dominant = sol.d.iter().map(|(k, d)| (c11.get(k) * d).norm()).fold(0.0, f64::max);
    let total = check_c11_closure(sol, c11).norm();
    if dominant == 0.0 {
        total
    } else {
        total / dominant
    }
}

/// `|Σ c12_k d_k + 2πiκ/(1+κ)(p_{−1}+iq_{−1}) r|` divided by the largest
/// single term.
pub fn check_c12_resultant(sol: &SeriesSolution, c12: &Harmonics, spec: &ProblemSpec) -> f64 {
    let kappa = spec.kappa();
    let target = -Complex64::new(0.0, 2.0 * PI * kappa / (1.0 + kappa)) * spec.traction.get(-1) * spec.r;
    let sum: Complex64 = sol.d.iter().map(|(k, d)| c12.get(k) * d).sum();
    let dominant = sol.d.iter().map(|(k, d)| (c12.get(k) * d).norm()).fold(0.0, f64::max);
    let err = (sum - target).norm();
    if dominant == 0.0 {
        err
    } else {
        err / dominant
    }
}

/// Relative boundary-condition errors of a solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryResiduals {
    /// `max |(Σ_ρ + iΣ_ρθ)(r, θ) − f(θ)| / max |f|`.
    pub inner_traction: f64,
    /// `max |(Σ_ρ + iΣ_ρθ)(1, θ)| / max |f|` on the free arc.
    pub free_arc_traction: f64,
    /// `max |U + iV|` on the fixed arc over the largest boundary displacement.
    pub fixed_arc_displacement: f64,
}

pub const BOUNDARY_SAMPLES: usize = 720;

fn relative(value: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        value
    } else {
        value / scale
    }
}

pub fn boundary_residuals(sol: &SeriesSolution, spec: &ProblemSpec, rigid: RigidBody) -> crate::Result<BoundaryResiduals> {
    let thetas = linspace(-PI, PI, BOUNDARY_SAMPLES + 1);
    let thetas = &thetas[..BOUNDARY_SAMPLES];
    let fmax = thetas
        .iter()
        .map(|&t| traction_eval(&spec.traction, t).norm())
        .fold(0.0, f64::max);

    let mut inner = 0.0f64;
    for &t in thetas {
        let (_, sr, srt) = fields::stress_at(sol, spec.r, t)?;
        inner = inner.max((Complex64::new(sr, srt) - traction_eval(&spec.traction, t)).norm());
    }

    let mut free = 0.0f64;
    for t in free_arc_samples(spec, BOUNDARY_SAMPLES) {
        let (_, sr, srt) = fields::stress_at(sol, 1.0, t)?;
        free = free.max(Complex64::new(sr, srt).norm());
    }

    let mut umax = 0.0f64;
    for &t in thetas {
        for rho in [spec.r, 1.0] {
            let (u, v) = fields::displacement_at(sol, rigid, rho, t)?;
            umax = umax.max(u.hypot(v));
        }
    }
    let mut fixed = 0.0f64;
    for t in fixed_arc_samples(spec, BOUNDARY_SAMPLES / 2)? {
        let (u, v) = fields::displacement_at(sol, rigid, 1.0, t)?;
        fixed = fixed.max(u.hypot(v));
    }

    Ok(BoundaryResiduals {
        inner_traction: relative(inner, fmax),
        free_arc_traction: relative(free, fmax),
        fixed_arc_displacement: relative(fixed, umax),
    })
}

pub const GRID_SIZE: usize = 24;

/// Largest pointwise difference between two solutions' stress and
/// displacement fields on a `24×24` polar grid, each relative to the
/// first solution's largest value of that kind.
pub fn compare_fields(
    first: &SeriesSolution,
    rigid_first: RigidBody,
    second: &SeriesSolution,
    rigid_second: RigidBody,
) -> crate::Result<f64> {
    let radii = linspace(first.spec.r, 1.0, GRID_SIZE);
    // half-step offset keeps the grid off t1, t2 at ρ = 1
    let step = 2.0 * PI / GRID_SIZE as f64;
    let (mut ds, mut dd, mut ms, mut md) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &rho in &radii {
        for j in 0..GRID_SIZE {
            let theta = -PI + (j as f64 + 0.5) * step;
            let a = fields::sample(first, rigid_first, rho, theta, false)?;
            let b = fields::sample(second, rigid_second, rho, theta, false)?;
            for (x, y) in [
                (a.sigma_theta, b.sigma_theta),
                (a.sigma_rho, b.sigma_rho),
                (a.sigma_rhotheta, b.sigma_rhotheta),
            ] {
                ds = ds.max((x - y).abs());
                ms = ms.max(x.abs());
            }
            for (x, y) in [(a.u, b.u), (a.v, b.v)] {
                dd = dd.max((x - y).abs());
                md = md.max(x.abs());
            }
        }
    }
    Ok(relative(ds, ms).max(relative(dd, md)))
}

/// Every check for one solution, plus cross-solution figures when both ran.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub single_valuedness_residual: f64,
    pub resultant_residual: f64,
    pub closed_form_error: f64,
    pub truncated_row_residual: f64,
    pub s_ratios: SRatios,
    pub c11_closure: Complex64,
    pub c11_closure_relative: f64,
    pub c12_resultant_error: f64,
    pub cross_solution_max_diff: Option<f64>,
    pub cross_solution_field_diff: Option<f64>,
    pub boundary: BoundaryResiduals,
}

impl ValidationReport {
    pub fn render(&self, title: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[{title}]");
        let _ = writeln!(s, "single_valuedness = {:e}", self.single_valuedness_residual);
        let _ = writeln!(s, "resultant = {:e}", self.resultant_residual);
        let _ = writeln!(s, "closed_form = {:e}", self.closed_form_error);
        let _ = writeln!(s, "row_residual = {:e}", self.truncated_row_residual);
        let _ = writeln!(
            s,
            "s_ratio_max_deviation = {:e} (defined {}, skipped {})",
            self.s_ratios.max_deviation(),
            self.s_ratios.defined(),
            self.s_ratios.skipped
        );
        let _ = writeln!(
            s,
            "c11_closure = {:e}{:+e}i (relative {:e})",
            self.c11_closure.re, self.c11_closure.im, self.c11_closure_relative
        );
        let _ = writeln!(s, "c12_resultant = {:e}", self.c12_resultant_error);
        if let Some(d) = self.cross_solution_max_diff {
            let _ = writeln!(s, "cross_solution_d = {d:e}");
        }
        if let Some(d) = self.cross_solution_field_diff {
            let _ = writeln!(s, "cross_solution_fields = {d:e}");
        }
        let b = &self.boundary;
        let _ = writeln!(s, "inner_traction = {:e}", b.inner_traction);
        let _ = writeln!(s, "free_arc_traction = {:e}", b.free_arc_traction);
        let _ = writeln!(s, "fixed_arc_displacement = {:e}", b.fixed_arc_displacement);
        s
    }
}

/// Runs every single-solution check. `c12_fine` is the fixed-arc table used
/// for the S-ratios, normally built with a multiple of `M2`.
pub fn assess(
    sol: &SeriesSolution,
    spec: &ProblemSpec,
    table: &QuadratureTable,
    c12_fine: &Harmonics,
    rigid: RigidBody,
) -> crate::Result<ValidationReport> {
    let params = ContinuationParams::for_spec(spec)?;
    let taylor = TaylorCoefficients::new(spec, &params, sol.n);
    Ok(ValidationReport {
        single_valuedness_residual: check_single_valuedness(sol),
        resultant_residual: check_resultant(sol, spec),
        closed_form_error: check_closed_form(sol, spec),
        truncated_row_residual: truncated_row_residual(sol, spec),
        s_ratios: check_c12_identity(spec.kappa(), taylor.alphas(), taylor.betas(), c12_fine, S_RATIO_RANGE),
        c11_closure: check_c11_closure(sol, &table.c11),
        c11_closure_relative: c11_closure_relative(sol, &table.c11),
        c12_resultant_error: check_c12_resultant(sol, &table.c12, spec),
        cross_solution_max_diff: None,
        cross_solution_field_diff: None,
        boundary: boundary_residuals(sol, spec, rigid)?,
    })
}

/// Largest `l` in the S-ratio tables.
pub const S_RATIO_RANGE: usize = 20;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_case_preset, CaseId, TractionSpectrum};

    fn zero_solution(case: CaseId) -> (ProblemSpec, SeriesSolution) {
        let (mut spec, _) = build_case_preset(case);
        spec.traction = TractionSpectrum::new();
        let p = ContinuationParams::for_spec(&spec).unwrap();
        let tc = TaylorCoefficients::new(&spec, &p, 10);
        let sol = SeriesSolution::new(&spec, &tc, Harmonics::centered(10));
        (spec, sol)
    }

    #[test]
    fn zero_solution_checks_vanish() {
        let (spec, sol) = zero_solution(CaseId::A);
        assert_eq!(check_single_valuedness(&sol), 0.0);
        assert_eq!(check_resultant(&sol, &spec), 0.0);
        assert_eq!(check_closed_form(&sol, &spec), 0.0);
        assert_eq!(compare_solutions(&sol, &sol), 0.0);
        assert_eq!(truncated_row_residual(&sol, &spec), 0.0);
    }

    #[test]
    fn corrupted_b_shows_in_single_valuedness() {
        let (_, mut sol) = zero_solution(CaseId::B);
        sol.a.set(-1, Complex64::new(0.5, 0.0));
        sol.b.set(-1, Complex64::new(-0.9, 0.0));
        assert!(check_single_valuedness(&sol) < 1e-15);
        sol.b.add(-1, Complex64::new(0.1, 0.0));
        assert!((check_single_valuedness(&sol) - 0.1 / 1.5).abs() < 1e-12);
    }

    #[test]
    fn exact_tables_give_unit_ratios() {
        let (spec, _) = build_case_preset(CaseId::B);
        let p = ContinuationParams::for_spec(&spec).unwrap();
        let tc = TaylorCoefficients::new(&spec, &p, 30);
        let (_, c12) = crate::quadrature::closed_form_tables(tc.alphas(), tc.betas(), spec.kappa(), 30);
        let s = check_c12_identity(spec.kappa(), tc.alphas(), tc.betas(), &c12, 20);
        assert_eq!(s.s1.len(), 21);
        assert_eq!(s.s3.len(), 20);
        assert!(s.max_deviation() < 1e-12);
        assert!(s.skipped > 0, "case B has symmetry zeros");
        assert_eq!(s.s3[0], None, "β_1 = 1 has no real part after the 2πi factor");
    }
}
