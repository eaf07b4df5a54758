//! Filtered series for normalized stresses and displacements.
//!
//! `φ′(z) = Σ F(k) A_k z^k` and `ψ′` enters through `B_k`. Outputs are raw
//! (`σ/G`, `u/r_o`); [`sample`] applies the optional sign flip.

use std::f64::consts::PI;

use crate::model::ProblemSpec;
use crate::series::TaylorCoefficients;
use crate::{Complex64, Error, Harmonics, Result};

/// Width of the arcs around `t1`, `t2` left out of fixed-arc averages and
/// boundary residuals.
pub const END_ZONE: f64 = 5.0 * PI / 180.0;

/// Converged coefficients `d_k` and their convolutions `A_k`, `B_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub d: Harmonics,
    pub a: Harmonics,
    pub b: Harmonics,
    pub n: usize,
    pub spec: ProblemSpec,
    pub kappa: f64,
}

impl SeriesSolution {
    pub fn new(spec: &ProblemSpec, taylor: &TaylorCoefficients, d: Harmonics) -> Self {
        let n = taylor.n;
        let (a, b) = assemble_ab(&d, taylor);
        Self {
            d,
            a,
            b,
            n,
            spec: spec.clone(),
            kappa: spec.kappa(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub rho: f64,
    pub theta: f64,
    pub sigma_theta: f64,
    pub sigma_rho: f64,
    pub sigma_rhotheta: f64,
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RigidBody {
    pub dx: f64,
    pub dy: f64,
}

impl RigidBody {
    fn as_complex(self) -> Complex64 {
        Complex64::new(self.dx, self.dy)
    }
}

/// Lanczos sigma factor `sin(|k|π/N)/(|k|π/N)`, `F(0) = 1`.
pub fn lanczos_filter(k: i64, n: usize) -> Result<f64> {
    if k.unsigned_abs() > n as u64 {
        return Err(Error::InvalidConfig(format!("filter index |{k}| exceeds N = {n}")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let x = k.unsigned_abs() as f64 * PI / n as f64;
    Ok(x.sin() / x)
}

fn filter(n: usize) -> impl Fn(i64) -> f64 {
    move |k| lanczos_filter(k, n).unwrap_or(0.0)
}

/// `A_k = Σ_{l=0}^{N+k} α_l d_{k−l}`, `B_k = Σ_{l=1}^{N−k} β_l d_{k+l}` for `|k| ≤ N`.
pub fn assemble_ab(d: &Harmonics, taylor: &TaylorCoefficients) -> (Harmonics, Harmonics) {
    let n = taylor.n as i64;
    let mut a = Harmonics::zeros(-n, n);
    let mut b = Harmonics::zeros(-n, n);
    for k in -n..=n {
        let sa: Complex64 = (0..=n + k).map(|l| taylor.alpha(l) * d.get(k - l)).sum();
        let sb: Complex64 = (1..=n - k).map(|l| taylor.beta(l) * d.get(k + l)).sum();
        a.set(k, sa);
        b.set(k, sb);
    }
    (a, b)
}

fn check_radius(sol: &SeriesSolution, rho: f64) -> Result<()> {
    let inner = sol.spec.r;
    let slack = 1e-12;
    if !(rho >= inner - slack && rho <= 1.0 + slack) {
        return Err(Error::OutsideAnnulus { rho, inner });
    }
    Ok(())
}

/// `(Σ_θ, Σ_ρ, Σ_ρθ)` at `(ρ, θ)` in the raw sign convention.
pub fn stress_at(sol: &SeriesSolution, rho: f64, theta: f64) -> Result<(f64, f64, f64)> {
    check_radius(sol, rho)?;
    let n = sol.n as i64;
    let f = filter(sol.n);
    let s = 1.0 - rho.powi(-2);
    let mut trace = Complex64::new(0.0, 0.0);
    let mut radial = Complex64::new(0.0, 0.0);
    for k in -n..=n {
        let fk = f(k);
        if fk == 0.0 {
            continue;
        }
        let e = Complex64::cis(k as f64 * theta);
        let rk = rho.powi(k as i32);
        let ak = sol.a.get(k);
        trace += fk * ak * rk * e;
        let term = rk * ak + (k + 1) as f64 * s * sol.a.get(-k).conj() / rk - sol.b.get(k) / (rk * rho * rho);
        radial += fk * term * e;
    }
    let sum = 4.0 * trace.re;
    Ok((sum - radial.re, radial.re, radial.im))
}

/// `U + iV` before the rigid-body shift.
fn displacement_raw(sol: &SeriesSolution, rho: f64, theta: f64) -> Complex64 {
    let n = sol.n as i64;
    let f = filter(sol.n);
    let kappa = sol.kappa;
    let s = 1.0 - rho.powi(-2);
    let a = |k: i64| sol.a.get(k);
    let b = |k: i64| sol.b.get(k);
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let fk = f(k);
        if fk == 0.0 {
            continue;
        }
        let kp = (k + 1) as f64;
        let term = kappa * a(k) * rho.powi(k as i32 + 1) / kp - a(-k).conj() * rho.powi(1 - k as i32) * s
            + b(k) * rho.powi(-(k as i32) - 1) / kp;
        total += fk / 2.0 * term * Complex64::cis(kp * theta);
    }
    total += f(1) / 2.0 * ((kappa * a(-1) - b(-1)) * rho.ln() - a(1).conj() * rho * rho);
    for k in 2..=n {
        let fk = f(k);
        if fk == 0.0 {
            continue;
        }
        let km = (k - 1) as f64;
        let term = -kappa * a(-k) * rho.powi(1 - k as i32) / km - a(k).conj() * rho.powi(k as i32 + 1) * s
            - b(-k) * rho.powi(k as i32 - 1) / km;
        total += fk / 2.0 * term * Complex64::cis(-km * theta);
    }
    total
}

/// `(U, V)` at `(ρ, θ)` in the raw sign convention, with `rigid` removed.
pub fn displacement_at(sol: &SeriesSolution, rigid: RigidBody, rho: f64, theta: f64) -> Result<(f64, f64)> {
    check_radius(sol, rho)?;
    let w = displacement_raw(sol, rho, theta) - rigid.as_complex();
    Ok((w.re, w.im))
}

/// Points `θ1 + 5° ..= θ2 − 5°` on the fixed arc, equally spaced.
pub fn fixed_arc_samples(spec: &ProblemSpec, samples: usize) -> Result<Vec<f64>> {
    let start = spec.theta1 + END_ZONE;
    let end = spec.theta2 - END_ZONE;
    if !(end > start) {
        return Err(Error::ArcTooShort(format!(
            "fixed arc of {:.3} rad leaves nothing outside the 5 degree end zones",
            spec.fixed_arc_length()
        )));
    }
    Ok(linspace(start, end, samples.max(2)))
}

/// Points `θ2 + 5° ..= θ1 + 2π − 5°` on the free arc, equally spaced.
pub fn free_arc_samples(spec: &ProblemSpec, samples: usize) -> Vec<f64> {
    linspace(spec.theta2 + END_ZONE, spec.theta1 + 2.0 * PI - END_ZONE, samples.max(2))
}

pub(crate) fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    let step = (end - start) / (count - 1) as f64;
    (0..count).map(|i| start + step * i as f64).collect()
}

/// Mean of the unshifted displacement over the fixed arc (end zones excluded).
pub fn rigid_body_constant(sol: &SeriesSolution, spec: &ProblemSpec, samples: usize) -> Result<RigidBody> {
    let thetas = fixed_arc_samples(spec, samples)?;
    let sum: Complex64 = thetas.iter().map(|&t| displacement_raw(sol, 1.0, t)).sum();
    let mean = sum / thetas.len() as f64;
    Ok(RigidBody { dx: mean.re, dy: mean.im })
}

/// Full field sample; every output is negated when `sign_flip` is set.
pub fn sample(sol: &SeriesSolution, rigid: RigidBody, rho: f64, theta: f64, sign_flip: bool) -> Result<FieldSample> {
    let (st, sr, srt) = stress_at(sol, rho, theta)?;
    let (u, v) = displacement_at(sol, rigid, rho, theta)?;
    let g = if sign_flip { -1.0 } else { 1.0 };
    Ok(FieldSample {
        rho,
        theta,
        sigma_theta: g * st,
        sigma_rho: g * sr,
        sigma_rhotheta: g * srt,
        u: g * u,
        v: g * v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_case_preset, CaseId, TractionSpectrum};
    use crate::series::ContinuationParams;
    use proptest::prelude::*;

    fn taylor(case: CaseId, n: usize) -> (ProblemSpec, TaylorCoefficients) {
        let (spec, _) = build_case_preset(case);
        let p = ContinuationParams::for_spec(&spec).unwrap();
        let tc = TaylorCoefficients::new(&spec, &p, n);
        (spec, tc)
    }

    #[test]
    fn filter_values() {
        assert_eq!(lanczos_filter(0, 60).unwrap(), 1.0);
        assert!(lanczos_filter(60, 60).unwrap().abs() < 1e-15);
        assert!(lanczos_filter(-60, 60).unwrap().abs() < 1e-15);
        assert!((lanczos_filter(30, 60).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(lanczos_filter(61, 60).is_err());
    }

    #[test]
    fn zero_solution_gives_zero_fields() {
        let (mut spec, tc) = taylor(CaseId::B, 10);
        spec.traction = TractionSpectrum::new();
        let sol = SeriesSolution::new(&spec, &tc, Harmonics::centered(10));
        assert_eq!(sol.a.max_abs(), 0.0);
        assert_eq!(sol.b.max_abs(), 0.0);
        let rigid = rigid_body_constant(&sol, &spec, 100).unwrap();
        assert_eq!(rigid, RigidBody::default());
        let s = sample(&sol, rigid, 0.6, 1.0, true).unwrap();
        for v in [s.sigma_theta, s.sigma_rho, s.sigma_rhotheta, s.u, s.v] {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn single_term_convolution() {
        let (spec, tc) = taylor(CaseId::A, 8);
        let mut d = Harmonics::centered(8);
        d.set(-1, Complex64::new(1.0, 0.0));
        let sol = SeriesSolution::new(&spec, &tc, d);
        for k in -1..=8 {
            assert_eq!(sol.a.get(k), tc.alpha(k + 1));
        }
        for k in -8..-1 {
            assert_eq!(sol.a.get(k), Complex64::new(0.0, 0.0));
        }
        for k in -1..=8 {
            assert_eq!(sol.b.get(k), Complex64::new(0.0, 0.0));
        }
        assert_eq!(sol.b.get(-2), tc.beta(1));
    }

    #[test]
    fn radius_outside_annulus_is_rejected() {
        let (spec, tc) = taylor(CaseId::C, 6);
        let sol = SeriesSolution::new(&spec, &tc, Harmonics::centered(6));
        assert!(matches!(stress_at(&sol, 0.2, 0.0), Err(Error::OutsideAnnulus { .. })));
        assert!(displacement_at(&sol, RigidBody::default(), 1.5, 0.0).is_err());
    }

    #[test]
    fn short_fixed_arc_is_rejected() {
        let (mut spec, tc) = taylor(CaseId::C, 6);
        spec.theta2 = spec.theta1 + 0.1;
        let sol = SeriesSolution::new(&spec, &tc, Harmonics::centered(6));
        assert!(matches!(rigid_body_constant(&sol, &spec, 50), Err(Error::ArcTooShort(_))));
    }

    proptest! {
        #[test]
        fn filter_is_even(k in 0i64..=80, n in 1usize..=80) {
            prop_assume!(k as usize <= n);
            prop_assert_eq!(lanczos_filter(k, n).unwrap(), lanczos_filter(-k, n).unwrap());
        }

        #[test]
        fn displacement_is_periodic(re in -1.0f64..1.0, im in -1.0f64..1.0, theta in -3.0f64..3.0, rho in 0.5f64..1.0) {
            let (spec, tc) = taylor(CaseId::C, 8);
            let mut d = Harmonics::centered(8);
            d.set(2, Complex64::new(re, im));
            d.set(-3, Complex64::new(im, re));
            let sol = SeriesSolution::new(&spec, &tc, d);
            let (u1, v1) = displacement_at(&sol, RigidBody::default(), rho, theta).unwrap();
            let (u2, v2) = displacement_at(&sol, RigidBody::default(), rho, theta + 2.0 * PI).unwrap();
            prop_assert!((u1 - u2).abs() < 1e-12 && (v1 - v2).abs() < 1e-12);
        }

        #[test]
        fn sign_flip_negates_every_output(theta in -3.0f64..3.0) {
            let (spec, tc) = taylor(CaseId::D, 8);
            let mut d = Harmonics::centered(8);
            d.set(0, Complex64::new(0.3, -0.2));
            let sol = SeriesSolution::new(&spec, &tc, d);
            let a = sample(&sol, RigidBody::default(), 0.8, theta, false).unwrap();
            let b = sample(&sol, RigidBody::default(), 0.8, theta, true).unwrap();
            prop_assert_eq!(a.sigma_theta, -b.sigma_theta);
            prop_assert_eq!(a.sigma_rho, -b.sigma_rho);
            prop_assert_eq!(a.sigma_rhotheta, -b.sigma_rhotheta);
            prop_assert_eq!(a.u, -b.u);
            prop_assert_eq!(a.v, -b.v);
        }
    }
}
