//! Problem definition: geometry, material, traction spectrum and the four
//! benchmark presets.
//!
//! Everything is normalized: the outer radius is 1 and the shear modulus
//! `G` is a nominal 1, so stresses are `σ/G` and displacements `u/r_o`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::{Complex64, Error, Result};

/// Nominal shear modulus. Every output is divided by it.
pub const SHEAR_MODULUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneCondition {
    PlaneStrain,
    PlaneStress,
}

/// Inner-boundary traction `f(θ) = Σ (p_k + i q_k) e^{ikθ}` with finite
/// support. Absent harmonics are exactly zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TractionSpectrum {
    coefficients: BTreeMap<i64, Complex64>,
}

impl TractionSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, k: i64, value: Complex64) -> Self {
        self.set(k, value);
        self
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        if value == Complex64::new(0.0, 0.0) {
            self.coefficients.remove(&k);
        } else {
            self.coefficients.insert(k, value);
        }
    }

    /// `p_k + i q_k`.
    pub fn get(&self, k: i64) -> Complex64 {
        self.coefficients.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coefficients.iter().map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn max_harmonic(&self) -> u64 {
        self.coefficients
            .keys()
            .map(|k| k.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `max_k |p_k + i q_k|`.
    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.values().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Evaluates the finite Fourier sum `f(θ)`.
pub fn traction_eval(traction: &TractionSpectrum, theta: f64) -> Complex64 {
    traction
        .iter()
        .map(|(k, c)| c * Complex64::cis(k as f64 * theta))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub nu: f64,
    pub plane_condition: PlaneCondition,
    /// Inner radius as a fraction of the outer radius.
    pub r: f64,
    /// Start of the fixed arc, radians.
    pub theta1: f64,
    /// End of the fixed arc, radians; `θ1 < θ2 < θ1 + 2π`.
    pub theta2: f64,
    pub traction: TractionSpectrum,
}

impl ProblemSpec {
    pub fn new(
        nu: f64,
        plane_condition: PlaneCondition,
        r: f64,
        theta1: f64,
        theta2: f64,
        traction: TractionSpectrum,
    ) -> Result<Self> {
        let spec = Self {
            nu,
            plane_condition,
            r,
            theta1,
            theta2,
            traction,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(Error::InvalidSpec(format!("nu out of range (0, 0.5): {}", self.nu)));
        }
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(Error::InvalidSpec(format!("r out of range (0, 1): {}", self.r)));
        }
        if !(self.theta1.is_finite() && self.theta2.is_finite()) {
            return Err(Error::InvalidSpec("arc angles must be finite".into()));
        }
        if !(self.theta1 < self.theta2 && self.theta2 < self.theta1 + 2.0 * PI) {
            return Err(Error::InvalidSpec(format!(
                "arc angles must satisfy theta1 < theta2 < theta1 + 2pi (got {}, {})",
                self.theta1, self.theta2
            )));
        }
        if self.traction.iter().any(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSpec("traction coefficients must be finite".into()));
        }
        Ok(())
    }

    /// Checks that every traction harmonic is representable at order `n`.
    pub fn check_truncation(&self, n: usize) -> Result<()> {
        let k = self.traction.max_harmonic();
        if k > n as u64 {
            return Err(Error::InvalidSpec(format!(
                "traction harmonic |k| = {k} exceeds truncation order N = {n}"
            )));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        kappa(self)
    }

    pub fn t1(&self) -> Complex64 {
        Complex64::cis(self.theta1)
    }

    pub fn t2(&self) -> Complex64 {
        Complex64::cis(self.theta2)
    }

    /// Length of the fixed arc `C12`, radians.
    pub fn fixed_arc_length(&self) -> f64 {
        self.theta2 - self.theta1
    }
}

/// Kolosov constant.
pub fn kappa(spec: &ProblemSpec) -> f64 {
    kolosov(spec.nu, spec.plane_condition)
}

pub fn kolosov(nu: f64, plane: PlaneCondition) -> f64 {
    match plane {
        PlaneCondition::PlaneStrain => 3.0 - 4.0 * nu,
        PlaneCondition::PlaneStress => (3.0 - nu) / (1.0 + nu),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Equal-spaced open sum over the arc, endpoints excluded.
    OpenSum,
    /// Equal-spaced open sum in the tanh-sinh variable; removes the
    /// endpoint singularity.
    DoubleExponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Truncation order; the series keep harmonics `−N..=N`.
    pub n: usize,
    /// Stop once `max |d_k^(q)| ≤ epsilon`.
    pub epsilon: f64,
    pub max_reps: usize,
    /// Quadrature points on the free arc `C11`.
    pub m1: usize,
    /// Quadrature points on the fixed arc `C12`.
    pub m2: usize,
    pub quadrature: QuadratureRule,
    /// Negate outputs to the finite-element sign convention.
    pub sign_flip: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 60,
            epsilon: 1e-20,
            max_reps: 20_000,
            m1: 30_000,
            m2: 10_000,
            quadrature: QuadratureRule::DoubleExponential,
            sign_flip: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("N must be at least 2, got {}", self.n)));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.max_reps == 0 {
            return Err(Error::InvalidConfig("max_reps must be positive".into()));
        }
        if self.m1 < 100 || self.m2 < 100 {
            return Err(Error::InvalidConfig(format!(
                "M1 and M2 must be at least 100 (got {}, {})",
                self.m1, self.m2
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    A,
    B,
    C,
    D,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::A, CaseId::B, CaseId::C, CaseId::D];

    pub fn label(self) -> &'static str {
        match self {
            CaseId::A => "A",
            CaseId::B => "B",
            CaseId::C => "C",
            CaseId::D => "D",
        }
    }

    /// Radius of the interior data circle drawn in the case figures.
    pub fn interior_radius(self) -> f64 {
        match self {
            CaseId::A => 0.3,
            CaseId::B => 0.5,
            CaseId::C => 0.7,
            CaseId::D => 0.9,
        }
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CaseId::A),
            "B" => Ok(CaseId::B),
            "C" => Ok(CaseId::C),
            "D" => Ok(CaseId::D),
            other => Err(Error::InvalidSpec(format!("unknown case '{other}'"))),
        }
    }
}

/// Benchmark cases: ν = 0.3, plane strain, N = 60, one traction harmonic.
pub fn build_case_preset(case: CaseId) -> (ProblemSpec, SolverConfig) {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let (r, theta2, traction, m1, m2) = match case {
        CaseId::A => (0.1, 0.0, TractionSpectrum::new().with(-1, i), 30_000, 10_000),
        CaseId::B => (0.3, PI / 2.0, TractionSpectrum::new().with(-1, one), 20_000, 20_000),
        CaseId::C => (0.5, 0.0, TractionSpectrum::new().with(0, one), 30_000, 10_000),
        CaseId::D => (0.7, PI / 2.0, TractionSpectrum::new().with(0, i), 20_000, 20_000),
    };
    let spec = ProblemSpec {
        nu: 0.3,
        plane_condition: PlaneCondition::PlaneStrain,
        r,
        theta1: -PI / 2.0,
        theta2,
        traction,
    };
    let config = SolverConfig {
        m1,
        m2,
        ..SolverConfig::default()
    };
    (spec, config)
}
