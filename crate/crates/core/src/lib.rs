//! Stress and displacement fields in a unit annulus whose outer boundary is
//! partially fixed and whose inner boundary carries a Fourier-specified
//! traction.
//!
//! The outer circle is split at `t1 = e^{iθ1}` and `t2 = e^{iθ2}` into a
//! fixed arc (counter-clockwise from `t1` to `t2`) and a free arc. The first
//! derivative of the Kolosov–Muskhelishvili potential is written as
//! `φ′(z) = X(z) Σ d_k z^k` with the Plemelj factor
//! `X(z) = (z − t1)^{−γ}(z − t2)^{γ−1}`, and the coefficients `d_k` are
//! found by successive approximation. Two independent constraint sets are
//! provided:
//!
//! - [`solver1`] closes the system with the residue-theorem conditions
//!   (unbalanced resultant and single-valued displacement).
//! - [`solver2`] closes it with the arc integral `∫_{C11} φ′ dt = 0`, whose
//!   coefficients come from [`quadrature`].
//!
//! Both produce a [`fields::SeriesSolution`] from which normalized stresses
//! `σ/G` and displacements `u/r_o` are evaluated with Lanczos filtering.
//! [`validate`] collects the post-solve identity checks.
//!
//! ```no_run
//! use annulus_core::model::{build_case_preset, CaseId};
//! use annulus_core::{fields, solver1};
//!
//! let (spec, config) = build_case_preset(CaseId::A);
//! let (solution, report) = solver1::run(&spec, &config).unwrap();
//! println!("reps = {}, cond = ({:.2}, {:.2})", report.reps, report.cond_alpha, report.cond_beta);
//! let s = fields::stress_at(&solution, 0.5, std::f64::consts::PI).unwrap();
//! println!("{:?}", s);
//! ```

pub mod cli;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod model;
pub mod quadrature;
pub mod series;
pub mod solver1;
pub mod solver2;
pub mod validate;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex sequence indexed by a signed harmonic `k ∈ [lo, hi]`.
///
/// Reads outside the stored range return exactly zero, which is how the
/// truncated series treat missing terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Harmonics {
    lo: i64,
    data: Vec<Complex64>,
}

impl Harmonics {
    pub fn zeros(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo, "empty harmonic range");
        Self {
            lo,
            data: vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize],
        }
    }

    /// Symmetric range `−n..=n`.
    pub fn centered(n: usize) -> Self {
        Self::zeros(-(n as i64), n as i64)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.data.len() as i64 - 1
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.lo && k <= self.hi()
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if self.contains(k) {
            self.data[(k - self.lo) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        assert!(self.contains(k), "harmonic {k} outside [{}, {}]", self.lo, self.hi());
        let i = (k - self.lo) as usize;
        self.data[i] = value;
    }

    pub fn add(&mut self, k: i64, value: Complex64) {
        let v = self.get(k) + value;
        self.set(k, v);
    }

    /// `(k, value)` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.lo + i as i64, *v))
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &Harmonics) {
        assert_eq!((self.lo, self.data.len()), (other.lo, other.data.len()));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
    }
}
