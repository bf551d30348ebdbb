//! Finite joint distributions of a class label and an observation.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest deviation of the total mass from 1 that is accepted on input.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Tolerance on `Σ a_i = 1` for a [`PosteriorProfile`].
pub const PROFILE_TOLERANCE: f64 = 1e-9;

/// What to do when the total mass of a joint matrix is close to, but not
/// exactly, one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MassPolicy {
    /// Accept `|Σw - 1| ≤ 1e-9` and divide every entry by the sum.
    #[default]
    Renormalize,
    /// Reject anything beyond accumulated rounding error.
    Strict,
}

/// Deviation that can arise from summing `count` already-normalized entries.
fn rounding_slack(count: usize) -> f64 {
    2.0 * count as f64 * f64::EPSILON
}

/// Joint probabilities `w[y][x] = P(Y = y, X = x)` for `k` classes and `n`
/// observations.
///
/// The rows are the sub-distributions `μ_y`; the marginal of `X` is their
/// sum. Columns with zero mass are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel {
    k: usize,
    n: usize,
    w: Vec<f64>,
}

impl JointModel {
    /// Validates a `k × n` matrix given as rows, renormalizing small mass
    /// deviations.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows_with(rows, MassPolicy::Renormalize)
    }

    pub fn from_rows_with<R: AsRef<[f64]>>(rows: &[R], policy: MassPolicy) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if k == 0 || n == 0 {
            return Err(Error::Empty);
        }
        let mut w = Vec::with_capacity(k * n);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::Ragged { row, len: r.len(), expected: n });
            }
            w.extend_from_slice(r);
        }
        Self::from_flat_with(k, n, w, policy)
    }

    /// Validates a row-major `k × n` buffer.
    pub fn from_flat(k: usize, n: usize, w: Vec<f64>) -> Result<Self> {
        Self::from_flat_with(k, n, w, MassPolicy::Renormalize)
    }

    pub fn from_flat_with(k: usize, n: usize, mut w: Vec<f64>, policy: MassPolicy) -> Result<Self> {
        if k == 0 || n == 0 || w.is_empty() {
            return Err(Error::Empty);
        }
        if w.len() != k * n {
            return Err(Error::Ragged { row: w.len() / n, len: w.len() % n, expected: n });
        }
        for (i, &v) in w.iter().enumerate() {
            let (row, col) = (i / n, i % n);
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row, col, value: v });
            }
        }
        if k < 2 {
            return Err(Error::TooFewClasses { k });
        }
        let sum: f64 = w.iter().sum();
        let dev = libm::fabs(sum - 1.0);
        if dev > rounding_slack(w.len()) {
            match policy {
                MassPolicy::Renormalize if dev <= MASS_TOLERANCE => {
                    w.iter_mut().for_each(|v| *v /= sum);
                }
                _ => return Err(Error::MassNotOne { sum }),
            }
        }
        Ok(Self { k, n, w })
    }

    /// Number of classes.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of observation values.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `P(Y = y, X = x)`.
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.w[y * self.n + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        &self.w[y * self.n..(y + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.w.chunks_exact(self.n)
    }

    /// Iterates over the entries of column `x`, i.e. `w[·][x]`.
    pub fn column(&self, x: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.k).map(move |y| self.get(y, x))
    }

    /// Row-major entries.
    pub fn as_flat(&self) -> &[f64] {
        &self.w
    }

    /// Distribution of `X`: `μ(x) = Σ_y w[y][x]`.
    pub fn marginal(&self) -> Vec<f64> {
        (0..self.n).map(|x| self.column(x).sum()).collect()
    }

    /// Class priors `‖μ_y‖`.
    pub fn priors(&self) -> Vec<f64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    /// Posterior `ρ_y(x) = w[y][x] / μ(x)`.
    pub fn posterior(&self, x: usize) -> Result<PosteriorProfile> {
        let mass: f64 = self.column(x).sum();
        if mass <= 0.0 {
            return Err(Error::ZeroMarginal { x });
        }
        Ok(PosteriorProfile { a: self.column(x).map(|v| v / mass).collect() })
    }

    /// Swaps the roles of the two variables. Fails when `n < 2`.
    pub fn transpose(&self) -> Result<Self> {
        let mut w = Vec::with_capacity(self.w.len());
        for x in 0..self.n {
            w.extend(self.column(x));
        }
        Self::from_flat_with(self.n, self.k, w, MassPolicy::Strict)
    }
}

/// A probability vector `(a_1, …, a_k)` over the classes, typically the
/// posterior at one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorProfile {
    a: Vec<f64>,
}

impl PosteriorProfile {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::TooFewClasses { k: a.len() });
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadProfile { reason: "non-finite entry" });
        }
        if a.iter().any(|&v| v < 0.0) {
            return Err(Error::BadProfile { reason: "negative entry" });
        }
        let sum: f64 = a.iter().sum();
        if libm::fabs(sum - 1.0) > PROFILE_TOLERANCE {
            return Err(Error::BadProfile { reason: "entries do not sum to 1" });
        }
        Ok(Self { a })
    }

    /// Uniform profile `(1/k, …, 1/k)`.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / k as f64; k])
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.a
    }

    pub fn max(&self) -> f64 {
        self.a.iter().copied().fold(0.0, f64::max)
    }

    /// Entries in nonincreasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v = self.a.clone();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    }

    /// Single-observation model whose only column is this profile.
    pub fn to_model(&self) -> JointModel {
        JointModel { k: self.a.len(), n: 1, w: self.a.clone() }
    }
}

impl AsRef<[f64]> for PosteriorProfile {
    fn as_ref(&self) -> &[f64] {
        &self.a
    }
}
