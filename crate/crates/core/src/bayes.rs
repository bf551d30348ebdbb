//! The Bayes classifier and misclassification probabilities.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::JointModel;

/// Upper limit on the number of classifiers [`brute_force_bayes_error`]
/// will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// A deterministic classification rule: `labels[x]` is the class assigned
/// to observation `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Classifier {
    labels: Vec<usize>,
}

impl Classifier {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((x, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::BadLabel { x, label, k });
        }
        Ok(Self { labels })
    }

    /// The rule that assigns `label` everywhere.
    pub fn constant(label: usize, n: usize) -> Self {
        Self { labels: vec![label; n] }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// `P(f(X) ≠ Y) = 1 - Σ_x w[f(x)][x]`.
pub fn classifier_error(model: &JointModel, f: &Classifier) -> Result<f64> {
    if f.len() != model.n() {
        return Err(Error::LengthMismatch { expected: model.n(), got: f.len() });
    }
    if let Some((x, &label)) = f.labels.iter().enumerate().find(|(_, &l)| l >= model.k()) {
        return Err(Error::BadLabel { x, label, k: model.k() });
    }
    Ok(error_of_labels(model, &f.labels))
}

fn error_of_labels(model: &JointModel, labels: &[usize]) -> f64 {
    let correct: f64 = labels.iter().enumerate().map(|(x, &y)| model.get(y, x)).sum();
    (1.0 - correct).max(0.0)
}

/// Smallest maximizer of `w[·][x]` in every column.
///
/// Maximizing `w[y][x]` over `y` is the same as maximizing the posterior
/// when `μ(x) > 0`; zero columns get label 0.
pub fn bayes_classifier(model: &JointModel) -> Classifier {
    let labels = (0..model.n())
        .map(|x| {
            let mut best = 0;
            let mut best_val = model.get(0, x);
            for y in 1..model.k() {
                let v = model.get(y, x);
                if v > best_val {
                    best = y;
                    best_val = v;
                }
            }
            best
        })
        .collect();
    Classifier { labels }
}

/// `p* = 1 - Σ_x max_y w[y][x]`, the smallest achievable error.
pub fn bayes_error(model: &JointModel) -> f64 {
    let correct: f64 = (0..model.n()).map(|x| model.column(x).fold(0.0, f64::max)).sum();
    (1.0 - correct).max(0.0)
}

/// Minimum of [`classifier_error`] over all `k^n` classifiers.
pub fn brute_force_bayes_error(model: &JointModel) -> Result<f64> {
    let (k, n) = (model.k(), model.n());
    let size = (k as u128)
        .checked_pow(n as u32)
        .filter(|&s| s <= BRUTE_FORCE_LIMIT)
        .ok_or(Error::TooLarge { size: (k as u128).saturating_pow(n as u32), limit: BRUTE_FORCE_LIMIT })?;
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    for _ in 0..size {
        best = best.min(error_of_labels(model, &labels));
        // odometer increment
        for slot in labels.iter_mut() {
            *slot += 1;
            if *slot < k {
                break;
            }
            *slot = 0;
        }
    }
    Ok(best)
}
