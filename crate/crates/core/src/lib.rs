//! Exact bounds on the Bayes-optimal misclassification probability.
//!
//! For a finite joint distribution of a class label `Y ∈ {0, …, k-1}` and an
//! observation `X ∈ {0, …, n-1}` this crate computes
//!
//! * the Bayes classifier and its error `p*` ([`bayes`]),
//! * the pairwise total-variation summary `Δ` and the exact bounds
//!   `L(Δ) ≤ p* ≤ U(Δ) ≤ U_simpl(Δ)` together with the profiles attaining
//!   them ([`delta`]), certified by an exact rational grid search
//!   ([`oracle`]),
//! * the conditional entropy `H(Y|X)` and the Feder–Merhav bounds
//!   `L_FM(H) ≤ p* ≤ U_FM(H)` ([`entropy`]),
//! * the parametric profile families used to compare the two kinds of
//!   bounds ([`families`]).
//!
//! Everything here is pure computation over `alloc`; file formats, sweeps
//! and the command line live in the companion `misclass` crate.
//!
//! Class labels and observation indices are zero-based throughout this
//! crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bayes;
pub mod delta;
pub mod entropy;
mod error;
pub mod families;
pub mod model;
pub mod oracle;
pub mod report;
pub mod root;
pub mod special;

pub use bayes::{bayes_classifier, bayes_error, brute_force_bayes_error, classifier_error, Classifier};
pub use delta::{
    delta, delta_of_profile, extremal_high_profile, extremal_low_profile, lower_bound, upper_bound,
    upper_bound_simpl, DeltaValue,
};
pub use entropy::{
    conditional_entropy, entropy_of_profile, ep_counterexample_check, lower_fm, phi,
    renyi_conditional_entropy, upper_fm, EntropyValue, RenyiValue,
};
pub use error::{Error, Result};
pub use model::{JointModel, MassPolicy, PosteriorProfile};
pub use report::BoundsReport;
