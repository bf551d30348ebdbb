//! All bounds for one model, side by side.

use alloc::vec::Vec;

use crate::bayes::bayes_error;
use crate::delta::delta;
use crate::entropy::conditional_entropy;
use crate::model::{JointModel, PosteriorProfile};

/// Slack used when asserting the two sandwich chains before output.
pub const SANDWICH_SLACK: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundsReport {
    pub k: usize,
    pub delta: f64,
    pub entropy_nats: f64,
    pub p_star: f64,
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub lower: f64,
    #[cfg_attr(feature = "serde", serde(rename = "U"))]
    pub upper: f64,
    #[cfg_attr(feature = "serde", serde(rename = "U_simpl"))]
    pub upper_simpl: f64,
    #[cfg_attr(feature = "serde", serde(rename = "L_FM"))]
    pub lower_fm: f64,
    #[cfg_attr(feature = "serde", serde(rename = "U_FM"))]
    pub upper_fm: f64,
}

impl BoundsReport {
    pub fn from_model(model: &JointModel) -> Self {
        let d = delta(model);
        let h = conditional_entropy(model);
        Self {
            k: model.k(),
            delta: d.value(),
            entropy_nats: h.value(),
            p_star: bayes_error(model),
            lower: d.lower(),
            upper: d.upper(),
            upper_simpl: d.upper_simpl(),
            lower_fm: h.lower_fm(),
            upper_fm: h.upper_fm(),
        }
    }

    /// Report of the single-observation (equivalently, any pure) model
    /// built on `a`.
    pub fn from_profile(a: &PosteriorProfile) -> Self {
        Self::from_model(&a.to_model())
    }

    /// Names of the relations in `L ≤ p* ≤ U ≤ U_simpl` and
    /// `L_FM ≤ p* ≤ U_FM` that fail by more than `slack`.
    pub fn violations(&self, slack: f64) -> Vec<&'static str> {
        let chain = [
            ("L <= p*", self.lower, self.p_star),
            ("p* <= U", self.p_star, self.upper),
            ("U <= U_simpl", self.upper, self.upper_simpl),
            ("L_FM <= p*", self.lower_fm, self.p_star),
            ("p* <= U_FM", self.p_star, self.upper_fm),
        ];
        chain
            .into_iter()
            .filter(|&(_, small, big)| (big - small).is_nan() || big - small < -slack)
            .map(|(name, _, _)| name)
            .collect()
    }

    pub fn is_consistent(&self) -> bool {
        self.violations(SANDWICH_SLACK).is_empty()
    }
}
