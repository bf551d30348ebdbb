//! Conditional entropy and the Feder–Merhav bounds.
//!
//! Natural logarithms throughout, except for the Rényi quantities which are
//! in bits. With `H = H(Y|X)` in nats,
//!
//! ```text
//! Φ(p)    = p ln(k-1) + h₂(p)
//! L_FM(H) = Φ⁻¹(H)
//! e(H)    = ⌈e^H⌉ - 1
//! U_FM(H) = (e-1)/e + (H - ln e) / (e(e+1) ln(1 + 1/e))
//! ```
//!
//! and `L_FM(H) ≤ p* ≤ U_FM(H)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bayes::bayes_error;
use crate::delta::snapped_ceil;
use crate::error::{Error, Result};
use crate::model::{JointModel, PosteriorProfile};
use crate::root::{invert_increasing, Bisection};

/// Slack on the domain ends of [`phi`], [`lower_fm`] and [`upper_fm`].
pub const ENTROPY_SLACK: f64 = 1e-12;

/// Conditional entropy `H(Y|X)` in nats for `k` classes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntropyValue {
    h: f64,
    k: usize,
}

impl EntropyValue {
    pub fn new(k: usize, h: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewClasses { k });
        }
        let max = libm::log(k as f64);
        if !(h >= -ENTROPY_SLACK && h <= max + ENTROPY_SLACK) {
            return Err(Error::EntropyOutOfRange { h, k });
        }
        Ok(Self { h: h.clamp(0.0, max), k })
    }

    pub fn value(self) -> f64 {
        self.h
    }

    pub fn k(self) -> usize {
        self.k
    }

    /// `L_FM(H)`.
    pub fn lower_fm(self) -> f64 {
        invert_phi(self.k, self.h)
    }

    /// `U_FM(H)`.
    pub fn upper_fm(self) -> f64 {
        upper_fm_formula(self.h)
    }
}

/// Rényi conditional entropy `H_β(W|M)` in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RenyiValue {
    pub h_beta: f64,
    pub beta: f64,
}

/// `-v ln v` with `0 ln 0 = 0`.
fn neg_v_ln_v(v: f64) -> f64 {
    if v > 0.0 {
        -v * libm::log(v)
    } else {
        0.0
    }
}

/// Binary entropy `h₂(p)` in nats.
pub fn h2(p: f64) -> f64 {
    neg_v_ln_v(p) + neg_v_ln_v(1.0 - p)
}

/// `H(Y|X) = -Σ_x μ(x) Σ_y ρ_y(x) ln ρ_y(x)`, skipping columns with `μ(x) = 0`.
pub fn conditional_entropy(model: &JointModel) -> EntropyValue {
    let mut h = 0.0;
    for x in 0..model.n() {
        let mass: f64 = model.column(x).sum();
        if mass > 0.0 {
            h += model.column(x).map(|w| mass * neg_v_ln_v(w / mass)).sum::<f64>();
        }
    }
    let k = model.k();
    EntropyValue { h: h.clamp(0.0, libm::log(k as f64)), k }
}

/// Shannon entropy `-Σ a_i ln a_i` of a profile.
pub fn entropy_of_profile(a: &PosteriorProfile) -> EntropyValue {
    let k = a.k();
    let h: f64 = a.as_slice().iter().map(|&v| neg_v_ln_v(v)).sum();
    EntropyValue { h: h.clamp(0.0, libm::log(k as f64)), k }
}

fn phi_formula(k: usize, p: f64) -> f64 {
    p * libm::log((k - 1) as f64) + h2(p)
}

/// `Φ(p) = p ln(k-1) + h₂(p)` on `[0, 1 - 1/k]`, where it increases
/// strictly from 0 to `ln k`.
pub fn phi(k: usize, p: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::TooFewClasses { k });
    }
    let max = 1.0 - 1.0 / k as f64;
    if !(p >= -ENTROPY_SLACK && p <= max + ENTROPY_SLACK) {
        return Err(Error::OutOfRange { delta: p, max });
    }
    Ok(phi_formula(k, p.clamp(0.0, max)))
}

fn invert_phi(k: usize, h: f64) -> f64 {
    let max = 1.0 - 1.0 / k as f64;
    invert_increasing(|p| phi_formula(k, p), h, 0.0, max, Bisection::default())
}

/// `L_FM(H) = Φ⁻¹(H)`, by bisection on `[0, 1 - 1/k]`.
pub fn lower_fm(k: usize, h: f64) -> Result<f64> {
    EntropyValue::new(k, h).map(EntropyValue::lower_fm)
}

fn upper_fm_formula(h: f64) -> f64 {
    // e(H) = 0 only at H = 0, where the e = 1 branch gives the continuous value 0
    let e = (snapped_ceil(libm::exp(h)) - 1.0).max(1.0);
    (e - 1.0) / e + (h - libm::log(e)) / (e * (e + 1.0) * libm::log1p(1.0 / e))
}

/// `U_FM(H)`; `U_FM(ln m) = 1 - 1/m` for every integer `m ≥ 1`.
pub fn upper_fm(h: f64) -> Result<f64> {
    if !h.is_finite() || h < -ENTROPY_SLACK {
        return Err(Error::NegativeEntropy { h });
    }
    Ok(upper_fm_formula(h.max(0.0)))
}

/// `H_β(W|M) = Σ_m P(M=m) · log₂(Σ_w P(W=w|M=m)^β) / (1 - β)` in bits.
///
/// Rows of `model` index `W`, columns index the conditioning variable `M`.
/// `β = 1` gives the Shannon conditional entropy in bits.
pub fn renyi_conditional_entropy(model: &JointModel, beta: f64) -> Result<RenyiValue> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::BadBeta { beta });
    }
    let mut total = 0.0;
    for m in 0..model.n() {
        let pm: f64 = model.column(m).sum();
        if pm <= 0.0 {
            continue;
        }
        let cond = model.column(m).map(|w| w / pm).filter(|&c| c > 0.0);
        let hm = if beta == 1.0 {
            cond.map(|c| -c * libm::log2(c)).sum::<f64>()
        } else {
            libm::log2(cond.map(|c| libm::pow(c, beta)).sum::<f64>()) / (1.0 - beta)
        };
        total += pm * hm;
    }
    Ok(RenyiValue { h_beta: total, beta })
}

/// One named assertion of a self-check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Evaluation of the Erdoğmuş–Principe style upper bound
/// `(H_β(W|M) - H_S(e)) / N₂` on a two-class fixture where it is negative.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EpCounterexample {
    /// `P(e)`, the Bayes error of guessing `M` from `W`.
    pub p_e: f64,
    pub h_beta: Vec<RenyiValue>,
    /// Binary entropy of `P(e)` in bits.
    pub h_s: f64,
    /// Largest `H_β(W|M) - H_S(e)` over the tested orders.
    pub ep_numerator: f64,
    pub bound_false: bool,
    pub checks: Vec<Check>,
}

impl EpCounterexample {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Orders at which the counterexample is evaluated.
pub const EP_BETAS: [f64; 3] = [0.5, 2.0, 5.0];

/// Builds `P(W=1, M=1) = P(W=1, M=2) = 1/2` and evaluates both sides of the
/// presumed upper bound.
pub fn ep_counterexample_check() -> EpCounterexample {
    const TOL: f64 = 1e-12;
    // rows: class M, columns: observation W
    let by_input = JointModel::from_rows(&[[0.5, 0.0], [0.5, 0.0]]).expect("fixture is valid");
    let by_output = by_input.transpose().expect("fixture is square");

    let p_e = bayes_error(&by_input);
    let h_beta: Vec<RenyiValue> =
        EP_BETAS.iter().map(|&b| renyi_conditional_entropy(&by_output, b).expect("positive order")).collect();
    let h_s = h2(p_e) / core::f64::consts::LN_2;
    let ep_numerator = h_beta.iter().map(|r| r.h_beta - h_s).fold(f64::NEG_INFINITY, f64::max);
    let bound_false = ep_numerator < 0.0;

    let mut checks = vec![
        Check { name: "P(e) = 1/2".into(), passed: libm::fabs(p_e - 0.5) <= TOL },
        Check { name: "H_S(e) = 1 bit".into(), passed: libm::fabs(h_s - 1.0) <= TOL },
        Check { name: "numerator = -1".into(), passed: libm::fabs(ep_numerator + 1.0) <= TOL },
        Check { name: "bound negative".into(), passed: bound_false },
    ];
    for r in &h_beta {
        checks.push(Check {
            name: alloc::format!("H_beta = 0 at beta = {}", r.beta),
            passed: libm::fabs(r.h_beta) <= TOL,
        });
    }
    EpCounterexample { p_e, h_beta, h_s, ep_numerator, bound_false, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn conditional_entropy_examples() {
        let m = JointModel::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
        let want = -0.8 * libm::log(0.8) - 0.2 * libm::log(0.2);
        assert!(close(conditional_entropy(&m).value(), want, 1e-15));
        assert!(close(want, 0.500402, 1e-6));
        let det = JointModel::from_rows(&[[0.3, 0.0], [0.0, 0.7]]).unwrap();
        assert_eq!(conditional_entropy(&det).value(), 0.0);
        let uni = JointModel::from_flat(4, 3, vec![1.0 / 12.0; 12]).unwrap();
        assert!(close(conditional_entropy(&uni).value(), libm::log(4.0), 1e-15));
    }

    #[test]
    fn profile_entropy_examples() {
        let p = PosteriorProfile::new(vec![0.5, 0.5, 0.0]).unwrap();
        assert!(close(entropy_of_profile(&p).value(), LN_2, 1e-15));
        for l in 2..7 {
            let mut a = vec![0.0; 8];
            a[..l].iter_mut().for_each(|v| *v = 1.0 / l as f64);
            let p = PosteriorProfile::new(a).unwrap();
            assert!(close(entropy_of_profile(&p).value(), libm::log(l as f64), 1e-14));
        }
        let p = PosteriorProfile::new(vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]).unwrap();
        let want = 2.0 / 3.0 * libm::log(1.5) + libm::log(6.0) / 3.0;
        assert!(close(entropy_of_profile(&p).value(), want, 1e-15));
        assert!(close(want, 0.867563, 1e-6));
    }

    #[test]
    fn phi_examples() {
        assert!(close(phi(2, 0.5).unwrap(), LN_2, 1e-15));
        for k in 2..12 {
            assert_eq!(phi(k, 0.0).unwrap(), 0.0);
            let top = 1.0 - 1.0 / k as f64;
            assert!(close(phi(k, top).unwrap(), libm::log(k as f64), 1e-14));
        }
        assert!(phi(3, 0.7).is_err());
        assert!(phi(3, -0.1).is_err());
    }

    #[test]
    fn lower_fm_examples() {
        assert!(close(lower_fm(2, LN_2).unwrap(), 0.5, 1e-12));
        for k in 2..10 {
            assert_eq!(lower_fm(k, 0.0).unwrap(), 0.0);
        }
        assert!(close(lower_fm(2, h2(0.2)).unwrap(), 0.2, 1e-13));
        assert!(matches!(lower_fm(3, 1.2), Err(Error::EntropyOutOfRange { .. })));
        assert!(matches!(lower_fm(3, -0.01), Err(Error::EntropyOutOfRange { .. })));
    }

    #[test]
    fn upper_fm_examples() {
        assert!(close(upper_fm(LN_2).unwrap(), 0.5, 1e-15));
        assert_eq!(upper_fm(0.0).unwrap(), 0.0);
        for m in 1..30 {
            let mf = m as f64;
            assert!(close(upper_fm(libm::log(mf)).unwrap(), 1.0 - 1.0 / mf, 1e-12), "m={m}");
        }
        assert!(matches!(upper_fm(-0.5), Err(Error::NegativeEntropy { .. })));
        // e = 1 branch: H/(2 ln 2)
        let h = 0.500402;
        assert!(close(upper_fm(h).unwrap(), h / (2.0 * LN_2), 1e-15));
    }

    #[test]
    fn upper_fm_is_continuous_at_nodes() {
        for m in 1..12 {
            let node = libm::log(m as f64);
            let at = upper_fm(node).unwrap();
            for h in [node - 1e-9, node + 1e-9] {
                if h >= 0.0 {
                    assert!(close(upper_fm(h).unwrap(), at, 1e-6));
                }
            }
        }
    }

    #[test]
    fn renyi_examples() {
        let det = JointModel::from_rows(&[[0.2, 0.0], [0.0, 0.8]]).unwrap();
        let uni = JointModel::from_flat(4, 2, vec![0.125; 8]).unwrap();
        for beta in [0.5, 1.0, 2.0, 5.0] {
            assert!(renyi_conditional_entropy(&det, beta).unwrap().h_beta.abs() < 1e-15);
            assert!(close(renyi_conditional_entropy(&uni, beta).unwrap().h_beta, 2.0, 1e-14));
        }
        assert!(matches!(renyi_conditional_entropy(&det, 0.0), Err(Error::BadBeta { .. })));
        assert!(matches!(renyi_conditional_entropy(&det, -1.0), Err(Error::BadBeta { .. })));
    }

    #[test]
    fn renyi_tends_to_shannon() {
        let m = JointModel::from_rows(&[[0.3, 0.1], [0.2, 0.1], [0.1, 0.2]]).unwrap();
        let shannon = renyi_conditional_entropy(&m, 1.0).unwrap().h_beta;
        let near = renyi_conditional_entropy(&m, 1.0 + 1e-7).unwrap().h_beta;
        assert!(close(shannon, near, 1e-6));
        // Shannon in bits equals the nat-valued conditional entropy of W given M / ln 2
        let h_nats = conditional_entropy(&m).value();
        assert!(close(shannon, h_nats / LN_2, 1e-14));
    }

    #[test]
    fn counterexample() {
        let r = ep_counterexample_check();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.p_e, 0.5);
        assert!(close(r.h_s, 1.0, 1e-15));
        assert!(close(r.ep_numerator, -1.0, 1e-15));
        assert!(r.bound_false);
        assert!(r.h_beta.iter().all(|v| v.h_beta == 0.0));
    }
}
