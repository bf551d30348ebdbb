//! The pairwise total-variation summary `Δ` and the bounds it implies.
//!
//! With `‖·‖` the total variation norm of a discrete signed measure (the sum
//! of absolute atom masses, no factor ½),
//!
//! ```text
//! Δ = Σ_{y<z} ‖μ_y - μ_z‖ ∈ [0, k-1]
//! L(Δ)      = 1 - (1 + Δ)/k
//! U(Δ)      = 1 - (k + 1 + Δ - 2⌈Δ⌉) / ((k - ⌈Δ⌉)(k + 1 - ⌈Δ⌉))
//! U_simpl(Δ) = 1 - 1/(k - Δ)
//! ```
//!
//! and `L(Δ) ≤ p* ≤ U(Δ) ≤ U_simpl(Δ)`. `U` is the piecewise-linear
//! interpolation of `U_simpl` at the integers; both `L` and `U` are attained
//! by the profiles returned from [`extremal_low_profile`] and
//! [`extremal_high_profile`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{JointModel, PosteriorProfile};

/// Values this close to an integer are treated as that integer before
/// taking a ceiling.
pub const CEIL_SNAP: f64 = 1e-9;

/// Slack allowed on either end of `[0, k-1]` before a `Δ` is rejected.
pub const DELTA_SLACK: f64 = 1e-9;

/// `⌈x⌉`, except that `x` within [`CEIL_SNAP`] of an integer maps to that
/// integer.
pub fn snapped_ceil(x: f64) -> f64 {
    let r = libm::round(x);
    if libm::fabs(x - r) <= CEIL_SNAP {
        r
    } else {
        libm::ceil(x)
    }
}

/// A validated value of `Δ` (or of `δ` for a single profile) for `k`
/// classes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeltaValue {
    delta: f64,
    k: usize,
}

impl DeltaValue {
    /// Checks `0 ≤ delta ≤ k - 1` up to [`DELTA_SLACK`], clamping into the
    /// interval.
    pub fn new(k: usize, delta: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewClasses { k });
        }
        let max = (k - 1) as f64;
        if !(delta >= -DELTA_SLACK && delta <= max + DELTA_SLACK) {
            return Err(Error::OutOfRange { delta, max });
        }
        Ok(Self { delta: delta.clamp(0.0, max), k })
    }

    pub fn value(self) -> f64 {
        self.delta
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn lower(self) -> f64 {
        lower_formula(self.k as f64, self.delta)
    }

    pub fn upper(self) -> f64 {
        upper_formula(self.k as f64, self.delta)
    }

    pub fn upper_simpl(self) -> f64 {
        simpl_formula(self.k as f64, self.delta)
    }
}

/// `Σ_{i<j} |a_i - a_j|` via the sorted form `Σ_i a_(i) (k - 1 - 2i)`.
fn pairwise_spread(values: &mut [f64]) -> f64 {
    values.sort_by(|x, y| y.total_cmp(x));
    let k = values.len() as f64;
    values.iter().enumerate().map(|(i, &v)| v * (k - 1.0 - 2.0 * i as f64)).sum()
}

/// `Δ` of a joint model.
pub fn delta(model: &JointModel) -> DeltaValue {
    let mut col = vec![0.0; model.k()];
    let mut total = 0.0;
    for x in 0..model.n() {
        col.iter_mut().zip(model.column(x)).for_each(|(c, v)| *c = v);
        total += pairwise_spread(&mut col);
    }
    let max = (model.k() - 1) as f64;
    DeltaValue { delta: total.clamp(0.0, max), k: model.k() }
}

/// `δ = Σ_{i<j} |a_i - a_j|` of a single profile.
pub fn delta_of_profile(a: &PosteriorProfile) -> DeltaValue {
    let mut v: Vec<f64> = a.as_slice().to_vec();
    let k = v.len();
    let d = pairwise_spread(&mut v);
    DeltaValue { delta: d.clamp(0.0, (k - 1) as f64), k }
}

fn lower_formula(k: f64, d: f64) -> f64 {
    (1.0 - (1.0 + d) / k).max(0.0)
}

fn upper_formula(k: f64, d: f64) -> f64 {
    let c = snapped_ceil(d);
    (1.0 - (k + 1.0 + d - 2.0 * c) / ((k - c) * (k + 1.0 - c))).max(0.0)
}

fn simpl_formula(k: f64, d: f64) -> f64 {
    (1.0 - 1.0 / (k - d)).max(0.0)
}

/// `L_k(Δ) = 1 - (1 + Δ)/k`.
pub fn lower_bound(k: usize, delta: f64) -> Result<f64> {
    DeltaValue::new(k, delta).map(DeltaValue::lower)
}

/// `U_k(Δ)`, the exact upper bound.
pub fn upper_bound(k: usize, delta: f64) -> Result<f64> {
    DeltaValue::new(k, delta).map(DeltaValue::upper)
}

/// `U_{k;simpl}(Δ) = 1 - 1/(k - Δ)`; coincides with `U` at integer `Δ`.
pub fn upper_bound_simpl(k: usize, delta: f64) -> Result<f64> {
    DeltaValue::new(k, delta).map(DeltaValue::upper_simpl)
}

/// Profile with `δ = d` maximizing `max a_i`, so `1 - max a_i = L(d)`:
/// `a_1 = (1 + d)/k`, `a_2 = … = a_k = 1/k - d/(k(k-1))`.
pub fn extremal_low_profile(k: usize, d: f64) -> Result<PosteriorProfile> {
    let dv = DeltaValue::new(k, d)?;
    let (kf, d) = (k as f64, dv.delta);
    let mut a = vec![(kf - 1.0 - d) / (kf * (kf - 1.0)); k];
    a[0] = (1.0 + d) / kf;
    PosteriorProfile::new(a)
}

/// Profile with `δ = d` minimizing `max a_i`, so `1 - max a_i = U(d)`:
/// the first `k - ⌈d⌉` entries equal `1 - U(d)`, entry `k + 1 - ⌈d⌉` gets
/// `(⌈d⌉ - d)/(k + 1 - ⌈d⌉)`, the rest are zero.
pub fn extremal_high_profile(k: usize, d: f64) -> Result<PosteriorProfile> {
    let dv = DeltaValue::new(k, d)?;
    let d = dv.delta;
    let c = snapped_ceil(d) as usize;
    let top = 1.0 - upper_formula(k as f64, d);
    let mut a = vec![0.0; k];
    a[..k - c].iter_mut().for_each(|v| *v = top);
    // one-based index k + 1 - c, which exists only when c ≥ 1
    if c >= 1 {
        a[k - c] += ((c as f64 - d) / (k + 1 - c) as f64).max(0.0);
    }
    PosteriorProfile::new(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn delta_examples() {
        let m = JointModel::from_rows(&[[0.4, 0.1], [0.1, 0.4]]).unwrap();
        assert!(close(delta(&m).value(), 0.6));
        let same = JointModel::from_flat(3, 2, vec![1.0 / 6.0; 6]).unwrap();
        assert!(close(delta(&same).value(), 0.0));
        let sing = JointModel::from_rows(&[[0.2, 0.0, 0.0], [0.0, 0.3, 0.0], [0.0, 0.0, 0.5]]).unwrap();
        assert!(close(delta(&sing).value(), 2.0));
    }

    #[test]
    fn delta_of_profile_examples() {
        let p = PosteriorProfile::new(vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]).unwrap();
        assert!(close(delta_of_profile(&p).value(), 1.0));
        assert!(close(delta_of_profile(&PosteriorProfile::uniform(5).unwrap()).value(), 0.0));
        let e = PosteriorProfile::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(close(delta_of_profile(&e).value(), 3.0));
    }

    #[test]
    fn bound_examples() {
        assert!(close(lower_bound(3, 1.0).unwrap(), 1.0 / 3.0));
        for k in 2..10 {
            let kf = k as f64;
            assert!(close(lower_bound(k, 0.0).unwrap(), 1.0 - 1.0 / kf));
            assert!(close(lower_bound(k, kf - 1.0).unwrap(), 0.0));
            assert!(close(upper_bound(k, kf - 1.0).unwrap(), 0.0));
            assert!(close(upper_bound_simpl(k, kf - 1.0).unwrap(), 0.0));
            for m in 0..k {
                let mf = m as f64;
                assert!(close(upper_bound(k, mf).unwrap(), 1.0 - 1.0 / (kf - mf)));
                assert!(close(upper_bound_simpl(k, mf).unwrap(), 1.0 - 1.0 / (kf - mf)));
            }
        }
        assert!(close(upper_bound(3, 1.0).unwrap(), 0.5));
        assert!(close(upper_bound(2, 0.6).unwrap(), 0.2));
        assert!(close(upper_bound_simpl(2, 0.6).unwrap(), 2.0 / 7.0));
        assert!(close(upper_bound(5, 4.0).unwrap(), 0.0));
    }

    #[test]
    fn range_errors() {
        assert!(matches!(lower_bound(3, -0.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(upper_bound(3, 2.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(upper_bound_simpl(3, f64::NAN), Err(Error::OutOfRange { .. })));
        assert!(matches!(extremal_low_profile(1, 0.0), Err(Error::TooFewClasses { .. })));
    }

    #[test]
    fn snapping_keeps_upper_continuous() {
        let exact = upper_bound(6, 2.0).unwrap();
        let noisy = upper_bound(6, 2.0 + 4.0 * f64::EPSILON).unwrap();
        assert!(close(exact, noisy));
        assert_eq!(snapped_ceil(2.0000000000000004), 2.0);
        assert_eq!(snapped_ceil(2.000001), 3.0);
        assert_eq!(snapped_ceil(1.9999999999), 2.0);
    }

    #[test]
    fn extremal_examples() {
        let lo = extremal_low_profile(3, 1.0).unwrap();
        let want = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
        assert!(lo.as_slice().iter().zip(want).all(|(a, b)| close(*a, b)));
        let hi = extremal_high_profile(3, 1.0).unwrap();
        assert!(hi.as_slice().iter().zip([0.5, 0.5, 0.0]).all(|(a, b)| close(*a, b)));
        for k in 2..7 {
            let u = 1.0 / k as f64;
            for p in [extremal_low_profile(k, 0.0).unwrap(), extremal_high_profile(k, 0.0).unwrap()] {
                assert!(p.as_slice().iter().all(|&v| close(v, u)));
            }
            let d = (k - 1) as f64;
            for p in [extremal_low_profile(k, d).unwrap(), extremal_high_profile(k, d).unwrap()] {
                assert!(close(p.as_slice()[0], 1.0));
                assert!(p.as_slice()[1..].iter().all(|&v| close(v, 0.0)));
            }
        }
    }

    #[test]
    fn extremal_profiles_attain_bounds() {
        for k in 2..9 {
            for i in 0..=(100 * (k - 1)) {
                let d = i as f64 / 100.0;
                let lo = extremal_low_profile(k, d).unwrap();
                assert!(close(delta_of_profile(&lo).value(), d));
                assert!(close(1.0 - lo.max(), lower_bound(k, d).unwrap()));
                let hi = extremal_high_profile(k, d).unwrap();
                assert!(close(delta_of_profile(&hi).value(), d), "k={k} d={d} {hi:?}");
                assert!(close(1.0 - hi.max(), upper_bound(k, d).unwrap()));
            }
        }
    }
}
