//! Exhaustive rational check of the `Δ`-bounds on a simplex grid.
//!
//! Every profile with entries in `{0, 1/N, …, 1}` is enumerated and the
//! chain `L(δ) ≤ 1 - max a_i ≤ U(δ) ≤ U_simpl(δ)` is evaluated in exact
//! rational arithmetic, together with the characterization of when each of
//! the first two inequalities is an equality. The floating-point evaluators
//! of [`crate::delta`] are compared against the rational values on the way.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::delta::{self, DeltaValue};
use crate::error::{Error, Result};
use crate::model::PosteriorProfile;

type Q = Ratio<i128>;

/// Upper limit on the number of grid profiles.
pub const ORACLE_LIMIT: u128 = 10_000_000;

/// Agreement required between the float evaluators and the rational values.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Which relation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Side {
    /// `L(δ) ≤ 1 - max a_i`.
    Lower,
    /// `1 - max a_i ≤ U(δ)`.
    Upper,
    /// `U(δ) ≤ U_simpl(δ)`, strict off the integers.
    Simpl,
    /// Equality with `L` exactly at permutations of the low extremal profile.
    LowerEquality,
    /// Equality with `U` exactly at permutations of the high extremal profile.
    UpperEquality,
    /// A floating-point evaluator disagrees with the rational value.
    Float,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Violation {
    pub profile: Vec<f64>,
    pub delta: f64,
    pub value: f64,
    pub bound: f64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleReport {
    pub k: usize,
    pub grid: u32,
    pub checked: u64,
    /// Grid points with `1 - max a_i = L(δ)`.
    pub lower_equalities: u64,
    /// Grid points with `1 - max a_i = U(δ)`.
    pub upper_equalities: u64,
    /// In lexicographic order of the enumerated compositions.
    pub violations: Vec<Violation>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn int(v: i128) -> Q {
    Q::from_integer(v)
}

/// Number of compositions of `grid` into `k` nonnegative parts.
pub fn grid_size(k: usize, grid: u32) -> u128 {
    // C(grid + k - 1, k - 1), saturating
    let (top, r) = (grid as u128 + k as u128 - 1, k as u128 - 1);
    let mut c: u128 = 1;
    for i in 0..r {
        c = match c.checked_mul(top - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

fn lower_q(k: i128, d: Q) -> Q {
    int(1) - (int(1) + d) / int(k)
}

fn upper_q(k: i128, d: Q) -> Q {
    let c = d.ceil();
    int(1) - (int(k + 1) + d - c * int(2)) / ((int(k) - c) * (int(k + 1) - c))
}

fn simpl_q(k: i128, d: Q) -> Q {
    int(1) - int(1) / (int(k) - d)
}

fn low_extremal_q(k: i128, d: Q) -> Vec<Q> {
    let mut a = vec![int(1) / int(k) - d / int(k * (k - 1)); k as usize];
    a[0] = (int(1) + d) / int(k);
    a
}

fn high_extremal_q(k: i128, d: Q) -> Vec<Q> {
    let c = d.ceil();
    let ci = c.to_integer();
    let top = int(1) - upper_q(k, d);
    let mut a = vec![int(0); k as usize];
    for v in a.iter_mut().take((k - ci) as usize) {
        *v = top;
    }
    if ci >= 1 {
        a[(k - ci) as usize] += (c - d) / int(k + 1 - ci);
    }
    a
}

struct Checker {
    k: usize,
    grid: u32,
    report: OracleReport,
}

impl Checker {
    fn flag(&mut self, profile: &[Q], delta: Q, value: Q, bound: Q, side: Side) {
        self.report.violations.push(Violation {
            profile: profile.iter().map(|&q| to_f64(q)).collect(),
            delta: to_f64(delta),
            value: to_f64(value),
            bound: to_f64(bound),
            side,
        });
    }

    fn visit(&mut self, counts: &[u32]) {
        let k = self.k as i128;
        let a: Vec<Q> = counts.iter().map(|&c| Q::new(c as i128, self.grid as i128)).collect();
        let mut s = a.clone();
        s.sort_by(|x, y| y.cmp(x));
        let d: Q =
            s.iter().enumerate().map(|(i, &v)| v * int(k - 1 - 2 * i as i128)).fold(int(0), |acc, t| acc + t);
        let value = int(1) - s[0];
        let (lo, hi, simpl) = (lower_q(k, d), upper_q(k, d), simpl_q(k, d));

        if lo > value {
            self.flag(&a, d, value, lo, Side::Lower);
        }
        if value > hi {
            self.flag(&a, d, value, hi, Side::Upper);
        }
        if hi > simpl || (hi == simpl) != d.is_integer() {
            self.flag(&a, d, hi, simpl, Side::Simpl);
        }
        let at_low = value == lo;
        if at_low != (s == low_extremal_q(k, d)) {
            self.flag(&a, d, value, lo, Side::LowerEquality);
        }
        let at_high = value == hi;
        if at_high != (s == high_extremal_q(k, d)) {
            self.flag(&a, d, value, hi, Side::UpperEquality);
        }
        self.report.lower_equalities += at_low as u64;
        self.report.upper_equalities += at_high as u64;
        self.check_float(&a, d, value, lo, hi, simpl);
        self.report.checked += 1;
    }

    fn check_float(&mut self, a: &[Q], d: Q, value: Q, lo: Q, hi: Q, simpl: Q) {
        let close = |x: f64, q: Q| libm::fabs(x - to_f64(q)) <= FLOAT_TOLERANCE;
        let af: Vec<f64> = a.iter().map(|&q| to_f64(q)).collect();
        let ok = match PosteriorProfile::new(af) {
            Ok(p) => {
                let dv: DeltaValue = delta::delta_of_profile(&p);
                let ext_ok = |ext: Result<PosteriorProfile>, want: Vec<Q>| {
                    ext.map(|e| e.as_slice().iter().zip(want).all(|(&x, q)| close(x, q))).unwrap_or(false)
                };
                let k = self.k as i128;
                close(dv.value(), d)
                    && close(1.0 - p.max(), value)
                    && close(dv.lower(), lo)
                    && close(dv.upper(), hi)
                    && close(dv.upper_simpl(), simpl)
                    && ext_ok(delta::extremal_low_profile(self.k, dv.value()), low_extremal_q(k, d))
                    && ext_ok(delta::extremal_high_profile(self.k, dv.value()), high_extremal_q(k, d))
            }
            Err(_) => false,
        };
        if !ok {
            self.flag(a, d, value, hi, Side::Float);
        }
    }
}

/// Runs the rational check over all `C(N + k - 1, k - 1)` grid profiles.
pub fn simplex_grid_oracle(k: usize, grid: u32) -> Result<OracleReport> {
    if k < 2 {
        return Err(Error::TooFewClasses { k });
    }
    if grid == 0 {
        return Err(Error::BadParam("grid resolution must be positive"));
    }
    let size = grid_size(k, grid);
    if size > ORACLE_LIMIT {
        return Err(Error::TooLarge { size, limit: ORACLE_LIMIT });
    }
    let mut checker = Checker {
        k,
        grid,
        report: OracleReport {
            k,
            grid,
            checked: 0,
            lower_equalities: 0,
            upper_equalities: 0,
            violations: Vec::new(),
        },
    };
    // compositions in lexicographic order: counts[0] runs from 0 to grid
    let mut counts = vec![0u32; k];
    counts[k - 1] = grid;
    loop {
        checker.visit(&counts);
        // find the rightmost position before the last that can be increased
        let Some(pos) = (0..k - 1).rev().find(|&i| counts[i + 1..].iter().any(|&c| c > 0)) else {
            break;
        };
        counts[pos] += 1;
        let rest: u32 = counts[pos + 1..].iter().sum::<u32>() - 1;
        counts[pos + 1..].iter_mut().for_each(|c| *c = 0);
        counts[k - 1] = rest;
    }
    Ok(checker.report)
}
