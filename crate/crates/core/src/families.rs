//! Parametric profile families and the "pure" model construction.
//!
//! In a pure model every observation's posterior is a permutation of one
//! fixed profile `(a_1, …, a_k)`, so `p*`, `Δ` and `H` are those of the
//! profile itself. All profiles here are emitted in nonincreasing order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{JointModel, MassPolicy, PosteriorProfile};
use crate::special::q_function;

/// Largest `m` accepted by [`binomial_profile`] (`k = 2^m`).
pub const MAX_BINOMIAL_M: u32 = 24;

const DOMAIN_SLACK: f64 = 1e-12;

fn sorted(mut a: Vec<f64>) -> Result<PosteriorProfile> {
    a.sort_by(|x, y| y.total_cmp(x));
    PosteriorProfile::new(a)
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::BadParam("q must lie in (0, 1)"))
    }
}

/// Builds `w[perm_x(i)][x] = weights[x] · a_i`.
///
/// `perms[x][i]` is the class that receives `a_i` at observation `x`.
pub fn pure_model(a: &PosteriorProfile, weights: &[f64], perms: &[Vec<usize>]) -> Result<JointModel> {
    let k = a.k();
    let n = weights.len();
    if n == 0 || weights.iter().any(|&v| !v.is_finite() || v <= 0.0) {
        return Err(Error::BadWeights);
    }
    if libm::fabs(weights.iter().sum::<f64>() - 1.0) > crate::model::MASS_TOLERANCE {
        return Err(Error::BadWeights);
    }
    if perms.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: perms.len() });
    }
    let mut w = vec![0.0; k * n];
    let mut seen = vec![false; k];
    for (x, perm) in perms.iter().enumerate() {
        seen.iter_mut().for_each(|s| *s = false);
        if perm.len() != k {
            return Err(Error::BadPermutation { x, k });
        }
        for (i, &y) in perm.iter().enumerate() {
            if y >= k || seen[y] {
                return Err(Error::BadPermutation { x, k });
            }
            seen[y] = true;
            w[y * n + x] = weights[x] * a.as_slice()[i];
        }
    }
    JointModel::from_flat_with(k, n, w, MassPolicy::Renormalize)
}

/// `k = 2^m` entries `(1-q)^j q^(m-j)`, each with multiplicity `C(m, j)`.
pub fn binomial_profile(m: u32, q: f64) -> Result<PosteriorProfile> {
    if m == 0 || m > MAX_BINOMIAL_M {
        return Err(Error::BadParam("binomial order m must be in 1..=24"));
    }
    check_q(q)?;
    let mut a = Vec::with_capacity(1 << m);
    let mut mult: u64 = 1; // C(m, j) for j = 0, 1, …
    for j in 0..=m {
        let v = libm::pow(1.0 - q, j as f64) * libm::pow(q, (m - j) as f64);
        a.extend(core::iter::repeat_n(v, mult as usize));
        mult = mult * u64::from(m - j) / u64::from(j + 1);
    }
    sorted(a)
}

/// `a_i = (1-q)^(i-1) q^(k-i) / c_q` for `i = 1..k`.
pub fn exponential_profile(k: usize, q: f64) -> Result<PosteriorProfile> {
    if k < 2 {
        return Err(Error::TooFewClasses { k });
    }
    check_q(q)?;
    let terms: Vec<f64> =
        (0..k).map(|i| libm::pow(1.0 - q, i as f64) * libm::pow(q, (k - 1 - i) as f64)).collect();
    // direct summation; the closed form ((1-q)^k - q^k)/(1-2q) cancels near q = 1/2
    let c: f64 = terms.iter().sum();
    sorted(terms.into_iter().map(|t| t / c).collect())
}

/// `(1-p, p-ε, ε)` for `p ∈ [0, 2/3]` and `(2p-1)₊ ≤ ε ≤ p/2`; its Bayes
/// error is `p`.
pub fn three_class_profile(p: f64, eps: f64) -> Result<PosteriorProfile> {
    if !(-DOMAIN_SLACK..=2.0 / 3.0 + DOMAIN_SLACK).contains(&p) {
        return Err(Error::OutOfDomain("p must lie in [0, 2/3]"));
    }
    let lo = (2.0 * p - 1.0).max(0.0);
    if !(eps >= lo - DOMAIN_SLACK && eps <= p / 2.0 + DOMAIN_SLACK) {
        return Err(Error::OutOfDomain("eps must lie in [(2p-1)+, p/2]"));
    }
    let eps = eps.clamp(lo, (p / 2.0).max(lo));
    sorted(vec![1.0 - p, (p - eps).max(0.0), eps.max(0.0)])
}

/// `(ℓ, k)` pairs covered by the lower-bound comparison: `ℓ ≥ 2` in
/// `{k-3, k-2, k-1}`, or `ℓ = k-4` when `6 ≤ k ≤ 9`.
pub fn comp_lo_in_domain(k: usize, ell: usize) -> bool {
    k >= 3 && ell >= 2 && ell < k && (ell + 3 >= k || ((6..=9).contains(&k) && ell + 4 == k))
}

/// All `ℓ` with [`comp_lo_in_domain`]`(k, ℓ)`, ascending.
pub fn comp_lo_ells(k: usize) -> Vec<usize> {
    (2..k).filter(|&l| comp_lo_in_domain(k, l)).collect()
}

/// Uniform mass on the first `ℓ` classes.
#[derive(Debug, Clone, PartialEq)]
pub struct CompLo {
    pub profile: PosteriorProfile,
    /// Whether `(k, ℓ)` is a pair for which `L(Δ) > L_FM(H)` is guaranteed.
    pub in_domain: bool,
}

/// `a_i = 1/ℓ` for `i ≤ ℓ`, zero otherwise; `Δ = k - ℓ`, `H = ln ℓ`.
pub fn comp_lo_profile(k: usize, ell: usize) -> Result<CompLo> {
    if k < 3 {
        return Err(Error::BadParam("k must be at least 3"));
    }
    if ell < 2 || ell > k {
        return Err(Error::BadParam("ell must lie in 2..=k"));
    }
    let mut a = vec![0.0; k];
    a[..ell].iter_mut().for_each(|v| *v = 1.0 / ell as f64);
    Ok(CompLo { profile: PosteriorProfile::new(a)?, in_domain: comp_lo_in_domain(k, ell) })
}

/// `a_1 = 1 - (ν-1)/k`, `a_i = (ν-1)/(k(k-1))` for `i ≥ 2`; `Δ = k - ν`,
/// `p* = (ν-1)/k`.
pub fn comp_hi_profile(k: usize, nu: f64) -> Result<PosteriorProfile> {
    if !nu.is_finite() || nu <= 1.0 {
        return Err(Error::BadParam("nu must exceed 1"));
    }
    if k < 2 || (k as f64) <= nu {
        return Err(Error::BadParam("k must exceed nu"));
    }
    let kf = k as f64;
    let mut a = vec![(nu - 1.0) / (kf * (kf - 1.0)); k];
    a[0] = 1.0 - (nu - 1.0) / kf;
    PosteriorProfile::new(a)
}

/// Bit error probability `q = Q(√(2 E_b/N_0))` of QPSK over AWGN.
pub fn qpsk_q(eb_n0: f64) -> Result<f64> {
    if !eb_n0.is_finite() || eb_n0 <= 0.0 {
        return Err(Error::BadParam("Eb/N0 must be positive"));
    }
    Ok(q_function(libm::sqrt(2.0 * eb_n0)))
}

/// A named family and its parameters, e.g. `{"family":"exponential","k":8,"q":0.3}`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case", deny_unknown_fields))]
pub enum FamilySpec {
    Pure {
        a: Vec<f64>,
    },
    /// Either `m` or `k = 2^m`; either `q` or `eb_n0` (QPSK mapping).
    Binomial {
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        m: Option<u32>,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        k: Option<usize>,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        q: Option<f64>,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
        eb_n0: Option<f64>,
    },
    Exponential {
        k: usize,
        q: f64,
    },
    ThreeClass {
        p: f64,
        eps: f64,
    },
    CompLo {
        k: usize,
        ell: usize,
    },
    CompHi {
        k: usize,
        nu: f64,
    },
}

/// `m` with `2^m = k`.
pub fn binomial_order(k: usize) -> Result<u32> {
    if k >= 2 && k.is_power_of_two() {
        Ok(k.trailing_zeros())
    } else {
        Err(Error::BadParam("binomial k must be a power of two"))
    }
}

impl FamilySpec {
    pub fn profile(&self) -> Result<PosteriorProfile> {
        match *self {
            FamilySpec::Pure { ref a } => sorted(a.clone()),
            FamilySpec::Binomial { m, k, q, eb_n0 } => {
                let m = match (m, k) {
                    (Some(m), None) => m,
                    (None, Some(k)) => binomial_order(k)?,
                    (Some(m), Some(k)) if binomial_order(k)? == m => m,
                    _ => return Err(Error::BadParam("binomial needs exactly one consistent m or k")),
                };
                let q = match (q, eb_n0) {
                    (Some(q), None) => q,
                    (None, Some(snr)) => qpsk_q(snr)?,
                    _ => return Err(Error::BadParam("binomial needs exactly one of q, eb_n0")),
                };
                binomial_profile(m, q)
            }
            FamilySpec::Exponential { k, q } => exponential_profile(k, q),
            FamilySpec::ThreeClass { p, eps } => three_class_profile(p, eps),
            FamilySpec::CompLo { k, ell } => comp_lo_profile(k, ell).map(|c| c.profile),
            FamilySpec::CompHi { k, nu } => comp_hi_profile(k, nu),
        }
    }
}
