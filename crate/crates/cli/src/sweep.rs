//! Parameter sweeps behind the `fig*` and `compare-*` subcommands.
//!
//! Every row carrying a [`BoundsReport`] is checked against both sandwich
//! chains before it is added to a table.

use misclass_core::families::{
    binomial_order, binomial_profile, comp_hi_profile, comp_lo_ells, comp_lo_profile, exponential_profile,
    three_class_profile,
};
use misclass_core::report::SANDWICH_SLACK;
use misclass_core::{phi, BoundsReport, DeltaValue, PosteriorProfile};

use crate::table::{report_cells, Cell, Table};
use crate::{CliError, Result};

/// Bayes errors used for the three-class figure.
pub const FIG2_P_STARS: [f64; 6] = [0.01, 0.1, 0.3, 0.5, 0.6, 0.64];

/// Limit of `k · d_k(k - 3)` as `k → ∞`, `6 - 8 ln 2`.
pub fn tilde_d_limit() -> f64 {
    6.0 - 8.0 * std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fig3Model {
    Binomial,
    Exponential,
}

impl Fig3Model {
    fn name(self) -> &'static str {
        match self {
            Fig3Model::Binomial => "binomial",
            Fig3Model::Exponential => "exponential",
        }
    }

    pub fn profile(self, k: usize, q: f64) -> Result<PosteriorProfile> {
        Ok(match self {
            Fig3Model::Binomial => binomial_profile(binomial_order(k)?, q)?,
            Fig3Model::Exponential => exponential_profile(k, q)?,
        })
    }
}

/// Report for `profile`, failing if either sandwich chain is broken.
pub fn checked_report(profile: &PosteriorProfile) -> Result<BoundsReport> {
    let r = BoundsReport::from_profile(profile);
    let bad = r.violations(SANDWICH_SLACK);
    if bad.is_empty() {
        Ok(r)
    } else {
        Err(CliError::Verification(format!("{} violated for {:?}", bad.join(", "), profile.as_slice())))
    }
}

/// `count + 1` evenly spaced points from `lo` to `hi`, both ends exact.
fn linspace(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    (0..=count).map(move |i| if i == count { hi } else { lo + (hi - lo) * (i as f64 / count as f64) })
}

/// `L`, `U` and `U_simpl` over `Δ ∈ [0, k-1]`.
pub fn fig1(k: usize, delta_step: f64) -> Result<Table> {
    if k < 2 {
        return Err(misclass_core::Error::TooFewClasses { k }.into());
    }
    if !delta_step.is_finite() || delta_step <= 0.0 {
        return Err(misclass_core::Error::BadParam("delta step must be positive").into());
    }
    let span = (k - 1) as f64;
    let points = ((span / delta_step).round() as usize).max(1);
    let mut t = Table::new(["delta", "L", "U", "U_simpl"]);
    for i in 0..=points {
        // exact at every integer when the step divides 1
        let d = (i * (k - 1)) as f64 / points as f64;
        let dv = DeltaValue::new(k, d)?;
        t.push(vec![d.into(), dv.lower().into(), dv.upper().into(), dv.upper_simpl().into()]);
    }
    Ok(t)
}

/// Three-class profiles `(1-p, p-ε, ε)` over `ε ∈ [(2p-1)₊, p/2]` for each
/// `p` in `p_stars`.
pub fn fig2(p_stars: &[f64], eps_points: usize) -> Result<Table> {
    let mut t = Table::with_report(["p", "eps"]);
    for &p in p_stars {
        let lo = (2.0 * p - 1.0).max(0.0);
        let hi = p / 2.0;
        if !(0.0..=2.0 / 3.0 + 1e-12).contains(&p) || hi < lo - 1e-12 {
            return Err(misclass_core::Error::OutOfDomain("p must lie in [0, 2/3]").into());
        }
        let count = if hi - lo <= 1e-12 { 0 } else { eps_points.max(2) - 1 };
        for eps in linspace(lo, hi.max(lo), count) {
            let profile = three_class_profile(p, eps)?;
            let mut row = vec![Cell::Num(p), Cell::Num(eps)];
            row.extend(report_cells(&checked_report(&profile)?));
            t.push(row);
        }
    }
    Ok(t)
}

/// Binomial and exponential models over `q ∈ (0, 1/2]`.
pub fn fig3(models: &[Fig3Model], ks: &[usize], q_step: f64) -> Result<Table> {
    if !(q_step > 0.0 && q_step <= 0.5) {
        return Err(misclass_core::Error::BadParam("q step must lie in (0, 1/2]").into());
    }
    let points = ((0.5 / q_step).round() as usize).max(1);
    let mut t = Table::with_report(["model", "q"]);
    for &model in models {
        for &k in ks {
            for i in 1..=points {
                let q = i as f64 / (2 * points) as f64;
                let profile = model.profile(k, q)?;
                let mut row = vec![Cell::from(model.name()), Cell::Num(q)];
                row.extend(report_cells(&checked_report(&profile)?));
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// `d_k(ℓ) = Φ_k((ℓ-1)/k) - ln ℓ`; positive exactly when `L(Δ) > L_FM(H)`
/// on the uniform-on-`ℓ` profile.
pub fn d_k(k: usize, ell: usize) -> f64 {
    phi(k, (ell - 1) as f64 / k as f64).expect("(ℓ-1)/k ≤ 1 - 1/k") - (ell as f64).ln()
}

/// `k · d_k(k - 3)`.
pub fn tilde_d(k: usize) -> f64 {
    k as f64 * d_k(k, k - 3)
}

/// `d_k(ℓ)` and the two lower bounds for every `(k, ℓ)` in the comparison
/// domain with `k_min ≤ k ≤ k_max`.
pub fn compare_lo(k_min: usize, k_max: usize) -> Result<Table> {
    if k_min < 3 || k_max < k_min {
        return Err(misclass_core::Error::BadParam("need 3 <= k_min <= k_max").into());
    }
    let mut t = Table::new([
        "k",
        "ell",
        "delta",
        "entropy_nats",
        "L",
        "L_FM",
        "L_gt_L_FM",
        "d",
        "k_times_d",
        "limit",
    ]);
    for k in k_min..=k_max {
        for ell in comp_lo_ells(k) {
            let c = comp_lo_profile(k, ell)?;
            let r = checked_report(&c.profile)?;
            let d = d_k(k, ell);
            let (scaled, limit) = if ell + 3 == k {
                (Cell::Num(k as f64 * d), Cell::Num(tilde_d_limit()))
            } else {
                (Cell::Empty, Cell::Empty)
            };
            t.push(vec![
                k.into(),
                ell.into(),
                r.delta.into(),
                r.entropy_nats.into(),
                r.lower.into(),
                r.lower_fm.into(),
                (r.lower > r.lower_fm).into(),
                d.into(),
                scaled,
                limit,
            ]);
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HiScan {
    pub table: Table,
    /// Smallest scanned `k` with `U(Δ) > U_FM(H)`.
    pub crossover: Option<usize>,
    /// Smallest `k` from which `U(Δ) > U_FM(H)` holds up to `k_max`.
    pub holds_from: Option<usize>,
}

/// `U(Δ)` against `U_FM(H)` on the `ν`-profiles for `⌊ν⌋ + 1 ≤ k ≤ k_max`.
pub fn compare_hi(nu: f64, k_max: usize) -> Result<HiScan> {
    if !nu.is_finite() || nu <= 1.0 {
        return Err(misclass_core::Error::BadParam("nu must exceed 1").into());
    }
    let k_min = nu.floor() as usize + 1;
    if k_max < nu.ceil() as usize + 1 {
        return Err(misclass_core::Error::BadParam("k_max must be at least ceil(nu) + 1").into());
    }
    let mut t = Table::new(["k", "delta", "entropy_nats", "p_star", "U", "U_FM", "U_gt_U_FM"]);
    let mut crossover = None;
    let mut holds_from = None;
    for k in k_min..=k_max {
        let r = checked_report(&comp_hi_profile(k, nu)?)?;
        let better = r.upper > r.upper_fm;
        if better {
            crossover.get_or_insert(k);
            holds_from.get_or_insert(k);
        } else {
            holds_from = None;
        }
        t.push(vec![
            k.into(),
            r.delta.into(),
            r.entropy_nats.into(),
            r.p_star.into(),
            r.upper.into(),
            r.upper_fm.into(),
            better.into(),
        ]);
    }
    Ok(HiScan { table: t, crossover, holds_from })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn row_where<'a>(t: &'a Table, col: &str, value: f64) -> &'a [Cell] {
        let i = t.column_index(col).unwrap();
        t.rows.iter().find(|r| r[i].as_f64().is_some_and(|v| close(v, value))).unwrap()
    }

    #[test]
    fn fig1_rows() {
        let t = fig1(5, 0.01).unwrap();
        assert_eq!(t.rows.len(), 401);
        let first = &t.rows[0];
        for c in &first[1..] {
            assert!(close(c.as_f64().unwrap(), 0.8));
        }
        for c in &t.rows[400][1..] {
            assert!(close(c.as_f64().unwrap(), 0.0));
        }
        let two = row_where(&t, "delta", 2.0);
        assert!(close(two[2].as_f64().unwrap(), 2.0 / 3.0));
        assert!(close(two[3].as_f64().unwrap(), 2.0 / 3.0));
    }

    #[test]
    fn fig2_profiles() {
        let t = fig2(&[0.5, 0.01, 2.0 / 3.0], 11).unwrap();
        let eps = t.column("eps");
        let p = t.column("p");
        assert_eq!(p.iter().filter(|v| **v == Some(2.0 / 3.0)).count(), 1);
        assert!(eps.iter().any(|e| close(e.unwrap(), 0.25)));
        assert!(eps.iter().any(|e| close(e.unwrap(), 0.005)));
        for (p, ps) in p.iter().zip(t.column("p_star")) {
            assert!((p.unwrap() - ps.unwrap()).abs() < 1e-12);
        }
        assert!(fig2(&[0.7], 11).is_err());
    }

    #[test]
    fn fig3_rows() {
        let t = fig3(&[Fig3Model::Binomial, Fig3Model::Exponential], &[2, 4], 0.1).unwrap();
        assert_eq!(t.rows.len(), 2 * 2 * 5);
        let q = t.column("q");
        let ps = t.column("p_star");
        let k = t.column("k");
        let model_i = t.column_index("model").unwrap();
        for (i, row) in t.rows.iter().enumerate() {
            if row[model_i] == Cell::from("binomial") && k[i] == Some(4.0) && close(q[i].unwrap(), 0.2) {
                assert!(close(ps[i].unwrap(), 0.36));
            }
            if row[model_i] == Cell::from("exponential") && k[i] == Some(4.0) && close(q[i].unwrap(), 0.5) {
                assert!(close(ps[i].unwrap(), 0.75));
                assert!(close(t.column("U_FM")[i].unwrap(), 0.75));
            }
        }
        assert!(fig3(&[Fig3Model::Binomial], &[6], 0.1).is_err());
    }

    #[test]
    fn compare_lo_values() {
        let t = compare_lo(3, 12).unwrap();
        for d in t.column("d") {
            assert!(d.unwrap() > 0.0);
        }
        assert!(d_k(7, 7).abs() < 1e-15);
        assert!((tilde_d(6) - 0.446).abs() < 1e-3);
        let gt = t.column_index("L_gt_L_FM").unwrap();
        assert!(t.rows.iter().all(|r| r[gt] == Cell::Bool(true)));
    }

    #[test]
    fn compare_hi_scan() {
        let scan = compare_hi(2.0, 60).unwrap();
        for u in scan.table.column("U") {
            assert!(u.unwrap() >= 0.5 - 1e-12);
        }
        assert_eq!(scan.crossover, Some(7));
        assert_eq!(scan.holds_from, Some(7));
        assert!(compare_hi(1.0, 10).is_err());
        assert!(compare_hi(2.0, 2).is_err());
    }
}
