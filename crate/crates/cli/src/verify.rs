//! Randomized and exhaustive self-checks behind `misclass verify`.

use misclass_core::oracle::{simplex_grid_oracle, OracleReport};
use misclass_core::report::SANDWICH_SLACK;
use misclass_core::{
    bayes_error, brute_force_bayes_error, delta_of_profile, ep_counterexample_check, extremal_high_profile,
    extremal_low_profile, lower_bound, upper_bound, BoundsReport, JointModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Result;

/// Failures kept per suite.
const MAX_REPORTED: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Sandwich,
    Oracle,
    Extremal,
    Bayes,
    Counterexample,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Sandwich, Suite::Oracle, Suite::Extremal, Suite::Bayes, Suite::Counterexample];
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub sandwich_models: usize,
    pub bayes_models: usize,
    pub oracle_grids: Vec<(usize, u32)>,
    /// Spacing of the `d` grid for the extremal round trips.
    pub extremal_step: f64,
    pub max_k: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sandwich_models: 100_000,
            bayes_models: 1_000,
            oracle_grids: vec![(2, 50), (3, 30), (4, 15)],
            extremal_step: 0.01,
            max_k: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub checked: u64,
    pub failed: u64,
    /// First few failures, human readable.
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: Suite) -> Self {
        Self { suite, checked: 0, failed: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Joint matrix with independent uniform entries, normalized.
pub fn random_model<R: Rng>(rng: &mut R, k: usize, n: usize) -> JointModel {
    loop {
        let raw: Vec<f64> = (0..k * n).map(|_| rng.random::<f64>()).collect();
        let s: f64 = raw.iter().sum();
        if s > 0.0 {
            let w = raw.into_iter().map(|v| v / s).collect();
            return JointModel::from_flat(k, n, w).expect("normalized random model");
        }
    }
}

pub fn sandwich_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Sandwich);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.sandwich_models {
        let k = rng.random_range(2..=cfg.max_k);
        let n = rng.random_range(1..=6);
        let m = random_model(&mut rng, k, n);
        let r = BoundsReport::from_model(&m);
        let bad = r.violations(SANDWICH_SLACK);
        out.record(bad.is_empty(), || format!("{bad:?} on {:?}: {r:?}", m.as_flat()));
    }
    out
}

pub fn bayes_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    const MAX_CLASSIFIERS: u64 = 100_000;
    let mut out = SuiteOutcome::new(Suite::Bayes);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    for _ in 0..cfg.bayes_models {
        let k = rng.random_range(2..=cfg.max_k);
        let max_n = (1..=6u32).take_while(|&n| (k as u64).pow(n) <= MAX_CLASSIFIERS).last().unwrap_or(1);
        let n = rng.random_range(1..=max_n as usize);
        let m = random_model(&mut rng, k, n);
        let fast = bayes_error(&m);
        match brute_force_bayes_error(&m) {
            Ok(slow) => out.record((fast - slow).abs() <= 1e-12, || {
                format!("bayes_error {fast} vs enumeration {slow} on {:?}", m.as_flat())
            }),
            Err(e) => out.record(false, || e.to_string()),
        }
    }
    out
}

pub fn extremal_suite(cfg: &VerifyConfig) -> SuiteOutcome {
    const TOL: f64 = 1e-12;
    let mut out = SuiteOutcome::new(Suite::Extremal);
    for k in 2..=cfg.max_k {
        let points = (((k - 1) as f64 / cfg.extremal_step).round() as usize).max(1);
        for i in 0..=points {
            let d = (i * (k - 1)) as f64 / points as f64;
            let pairs = [
                ("low", extremal_low_profile(k, d), lower_bound(k, d)),
                ("high", extremal_high_profile(k, d), upper_bound(k, d)),
            ];
            for (side, profile, bound) in pairs {
                let ok = match (&profile, &bound) {
                    (Ok(p), Ok(b)) => {
                        let r = BoundsReport::from_profile(p);
                        (delta_of_profile(p).value() - d).abs() <= TOL
                            && (1.0 - p.max() - b).abs() <= TOL
                            && (r.delta - d).abs() <= TOL
                            && (r.p_star - b).abs() <= TOL
                    }
                    _ => false,
                };
                out.record(ok, || format!("{side} profile k={k} d={d}: {profile:?} bound {bound:?}"));
            }
        }
    }
    out
}

pub fn oracle_suite(cfg: &VerifyConfig) -> Result<(SuiteOutcome, Vec<OracleReport>)> {
    let mut out = SuiteOutcome::new(Suite::Oracle);
    let mut reports = Vec::new();
    for &(k, grid) in &cfg.oracle_grids {
        let r = simplex_grid_oracle(k, grid)?;
        out.checked += r.checked;
        out.failed += r.violations.len() as u64;
        for v in r.violations.iter().take(MAX_REPORTED.saturating_sub(out.failures.len())) {
            out.failures.push(format!("k={k} N={grid}: {v:?}"));
        }
        reports.push(r);
    }
    Ok((out, reports))
}

pub fn counterexample_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new(Suite::Counterexample);
    let r = ep_counterexample_check();
    for c in &r.checks {
        out.record(c.passed, || format!("{} ({r:?})", c.name));
    }
    out
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<SuiteOutcome>> {
    suites
        .iter()
        .map(|s| {
            Ok(match s {
                Suite::Sandwich => sandwich_suite(cfg),
                Suite::Oracle => oracle_suite(cfg)?.0,
                Suite::Extremal => extremal_suite(cfg),
                Suite::Bayes => bayes_suite(cfg),
                Suite::Counterexample => counterexample_suite(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            sandwich_models: 500,
            bayes_models: 50,
            oracle_grids: vec![(3, 12)],
            extremal_step: 0.1,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn all_suites_pass_small() {
        for o in run(&Suite::ALL, &small()).unwrap() {
            assert!(o.passed(), "{o:?}");
            assert!(o.checked > 0);
        }
    }

    #[test]
    fn oracle_counts() {
        let (o, reports) = oracle_suite(&small()).unwrap();
        assert_eq!(o.checked, 91);
        assert_eq!(reports[0].violations.len(), 0);
    }

    #[test]
    fn deterministic_given_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_model(&mut a, 3, 4), random_model(&mut b, 3, 4));
    }
}
