use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use misclass::io::{load_model, save_model, Format};
use misclass::sweep::{self, Fig3Model, FIG2_P_STARS};
use misclass::table::{report_cells, Cell, OutputFormat, Table};
use misclass::verify::{self, Suite, VerifyConfig};
use misclass::{CliError, Result};
use misclass_core::families::{comp_lo_in_domain, FamilySpec};
use misclass_core::PosteriorProfile;

#[derive(Parser)]
#[command(name = "misclass", version, about = "Bayes error and its bounds for finite classification models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full bound report for a joint model file or a family spec.
    #[command(group(ArgGroup::new("input").required(true).args(["model", "family"])))]
    Report {
        /// Joint model, CSV or `.json`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Family spec as JSON, e.g. '{"family":"exponential","k":8,"q":0.3}'.
        #[arg(long)]
        family: Option<String>,
    },
    /// L, U and U_simpl over the Δ range.
    Fig1 {
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.01)]
        delta_step: f64,
    },
    /// Three-class sweep over ε for each Bayes error.
    Fig2 {
        /// Comma-separated Bayes errors.
        #[arg(long = "p", value_delimiter = ',', default_values_t = FIG2_P_STARS)]
        p_stars: Vec<f64>,
        /// Points per ε range.
        #[arg(long, default_value_t = 200)]
        eps_points: usize,
    },
    /// Binomial and exponential families over q.
    Fig3 {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Fig3Model::Binomial, Fig3Model::Exponential])]
        models: Vec<Fig3Model>,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 8])]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 0.005)]
        q_step: f64,
    },
    /// `d_k(ℓ)` table for the lower-bound comparison.
    CompareLo {
        #[arg(long, default_value_t = 3)]
        k_min: usize,
        #[arg(long, default_value_t = 50)]
        k_max: usize,
    },
    /// U(Δ) against U_FM(H) on the high-entropy profiles.
    CompareHi {
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        #[arg(long, default_value_t = 100)]
        k_max: usize,
    },
    /// Randomized and exhaustive self-checks.
    Verify {
        /// Suites to run, all by default.
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random models for the sandwich suite.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Random models for the Bayes enumeration suite.
        #[arg(long, default_value_t = 1_000)]
        bayes_samples: usize,
    },
    /// Rewrite a joint model file in the format implied by the output path.
    Convert { input: PathBuf, output: PathBuf },
}

fn emit(table: &Table, cli: &Cli) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let mut w = BufWriter::new(file);
            table.write(cli.format, &mut w)?;
            w.flush().map_err(|source| CliError::Io { path: path.clone(), source })
        }
        None => table.write(cli.format, io::stdout().lock()),
    }
}

fn report_profile(model: Option<&Path>, family: Option<&str>) -> Result<misclass_core::BoundsReport> {
    if let Some(path) = model {
        let m = load_model(path, Format::from_path(path))?;
        let r = misclass_core::BoundsReport::from_model(&m);
        let bad = r.violations(misclass_core::report::SANDWICH_SLACK);
        if !bad.is_empty() {
            return Err(CliError::Verification(format!("{} violated", bad.join(", "))));
        }
        return Ok(r);
    }
    let text = family.expect("clap enforces one input");
    let spec: FamilySpec = serde_json::from_str(text)?;
    if let FamilySpec::CompLo { k, ell } = spec {
        if !comp_lo_in_domain(k, ell) {
            eprintln!(
                "warning: (k, ell) = ({k}, {ell}) is outside the range where L beats L_FM is guaranteed"
            );
        }
    }
    let profile: PosteriorProfile = spec.profile()?;
    sweep::checked_report(&profile)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Report { model, family } => {
            let r = report_profile(model.as_deref(), family.as_deref())?;
            let mut t = Table::with_report(Vec::<String>::new());
            t.push(report_cells(&r));
            emit(&t, cli)
        }
        Command::Fig1 { k, delta_step } => emit(&sweep::fig1(*k, *delta_step)?, cli),
        Command::Fig2 { p_stars, eps_points } => emit(&sweep::fig2(p_stars, *eps_points)?, cli),
        Command::Fig3 { models, ks, q_step } => emit(&sweep::fig3(models, ks, *q_step)?, cli),
        Command::CompareLo { k_min, k_max } => emit(&sweep::compare_lo(*k_min, *k_max)?, cli),
        Command::CompareHi { nu, k_max } => {
            let scan = sweep::compare_hi(*nu, *k_max)?;
            match scan.crossover {
                Some(k) => eprintln!(
                    "crossover: U > U_FM first at k = {k}; holds from k = {} through {k_max}",
                    scan.holds_from.map_or("-".into(), |h| h.to_string())
                ),
                None => eprintln!("crossover: none up to k = {k_max}"),
            }
            if scan.crossover.is_some_and(|k| k <= 9) {
                eprintln!("note: crossover at k <= 9");
            }
            emit(&scan.table, cli)
        }
        Command::Verify { suite, seed, samples, bayes_samples } => {
            let suites = if suite.is_empty() { Suite::ALL.to_vec() } else { suite.clone() };
            let cfg = VerifyConfig {
                seed: *seed,
                sandwich_models: *samples,
                bayes_models: *bayes_samples,
                ..VerifyConfig::default()
            };
            let outcomes = verify::run(&suites, &cfg)?;
            let mut t = Table::new(["suite", "checked", "failed", "passed", "first_failure"]);
            for o in &outcomes {
                let name = serde_json::to_value(o.suite)?;
                t.push(vec![
                    Cell::Text(name.as_str().unwrap_or_default().to_owned()),
                    Cell::Int(o.checked as i64),
                    Cell::Int(o.failed as i64),
                    o.passed().into(),
                    o.failures.first().map_or(Cell::Empty, |f| Cell::Text(f.clone())),
                ]);
            }
            emit(&t, cli)?;
            match outcomes.iter().find(|o| !o.passed()) {
                Some(o) => Err(CliError::Verification(format!(
                    "{:?}: {}",
                    o.suite,
                    o.failures.first().map_or("", String::as_str)
                ))),
                None => Ok(()),
            }
        }
        Command::Convert { input, output } => {
            let m = load_model(input, Format::from_path(input))?;
            save_model(&m, output, Format::from_path(output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
