use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use secdist::disting::{pairwise_report, DecideOptions, Enumeration, PairwiseReport, ReportOptions};
use secdist::exactla::{Backend, Field, Rational};
use serde::Serialize;

use crate::common::{out, outln, write_json, BudgetArgs, ModelArgs, Outcome, DEFAULT_SEED};
use crate::table::{rank_table, verdict_lines};

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[command(flatten)]
    pub budgets: BudgetArgs,

    /// Ignore inputs and decide with the autonomous tests.
    #[arg(long)]
    pub autonomous: bool,

    /// Check every attack support instead of the deciding ones.
    #[arg(long)]
    pub exhaustive: bool,

    /// Rank tolerance for the float backend.
    #[arg(long)]
    pub rank_tol: Option<f64>,

    /// Recorded in the report; analysis itself is deterministic.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Write the JSON report here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(bound = "")]
struct AnalysisReport<'a, T: Field> {
    tool: &'static str,
    version: &'static str,
    model: String,
    backend: Backend,
    seed: u64,
    horizon: usize,
    modes: Vec<String>,
    notes: &'a [String],
    warnings: Vec<String>,
    #[serde(flatten)]
    report: &'a PairwiseReport<T>,
}

pub fn run(args: AnalyzeArgs) -> Result<Outcome> {
    let file = args.model.file()?;
    match args.model.backend(&file) {
        Backend::Exact => analyze::<Rational>(&args, &args.model.system(&file)?),
        Backend::Float => analyze::<f64>(&args, &args.model.system(&file)?),
    }
}

fn analyze<T: Field>(args: &AnalyzeArgs, sys: &secdist::model::SwitchingSystem<T>) -> Result<Outcome> {
    let (sigma, rho) = args.budgets.resolve(sys)?;
    let opts = ReportOptions {
        sigma,
        rho,
        autonomous: args.autonomous,
        decide: DecideOptions {
            enumeration: if args.exhaustive {
                Enumeration::Exhaustive
            } else {
                Enumeration::Pruned
            },
            tol: args.rank_tol,
        },
    };
    let report = pairwise_report(sys, &opts)?;
    let full = AnalysisReport {
        tool: "secdist",
        version: env!("CARGO_PKG_VERSION"),
        model: args.model.source(),
        backend: T::BACKEND,
        seed: args.seed,
        horizon: sys.horizon(),
        modes: sys.modes.iter().map(|m| m.id.clone()).collect(),
        notes: &sys.notes,
        warnings: sys.warnings(),
        report: &report,
    };
    if let Some(path) = &args.output {
        write_json(path, &full)?;
    }
    outln!("model {}  backend {}  σ = {sigma}  ρ = {rho}  seed {}", full.model, T::BACKEND, args.seed);
    out!("{}", rank_table(&report));
    outln!();
    out!("{}", verdict_lines(&report));
    outln!(
        "mode reconstructable under the requested budgets: {}",
        if report.reconstructable { "yes" } else { "no" }
    );
    Ok(Outcome::from_bool(report.reconstructable))
}
