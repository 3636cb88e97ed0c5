use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use secdist::estimate::{consistent_modes, EstimateOptions, ModeEstimate};
use secdist::exactla::{Backend, Field, Rational};
use secdist::model::SwitchingSystem;
use secdist::simulate::read_json_lines;
use secdist::Error;
use serde_json::json;

use crate::common::{outln, write_json, BudgetArgs, ModelArgs, Outcome};

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// JSON-lines trace with τ = 2n samples.
    #[arg(long)]
    pub trace: PathBuf,

    #[command(flatten)]
    pub budgets: BudgetArgs,

    /// Float backend residual tolerance, relative to the trace norm.
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,

    /// Write the JSON result here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: EstimateArgs) -> Result<Outcome> {
    let file = args.model.file()?;
    match args.model.backend(&file) {
        Backend::Exact => est::<Rational>(&args, &args.model.system(&file)?),
        Backend::Float => est::<f64>(&args, &args.model.system(&file)?),
    }
}

fn est<T: Field>(args: &EstimateArgs, sys: &SwitchingSystem<T>) -> Result<Outcome> {
    let text = fs::read_to_string(&args.trace).with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = read_json_lines::<T>(&text).with_context(|| format!("parsing {}", args.trace.display()))?;
    let (sigma, rho) = args.budgets.resolve(sys)?;
    let opts = EstimateOptions { rel_tol: args.rel_tol };
    let results = consistent_modes(sys, &trace.y, &trace.u, sigma, rho, &opts)?;
    let consistent: Vec<String> = results.iter().filter(|r| r.consistent).map(|r| r.mode.clone()).collect();
    for r in &results {
        outln!(
            "mode {:<6} {}  residual {:.3e}{}",
            r.mode,
            if r.consistent { "consistent  " } else { "inconsistent" },
            r.residual,
            r.best_support
                .as_ref()
                .filter(|_| r.consistent)
                .map(|s| format!("  (sensors {} ignored, actuators {} attacked)", s.gamma, s.delta))
                .unwrap_or_default()
        );
    }
    if consistent.is_empty() {
        return Err(Error::NoConsistentMode.into());
    }
    let unique = consistent.len() == 1;
    let estimate = ModeEstimate {
        unique,
        mode: unique.then(|| consistent[0].clone()),
        consistent,
        caveat: (sys.m() > 0).then(|| "input genericity is assumed, not certified".to_string()),
    };
    if let Some(path) = &args.output {
        write_json(
            path,
            &json!({
                "model": args.model.source(),
                "trace": args.trace.display().to_string(),
                "sigma": sigma,
                "rho": rho,
                "results": results,
                "estimate": estimate,
            }),
        )?;
    }
    match &estimate.mode {
        Some(id) => outln!("unique consistent mode: {id}"),
        None => outln!("ambiguous: modes {} are all consistent", estimate.consistent.join(", ")),
    }
    Ok(Outcome::from_bool(unique))
}
