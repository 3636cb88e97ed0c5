use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use secdist::exactla::{Backend, Field, Matrix, Rational};
use secdist::model::SwitchingSystem;
use secdist::simulate::{gen_attack, gen_input, gen_state, simulate, DEFAULT_MAGNITUDE};

use crate::common::{out, write_text, BudgetArgs, ModelArgs, Outcome, DEFAULT_SEED};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Mode id to simulate.
    #[arg(long)]
    pub mode: String,

    /// Number of samples; defaults to 2n.
    #[arg(long)]
    pub tau: Option<usize>,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Attacked sensors and actuators (default: no attack).
    #[command(flatten)]
    pub budgets: BudgetArgs,

    /// Bound on attack values.
    #[arg(long, default_value_t = DEFAULT_MAGNITUDE)]
    pub magnitude: f64,

    /// Bound on the random initial state and input entries.
    #[arg(long, default_value_t = 10.0)]
    pub scale: f64,

    /// Zero input.
    #[arg(long)]
    pub autonomous: bool,

    /// JSON-lines trace output; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: SimulateArgs) -> Result<Outcome> {
    let file = args.model.file()?;
    match args.model.backend(&file) {
        Backend::Exact => sim::<Rational>(&args, &args.model.system(&file)?),
        Backend::Float => sim::<f64>(&args, &args.model.system(&file)?),
    }
}

fn sim<T: Field>(args: &SimulateArgs, sys: &SwitchingSystem<T>) -> Result<Outcome> {
    let mode = sys.mode(&args.mode)?;
    let (n, m, p) = mode.dims();
    let tau = args.tau.unwrap_or(sys.horizon());
    let sigma = args.budgets.sigma.unwrap_or(0);
    let rho = args.budgets.rho.unwrap_or(0);
    let x0 = gen_state::<T>(n, args.scale, args.seed)?;
    let u = if args.autonomous {
        Matrix::zeros(tau, m)
    } else {
        gen_input::<T>(m, tau, args.scale, args.seed)?
    };
    let (spec, attack) = gen_attack::<T>(p, m, sigma, rho, args.magnitude, tau, args.seed)?;
    let trace = simulate(mode, &x0, &u, &attack, tau)?;
    log::info!(
        "seed {}: sensors {} and actuators {} attacked",
        args.seed,
        spec.sensor_support,
        spec.actuator_support
    );
    let text = trace.to_json_lines();
    match &args.output {
        Some(path) => {
            write_text(path, &text).context("writing trace")?;
            eprintln!("seed {}: wrote {tau} samples of mode {} to {}", args.seed, mode.id, path.display());
        }
        None => out!("{text}"),
    }
    Ok(Outcome::Positive)
}
