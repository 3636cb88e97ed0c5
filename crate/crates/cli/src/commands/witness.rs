use std::path::PathBuf;

use anyhow::{ensure, Result};
use clap::Args;
use secdist::disting::{sigma_secure_autonomous, DecideOptions};
use secdist::exactla::{Backend, Field, Rational};
use secdist::model::{AugmentedPair, SwitchingSystem};
use secdist::simulate::replay_witness;

use crate::common::{outln, write_json, write_text, ModelArgs, Outcome};

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// The two mode ids.
    #[arg(long, num_args = 2, value_names = ["I", "J"])]
    pub pair: Vec<String>,

    /// Sensor attack budget σ (overrides the model).
    #[arg(long)]
    pub sigma: Option<usize>,

    /// Directory for `witness.json` and the two trace files.
    #[arg(short, long, default_value = ".")]
    pub output_dir: PathBuf,
}

pub fn run(args: WitnessArgs) -> Result<Outcome> {
    let file = args.model.file()?;
    match args.model.backend(&file) {
        Backend::Exact => wit::<Rational>(&args, &args.model.system(&file)?),
        Backend::Float => wit::<f64>(&args, &args.model.system(&file)?),
    }
}

fn wit<T: Field>(args: &WitnessArgs, sys: &SwitchingSystem<T>) -> Result<Outcome> {
    let (si, sj) = (sys.mode(&args.pair[0])?, sys.mode(&args.pair[1])?);
    let sigma = args.sigma.unwrap_or(sys.sigma);
    let verdict = sigma_secure_autonomous(si, sj, sigma, &DecideOptions::default())?;
    let Some(witness) = &verdict.witness else {
        outln!(
            "modes {} and {} are {sigma}-securely distinguishable: no witness exists",
            si.id, sj.id
        );
        return Ok(Outcome::Negative);
    };
    let pair = AugmentedPair::nominal(si, sj)?;
    let (ti, tj) = replay_witness(&pair, witness)?;
    ensure!(ti.y == tj.y, "replayed outputs differ; witness is invalid");
    let dir = &args.output_dir;
    write_json(&dir.join("witness.json"), &verdict)?;
    let path_i = dir.join(format!("trace_{}.jsonl", si.id));
    let path_j = dir.join(format!("trace_{}.jsonl", sj.id));
    write_text(&path_i, &ti.to_json_lines())?;
    write_text(&path_j, &tj.to_json_lines())?;
    outln!(
        "sensors {} removed: attacks on {} (mode {}) and {} (mode {}) give identical outputs over {} samples",
        witness.gamma,
        witness.gamma_i,
        si.id,
        witness.gamma_j,
        sj.id,
        witness.tau()
    );
    outln!("wrote {}, {}, {}", dir.join("witness.json").display(), path_i.display(), path_j.display());
    Ok(Outcome::Positive)
}
