use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use secdist::exactla::{Backend, Field, Rational};
use secdist::model::io::ModelFile;

use crate::common::{outln, write_json, ModelArgs, Outcome};

#[derive(Args, Debug)]
pub struct DiscretizeArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Write the discrete-time model file here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(args: DiscretizeArgs) -> Result<Outcome> {
    let file = args.model.file()?;
    if !file.continuous_time {
        bail!("{} is already a discrete-time model", args.model.source());
    }
    match args.model.backend(&file) {
        Backend::Exact => disc::<Rational>(&args, &file),
        Backend::Float => disc::<f64>(&args, &file),
    }
}

fn disc<T: Field>(args: &DiscretizeArgs, file: &ModelFile) -> Result<Outcome> {
    let sys = args.model.system::<T>(file)?;
    for note in sys.notes.iter().skip(file.notes.len()) {
        outln!("{note}");
    }
    for mode in &sys.modes {
        outln!("mode {}", mode.id);
        outln!("Ad =\n{}", mode.a);
        outln!("Bd =\n{}", mode.b);
    }
    if let Some(path) = &args.output {
        write_json(path, &ModelFile::from_system(&sys))?;
    }
    Ok(Outcome::Positive)
}
