use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use secdist::exactla::{Backend, Field};
use secdist::model::io::ModelFile;
use secdist::model::{boost, Method, SwitchingSystem};

/// Result of a successful run, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Exit 0.
    Positive,
    /// Exit 2: the run completed but the property does not hold.
    Negative,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Positive
        } else {
            Outcome::Negative
        }
    }
}

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Model file (JSON). Defaults to the bundled boost converter.
    #[arg(short, long)]
    pub model: Option<PathBuf>,

    /// Scalar backend; defaults to the model's declared scalar type.
    #[arg(long, value_enum, env = "SECDIST_BACKEND")]
    pub backend: Option<BackendArg>,

    /// Sampling step for continuous-time models (e.g. 1/10 or 0.1).
    #[arg(long)]
    pub h: Option<String>,

    /// Discretization method for continuous-time models.
    #[arg(long, value_parser = parse_method)]
    pub method: Option<Method>,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: secdist::Error| e.to_string())
}

impl ModelArgs {
    pub fn file(&self) -> Result<ModelFile> {
        match &self.model {
            Some(path) => Ok(ModelFile::read(path)?),
            None => Ok(boost::bundled_file()),
        }
    }

    pub fn source(&self) -> String {
        match &self.model {
            Some(path) => path.display().to_string(),
            None => "bundled:boost".to_string(),
        }
    }

    pub fn backend(&self, file: &ModelFile) -> Backend {
        self.backend.map(Backend::from).unwrap_or_else(|| file.scalar.into())
    }

    pub fn step<T: Field>(&self) -> Result<Option<T>> {
        self.h
            .as_deref()
            .map(|s| T::parse_literal(s).with_context(|| format!("cannot read step h = {s:?}")))
            .transpose()
    }

    pub fn system<T: Field>(&self, file: &ModelFile) -> Result<SwitchingSystem<T>> {
        let h = self.step::<T>()?;
        Ok(file.system_with(h.as_ref(), self.method)?)
    }
}

/// Budget overrides; both must stay within the model's dimensions.
#[derive(Args, Debug, Clone, Copy)]
pub struct BudgetArgs {
    /// Sensor attack budget σ (overrides the model).
    #[arg(long)]
    pub sigma: Option<usize>,

    /// Actuator attack budget ρ (overrides the model).
    #[arg(long)]
    pub rho: Option<usize>,
}

impl BudgetArgs {
    pub fn resolve<T: Field>(&self, sys: &SwitchingSystem<T>) -> Result<(usize, usize)> {
        let sigma = self.sigma.unwrap_or(sys.sigma);
        let rho = self.rho.unwrap_or(sys.rho);
        if rho > sys.m() {
            bail!("ρ = {rho} exceeds the number of actuators m = {}", sys.m());
        }
        Ok((sigma, rho))
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<()> {
    write_text(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Writes to stdout, treating a closed pipe as success.
pub fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: writing to stdout: {e}");
        }
    }
}

macro_rules! outln {
    () => { $crate::common::emit("\n") };
    ($($arg:tt)*) => { $crate::common::emit(&format!("{}\n", format_args!($($arg)*))) };
}

macro_rules! out {
    ($($arg:tt)*) => { $crate::common::emit(&format!($($arg)*)) };
}

pub(crate) use {out, outln};
