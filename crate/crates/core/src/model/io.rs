//! Model and report files.
//!
//! Model file: a JSON object
//! `{"n","m","p","sigma","rho","dwell","scalar","modes":[{"id","A","B","C"}],
//! "continuous_time","h","discretization","notes"}` with matrices as
//! row-major arrays whose entries are numbers or literal strings such as
//! `"-1/2"` or `"0.1"`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{discretize, LinearMode, Method, SwitchingSystem};
use crate::error::{Error, Result};
use crate::exactla::{Backend, Field, Matrix, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[default]
    Rational,
    Float,
}

impl From<ScalarKind> for Backend {
    fn from(k: ScalarKind) -> Backend {
        match k {
            ScalarKind::Rational => Backend::Exact,
            ScalarKind::Float => Backend::Float,
        }
    }
}

fn default_dwell() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeEntry {
    pub id: Value,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Value>>,
    #[serde(rename = "B", default)]
    pub b: Option<Vec<Vec<Value>>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Value>>,
}

/// Raw, unvalidated contents of a model file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    #[serde(default)]
    pub sigma: usize,
    #[serde(default)]
    pub rho: usize,
    #[serde(default = "default_dwell")]
    pub dwell: usize,
    #[serde(default)]
    pub scalar: ScalarKind,
    pub modes: Vec<ModeEntry>,
    #[serde(default)]
    pub continuous_time: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discretization: Option<Method>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A validated system on whichever backend the file (or an override)
/// selected.
#[derive(Debug, Clone)]
pub enum LoadedModel {
    Exact(SwitchingSystem<Rational>),
    Float(SwitchingSystem<f64>),
}

fn parse_scalar<T: Field>(v: &Value, location: &str) -> Result<T> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(Error::Parse {
                location: location.into(),
                message: format!("expected a number or numeric string, got {other}"),
            })
        }
    };
    T::parse_literal(&text).ok_or_else(|| Error::Parse {
        location: location.into(),
        message: format!("cannot read {text:?} as a scalar"),
    })
}

fn parse_matrix<T: Field>(
    rows: &[Vec<Value>],
    expect: (usize, usize),
    location: &str,
) -> Result<Matrix<T>> {
    let (er, ec) = expect;
    if rows.len() != er {
        return Err(Error::model(
            location,
            format!("has {} rows, expected {er}", rows.len()),
        ));
    }
    let mut parsed = Vec::with_capacity(er);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != ec {
            return Err(Error::model(
                format!("{location}[{r}]"),
                format!("has {} entries, expected {ec}", row.len()),
            ));
        }
        parsed.push(
            row.iter()
                .enumerate()
                .map(|(c, v)| parse_scalar(v, &format!("{location}[{r}][{c}]")))
                .collect::<Result<Vec<T>>>()?,
        );
    }
    Matrix::from_rows(parsed, ec)
}

fn mode_id(v: &Value, k: usize) -> Result<String> {
    match v {
        Value::String(s) if !s.is_empty() => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::model(
            format!("modes[{k}].id"),
            "must be a non-empty string or a number",
        )),
    }
}

impl ModelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Parse {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse { location, message } => Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }

    /// Mode matrices as written in the file, before any discretization.
    pub fn raw_modes<T: Field>(&self) -> Result<Vec<LinearMode<T>>> {
        if self.modes.len() < 2 {
            return Err(Error::model("modes", "at least two modes required"));
        }
        let (n, m, p) = (self.n, self.m, self.p);
        self.modes
            .iter()
            .enumerate()
            .map(|(k, entry)| {
                let id = mode_id(&entry.id, k)?;
                let a = parse_matrix::<T>(&entry.a, (n, n), &format!("modes[{k}].A"))?;
                let b = match &entry.b {
                    Some(rows) if !(m == 0 && rows.is_empty()) => {
                        parse_matrix::<T>(rows, (n, m), &format!("modes[{k}].B"))?
                    }
                    _ => Matrix::zeros(n, m),
                };
                let c = parse_matrix::<T>(&entry.c, (p, n), &format!("modes[{k}].C"))?;
                LinearMode::new(id, a, b, c)
            })
            .collect()
    }

    /// Validated system on backend `T`, discretized when the file holds a
    /// continuous-time model.
    pub fn system<T: Field>(&self) -> Result<SwitchingSystem<T>> {
        self.system_with(None, None)
    }

    /// As [`ModelFile::system`], overriding the step and method used for
    /// continuous-time models.
    pub fn system_with<T: Field>(
        &self,
        h: Option<&T>,
        method: Option<Method>,
    ) -> Result<SwitchingSystem<T>> {
        let mut modes = self.raw_modes::<T>()?;
        let mut notes = self.notes.clone();
        if self.continuous_time {
            let h = match h {
                Some(h) => h.clone(),
                None => {
                    let v = self.h.as_ref().ok_or_else(|| {
                        Error::model("h", "continuous-time models need a sampling step h")
                    })?;
                    parse_scalar::<T>(v, "h")?
                }
            };
            let method = method.or(self.discretization).unwrap_or_default();
            for mode in &mut modes {
                let (ad, bd) = discretize(&mode.a, &mode.b, &h, method)?;
                mode.a = ad;
                mode.b = bd;
            }
            notes.push(format!("discretized from continuous time: {method}, h = {h}"));
        }
        let mut sys = SwitchingSystem::new(modes, self.sigma, self.rho, self.dwell)?;
        sys.notes = notes;
        for w in sys.warnings() {
            log::warn!("{w}");
        }
        Ok(sys)
    }

    pub fn load(&self, backend: Option<Backend>) -> Result<LoadedModel> {
        match backend.unwrap_or_else(|| self.scalar.into()) {
            Backend::Exact => Ok(LoadedModel::Exact(self.system()?)),
            Backend::Float => Ok(LoadedModel::Float(self.system()?)),
        }
    }

    /// File representation of an already discrete-time system.
    pub fn from_system<T: Field>(sys: &SwitchingSystem<T>) -> Self {
        let lit = |m: &Matrix<T>| -> Vec<Vec<Value>> {
            m.to_rows()
                .into_iter()
                .map(|row| row.iter().map(|x| Value::String(x.to_string())).collect())
                .collect()
        };
        ModelFile {
            n: sys.n(),
            m: sys.m(),
            p: sys.p(),
            sigma: sys.sigma,
            rho: sys.rho,
            dwell: sys.dwell,
            scalar: match T::BACKEND {
                Backend::Exact => ScalarKind::Rational,
                Backend::Float => ScalarKind::Float,
            },
            modes: sys
                .modes
                .iter()
                .map(|mode| ModeEntry {
                    id: Value::String(mode.id.clone()),
                    a: lit(&mode.a),
                    b: Some(lit(&mode.b)),
                    c: lit(&mode.c),
                })
                .collect(),
            continuous_time: false,
            h: None,
            discretization: None,
            notes: sys.notes.clone(),
        }
    }
}

/// Reads and validates a model file on the backend it declares.
pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    ModelFile::read(path)?.load(None)
}

/// Reads a model file onto a fixed backend.
pub fn load_model_as<T: Field>(path: impl AsRef<Path>) -> Result<SwitchingSystem<T>> {
    ModelFile::read(path)?.system()
}

/// Writes any serializable report as pretty JSON.
pub fn save_report<R: Serialize>(report: &R, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Matrix as rows of literal strings, for JSON output.
pub fn matrix_literals<T: Field>(m: &Matrix<T>) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn vector_literals<T: Field>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}
