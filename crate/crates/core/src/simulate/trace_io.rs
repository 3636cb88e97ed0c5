//! JSON-lines trace format: one record per sample `t = 0..τ−1` with
//! `{t, mode, x, u, y, w, v}`, followed by a final record `{t: τ, mode, x}`
//! holding the terminal state. Entries are exact literal strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::Trace;
use crate::error::{Error, Result};
use crate::exactla::{to_literal, Field, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: usize,
    pub mode: String,
    pub x: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
}

fn literals<T: Field>(row: &[T]) -> Vec<String> {
    row.iter().map(to_literal).collect()
}

impl<T: Field> Trace<T> {
    pub fn records(&self) -> Vec<TraceRecord> {
        let tau = self.tau();
        let mut out: Vec<TraceRecord> = (0..tau)
            .map(|t| TraceRecord {
                t,
                mode: self.mode.clone(),
                x: literals(self.x.row(t)),
                u: Some(literals(self.u.row(t))),
                y: Some(literals(self.y.row(t))),
                w: Some(literals(self.w.row(t))),
                v: Some(literals(self.v.row(t))),
            })
            .collect();
        out.push(TraceRecord {
            t: tau,
            mode: self.mode.clone(),
            x: literals(self.x.row(tau)),
            u: None,
            y: None,
            w: None,
            v: None,
        });
        out
    }

    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for r in self.records() {
            s.push_str(&serde_json::to_string(&r).expect("trace records serialize"));
            s.push('\n');
        }
        s
    }

    pub fn write_json_lines(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_lines())?;
        Ok(())
    }
}

fn parse_row<T: Field>(line: usize, field: &str, row: &[String]) -> Result<Vec<T>> {
    row.iter()
        .enumerate()
        .map(|(k, s)| {
            T::parse_literal(s).ok_or_else(|| Error::Parse {
                location: format!("line {line}, {field}[{k}]"),
                message: format!("not a number: {s:?}"),
            })
        })
        .collect()
}

fn rows_to_matrix<T: Field>(rows: Vec<Vec<T>>, cols: usize, field: &str) -> Result<Matrix<T>> {
    Matrix::from_rows(rows, cols).map_err(|e| Error::Parse {
        location: field.to_string(),
        message: e.to_string(),
    })
}

/// Parses a trace written by [`Trace::to_json_lines`]. The terminal state
/// record is optional; without it the last state is not recovered and `x`
/// has `τ` rows.
pub fn read_json_lines<T: Field>(text: &str) -> Result<Trace<T>> {
    let mut records = Vec::new();
    for (k, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let rec: TraceRecord = serde_json::from_str(line).map_err(|e| Error::Parse {
            location: format!("line {}", k + 1),
            message: e.to_string(),
        })?;
        if rec.t != records.len() {
            return Err(Error::Parse {
                location: format!("line {}", k + 1),
                message: format!("expected t = {}, got {}", records.len(), rec.t),
            });
        }
        records.push((k + 1, rec));
    }
    let Some((_, first)) = records.first() else {
        return Err(Error::Parse {
            location: "line 1".into(),
            message: "empty trace".into(),
        });
    };
    let mode = first.mode.clone();
    let n = first.x.len();
    let (mut x, mut u, mut y, mut w, mut v) = (vec![], vec![], vec![], vec![], vec![]);
    let (mut m, mut p) = (0, 0);
    for (line, rec) in &records {
        x.push(parse_row::<T>(*line, "x", &rec.x)?);
        match (&rec.u, &rec.y, &rec.w, &rec.v) {
            (Some(ru), Some(ry), Some(rw), Some(rv)) => {
                if y.len() < x.len() - 1 {
                    return Err(Error::Parse {
                        location: format!("line {line}"),
                        message: "sample record after the terminal state".into(),
                    });
                }
                m = ru.len();
                p = ry.len();
                u.push(parse_row::<T>(*line, "u", ru)?);
                y.push(parse_row::<T>(*line, "y", ry)?);
                w.push(parse_row::<T>(*line, "w", rw)?);
                v.push(parse_row::<T>(*line, "v", rv)?);
            }
            (None, None, None, None) => {}
            _ => {
                return Err(Error::Parse {
                    location: format!("line {line}"),
                    message: "record must carry all of u, y, w, v or none of them".into(),
                })
            }
        }
    }
    Ok(Trace {
        mode,
        x: rows_to_matrix(x, n, "x")?,
        u: rows_to_matrix(u, m, "u")?,
        y: rows_to_matrix(y, p, "y")?,
        w: rows_to_matrix(w, p, "w")?,
        v: rows_to_matrix(v, m, "v")?,
    })
}
