use std::fmt::Write;

use secdist::disting::{PairwiseReport, VerdictKind};
use secdist::exactla::{Field, IndexSet};

/// Observability ranks with one row per removed sensor set and one column
/// per pair, as produced by the σ-secure autonomous test.
pub fn rank_table<T: Field>(report: &PairwiseReport<T>) -> String {
    let columns: Vec<_> = report
        .pairs
        .iter()
        .filter_map(|p| p.verdict(VerdictKind::SigmaSecureAutonomous).map(|v| (p, v)))
        .collect();
    let Some((_, first)) = columns.first() else {
        return String::new();
    };
    let gammas: Vec<&IndexSet> = first.rank_table.iter().map(|e| &e.gamma).collect();
    let target = first.target_rank.unwrap_or(0);
    let labels: Vec<String> = gammas
        .iter()
        .enumerate()
        .map(|(k, g)| format!("Γ{}={g}", k + 1))
        .collect();
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1).max(8);
    let headers: Vec<String> = columns.iter().map(|(p, _)| format!("({},{})", p.pair.0, p.pair.1)).collect();
    let cell = headers.iter().map(|h| h.chars().count()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "rank of the observability stack without Γ (full rank {target})");
    let _ = write!(out, "{:<width$}", "");
    for h in &headers {
        let _ = write!(out, "  {h:>cell$}");
    }
    out.push('\n');
    for (k, label) in labels.iter().enumerate() {
        let pad = width - label.chars().count();
        let _ = write!(out, "{label}{}", " ".repeat(pad));
        for (_, v) in &columns {
            let rank = v.rank_table.get(k).map_or("-".to_string(), |e| e.rank.to_string());
            let _ = write!(out, "  {rank:>cell$}");
        }
        out.push('\n');
    }
    out
}

/// One line per pair and verdict kind.
pub fn verdict_lines<T: Field>(report: &PairwiseReport<T>) -> String {
    let mut out = String::new();
    for p in &report.pairs {
        for v in &p.verdicts {
            let mark = if v.result { "yes" } else { "no" };
            let _ = write!(out, "({},{}) {:<22} {mark}", p.pair.0, p.pair.1, v.kind.to_string());
            if let Some(f) = &v.failing_pattern {
                let _ = write!(out, "  [fails at {f}]");
            }
            out.push('\n');
        }
    }
    out
}
