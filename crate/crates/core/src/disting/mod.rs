//! Pairwise distinguishability deciders.
//!
//! Every decider works on one unordered pair of modes over the horizon
//! `τ = 2n`. The secure variants enumerate attack supports: sensor sets
//! `Γ` with `|Γ| ≤ 2σ` and actuator sets `Δ_i`, `Δ_j` with `|Δ_k| ≤ ρ`.
//! Patterns are evaluated in parallel; the reported failing pattern is the
//! first one in enumeration order regardless of scheduling.

mod witness;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Field, IndexSet};
use crate::geocontrol::{absorption, Absorption};
use crate::model::{
    build_augmented, markov_matrices, observability_matrix, AttackPattern, AugmentedPair, LinearMode,
    SwitchingSystem,
};

pub use witness::{witness_construct, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    InputGeneric,
    Autonomous,
    SigmaSecureAutonomous,
    SigmaRhoSecureControlled,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            VerdictKind::InputGeneric => "input-generic",
            VerdictKind::Autonomous => "autonomous",
            VerdictKind::SigmaSecureAutonomous => "σ-secure autonomous",
            VerdictKind::SigmaRhoSecureControlled => "σρ-secure controlled",
        })
    }
}

/// How attack supports are enumerated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Enumeration {
    /// Only the supports that can decide the verdict: maximal `Γ`, and for
    /// each absorption direction the maximal set on the absorbing side.
    #[default]
    Pruned,
    /// Every support within the budgets.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DecideOptions {
    pub enumeration: Enumeration,
    /// Rank tolerance for the float backend.
    pub tol: Option<f64>,
}

impl DecideOptions {
    pub fn exhaustive() -> Self {
        DecideOptions {
            enumeration: Enumeration::Exhaustive,
            tol: None,
        }
    }
}

/// Rank of the sensor-restricted observability stack for one `Γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEntry {
    pub gamma: IndexSet,
    pub rank: usize,
}

/// Absorption outcome for one failing controlled pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionReport {
    pub j_absorbs_i: bool,
    pub i_absorbs_j: bool,
    pub invariant_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct Verdict<T: Field> {
    pub kind: VerdictKind,
    pub pair: (String, String),
    pub result: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_pattern: Option<AttackPattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness<T>>,
    pub checked_patterns: usize,
    /// Observability ranks per checked `Γ` (rank-based kinds only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rank_table: Vec<RankEntry>,
    /// Full-rank target `2n` for rank-based kinds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absorption: Option<AbsorptionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl<T: Field> Verdict<T> {
    fn new(kind: VerdictKind, si: &LinearMode<T>, sj: &LinearMode<T>, result: bool) -> Self {
        Verdict {
            kind,
            pair: (si.id.clone(), sj.id.clone()),
            result,
            failing_pattern: None,
            witness: None,
            checked_patterns: 1,
            rank_table: Vec::new(),
            target_rank: None,
            absorption: None,
            caveat: None,
        }
    }
}

const GENERIC_INPUT_CAVEAT: &str =
    "verdict holds for generic inputs; a specific input sequence may fail to excite the mode difference";

fn check_sparsity(sigma: usize, p: usize) -> Result<()> {
    if 2 * sigma >= p {
        return Err(Error::SparsityBound { sigma, p });
    }
    Ok(())
}

fn check_pair<T: Field>(si: &LinearMode<T>, sj: &LinearMode<T>) -> Result<()> {
    if si.dims() != sj.dims() {
        return Err(Error::dims(format!(
            "modes {} and {} have dimensions {:?} and {:?}",
            si.id,
            sj.id,
            si.dims(),
            sj.dims()
        )));
    }
    Ok(())
}

/// Distinguishability for every initial state under a generic input:
/// holds iff the input Markov stack `M_ij` is nonzero.
pub fn input_generic_distinguishable<T: Field>(si: &LinearMode<T>, sj: &LinearMode<T>) -> Result<Verdict<T>> {
    check_pair(si, sj)?;
    if si.m() == 0 {
        return Err(Error::Autonomous);
    }
    let pair = AugmentedPair::nominal(si, sj)?;
    let nonzero = !markov_matrices(&pair).m_u.is_zero();
    let mut v = Verdict::new(VerdictKind::InputGeneric, si, sj, nonzero);
    v.caveat = Some(GENERIC_INPUT_CAVEAT.to_string());
    Ok(v)
}

/// Distinguishability of the unforced modes for every nonzero initial
/// state pair: `rank O_ij = 2n`.
pub fn autonomous_distinguishable<T: Field>(si: &LinearMode<T>, sj: &LinearMode<T>) -> Result<Verdict<T>> {
    autonomous_with(si, sj, &DecideOptions::default())
}

fn autonomous_with<T: Field>(si: &LinearMode<T>, sj: &LinearMode<T>, opts: &DecideOptions) -> Result<Verdict<T>> {
    check_pair(si, sj)?;
    let pair = AugmentedPair::nominal(si, sj)?;
    let target = 2 * pair.n();
    let rank = observability_matrix(&pair, pair.tau()).rank_tol(opts.tol);
    let mut v = Verdict::new(VerdictKind::Autonomous, si, sj, rank == target);
    v.rank_table = vec![RankEntry {
        gamma: IndexSet::empty(),
        rank,
    }];
    v.target_rank = Some(target);
    Ok(v)
}

/// Sensor sets to check. Removing rows can only lower the rank, so the
/// maximal sets `|Γ| = 2σ` decide the verdict.
fn sensor_sets(p: usize, sigma: usize, enumeration: Enumeration) -> Vec<IndexSet> {
    let max = 2 * sigma;
    let min = match enumeration {
        Enumeration::Pruned => max,
        Enumeration::Exhaustive => 0,
    };
    IndexSet::subsets_descending(p, max, min)
}

/// Distinguishability of the unforced modes against any two cyclic
/// `σ`-sparse sensor attacks: for every `|Γ| ≤ 2σ`, the observability
/// stack without the `Γ` sensors keeps full column rank `2n`. A failure
/// carries a witness.
pub fn sigma_secure_autonomous<T: Field>(
    si: &LinearMode<T>,
    sj: &LinearMode<T>,
    sigma: usize,
    opts: &DecideOptions,
) -> Result<Verdict<T>> {
    check_pair(si, sj)?;
    let p = si.p();
    check_sparsity(sigma, p)?;
    let pair = AugmentedPair::nominal(si, sj)?;
    let target = 2 * pair.n();
    let o = observability_matrix(&pair, pair.tau());
    let gammas = sensor_sets(p, sigma, opts.enumeration);
    let table: Vec<RankEntry> = gammas
        .par_iter()
        .map(|g| -> Result<RankEntry> {
            let rows = g.stacked(p, pair.tau());
            Ok(RankEntry {
                gamma: g.clone(),
                rank: o.restrict_rows(&rows)?.rank_tol(opts.tol),
            })
        })
        .collect::<Result<_>>()?;
    let failing = table.iter().find(|e| e.rank < target).map(|e| e.gamma.clone());
    let mut v = Verdict::new(VerdictKind::SigmaSecureAutonomous, si, sj, failing.is_none());
    v.checked_patterns = table.len();
    v.rank_table = table;
    v.target_rank = Some(target);
    if let Some(gamma) = failing {
        let rows = gamma.stacked(p, pair.tau());
        let kernel = crate::exactla::Subspace::kernel(&o.restrict_rows(&rows)?);
        let x0 = kernel.basis().col(0);
        v.witness = Some(witness_construct(&pair, &gamma, &x0, sigma)?);
        v.failing_pattern = Some(AttackPattern::sensors(gamma));
    }
    Ok(v)
}

/// Actuator support pairs `(Δ_i, Δ_j)` to check.
///
/// Mode `j` absorbing mode `i` only gets easier as `Δ_j` grows, and
/// symmetrically for `Δ_i`; the invariant subspace grows with both, so the
/// other side must be enumerated in full.
fn actuator_sets(m: usize, rho: usize, enumeration: Enumeration) -> Vec<(IndexSet, IndexSet)> {
    let all = IndexSet::subsets_descending(m, rho, 0);
    match enumeration {
        Enumeration::Exhaustive => all
            .iter()
            .flat_map(|di| all.iter().map(move |dj| (di.clone(), dj.clone())))
            .collect(),
        Enumeration::Pruned => {
            let r = rho.min(m);
            all.iter()
                .flat_map(|di| all.iter().map(move |dj| (di, dj)))
                .filter(|(di, dj)| di.len() == r || dj.len() == r)
                .map(|(di, dj)| (di.clone(), dj.clone()))
                .collect()
        }
    }
}

/// Controlled distinguishability against `σ`-sparse sensor and
/// `ρ`-sparse actuator attacks under generic inputs: for every pattern,
/// neither mode's attacker can absorb the other mode's input and attack
/// directions into its invariant subspace.
pub fn sigma_rho_secure_controlled<T: Field>(
    si: &LinearMode<T>,
    sj: &LinearMode<T>,
    sigma: usize,
    rho: usize,
    opts: &DecideOptions,
) -> Result<Verdict<T>> {
    check_pair(si, sj)?;
    let (p, m) = (si.p(), si.m());
    check_sparsity(sigma, p)?;
    if rho > m {
        return Err(Error::InvalidBudget(format!(
            "ρ = {rho} exceeds the number of actuators m = {m}"
        )));
    }
    let gammas = sensor_sets(p, sigma, opts.enumeration);
    let deltas = actuator_sets(m, rho, opts.enumeration);
    let patterns: Vec<AttackPattern> = gammas
        .iter()
        .flat_map(|g| {
            deltas.iter().map(move |(di, dj)| AttackPattern {
                gamma: g.clone(),
                delta_i: di.clone(),
                delta_j: dj.clone(),
            })
        })
        .collect();
    let outcomes: Vec<(Absorption, usize)> = patterns
        .par_iter()
        .map(|pat| -> Result<(Absorption, usize)> {
            let pair = build_augmented(si, sj, &pat.delta_i, &pat.delta_j)?;
            let (abs, inv) = absorption(&pair, &pat.gamma)?;
            Ok((abs, inv.subspace.dim()))
        })
        .collect::<Result<_>>()?;
    let failing = outcomes.iter().position(|(a, _)| !a.distinguishable());
    let mut v = Verdict::new(VerdictKind::SigmaRhoSecureControlled, si, sj, failing.is_none());
    v.checked_patterns = patterns.len();
    v.caveat = Some(GENERIC_INPUT_CAVEAT.to_string());
    if let Some(k) = failing {
        let (abs, dim) = outcomes[k];
        v.failing_pattern = Some(patterns[k].clone());
        v.absorption = Some(AbsorptionReport {
            j_absorbs_i: abs.j_absorbs_i,
            i_absorbs_j: abs.i_absorbs_j,
            invariant_dim: dim,
        });
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub sigma: usize,
    pub rho: usize,
    /// Ignore inputs and decide with the autonomous tests only.
    pub autonomous: bool,
    pub decide: DecideOptions,
}

impl ReportOptions {
    pub fn from_system<T: Field>(sys: &SwitchingSystem<T>) -> Self {
        ReportOptions {
            sigma: sys.sigma,
            rho: sys.rho,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct PairReport<T: Field> {
    pub pair: (String, String),
    /// Verdict of the deciding test for the requested budgets.
    pub secure: bool,
    pub decided_by: VerdictKind,
    pub verdicts: Vec<Verdict<T>>,
}

impl<T: Field> PairReport<T> {
    pub fn verdict(&self, kind: VerdictKind) -> Option<&Verdict<T>> {
        self.verdicts.iter().find(|v| v.kind == kind)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "")]
pub struct PairwiseReport<T: Field> {
    pub sigma: usize,
    pub rho: usize,
    pub autonomous: bool,
    pub enumeration: Enumeration,
    pub pairs: Vec<PairReport<T>>,
    /// The initial mode can be reconstructed iff every pair is
    /// distinguishable.
    pub reconstructable: bool,
}

/// Runs every applicable decider on every unordered pair of modes.
///
/// The deciding test is the σρ-secure controlled test for systems with
/// inputs, and the σ-secure autonomous test otherwise (or when
/// `autonomous` is set). The remaining tests are reported for context.
pub fn pairwise_report<T: Field>(sys: &SwitchingSystem<T>, opts: &ReportOptions) -> Result<PairwiseReport<T>> {
    if sys.modes.len() < 2 {
        return Err(Error::model("modes", "at least two modes required"));
    }
    check_sparsity(opts.sigma, sys.p())?;
    if opts.rho > sys.m() {
        return Err(Error::InvalidBudget(format!(
            "ρ = {} exceeds the number of actuators m = {}",
            opts.rho,
            sys.m()
        )));
    }
    let controlled = sys.m() > 0 && !opts.autonomous;
    let pairs = sys
        .pairs()
        .into_par_iter()
        .map(|(i, j)| -> Result<PairReport<T>> {
            let (si, sj) = (&sys.modes[i], &sys.modes[j]);
            let mut verdicts = vec![autonomous_with(si, sj, &opts.decide)?];
            if sys.m() > 0 {
                verdicts.push(input_generic_distinguishable(si, sj)?);
            }
            verdicts.push(sigma_secure_autonomous(si, sj, opts.sigma, &opts.decide)?);
            if controlled {
                verdicts.push(sigma_rho_secure_controlled(si, sj, opts.sigma, opts.rho, &opts.decide)?);
            }
            let deciding = verdicts.last().expect("at least one verdict");
            Ok(PairReport {
                pair: (si.id.clone(), sj.id.clone()),
                secure: deciding.result,
                decided_by: deciding.kind,
                verdicts,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairwiseReport {
        sigma: opts.sigma,
        rho: opts.rho,
        autonomous: !controlled,
        enumeration: opts.decide.enumeration,
        reconstructable: pairs.iter().all(|p| p.secure),
        pairs,
    })
}
