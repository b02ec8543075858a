//! Axioms as concrete, checkable instances.
//!
//! Every axiom is existentially or universally quantified over its
//! magnitudes; an [`AxiomInstance`] fixes all of them together with the two
//! profiles. [`validate_preconditions`] checks the hypothesis in exact
//! arithmetic and [`check_axiom`] asks an ordering whether the conclusion
//! holds.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, is_unit_interval_open, Rational, Tolerance};
use crate::orderings::OrderingSpec;
use crate::profile::{ceil_ratio, check_permutation, WellbeingProfile};
use crate::verdict::{Comparison, Verdict};

pub mod format;
pub mod generate;

pub use generate::{generate_instances, AxiomParams, GeneratorConfig, InstanceGenerator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Anonymity,
    StrongPareto,
    WeakPareto,
    PigouDalton,
    ReplicationInvariance,
    MinimalNonAggregation,
    StrongNonAggregation,
    StrongNonAggThreshold,
    QuantitativeAggregation,
    RatioAggregation,
    MinimalAggregation,
    StrongerNonAggregation,
}

impl Axiom {
    pub const ALL: [Axiom; 12] = [
        Axiom::Anonymity,
        Axiom::StrongPareto,
        Axiom::WeakPareto,
        Axiom::PigouDalton,
        Axiom::ReplicationInvariance,
        Axiom::MinimalNonAggregation,
        Axiom::StrongNonAggregation,
        Axiom::StrongNonAggThreshold,
        Axiom::QuantitativeAggregation,
        Axiom::RatioAggregation,
        Axiom::MinimalAggregation,
        Axiom::StrongerNonAggregation,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Axiom::Anonymity => "anonymity",
            Axiom::StrongPareto => "strong-pareto",
            Axiom::WeakPareto => "weak-pareto",
            Axiom::PigouDalton => "pigou-dalton",
            Axiom::ReplicationInvariance => "replication-invariance",
            Axiom::MinimalNonAggregation => "minimal-non-aggregation",
            Axiom::StrongNonAggregation => "strong-non-aggregation",
            Axiom::StrongNonAggThreshold => "strong-non-aggregation-threshold",
            Axiom::QuantitativeAggregation => "quantitative-aggregation",
            Axiom::RatioAggregation => "ratio-aggregation",
            Axiom::MinimalAggregation => "minimal-aggregation",
            Axiom::StrongerNonAggregation => "stronger-non-aggregation",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.tag() == s)
            .ok_or_else(|| Error::invalid(format!("unknown axiom {s:?}")))
    }
}

/// Which profile the worst-off clause of minimal non-aggregation refers to.
///
/// `AfterChange` reads `v_i = v_[1]` literally. `BeforeChange` requires
/// `u_i = u_[1]` instead: the gainer is (one of) the poorest before the
/// change, which is what the impossibility constructions use when a tied
/// group of poor people is raised one at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorstOff {
    #[default]
    AfterChange,
    BeforeChange,
}

impl WorstOff {
    pub fn tag(self) -> &'static str {
        match self {
            WorstOff::AfterChange => "after-change",
            WorstOff::BeforeChange => "before-change",
        }
    }
}

impl FromStr for WorstOff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "after-change" => Ok(WorstOff::AfterChange),
            "before-change" => Ok(WorstOff::BeforeChange),
            _ => Err(Error::invalid(format!("unknown worst-off reading {s:?}"))),
        }
    }
}

/// One fully instantiated premise of one axiom. Indices are 0-based.
///
/// For the Pareto axioms `u` is the dominating profile; for every other
/// axiom `u` is the status quo and `v` the changed profile.
#[derive(Debug, Clone, PartialEq)]
pub enum AxiomInstance {
    Anonymity {
        u: WellbeingProfile,
        perm: Vec<usize>,
    },
    StrongPareto {
        u: WellbeingProfile,
        v: WellbeingProfile,
    },
    WeakPareto {
        u: WellbeingProfile,
        v: WellbeingProfile,
    },
    PigouDalton {
        u: WellbeingProfile,
        i: usize,
        j: usize,
        epsilon: Rational,
    },
    ReplicationInvariance {
        u: WellbeingProfile,
        v: WellbeingProfile,
        k: u64,
    },
    MinimalNonAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        theta_p: Rational,
        theta_r: Rational,
        alpha: Rational,
        beta: Rational,
        worst_off: WorstOff,
    },
    StrongNonAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        alpha: Rational,
        beta: Rational,
    },
    StrongNonAggThreshold {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        theta_p: Rational,
        theta_r: Rational,
        alpha: Rational,
        beta: Rational,
    },
    QuantitativeAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        m: u64,
        gamma: Rational,
        delta: Rational,
    },
    RatioAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        lambda: Rational,
        gamma: Rational,
        delta: Rational,
    },
    MinimalAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        gamma: Rational,
        delta: Rational,
        n: u64,
    },
    StrongerNonAggregation {
        u: WellbeingProfile,
        v: WellbeingProfile,
        i: usize,
        group: Vec<usize>,
        theta_p: Rational,
        alpha: Rational,
        beta: Rational,
    },
}

/// The relation an axiom's conclusion demands between two profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// `left ≽ right`
    AtLeast,
    /// `left ≻ right`
    Strictly,
    /// `left ∼ right`
    Equivalent,
    /// `verdict(u, v) = verdict(k*u, k*v)`
    SameVerdict,
}

impl Requirement {
    pub fn accepts(self, verdict: Verdict) -> bool {
        match self {
            Requirement::AtLeast => verdict.at_least(),
            Requirement::Strictly => verdict == Verdict::StrictlyBetter,
            Requirement::Equivalent => verdict == Verdict::Equivalent,
            Requirement::SameVerdict => unreachable!("replication invariance compares two verdicts"),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Requirement::AtLeast => "≽",
            Requirement::Strictly => "≻",
            Requirement::Equivalent => "∼",
            Requirement::SameVerdict => "⇔",
        }
    }
}

impl AxiomInstance {
    pub fn axiom(&self) -> Axiom {
        match self {
            AxiomInstance::Anonymity { .. } => Axiom::Anonymity,
            AxiomInstance::StrongPareto { .. } => Axiom::StrongPareto,
            AxiomInstance::WeakPareto { .. } => Axiom::WeakPareto,
            AxiomInstance::PigouDalton { .. } => Axiom::PigouDalton,
            AxiomInstance::ReplicationInvariance { .. } => Axiom::ReplicationInvariance,
            AxiomInstance::MinimalNonAggregation { .. } => Axiom::MinimalNonAggregation,
            AxiomInstance::StrongNonAggregation { .. } => Axiom::StrongNonAggregation,
            AxiomInstance::StrongNonAggThreshold { .. } => Axiom::StrongNonAggThreshold,
            AxiomInstance::QuantitativeAggregation { .. } => Axiom::QuantitativeAggregation,
            AxiomInstance::RatioAggregation { .. } => Axiom::RatioAggregation,
            AxiomInstance::MinimalAggregation { .. } => Axiom::MinimalAggregation,
            AxiomInstance::StrongerNonAggregation { .. } => Axiom::StrongerNonAggregation,
        }
    }

    /// `(u, v)`, deriving `v` for anonymity and Pigou-Dalton.
    pub fn profiles(&self) -> Result<(WellbeingProfile, WellbeingProfile)> {
        use AxiomInstance::*;
        Ok(match self {
            Anonymity { u, perm } => (u.clone(), u.permute(perm)?),
            PigouDalton { u, i, j, epsilon } => {
                let ui = u.get(*i as u64).ok_or_else(|| Error::invalid(format!("index {i} out of range")))?;
                let uj = u.get(*j as u64).ok_or_else(|| Error::invalid(format!("index {j} out of range")))?;
                let v = u.with_entries(&[(*i, ui - epsilon), (*j, uj + epsilon)])?;
                (u.clone(), v)
            }
            StrongPareto { u, v }
            | WeakPareto { u, v }
            | ReplicationInvariance { u, v, .. }
            | MinimalNonAggregation { u, v, .. }
            | StrongNonAggregation { u, v, .. }
            | StrongNonAggThreshold { u, v, .. }
            | QuantitativeAggregation { u, v, .. }
            | RatioAggregation { u, v, .. }
            | MinimalAggregation { u, v, .. }
            | StrongerNonAggregation { u, v, .. } => (u.clone(), v.clone()),
        })
    }

    /// The profile that is stored explicitly as `u`.
    pub fn base(&self) -> &WellbeingProfile {
        use AxiomInstance::*;
        match self {
            Anonymity { u, .. }
            | PigouDalton { u, .. }
            | StrongPareto { u, .. }
            | WeakPareto { u, .. }
            | ReplicationInvariance { u, .. }
            | MinimalNonAggregation { u, .. }
            | StrongNonAggregation { u, .. }
            | StrongNonAggThreshold { u, .. }
            | QuantitativeAggregation { u, .. }
            | RatioAggregation { u, .. }
            | MinimalAggregation { u, .. }
            | StrongerNonAggregation { u, .. } => u,
        }
    }

    /// `(left, right, requirement)`: the conclusion is `left R right`.
    /// Replication invariance returns `(u, v, SameVerdict)`.
    pub fn conclusion(&self) -> Result<(WellbeingProfile, WellbeingProfile, Requirement)> {
        let (u, v) = self.profiles()?;
        Ok(match self {
            AxiomInstance::Anonymity { .. } => (u, v, Requirement::Equivalent),
            AxiomInstance::StrongPareto { .. } => {
                let strict = u != v;
                (u, v, if strict { Requirement::Strictly } else { Requirement::AtLeast })
            }
            AxiomInstance::WeakPareto { .. } => (u, v, Requirement::Strictly),
            AxiomInstance::ReplicationInvariance { .. } => (u, v, Requirement::SameVerdict),
            _ => (v, u, Requirement::AtLeast),
        })
    }
}

/// Why an instance's hypothesis does not hold: the failing clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unmet(pub String);

impl fmt::Display for Unmet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

type Check = std::result::Result<(), Unmet>;

fn require(ok: bool, clause: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(Unmet(clause()))
    }
}

fn r(x: &Rational) -> String {
    format_rational(x)
}

fn same_size(u: &WellbeingProfile, v: &WellbeingProfile) -> Check {
    require(u.len() == v.len(), || format!("|u| = |v| (got {} and {})", u.len(), v.len()))
}

fn at<'a>(p: &'a WellbeingProfile, idx: usize, name: &str) -> std::result::Result<&'a Rational, Unmet> {
    p.get(idx as u64)
        .ok_or_else(|| Unmet(format!("{name} = {idx} is a valid index (n = {})", p.len())))
}

fn group_set(group: &[usize], i: usize, n: u64, exclude_i: bool) -> std::result::Result<BTreeSet<usize>, Unmet> {
    let set: BTreeSet<usize> = group.iter().copied().collect();
    require(set.len() == group.len(), || "M has no repeated indices".into())?;
    if let Some(bad) = set.iter().find(|&&j| j as u64 >= n) {
        return Err(Unmet(format!("M ⊆ N (index {bad} out of range)")));
    }
    if exclude_i {
        require(!set.contains(&i), || format!("M ⊆ N \\ {{i}} (i = {i} in M)"))?;
    }
    Ok(set)
}

/// `v_h = u_h` for every `h` outside `changed`, by a walk over runs.
fn unchanged_outside(u: &WellbeingProfile, v: &WellbeingProfile, changed: &BTreeSet<usize>) -> Check {
    let (ub, vb) = (u.blocks(), v.blocks());
    let (mut a, mut b) = (0usize, 0usize);
    let (mut a_left, mut b_left) = (ub[0].count, vb[0].count);
    let mut pos = 0u64;
    loop {
        let run = a_left.min(b_left);
        if ub[a].level != vb[b].level {
            let lo = pos as usize;
            let hi = (pos + run) as usize;
            let covered = changed.range(lo..hi).count();
            if covered != hi - lo {
                let h = (lo..hi).find(|h| !changed.contains(h)).unwrap_or(lo);
                return Err(Unmet(format!(
                    "v_h = u_h outside M ∪ {{i}} (h = {h}: {} vs {})",
                    r(&ub[a].level),
                    r(&vb[b].level)
                )));
            }
        }
        pos += run;
        a_left -= run;
        b_left -= run;
        if a_left == 0 {
            a += 1;
            if a == ub.len() {
                break;
            }
            a_left = ub[a].count;
        }
        if b_left == 0 {
            b += 1;
            b_left = vb[b].count;
        }
    }
    Ok(())
}

fn ordered(big: &Rational, small: &Rational, names: &str) -> Check {
    require(big > small && small.is_positive(), || {
        format!("{names} (got {}, {})", r(big), r(small))
    })
}

/// Checks every clause of the instance's hypothesis in exact arithmetic.
pub fn validate_preconditions(inst: &AxiomInstance) -> Check {
    use AxiomInstance::*;
    match inst {
        Anonymity { u, perm } => {
            check_permutation(perm, u.len() as usize).map_err(|e| Unmet(format!("π is a bijection on N: {e}")))
        }
        StrongPareto { u, v } => {
            same_size(u, v)?;
            let h = u.iter().zip(v.iter()).position(|(a, b)| a < b);
            require(h.is_none(), || format!("u_i ≥ v_i for all i (fails at i = {})", h.unwrap()))
        }
        WeakPareto { u, v } => {
            same_size(u, v)?;
            let h = u.iter().zip(v.iter()).position(|(a, b)| a <= b);
            require(h.is_none(), || format!("u_i > v_i for all i (fails at i = {})", h.unwrap()))
        }
        PigouDalton { u, i, j, epsilon } => {
            require(epsilon.is_positive(), || format!("ε > 0 (got {})", r(epsilon)))?;
            require(i != j, || "i ≠ j".into())?;
            let ui = at(u, *i, "i")?;
            let uj = at(u, *j, "j")?;
            let (vi, vj) = (ui - epsilon, uj + epsilon);
            require(vi >= vj, || {
                format!("u_i − ε = v_i ≥ v_j = u_j + ε (got {} < {})", r(&vi), r(&vj))
            })
        }
        ReplicationInvariance { u, v, k } => {
            same_size(u, v)?;
            require(*k >= 1, || "k ≥ 1".into())
        }
        MinimalNonAggregation { u, v, i, group, theta_p, theta_r, alpha, beta, worst_off } => {
            ordered(theta_r, theta_p, "θ_r > θ_p > 0")?;
            ordered(alpha, beta, "α > β > 0")?;
            same_size(u, v)?;
            let set = group_set(group, *i, u.len(), true)?;
            let (ui, vi) = (at(u, *i, "i")?, at(v, *i, "i")?);
            require(theta_p >= vi, || format!("θ_p ≥ v_i (got {})", r(vi)))?;
            require(vi >= &(ui + alpha), || format!("v_i ≥ u_i + α (got {} < {})", r(vi), r(&(ui + alpha))))?;
            match worst_off {
                WorstOff::AfterChange => require(vi == v.min(), || format!("v_i = v_[1] (v_[1] = {})", r(v.min())))?,
                WorstOff::BeforeChange => require(ui == u.min(), || format!("u_i = u_[1] (u_[1] = {})", r(u.min())))?,
            }
            let (umax, vmax) = (u.max(), v.max());
            for &j in &set {
                let (uj, vj) = (at(u, j, "j")?, at(v, j, "j")?);
                require(uj == umax, || format!("u_j = u_[n] for j = {j}"))?;
                require(uj >= theta_r, || format!("u_j ≥ θ_r for j = {j} (got {})", r(uj)))?;
                require(vj == vmax, || format!("v_j = v_[n] for j = {j}"))?;
                require(vj >= &(uj - beta), || format!("v_j ≥ u_j − β for j = {j}"))?;
            }
            let mut changed = set;
            changed.insert(*i);
            unchanged_outside(u, v, &changed)
        }
        StrongNonAggregation { u, v, i, group, alpha, beta } => {
            ordered(alpha, beta, "α > β > 0")?;
            same_size(u, v)?;
            non_aggregation_moves(u, v, *i, group, alpha, beta, None)
        }
        StrongNonAggThreshold { u, v, i, group, theta_p, theta_r, alpha, beta } => {
            ordered(theta_r, theta_p, "θ_r > θ_p > 0")?;
            ordered(alpha, beta, "α > β > 0")?;
            same_size(u, v)?;
            non_aggregation_moves(u, v, *i, group, alpha, beta, Some((theta_p, theta_r)))
        }
        QuantitativeAggregation { u, v, i, group, m, gamma, delta } => {
            require(*m > 2, || format!("m > 2 (got {m})"))?;
            ordered(gamma, delta, "γ > δ > 0")?;
            same_size(u, v)?;
            require(u.len() > *m, || format!("n > m (n = {}, m = {m})", u.len()))?;
            require(group.len() as u64 >= *m, || format!("|M| ≥ m (|M| = {}, m = {m})", group.len()))?;
            aggregation_moves(u, v, *i, group, gamma, delta)
        }
        RatioAggregation { u, v, i, group, lambda, gamma, delta } => {
            require(is_unit_interval_open(lambda), || format!("λ ∈ (0, 1) (got {})", r(lambda)))?;
            ordered(gamma, delta, "γ > δ > 0")?;
            same_size(u, v)?;
            let need = ceil_ratio(lambda, u.len()).map_err(|e| Unmet(e.to_string()))?;
            require(group.len() as u64 >= need, || format!("|M| ≥ ⌈λn⌉ (|M| = {}, ⌈λn⌉ = {need})", group.len()))?;
            aggregation_moves(u, v, *i, group, gamma, delta)
        }
        MinimalAggregation { u, v, i, gamma, delta, n } => {
            ordered(gamma, delta, "γ > δ > 0")?;
            same_size(u, v)?;
            require(u.len() == *n, || format!("|N| = n (|N| = {}, n = {n})", u.len()))?;
            let group: Vec<usize> = (0..*n as usize).filter(|j| j != i).collect();
            aggregation_moves(u, v, *i, &group, gamma, delta)
        }
        StrongerNonAggregation { u, v, i, group, theta_p, alpha, beta } => {
            require(theta_p.is_positive(), || format!("θ_p > 0 (got {})", r(theta_p)))?;
            ordered(alpha, beta, "α > β > 0")?;
            same_size(u, v)?;
            let set = group_set(group, *i, u.len(), true)?;
            let (ui, vi) = (at(u, *i, "i")?, at(v, *i, "i")?);
            require(theta_p >= vi, || format!("θ_p ≥ v_i (got {})", r(vi)))?;
            require(vi >= &(ui + alpha), || format!("v_i ≥ u_i + α (got {} < {})", r(vi), r(&(ui + alpha))))?;
            for &j in &set {
                let (uj, vj) = (at(u, j, "j")?, at(v, j, "j")?);
                let floor = uj - beta;
                require(vj >= &floor, || format!("v_j ≥ u_j − β for j = {j}"))?;
                require(&floor >= theta_p, || format!("u_j − β ≥ θ_p for j = {j} (got {})", r(&floor)))?;
            }
            let mut changed = set;
            changed.insert(*i);
            unchanged_outside(u, v, &changed)
        }
    }
}

/// `u_j − β = v_j > v_i = u_i + α` for all `j ∈ M`, optionally with
/// `v_j ≥ θ_r > θ_p ≥ v_i`.
fn non_aggregation_moves(
    u: &WellbeingProfile,
    v: &WellbeingProfile,
    i: usize,
    group: &[usize],
    alpha: &Rational,
    beta: &Rational,
    thresholds: Option<(&Rational, &Rational)>,
) -> Check {
    let set = group_set(group, i, u.len(), true)?;
    let (ui, vi) = (at(u, i, "i")?, at(v, i, "i")?);
    require(vi == &(ui + alpha), || format!("v_i = u_i + α (got {} vs {})", r(vi), r(&(ui + alpha))))?;
    if let Some((theta_p, _)) = thresholds {
        require(theta_p >= vi, || format!("θ_p ≥ v_i (got {})", r(vi)))?;
    }
    for &j in &set {
        let (uj, vj) = (at(u, j, "j")?, at(v, j, "j")?);
        require(vj == &(uj - beta), || format!("v_j = u_j − β for j = {j}"))?;
        require(vj > vi, || format!("v_j > v_i for j = {j} (got {} ≤ {})", r(vj), r(vi)))?;
        if let Some((_, theta_r)) = thresholds {
            require(vj >= theta_r, || format!("v_j ≥ θ_r for j = {j} (got {})", r(vj)))?;
        }
    }
    let mut changed = set;
    changed.insert(i);
    unchanged_outside(u, v, &changed)
}

/// `v_i ≥ u_i − δ`, `v_j ≥ u_j + γ` on `M`, everyone else unchanged.
fn aggregation_moves(
    u: &WellbeingProfile,
    v: &WellbeingProfile,
    i: usize,
    group: &[usize],
    gamma: &Rational,
    delta: &Rational,
) -> Check {
    let set = group_set(group, i, u.len(), false)?;
    let (ui, vi) = (at(u, i, "i")?, at(v, i, "i")?);
    require(vi >= &(ui - delta), || format!("v_i ≥ u_i − δ (got {} < {})", r(vi), r(&(ui - delta))))?;
    for &j in &set {
        let (uj, vj) = (at(u, j, "j")?, at(v, j, "j")?);
        require(vj >= &(uj + gamma), || format!("v_j ≥ u_j + γ for j = {j}"))?;
    }
    let mut changed = set;
    changed.insert(i);
    unchanged_outside(u, v, &changed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Violated,
    PreconditionUnmet,
    /// The floating backend could not separate the two values; neither
    /// satisfied nor violated.
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Satisfied => "Satisfied",
            Status::Violated => "Violated",
            Status::PreconditionUnmet => "PreconditionUnmet",
            Status::Inconclusive => "Inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub status: Status,
    pub axiom: Axiom,
    /// Failed clause, or the verdict that contradicted the conclusion.
    pub detail: String,
    /// The ordering's comparison of the conclusion's two profiles.
    pub comparison: Option<Comparison>,
    /// The instance, kept for violated and inconclusive results.
    pub witness: Option<AxiomInstance>,
}

pub fn check_axiom(spec: &OrderingSpec, inst: &AxiomInstance) -> Result<CheckResult> {
    check_axiom_with(spec, inst, Tolerance::default())
}

pub fn check_axiom_with(spec: &OrderingSpec, inst: &AxiomInstance, tol: Tolerance) -> Result<CheckResult> {
    let axiom = inst.axiom();
    if let Err(unmet) = validate_preconditions(inst) {
        return Ok(CheckResult {
            status: Status::PreconditionUnmet,
            axiom,
            detail: unmet.0,
            comparison: None,
            witness: None,
        });
    }
    let (left, right, req) = inst.conclusion()?;
    let (ok, tie, detail, comparison) = if let AxiomInstance::ReplicationInvariance { k, .. } = inst {
        let base = spec.compare(&left, &right, tol)?;
        let lifted = spec.compare(&left.replicate(*k)?, &right.replicate(*k)?, tol)?;
        let ok = base.verdict == lifted.verdict;
        let detail = format!("verdict(u, v) = {}, verdict({k}*u, {k}*v) = {}", base.verdict, lifted.verdict);
        (ok, base.numeric_tie || lifted.numeric_tie, detail, lifted)
    } else {
        let c = spec.compare(&left, &right, tol)?;
        let ok = req.accepts(c.verdict);
        let (l, rname) = if inst.conclusion_is_v_over_u() { ("v", "u") } else { ("u", "v") };
        let detail = format!("requires {l} {} {rname}; ordering says {l} {} {rname}", req.symbol(), c.verdict);
        (ok, c.numeric_tie, detail, c)
    };
    let status = if tie {
        Status::Inconclusive
    } else if ok {
        Status::Satisfied
    } else {
        Status::Violated
    };
    Ok(CheckResult {
        status,
        axiom,
        detail,
        comparison: Some(comparison),
        witness: matches!(status, Status::Violated | Status::Inconclusive).then(|| inst.clone()),
    })
}

impl AxiomInstance {
    fn conclusion_is_v_over_u(&self) -> bool {
        !matches!(
            self,
            AxiomInstance::Anonymity { .. }
                | AxiomInstance::StrongPareto { .. }
                | AxiomInstance::WeakPareto { .. }
                | AxiomInstance::ReplicationInvariance { .. }
        )
    }
}
