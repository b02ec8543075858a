//! Derivation chains: sequences of profile transitions, each licensed by an
//! axiom instance, whose transitive closure either contradicts a Pareto
//! judgement or establishes a strict preference.

use std::fmt;

use crate::axioms::{validate_preconditions, AxiomInstance, Requirement};
use crate::error::Result;
use crate::numeric::Tolerance;
use crate::orderings::OrderingSpec;
use crate::profile::WellbeingProfile;
use crate::verdict::Verdict;

/// What a step asserts about `to` relative to `from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `to ≽ from`
    Weak,
    /// `to ≻ from`
    Strict,
    /// `to ∼ from`
    Equivalent,
    /// Replication invariance: the running claim about the base profiles
    /// carries over to their `k`-replications (`to = k * from`).
    Lift,
    /// Replication invariance, the other way (`from = k * to`).
    Descend,
}

impl Relation {
    pub fn tag(self) -> &'static str {
        match self {
            Relation::Weak => "weak",
            Relation::Strict => "strict",
            Relation::Equivalent => "equivalent",
            Relation::Lift => "lift",
            Relation::Descend => "descend",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        [Relation::Weak, Relation::Strict, Relation::Equivalent, Relation::Lift, Relation::Descend]
            .into_iter()
            .find(|r| r.tag() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainKind {
    Contradiction,
    Dominance,
}

impl ChainKind {
    pub fn tag(self) -> &'static str {
        match self {
            ChainKind::Contradiction => "contradiction",
            ChainKind::Dominance => "dominance",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationStep {
    pub from: WellbeingProfile,
    pub to: WellbeingProfile,
    pub justification: AxiomInstance,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivationChain {
    pub kind: ChainKind,
    pub label: String,
    pub steps: Vec<DerivationStep>,
    /// Pareto instance whose dominant profile is the chain's anchor and whose
    /// dominated profile is the chain's end; required for contradictions.
    pub terminal: Option<AxiomInstance>,
}

/// The running conclusion: `current ≽ anchor`, or `≻` when `strict`.
#[derive(Debug, Clone, PartialEq)]
pub struct Claim {
    pub anchor: WellbeingProfile,
    pub current: WellbeingProfile,
    pub strict: bool,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = if self.strict { "≻" } else { "≽" };
        write!(f, "({}) {sym} ({})", self.current, self.anchor)
    }
}

/// Which relation the justification licenses for `(from, to)`, or why it
/// licenses none.
fn licensed(step: &DerivationStep) -> std::result::Result<Relation, String> {
    let inst = &step.justification;
    if let AxiomInstance::ReplicationInvariance { u, k, .. } = inst {
        let kr = u.replicate(*k).map_err(|e| e.to_string())?;
        return if step.from == *u && step.to == kr {
            Ok(Relation::Lift)
        } else if step.from == kr && step.to == *u {
            Ok(Relation::Descend)
        } else {
            Err("replication instance does not match the step's profiles".into())
        };
    }
    let (left, right, req) = inst.conclusion().map_err(|e| e.to_string())?;
    let forward = left == step.to && right == step.from;
    let backward = req == Requirement::Equivalent && left == step.from && right == step.to;
    if !forward && !backward {
        return Err(format!("{} instance does not connect from → to", inst.axiom()));
    }
    Ok(match req {
        Requirement::AtLeast => Relation::Weak,
        Requirement::Strictly => Relation::Strict,
        Requirement::Equivalent => Relation::Equivalent,
        Requirement::SameVerdict => unreachable!(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure {
    /// Step index; `steps.len()` denotes the terminal step.
    pub index: usize,
    pub message: String,
}

/// What an ordering says about each step.
#[derive(Debug, Clone, PartialEq)]
pub struct LocatorReport {
    pub ordering: String,
    /// Steps (terminal = `steps.len()`) whose required relation the ordering denies.
    pub denied: Vec<usize>,
    pub first_denied: Option<usize>,
    /// Steps the ordering could not evaluate (domain errors, missing λⁿ, …).
    pub errors: Vec<StepFailure>,
    /// Steps whose comparison fell inside the floating error bound.
    pub ties: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub failures: Vec<StepFailure>,
    pub claim: Option<Claim>,
    pub locator: Option<LocatorReport>,
}

impl ChainReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-checks every precondition and the linkage of the chain; with `spec`,
/// also runs the violation locator.
pub fn validate_chain(chain: &DerivationChain, spec: Option<&OrderingSpec>) -> Result<ChainReport> {
    validate_chain_with(chain, spec, Tolerance::default())
}

pub fn validate_chain_with(chain: &DerivationChain, spec: Option<&OrderingSpec>, tol: Tolerance) -> Result<ChainReport> {
    let mut failures = Vec::new();
    let mut fail = |index: usize, message: String| failures.push(StepFailure { index, message });
    let mut claim: Option<Claim> = None;
    for (idx, step) in chain.steps.iter().enumerate() {
        if let Err(unmet) = validate_preconditions(&step.justification) {
            fail(idx, format!("{}: precondition fails: {unmet}", step.justification.axiom()));
        }
        match licensed(step) {
            Ok(rel) if rel == step.relation => {}
            Ok(rel) => fail(idx, format!("step claims {} but the instance licenses {}", step.relation.tag(), rel.tag())),
            Err(msg) => fail(idx, msg),
        }
        let c = claim.get_or_insert_with(|| Claim {
            anchor: step.from.clone(),
            current: step.from.clone(),
            strict: false,
        });
        if c.current != step.from {
            fail(idx, "linkage: step does not start where the previous one ended".into());
        }
        match step.relation {
            Relation::Weak | Relation::Equivalent => c.current = step.to.clone(),
            Relation::Strict => {
                c.current = step.to.clone();
                c.strict = true;
            }
            Relation::Lift | Relation::Descend => {
                let AxiomInstance::ReplicationInvariance { v, k, .. } = &step.justification else {
                    fail(idx, "replication step without a replication-invariance instance".into());
                    continue;
                };
                let kv = v.replicate(*k)?;
                let (expected_anchor, new_anchor) = if step.relation == Relation::Lift {
                    (v.clone(), kv)
                } else {
                    (kv, v.clone())
                };
                if c.anchor != expected_anchor {
                    fail(idx, "replication step: instance's v is not the claim's anchor".into());
                }
                c.anchor = new_anchor;
                c.current = step.to.clone();
            }
        }
    }
    let end = chain.steps.len();
    match (chain.kind, &chain.terminal, &claim) {
        (_, _, None) => fail(end, "chain has no steps".into()),
        (ChainKind::Contradiction, None, _) => fail(end, "contradiction chain lacks a terminal Pareto step".into()),
        (ChainKind::Contradiction, Some(t), Some(c)) => {
            let (dominant, dominated, strict) = match t {
                AxiomInstance::WeakPareto { u, v } => (u, v, true),
                AxiomInstance::StrongPareto { u, v } => (u, v, u != v),
                other => {
                    fail(end, format!("terminal step must be a Pareto instance, got {}", other.axiom()));
                    (&c.anchor, &c.current, false)
                }
            };
            if let Err(unmet) = validate_preconditions(t) {
                fail(end, format!("terminal {}: precondition fails: {unmet}", t.axiom()));
            }
            if dominant != &c.anchor || dominated != &c.current {
                fail(end, "terminal Pareto step must compare the chain's anchor with its end".into());
            }
            if !strict && !c.strict {
                fail(end, "terminal Pareto step is not strict; no contradiction".into());
            }
        }
        (ChainKind::Dominance, terminal, Some(c)) => {
            if terminal.is_some() {
                fail(end, "dominance chains carry no terminal step".into());
            }
            if !c.strict {
                fail(end, "dominance chain establishes only a weak preference".into());
            }
        }
    }
    let locator = match spec {
        Some(s) => Some(locate(chain, s, tol, claim.as_ref())?),
        None => None,
    };
    Ok(ChainReport { failures, claim, locator })
}

/// Evaluates `spec` on every step and reports the ones it denies.
fn locate(chain: &DerivationChain, spec: &OrderingSpec, tol: Tolerance, claim: Option<&Claim>) -> Result<LocatorReport> {
    let mut denied = Vec::new();
    let mut errors = Vec::new();
    let mut ties = Vec::new();
    for (idx, step) in chain.steps.iter().enumerate() {
        let outcome = match step.relation {
            Relation::Lift | Relation::Descend => {
                crate::axioms::check_axiom_with(spec, &step.justification, tol).map(|r| {
                    (r.status == crate::axioms::Status::Satisfied, r.status == crate::axioms::Status::Inconclusive)
                })
            }
            rel => spec.compare(&step.to, &step.from, tol).map(|c| {
                let ok = match rel {
                    Relation::Weak => c.verdict.at_least(),
                    Relation::Strict => c.verdict == Verdict::StrictlyBetter,
                    _ => c.verdict == Verdict::Equivalent,
                };
                (ok, c.numeric_tie)
            }),
        };
        match outcome {
            Ok((_, true)) => ties.push(idx),
            Ok((false, false)) => denied.push(idx),
            Ok((true, false)) => {}
            Err(e) => errors.push(StepFailure { index: idx, message: e.to_string() }),
        }
    }
    if let (Some(t), Some(_)) = (&chain.terminal, claim) {
        let end = chain.steps.len();
        let (dominant, dominated) = match t {
            AxiomInstance::WeakPareto { u, v } | AxiomInstance::StrongPareto { u, v } => (u, v),
            _ => unreachable!("validated above"),
        };
        let strict = !matches!(t, AxiomInstance::StrongPareto { u, v } if u == v);
        match spec.compare(dominant, dominated, tol) {
            Ok(c) if c.numeric_tie => ties.push(end),
            Ok(c) => {
                let ok = if strict { c.verdict == Verdict::StrictlyBetter } else { c.verdict.at_least() };
                if !ok {
                    denied.push(end);
                }
            }
            Err(e) => errors.push(StepFailure { index: end, message: e.to_string() }),
        }
    }
    Ok(LocatorReport {
        ordering: spec.to_string(),
        first_denied: denied.first().copied(),
        denied,
        errors,
        ties,
    })
}

/// Small builder used by the constructions: tracks the current profile.
pub(crate) struct ChainBuilder {
    pub current: WellbeingProfile,
    pub steps: Vec<DerivationStep>,
}

impl ChainBuilder {
    pub fn new(start: WellbeingProfile) -> Self {
        ChainBuilder { current: start, steps: Vec::new() }
    }

    /// Appends a step to `to`, justified by `inst`, with the relation the
    /// instance licenses.
    pub fn push(&mut self, to: WellbeingProfile, inst: AxiomInstance) -> Result<()> {
        let mut step = DerivationStep {
            from: self.current.clone(),
            to: to.clone(),
            justification: inst,
            relation: Relation::Weak,
        };
        step.relation = licensed(&step).map_err(crate::error::Error::Guard)?;
        self.steps.push(step);
        self.current = to;
        Ok(())
    }

    pub fn finish(self, kind: ChainKind, label: impl Into<String>, terminal: Option<AxiomInstance>) -> DerivationChain {
        DerivationChain {
            kind,
            label: label.into(),
            steps: self.steps,
            terminal,
        }
    }
}
