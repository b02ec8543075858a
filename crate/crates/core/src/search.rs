//! Randomized counterexample search with shrinking.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::axioms::{
    check_axiom_with, generate_instances, validate_preconditions, Axiom, AxiomInstance, AxiomParams, CheckResult,
    GeneratorConfig, Status,
};
use crate::error::{Error, Result};
use crate::numeric::{Rational, Tolerance};
use crate::orderings::OrderingSpec;
use crate::profile::WellbeingProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBudget {
    pub max_instances: u64,
    pub seed: u64,
    /// Inclusive population range.
    pub population: (u64, u64),
    /// Inclusive range for drawn levels.
    pub values: (Rational, Rational),
    /// Levels are drawn on a grid of this denominator.
    pub denominator: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub instance: AxiomInstance,
    pub result: CheckResult,
    pub shrink_steps: u64,
}

const CHUNK: u64 = 512;
/// Shrink effort cap, counted in profile positions examined over all candidate checks.
const SHRINK_WORK: u64 = 2_000_000;

/// Checks generated instances in index order and returns the first
/// violation, shrunk. Parallel and serial runs agree: within each chunk the
/// lowest violating index wins.
pub fn find_counterexample(
    spec: &OrderingSpec,
    axiom: Axiom,
    params: &AxiomParams,
    budget: &SearchBudget,
) -> Result<Option<Witness>> {
    find_counterexample_with(spec, axiom, params, budget, Tolerance::default())
}

pub fn find_counterexample_with(
    spec: &OrderingSpec,
    axiom: Axiom,
    params: &AxiomParams,
    budget: &SearchBudget,
    tol: Tolerance,
) -> Result<Option<Witness>> {
    spec.validate()?;
    if budget.max_instances == 0 {
        return Err(Error::invalid("search budget must be positive"));
    }
    let gen = generate_instances(GeneratorConfig {
        axiom,
        params: params.clone(),
        population: budget.population,
        values: budget.values.clone(),
        denominator: budget.denominator,
        seed: budget.seed,
    })?;
    let mut start = 0;
    while start < budget.max_instances {
        let end = (start + CHUNK).min(budget.max_instances);
        let hit = (start..end)
            .into_par_iter()
            .map(|idx| {
                let inst = gen.instance(idx);
                check_axiom_with(spec, &inst, tol).map(|r| (r.status == Status::Violated).then_some((inst, r)))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        match hit {
            Some(Ok(Some((instance, result)))) => {
                let w = Witness { instance, result, shrink_steps: 0 };
                return shrink_with(w, spec, tol).map(Some);
            }
            Some(Err(e)) => return Err(e),
            _ => {}
        }
        start = end;
    }
    Ok(None)
}

/// Shrinks a violated witness: population first, then level magnitudes,
/// until no candidate keeps the preconditions and the violation.
pub fn shrink(w: Witness, spec: &OrderingSpec) -> Result<Witness> {
    shrink_with(w, spec, Tolerance::default())
}

pub fn shrink_with(mut w: Witness, spec: &OrderingSpec, tol: Tolerance) -> Result<Witness> {
    let mut checks = SHRINK_WORK;
    let attempt = |cand: Option<Shape>, w: &mut Witness, checks: &mut u64| -> Result<bool> {
        if *checks == 0 {
            return Ok(false);
        }
        let Some(cand) = cand else { return Ok(false) };
        *checks = checks.saturating_sub(cand.size().max(1) as u64);
        let Some(inst) = cand.build(&w.instance) else { return Ok(false) };
        Ok(match still_violated(spec, &inst, tol)? {
            Some(r) => {
                *w = Witness { instance: inst, result: r, shrink_steps: w.shrink_steps + 1 };
                true
            }
            None => false,
        })
    };
    loop {
        let mut changed = false;
        // Population: drop runs of positions, halving the run length.
        let mut run = Shape::of(&w.instance).map_or(0, |s| s.size() / 2).max(1);
        loop {
            let mut start = 0;
            let mut shape = Shape::of(&w.instance);
            while let Some(current) = &shape {
                if start >= current.size() || checks == 0 {
                    break;
                }
                let drop: Vec<usize> = (start..(start + run).min(current.size())).filter(|p| !current.pinned.contains(p)).collect();
                if !drop.is_empty() && attempt(current.without_all(&drop), &mut w, &mut checks)? {
                    changed = true;
                    shape = Shape::of(&w.instance);
                } else {
                    start += run;
                }
            }
            if run == 1 || checks == 0 {
                break;
            }
            run /= 2;
        }
        if let AxiomInstance::ReplicationInvariance { u, v, k } = &w.instance {
            if *k > 2 {
                let cand = AxiomInstance::ReplicationInvariance { u: u.clone(), v: v.clone(), k: k - 1 };
                if let Some(r) = still_violated(spec, &cand, tol)? {
                    w = Witness { instance: cand, result: r, shrink_steps: w.shrink_steps + 1 };
                    changed = true;
                }
            }
        }
        // Magnitudes: move every position sharing a level (and change) at once.
        let Some(shape) = Shape::of(&w.instance) else { break };
        let mut current = shape.clone();
        for class in shape.classes() {
            if checks == 0 {
                break;
            }
            for x in simpler(&shape.u[class[0]]) {
                let next = current.with_levels(&class, &x);
                if next.weight() < current.weight() && attempt(Some(next.clone()), &mut w, &mut checks)? {
                    current = next;
                    changed = true;
                    break;
                }
            }
        }
        // Changes: shrink each nonzero v_p − u_p on its own.
        if let Some(v) = current.v.clone() {
            for p in 0..v.len() {
                let d = &v[p] - &current.u[p];
                if d.is_zero() || checks == 0 {
                    continue;
                }
                for nd in change_candidates(&d) {
                    let mut next = current.clone();
                    if let Some(nv) = next.v.as_mut() {
                        nv[p] = &current.u[p] + &nd;
                    }
                    if next.weight() < current.weight() && attempt(Some(next.clone()), &mut w, &mut checks)? {
                        current = next;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed || checks == 0 {
            break;
        }
    }
    Ok(w)
}

fn still_violated(spec: &OrderingSpec, inst: &AxiomInstance, tol: Tolerance) -> Result<Option<CheckResult>> {
    if validate_preconditions(inst).is_err() {
        return Ok(None);
    }
    let r = check_axiom_with(spec, inst, tol)?;
    Ok((r.status == Status::Violated).then_some(r))
}

/// Candidate replacements for a level, each closer to zero.
fn simpler(x: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    let t = x.trunc();
    if &t != x {
        out.push(t.clone());
    }
    if t.abs() >= Rational::from_integer(1.into()) {
        out.push(&t - Rational::from_integer(t.signum().to_integer()));
    }
    out.retain(|c| c != x);
    out
}

fn change_candidates(d: &Rational) -> Vec<Rational> {
    let mut out = simpler(d);
    out.push(Rational::from_integer(d.signum().to_integer()));
    out.push((d / Rational::from_integer(2.into())).trunc());
    out.retain(|c| c != d);
    out.dedup();
    out
}

/// The instance's profiles laid out positionally, with the bookkeeping
/// needed to delete a position or move a level.
#[derive(Clone)]
struct Shape {
    /// Paired profiles (`u`, `v`) moved together, or a single profile.
    u: Vec<Rational>,
    v: Option<Vec<Rational>>,
    /// Positions that may not be removed.
    pinned: Vec<usize>,
    group: Vec<usize>,
    perm: Vec<usize>,
    /// Replication invariance keeps two unrelated profiles end to end.
    split: Option<usize>,
}

impl Shape {
    fn of(inst: &AxiomInstance) -> Option<Shape> {
        let vec = |p: &WellbeingProfile| p.to_vec().ok();
        let base = |u: &WellbeingProfile, v: Option<&WellbeingProfile>, pinned: Vec<usize>, group: &[usize]| {
            Some(Shape {
                u: vec(u)?,
                v: match v {
                    Some(v) => Some(vec(v)?),
                    None => None,
                },
                pinned,
                group: group.to_vec(),
                perm: Vec::new(),
                split: None,
            })
        };
        use AxiomInstance as A;
        match inst {
            A::Anonymity { u, perm } => {
                let mut s = base(u, None, Vec::new(), &[])?;
                s.perm = perm.clone();
                Some(s)
            }
            A::StrongPareto { u, v } | A::WeakPareto { u, v } => base(u, Some(v), Vec::new(), &[]),
            A::PigouDalton { u, i, j, .. } => base(u, None, vec![*i, *j], &[]),
            A::ReplicationInvariance { u, v, .. } => {
                let mut all = vec(u)?;
                let split = all.len();
                all.extend(vec(v)?);
                Some(Shape { u: all, v: None, pinned: Vec::new(), group: Vec::new(), perm: Vec::new(), split: Some(split) })
            }
            A::MinimalNonAggregation { u, v, i, group, .. }
            | A::StrongNonAggregation { u, v, i, group, .. }
            | A::StrongNonAggThreshold { u, v, i, group, .. }
            | A::QuantitativeAggregation { u, v, i, group, .. }
            | A::RatioAggregation { u, v, i, group, .. }
            | A::StrongerNonAggregation { u, v, i, group, .. } => base(u, Some(v), vec![*i], group),
            A::MinimalAggregation { u, v, i, .. } => base(u, Some(v), vec![*i], &[]),
        }
    }

    fn size(&self) -> usize {
        self.u.len()
    }

    fn weight(&self) -> (usize, Rational) {
        let abs = |xs: &[Rational]| xs.iter().fold(Rational::zero(), |a, x| a + x.abs());
        let v = self.v.as_deref().map(abs).unwrap_or_else(Rational::zero);
        (self.u.len(), abs(&self.u) + v)
    }

    fn without_all(&self, drop: &[usize]) -> Option<Shape> {
        let n = self.u.len();
        let mut dropped = vec![false; n];
        for &p in drop {
            dropped[p] = true;
        }
        if self.pinned.iter().any(|&p| dropped[p]) {
            return None;
        }
        let mut sorted = drop.to_vec();
        sorted.sort_unstable();
        let gone = |x: usize| sorted.partition_point(|&d| d < x);
        if let Some(split) = self.split {
            let left = gone(split);
            if left == split || drop.len() - left == n - split {
                return None;
            }
        } else if drop.len() >= n {
            return None;
        }
        let keep = |xs: &[Rational]| -> Vec<Rational> {
            xs.iter().zip(&dropped).filter(|(_, &d)| !d).map(|(x, _)| x.clone()).collect()
        };
        let mut s = self.clone();
        s.u = keep(&self.u);
        s.v = self.v.as_deref().map(keep);
        s.pinned = self.pinned.iter().map(|&x| x - gone(x)).collect();
        s.group = self.group.iter().filter(|&&x| !dropped[x]).map(|&x| x - gone(x)).collect();
        if !self.perm.is_empty() {
            let mut targets: Vec<usize> = drop.iter().map(|&p| self.perm[p]).collect();
            targets.sort_unstable();
            s.perm = self
                .perm
                .iter()
                .filter(|x| targets.binary_search(x).is_err())
                .map(|&x| x - targets.partition_point(|&t| t < x))
                .collect();
        }
        s.split = self.split.map(|sp| sp - gone(sp));
        Some(s)
    }

    /// Positions grouped by level and change, in first-seen order.
    fn classes(&self) -> Vec<Vec<usize>> {
        let mut keys: HashMap<(Rational, Option<Rational>), usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for p in 0..self.u.len() {
            let key = (self.u[p].clone(), self.v.as_ref().map(|v| &v[p] - &self.u[p]));
            let c = *keys.entry(key).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[c].push(p);
        }
        out
    }

    fn with_levels(&self, ps: &[usize], x: &Rational) -> Shape {
        let mut s = self.clone();
        for &p in ps {
            if let Some(v) = s.v.as_mut() {
                let d = &v[p] - &s.u[p];
                v[p] = x + d;
            }
            s.u[p] = x.clone();
        }
        s
    }

    fn build(&self, like: &AxiomInstance) -> Option<AxiomInstance> {
        let prof = |xs: &[Rational]| WellbeingProfile::new(xs.to_vec()).ok();
        let u = prof(&self.u);
        let v = self.v.as_deref().and_then(prof);
        let idx = |k: usize| self.pinned[k];
        use AxiomInstance as A;
        Some(match like {
            A::Anonymity { .. } => A::Anonymity { u: u?, perm: self.perm.clone() },
            A::StrongPareto { .. } => A::StrongPareto { u: u?, v: v? },
            A::WeakPareto { .. } => A::WeakPareto { u: u?, v: v? },
            A::PigouDalton { epsilon, .. } => A::PigouDalton { u: u?, i: idx(0), j: idx(1), epsilon: epsilon.clone() },
            A::ReplicationInvariance { k, .. } => {
                let split = self.split?;
                A::ReplicationInvariance { u: prof(&self.u[..split])?, v: prof(&self.u[split..])?, k: *k }
            }
            A::MinimalNonAggregation { theta_p, theta_r, alpha, beta, worst_off, .. } => A::MinimalNonAggregation {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                theta_p: theta_p.clone(),
                theta_r: theta_r.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
                worst_off: *worst_off,
            },
            A::StrongNonAggregation { alpha, beta, .. } => A::StrongNonAggregation {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
            A::StrongNonAggThreshold { theta_p, theta_r, alpha, beta, .. } => A::StrongNonAggThreshold {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                theta_p: theta_p.clone(),
                theta_r: theta_r.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
            A::QuantitativeAggregation { m, gamma, delta, .. } => A::QuantitativeAggregation {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                m: *m,
                gamma: gamma.clone(),
                delta: delta.clone(),
            },
            A::RatioAggregation { lambda, gamma, delta, .. } => A::RatioAggregation {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                lambda: lambda.clone(),
                gamma: gamma.clone(),
                delta: delta.clone(),
            },
            A::MinimalAggregation { gamma, delta, .. } => {
                let n = self.u.len() as u64;
                A::MinimalAggregation { u: u?, v: v?, i: idx(0), gamma: gamma.clone(), delta: delta.clone(), n }
            }
            A::StrongerNonAggregation { theta_p, alpha, beta, .. } => A::StrongerNonAggregation {
                u: u?,
                v: v?,
                i: idx(0),
                group: self.group.clone(),
                theta_p: theta_p.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
        })
    }
}

/// Per-axiom tallies of one suite run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteRow {
    pub instances: u64,
    pub satisfied: u64,
    pub violated: u64,
    pub unmet: u64,
    pub inconclusive: u64,
    pub first_violation: Option<Witness>,
}

/// Runs `budget.max_instances` generated instances of `axiom`.
pub fn run_suite(
    spec: &OrderingSpec,
    axiom: Axiom,
    params: &AxiomParams,
    budget: &SearchBudget,
    tol: Tolerance,
) -> Result<SuiteRow> {
    let gen = generate_instances(GeneratorConfig {
        axiom,
        params: params.clone(),
        population: budget.population,
        values: budget.values.clone(),
        denominator: budget.denominator,
        seed: budget.seed,
    })?;
    let results: Vec<_> = (0..budget.max_instances)
        .into_par_iter()
        .map(|i| {
            let inst = gen.instance(i);
            check_axiom_with(spec, &inst, tol).map(|r| (inst, r))
        })
        .collect::<Result<_>>()?;
    let mut row = SuiteRow { instances: budget.max_instances, ..SuiteRow::default() };
    for (inst, r) in results {
        match r.status {
            Status::Satisfied => row.satisfied += 1,
            Status::PreconditionUnmet => row.unmet += 1,
            Status::Inconclusive => row.inconclusive += 1,
            Status::Violated => {
                row.violated += 1;
                if row.first_violation.is_none() {
                    let w = Witness { instance: inst, result: r, shrink_steps: 0 };
                    row.first_violation = Some(shrink_with(w, spec, tol)?);
                }
            }
        }
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};
    use crate::orderings::{GFunction, RduParams};

    fn budget(max: u64) -> SearchBudget {
        SearchBudget { max_instances: max, seed: 7, population: (2, 12), values: (int(0), int(40)), denominator: 2 }
    }

    fn agg_params() -> AxiomParams {
        AxiomParams {
            gamma: Some(int(2)),
            delta: Some(int(1)),
            lambda: Some(frac(1, 2)),
            m: Some(3),
            ..AxiomParams::default()
        }
    }

    #[test]
    fn leximin_breaks_quantitative_aggregation() {
        let w = find_counterexample(&OrderingSpec::Leximin, Axiom::QuantitativeAggregation, &agg_params(), &budget(200))
            .unwrap()
            .expect("witness");
        assert_eq!(w.result.status, Status::Violated);
        assert_eq!(check_axiom_with(&OrderingSpec::Leximin, &w.instance, Tolerance::default()).unwrap().status, Status::Violated);
        let again = shrink(w.clone(), &OrderingSpec::Leximin).unwrap();
        assert_eq!(again.instance, w.instance);
        assert_eq!(again.shrink_steps, w.shrink_steps);
    }

    #[test]
    fn search_is_deterministic() {
        let spec = OrderingSpec::Rdu(RduParams::new(frac(11, 10), GFunction::Identity).unwrap());
        let b = SearchBudget { population: (2, 40), ..budget(2000) };
        let a = find_counterexample(&spec, Axiom::RatioAggregation, &agg_params(), &b).unwrap();
        let c = find_counterexample(&spec, Axiom::RatioAggregation, &agg_params(), &b).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn shrinking_never_grows() {
        let spec = OrderingSpec::Leximin;
        let gen = generate_instances(GeneratorConfig {
            axiom: Axiom::QuantitativeAggregation,
            params: agg_params(),
            population: (8, 12),
            values: (int(0), int(40)),
            denominator: 2,
            seed: 3,
        })
        .unwrap();
        let mut seen = 0;
        for inst in gen.take(200) {
            let r = check_axiom_with(&spec, &inst, Tolerance::default()).unwrap();
            if r.status != Status::Violated {
                continue;
            }
            seen += 1;
            let before = inst.base().len();
            let w = shrink(Witness { instance: inst, result: r, shrink_steps: 0 }, &spec).unwrap();
            assert!(w.instance.base().len() <= before);
            assert!(validate_preconditions(&w.instance).is_ok());
            assert_eq!(check_axiom_with(&spec, &w.instance, Tolerance::default()).unwrap().status, Status::Violated);
        }
        assert!(seen > 0);
    }
}
