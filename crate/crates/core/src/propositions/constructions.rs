//! The four constructive arguments: three impossibility chains ending in a
//! Pareto contradiction, and the leximin dominance chain.

use num_traits::{One, Signed, ToPrimitive};

use super::chain::{validate_chain, ChainBuilder, ChainKind, DerivationChain};
use crate::axioms::{AxiomInstance, WorstOff};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, from_u64, is_unit_interval_open, Rational};
use crate::orderings::leximin_compare;
use crate::profile::{ceil_ratio, WellbeingProfile};
use crate::verdict::Verdict;

/// Axiom magnitudes shared by the impossibility constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainParams {
    pub theta_p: Rational,
    pub theta_r: Rational,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
}

impl ChainParams {
    fn validate(&self) -> Result<()> {
        if !(self.theta_r > self.theta_p && self.theta_p.is_positive()) {
            return Err(Error::Guard("need θ_r > θ_p > 0".into()));
        }
        if !(self.alpha > self.beta && self.beta.is_positive()) {
            return Err(Error::Guard("need α > β > 0".into()));
        }
        if !(self.gamma > self.delta && self.delta.is_positive()) {
            return Err(Error::Guard("need γ > δ > 0".into()));
        }
        Ok(())
    }
}

/// A built chain with the integers and levels the construction chose.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub chain: DerivationChain,
    /// Base population size.
    pub n: u64,
    pub h: Option<u64>,
    pub l: Option<u64>,
    pub k: Option<u64>,
    /// `u̲` and `ū` (or `u*` and `v*` for the dominance chain).
    pub low: Option<Rational>,
    pub high: Option<Rational>,
}

/// Smallest natural `c` with `c·step > target`.
fn smallest_exceeding(step: &Rational, target: &Rational) -> Result<u64> {
    let q = (target / step).floor().to_integer();
    let c = if q.is_negative() { 1 } else { q.to_u64().map(|x| x + 1).unwrap_or(0) };
    if c == 0 || c > 1 << 32 {
        return Err(Error::Guard("construction needs an unreasonably large counter".into()));
    }
    Ok(c)
}

fn blocks(parts: &[(Rational, u64)]) -> Result<WellbeingProfile> {
    WellbeingProfile::from_blocks(parts.iter().cloned())
}

fn range(from: u64, to: u64) -> Vec<usize> {
    (from as usize..to as usize).collect()
}

fn checked(c: Construction) -> Result<Construction> {
    let report = validate_chain(&c.chain, None)?;
    match report.failures.first() {
        None => Ok(c),
        Some(f) => Err(Error::Guard(format!("construction failed to validate at step {}: {}", f.index, f.message))),
    }
}

/// Weak Pareto, quantitative aggregation and minimal non-aggregation are
/// incompatible: `l` non-aggregation steps raise the poor, then `h·l`
/// aggregation steps push each of them below where they started.
pub fn build_prop1_chain(p: &ChainParams, m: u64) -> Result<Construction> {
    p.validate()?;
    if m <= 2 {
        return Err(Error::Guard(format!("quantitative aggregation needs m > 2 (got {m})")));
    }
    let h = smallest_exceeding(&p.delta, &p.alpha)?;
    let l = smallest_exceeding(&p.beta, &p.gamma)?;
    let rich = h * l * m;
    let n = rich + l;
    let one = Rational::one();
    let low = &p.theta_p - &p.alpha;
    let high = &p.theta_r + from_u64(l) * &p.beta + &one;
    let raised = &low + &p.alpha;

    let stage = |t: u64| -> Result<WellbeingProfile> {
        blocks(&[
            (raised.clone(), t),
            (low.clone(), l - t),
            (&high - from_u64(t) * &p.beta, rich),
        ])
    };
    let start = stage(0)?;
    let mut b = ChainBuilder::new(start.clone());
    for t in 1..=l {
        let to = stage(t)?;
        b.push(
            to.clone(),
            AxiomInstance::MinimalNonAggregation {
                u: b.current.clone(),
                v: to,
                i: (t - 1) as usize,
                group: range(l, n),
                theta_p: p.theta_p.clone(),
                theta_r: p.theta_r.clone(),
                alpha: p.alpha.clone(),
                beta: p.beta.clone(),
                worst_off: WorstOff::BeforeChange,
            },
        )?;
    }
    let top = &high - from_u64(l) * &p.beta;
    let gained = &top + &p.gamma;
    let sunk = &raised - from_u64(h) * &p.delta;
    for poor in 0..l {
        for s in 1..=h {
            let done = poor * h * m + s * m;
            let to = blocks(&[
                (sunk.clone(), poor),
                (&raised - from_u64(s) * &p.delta, 1),
                (raised.clone(), l - poor - 1),
                (gained.clone(), done),
                (top.clone(), rich - done),
            ])?;
            b.push(
                to.clone(),
                AxiomInstance::QuantitativeAggregation {
                    u: b.current.clone(),
                    v: to,
                    i: poor as usize,
                    group: range(l + done - m, l + done),
                    m,
                    gamma: p.gamma.clone(),
                    delta: p.delta.clone(),
                },
            )?;
        }
    }
    let terminal = AxiomInstance::WeakPareto { u: start, v: b.current.clone() };
    checked(Construction {
        chain: b.finish(ChainKind::Contradiction, "prop1", Some(terminal)),
        n,
        h: Some(h),
        l: Some(l),
        k: None,
        low: Some(low),
        high: Some(high),
    })
}

/// Smallest `n ≥ 3` with `n − 1 ≥ ⌈λn⌉`.
pub fn prop2_default_population(lambda: &Rational) -> Result<u64> {
    (3u64..1 << 32)
        .find(|&n| ceil_ratio(lambda, n).map(|c| c < n).unwrap_or(false))
        .ok_or_else(|| Error::Guard("no population size with n − 1 ≥ ⌈λn⌉".into()))
}

/// Weak Pareto, Pigou-Dalton, replication invariance, ratio aggregation and
/// minimal non-aggregation are incompatible. `n` defaults to
/// [`prop2_default_population`].
pub fn build_prop2_chain(p: &ChainParams, lambda: &Rational, n: Option<u64>) -> Result<Construction> {
    p.validate()?;
    if !is_unit_interval_open(lambda) {
        return Err(Error::RatioOutOfRange(format_rational(lambda)));
    }
    let n = match n {
        Some(n) => n,
        None => prop2_default_population(lambda)?,
    };
    let need = ceil_ratio(lambda, n)?;
    if n < 2 || n - 1 < need {
        return Err(Error::Guard(format!("need n − 1 ≥ ⌈λn⌉ (n = {n}, ⌈λn⌉ = {need})")));
    }
    let l = smallest_exceeding(&p.beta, &p.gamma)?;
    let k = smallest_exceeding(&p.delta, &(from_u64(l) * &p.alpha))?;
    let kr = Rational::from_integer(k.into());
    let share = &p.alpha / &kr;
    let one = Rational::one();
    let low = (&p.theta_p + &p.delta - &p.alpha - from_u64(l - 1) * &share).min(&p.theta_p - &one);
    let high = &p.theta_r + from_u64(l) * &p.beta + &one;

    let u = blocks(&[(low.clone(), 1), (high.clone(), n - 1)])?;
    let u1 = blocks(&[(&low - &p.delta, 1), (&high + &p.gamma, n - 1)])?;
    let mut b = ChainBuilder::new(u.clone());
    b.push(
        u1.clone(),
        AxiomInstance::RatioAggregation {
            u: u.clone(),
            v: u1.clone(),
            i: 0,
            group: range(1, n),
            lambda: lambda.clone(),
            gamma: p.gamma.clone(),
            delta: p.delta.clone(),
        },
    )?;
    let lifted = u1.replicate(k)?;
    b.push(lifted, AxiomInstance::ReplicationInvariance { u: u1, v: u.clone(), k })?;

    let rich: Vec<usize> = (0..k * n).filter(|x| x % n != 0).map(|x| x as usize).collect();
    // One copy of the base layout: its poor member, then n − 1 rich.
    let copy = |poor: &Rational, rich: &Rational| vec![(poor.clone(), 1), (rich.clone(), n - 1)];
    for t in 1..=l {
        let poor = &low - &p.delta + from_u64(t - 1) * &share;
        let before = &high + &p.gamma - from_u64(t - 1) * &p.beta;
        let after = &before - &p.beta;
        let mut parts = copy(&(&poor + &p.alpha), &after);
        for _ in 1..k {
            parts.extend(copy(&poor, &after));
        }
        let to = blocks(&parts)?;
        b.push(
            to.clone(),
            AxiomInstance::MinimalNonAggregation {
                u: b.current.clone(),
                v: to,
                i: 0,
                group: rich.clone(),
                theta_p: p.theta_p.clone(),
                theta_r: p.theta_r.clone(),
                alpha: p.alpha.clone(),
                beta: p.beta.clone(),
                worst_off: WorstOff::BeforeChange,
            },
        )?;
        for s in 1..k {
            let mut parts = copy(&(&poor + &p.alpha - from_u64(s) * &share), &after);
            for c in 1..k {
                let level = if c <= s { &poor + &share } else { poor.clone() };
                parts.extend(copy(&level, &after));
            }
            let to = blocks(&parts)?;
            b.push(
                to,
                AxiomInstance::PigouDalton {
                    u: b.current.clone(),
                    i: 0,
                    j: (s * n) as usize,
                    epsilon: share.clone(),
                },
            )?;
        }
    }
    let terminal = AxiomInstance::WeakPareto { u: u.replicate(k)?, v: b.current.clone() };
    checked(Construction {
        chain: b.finish(ChainKind::Contradiction, "prop2", Some(terminal)),
        n,
        h: None,
        l: Some(l),
        k: Some(k),
        low: Some(low),
        high: Some(high),
    })
}

/// Under `n > h⌈λn⌉` and `hδ > α`, weak Pareto, replication invariance,
/// ratio aggregation and minimal non-aggregation are incompatible.
pub fn build_prop3_chain(p: &ChainParams, lambda: &Rational, h: u64, n: u64) -> Result<Construction> {
    p.validate()?;
    if !is_unit_interval_open(lambda) {
        return Err(Error::RatioOutOfRange(format_rational(lambda)));
    }
    let c = ceil_ratio(lambda, n)?;
    if h == 0 || n <= h * c {
        return Err(Error::Guard(format!("hypothesis n > h⌈λn⌉ fails (n = {n}, h = {h}, ⌈λn⌉ = {c})")));
    }
    if from_u64(h) * &p.delta <= p.alpha {
        return Err(Error::Guard(format!(
            "hypothesis hδ > α fails (h = {h}, δ = {}, α = {})",
            format_rational(&p.delta),
            format_rational(&p.alpha)
        )));
    }
    let k = smallest_exceeding(&p.beta, &p.gamma)?;
    let one = Rational::one();
    let low = &p.theta_p - &p.alpha;
    let high = &p.theta_r + from_u64(k) * &p.beta + &one;
    let raised = &low + &p.alpha;

    let u = blocks(&[(low.clone(), 1), (high.clone(), n - 1)])?;
    let start = u.replicate(k)?;
    let mut b = ChainBuilder::new(start);
    let rich: Vec<usize> = (0..k * n).filter(|x| x % n != 0).map(|x| x as usize).collect();
    for t in 1..=k {
        let after = &high - from_u64(t) * &p.beta;
        let mut parts = Vec::new();
        for copy in 0..k {
            let poor = if copy < t { raised.clone() } else { low.clone() };
            parts.push((poor, 1));
            parts.push((after.clone(), n - 1));
        }
        let to = blocks(&parts)?;
        b.push(
            to.clone(),
            AxiomInstance::MinimalNonAggregation {
                u: b.current.clone(),
                v: to,
                i: ((t - 1) * n) as usize,
                group: rich.clone(),
                theta_p: p.theta_p.clone(),
                theta_r: p.theta_r.clone(),
                alpha: p.alpha.clone(),
                beta: p.beta.clone(),
                worst_off: WorstOff::BeforeChange,
            },
        )?;
    }
    let top = &high - from_u64(k) * &p.beta;
    let w = blocks(&[(raised.clone(), 1), (top.clone(), n - 1)])?;
    b.push(w.clone(), AxiomInstance::ReplicationInvariance { u: w, v: u.clone(), k })?;
    for s in 1..=h {
        let to = blocks(&[
            (&raised - from_u64(s) * &p.delta, 1),
            (&top + &p.gamma, s * c),
            (top.clone(), n - 1 - s * c),
        ])?;
        b.push(
            to.clone(),
            AxiomInstance::RatioAggregation {
                u: b.current.clone(),
                v: to,
                i: 0,
                group: range(1 + (s - 1) * c, 1 + s * c),
                lambda: lambda.clone(),
                gamma: p.gamma.clone(),
                delta: p.delta.clone(),
            },
        )?;
    }
    let terminal = AxiomInstance::WeakPareto { u, v: b.current.clone() };
    checked(Construction {
        chain: b.finish(ChainKind::Contradiction, "prop3", Some(terminal)),
        n,
        h: Some(h),
        l: None,
        k: Some(k),
        low: Some(low),
        high: Some(high),
    })
}

/// The acceptable sacrifice `β(α) = α/2`, used when none is supplied.
pub fn default_beta_of_alpha(alpha: &Rational) -> Rational {
    alpha / from_u64(2)
}

fn replicated_perm(perm: &[usize], k: u64) -> Vec<usize> {
    let n = perm.len();
    (0..k as usize).flat_map(|c| perm.iter().map(move |&x| c * n + x)).collect()
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Anonymity, strong Pareto, replication invariance and strong
/// non-aggregation force `u ≻ v` whenever leximin says so. `beta_of_alpha`
/// gives an acceptable sacrifice for each gain.
pub fn build_prop4_chain(
    u: &WellbeingProfile,
    v: &WellbeingProfile,
    beta_of_alpha: &dyn Fn(&Rational) -> Rational,
) -> Result<Construction> {
    if leximin_compare(u, v) != Verdict::StrictlyBetter {
        return Err(Error::Guard(format!(
            "u must be leximin-better than v (verdict: {})",
            leximin_compare(u, v)
        )));
    }
    let n = u.len();
    let (ur, vr) = (u.rank(), v.rank());
    let (us, vs) = (ur.to_profile().to_vec()?, vr.to_profile().to_vec()?);
    let h = us.iter().zip(&vs).position(|(a, b)| a != b).expect("leximin strict implies a difference");
    let (pu, pv) = (ur.permutation(u)?, vr.permutation(v)?);
    let (u_sorted, v_sorted) = (ur.to_profile(), vr.to_profile());

    if us[h] >= vs[n as usize - 1] {
        let mut b = ChainBuilder::new(v.clone());
        b.push(v_sorted.clone(), AxiomInstance::Anonymity { u: v.clone(), perm: pv })?;
        b.push(u_sorted.clone(), AxiomInstance::StrongPareto { u: u_sorted.clone(), v: v_sorted })?;
        b.push(u.clone(), AxiomInstance::Anonymity { u: u_sorted, perm: inverse(&pu) })?;
        return checked(Construction {
            chain: b.finish(ChainKind::Dominance, "prop4", None),
            n,
            h: Some(h as u64),
            l: None,
            k: None,
            low: None,
            high: None,
        });
    }

    let (a, top_u, c) = (&vs[h], &us[h], &vs[n as usize - 1]);
    let quarter = (top_u - a) / from_u64(4);
    let u_star = a + &quarter;
    let alpha = quarter.clone();
    let target = a + from_u64(3) * &quarter;
    let v_star = c + Rational::one();
    let gap = &v_star - &target;
    let offered = beta_of_alpha(&alpha);
    if !offered.is_positive() {
        return Err(Error::Guard("β(α) must be positive".into()));
    }
    let beta_max = offered.min(alpha.clone()) / from_u64(2);
    let k = smallest_exceeding(&beta_max, &gap)?;
    let beta = &gap / from_u64(k);

    let prefix: Vec<(Rational, u64)> = us[..h].iter().map(|x| (x.clone(), 1)).collect();
    let rest = n - h as u64 - 1;
    let stage = |t: u64| -> Result<WellbeingProfile> {
        let mut parts = Vec::new();
        for copy in 0..k {
            parts.extend(prefix.iter().cloned());
            let slot = if copy < t { &u_star + &alpha } else { u_star.clone() };
            parts.push((slot, 1));
            parts.push((&v_star - from_u64(t) * &beta, rest));
        }
        blocks(&parts)
    };

    let kv = v.replicate(k)?;
    let kv_sorted = v_sorted.replicate(k)?;
    let ku_sorted = u_sorted.replicate(k)?;
    let mut b = ChainBuilder::new(kv.clone());
    b.push(kv_sorted.clone(), AxiomInstance::Anonymity { u: kv, perm: replicated_perm(&pv, k) })?;
    let w0 = stage(0)?;
    b.push(w0.clone(), AxiomInstance::StrongPareto { u: w0, v: kv_sorted })?;
    let losers: Vec<usize> = (0..k * n)
        .filter(|x| x % n > h as u64)
        .map(|x| x as usize)
        .collect();
    for t in 1..=k {
        let to = stage(t)?;
        b.push(
            to.clone(),
            AxiomInstance::StrongNonAggregation {
                u: b.current.clone(),
                v: to,
                i: ((t - 1) * n) as usize + h,
                group: losers.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
            },
        )?;
    }
    let wk = b.current.clone();
    b.push(ku_sorted.clone(), AxiomInstance::StrongPareto { u: ku_sorted.clone(), v: wk })?;
    let ku = u.replicate(k)?;
    b.push(ku.clone(), AxiomInstance::Anonymity { u: ku_sorted, perm: replicated_perm(&inverse(&pu), k) })?;
    if k > 1 {
        b.push(u.clone(), AxiomInstance::ReplicationInvariance { u: u.clone(), v: v.clone(), k })?;
    }
    checked(Construction {
        chain: b.finish(ChainKind::Dominance, "prop4", None),
        n,
        h: Some(h as u64),
        l: None,
        k: Some(k),
        low: Some(u_star),
        high: Some(v_star),
    })
}
