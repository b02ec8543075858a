//! The population-dependent sufficientarian-average rule
//! `Vⁿ(u) = λⁿ Σ_{u_i < θ_p} (u_i − θ_p) + (1 − λⁿ) · mean(u)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{format_rational, from_u64, is_unit_interval_open, Rational};
use crate::profile::{ceil_ratio, WellbeingProfile};

/// Axiom magnitudes the λⁿ schedule must accommodate: non-aggregation
/// `(α, β)` and ratio aggregation `(γ, δ, λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Magnitudes {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub ratio: Rational,
}

impl Magnitudes {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > self.beta && self.beta.is_positive()) {
            return Err(Error::invalid("need α > β > 0"));
        }
        if !(self.gamma > self.delta && self.delta.is_positive()) {
            return Err(Error::invalid("need γ > δ > 0"));
        }
        if !is_unit_interval_open(&self.ratio) {
            return Err(Error::RatioOutOfRange(format_rational(&self.ratio)));
        }
        Ok(())
    }
}

/// How λⁿ is chosen for each population size.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSchedule {
    Constant(Rational),
    Table(BTreeMap<u64, Rational>),
    /// Midpoint of the feasibility interval for the given magnitudes.
    Midpoint(Magnitudes),
    /// λⁿ = 0 for every n: plain average utilitarianism, kept as a reference.
    Utilitarian,
}

impl LambdaSchedule {
    pub fn validate(&self) -> Result<()> {
        let in_range = |r: &Rational| {
            if is_unit_interval_open(r) {
                Ok(())
            } else {
                Err(Error::invalid(format!("λⁿ = {} not in (0, 1)", format_rational(r))))
            }
        };
        match self {
            LambdaSchedule::Constant(r) => in_range(r),
            LambdaSchedule::Table(t) => t.values().try_for_each(in_range),
            LambdaSchedule::Midpoint(m) => m.validate(),
            LambdaSchedule::Utilitarian => Ok(()),
        }
    }

    pub fn lambda_for(&self, n: u64) -> Result<Rational> {
        match self {
            LambdaSchedule::Constant(r) => Ok(r.clone()),
            LambdaSchedule::Table(t) => t.get(&n).cloned().ok_or(Error::MissingLambda(n)),
            LambdaSchedule::Midpoint(m) => midpoint_lambda(n, m),
            LambdaSchedule::Utilitarian => Ok(Rational::zero()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaInterval {
    pub lower: Rational,
    pub upper: Rational,
    /// `max(lower, 0) < min(upper, 1)`
    pub feasible: bool,
}

impl LambdaInterval {
    pub fn clamped(&self) -> (Rational, Rational) {
        let lo = if self.lower.is_positive() { self.lower.clone() } else { Rational::zero() };
        let hi = if self.upper < Rational::one() { self.upper.clone() } else { Rational::one() };
        (lo, hi)
    }

    pub fn midpoint(&self) -> Option<Rational> {
        let (lo, hi) = self.clamped();
        self.feasible.then(|| (lo + hi) / from_u64(2))
    }
}

/// Range of λⁿ for which the rule satisfies both ratio aggregation and
/// minimal non-aggregation at population `n`:
/// `((n−1)β − α)/((n−1)(α+β)) ≤ λⁿ ≤ (⌈λn⌉γ − δ)/((n−1)δ + ⌈λn⌉γ)`.
pub fn lambda_feasible_interval(
    n: u64,
    alpha: &Rational,
    beta: &Rational,
    gamma: &Rational,
    delta: &Rational,
    ratio: &Rational,
) -> Result<LambdaInterval> {
    let m = Magnitudes {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma: gamma.clone(),
        delta: delta.clone(),
        ratio: ratio.clone(),
    };
    m.validate()?;
    if n < 2 {
        return Err(Error::invalid("feasibility interval needs n ≥ 2"));
    }
    let nm1 = from_u64(n - 1);
    let c = from_u64(ceil_ratio(ratio, n)?);
    let lower = (&nm1 * beta - alpha) / (&nm1 * (alpha + beta));
    let upper = (&c * gamma - delta) / (&nm1 * delta + &c * gamma);
    let (lo, hi) = LambdaInterval {
        lower: lower.clone(),
        upper: upper.clone(),
        feasible: false,
    }
    .clamped();
    Ok(LambdaInterval {
        feasible: lo < hi,
        lower,
        upper,
    })
}

fn midpoint_lambda(n: u64, m: &Magnitudes) -> Result<Rational> {
    if n == 1 {
        // Only the ratio-aggregation bound binds: λ ≤ (γ − δ)/γ.
        let upper = (&m.gamma - &m.delta) / &m.gamma;
        return Ok(upper / from_u64(2));
    }
    let interval = lambda_feasible_interval(n, &m.alpha, &m.beta, &m.gamma, &m.delta, &m.ratio)?;
    interval
        .midpoint()
        .ok_or_else(|| Error::invalid(format!("λⁿ interval empty at n = {n}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuffAvgParams {
    pub theta_p: Rational,
    pub lambda: LambdaSchedule,
    /// Compare raw Vⁿ values across population sizes instead of refusing.
    pub cross_size: bool,
}

impl SuffAvgParams {
    pub fn new(theta_p: Rational, lambda: LambdaSchedule) -> Result<Self> {
        let p = SuffAvgParams {
            theta_p,
            lambda,
            cross_size: false,
        };
        p.validate()?;
        Ok(p)
    }

    /// θ_p is not required to be positive: the Omelas example uses θ_p = 0.
    pub fn validate(&self) -> Result<()> {
        self.lambda.validate()
    }
}

/// `Σ_{u_i < θ} (u_i − θ)`, never positive.
pub(crate) fn shortfall(u: &WellbeingProfile, theta: &Rational) -> Rational {
    u.blocks()
        .iter()
        .filter(|b| &b.level < theta)
        .fold(Rational::zero(), |acc, b| acc + (&b.level - theta) * from_u64(b.count))
}

pub fn suffavg_value(u: &WellbeingProfile, p: &SuffAvgParams) -> Result<Rational> {
    let lambda = p.lambda.lambda_for(u.len())?;
    Ok(&lambda * shortfall(u, &p.theta_p) + (Rational::one() - &lambda) * u.mean())
}

/// Per-individual contribution gⁿ, so that `Σ gⁿ(u_i) = Vⁿ(u)`.
pub fn gn_eval(x: &Rational, n: u64, p: &SuffAvgParams) -> Result<Rational> {
    let lambda = p.lambda.lambda_for(n)?;
    let average_part = (Rational::one() - &lambda) * x / from_u64(n);
    Ok(if x < &p.theta_p {
        &lambda * (x - &p.theta_p) + average_part
    } else {
        average_part
    })
}
