//! Where rank-discounted utilitarianism meets non-aggregation and where it
//! breaks ratio aggregation.

use num_traits::{One, Zero};

use crate::axioms::{check_axiom, AxiomInstance, CheckResult, Status};
use crate::error::{Error, Result};
use crate::numeric::{combine, format_rational, is_unit_interval_open, to_f64, Rational, Tolerance, Value};
use crate::orderings::{compare_values, GFunction, OrderingSpec, RduParams};
use crate::profile::{ceil_ratio, WellbeingProfile};
use crate::verdict::Verdict;

/// Both sides of the non-aggregation condition
/// `g(θ_p) − g(θ_p − α) ≥ ρ/(ρ−1)·(g(θ_r + β) − g(θ_r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop5Report {
    pub lhs: Value,
    pub rhs: Value,
    /// `lhs ≥ rhs` beyond the combined error bound.
    pub holds: bool,
    /// The two sides could not be separated numerically.
    pub tie: bool,
    /// `(g(θ_r) − g(θ_r − β))/(ρ−1)`: the largest weighted loss an instance
    /// can actually produce when the losers sit at the top ranks.
    pub tight_rhs: Value,
    pub tight_holds: bool,
    /// Smallest `n` at which ratio aggregation fails, when a scan was run.
    pub failure_n: Option<u64>,
    pub note: Option<String>,
}

fn at_least(a: &Value, b: &Value) -> (bool, bool) {
    let c = compare_values(a, b, Tolerance::default());
    (c.verdict.at_least() && !c.numeric_tie, c.numeric_tie)
}

fn diff(g: &GFunction, hi: &Rational, lo: &Rational) -> Result<Value> {
    let one = Rational::one();
    Ok(combine(&one, g.eval_value(hi)?, &-one.clone(), g.eval_value(lo)?))
}

pub fn prop5_nonagg_condition(
    g: &GFunction,
    rho: &Rational,
    theta_p: &Rational,
    theta_r: &Rational,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Prop5Report> {
    g.validate()?;
    let one = Rational::one();
    if rho <= &one {
        return Err(Error::invalid(format!("need ρ > 1 (got {})", format_rational(rho))));
    }
    if theta_r <= theta_p {
        return Err(Error::invalid("need θ_r > θ_p"));
    }
    if !(alpha > beta && beta > &Rational::zero()) {
        return Err(Error::invalid("need α > β > 0"));
    }
    let lhs = diff(g, theta_p, &(theta_p - alpha))?;
    let coef = rho / (rho - &one);
    let rhs = combine(&coef, diff(g, &(theta_r + beta), theta_r)?, &Rational::zero(), Value::Exact(Rational::zero()));
    let tight = combine(
        &(&one / (rho - &one)),
        diff(g, theta_r, &(theta_r - beta))?,
        &Rational::zero(),
        Value::Exact(Rational::zero()),
    );
    let (holds, tie) = at_least(&lhs, &rhs);
    let (tight_holds, tight_tie) = at_least(&lhs, &tight);
    let note = if holds != tight_holds {
        Some("condition and tight bound disagree: no violating instance exists, yet the condition fails".to_string())
    } else if tie || tight_tie {
        Some("sides within numeric error bound".to_string())
    } else {
        None
    };
    Ok(Prop5Report {
        lhs,
        rhs,
        holds,
        tie,
        tight_rhs: tight,
        tight_holds,
        failure_n: None,
        note,
    })
}

/// `(ρ^{−n+⌈λn⌉−1} − ρ^{−n−1})/(ρ−1)`, or `None` when `⌈λn⌉ ≥ n`.
pub fn ratio_coefficient(rho: &Rational, lambda: &Rational, n: u64) -> Result<Option<f64>> {
    let c = ceil_ratio(lambda, n)?;
    if n < 2 || c >= n {
        return Ok(None);
    }
    let ln = to_f64(rho).ln();
    let nf = n as f64;
    let hi = ((-nf + c as f64 - 1.0) * ln).exp();
    let lo = ((-nf - 1.0) * ln).exp();
    Ok(Some((hi - lo) / (to_f64(rho) - 1.0)))
}

/// A ratio-aggregation failure for rank-discounted utilitarianism.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioFailure {
    /// First `n` at which the displayed inequality fails.
    pub display_n: u64,
    /// First `n ≥ display_n` at which the ordering itself is caught.
    pub witness_n: u64,
    pub coefficient: f64,
    pub instance: AxiomInstance,
    pub result: CheckResult,
    pub note: String,
}

const SCAN_LIMIT: u64 = 1 << 26;

/// The flat profile `n*u1`, with the worst-off losing `δ` and the top
/// `⌈λn⌉` gaining `γ`.
pub fn ratio_instance(lambda: &Rational, gamma: &Rational, delta: &Rational, u1: &Rational, n: u64) -> Result<AxiomInstance> {
    let c = ceil_ratio(lambda, n)?;
    if c >= n {
        return Err(Error::invalid(format!("⌈λn⌉ = {c} leaves nobody outside the gaining group at n = {n}")));
    }
    let u = WellbeingProfile::constant(u1.clone(), n)?;
    let v = WellbeingProfile::from_blocks([
        (u1 - delta, 1),
        (u1.clone(), n - 1 - c),
        (u1 + gamma, c),
    ])?;
    Ok(AxiomInstance::RatioAggregation {
        u,
        v,
        i: 0,
        group: ((n - c) as usize..n as usize).collect(),
        lambda: lambda.clone(),
        gamma: gamma.clone(),
        delta: delta.clone(),
    })
}

pub fn prop5_ratio_failure(
    g: &GFunction,
    rho: &Rational,
    lambda: &Rational,
    gamma: &Rational,
    delta: &Rational,
    u1: &Rational,
) -> Result<RatioFailure> {
    if !is_unit_interval_open(lambda) {
        return Err(Error::RatioOutOfRange(format_rational(lambda)));
    }
    if !(gamma > delta && delta > &Rational::zero()) {
        return Err(Error::invalid("need γ > δ > 0"));
    }
    let params = RduParams::new(rho.clone(), g.clone())?;
    let loss = diff(g, u1, &(u1 - delta))?.approx().value;
    let gain = diff(g, &(u1 + gamma), u1)?.approx().value;
    let mut display = None;
    for n in 2..SCAN_LIMIT {
        if let Some(coef) = ratio_coefficient(rho, lambda, n)? {
            if loss > coef * gain {
                display = Some((n, coef));
                break;
            }
        }
    }
    let (display_n, coefficient) = display.ok_or_else(|| Error::TooLarge(SCAN_LIMIT))?;
    let spec = OrderingSpec::Rdu(params);
    for n in display_n..SCAN_LIMIT {
        if ceil_ratio(lambda, n)? >= n {
            continue;
        }
        let instance = ratio_instance(lambda, gamma, delta, u1, n)?;
        let result = check_axiom(&spec, &instance)?;
        if result.status == Status::Violated {
            debug_assert_eq!(result.comparison.as_ref().map(|c| c.verdict), Some(Verdict::StrictlyWorse));
            let note = if n == display_n {
                "the ordering is caught at the displayed n".to_string()
            } else {
                format!(
                    "displayed inequality fails at n = {display_n}; the ordering is first caught at n = {n} (displayed weights are offset by one factor of ρ)"
                )
            };
            return Ok(RatioFailure {
                display_n,
                witness_n: n,
                coefficient,
                instance,
                result,
                note,
            });
        }
    }
    Err(Error::TooLarge(SCAN_LIMIT))
}
