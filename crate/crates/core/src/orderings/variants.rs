//! Generalisations of the sufficientarian-average rule: several thresholds,
//! rank-weighted second term, bounded g on the average, and g applied to the
//! shortfall of the poor.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{combine, format_rational, from_u64, Approx, CompensatedSum, Rational, Value};
use crate::orderings::gfunc::GFunction;
use crate::orderings::suffavg::{shortfall, SuffAvgParams};
use crate::profile::WellbeingProfile;

/// A per-population-size table of weight vectors, or one vector for all n.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSchedule {
    Constant(Vec<Rational>),
    Table(BTreeMap<u64, Vec<Rational>>),
}

impl WeightSchedule {
    fn weights_for(&self, n: u64) -> Result<&[Rational]> {
        match self {
            WeightSchedule::Constant(w) => Ok(w),
            WeightSchedule::Table(t) => t.get(&n).map(Vec::as_slice).ok_or(Error::MissingLambda(n)),
        }
    }

    fn all(&self) -> Box<dyn Iterator<Item = &Vec<Rational>> + '_> {
        match self {
            WeightSchedule::Constant(w) => Box::new(std::iter::once(w)),
            WeightSchedule::Table(t) => Box::new(t.values()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiThresholdParams {
    /// θ_1 < … < θ_{k−1}
    pub thetas: Vec<Rational>,
    /// λ_1ⁿ, …, λ_kⁿ in (0, 1) summing to 1; λ_kⁿ weighs the mean.
    pub weights: WeightSchedule,
    pub cross_size: bool,
}

impl MultiThresholdParams {
    pub fn validate(&self) -> Result<()> {
        if self.thetas.is_empty() {
            return Err(Error::invalid("at least one threshold required"));
        }
        if self.thetas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("thresholds must strictly increase"));
        }
        self.weights.all().try_for_each(|w| self.check_simplex(w))
    }

    fn check_simplex(&self, w: &[Rational]) -> Result<()> {
        if w.len() != self.thetas.len() + 1 {
            return Err(Error::invalid(format!(
                "expected {} weights, got {}",
                self.thetas.len() + 1,
                w.len()
            )));
        }
        if let Some(bad) = w.iter().find(|x| !(x.is_positive() && **x < Rational::one())) {
            return Err(Error::invalid(format!("weight {} not in (0, 1)", format_rational(bad))));
        }
        let total: Rational = w.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("weights sum to {}", format_rational(&total))));
        }
        Ok(())
    }

    /// Whether every weight vector is strictly decreasing, as the rule's
    /// definition asks. Not enforced by `validate`.
    pub fn weights_decreasing(&self) -> bool {
        self.weights.all().all(|w| w.windows(2).all(|p| p[0] > p[1]))
    }
}

pub fn multithreshold_value(u: &WellbeingProfile, p: &MultiThresholdParams) -> Result<Rational> {
    let w = p.weights.weights_for(u.len())?;
    p.check_simplex(w)?;
    let k = p.thetas.len();
    let penalties = p
        .thetas
        .iter()
        .zip(w)
        .fold(Rational::zero(), |acc, (theta, lambda)| acc + lambda * shortfall(u, theta));
    Ok(penalties + &w[k] * u.mean())
}

/// Rank weights `w_[i]` for the second term, worst-off first.
#[derive(Debug, Clone, PartialEq)]
pub enum RankWeights {
    /// `w_[i] = 1/n`
    Uniform,
    Table(BTreeMap<u64, Vec<Rational>>),
}

impl RankWeights {
    fn check(w: &[Rational], n: u64) -> Result<()> {
        if w.len() as u64 != n {
            return Err(Error::invalid(format!("need {n} rank weights, got {}", w.len())));
        }
        if w.iter().any(|x| !x.is_positive()) {
            return Err(Error::invalid("rank weights must be positive"));
        }
        if w.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::invalid("rank weights must be nonincreasing in rank"));
        }
        let total: Rational = w.iter().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!("rank weights sum to {}", format_rational(&total))));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankWeightParams {
    pub base: SuffAvgParams,
    pub weights: RankWeights,
}

impl RankWeightParams {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if let RankWeights::Table(t) = &self.weights {
            for (n, w) in t {
                RankWeights::check(w, *n)?;
            }
        }
        Ok(())
    }
}

pub fn rankweighted_value(u: &WellbeingProfile, p: &RankWeightParams) -> Result<Rational> {
    let n = u.len();
    let lambda = p.base.lambda.lambda_for(n)?;
    let weighted = match &p.weights {
        RankWeights::Uniform => u.mean(),
        RankWeights::Table(t) => {
            let w = t.get(&n).ok_or(Error::MissingLambda(n))?;
            RankWeights::check(w, n)?;
            u.rank().iter().zip(w).fold(Rational::zero(), |acc, (x, wi)| acc + x * wi)
        }
    };
    Ok(&lambda * shortfall(u, &p.base.theta_p) + (Rational::one() - &lambda) * weighted)
}

/// Sufficientarian base plus a concave `g`; used by the bounded-g and
/// concave-poor variants.
#[derive(Debug, Clone, PartialEq)]
pub struct GVariantParams {
    pub base: SuffAvgParams,
    pub g: GFunction,
}

impl GVariantParams {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.g.validate()
    }
}

/// Exact sum when every g value is exact, compensated floating sum otherwise.
enum Accumulator {
    Exact(Rational),
    Float(CompensatedSum),
}

impl Accumulator {
    fn new(exact: bool) -> Self {
        if exact {
            Accumulator::Exact(Rational::zero())
        } else {
            Accumulator::Float(CompensatedSum::new())
        }
    }

    fn add(&mut self, value: Value, count: u64) {
        match (self, value) {
            (Accumulator::Exact(acc), Value::Exact(v)) => *acc += v * from_u64(count),
            (Accumulator::Float(acc), v) => {
                let a = v.approx();
                let c = count as f64;
                acc.add(Approx::new(a.value * c, a.bound * c + a.value.abs() * c * f64::EPSILON));
            }
            (Accumulator::Exact(_), Value::Approx(_)) => unreachable!("exact accumulator fed a float"),
        }
    }

    fn finish(self) -> Value {
        match self {
            Accumulator::Exact(r) => Value::Exact(r),
            Accumulator::Float(s) => Value::Approx(s.finish()),
        }
    }
}

/// `λⁿ Σ_{u_i<θ_p}(u_i − θ_p) + (1 − λⁿ)(1/n) Σ g(u_i)`
pub fn boundedg_value(u: &WellbeingProfile, p: &GVariantParams) -> Result<Value> {
    let n = u.len();
    let lambda = p.base.lambda.lambda_for(n)?;
    let mut acc = Accumulator::new(p.g.is_exact());
    for b in u.blocks() {
        acc.add(p.g.eval_value(&b.level)?, b.count);
    }
    let mean_g = acc.finish();
    let mean_g = combine(&(Rational::one() / from_u64(n)), mean_g, &Rational::zero(), Value::Exact(Rational::zero()));
    Ok(combine(
        &lambda,
        Value::Exact(shortfall(u, &p.base.theta_p)),
        &(Rational::one() - &lambda),
        mean_g,
    ))
}

/// `λⁿ Σ_{u_i<θ_p}(g(u_i) − g(θ_p)) + (1 − λⁿ)(1/n) Σ u_i`
pub fn concavepoor_value(u: &WellbeingProfile, p: &GVariantParams) -> Result<Value> {
    let lambda = p.base.lambda.lambda_for(u.len())?;
    let theta = &p.base.theta_p;
    let g_theta = p.g.eval_value(theta)?;
    let mut acc = Accumulator::new(p.g.is_exact());
    for b in u.blocks().iter().filter(|b| &b.level < theta) {
        acc.add(p.g.eval_value(&b.level)?, b.count);
    }
    let below: u64 = u.blocks().iter().filter(|b| &b.level < theta).map(|b| b.count).sum();
    let penalty = combine(&Rational::one(), acc.finish(), &-from_u64(below), g_theta);
    Ok(combine(&lambda, penalty, &(Rational::one() - &lambda), Value::Exact(u.mean())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};
    use crate::orderings::suffavg::{suffavg_value, LambdaSchedule};

    fn base(theta: i64, lambda: Rational) -> SuffAvgParams {
        SuffAvgParams {
            theta_p: int(theta),
            lambda: LambdaSchedule::Constant(lambda),
            cross_size: false,
        }
    }

    #[test]
    fn single_threshold_collapses_to_suffavg() {
        let u = WellbeingProfile::from_ints(&[-3, 1, 4, 9]).unwrap();
        let mt = MultiThresholdParams {
            thetas: vec![int(2)],
            weights: WeightSchedule::Constant(vec![frac(3, 5), frac(2, 5)]),
            cross_size: false,
        };
        mt.validate().unwrap();
        assert!(mt.weights_decreasing());
        assert_eq!(
            multithreshold_value(&u, &mt).unwrap(),
            suffavg_value(&u, &base(2, frac(3, 5))).unwrap()
        );
    }

    #[test]
    fn multithreshold_hand_value() {
        let u = WellbeingProfile::from_ints(&[-5, 10]).unwrap();
        let mt = MultiThresholdParams {
            thetas: vec![int(0)],
            weights: WeightSchedule::Constant(vec![frac(1, 3), frac(2, 3)]),
            cross_size: false,
        };
        assert_eq!(multithreshold_value(&u, &mt).unwrap(), int(0));
        assert!(!mt.weights_decreasing());
    }

    #[test]
    fn multithreshold_above_everything_is_scaled_mean() {
        let u = WellbeingProfile::from_ints(&[20, 30]).unwrap();
        let mt = MultiThresholdParams {
            thetas: vec![int(1), int(5)],
            weights: WeightSchedule::Constant(vec![frac(1, 2), frac(1, 3), frac(1, 6)]),
            cross_size: false,
        };
        mt.validate().unwrap();
        assert_eq!(multithreshold_value(&u, &mt).unwrap(), frac(25, 6));
    }

    #[test]
    fn multithreshold_rejects_broken_simplex() {
        let mt = MultiThresholdParams {
            thetas: vec![int(0)],
            weights: WeightSchedule::Constant(vec![frac(1, 2), frac(1, 3)]),
            cross_size: false,
        };
        assert!(mt.validate().is_err());
        assert!(multithreshold_value(&WellbeingProfile::from_ints(&[1]).unwrap(), &mt).is_err());
        let unordered = MultiThresholdParams {
            thetas: vec![int(3), int(1)],
            weights: WeightSchedule::Constant(vec![frac(1, 2), frac(1, 4), frac(1, 4)]),
            cross_size: false,
        };
        assert!(unordered.validate().is_err());
    }

    #[test]
    fn rank_weighted_examples() {
        let u = WellbeingProfile::from_ints(&[4, 0]).unwrap();
        let p = RankWeightParams {
            base: base(0, frac(1, 2)),
            weights: RankWeights::Table([(2u64, vec![frac(3, 4), frac(1, 4)])].into_iter().collect()),
        };
        p.validate().unwrap();
        assert_eq!(rankweighted_value(&u, &p).unwrap(), frac(1, 2));
        let uniform = RankWeightParams {
            base: base(3, frac(1, 4)),
            weights: RankWeights::Uniform,
        };
        let w = WellbeingProfile::from_ints(&[-2, 3, 8]).unwrap();
        assert_eq!(rankweighted_value(&w, &uniform).unwrap(), suffavg_value(&w, &uniform.base).unwrap());
        let increasing = RankWeightParams {
            base: base(0, frac(1, 2)),
            weights: RankWeights::Table([(2u64, vec![frac(1, 4), frac(3, 4)])].into_iter().collect()),
        };
        assert!(increasing.validate().is_err());
    }

    #[test]
    fn identity_g_reduces_both_variants() {
        let u = WellbeingProfile::from_ints(&[-4, 2, 7, 7]).unwrap();
        let p = GVariantParams {
            base: base(3, frac(2, 7)),
            g: GFunction::Identity,
        };
        let expected = Value::Exact(suffavg_value(&u, &p.base).unwrap());
        assert_eq!(boundedg_value(&u, &p).unwrap(), expected);
        assert_eq!(concavepoor_value(&u, &p).unwrap(), expected);
    }

    #[test]
    fn concave_poor_hand_value() {
        let u = WellbeingProfile::from_ints(&[1, 100]).unwrap();
        let p = GVariantParams {
            base: base(4, frac(1, 2)),
            g: GFunction::Sqrt,
        };
        let v = concavepoor_value(&u, &p).unwrap().approx();
        assert!((v.value - 24.75).abs() <= v.bound + 1e-14);
    }

    #[test]
    fn bounded_g_stays_below_cap() {
        let p = GVariantParams {
            base: base(1, frac(1, 3)),
            g: GFunction::SaturatingExp { cap: int(50), scale: int(10) },
        };
        let u: WellbeingProfile = "1000*5, 10*1000000".parse().unwrap();
        let v = boundedg_value(&u, &p).unwrap().approx().value;
        assert!(v < (2.0 / 3.0) * 50.0);
    }
}
