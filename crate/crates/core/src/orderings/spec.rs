//! Uniform dispatch over every implemented ordering.

use std::fmt;

use crate::error::Result;
use crate::numeric::{compare_approx, format_rational, to_f64, Tolerance, Value};
use crate::orderings::leximin::leximin_compare;
use crate::orderings::rdu::{rdu_compare, rdu_value, RduParams};
use crate::orderings::suffavg::{suffavg_value, SuffAvgParams};
use crate::orderings::variants::{
    boundedg_value, concavepoor_value, multithreshold_value, rankweighted_value, GVariantParams,
    MultiThresholdParams, RankWeightParams,
};
use crate::profile::WellbeingProfile;
use crate::verdict::{Comparison, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub enum OrderingSpec {
    Leximin,
    Rdu(RduParams),
    SuffAvg(SuffAvgParams),
    MultiThreshold(MultiThresholdParams),
    RankWeighted(RankWeightParams),
    BoundedG(GVariantParams),
    ConcavePoor(GVariantParams),
}

impl OrderingSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            OrderingSpec::Leximin => Ok(()),
            OrderingSpec::Rdu(p) => p.validate(),
            OrderingSpec::SuffAvg(p) => p.validate(),
            OrderingSpec::MultiThreshold(p) => p.validate(),
            OrderingSpec::RankWeighted(p) => p.validate(),
            OrderingSpec::BoundedG(p) | OrderingSpec::ConcavePoor(p) => p.validate(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderingSpec::Leximin => "leximin",
            OrderingSpec::Rdu(_) => "rdu",
            OrderingSpec::SuffAvg(_) => "suff-avg",
            OrderingSpec::MultiThreshold(_) => "multi-threshold",
            OrderingSpec::RankWeighted(_) => "rank-weighted",
            OrderingSpec::BoundedG(_) => "bounded-g",
            OrderingSpec::ConcavePoor(_) => "concave-poor",
        }
    }

    pub fn is_value_based(&self) -> bool {
        !matches!(self, OrderingSpec::Leximin)
    }

    /// Whether profiles of different sizes are compared at all.
    pub fn compares_across_sizes(&self) -> bool {
        match self {
            OrderingSpec::Leximin => false,
            OrderingSpec::Rdu(_) => true,
            OrderingSpec::SuffAvg(p) => p.cross_size,
            OrderingSpec::MultiThreshold(p) => p.cross_size,
            OrderingSpec::RankWeighted(p) => p.base.cross_size,
            OrderingSpec::BoundedG(p) | OrderingSpec::ConcavePoor(p) => p.base.cross_size,
        }
    }

    /// The value of `u`; `NotValueBased` for leximin.
    pub fn value(&self, u: &WellbeingProfile) -> Result<Value> {
        Ok(match self {
            OrderingSpec::Leximin => return Err(crate::error::Error::NotValueBased("leximin")),
            OrderingSpec::Rdu(p) => Value::Approx(rdu_value(u, p)?),
            OrderingSpec::SuffAvg(p) => Value::Exact(suffavg_value(u, p)?),
            OrderingSpec::MultiThreshold(p) => Value::Exact(multithreshold_value(u, p)?),
            OrderingSpec::RankWeighted(p) => Value::Exact(rankweighted_value(u, p)?),
            OrderingSpec::BoundedG(p) => boundedg_value(u, p)?,
            OrderingSpec::ConcavePoor(p) => concavepoor_value(u, p)?,
        })
    }

    pub fn compare(&self, u: &WellbeingProfile, v: &WellbeingProfile, tol: Tolerance) -> Result<Comparison> {
        match self {
            OrderingSpec::Leximin => Ok(match leximin_compare(u, v) {
                Verdict::Incomparable => Comparison::incomparable(format!(
                    "leximin does not compare population sizes {} and {}",
                    u.len(),
                    v.len()
                )),
                verdict => Comparison::plain(verdict),
            }),
            OrderingSpec::Rdu(p) => rdu_compare(u, v, p, tol),
            _ if u.len() != v.len() && !self.compares_across_sizes() => Ok(Comparison::incomparable(format!(
                "{} uses a population-dependent value function; sizes {} and {} are not compared (enable cross_size to compare raw values)",
                self.name(),
                u.len(),
                v.len()
            ))),
            _ => Ok(compare_values(&self.value(u)?, &self.value(v)?, tol)),
        }
    }
}

pub fn compare_values(a: &Value, b: &Value, tol: Tolerance) -> Comparison {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => Comparison {
            verdict: Verdict::from_ordering(x.cmp(y)),
            margin: Some(to_f64(&(x - y))),
            numeric_tie: false,
            note: None,
        },
        _ => {
            let cmp = compare_approx(a.approx(), b.approx(), tol);
            Comparison {
                verdict: Verdict::from_ordering(cmp.ordering),
                margin: Some(cmp.margin),
                numeric_tie: cmp.tied,
                note: cmp.tied.then(|| format!("numeric tie: |Δ| = {:.3e} within bound", cmp.margin.abs())),
            }
        }
    }
}

/// Compares `u` against `v` at the default tolerance.
pub fn swo_compare(spec: &OrderingSpec, u: &WellbeingProfile, v: &WellbeingProfile) -> Result<Comparison> {
    spec.compare(u, v, Tolerance::default())
}

impl fmt::Display for OrderingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingSpec::Leximin => write!(f, "leximin"),
            OrderingSpec::Rdu(p) => write!(f, "rdu(ρ={}, g={})", format_rational(&p.rho), p.g),
            OrderingSpec::SuffAvg(p) => write!(f, "suff-avg(θ_p={})", format_rational(&p.theta_p)),
            OrderingSpec::MultiThreshold(p) => write!(
                f,
                "multi-threshold(θ={})",
                p.thetas.iter().map(format_rational).collect::<Vec<_>>().join(",")
            ),
            OrderingSpec::RankWeighted(p) => write!(f, "rank-weighted(θ_p={})", format_rational(&p.base.theta_p)),
            OrderingSpec::BoundedG(p) => write!(f, "bounded-g(θ_p={}, g={})", format_rational(&p.base.theta_p), p.g),
            OrderingSpec::ConcavePoor(p) => {
                write!(f, "concave-poor(θ_p={}, g={})", format_rational(&p.base.theta_p), p.g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};
    use crate::orderings::gfunc::GFunction;
    use crate::orderings::suffavg::LambdaSchedule;

    fn omelas() -> OrderingSpec {
        OrderingSpec::SuffAvg(SuffAvgParams::new(int(0), LambdaSchedule::Constant(frac(1, 5))).unwrap())
    }

    #[test]
    fn leximin_permutation_is_equivalent() {
        let u = WellbeingProfile::from_ints(&[3, 1, 2]).unwrap();
        let v = u.permute(&[2, 0, 1]).unwrap();
        assert_eq!(swo_compare(&OrderingSpec::Leximin, &u, &v).unwrap().verdict, Verdict::Equivalent);
    }

    #[test]
    fn omelas_is_strictly_better() {
        let u: WellbeingProfile = "-100, 999999999*200".parse().unwrap();
        let v: WellbeingProfile = "0, 999999999*100".parse().unwrap();
        assert_eq!(swo_compare(&omelas(), &u, &v).unwrap().verdict, Verdict::StrictlyBetter);
    }

    #[test]
    fn cross_size_refused_by_default() {
        let u = WellbeingProfile::from_ints(&[1, 2]).unwrap();
        let v = WellbeingProfile::from_ints(&[1, 2, 3]).unwrap();
        let c = swo_compare(&omelas(), &u, &v).unwrap();
        assert_eq!(c.verdict, Verdict::Incomparable);
        assert!(c.note.is_some());
        let mut p = SuffAvgParams::new(int(0), LambdaSchedule::Constant(frac(1, 5))).unwrap();
        p.cross_size = true;
        let c = swo_compare(&OrderingSpec::SuffAvg(p), &u, &v).unwrap();
        assert_eq!(c.verdict, Verdict::StrictlyWorse);
    }

    #[test]
    fn rdu_compares_across_sizes() {
        let spec = OrderingSpec::Rdu(RduParams::new(frac(101, 100), GFunction::Sqrt).unwrap());
        let u: WellbeingProfile = "1000*100".parse().unwrap();
        let v: WellbeingProfile = "1000000*99".parse().unwrap();
        assert_eq!(swo_compare(&spec, &u, &v).unwrap().verdict, Verdict::StrictlyBetter);
        assert!(OrderingSpec::Leximin.value(&u).is_err());
    }
}
