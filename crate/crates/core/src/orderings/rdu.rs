//! Rank-discounted generalized utilitarianism: `Σ ρ^{−(i−1)} g(u_[i])` over
//! ascending ranks. With `g` the identity this is the geometric Gini ordering.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numeric::{compare_approx, to_f64, Approx, CompensatedSum, Rational, Tolerance};
use crate::orderings::gfunc::GFunction;
use crate::profile::WellbeingProfile;
use crate::verdict::{Comparison, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct RduParams {
    pub rho: Rational,
    pub g: GFunction,
}

impl RduParams {
    pub fn new(rho: Rational, g: GFunction) -> Result<Self> {
        let p = RduParams { rho, g };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rho.is_positive() {
            return Err(Error::invalid("discount factor ρ must be positive"));
        }
        self.g.validate()
    }

    /// Results about non-aggregation and ratio aggregation concern ρ > 1 only.
    pub fn is_discounting(&self) -> bool {
        self.rho > Rational::one()
    }

    pub(crate) fn discount(&self) -> Discount {
        Discount::new(&self.rho)
    }
}

/// Rank weights `ρ^{−r}` summed over runs of ranks.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Discount {
    ln_rho: f64,
}

impl Discount {
    pub(crate) fn new(rho: &Rational) -> Self {
        Discount {
            ln_rho: to_f64(&(rho - Rational::one())).ln_1p(),
        }
    }

    /// `Σ_{r=start}^{start+count−1} ρ^{−r}` and its relative error bound.
    pub(crate) fn run(&self, start: u64, count: u64) -> (f64, f64) {
        let eps = f64::EPSILON;
        let (s, c) = (start as f64, count as f64);
        if self.ln_rho == 0.0 {
            return (c, eps);
        }
        let lead = (-s * self.ln_rho).exp();
        let w = lead * (-c * self.ln_rho).exp_m1() / (-self.ln_rho).exp_m1();
        let rel = eps * (8.0 + 2.0 * (s + c) * self.ln_rho.abs());
        (w, rel)
    }
}

/// Value of `u` with an a-posteriori absolute error bound.
pub fn rdu_value(u: &WellbeingProfile, params: &RduParams) -> Result<Approx> {
    let discount = params.discount();
    let ranked = u.rank();
    let mut sum = CompensatedSum::new();
    let mut start = 0u64;
    for block in ranked.blocks() {
        let g = params.g.eval(&block.level)?;
        let (w, rel) = discount.run(start, block.count);
        let term = g.value * w;
        sum.add(Approx::new(term, term.abs() * rel + g.bound * w));
        start += block.count;
    }
    Ok(sum.finish())
}

/// Compares by value; values inside the combined error bound are reported as
/// `Equivalent` with `numeric_tie` set.
pub fn rdu_compare(
    u: &WellbeingProfile,
    v: &WellbeingProfile,
    params: &RduParams,
    tol: Tolerance,
) -> Result<Comparison> {
    let a = rdu_value(u, params)?;
    let b = rdu_value(v, params)?;
    let cmp = compare_approx(a, b, tol);
    Ok(Comparison {
        verdict: Verdict::from_ordering(cmp.ordering),
        margin: Some(cmp.margin),
        numeric_tie: cmp.tied,
        note: cmp.tied.then(|| format!("numeric tie: |Δ| = {:.3e} within bound", cmp.margin.abs())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};

    fn sqrt2() -> RduParams {
        RduParams::new(int(2), GFunction::Sqrt).unwrap()
    }

    #[test]
    fn small_examples() {
        let one = WellbeingProfile::from_ints(&[4]).unwrap();
        assert_eq!(rdu_value(&one, &sqrt2()).unwrap().value, 2.0);
        let two = WellbeingProfile::from_ints(&[4, 1]).unwrap();
        assert!((rdu_value(&two, &sqrt2()).unwrap().value - 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_profile_matches_geometric_series() {
        let rho = frac(101, 100);
        let p = RduParams::new(rho, GFunction::Sqrt).unwrap();
        for n in [1u64, 7, 1000, 1_000_000] {
            let u = WellbeingProfile::constant(int(100), n).unwrap();
            let got = rdu_value(&u, &p).unwrap();
            let expected = 10.0 * (1.0 - 1.01f64.powf(-(n as f64))) * 1.01 / 0.01;
            assert!((got.value - expected).abs() <= got.bound + 1e-9 * expected, "n={n}");
        }
    }

    #[test]
    fn domain_errors_propagate() {
        let u = WellbeingProfile::from_ints(&[-1, 3]).unwrap();
        assert!(matches!(rdu_value(&u, &sqrt2()), Err(Error::Domain { .. })));
        assert!(RduParams::new(int(0), GFunction::Identity).is_err());
    }

    #[test]
    fn reflexive_comparison_is_equivalent() {
        let u: WellbeingProfile = "90, 999*100, 999000*300".parse().unwrap();
        let c = rdu_compare(&u, &u, &sqrt2(), Tolerance::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Equivalent);
    }
}
