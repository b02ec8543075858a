use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, to_f64, Approx, Rational, Value};

/// Increasing, concave, continuous transform applied to well-being levels.
#[derive(Debug, Clone, PartialEq)]
pub enum GFunction {
    Identity,
    /// `√x` on `x ≥ 0`.
    Sqrt,
    /// `ln(x + shift)` on `x > −shift`.
    LogShifted { shift: Rational },
    /// `cap·(1 − exp(−x/scale))` for `x ≥ 0`, continued linearly with slope
    /// `cap/scale` below zero. Bounded above by `cap`.
    SaturatingExp { cap: Rational, scale: Rational },
    PiecewiseLinear(PiecewiseLinear),
}

/// Linear interpolation through `points`, continued with the last slope to
/// the right. Defined for `x ≥ points[0].0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(Rational, Rational)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("piecewise-linear g needs at least two points"));
        }
        let mut last_slope: Option<Rational> = None;
        for w in points.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if x1 <= x0 {
                return Err(Error::invalid("piecewise-linear g: abscissae must strictly increase"));
            }
            let slope = (y1 - y0) / (x1 - x0);
            if !slope.is_positive() {
                return Err(Error::invalid("piecewise-linear g must be strictly increasing"));
            }
            if let Some(prev) = &last_slope {
                if &slope > prev {
                    return Err(Error::invalid("piecewise-linear g must be concave"));
                }
            }
            last_slope = Some(slope);
        }
        Ok(PiecewiseLinear { points })
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    fn eval(&self, x: &Rational) -> Option<Rational> {
        let first = &self.points[0];
        if x < &first.0 {
            return None;
        }
        let seg = self
            .points
            .windows(2)
            .find(|w| x <= &w[1].0)
            .unwrap_or_else(|| &self.points[self.points.len() - 2..]);
        let (x0, y0) = &seg[0];
        let (x1, y1) = &seg[1];
        Some(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }
}

impl GFunction {
    pub fn validate(&self) -> Result<()> {
        match self {
            GFunction::SaturatingExp { cap, scale } => {
                if !cap.is_positive() || !scale.is_positive() {
                    return Err(Error::invalid("saturating-exp g needs cap > 0 and scale > 0"));
                }
                Ok(())
            }
            GFunction::PiecewiseLinear(p) => PiecewiseLinear::new(p.points.clone()).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        match self {
            GFunction::Sqrt => !x.is_negative(),
            GFunction::LogShifted { shift } => (x + shift).is_positive(),
            GFunction::PiecewiseLinear(p) => x >= &p.points[0].0,
            GFunction::Identity | GFunction::SaturatingExp { .. } => true,
        }
    }

    /// Supremum of g, when finite.
    pub fn upper_bound(&self) -> Option<&Rational> {
        match self {
            GFunction::SaturatingExp { cap, .. } => Some(cap),
            _ => None,
        }
    }

    /// Exact value where g maps rationals to rationals.
    pub fn eval_exact(&self, x: &Rational) -> Option<Result<Rational>> {
        match self {
            GFunction::Identity => Some(Ok(x.clone())),
            GFunction::PiecewiseLinear(p) => Some(p.eval(x).ok_or_else(|| self.domain_error(x))),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, GFunction::Identity | GFunction::PiecewiseLinear(_))
    }

    pub fn eval(&self, x: &Rational) -> Result<Approx> {
        if !self.in_domain(x) {
            return Err(self.domain_error(x));
        }
        let eps = f64::EPSILON;
        let xf = to_f64(x);
        Ok(match self {
            GFunction::Identity => Approx::new(xf, xf.abs() * eps * 0.5),
            GFunction::Sqrt => {
                let v = xf.sqrt();
                Approx::new(v, v * eps * 1.5)
            }
            GFunction::LogShifted { shift } => {
                let v = to_f64(&(x + shift)).ln();
                Approx::new(v, eps * (1.0 + v.abs()))
            }
            GFunction::SaturatingExp { cap, scale } => {
                let c = to_f64(cap);
                let ratio = to_f64(&(x / scale));
                if x.is_negative() {
                    let v = c * ratio;
                    Approx::new(v, 2.0 * eps * v.abs())
                } else {
                    let v = -c * (-ratio).exp_m1();
                    Approx::new(v, eps * (4.0 * v.abs() + c * ratio.abs() * eps))
                }
            }
            GFunction::PiecewiseLinear(p) => {
                let v = to_f64(&p.eval(x).expect("domain checked"));
                Approx::new(v, v.abs() * eps * 0.5)
            }
        })
    }

    pub fn eval_value(&self, x: &Rational) -> Result<Value> {
        match self.eval_exact(x) {
            Some(r) => r.map(Value::Exact),
            None => self.eval(x).map(Value::Approx),
        }
    }

    fn domain_error(&self, x: &Rational) -> Error {
        Error::Domain {
            g: self.to_string(),
            value: format_rational(x),
        }
    }
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Identity => f.write_str("identity"),
            GFunction::Sqrt => f.write_str("sqrt"),
            GFunction::LogShifted { shift } => write!(f, "ln(x + {})", format_rational(shift)),
            GFunction::SaturatingExp { cap, scale } => write!(
                f,
                "{}·(1 − exp(−x/{}))",
                format_rational(cap),
                format_rational(scale)
            ),
            GFunction::PiecewiseLinear(p) => write!(f, "piecewise-linear({} points)", p.points.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{frac, int};

    #[test]
    fn sqrt_domain() {
        assert!(GFunction::Sqrt.eval(&int(-1)).is_err());
        assert_eq!(GFunction::Sqrt.eval(&int(4)).unwrap().value, 2.0);
    }

    #[test]
    fn saturating_exp_is_continuous_at_zero_and_bounded() {
        let g = GFunction::SaturatingExp { cap: int(10), scale: int(2) };
        let left = g.eval(&frac(-1, 1_000_000)).unwrap().value;
        let right = g.eval(&frac(1, 1_000_000)).unwrap().value;
        assert!((left - right).abs() < 2e-5);
        assert!(g.eval(&int(1000)).unwrap().value <= 10.0);
        // concave: midpoint above chord
        let a = g.eval(&int(0)).unwrap().value;
        let b = g.eval(&int(4)).unwrap().value;
        let m = g.eval(&int(2)).unwrap().value;
        assert!(m > (a + b) / 2.0);
    }

    #[test]
    fn piecewise_linear_validates_shape() {
        let ok = PiecewiseLinear::new(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        let g = GFunction::PiecewiseLinear(ok);
        assert_eq!(g.eval_exact(&int(2)).unwrap().unwrap(), frac(5, 2));
        assert_eq!(g.eval_exact(&int(5)).unwrap().unwrap(), int(4));
        assert!(g.eval_exact(&int(-1)).unwrap().is_err());
        assert!(PiecewiseLinear::new(vec![(int(0), int(0)), (int(1), int(1)), (int(2), int(3))]).is_err());
        assert!(PiecewiseLinear::new(vec![(int(0), int(1)), (int(1), int(1))]).is_err());
        assert!(PiecewiseLinear::new(vec![(int(0), int(0))]).is_err());
    }
}
