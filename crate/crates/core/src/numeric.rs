//! Exact rationals for storage and preconditions, compensated floating point
//! for evaluations that involve powers of the discount factor or a
//! transcendental `g`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_u64(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Smallest integer not below `r`.
pub fn ceil(r: &Rational) -> BigInt {
    let (q, rem) = r.numer().div_mod_floor(r.denom());
    if rem.is_zero() {
        q
    } else {
        q + 1
    }
}

/// Parses `p/q`, an optionally signed integer, or an exact decimal such as `-12.25`.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    let s = text.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| format!("bad numerator `{p}`"))?;
        let den: BigInt = q.trim().parse().map_err(|_| format!("bad denominator `{q}`"))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
    if (whole.is_empty() && fraction.is_empty()) || !digits_ok(whole) || !digits_ok(fraction) {
        return Err(format!("not a number: `{s}`"));
    }
    let mantissa: BigInt = format!("{whole}{fraction}").parse().map_err(|_| format!("not a number: `{s}`"))?;
    let scale = num_traits::pow(BigInt::from(10u32), fraction.len());
    let value = Rational::new(mantissa, scale);
    Ok(if neg { -value } else { value })
}

/// Canonical text form: integers plainly, everything else as `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A floating result with an a-posteriori absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub bound: f64,
}

impl Approx {
    pub fn new(value: f64, bound: f64) -> Self {
        Approx { value, bound }
    }

    pub fn exact(value: f64) -> Self {
        Approx { value, bound: 0.0 }
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15e} ± {:.3e}", self.value, self.bound)
    }
}

/// Neumaier's variant of Kahan summation, tracking the magnitude needed for
/// the rounding bound.
#[derive(Debug, Clone, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    magnitude: f64,
    terms: usize,
    carried_bound: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: Approx) {
        let x = term.value;
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
        self.magnitude += x.abs();
        self.terms += 1;
        self.carried_bound += term.bound;
    }

    pub fn finish(&self) -> Approx {
        let value = self.sum + self.compensation;
        // Compensated summation error is O(eps·|value| + n·eps²·Σ|x|).
        let eps = f64::EPSILON;
        let rounding = 2.0 * eps * value.abs() + (self.terms as f64) * eps * eps * self.magnitude * 4.0;
        Approx::new(value, self.carried_bound + rounding)
    }
}

/// Relative tolerance used to declare a floating comparison a numeric tie.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance(1e-12)
    }
}

impl Tolerance {
    pub fn new(rel: f64) -> Result<Self> {
        if rel > 0.0 && rel.is_finite() {
            Ok(Tolerance(rel))
        } else {
            Err(Error::invalid("tolerance must be positive"))
        }
    }
}

/// The value of a profile under a value-function ordering.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(Approx),
}

impl Value {
    pub fn approx(&self) -> Approx {
        match self {
            Value::Exact(r) => Approx::new(to_f64(r), to_f64(r).abs() * f64::EPSILON),
            Value::Approx(a) => *a,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Approx(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{} (≈ {:.15e}, exact)", format_rational(r), to_f64(r)),
            Value::Approx(a) => a.fmt(f),
        }
    }
}

/// `a·x + b·y` over values that may be exact or approximate.
pub fn combine(a: &Rational, x: Value, b: &Rational, y: Value) -> Value {
    match (x, y) {
        (Value::Exact(x), Value::Exact(y)) => Value::Exact(a * x + b * y),
        (x, y) => {
            let (af, bf) = (to_f64(a), to_f64(b));
            let (x, y) = (x.approx(), y.approx());
            let mut s = CompensatedSum::new();
            s.add(Approx::new(af * x.value, af.abs() * x.bound + (af * x.value).abs() * f64::EPSILON));
            s.add(Approx::new(bf * y.value, bf.abs() * y.bound + (bf * y.value).abs() * f64::EPSILON));
            Value::Approx(s.finish())
        }
    }
}

/// Outcome of comparing two floating values under an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatComparison {
    pub ordering: Ordering,
    pub margin: f64,
    pub tied: bool,
}

pub fn compare_approx(a: Approx, b: Approx, tol: Tolerance) -> FloatComparison {
    let margin = a.value - b.value;
    let slack = a.bound + b.bound + tol.0 * a.value.abs().max(b.value.abs());
    if margin.abs() <= slack {
        FloatComparison {
            ordering: Ordering::Equal,
            margin,
            tied: margin != 0.0,
        }
    } else if margin > 0.0 {
        FloatComparison {
            ordering: Ordering::Greater,
            margin,
            tied: false,
        }
    } else {
        FloatComparison {
            ordering: Ordering::Less,
            margin,
            tied: false,
        }
    }
}

pub fn is_unit_interval_open(r: &Rational) -> bool {
    r.is_positive() && r < &Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_fractions_and_integers() {
        assert_eq!(parse_rational("3/10").unwrap(), frac(3, 10));
        assert_eq!(parse_rational("-12.25").unwrap(), frac(-49, 4));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("-").is_err());
    }

    #[test]
    fn ceil_handles_negatives() {
        assert_eq!(ceil(&frac(21, 10)), BigInt::from(3));
        assert_eq!(ceil(&frac(-21, 10)), BigInt::from(-2));
        assert_eq!(ceil(&int(4)), BigInt::from(4));
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let mut s = CompensatedSum::new();
        for x in [1e16, 1.0, -1e16, 1.0] {
            s.add(Approx::exact(x));
        }
        assert_eq!(s.finish().value, 2.0);
    }

    #[test]
    fn ties_within_bound() {
        let c = compare_approx(Approx::new(1.0, 1e-10), Approx::new(1.0 + 1e-11, 0.0), Tolerance::default());
        assert_eq!(c.ordering, Ordering::Equal);
        assert!(c.tied);
        let c = compare_approx(Approx::exact(2.0), Approx::exact(1.0), Tolerance::default());
        assert_eq!(c.ordering, Ordering::Greater);
    }
}
