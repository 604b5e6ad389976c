//! Exact rational helpers shared by every module.
//!
//! All exact quantities are [`Rational`] (arbitrary precision). On the wire
//! they are always written as `"p/q"` with `q > 0` and `gcd(p, q) = 1`,
//! including integers (`"1/1"`, `"0/1"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::GameError;

pub type Rational = BigRational;

/// `p/q` as a reduced rational. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Canonical `"p/q"` rendering.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"`, or a finite decimal literal such as `"0.25"`
/// (decimals are converted exactly, not through binary floating point).
pub fn parse_rational(s: &str) -> Result<Rational, GameError> {
    let t = s.trim();
    let bad = || GameError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(GameError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(t).ok_or_else(bad)
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        numer = -numer;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Exact rational from a finite `f64`, going through its shortest decimal
/// representation so that `0.1` becomes `1/10`.
pub fn rational_from_f64(x: f64) -> Result<Rational, GameError> {
    if !x.is_finite() {
        return Err(GameError::Parse(format!("non-finite number {x}")));
    }
    parse_decimal(&format!("{x:e}")).ok_or_else(|| GameError::Parse(format!("bad number {x}")))
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Shapley weights `(s-1)!(n-s)!/n!` for `s = 1..=n`; index 0 is unused (zero).
pub fn shapley_weights(n: usize) -> Vec<Rational> {
    let n_fact = factorial(n);
    let mut out = vec![zero()];
    for s in 1..=n {
        out.push(Rational::new(factorial(s - 1) * factorial(n - s), n_fact.clone()));
    }
    out
}
