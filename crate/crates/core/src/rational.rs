//! Exact rational numbers.
//!
//! Every rate, length and packing weight in the crate is carried as a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// `floor(q)` as an `i64`; panics only if the value does not fit.
pub fn floor_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("rational floor fits in i64")
}

pub fn ceil_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("rational ceil fits in i64")
}

/// Renders `q` as `p/q`, or as a bare integer when the denominator is one.
pub fn render(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()))
}
