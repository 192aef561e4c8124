//! Helpers around [`num_rational::BigRational`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// Exact rational number with unbounded numerator and denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(ExactError::ZeroDivision);
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// Canonical text form, `"5/3"` or `"-2"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn floor_i64(q: &Rational) -> i64 {
    floor(q).to_i64().expect("floor exceeds i64")
}

/// Square root in Q, if `q` is the square of a rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn to_i128(n: &BigInt) -> i128 {
    n.to_i128().expect("integer exceeds i128 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(format_rational(&rat(-10, 6)), "-5/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(floor_i64(&rat(3, 2)), 1);
        assert_eq!(floor_i64(&rat(-1, 3)), -1);
        assert_eq!(floor_i64(&int(-2)), -2);
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }
}
