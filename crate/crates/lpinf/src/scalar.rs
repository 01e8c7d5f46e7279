//! Exact rational scalars.
//!
//! Everything in the crate is computed over `BigRational`; there is no
//! floating point anywhere. The textual form is `p` or `p/q` in lowest terms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `(-1)^e` as a scalar.
pub fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

pub fn is_odd(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

/// Parse `p` or `p/q`. Denominator zero is rejected.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let t = s.trim();
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("malformed rational {s:?}"),
    };
    match t.split_once('/') {
        None => t
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse {
                    line: 0,
                    column: 0,
                    message: format!("zero denominator in {s:?}"),
                });
            }
            Ok(BigRational::new(n, d))
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_unit_sign(x: &Q) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("6/4").unwrap(), qr(3, 2));
        assert_eq!(fmt_q(&parse_q("-6/4").unwrap()), "-3/2");
        assert_eq!(fmt_q(&q(0)), "0");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(sign(-3), q(-1));
        assert_eq!(sign(4), q(1));
    }
}
