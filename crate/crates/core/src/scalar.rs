//! The exact scalar abstraction every algorithm in the crate is written against.
//!
//! Floating point types are deliberately not admitted: the covering problems
//! are decided by exact equalities `<a, v> = 1`, and a rounding error there
//! changes which vertices a hyperplane covers.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// An exact ordered field.
///
/// Implemented for every `Ratio<T>` over a signed integer type. `Ratio<i64>`
/// and `Ratio<i128>` are fast but can overflow; `BigRational` cannot.
pub trait Exact:
    Clone + Ord + Hash + Debug + Display + num_traits::Num + Signed + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn ratio(numer: i64, denom: i64) -> Self;

    fn from_bigint(v: BigInt) -> Self;

    fn floor_int(&self) -> BigInt;

    fn ceil_int(&self) -> BigInt;

    fn is_integral(&self) -> bool;

    fn to_big(&self) -> BigRational;

    /// `None` when the value does not fit the backing integer type.
    fn from_big(v: &BigRational) -> Option<Self>;

    fn parse(s: &str) -> Result<Self>;
}

impl<T> Exact for Ratio<T>
where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Into<BigInt>
        + TryFrom<BigInt>
        + Send
        + Sync
        + 'static,
    Ratio<T>: FromStr,
{
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer out of range"))
    }

    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(
            T::from_i64(numer).expect("integer out of range"),
            T::from_i64(denom).expect("integer out of range"),
        )
    }

    fn from_bigint(v: BigInt) -> Self {
        Ratio::from_integer(T::try_from(v).ok().expect("integer out of range"))
    }

    fn floor_int(&self) -> BigInt {
        self.floor().to_integer().into()
    }

    fn ceil_int(&self) -> BigInt {
        self.ceil().to_integer().into()
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_big(&self) -> BigRational {
        BigRational::new(self.numer().clone().into(), self.denom().clone().into())
    }

    fn from_big(v: &BigRational) -> Option<Self> {
        let n = T::try_from(v.numer().clone()).ok()?;
        let d = T::try_from(v.denom().clone()).ok()?;
        Some(Ratio::new(n, d))
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (numer, denom) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: BigInt = numer
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let q: BigInt = denom
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if q == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Self::from_big(&BigRational::new(p, q))
            .ok_or_else(|| Error::Parse(format!("`{s}` does not fit the scalar type")))
    }
}

/// Renders `p` or `p/q` in lowest terms.
pub fn format<S: Exact>(v: &S) -> String {
    v.to_string()
}

/// Converts between two exact scalar types, failing on overflow.
pub fn convert<A: Exact, B: Exact>(v: &A) -> Option<B> {
    B::from_big(&v.to_big())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, SmallRational};

    #[test]
    fn renders_lowest_terms() {
        assert_eq!(format(&Rational::ratio(22, 12)), "11/6");
        assert_eq!(format(&Rational::ratio(-6, 2)), "-3");
        assert_eq!(format(&Rational::from_int(0)), "0");
        assert_eq!(format(&SmallRational::ratio(3, -9)), "-1/3");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(Rational::parse("11/6").unwrap(), Rational::ratio(11, 6));
        assert_eq!(Rational::parse("-3").unwrap(), Rational::from_int(-3));
        assert_eq!(Rational::parse("4/8").unwrap(), Rational::ratio(1, 2));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("x").is_err());
        assert!(SmallRational::parse("100000000000000000000").is_err());
    }

    #[test]
    fn floor_and_ceil() {
        let x = Rational::ratio(-7, 2);
        assert_eq!(x.floor_int(), BigInt::from(-4));
        assert_eq!(x.ceil_int(), BigInt::from(-3));
        assert!(Rational::from_int(5).is_integral());
    }
}
