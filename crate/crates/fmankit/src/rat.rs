//! Exact rational scalars.
//!
//! All coefficients in this crate are arbitrary-precision rationals in
//! canonical form (reduced, positive denominator), which `BigRational`
//! guarantees on construction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// `n/d` as an exact rational. Panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"num"` or `"num/den"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Renders in the same form `parse_rat` accepts: `"n"` or `"n/d"`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders with an explicit leading sign split off, for series pretty-printing.
pub(crate) fn format_rat_signed(r: &Rat) -> (bool, String) {
    (r.is_negative(), format_rat(&r.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-7", "3/4", "-9/4", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(parse_rat("6/8").unwrap(), rat(3, 4));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
