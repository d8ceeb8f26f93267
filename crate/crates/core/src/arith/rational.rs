//! Rational helpers on top of `BigRational`.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a/b"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Input(format!("cannot parse rational `{s}`"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Input(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(n, d))
}

/// Always `num/den`, the wire form used in JSON.
pub fn fmt_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn abs_num(x: &Rational) -> BigUint {
    x.numer().magnitude().clone()
}

pub fn den(x: &Rational) -> BigUint {
    x.denom().magnitude().clone()
}

/// Multiplicity of `p` in `m` (m > 0).
pub fn valuation_uint(m: &BigUint, p: &BigUint) -> u64 {
    if m.is_zero() {
        return u64::MAX;
    }
    if !(m % p).is_zero() {
        return 0;
    }
    // Divide by p, p^2, p^4, ... then walk back down.
    let mut powers = vec![p.clone()];
    let mut rest = m / p;
    let mut v: u64 = 1;
    loop {
        let last = powers.last().unwrap().clone();
        let (q, r) = rest.div_rem(&last);
        if !r.is_zero() {
            break;
        }
        rest = q;
        v += 1u64 << (powers.len() - 1);
        let sq = &last * &last;
        if sq.bits() > rest.bits() + 1 {
            break;
        }
        powers.push(sq);
    }
    for (k, pk) in powers.iter().enumerate().rev() {
        let (q, r) = rest.div_rem(pk);
        if r.is_zero() {
            rest = q;
            v += 1u64 << k;
        }
    }
    v
}

pub fn valuation_int(m: &BigInt, p: &BigUint) -> u64 {
    valuation_uint(m.magnitude(), p)
}

/// v_p of a nonzero rational.
pub fn valuation_rat(x: &Rational, p: &BigUint) -> i64 {
    valuation_int(x.numer(), p) as i64 - valuation_int(x.denom(), p) as i64
}

/// Exact k-th root of a nonnegative integer if it exists.
pub fn exact_root(m: &BigUint, k: u32) -> Option<BigUint> {
    let r = m.nth_root(k);
    if r.pow(k) == *m {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of a rational if it lies in Q.
pub fn rational_root(x: &Rational, k: u32) -> Option<Rational> {
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let n = exact_root(x.numer().magnitude(), k)?;
    let d = exact_root(x.denom().magnitude(), k)?;
    let sign = if x.is_negative() { Sign::Minus } else { Sign::Plus };
    Some(Rational::new(BigInt::from_biguint(sign, n), BigInt::from(d)))
}

pub fn pow_rat(x: &Rational, n: u64) -> Rational {
    let e = usize::try_from(n).expect("exponent fits usize");
    Rational::new_raw(
        num_traits::pow(x.numer().clone(), e),
        num_traits::pow(x.denom().clone(), e),
    )
}

pub fn rat_to_f64(x: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both down to keep the quotient representable.
    let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
    let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

pub fn is_unit(x: &Rational) -> bool {
    x.abs().is_one()
}

/// `serde(with = ...)` adapter writing rationals as `"num/den"` strings.
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Same adapter for `Vec<Rational>`.
pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), rat(-3, 2));
        assert_eq!(fmt_rational(&parse_rational(" 12 ").unwrap()), "12/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn valuations() {
        let p = BigUint::from(2u32);
        assert_eq!(valuation_uint(&BigUint::from(96u32), &p), 5);
        let big = BigUint::from(3u32) * BigUint::from(2u32).pow(1000);
        assert_eq!(valuation_uint(&big, &p), 1000);
        assert_eq!(valuation_rat(&rat(3, 8), &p), -3);
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(rational_root(&rat(-4, 9), 2), None);
        assert_eq!(rational_root(&int(2), 2), None);
    }
}
