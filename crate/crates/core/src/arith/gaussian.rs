//! Gaussian rationals, used only on the archimedean side.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::logvalue::LogValue;
use super::rational::{parse_rational, Rational};
use super::weil_height;
use crate::error::{Error, Result};
use crate::mp::{Ball, CBall};

/// `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussRat { re, im: Rational::zero() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_real().then_some(&self.re)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |α|².
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Degree of Q(α) over Q.
    pub fn degree(&self) -> u32 {
        if self.is_real() {
            1
        } else {
            2
        }
    }

    /// Roots of unity in Q(i) are ±1 and ±i.
    pub fn is_root_of_unity(&self) -> bool {
        let one = Rational::one();
        (self.im.is_zero() && self.re.abs() == one) || (self.re.is_zero() && self.im.abs() == one)
    }

    /// Integers (A, B, C) with α = (A + Bi)/C, C > 0 minimal.
    pub fn common_form(&self) -> (BigInt, BigInt, BigInt) {
        let c = self.re.denom().lcm(self.im.denom());
        let a = (&self.re * Rational::from_integer(c.clone())).to_integer();
        let b = (&self.im * Rational::from_integer(c.clone())).to_integer();
        (a, b, c)
    }

    /// Absolute logarithmic height. For α ∉ Q it is half the log Mahler
    /// measure of the primitive minimal polynomial c²x² − 2ac·x + (a² + b²),
    /// whose two roots share the modulus |α|.
    pub fn height(&self) -> LogValue {
        if self.is_real() {
            return weil_height(&self.re);
        }
        let (a, b, c) = self.common_form();
        let c2 = &c * &c;
        let g = c2.gcd(&(BigInt::from(2) * &a * &c)).gcd(&(&a * &a + &b * &b));
        let lc = (&c2 / &g).magnitude().clone();
        let half = Rational::new(1.into(), 2.into());
        let mut h = LogValue::log_of(&lc).scale(&half);
        let n = self.norm();
        if n > Rational::one() {
            let l = &LogValue::log_of(n.numer().magnitude()) - &LogValue::log_of(n.denom().magnitude());
            h += &l.scale(&half);
        }
        h
    }

    pub fn mul(&self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn pow(&self, mut n: u64) -> GaussRat {
        let mut acc = GaussRat::real(Rational::one());
        let mut b = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&b);
            }
            n >>= 1;
            if n > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn sub_rational(&self, x: &Rational) -> GaussRat {
        GaussRat { re: &self.re - x, im: self.im.clone() }
    }

    /// log|α| at the archimedean place, as ½·log |α|².
    pub fn log_abs(&self) -> Result<LogValue> {
        if self.is_zero() {
            return Err(Error::Domain("log of |0| undefined".into()));
        }
        let n = self.norm();
        let l = &LogValue::log_of(n.numer().magnitude()) - &LogValue::log_of(n.denom().magnitude());
        Ok(l.scale(&Rational::new(1.into(), 2.into())))
    }

    /// max(0, log|α|) at the archimedean place.
    pub fn log_plus_abs(&self) -> LogValue {
        if self.norm() > Rational::one() {
            self.log_abs().expect("nonzero")
        } else {
            LogValue::zero()
        }
    }

    pub fn to_ball(&self, prec: usize) -> CBall {
        CBall { re: Ball::from_rat(&self.re, prec), im: Ball::from_rat(&self.im, prec) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            super::rational::rat_to_f64(&self.re),
            super::rational::rat_to_f64(&self.im),
        )
    }
}

impl From<Rational> for GaussRat {
    fn from(r: Rational) -> Self {
        GaussRat::real(r)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        let (a, b, c) = self.common_form();
        let sign = if b.is_negative() { "-" } else { "+" };
        let num = if a.is_zero() {
            format!("{}{}i", if b.is_negative() { "-" } else { "" }, b.abs())
        } else {
            format!("{a}{sign}{}i", b.abs())
        };
        if c.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{c}")
        }
    }
}

fn parse_imag(t: &str, whole: &str) -> Result<Rational> {
    let body = t.trim().strip_suffix('i').ok_or_else(|| bad(whole))?.trim();
    match body {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        b => {
            let b = b.strip_suffix('*').unwrap_or(b);
            parse_rational(b.strip_prefix('+').unwrap_or(b)).map_err(|_| bad(whole))
        }
    }
}

fn bad(s: &str) -> Error {
    Error::Input(format!("cannot parse Gaussian rational `{s}`"))
}

impl FromStr for GaussRat {
    type Err = Error;

    /// Accepts `a/b`, `(a+bi)/c`, `a+bi`, `x+yi` with rational x, y, or `bi`.
    fn from_str(s: &str) -> Result<GaussRat> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if !t.contains('i') {
            return Ok(GaussRat::real(parse_rational(&t)?));
        }
        if let Some(rest) = t.strip_prefix('(') {
            let (inner, tail) = rest.split_once(')').ok_or_else(|| bad(s))?;
            let z: GaussRat = inner.parse()?;
            let d = match tail {
                "" => Rational::one(),
                t => parse_rational(t.strip_prefix('/').ok_or_else(|| bad(s))?)?,
            };
            if d.is_zero() {
                return Err(bad(s));
            }
            return Ok(GaussRat::new(z.re / &d, z.im / d));
        }
        // Split at the last sign that is not the leading one.
        let bytes = t.as_bytes();
        let cut = (1..bytes.len()).rev().find(|&k| bytes[k] == b'+' || bytes[k] == b'-');
        match cut {
            Some(k) => Ok(GaussRat::new(
                parse_rational(&t[..k]).map_err(|_| bad(s))?,
                parse_imag(&t[k..], s)?,
            )),
            None => Ok(GaussRat::new(Rational::zero(), parse_imag(&t, s)?)),
        }
    }
}

impl Serialize for GaussRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_real() {
            s.serialize_str(&super::rational::fmt_rational(&self.re))
        } else {
            s.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for GaussRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<GaussRat, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn parse_forms() {
        let a: GaussRat = "(3+4i)/5".parse().unwrap();
        assert_eq!(a, GaussRat::new(rat(3, 5), rat(4, 5)));
        assert_eq!("3/5+4/5i".parse::<GaussRat>().unwrap(), a);
        assert_eq!("-i".parse::<GaussRat>().unwrap(), GaussRat::new(rat(0, 1), rat(-1, 1)));
        assert_eq!("2-3i".parse::<GaussRat>().unwrap(), GaussRat::new(rat(2, 1), rat(-3, 1)));
        assert_eq!("-7/2".parse::<GaussRat>().unwrap(), GaussRat::real(rat(-7, 2)));
        assert_eq!(a.to_string(), "(3+4i)/5");
        assert_eq!(a.to_string().parse::<GaussRat>().unwrap(), a);
        assert!("(1+i".parse::<GaussRat>().is_err());
    }

    #[test]
    fn heights() {
        let a: GaussRat = "(3+4i)/5".parse().unwrap();
        assert_eq!(a.height(), LogValue::log_of_u64(5).scale(&rat(1, 2)));
        // 1 + i: minimal polynomial x² − 2x + 2, Mahler measure 2.
        let b: GaussRat = "1+i".parse().unwrap();
        assert_eq!(b.height(), LogValue::log_of_u64(2).scale(&rat(1, 2)));
        assert!("i".parse::<GaussRat>().unwrap().is_root_of_unity());
        assert!(!a.is_root_of_unity());
    }
}
