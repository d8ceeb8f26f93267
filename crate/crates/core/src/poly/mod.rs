//! Integer polynomials and the modular machinery behind binomial factorization.

pub mod fp;
pub mod hensel;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::rational::Rational;
use crate::mp::CBall;

/// Dense integer polynomial, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        IntPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `b·x^n − a`.
    pub fn binomial(n: usize, a: &BigInt, b: &BigInt) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -a.clone();
        c[n] += b;
        IntPoly::new(c)
    }

    /// Primitive integer model of x^n − β with positive leading coefficient.
    pub fn binomial_model(n: usize, beta: &Rational) -> Self {
        IntPoly::binomial(n, beta.numer(), beta.denom())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content removed and leading coefficient made positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        let nz: Vec<(usize, &BigInt)> =
            o.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &nz {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Quotient when `d` divides `self` exactly in Z[x].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPoly::default());
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dl = d.lc();
        let dd = d.degree();
        let dnz: Vec<(usize, &BigInt)> =
            d.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&dl);
            if !rem.is_zero() {
                return None;
            }
            for &(i, c) in &dnz {
                r[k + i] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        // Horner over a common denominator.
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * n + c * &dpow;
            if k > 0 {
                dpow *= d;
            }
        }
        Rational::new(acc, dpow)
    }

    pub fn eval_ball(&self, z: &CBall) -> CBall {
        let prec = z.prec();
        let mut acc = CBall::real(crate::mp::Ball::from_int(&BigInt::zero(), prec));
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z);
            if !c.is_zero() {
                acc = acc.add(&CBall::real(crate::mp::Ball::from_int(c, prec)));
            }
        }
        acc
    }

    pub fn eval_f64(&self, re: f64, im: f64) -> (f64, f64) {
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for c in self.coeffs.iter().rev() {
            let (na, nb) = (a * re - b * im, a * im + b * re);
            a = na + c.to_f64().unwrap_or(f64::INFINITY);
            b = nb;
        }
        (a, b)
    }

    /// Sum of squared coefficients.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Order used for reports: degree, then coefficients from the constant up.
    pub fn report_cmp(&self, o: &IntPoly) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.coeffs.cmp(&o.coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show = !a.is_one() || k == 0;
            match (show, k) {
                (_, 0) => write!(f, "{a}")?,
                (true, 1) => write!(f, "{a}x")?,
                (false, 1) => write!(f, "x")?,
                (true, _) => write!(f, "{a}x^{k}")?,
                (false, _) => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Coefficients serialize as JSON numbers when they fit 64 bits, else strings.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| match c.to_i64() {
            Some(v) => serde_json::Value::from(v),
            None => serde_json::Value::from(c.to_string()),
        }))
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<IntPoly, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        let mut cs = Vec::with_capacity(raw.len());
        for v in raw {
            let c = match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("non-integer coefficient"))?,
                serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom)?,
                _ => return Err(serde::de::Error::custom("bad coefficient")),
            };
            cs.push(c);
        }
        Ok(IntPoly::new(cs))
    }
}

/// Centered residue in (−m/2, m/2].
pub fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn arithmetic() {
        let a = IntPoly::from_i64(&[-2, 0, 1]);
        let b = IntPoly::from_i64(&[2, 0, 1]);
        let p = a.mul(&b);
        assert_eq!(p, IntPoly::from_i64(&[-4, 0, 0, 0, 1]));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&IntPoly::from_i64(&[1, 1])), None);
        assert_eq!(IntPoly::from_i64(&[4, 2]).div_exact(&IntPoly::from_i64(&[2, 2])), None);
        assert_eq!(p.to_string(), "x^4 - 4");
        assert_eq!(IntPoly::from_i64(&[4, -1, 0, 2]).to_string(), "2x^3 - x + 4");
    }

    #[test]
    fn model_and_eval() {
        let f = IntPoly::binomial_model(3, &rat(-8, 27));
        assert_eq!(f, IntPoly::from_i64(&[8, 0, 0, 27]));
        assert_eq!(f.eval_rat(&rat(-2, 3)), rat(0, 1));
        assert_eq!(IntPoly::from_i64(&[-6, 4, 6]).primitive(), IntPoly::from_i64(&[-3, 2, 3]));
        assert_eq!(IntPoly::from_i64(&[6, -4]).primitive(), IntPoly::from_i64(&[-3, 2]));
    }

    #[test]
    fn ordering_and_json() {
        let mut v = vec![
            IntPoly::from_i64(&[4, 0, 0, 2, 0, 0, 1]),
            IntPoly::from_i64(&[2, 0, 1]),
            IntPoly::from_i64(&[-2, 0, 1]),
        ];
        v.sort_by(|a, b| a.report_cmp(b));
        assert_eq!(v[0], IntPoly::from_i64(&[-2, 0, 1]));
        let j = serde_json::to_string(&v[2]).unwrap();
        assert_eq!(j, "[4,0,0,2,0,0,1]");
        assert_eq!(serde_json::from_str::<IntPoly>(&j).unwrap(), v[2]);
        assert_eq!(symmetric_mod(&BigInt::from(7), &BigInt::from(10)), BigInt::from(-3));
    }
}
