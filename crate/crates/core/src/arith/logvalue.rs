//! Exact rational combinations of logarithms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use astro_float::BigFloat;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::primes::{factor, ser_uint, UintRepr};
use super::rational::{fmt_rational, parse_rational, Rational};
use crate::mp;

/// A finite sum `Σ q_m · log m`.
///
/// Keys are pairwise coprime integers ≥ 2. Every key is prime unless the
/// factorization backend ran out of budget, in which case the cofactor is kept
/// whole; coprimality then still makes the representation faithful, because
/// pairwise coprime integers > 1 are multiplicatively independent.
#[derive(Clone, Default)]
pub struct LogValue {
    terms: BTreeMap<BigUint, Rational>,
    /// True when every key is known to be prime.
    primal: bool,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue { terms: BTreeMap::new(), primal: true }
    }

    /// `log m` for a positive integer m.
    pub fn log_of(m: &BigUint) -> Self {
        Self::log_of_scaled(m, &Rational::one())
    }

    pub fn log_of_u64(m: u64) -> Self {
        Self::log_of(&BigUint::from(m))
    }

    /// `q · log m`.
    pub fn log_of_scaled(m: &BigUint, q: &Rational) -> Self {
        assert!(!m.is_zero(), "log of zero");
        let mut out = LogValue::zero();
        if m.is_one() || q.is_zero() {
            return out;
        }
        let f = factor(m);
        for (p, e) in f.primes {
            out.terms.insert(p, q * Rational::from_integer(e.into()));
        }
        if f.unsplit.is_empty() {
            return out;
        }
        let mut items: Vec<(BigUint, Rational)> = out.terms.into_iter().collect();
        for u in f.unsplit {
            items.push((u, q.clone()));
        }
        refine(items)
    }

    /// `q · log p` for a key already known to be prime.
    pub(crate) fn prime_term(p: &BigUint, q: Rational) -> Self {
        let mut out = LogValue::zero();
        if !q.is_zero() {
            out.terms.insert(p.clone(), q);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every key is a proven prime.
    pub fn is_canonical(&self) -> bool {
        self.primal
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &BigUint) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return LogValue::zero();
        }
        LogValue {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * q)).collect(),
            primal: self.primal,
        }
    }

    /// Value at `prec` bits, summed in key order.
    pub fn numeric(&self, prec: usize) -> BigFloat {
        let wp = prec + 32;
        let mut cc = mp::consts();
        let mut acc = mp::zero(wp);
        for (k, q) in &self.terms {
            let l = mp::from_uint(k, wp).ln(wp, mp::RM, &mut cc);
            let t = mp::mul_rat(&l, q, wp);
            acc = acc.add(&t, wp, mp::RM);
        }
        mp::round(&acc, prec)
    }

    pub fn to_f64(&self) -> f64 {
        mp::to_f64(&self.numeric(128))
    }

    /// Sign of the value, decided at increasing precision (None for zero).
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        let mut prec = 128;
        loop {
            let v = mp::to_f64(&self.numeric(prec));
            // Nonzero LogValues are bounded away from zero; the check only
            // guards against a cancellation tighter than f64 can show.
            if v.abs() > 1e-30 || prec > 4096 {
                return if v > 0.0 { 1 } else { -1 };
            }
            prec *= 4;
        }
    }

    fn add_items(&self, other: &LogValue, sign: i32) -> LogValue {
        if self.primal && other.primal {
            let mut terms = self.terms.clone();
            for (k, v) in &other.terms {
                let e = terms.entry(k.clone()).or_insert_with(Rational::zero);
                if sign > 0 {
                    *e += v;
                } else {
                    *e -= v;
                }
            }
            terms.retain(|_, v| !v.is_zero());
            return LogValue { terms, primal: true };
        }
        let mut items: Vec<(BigUint, Rational)> =
            self.terms.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (k, v) in &other.terms {
            items.push((k.clone(), if sign > 0 { v.clone() } else { -v.clone() }));
        }
        refine(items)
    }
}

/// Coprime-base refinement: rewrite `Σ q_i log b_i` over pairwise coprime
/// bases, then drop zero coefficients.
fn refine(mut items: Vec<(BigUint, Rational)>) -> LogValue {
    loop {
        items.retain(|(b, q)| !b.is_one() && !q.is_zero());
        items.sort_by(|a, b| a.0.cmp(&b.0));
        // Merge equal bases.
        let mut merged: Vec<(BigUint, Rational)> = Vec::with_capacity(items.len());
        for (b, q) in items.drain(..) {
            match merged.last_mut() {
                Some((lb, lq)) if *lb == b => *lq += q,
                _ => merged.push((b, q)),
            }
        }
        items = merged;
        let mut split = None;
        'find: for i in 0..items.len() {
            for j in i + 1..items.len() {
                let g = items[i].0.gcd(&items[j].0);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'find;
                }
            }
        }
        let Some((i, j, g)) = split else { break };
        let (bj, qj) = items.swap_remove(j);
        let (bi, qi) = items.swap_remove(i);
        let sum = &qi + &qj;
        items.push((&bi / &g, qi));
        items.push((&bj / &g, qj));
        items.push((g, sum));
    }
    let mut out = LogValue { terms: BTreeMap::new(), primal: true };
    for (b, q) in items {
        if q.is_zero() {
            continue;
        }
        if b.bits() > 640 || !super::primes::is_prime(&b) {
            out.primal = false;
        }
        out.terms.insert(b, q);
    }
    out
}

impl PartialEq for LogValue {
    fn eq(&self, other: &Self) -> bool {
        if self.primal && other.primal {
            return self.terms == other.terms;
        }
        (self - other).is_zero()
    }
}

impl Eq for LogValue {}

impl Add for &LogValue {
    type Output = LogValue;
    fn add(self, rhs: &LogValue) -> LogValue {
        self.add_items(rhs, 1)
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        &self + &rhs
    }
}

impl AddAssign<&LogValue> for LogValue {
    fn add_assign(&mut self, rhs: &LogValue) {
        *self = &*self + rhs;
    }
}

impl Sub for &LogValue {
    type Output = LogValue;
    fn sub(self, rhs: &LogValue) -> LogValue {
        self.add_items(rhs, -1)
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        &self - &rhs
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        self.scale(&-Rational::one())
    }
}

impl Mul<&Rational> for &LogValue {
    type Output = LogValue;
    fn mul(self, q: &Rational) -> LogValue {
        self.scale(q)
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        iter.fold(LogValue::zero(), |a, b| &a + &b)
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogValue({self})")
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let a = q.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if a.is_one() {
                write!(f, "log {k}")?;
            } else {
                write!(f, "{a}·log {k}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct WireOut<'a> {
    terms: Vec<(KeyOut<'a>, String)>,
}

struct KeyOut<'a>(&'a BigUint);

impl Serialize for KeyOut<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_uint(self.0, s)
    }
}

#[derive(Deserialize)]
struct WireIn {
    terms: Vec<(UintRepr, String)>,
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WireOut {
            terms: self.terms.iter().map(|(k, q)| (KeyOut(k), fmt_rational(q))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<LogValue, D::Error> {
        let w = WireIn::deserialize(d)?;
        let mut out = LogValue::zero();
        for (k, q) in w.terms {
            let k = k.into_uint::<D::Error>()?;
            if k < BigUint::from(2u32) {
                return Err(D::Error::custom("LogValue key must be at least 2"));
            }
            let q = parse_rational(&q).map_err(D::Error::custom)?;
            out += &LogValue::log_of_scaled(&k, &q);
        }
        Ok(out)
    }
}
