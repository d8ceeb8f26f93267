//! Exact arithmetic over Q: valuations, absolute values, the product formula
//! and Weil heights.

pub mod gaussian;
pub mod logvalue;
pub mod primes;
pub mod rational;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use gaussian::GaussRat;
pub use logvalue::LogValue;
pub use primes::{factor, is_prime, Place, Prime};
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};

use crate::error::{Error, Result};
use rational::valuation_rat;

/// v_p(x) for nonzero x.
pub fn padic_valuation(x: &Rational, p: &Prime) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::Domain("valuation of 0 undefined".into()));
    }
    Ok(valuation_rat(x, p.value()))
}

/// Same as [`padic_valuation`] for a prime given as a plain integer.
pub fn padic_valuation_u64(x: &Rational, p: u64) -> Result<i64> {
    padic_valuation(x, &Prime::from_u64(p)?)
}

/// log |x|_v as an exact LogValue.
pub fn log_abs(x: &Rational, v: &Place) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::Domain("log of |0| undefined".into()));
    }
    Ok(match v {
        Place::Infinity => {
            &LogValue::log_of(x.numer().magnitude()) - &LogValue::log_of(x.denom().magnitude())
        }
        Place::Finite(p) => {
            let e = valuation_rat(x, p.value());
            LogValue::prime_term(p.value(), Rational::from_integer((-e).into()))
        }
    })
}

/// log⁺|x|_v = max(0, log|x|_v); zero at x = 0.
pub fn log_plus_abs(x: &Rational, v: &Place) -> LogValue {
    if x.is_zero() {
        return LogValue::zero();
    }
    match v {
        Place::Infinity => {
            if x.abs() > Rational::one() {
                log_abs(x, v).expect("nonzero")
            } else {
                LogValue::zero()
            }
        }
        Place::Finite(p) => {
            let e = valuation_rat(x, p.value());
            if e < 0 {
                LogValue::prime_term(p.value(), Rational::from_integer((-e).into()))
            } else {
                LogValue::zero()
            }
        }
    }
}

/// The primes dividing numerator or denominator of x.
pub fn support(x: &Rational) -> Result<Vec<Prime>> {
    let mut out: Vec<BigUint> = Vec::new();
    for m in [x.numer().magnitude(), x.denom().magnitude()] {
        if m.is_zero() {
            continue;
        }
        let f = factor(m);
        if !f.is_complete() {
            return Err(Error::Resource(format!("could not factor {m} within budget")));
        }
        out.extend(f.primes.into_keys());
    }
    out.sort();
    out.dedup();
    Ok(out.into_iter().map(Prime::new_unchecked).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductFormulaRecord {
    #[serde(with = "rational::serde_str")]
    pub x: Rational,
    pub contributions: Vec<(Place, LogValue)>,
    pub sum: LogValue,
    pub holds: bool,
}

/// Sums log|x|_v over ∞ and every prime of x; the sum must vanish exactly.
pub fn product_formula_check(x: &Rational) -> Result<ProductFormulaRecord> {
    if x.is_zero() {
        return Err(Error::Domain("product formula needs x ≠ 0".into()));
    }
    let mut contributions = Vec::new();
    if !x.abs().is_one() {
        contributions.push((Place::Infinity, log_abs(x, &Place::Infinity)?));
        for p in support(x)? {
            let v = Place::Finite(p);
            let l = log_abs(x, &v)?;
            contributions.push((v, l));
        }
    }
    let sum: LogValue = contributions.iter().map(|(_, l)| l.clone()).sum();
    let holds = sum.is_zero();
    Ok(ProductFormulaRecord { x: x.clone(), contributions, sum, holds })
}

/// h(x) = log max(|num|, den).
pub fn weil_height(x: &Rational) -> LogValue {
    if x.is_zero() {
        return LogValue::zero();
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    LogValue::log_of(if n > d { n } else { d })
}

pub fn euler_totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Input("totient of 0".into()));
    }
    Ok(primes::factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1)))
}
