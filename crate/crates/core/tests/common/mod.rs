//! Independent oracles shared by the integration tests.

use num_bigint::BigInt;
use orbit_integra::arith::{padic_valuation_u64, rat, Rational};

/// Is β a square in Q_p.
pub fn is_square_qp(beta: &Rational, p: u64) -> bool {
    let v = padic_valuation_u64(beta, p).unwrap();
    if v % 2 != 0 {
        return false;
    }
    let pk = BigInt::from(p).pow(v.unsigned_abs() as u32);
    let u = if v >= 0 { beta / Rational::from_integer(pk) } else { beta * Rational::from_integer(pk) };
    // u is a p-adic unit; reduce it modulo p (or 8).
    let m: u64 = if p == 2 { 8 } else { p };
    let mb = BigInt::from(m);
    let num = ((u.numer() % &mb) + &mb) % &mb;
    let den = ((u.denom() % &mb) + &mb) % &mb;
    let (num, den): (u64, u64) = (num.try_into().unwrap(), den.try_into().unwrap());
    // num/den mod m is a square iff num·den is (den is a unit).
    let r = num * den % m;
    (1..m).any(|x| x * x % m == r)
}

/// Root valuations v_p(z − α) of z² = β, derived from the quadratic formula.
pub fn quadratic_oracle(alpha: &Rational, beta: &Rational, p: u64) -> Vec<Rational> {
    let big_n = Rational::from_integer(padic_valuation_u64(&(alpha * alpha - beta), p).unwrap().into());
    let half = rat(1, 2);
    let m = Rational::from_integer(padic_valuation_u64(&rat(2, 1), p).unwrap().into())
        + Rational::from_integer(padic_valuation_u64(beta, p).unwrap().into()) * &half;
    let two_m = &m * Rational::from_integer(2.into());
    if is_square_qp(beta, p) && big_n > two_m {
        vec![&big_n - &m, m]
    } else {
        vec![&big_n * &half, &big_n * &half]
    }
}
