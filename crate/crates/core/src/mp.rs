//! Multiprecision reals and complex balls backed by `astro-float`.
//!
//! A [`Ball`] is a midpoint with a radius bounding the distance to the true
//! value. Midpoints are rounded to nearest at the working precision; radii are
//! kept at 64 bits and rounded away from zero.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::rational::Rational;

pub const RM: RoundingMode = RoundingMode::ToEven;
const RUP: RoundingMode = RoundingMode::FromZero;
const RP: usize = 64;

pub fn consts() -> Consts {
    Consts::new().expect("astro-float constants cache")
}

pub fn zero(p: usize) -> BigFloat {
    BigFloat::new(p)
}

pub fn from_uint(m: &BigUint, p: usize) -> BigFloat {
    if m.is_zero() {
        return zero(p);
    }
    let d = m.to_u64_digits();
    let mut x = BigFloat::from_words(&d, Sign::Pos, 64 * d.len() as i32);
    x.set_precision(p, RM).expect("set precision");
    x
}

pub fn from_int(m: &BigInt, p: usize) -> BigFloat {
    let mut x = from_uint(m.magnitude(), p);
    if m.is_negative() {
        x.inv_sign();
    }
    x
}

pub fn from_rat(q: &Rational, p: usize) -> BigFloat {
    let n = from_int(q.numer(), p + 8);
    let d = from_int(q.denom(), p + 8);
    n.div(&d, p, RM)
}

pub fn mul_rat(x: &BigFloat, q: &Rational, p: usize) -> BigFloat {
    let n = from_int(q.numer(), p + 8);
    let d = from_int(q.denom(), p + 8);
    x.mul(&n, p + 8, RM).div(&d, p, RM)
}

pub fn round(x: &BigFloat, p: usize) -> BigFloat {
    let mut y = x.clone();
    y.set_precision(p, RM).expect("set precision");
    y
}

pub fn from_f64(v: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(v, p.max(64))
}

/// `2^k` exactly.
pub fn pow2(k: i64) -> BigFloat {
    let mut x = BigFloat::from_word(1, RP);
    x.set_exponent((k + 1) as i32);
    x
}

fn ldexp(mut m: f64, mut k: i64) -> f64 {
    while k > 1000 {
        m *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        m *= 2f64.powi(-1000);
        k += 1000;
    }
    m * 2f64.powi(k as i32)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _, sign, e, _) = x.as_raw_parts().expect("finite value");
    let top = *words.last().unwrap() as f64;
    let v = ldexp(top, e as i64 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Binary exponent e with |x| in [2^(e-1), 2^e); None for zero.
pub fn exponent(x: &BigFloat) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        x.exponent().map(|e| e as i64)
    }
}

/// Upper bound on the rounding error of a result at precision p.
fn ulp(x: &BigFloat, p: usize) -> BigFloat {
    match exponent(x) {
        None => zero(RP),
        Some(e) => pow2(e - p as i64),
    }
}

fn abs_up(x: &BigFloat) -> BigFloat {
    let mut y = x.abs();
    y.set_precision(RP, RUP).expect("set precision");
    y
}

fn radd(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, RP, RUP)
}

fn rmul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, RP, RUP)
}

/// Real interval `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub mid: BigFloat,
    pub rad: BigFloat,
    pub prec: usize,
}

impl Ball {
    pub fn exact(mid: BigFloat, prec: usize) -> Ball {
        Ball { mid, rad: zero(RP), prec }
    }

    pub fn with_rad(mid: BigFloat, rad: BigFloat, prec: usize) -> Ball {
        Ball { mid, rad: abs_up(&rad), prec }
    }

    pub fn from_int(m: &BigInt, prec: usize) -> Ball {
        let mid = from_int(m, prec);
        let exact = m.bits() as usize <= prec;
        let rad = if exact { zero(RP) } else { ulp(&mid, prec) };
        Ball { mid, rad, prec }
    }

    pub fn from_rat(q: &Rational, prec: usize) -> Ball {
        let mid = from_rat(q, prec);
        let rad = ulp(&mid, prec - 2);
        Ball { mid, rad, prec }
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let mid = self.mid.add(&o.mid, self.prec, RM);
        let rad = radd(&radd(&self.rad, &o.rad), &ulp(&mid, self.prec));
        Ball { mid, rad, prec: self.prec }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        let mid = self.mid.sub(&o.mid, self.prec, RM);
        let rad = radd(&radd(&self.rad, &o.rad), &ulp(&mid, self.prec));
        Ball { mid, rad, prec: self.prec }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let mid = self.mid.mul(&o.mid, self.prec, RM);
        let r1 = rmul(&abs_up(&self.mid), &o.rad);
        let r2 = rmul(&abs_up(&o.mid), &self.rad);
        let r3 = rmul(&self.rad, &o.rad);
        let rad = radd(&radd(&radd(&r1, &r2), &r3), &ulp(&mid, self.prec));
        Ball { mid, rad, prec: self.prec }
    }

    pub fn neg(&self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }

    pub fn contains_zero(&self) -> bool {
        abs_up(&self.mid).cmp(&self.rad).map(|c| c <= 0).unwrap_or(true)
    }

    /// Upper bound on |x|.
    pub fn mag_up(&self) -> BigFloat {
        radd(&abs_up(&self.mid), &self.rad)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.mid)
    }

    pub fn rad_f64(&self) -> f64 {
        to_f64(&self.rad)
    }

    /// True when `rad < 2^k`.
    pub fn rad_below_pow2(&self, k: i64) -> bool {
        self.rad.is_zero() || exponent(&self.rad).map(|e| e <= k).unwrap_or(true)
    }

    /// Nearest integer to the midpoint together with a flag telling whether
    /// that integer is the only one inside the ball.
    pub fn round_unique(&self) -> (BigInt, bool) {
        let n = round_to_int(&self.mid);
        let nf = from_int(&n, self.prec + 64);
        let diff = self.mid.sub(&nf, self.prec + 64, RM).abs();
        let half = pow2(-1);
        let reach = diff.add(&self.rad, RP, RUP);
        let unique = reach.cmp(&half).map(|c| c < 0).unwrap_or(false);
        (n, unique)
    }
}

/// Nearest integer (ties away from zero).
pub fn round_to_int(x: &BigFloat) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let e = exponent(x).unwrap();
    if e < 0 {
        return BigInt::zero();
    }
    let (words, _, sign, _, _) = x.as_raw_parts().expect("finite value");
    // Mantissa as an integer M with x = M · 2^(e - 64·len).
    let mut m = BigUint::zero();
    for w in words.iter().rev() {
        m = (m << 64u32) | BigUint::from(*w);
    }
    let shift = 64 * words.len() as i64 - e;
    let n = if shift <= 0 {
        m << (-shift) as u64
    } else {
        let half = BigUint::from(1u32) << (shift as u64 - 1);
        (m + half) >> shift as u64
    };
    let n = BigInt::from(n);
    if sign == Sign::Neg {
        -n
    } else {
        n
    }
}

/// Complex ball: a pair of real balls.
#[derive(Clone, Debug)]
pub struct CBall {
    pub re: Ball,
    pub im: Ball,
}

impl CBall {
    pub fn real(x: Ball) -> CBall {
        let p = x.prec;
        CBall { re: x, im: Ball::exact(zero(p), p) }
    }

    pub fn one(prec: usize) -> CBall {
        CBall::real(Ball::exact(BigFloat::from_word(1, prec), prec))
    }

    pub fn prec(&self) -> usize {
        self.re.prec
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CBall { re, im }
    }

    pub fn scale(&self, x: &Ball) -> CBall {
        CBall { re: self.re.mul(x), im: self.im.mul(x) }
    }

    /// |z|² as a real ball.
    pub fn norm_sq(&self) -> Ball {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.mid_f64(), self.im.mid_f64())
    }

    /// `ln |z|` as a ball, or None when |z| is not resolved to relative
    /// accuracy 2^-8.
    pub fn ln_abs(&self) -> Option<Ball> {
        let n2 = self.norm_sq();
        let e_mid = exponent(&n2.mid)?;
        if n2.mid.is_negative() || !n2.rad_below_pow2(e_mid - 10) {
            return None;
        }
        let p = n2.prec;
        let mut cc = consts();
        let l = n2.mid.ln(p + 16, RM, &mut cc);
        // |ln(m ± r) − ln m| ≤ 2r/m once r ≤ m/2; the midpoint adds one ulp.
        let rel = n2.rad.div(&n2.mid, RP, RUP).mul(&pow2(2), RP, RUP);
        let rad = radd(&rel, &ulp(&l, p)).mul(&pow2(-1), RP, RUP);
        let half = round(&l, p).mul(&pow2(-1), p, RM);
        Some(Ball::with_rad(half, rad, p))
    }

    /// `ln |z|` rounded to f64, or None when the ball is too wide for the
    /// relative error of the result to stay below 2^-60.
    pub fn ln_abs_f64(&self) -> Option<f64> {
        let n2 = self.norm_sq();
        let e_mid = exponent(&n2.mid)?;
        if !n2.rad_below_pow2(e_mid - 62) {
            return None;
        }
        let mut cc = consts();
        let l = n2.mid.ln(n2.prec, RM, &mut cc);
        Some(to_f64(&l) / 2.0)
    }
}

/// Sum in a fixed pairwise order, independent of how the input was produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

const CHUNK: usize = 4096;

/// Σ_{i<n} f(i), evaluated in parallel over fixed chunks and reduced
/// pairwise, so the result does not depend on the thread count.
pub fn par_sum<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> f64 {
    use rayon::prelude::*;
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let v: Vec<f64> = (lo..hi).map(&f).collect();
            pairwise_sum(&v)
        })
        .collect();
    pairwise_sum(&partial)
}
