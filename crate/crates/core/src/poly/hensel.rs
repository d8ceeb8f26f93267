//! Multifactor quadratic Hensel lifting along a balanced factor tree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::fp::{self, Fp};
use super::IntPoly;

type Zp = Vec<BigInt>;

fn trim(a: &mut Zp) {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
}

fn reduce(a: &[BigInt], m: &BigInt) -> Zp {
    let mut out: Zp = a.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn add(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zp = (0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect();
    reduce(&v, m)
}

fn sub(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Zp = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    reduce(&v, m)
}

fn mul(a: &Zp, b: &Zp, m: &BigInt) -> Zp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    reduce(&out, m)
}

/// Division by a monic b modulo m.
fn divrem(a: &Zp, b: &Zp, m: &BigInt) -> (Zp, Zp) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    r.truncate(db);
    (reduce(&q, m), reduce(&r, m))
}

fn lift_fp(a: &Fp) -> Zp {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic step: from f ≡ g·h, s·g + t·h ≡ 1 (mod m) to the same
/// relations mod m². h stays monic.
fn step(f: &Zp, g: &Zp, h: &Zp, s: &Zp, t: &Zp, m: &BigInt) -> (Zp, Zp, Zp, Zp) {
    let m2 = m * m;
    let e = sub(&reduce(f, &m2), &mul(g, h, &m2), &m2);
    let (q, r) = divrem(&mul(s, &e, &m2), h, &m2);
    let g2 = add(&add(g, &mul(t, &e, &m2), &m2), &mul(&q, g, &m2), &m2);
    let h2 = add(h, &r, &m2);
    let b = sub(&add(&mul(s, &g2, &m2), &mul(t, &h2, &m2), &m2), &vec![BigInt::one()], &m2);
    let (c, d) = divrem(&mul(s, &b, &m2), &h2, &m2);
    let s2 = sub(s, &d, &m2);
    let t2 = sub(&sub(t, &mul(t, &b, &m2), &m2), &mul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

fn monic_mod(a: &Zp, m: &BigInt) -> Zp {
    let lc = a.last().expect("nonzero").clone();
    let inv = lc.extended_gcd(m).x.mod_floor(m);
    reduce(&a.iter().map(|c| c * &inv).collect::<Vec<_>>(), m)
}

fn lift_rec(f: &Zp, factors: &[Fp], p: u64, pk: &BigInt, out: &mut Vec<Zp>) {
    if factors.len() == 1 {
        out.push(monic_mod(f, pk));
        return;
    }
    let pb = BigInt::from(p);
    let half = factors.len() / 2;
    let (left, right) = factors.split_at(half);
    let lc_f = f.last().unwrap().mod_floor(&pb);
    let lc_p = u64::try_from(lc_f).unwrap();
    let mut g0: Fp = vec![lc_p];
    for a in left {
        g0 = fp::mul(&g0, a, p);
    }
    let mut h0: Fp = vec![1];
    for a in right {
        h0 = fp::mul(&h0, a, p);
    }
    let (_, s0, t0) = fp::xgcd(&g0, &h0, p);
    let (mut g, mut h, mut s, mut t) = (lift_fp(&g0), lift_fp(&h0), lift_fp(&s0), lift_fp(&t0));
    let mut m = pb;
    while &m < pk {
        let (g2, h2, s2, t2) = step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let g = reduce(&g, pk);
    let h = reduce(&h, pk);
    lift_rec(&g, left, p, pk, out);
    lift_rec(&h, right, p, pk, out);
}

/// Lifts the monic factorization `f ≡ lc(f)·Π factors (mod p)` to monic
/// factors modulo `pk`, in the input order.
pub fn lift(f: &IntPoly, factors: &[Fp], p: u64, pk: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::with_capacity(factors.len());
    lift_rec(&reduce(f.coeffs(), pk), factors, p, pk, &mut out);
    out.into_iter().map(IntPoly::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_x4_minus_4_mod_5() {
        // x^4 − 4 = (x² − 2)(x² + 2) and mod 5 both quadratics are irreducible.
        let f = IntPoly::from_i64(&[-4, 0, 0, 0, 1]);
        let fs: Vec<Fp> = vec![vec![3, 0, 1], vec![2, 0, 1]];
        let pk = BigInt::from(5).pow(8);
        let lifted = lift(&f, &fs, 5, &pk);
        let sym = |q: &IntPoly| {
            IntPoly::new(q.coeffs().iter().map(|c| super::super::symmetric_mod(c, &pk)).collect())
        };
        assert_eq!(sym(&lifted[0]), IntPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(sym(&lifted[1]), IntPoly::from_i64(&[2, 0, 1]));
    }

    #[test]
    fn lift_with_leading_coefficient() {
        // 3x² − 5x − 2 = (3x + 1)(x − 2); mod 5 the monic factors are x − 2 and x + 2.
        let f = IntPoly::from_i64(&[-2, -5, 3]);
        let fs: Vec<Fp> = vec![vec![3, 1], vec![2, 1]];
        let pk = BigInt::from(5).pow(6);
        let lifted = lift(&f, &fs, 5, &pk);
        let prod = lifted[0].mul(&lifted[1]).scale(&BigInt::from(3));
        for (a, b) in prod.coeffs().iter().zip(f.coeffs()) {
            assert_eq!((a - b).mod_floor(&pk), BigInt::zero());
        }
    }
}
