//! Dense polynomials over F_p for word-sized odd primes, constant term first.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Fp = Vec<u64>;

pub fn trim(a: &mut Fp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn deg(a: &Fp) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// (quotient, remainder) of a by nonzero b.
pub fn divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], r);
    }
    let li = inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * li % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bi % p) % p;
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &Fp, b: &Fp, p: u64) -> Fp {
    divrem(a, b, p).1
}

pub fn monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let li = inv(l, p);
            a.iter().map(|&c| c * li % p).collect()
        }
    }
}

pub fn gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// (g, s, t) with s·a + t·b = g monic.
pub fn xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let li = inv(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &Fp| -> Fp {
        let mut o: Fp = v.iter().map(|&c| c * li % p).collect();
        trim(&mut o);
        o
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

pub fn mulmod(a: &Fp, b: &Fp, m: &Fp, p: u64) -> Fp {
    rem(&mul(a, b, p), m, p)
}

/// base^e mod m for an exponent given as big bits.
pub fn powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = rem(&vec![1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        r = mulmod(&r, &r, m, p);
        if e.bit(i) {
            r = mulmod(&r, &b, m, p);
        }
    }
    r
}

/// Distinct-degree split of a monic squarefree f: pairs (d, product of the
/// irreducible factors of degree d).
///
/// `frob(i)` must return x^(p^i) reduced modulo a multiple of f; binomial
/// callers supply a closed form, anything else can use [`generic_frobenius`].
pub fn ddf_with(f: &Fp, p: u64, mut frob: impl FnMut(usize) -> Fp) -> Vec<(usize, Fp)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut i = 1;
    while deg(&rest).unwrap_or(0) >= 2 * i {
        let h = rem(&frob(i), &rest, p);
        let g = gcd(&sub(&h, &vec![0, 1], p), &rest, p);
        if deg(&g).unwrap_or(0) > 0 {
            rest = divrem(&rest, &g, p).0;
            out.push((i, g));
        }
        i += 1;
    }
    if deg(&rest).unwrap_or(0) > 0 {
        let d = deg(&rest).unwrap();
        out.push((d, rest));
    }
    out
}

/// x^(p^i) mod f by repeated p-th powers, memoized across calls.
pub fn generic_frobenius(f: &Fp, p: u64) -> impl FnMut(usize) -> Fp + '_ {
    let pb = BigUint::from(p);
    let mut cache: Vec<Fp> = vec![vec![0, 1]];
    move |i| {
        while cache.len() <= i {
            let next = powmod(cache.last().unwrap(), &pb, f, p);
            cache.push(next);
        }
        cache[i].clone()
    }
}

/// Equal-degree split (Cantor-Zassenhaus, odd p) of a product of degree-d
/// irreducibles.
pub fn edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = deg(f).unwrap_or(0);
    if n == d {
        return vec![f.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: Fp = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(&powmod(&a, &e, f, p), &vec![1], p);
        let g = gcd(&b, f, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&monic(&h, p), d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors from a distinct-degree split, sorted.
pub fn split_parts(parts: Vec<(usize, Fp)>, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    for (d, g) in parts {
        out.extend(edf(&g, d, p, rng));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn gcd_and_xgcd() {
        let p = 7;
        let a = mul(&vec![1, 1], &vec![2, 0, 1], p);
        let b = mul(&vec![1, 1], &vec![3, 1], p);
        assert_eq!(gcd(&a, &b, p), vec![1, 1]);
        let (g, s, t) = xgcd(&vec![2, 0, 1], &vec![3, 1], p);
        let lhs = sub(&mul(&s, &vec![2, 0, 1], p), &mul(&(sub(&vec![], &t, p)), &vec![3, 1], p), p);
        assert_eq!(lhs, g);
    }

    #[test]
    fn factor_x8_minus_1_mod_3() {
        let p = 3;
        let f: Fp = vec![2, 0, 0, 0, 0, 0, 0, 0, 1];
        let parts = ddf_with(&f, p, generic_frobenius(&f, p));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fs = split_parts(parts, p, &mut rng);
        let degs: Vec<usize> = fs.iter().map(|g| deg(g).unwrap()).collect();
        let mut sorted = degs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 2, 2, 2]);
        let prod = fs.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
    }
}
