//! Primality, integer factorization and the places of Q.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Upper end of the trial-division sieve.
pub const TRIAL_LIMIT: u32 = 1_000_000;

/// Cofactors above this size are not attacked with rho.
const RHO_MAX_BITS: u64 = 200;
/// Cofactors above this size skip the Miller-Rabin test and stay unsplit.
const MR_MAX_BITS: u64 = 640;
const RHO_BUDGET: u64 = 1 << 14;

fn sieve() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut comp = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !comp[i] {
                out.push(i as u32);
                let mut k = i * i;
                while k <= n {
                    comp[k] = true;
                    k += i;
                }
            }
        }
        out
    })
}

/// The primes below the trial-division limit.
pub fn small_primes() -> &'static [u32] {
    sieve()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on big inputs. The first 13 prime bases are a proof below
/// 3.3e24; above that the first 24 prime bases are used.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &sieve()[..168] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let bound: BigUint = "3317044064679887385961981".parse().unwrap();
    let nbases = if *n < bound { 13 } else { 24 };
    'outer: for &a in &sieve()[..nbases] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64, c: u64) -> Option<u64> {
    // Brent's cycle finding with batched gcds.
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let mut g = 1u64;
    let mut x = 0u64;
    let mut ys = 0u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += m;
        }
        r *= 2;
        steps += r;
        if steps > 1 << 26 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_u64(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_default() += 1;
        return;
    }
    let r = (n as f64).sqrt() as u64;
    for cand in [r.saturating_sub(1), r, r + 1] {
        if cand > 1 && cand * cand == n {
            split_u64(cand, out);
            split_u64(cand, out);
            return;
        }
    }
    for c in 1u64.. {
        if let Some(g) = rho_u64(n, c) {
            split_u64(g, out);
            split_u64(n / g, out);
            return;
        }
    }
}

/// Complete factorization of a 64-bit integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor of zero");
    let mut out = BTreeMap::new();
    for &p in &sieve()[..564] {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n % p == 0 {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
    }
    split_u64(n, &mut out);
    out.into_iter().collect()
}

/// Result of a budgeted factorization: proven-prime part and unsplit cofactors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    pub primes: BTreeMap<BigUint, u32>,
    /// Cofactors greater than 1 that could not be split within budget.
    pub unsplit: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unsplit.is_empty()
    }
}

fn rho_big(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let m = 64u64;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        steps += r;
        r *= 2;
        if steps > RHO_BUDGET {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn split_big(n: BigUint, out: &mut Factorization) {
    if n.is_one() {
        return;
    }
    if let Some(v) = n.to_u64() {
        for (p, e) in factor_u64(v) {
            *out.primes.entry(BigUint::from(p)).or_default() += e;
        }
        return;
    }
    let limit = BigUint::from(TRIAL_LIMIT as u64 * TRIAL_LIMIT as u64);
    if n < limit || (n.bits() <= MR_MAX_BITS && is_prime(&n)) {
        *out.primes.entry(n).or_default() += 1;
        return;
    }
    for k in [2u32, 3, 5, 7] {
        if let Some(r) = crate::arith::rational::exact_root(&n, k) {
            let mut inner = Factorization::default();
            split_big(r, &mut inner);
            for (p, e) in inner.primes {
                *out.primes.entry(p).or_default() += e * k;
            }
            for u in inner.unsplit {
                for _ in 0..k {
                    out.unsplit.push(u.clone());
                }
            }
            return;
        }
    }
    if n.bits() <= RHO_MAX_BITS {
        for c in 1..=2u64 {
            if let Some(g) = rho_big(&n, c) {
                let h = &n / &g;
                split_big(g, out);
                split_big(h, out);
                return;
            }
        }
    }
    out.unsplit.push(n);
}

/// Trial division up to [`TRIAL_LIMIT`], then Pollard-Brent rho with fixed
/// seeds on cofactors of at most 200 bits. Larger composite cofactors are
/// returned unsplit.
pub fn factor(n: &BigUint) -> Factorization {
    assert!(!n.is_zero(), "factor of zero");
    let mut out = Factorization::default();
    if let Some(v) = n.to_u64() {
        for (p, e) in factor_u64(v) {
            out.primes.insert(BigUint::from(p), e);
        }
        return out;
    }
    let mut m = n.clone();
    let primes = sieve();
    let mut i = 0;
    while i < primes.len() {
        if m.to_u64().is_some() {
            break;
        }
        // One big remainder per batch of primes whose product fits a word.
        let mut prod: u64 = 1;
        let start = i;
        while i < primes.len() {
            match prod.checked_mul(primes[i] as u64) {
                Some(v) => {
                    prod = v;
                    i += 1;
                }
                None => break,
            }
        }
        let r = (&m % prod).to_u64().unwrap();
        for &p in &primes[start..i] {
            if r % p as u64 == 0 {
                let pb = BigUint::from(p);
                let e = crate::arith::rational::valuation_uint(&m, &pb);
                m /= pb.pow(e as u32);
                out.primes.insert(pb, e as u32);
            }
        }
        let p_last = primes[i - 1] as u64;
        if BigUint::from(p_last) * p_last > m {
            break;
        }
    }
    split_big(m, &mut out);
    out
}

/// A prime certified by [`is_prime`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(p: BigUint) -> Result<Prime> {
        if is_prime(&p) {
            Ok(Prime(p))
        } else {
            Err(Error::Input(format!("{p} is not prime")))
        }
    }

    pub fn from_u64(p: u64) -> Result<Prime> {
        Prime::new(BigUint::from(p))
    }

    /// For internal callers that obtained `p` from a factorization.
    pub(crate) fn new_unchecked(p: BigUint) -> Prime {
        Prime(p)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Prime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Prime> {
        let v: BigUint = s
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("cannot parse prime `{s}`")))?;
        Prime::new(v)
    }
}

/// Writes a big natural as a JSON number when it fits 64 bits, else a string.
pub(crate) fn ser_uint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum UintRepr {
    Num(u64),
    Str(String),
}

impl UintRepr {
    pub(crate) fn into_uint<E: serde::de::Error>(self) -> std::result::Result<BigUint, E> {
        match self {
            UintRepr::Num(v) => Ok(BigUint::from(v)),
            UintRepr::Str(s) => s.parse().map_err(E::custom),
        }
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_uint(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Prime, D::Error> {
        let v = UintRepr::deserialize(d)?.into_uint()?;
        Prime::new(v).map_err(serde::de::Error::custom)
    }
}

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Finite(Prime),
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        Ok(Place::Finite(Prime::from_u64(p)?))
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Infinity)
    }

    pub fn prime(&self) -> Option<&Prime> {
        match self {
            Place::Infinity => None,
            Place::Finite(p) => Some(p),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;
    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "∞" | "oo" => Ok(Place::Infinity),
            t => Ok(Place::Finite(t.parse()?)),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Infinity => s.serialize_str("inf"),
            Place::Finite(p) => p.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Place, D::Error> {
        match UintRepr::deserialize(d)? {
            UintRepr::Str(s) if s.parse::<BigUint>().is_err() => {
                s.parse().map_err(serde::de::Error::custom)
            }
            r => Prime::new(r.into_uint()?)
                .map(Place::Finite)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primality() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn big_primality() {
        let m61 = (BigUint::one() << 61u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m61));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m61 * &m127)));
    }

    #[test]
    fn factor_mixed() {
        let m61 = (BigUint::one() << 61u32) - 1u32;
        let n = BigUint::from(360u32) * &m61 * &m61 * BigUint::from(1_000_003u32);
        let f = factor(&n);
        assert!(f.is_complete());
        let got: Vec<(String, u32)> = f.primes.iter().map(|(p, e)| (p.to_string(), *e)).collect();
        assert_eq!(
            got,
            vec![
                ("2".into(), 3),
                ("3".into(), 2),
                ("5".into(), 1),
                ("1000003".into(), 1),
                (m61.to_string(), 2)
            ]
        );
    }

    #[test]
    fn factor_semiprime_u64() {
        assert_eq!(factor_u64(4294967291 * 4294967279), vec![(4294967279, 1), (4294967291, 1)]);
        assert_eq!(factor_u64(1), vec![]);
    }

    #[test]
    fn place_parse_and_json() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinity);
        assert_eq!("7".parse::<Place>().unwrap(), Place::finite(7).unwrap());
        assert!("9".parse::<Place>().is_err());
        let j = serde_json::to_string(&vec![Place::Infinity, Place::finite(7).unwrap()]).unwrap();
        assert_eq!(j, "[\"inf\",7]");
        let back: Vec<Place> = serde_json::from_str(&j).unwrap();
        assert_eq!(back[1], Place::finite(7).unwrap());
    }
}
