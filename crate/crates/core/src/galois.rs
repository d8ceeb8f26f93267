//! Factorization of x^n − β over Q and the Galois-orbit partition of a level.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::primes::{factor_u64, is_prime_u64};
use crate::arith::rational::{rational_root, Rational};
use crate::arith::euler_totient;
use crate::error::{Error, Result};
use crate::mp::{self, Ball, CBall};
use crate::poly::fp::{self, Fp};
use crate::poly::{hensel, symmetric_mod, IntPoly};
use crate::radical::{preimages, OrbitLevel};

/// Largest degree handled by [`factor_binomial`].
pub const MAX_FACTOR_DEGREE: u64 = 256;
const MAX_PRECISION: usize = 16384;

/// Vahlen-Capelli: x^n − β is irreducible over Q iff β is not a q-th power
/// for any prime q | n, and β ∉ −4Q⁴ when 4 | n.
pub fn capelli_irreducible(n: u64, beta: &Rational) -> bool {
    assert!(n >= 1 && !beta.is_zero(), "capelli_irreducible needs n ≥ 1 and β ≠ 0");
    for (q, _) in factor_u64(n) {
        if rational_root(beta, q as u32).is_some() {
            return false;
        }
    }
    !(n % 4 == 0 && minus_four_fourth_root(beta).is_some())
}

/// f > 0 with β = −4f⁴, if any.
fn minus_four_fourth_root(beta: &Rational) -> Option<Rational> {
    if !beta.is_negative() {
        return None;
    }
    let q = -beta / Rational::from_integer(4.into());
    rational_root(&q, 4)
}

fn check_args(n: u64, beta: &Rational) -> Result<()> {
    if beta.is_zero() {
        return Err(Error::Domain("x^n − 0 has a repeated root".into()));
    }
    if n == 0 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    Ok(())
}

fn sort_factors(mut fs: Vec<IntPoly>) -> Vec<IntPoly> {
    fs.sort_by(|a, b| a.report_cmp(b));
    fs
}

/// x^(p^i) modulo x^n − c over F_p, as a dense vector.
struct BinomialFrobenius {
    n: u64,
    p: u64,
    c: u64,
    /// p^i mod n(p − 1).
    e: u64,
    i: usize,
}

impl BinomialFrobenius {
    fn at(&mut self, i: usize) -> Fp {
        let modulus = self.n * (self.p - 1);
        while self.i < i {
            self.e = ((self.e as u128 * self.p as u128) % modulus as u128) as u64;
            self.i += 1;
        }
        let r = (self.e % self.n) as usize;
        let q = self.e / self.n;
        let mut v = vec![0u64; r + 1];
        v[r] = fp::pow(self.c, q, self.p);
        v
    }
}

fn binomial_mod(n: u64, a: &BigInt, b: &BigInt, p: u64) -> (Fp, u64) {
    let pb = BigInt::from(p);
    let am = a.mod_floor(&pb).to_u64().unwrap();
    let bm = b.mod_floor(&pb).to_u64().unwrap();
    let c = am * fp::inv(bm, p) % p;
    let mut f = vec![0u64; n as usize + 1];
    f[0] = (p - c) % p;
    f[n as usize] = 1;
    (f, c)
}

fn ddf_binomial(n: u64, f: &Fp, c: u64, p: u64) -> Vec<(usize, Fp)> {
    let mut fr = BinomialFrobenius { n, p, c, e: 1, i: 0 };
    fp::ddf_with(f, p, |i| fr.at(i))
}

/// Number of irreducible factors of x^n − a/b modulo p.
fn modular_count(n: u64, a: &BigInt, b: &BigInt, p: u64) -> usize {
    let (f, c) = binomial_mod(n, a, b, p);
    ddf_binomial(n, &f, c, p)
        .iter()
        .map(|(d, g)| fp::deg(g).unwrap() / d)
        .sum()
}

fn choose_prime(n: u64, a: &BigInt, b: &BigInt) -> (u64, usize) {
    let mut best: Option<(usize, u64)> = None;
    let mut tried = 0;
    let mut p = 3u64;
    while tried < 8 {
        let good = is_prime_u64(p)
            && n % p != 0
            && !(a % p).is_zero()
            && !(b % p).is_zero();
        if good {
            tried += 1;
            let k = modular_count(n, a, b, p);
            if best.map(|(bk, _)| k < bk).unwrap_or(true) {
                best = Some((k, p));
            }
            if k == 1 {
                break;
            }
        }
        p += 2;
    }
    let (k, p) = best.expect("a good prime exists");
    (p, k)
}

/// Subsets of `0..r` of size k in lexicographic order.
struct Combinations {
    idx: Vec<usize>,
    r: usize,
    first: bool,
}

impl Combinations {
    fn new(r: usize, k: usize) -> Self {
        Combinations { idx: (0..k).collect(), r, first: true }
    }

    fn next(&mut self) -> Option<&[usize]> {
        let k = self.idx.len();
        if self.first {
            self.first = false;
            return (k <= self.r).then_some(&self.idx[..]);
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.r - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx[..]);
            }
        }
        None
    }
}

fn recombine(f: IntPoly, lifted: Vec<IntPoly>, pk: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f;
    let mut rest = lifted;
    let mut s = 1;
    while 2 * s <= rest.len() {
        let mut found: Option<(Vec<usize>, IntPoly)> = None;
        let lc = f.lc();
        let target0 = &lc * f.coeff(0);
        let mut comb = Combinations::new(rest.len(), s);
        while let Some(t) = comb.next() {
            let mut c0 = lc.clone();
            for &i in t {
                c0 = (c0 * rest[i].coeff(0)).mod_floor(pk);
            }
            let c0 = symmetric_mod(&c0, pk);
            if c0.is_zero() || !(&target0 % &c0).is_zero() {
                continue;
            }
            let mut g = IntPoly::new(vec![lc.clone()]);
            for &i in t {
                let prod = g.mul(&rest[i]);
                g = IntPoly::new(prod.coeffs().iter().map(|c| symmetric_mod(c, pk)).collect());
            }
            let g = g.primitive();
            if let Some(q) = f.div_exact(&g) {
                found = Some((t.to_vec(), g));
                f = q;
                break;
            }
        }
        match found {
            Some((t, g)) => {
                out.push(g);
                for &i in t.iter().rev() {
                    rest.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if f.degree() > 0 {
        out.push(f.primitive());
    }
    out
}

/// Complete factorization of the primitive model b·x^n − a of x^n − β,
/// sorted by degree and then coefficients.
///
/// Modular factorization at the good prime with the fewest factors among the
/// first eight candidates, quadratic Hensel lifting past twice the coefficient
/// bound, then subset recombination.
pub fn factor_binomial(n: u64, beta: &Rational) -> Result<Vec<IntPoly>> {
    check_args(n, beta)?;
    if n > MAX_FACTOR_DEGREE {
        return Err(Error::Resource(format!("factor_binomial is limited to n ≤ {MAX_FACTOR_DEGREE}, got {n}")));
    }
    let f = IntPoly::binomial_model(n as usize, beta);
    if n == 1 {
        return Ok(vec![f]);
    }
    let (a, b) = (beta.numer().clone(), beta.denom().clone());
    let (p, count) = choose_prime(n, &a, &b);
    if count == 1 {
        return Ok(vec![f]);
    }
    let (fm, c) = binomial_mod(n, &a, &b, p);
    let parts = ddf_binomial(n, &fm, c, p);
    let mut rng = ChaCha8Rng::seed_from_u64(p ^ (n << 20));
    let modular = fp::split_parts(parts, p, &mut rng);
    // Any factor scaled to leading coefficient b has coefficients below
    // b · 2^n · ‖f‖₂.
    let norm = f.norm2_sq().magnitude().sqrt() + 1u32;
    let bound = BigInt::from(b.magnitude() * norm) << n as usize;
    let limit = bound * 2;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= limit {
        pk *= &pb;
    }
    let lifted = hensel::lift(&f, &modular, p, &pk);
    Ok(sort_factors(recombine(f, lifted, &pk)))
}

/// Exact split of x^n − β driven by Capelli's criterion; complete whenever n
/// is a power of two or the binomial is irreducible.
///
/// Returns each irreducible factor with the phases k (root value
/// |β|^{1/n}·e^{2πik/(2n)}, k = 2j + [β < 0]) of its roots when `track`.
fn structural(n: u64, beta: &Rational, track: bool) -> Result<Vec<(IntPoly, Vec<u64>)>> {
    let all: Vec<u64> = if track {
        let s = u64::from(beta.is_negative());
        (0..n).map(|j| 2 * j + s).collect()
    } else {
        vec![]
    };
    let mut out = Vec::new();
    split_binomial(n, n, beta, all, track, &mut out)?;
    Ok(out)
}

fn split_binomial(
    n: u64,
    m: u64,
    c: &Rational,
    members: Vec<u64>,
    track: bool,
    out: &mut Vec<(IntPoly, Vec<u64>)>,
) -> Result<()> {
    if capelli_irreducible(m, c) {
        out.push((IntPoly::binomial_model(m as usize, c), members));
        return Ok(());
    }
    let n2 = 2 * n;
    if m % 2 == 0 {
        if let Some(e) = rational_root(c, 2) {
            // x^m − e² = (x^{m/2} − e)(x^{m/2} + e) with e > 0.
            let e = e.abs();
            let (plus, minus): (Vec<u64>, Vec<u64>) = if track {
                members.iter().partition(|&&k| (k as u128 * (m / 2) as u128 % n2 as u128) == 0)
            } else {
                (vec![], vec![])
            };
            split_binomial(n, m / 2, &e, plus, track, out)?;
            split_binomial(n, m / 2, &-e.clone(), minus, track, out)?;
            return Ok(());
        }
    }
    if m % 4 == 0 {
        if let Some(f) = minus_four_fourth_root(c) {
            // x^m + 4f⁴ = T₊·T₋ with T_s = x^{m/2} + 2s·f·x^{m/4} + 2f², both
            // irreducible. A root z lies on T_s iff Re(z^{m/4}) has sign −s.
            let k = m / 4;
            let (neg_re, pos_re): (Vec<u64>, Vec<u64>) = if track {
                members.iter().partition(|&&ph| {
                    let t = (ph as u128 * k as u128 % n2 as u128) as u64;
                    // Angle π·t/n lies in (π/2, 3π/2) iff Re < 0.
                    2 * t > n && 2 * t < 3 * n
                })
            } else {
                (vec![], vec![])
            };
            for (s, mem) in [(1i64, neg_re), (-1i64, pos_re)] {
                let (fnum, fden) = (f.numer(), f.denom());
                let mut cs = vec![BigInt::zero(); (m / 2) as usize + 1];
                cs[0] = BigInt::from(2) * fnum * fnum;
                cs[k as usize] = BigInt::from(2 * s) * fnum * fden;
                cs[(m / 2) as usize] = fden * fden;
                out.push((IntPoly::new(cs).primitive(), mem));
            }
            return Ok(());
        }
    }
    Err(Error::Resource(format!(
        "x^{m} − ({c}) is reducible and beyond the structural splitter; exact factorization is limited to n ≤ {MAX_FACTOR_DEGREE}"
    )))
}

/// Irreducible factors of x^n − β at any level size: [`factor_binomial`] up
/// to degree 256, the exact structural split above.
pub fn level_factors(n: u64, beta: &Rational) -> Result<Vec<IntPoly>> {
    check_args(n, beta)?;
    if n <= MAX_FACTOR_DEGREE {
        return factor_binomial(n, beta);
    }
    let fs = structural(n, beta, false)?.into_iter().map(|(f, _)| f).collect();
    Ok(sort_factors(fs))
}

/// Factors produced by the structural splitter alone (exposed for
/// cross-checks against [`factor_binomial`]).
pub fn structural_factors(n: u64, beta: &Rational) -> Result<Vec<IntPoly>> {
    check_args(n, beta)?;
    let fs = structural(n, beta, false)?.into_iter().map(|(f, _)| f).collect();
    Ok(sort_factors(fs))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisClass {
    pub factor: IntPoly,
    pub indices: Vec<u64>,
}

impl GaloisClass {
    pub fn size(&self) -> usize {
        self.indices.len()
    }
}

/// How a partition was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// Interval reconstruction of each class polynomial at this precision.
    Interval { precision: usize },
    /// Exact root phases against the structural factors.
    Phase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisOrbitPartition {
    pub level: OrbitLevel,
    pub classes: Vec<GaloisClass>,
    pub certificate: Certificate,
}

impl GaloisOrbitPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size()).collect()
    }

    /// Index of the class holding root j.
    pub fn class_of(&self, j: u64) -> Option<usize> {
        self.classes.iter().position(|c| c.indices.binary_search(&j).is_ok())
    }
}

fn log2_scale(f: &IntPoly, log2_r: f64) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for (k, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let lc = c.magnitude().bits() as f64;
        m = m.max(lc + k as f64 * log2_r.max(0.0));
    }
    m + ((f.degree() + 1) as f64).log2()
}

fn ball_log2(b: &CBall) -> f64 {
    let m = b.norm_sq().mag_up();
    match mp::exponent(&m) {
        None => f64::NEG_INFINITY,
        Some(_) => mp::to_f64(&m).log2() / 2.0,
    }
}

/// Monic polynomial with the given roots, as complex-ball coefficients.
fn reconstruct(roots: &[&CBall], prec: usize) -> Vec<CBall> {
    let mut c = vec![CBall::one(prec)];
    for z in roots {
        let mut next = vec![CBall::real(Ball::exact(mp::zero(prec), prec)); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].add(ci);
            next[i] = next[i].sub(&ci.mul(z));
        }
        c = next;
    }
    c
}

fn certify_class(f: &IntPoly, roots: &[&CBall], prec: usize) -> bool {
    if roots.len() != f.degree() {
        return false;
    }
    let lc = Ball::from_int(&f.lc(), prec);
    let coeffs = reconstruct(roots, prec);
    for (k, c) in coeffs.iter().enumerate() {
        let (re, re_ok) = c.re.mul(&lc).round_unique();
        let (im, im_ok) = c.im.mul(&lc).round_unique();
        if !re_ok || !im_ok || !im.is_zero() || re != f.coeff(k) {
            return false;
        }
    }
    true
}

fn numeric_partition(level: &OrbitLevel, factors: &[IntPoly], prec: usize) -> Option<Vec<GaloisClass>> {
    let zs = level.embed_all(prec);
    let log2_r = crate::arith::rational::rat_to_f64(&level.beta.abs()).log2() / level.n as f64;
    let scales: Vec<f64> = factors.iter().map(|f| log2_scale(f, log2_r)).collect();
    let threshold = -(prec as f64) / 2.0;
    let assign: Vec<Option<usize>> = zs
        .par_iter()
        .map(|z| {
            let mut best: Option<(f64, usize)> = None;
            for (i, f) in factors.iter().enumerate() {
                let v = ball_log2(&f.eval_ball(z)) - scales[i];
                if v < threshold && best.map(|(bv, _)| v < bv).unwrap_or(true) {
                    best = Some((v, i));
                }
            }
            best.map(|(_, i)| i)
        })
        .collect();
    let mut classes: Vec<GaloisClass> = factors
        .iter()
        .map(|f| GaloisClass { factor: f.clone(), indices: vec![] })
        .collect();
    for (j, a) in assign.iter().enumerate() {
        classes[(*a)?].indices.push(j as u64);
    }
    let ok = classes.par_iter().all(|c| {
        let roots: Vec<&CBall> = c.indices.iter().map(|&j| &zs[j as usize]).collect();
        certify_class(&c.factor, &roots, prec)
    });
    ok.then_some(classes)
}

/// Partition of a level into Galois orbits.
///
/// Up to degree 256 each root is assigned numerically to the factor that
/// vanishes on it, and every class is certified by rebuilding its polynomial
/// from the roots in ball arithmetic and rounding; the precision doubles until
/// the certificate holds. Larger levels use the structural split, whose root
/// membership is exact.
pub fn galois_orbits(level: &OrbitLevel, precision: usize) -> Result<GaloisOrbitPartition> {
    let n = level.n;
    if n > MAX_FACTOR_DEGREE {
        let parts = structural(n, &level.beta, true)?;
        let mut check = IntPoly::new(vec![BigInt::one()]);
        let mut classes = Vec::new();
        for (f, ks) in parts {
            if ks.len() != f.degree() {
                return Err(Error::Precision(format!("structural class of {f} has {} roots", ks.len())));
            }
            check = check.mul(&f);
            let mut indices: Vec<u64> = ks.into_iter().map(|k| k / 2).collect();
            indices.sort_unstable();
            classes.push(GaloisClass { factor: f, indices });
        }
        if check != IntPoly::binomial_model(n as usize, &level.beta) {
            return Err(Error::Precision("structural factors do not multiply back".into()));
        }
        classes.sort_by(|a, b| a.factor.report_cmp(&b.factor));
        return Ok(GaloisOrbitPartition { level: level.clone(), classes, certificate: Certificate::Phase });
    }
    let factors = factor_binomial(n, &level.beta)?;
    let mut prec = precision.max(64);
    loop {
        if let Some(classes) = numeric_partition(level, &factors, prec) {
            return Ok(GaloisOrbitPartition {
                level: level.clone(),
                classes,
                certificate: Certificate::Interval { precision: prec },
            });
        }
        prec *= 2;
        if prec > MAX_PRECISION {
            return Err(Error::Precision(format!(
                "root assignment for x^{n} − ({}) not certified at {MAX_PRECISION} bits",
                level.beta
            )));
        }
    }
}

/// Brute-force factorization for n ≤ 16: for the first unassigned root, try
/// root subsets containing it by increasing size, rebuild the candidate at 256
/// bits, round, and keep it if it divides exactly.
pub fn subset_factor_oracle(n: u64, beta: &Rational) -> Result<Vec<IntPoly>> {
    check_args(n, beta)?;
    if n > 16 {
        return Err(Error::Resource(format!("subset oracle is limited to n ≤ 16, got {n}")));
    }
    let prec = 256;
    let level = OrbitLevel { beta: beta.clone(), d: n.max(2), depth: 1, n };
    let zs = level.embed_all(prec);
    let zf: Vec<(f64, f64)> = zs.iter().map(|z| z.to_f64()).collect();
    let b = beta.denom().clone();
    let bf = b.to_f64().unwrap();
    let mut rest_poly = IntPoly::binomial_model(n as usize, beta);
    let mut remaining: Vec<usize> = (0..n as usize).collect();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let head = remaining[0];
        let others: Vec<usize> = remaining[1..].to_vec();
        let mut accepted: Option<(Vec<usize>, IntPoly)> = None;
        'size: for s in 0..=others.len() {
            let mut comb = Combinations::new(others.len(), s);
            while let Some(t) = comb.next() {
                let mut set = vec![head];
                set.extend(t.iter().map(|&i| others[i]));
                if !prefilter(&set, &zf, bf) {
                    continue;
                }
                let roots: Vec<&CBall> = set.iter().map(|&j| &zs[j]).collect();
                let coeffs = reconstruct(&roots, prec);
                let bb = Ball::from_int(&b, prec);
                let mut ints = Vec::with_capacity(coeffs.len());
                let mut ok = true;
                for c in &coeffs {
                    let (re, re_ok) = c.re.mul(&bb).round_unique();
                    let (im, im_ok) = c.im.mul(&bb).round_unique();
                    if !re_ok || !im_ok || !im.is_zero() {
                        ok = false;
                        break;
                    }
                    ints.push(re);
                }
                if !ok {
                    continue;
                }
                let g = IntPoly::new(ints).primitive();
                if let Some(q) = rest_poly.div_exact(&g) {
                    rest_poly = q;
                    accepted = Some((set, g));
                    break 'size;
                }
            }
        }
        let (set, g) = accepted.expect("the full remaining set always divides");
        remaining.retain(|j| !set.contains(j));
        out.push(g);
    }
    Ok(sort_factors(out))
}

/// Cheap f64 test that the monic polynomial on `set` is real with
/// coefficients in (1/b)Z.
fn prefilter(set: &[usize], zf: &[(f64, f64)], b: f64) -> bool {
    let mut c: Vec<(f64, f64)> = vec![(1.0, 0.0)];
    for &j in set {
        let (zr, zi) = zf[j];
        let mut next = vec![(0.0, 0.0); c.len() + 1];
        for (i, &(a, bi)) in c.iter().enumerate() {
            next[i + 1].0 += a;
            next[i + 1].1 += bi;
            next[i].0 -= a * zr - bi * zi;
            next[i].1 -= a * zi + bi * zr;
        }
        c = next;
    }
    c.iter().all(|&(re, im)| {
        let scale = 1e-6 * (1.0 + re.abs() * b);
        (im * b).abs() < scale && ((re * b) - (re * b).round()).abs() < scale
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBoundReport {
    pub n: u64,
    pub min_orbit_size: usize,
    pub sqrt_threshold: u64,
    pub satisfied: bool,
}

/// Smallest Galois orbit at level n against ⌈√n⌉.
pub fn degree_bound_report(beta: &Rational, n: u64) -> Result<DegreeBoundReport> {
    if beta.is_zero() || beta.abs().is_one() {
        return Err(Error::Precondition(format!(
            "β = {beta} must be neither zero nor a root of unity"
        )));
    }
    let fs = level_factors(n, beta)?;
    let min = fs.iter().map(|f| f.degree()).min().unwrap_or(0);
    let t = ceil_sqrt(n);
    Ok(DegreeBoundReport { n, min_orbit_size: min, sqrt_threshold: t, satisfied: min as u64 >= t })
}

fn ceil_sqrt(n: u64) -> u64 {
    let r = BigUint::from(n).sqrt().to_u64().unwrap();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveClassReport {
    pub n: u64,
    pub class_size: usize,
    pub half_totient: u64,
    pub consistent: bool,
}

/// Size of the class of the root with phase index 1 (a primitive n-th root
/// of unity times the real root, for β > 0) against φ(n)/2.
pub fn primitive_class_report(beta: &Rational, d: u64, m: u32, precision: usize) -> Result<PrimitiveClassReport> {
    if !beta.is_positive() {
        return Err(Error::Precondition("primitive-phase report needs β > 0".into()));
    }
    let level = preimages(beta, d, m)?;
    let n = level.n;
    let part = galois_orbits(&level, precision)?;
    let j = if n > 1 { 1 } else { 0 };
    let class = part.class_of(j).expect("partition covers every index");
    let size = part.classes[class].size();
    let half = euler_totient(n)? / 2;
    Ok(PrimitiveClassReport { n, class_size: size, half_totient: half, consistent: size as u64 >= half })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn polys(v: &[&[i64]]) -> Vec<IntPoly> {
        v.iter().map(|c| IntPoly::from_i64(c)).collect()
    }

    #[test]
    fn capelli_examples() {
        assert!(capelli_irreducible(4, &int(2)));
        assert!(!capelli_irreducible(4, &int(4)));
        assert!(!capelli_irreducible(2, &int(1)));
        assert!(!capelli_irreducible(4, &int(-4)));
        assert!(capelli_irreducible(2, &int(-4)));
        assert!(!capelli_irreducible(8, &rat(-4, 81)));
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_binomial(4, &int(4)).unwrap(), polys(&[&[-2, 0, 1], &[2, 0, 1]]));
        assert_eq!(
            factor_binomial(9, &int(8)).unwrap(),
            polys(&[&[-2, 0, 0, 1], &[4, 0, 0, 2, 0, 0, 1]])
        );
        assert_eq!(factor_binomial(2, &int(4)).unwrap(), polys(&[&[-2, 1], &[2, 1]]));
        assert_eq!(factor_binomial(3, &rat(-8, 27)).unwrap(), polys(&[&[2, 3], &[4, -6, 9]]));
        assert!(matches!(factor_binomial(257, &int(2)), Err(Error::Resource(_))));
    }

    #[test]
    fn cyclotomic_split() {
        let fs = factor_binomial(12, &int(1)).unwrap();
        let degs: Vec<usize> = fs.iter().map(|f| f.degree()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2, 2, 4]);
        let prod = fs.iter().fold(IntPoly::from_i64(&[1]), |a, f| a.mul(f));
        assert_eq!(prod, IntPoly::binomial_model(12, &int(1)));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(subset_factor_oracle(4, &int(4)).unwrap(), factor_binomial(4, &int(4)).unwrap());
        let degs: Vec<usize> = subset_factor_oracle(6, &int(1)).unwrap().iter().map(|f| f.degree()).collect();
        assert_eq!(degs, vec![1, 1, 2, 2]);
        assert_eq!(subset_factor_oracle(2, &int(2)).unwrap(), polys(&[&[-2, 0, 1]]));
    }

    #[test]
    fn orbit_examples() {
        let part = galois_orbits(&preimages(&int(4), 2, 1).unwrap(), 128).unwrap();
        assert_eq!(part.sizes(), vec![1, 1]);
        assert_eq!(part.classes[0].factor, IntPoly::from_i64(&[-2, 1]));
        assert_eq!(part.classes[0].indices, vec![0]);
        let part = galois_orbits(&preimages(&int(4), 4, 1).unwrap(), 128).unwrap();
        assert_eq!(part.sizes(), vec![2, 2]);
        assert_eq!(part.classes[0].indices, vec![0, 2]);
        let part = galois_orbits(&preimages(&int(2), 2, 3).unwrap(), 128).unwrap();
        assert_eq!(part.sizes(), vec![8]);
    }

    #[test]
    fn structural_matches_zassenhaus() {
        for beta in [int(2), int(4), int(16), int(-4), int(-64), rat(1, 16), int(256), int(1)] {
            for n in [2u64, 4, 8, 16, 32, 64] {
                assert_eq!(
                    structural_factors(n, &beta).unwrap(),
                    factor_binomial(n, &beta).unwrap(),
                    "n = {n}, β = {beta}"
                );
            }
        }
    }

    #[test]
    fn structural_partition_matches_numeric() {
        for beta in [int(16), int(-4), int(1), int(-1)] {
            let level = preimages(&beta, 2, 4).unwrap();
            let numeric = galois_orbits(&level, 128).unwrap();
            let mut exact = Vec::new();
            let mut parts = structural(16, &beta, true).unwrap();
            parts.sort_by(|a, b| a.0.report_cmp(&b.0));
            for (f, ks) in parts {
                let mut idx: Vec<u64> = ks.into_iter().map(|k| k / 2).collect();
                idx.sort_unstable();
                exact.push(GaloisClass { factor: f, indices: idx });
            }
            assert_eq!(numeric.classes, exact, "β = {beta}");
        }
    }

    #[test]
    fn degree_bound_examples() {
        let r = degree_bound_report(&int(2), 16).unwrap();
        assert_eq!((r.min_orbit_size, r.sqrt_threshold, r.satisfied), (16, 4, true));
        let r = degree_bound_report(&int(4), 4).unwrap();
        assert_eq!((r.min_orbit_size, r.sqrt_threshold, r.satisfied), (2, 2, true));
        let r = degree_bound_report(&int(8), 9).unwrap();
        assert_eq!((r.min_orbit_size, r.sqrt_threshold, r.satisfied), (3, 3, true));
        assert!(matches!(degree_bound_report(&int(-1), 4), Err(Error::Precondition(_))));
    }
}
