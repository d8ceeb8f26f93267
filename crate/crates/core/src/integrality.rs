//! S-integrality of Galois orbits of backward-orbit points relative to a
//! rational base point α.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::primes::factor;
use crate::arith::rational::{self, valuation_int, valuation_rat, Rational};
use crate::arith::{GaussRat, Place, Prime};
use crate::error::{Error, Result};
use crate::galois::GaloisOrbitPartition;
use crate::padic::{polygon_from_valuations, shifted_constant};
use crate::poly::IntPoly;

/// A set of places that always contains ∞.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SSet {
    finite: BTreeSet<Prime>,
}

impl SSet {
    /// {∞}.
    pub fn archimedean() -> Self {
        SSet::default()
    }

    pub fn from_primes<I: IntoIterator<Item = Prime>>(ps: I) -> Self {
        SSet { finite: ps.into_iter().collect() }
    }

    pub fn from_u64s(ps: &[u64]) -> Result<Self> {
        Ok(SSet::from_primes(ps.iter().map(|&p| Prime::from_u64(p)).collect::<Result<Vec<_>>>()?))
    }

    pub fn contains(&self, v: &Place) -> bool {
        match v {
            Place::Infinity => true,
            Place::Finite(p) => self.finite.contains(p),
        }
    }

    pub fn contains_prime(&self, p: &Prime) -> bool {
        self.finite.contains(p)
    }

    /// S_fin, in increasing order.
    pub fn finite(&self) -> impl Iterator<Item = &Prime> {
        self.finite.iter()
    }

    pub fn finite_len(&self) -> usize {
        self.finite.len()
    }

    pub fn places(&self) -> Vec<Place> {
        std::iter::once(Place::Infinity).chain(self.finite.iter().cloned().map(Place::Finite)).collect()
    }

    pub fn insert(&mut self, p: Prime) {
        self.finite.insert(p);
    }

    pub fn is_subset(&self, o: &SSet) -> bool {
        self.finite.is_subset(&o.finite)
    }
}

impl fmt::Display for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.places().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Comma-separated places; `inf` may be listed or omitted.
impl FromStr for SSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<SSet> {
        let mut out = SSet::default();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.parse::<Place>() {
                Ok(Place::Infinity) => {}
                Ok(Place::Finite(p)) => out.insert(p),
                Err(_) => return Err(Error::Input(format!("'{tok}' is not a prime or inf"))),
            }
        }
        Ok(out)
    }
}

impl Serialize for SSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.places())
    }
}

impl<'de> Deserialize<'de> for SSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SSet, D::Error> {
        let v = Vec::<Place>::deserialize(d)?;
        Ok(SSet::from_primes(v.into_iter().filter_map(|p| p.prime().cloned())))
    }
}

/// Primes that can break integrality, plus cofactors that resisted factoring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidatePrimes {
    pub primes: Vec<Prime>,
    #[serde(serialize_with = "ser_uint_vec")]
    pub unfactored: Vec<BigUint>,
}

fn ser_uint_vec<S: Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|m| m.to_string()))
}

fn collect_factors(m: &BigUint, primes: &mut BTreeSet<Prime>, unfactored: &mut Vec<BigUint>) {
    if m.is_zero() || m.is_one() {
        return;
    }
    let f = factor(m);
    primes.extend(f.primes.into_keys().map(Prime::new_unchecked));
    unfactored.extend(f.unsplit);
}

/// Primes dividing den α, den β, num β, or α^n − β. Outside this set both
/// integrality conditions hold automatically.
pub fn candidate_primes(alpha: &Rational, beta: &Rational, n: u64) -> Result<CandidatePrimes> {
    let c = shifted_constant(alpha, beta, n);
    if c.is_zero() {
        return Err(Error::Degenerate(format!("α^n = β for α = {alpha}, β = {beta}, n = {n}")));
    }
    let mut primes = BTreeSet::new();
    let mut unfactored = Vec::new();
    for m in [alpha.denom(), beta.denom(), beta.numer(), c.numer(), c.denom()] {
        collect_factors(m.magnitude(), &mut primes, &mut unfactored);
    }
    unfactored.sort();
    unfactored.dedup();
    Ok(CandidatePrimes { primes: primes.into_iter().collect(), unfactored })
}

/// A prime where the class fails, with the valuation that breaks it: the
/// largest v_p(γ − α) when v_p(α) ≥ 0, or v_p(γ) when v_p(α) < 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub prime: Prime,
    pub valuation: Rational,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.prime)?;
        t.serialize_element(&rational::fmt_rational(&self.valuation))?;
        t.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SIntegralityReport {
    pub class: usize,
    pub factor: IntPoly,
    #[serde(rename = "S")]
    pub s: SSet,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    /// Cofactors of the class norm, coprime to S and to every special prime,
    /// that could not be split. Each one proves failure at some prime ∉ S.
    #[serde(skip_serializing_if = "Vec::is_empty", serialize_with = "ser_uint_vec")]
    pub unfactored: Vec<BigUint>,
    pub checked_primes: Vec<Prime>,
    /// Largest v_p(γ − α) over the class at each p ∈ S_fin with v_p(α) ≥ 0.
    pub s_closeness: Vec<Witness>,
}

/// Coefficients of B^deg · f(y + A/B) in y, as integers.
fn taylor_shift(f: &IntPoly, alpha: &Rational) -> Vec<BigInt> {
    let deg = f.degree();
    let a = alpha.numer();
    let b = alpha.denom();
    let mut apow = vec![BigInt::one()];
    let mut bpow = vec![BigInt::one()];
    for i in 0..deg {
        apow.push(&apow[i] * a);
        bpow.push(&bpow[i] * b);
    }
    let mut out = vec![BigInt::zero(); deg + 1];
    for (e, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // c · (A + B·y)^e · B^(deg − e) contributes C(e, k)·A^(e−k)·B^(deg−e+k) to y^k.
        let mut binom = BigInt::one();
        for k in 0..=e {
            out[k] += c * &binom * &apow[e - k] * &bpow[deg - e + k];
            binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
        }
    }
    out
}

/// Largest v_p(γ − α) over the roots γ of f, from the polygon of the shift.
fn max_shift_valuation(shift: &[BigInt], p: &Prime) -> Rational {
    let vals: Vec<(u64, i64)> = shift
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u64, valuation_int(c, p.value()) as i64))
        .collect();
    let np = polygon_from_valuations(p, &vals);
    np.max_root_valuation().cloned().unwrap_or_else(Rational::zero)
}

fn strip(m: &mut BigUint, p: &BigUint) {
    while (&*m % p).is_zero() {
        *m /= p;
    }
}

/// S-integrality of the Galois class with irreducible polynomial `f` (roots
/// of x^n = β) relative to α.
pub fn is_s_integral(
    class: usize,
    f: &IntPoly,
    beta: &Rational,
    n: u64,
    alpha: &Rational,
    s: &SSet,
) -> Result<SIntegralityReport> {
    if f.degree() == 0 {
        return Err(Error::Input("class polynomial must have positive degree".into()));
    }
    let shift = taylor_shift(f, alpha);
    if shift[0].is_zero() {
        return Err(Error::Degenerate(format!("α = {alpha} is a root of {f}")));
    }
    let mut special = BTreeSet::new();
    let mut unf = Vec::new();
    for m in [alpha.denom(), beta.numer(), beta.denom()] {
        collect_factors(m.magnitude(), &mut special, &mut unf);
    }
    if !unf.is_empty() {
        return Err(Error::Resource(format!("could not factor {} within budget", unf[0])));
    }
    let mut witnesses = Vec::new();
    let mut checked = Vec::new();
    for p in &special {
        if s.contains_prime(p) {
            continue;
        }
        checked.push(p.clone());
        if valuation_rat(alpha, p.value()) >= 0 {
            let v = max_shift_valuation(&shift, p);
            if v.is_positive() {
                witnesses.push(Witness { prime: p.clone(), valuation: v });
            }
        } else {
            let v = Rational::new(valuation_rat(beta, p.value()).into(), n.into());
            if v.is_negative() {
                witnesses.push(Witness { prime: p.clone(), valuation: v });
            }
        }
    }
    // The class norm ∏(α − γ) = shift₀ / (B^deg · lc) has nonnegative
    // valuation at every other prime, and the class fails there iff it is
    // positive.
    let mut c = shift[0].magnitude().clone();
    for p in special.iter().chain(s.finite()) {
        strip(&mut c, p.value());
    }
    let mut unfactored = Vec::new();
    if !c.is_one() {
        let fz = factor(&c);
        for p in fz.primes.into_keys().map(Prime::new_unchecked) {
            checked.push(p.clone());
            let v = max_shift_valuation(&shift, &p);
            debug_assert!(v.is_positive());
            witnesses.push(Witness { prime: p, valuation: v });
        }
        unfactored = fz.unsplit;
    }
    let s_closeness = s
        .finite()
        .filter(|p| valuation_rat(alpha, p.value()) >= 0)
        .map(|p| Witness { prime: p.clone(), valuation: max_shift_valuation(&shift, p) })
        .collect();
    checked.sort();
    witnesses.sort_by(|a, b| a.prime.cmp(&b.prime));
    let verdict = witnesses.is_empty() && unfactored.is_empty();
    Ok(SIntegralityReport {
        class,
        factor: f.clone(),
        s: s.clone(),
        verdict,
        witnesses,
        unfactored,
        checked_primes: checked,
        s_closeness,
    })
}

/// Reports for every class of a partition, in class order.
pub fn classify_level(part: &GaloisOrbitPartition, alpha: &Rational, s: &SSet) -> Result<Vec<SIntegralityReport>> {
    let lvl = &part.level;
    part.classes
        .par_iter()
        .enumerate()
        .map(|(i, c)| is_s_integral(i, &c.factor, &lvl.beta, lvl.n, alpha, s))
        .collect()
}

/// The rational value of α, or an Unsupported error for α ∉ Q.
pub fn require_rational(alpha: &GaussRat) -> Result<&Rational> {
    alpha
        .as_rational()
        .ok_or_else(|| Error::Unsupported(format!("S-integrality needs a rational α, got {alpha}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn x2m2() -> IntPoly {
        IntPoly::from_i64(&[-2, 0, 1])
    }

    #[test]
    fn candidate_examples() {
        let ps = |a: Rational, b: Rational, n| -> Vec<u64> {
            candidate_primes(&a, &b, n).unwrap().primes.iter().map(|p| p.to_u64().unwrap()).collect()
        };
        assert_eq!(ps(int(3), int(2), 2), vec![2, 7]);
        assert_eq!(ps(int(1), int(2), 2), vec![2]);
        assert!(ps(rat(1, 3), int(2), 2).contains(&3));
        assert!(candidate_primes(&int(2), &int(4), 2).is_err());
    }

    #[test]
    fn integrality_examples() {
        let r = is_s_integral(0, &x2m2(), &int(2), 2, &int(1), &SSet::archimedean()).unwrap();
        assert!(r.verdict);
        let r = is_s_integral(0, &x2m2(), &int(2), 2, &int(3), &SSet::archimedean()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.witnesses, vec![Witness { prime: Prime::from_u64(7).unwrap(), valuation: int(1) }]);
        let s7 = SSet::from_u64s(&[7]).unwrap();
        let r = is_s_integral(0, &x2m2(), &int(2), 2, &int(3), &s7).unwrap();
        assert!(r.verdict);
        assert_eq!(r.s_closeness, vec![Witness { prime: Prime::from_u64(7).unwrap(), valuation: int(1) }]);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"S\":[\"inf\",7]"), "{json}");
    }

    #[test]
    fn special_primes() {
        // α = 1/2: v_2(α) < 0 and v_2(2) ≥ 0, so 2 passes; norm 1/4 − 2.
        let r = is_s_integral(0, &x2m2(), &int(2), 2, &rat(1, 2), &SSet::archimedean()).unwrap();
        assert_eq!(r.witnesses.iter().map(|w| w.prime.to_u64().unwrap()).collect::<Vec<_>>(), vec![7]);
        // β = 1/2: roots have v_2 = −1/2, which fails against α = 1/3.
        let f = IntPoly::from_i64(&[-1, 0, 2]);
        let r = is_s_integral(0, &f, &rat(1, 2), 2, &rat(1, 3), &SSet::archimedean()).unwrap();
        assert!(!r.verdict);
        // α = 2 is 2-adically close to √2: v_2(√2 − 2) = 1/2.
        let r = is_s_integral(0, &x2m2(), &int(2), 2, &int(2), &SSet::archimedean()).unwrap();
        assert_eq!(r.witnesses[0], Witness { prime: Prime::from_u64(2).unwrap(), valuation: rat(1, 2) });
    }

    #[test]
    fn sset_parse() {
        let s: SSet = "7, 11,inf".parse().unwrap();
        assert_eq!(s.to_string(), "{inf, 7, 11}");
        assert!("4".parse::<SSet>().is_err());
        assert_eq!(serde_json::from_str::<SSet>("[\"inf\",7,11]").unwrap(), s);
    }

    #[test]
    fn shift_matches_eval() {
        let f = IntPoly::from_i64(&[4, 0, 0, 2, 0, 0, 1]);
        let a = rat(3, 2);
        let sh = taylor_shift(&f, &a);
        let want = f.eval_rat(&a) * Rational::from_integer(BigInt::from(64));
        assert_eq!(Rational::from_integer(sh[0].clone()), want);
    }
}
