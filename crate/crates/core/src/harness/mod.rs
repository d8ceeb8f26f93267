//! Desk-scale verification of the quantitative statements about backward
//! orbits of z ↦ z^d: exact pairing identities, discrepancy decay,
//! closeness, clustering and the S-integral census.

mod census;
mod suite;

pub use census::{s_integral_census, CensusClass, CensusDepth, CensusReport};
pub use suite::{
    bound_suite, calibrate_discrepancy, clustering_samples, scaled_discrepancy, BaselineCell, Cell, CellReport,
    ClusterSample, DiscrepancyBaseline, SuiteConfig, SuiteReport, SuiteRow,
};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::primes::factor;
use crate::arith::rational::{self, Rational};
use crate::arith::{log_abs, support, weil_height, GaussRat, LogValue, Place, Prime};
use crate::error::{Error, Result};
use crate::galois::level_factors;
use crate::local::{lambda_level_sum, log_plus_root};
use crate::mp;
use crate::padic::shifted_constant;
use crate::radical::{level_size, OrbitLevel, RadicalPoint};

/// Where a contribution to a sum over places comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceKey {
    Place(Place),
    /// All primes of an unsplit cofactor of α^n − β, taken together.
    Unfactored(BigUint),
}

impl Serialize for PlaceKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PlaceKey::Place(p) => p.serialize(s),
            PlaceKey::Unfactored(m) => s.serialize_str(&format!("primes of {m}")),
        }
    }
}

/// Exact bookkeeping of Σ_v Σ_j λ_{α,v}(z_j) over one level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AzIdentity {
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub n: u64,
    /// Σ_j λ_{α,v}(z_j) per place.
    pub contributions: Vec<(PlaceKey, LogValue)>,
    pub total: LogValue,
    /// total / n.
    pub mean: LogValue,
    /// h(α) + h(β)/n.
    pub target: LogValue,
    pub holds: bool,
    /// Σ_v log|α^n − β|_v, which must vanish.
    pub t_n: LogValue,
}

fn inv(n: u64) -> Rational {
    Rational::new(1.into(), n.into())
}

/// Evaluates both sides of mean Σ_v λ_{α,v} = h(α) + h(β)/n exactly.
pub fn az_identity(alpha: &Rational, beta: &Rational, n: u64) -> Result<AzIdentity> {
    let c = shifted_constant(alpha, beta, n);
    if c.is_zero() {
        return Err(Error::Degenerate(format!("α^{n} = β")));
    }
    let mut primes: Vec<Prime> = support(alpha)?;
    primes.extend(support(beta)?);
    let fc = factor(c.numer().magnitude());
    primes.extend(fc.primes.keys().cloned().map(Prime::new_unchecked));
    primes.extend(support(&Rational::from_integer(c.denom().clone()))?);
    primes.sort();
    primes.dedup();
    let a = GaussRat::real(alpha.clone());
    let mut contributions = Vec::with_capacity(primes.len() + 2);
    let mut t_n = LogValue::zero();
    for v in std::iter::once(Place::Infinity).chain(primes.into_iter().map(Place::Finite)) {
        let s = lambda_level_sum(&a, beta, n, &v)?.exact.expect("level sums are exact");
        t_n += &log_abs(&c, &v)?;
        contributions.push((PlaceKey::Place(v), s));
    }
    for m in fc.unsplit {
        // Every prime of m divides α^n − β exactly as often as it divides m,
        // and none of them touches α or β.
        let l = LogValue::log_of(&m);
        t_n = &t_n - &l;
        contributions.push((PlaceKey::Unfactored(m), l));
    }
    let total: LogValue = contributions.iter().map(|(_, l)| l.clone()).sum();
    let mean = total.scale(&inv(n));
    let target = &weil_height(alpha) + &weil_height(beta).scale(&inv(n));
    let holds = mean == target && t_n.is_zero();
    Ok(AzIdentity { alpha: alpha.clone(), beta: beta.clone(), n, contributions, total, mean, target, holds, t_n })
}

/// One depth of a pairing curve.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRecord {
    pub depth: u32,
    pub n: u64,
    /// Galois orbit sizes, when the level factors within the supported range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_sizes: Option<Vec<usize>>,
    /// |mean λ_{α,v} − ∫λ_{α,v} dμ_v| for each place contributing to the sum.
    pub discrepancy: Vec<(Place, f64)>,
    pub mean_lambda: LogValue,
    pub mean_lambda_f64: f64,
    pub target: LogValue,
    pub identity_holds: bool,
    /// Σ_j λ_{α,∞}(z_j): exact resultant form and the direct per-root sum.
    pub archimedean_exact: f64,
    pub archimedean_direct: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub s_integral: Vec<bool>,
}

/// The curve n ↦ mean Σ_v λ_{α,v} over the levels of depth 1..=max_depth.
pub fn az_pairing_curve(
    alpha: &Rational,
    beta: &Rational,
    d: u64,
    max_depth: u32,
    precision: usize,
) -> Result<Vec<DepthRecord>> {
    if alpha.is_zero() {
        return Err(Error::Precondition("α = 0".into()));
    }
    let a = GaussRat::real(alpha.clone());
    (1..=max_depth)
        .into_par_iter()
        .map(|m| {
            let n = level_size(d, m)?;
            let id = az_identity(alpha, beta, n).map_err(|e| match e {
                Error::Degenerate(s) => Error::Degenerate(format!("depth {m}: {s}")),
                other => other,
            })?;
            let discrepancy = id
                .contributions
                .iter()
                .filter_map(|(k, l)| match k {
                    PlaceKey::Place(v) => Some((v.clone(), l.scale(&inv(n)).to_f64().abs())),
                    PlaceKey::Unfactored(_) => None,
                })
                .collect();
            let arch = id.contributions[0].1.to_f64();
            let direct = archimedean_direct_sum(&a, beta, n, precision)?;
            let orbit_sizes = level_factors(n, beta).ok().map(|fs| fs.iter().map(|f| f.degree()).collect());
            Ok(DepthRecord {
                depth: m,
                n,
                orbit_sizes,
                discrepancy,
                mean_lambda_f64: id.mean.to_f64(),
                mean_lambda: id.mean,
                target: id.target,
                identity_holds: id.holds,
                archimedean_exact: arch,
                archimedean_direct: direct,
                s_integral: vec![],
            })
        })
        .collect()
}

/// Σ_j λ_{α,∞}(z_j) from the embedded roots, one at a time, in a fixed
/// pairwise order.
pub fn archimedean_direct_sum(alpha: &GaussRat, beta: &Rational, n: u64, precision: usize) -> Result<f64> {
    let lp = (&log_plus_root(beta, n, &Place::Infinity) + &alpha.log_plus_abs()).to_f64();
    let level = OrbitLevel { beta: beta.clone(), d: n.max(2), depth: 1, n };
    let a = alpha.to_ball(precision);
    let zs = level.embed_all(precision);
    let terms: Vec<f64> = zs
        .into_par_iter()
        .enumerate()
        .map(|(j, z)| match z.sub(&a).ln_abs_f64() {
            Some(l) => Ok(lp - l),
            // Too close to α at this precision: redo the root on its own.
            None => ln_dist(alpha, &level.point(j as u64), 2 * precision).map(|l| lp - l),
        })
        .collect::<Result<_>>()?;
    Ok(mp::pairwise_sum(&terms))
}

fn ln_dist(alpha: &GaussRat, z: &RadicalPoint, precision: usize) -> Result<f64> {
    let mut wp = precision;
    loop {
        let diff = z.embed(wp).sub(&alpha.to_ball(wp));
        if let Some(l) = diff.ln_abs_f64() {
            return Ok(l);
        }
        wp *= 2;
        if wp > 1 << 14 {
            return Err(Error::Pole(format!("root {} of x^{} = {} meets α", z.j, z.n, z.beta)));
        }
    }
}

/// |mean λ_{α,v} over the level − ∫ λ_{α,v} dμ_v|, via the exact level sum.
pub fn discrepancy(alpha: &GaussRat, beta: &Rational, d: u64, depth: u32, v: &Place) -> Result<f64> {
    let n = level_size(d, depth)?;
    let s = lambda_level_sum(alpha, beta, n, v)?;
    let mean = s.exact.expect("level sums are exact").scale(&inv(n));
    // The equilibrium integral is 0 at every place.
    Ok(mean.to_f64().abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosenessRecord {
    pub n: u64,
    /// max_j log|z_j − α|⁻¹ at ∞.
    pub max_log_inv_dist: f64,
    pub argmax: u64,
    /// D³(h(α) + h(s) + 1)·n^ε with D = [Q(α):Q] and h(s) = h(β)/n.
    pub bound: f64,
    /// max_log_inv_dist / bound: the constant C_ε this level needs.
    pub ratio: f64,
}

/// Closest approach of the level to α at the archimedean place, against the
/// shape D³(h(α) + h(s) + 1)·n^ε.
pub fn archimedean_closeness(
    alpha: &GaussRat,
    beta: &Rational,
    d: u64,
    depth: u32,
    epsilon: f64,
    precision: usize,
) -> Result<ClosenessRecord> {
    if alpha.is_zero() || alpha.is_root_of_unity() {
        return Err(Error::Precondition(format!("α = {alpha} is preperiodic for z^d")));
    }
    let n = level_size(d, depth)?;
    let ds: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| ln_dist(alpha, &RadicalPoint { beta: beta.clone(), n, j }, precision).map(|l| -l))
        .collect::<Result<_>>()?;
    let (argmax, max) = ds
        .iter()
        .enumerate()
        .fold((0usize, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let deg = alpha.degree() as f64;
    let hs = weil_height(beta).to_f64() / n as f64;
    let bound = deg.powi(3) * (alpha.height().to_f64() + hs + 1.0) * (n as f64).powf(epsilon);
    Ok(ClosenessRecord { n, max_log_inv_dist: max, argmax: argmax as u64, bound, ratio: max / bound })
}

/// Rejects α ∈ {0, ±1}, the rational preperiodic points of z^d.
pub(crate) fn require_wandering(alpha: &Rational) -> Result<()> {
    if alpha.is_zero() || alpha.numer().magnitude().is_one() && alpha.denom().is_one() {
        return Err(Error::Precondition(format!("α = {alpha} is preperiodic for z^d")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn az_examples() {
        let id = az_identity(&int(2), &int(2), 4).unwrap();
        assert!(id.holds);
        let l2 = LogValue::log_of_u64(2);
        assert_eq!(id.mean, &l2 + &l2.scale(&rat(1, 4)));
        let id = az_identity(&int(1), &int(2), 8).unwrap();
        assert_eq!(id.mean, l2.scale(&rat(1, 8)));
        let id = az_identity(&int(2), &int(1), 4).unwrap();
        assert_eq!(id.mean, l2);
        assert!(az_identity(&int(2), &int(4), 2).is_err());
    }

    #[test]
    fn az_identity_with_unfactored_cofactor() {
        let id = az_identity(&int(3), &int(2), 512).unwrap();
        assert!(id.holds);
        assert!(id.t_n.is_zero());
    }

    #[test]
    fn curve_matches_direct_sum() {
        let c = az_pairing_curve(&int(2), &int(2), 2, 4, 128).unwrap();
        assert_eq!(c.len(), 4);
        for r in &c {
            assert!(r.identity_holds);
            assert!((r.archimedean_exact - r.archimedean_direct).abs() < 1e-9);
        }
        assert_eq!(c[2].orbit_sizes, Some(vec![8]));
    }

    #[test]
    fn discrepancy_examples() {
        let g = |x: Rational| GaussRat::real(x);
        let v = discrepancy(&g(int(2)), &int(2), 2, 2, &Place::Infinity).unwrap();
        assert!((v - (2f64.ln() - 0.25 * 7f64.ln())).abs() < 1e-15);
        assert!((v - 0.20667).abs() < 1e-5);
        assert_eq!(discrepancy(&g(int(1)), &int(2), 2, 3, &Place::finite(7).unwrap()).unwrap(), 0.0);
        assert_eq!(discrepancy(&g(int(0)), &int(1), 2, 1, &Place::Infinity).unwrap(), 0.0);
    }

    #[test]
    fn closeness_examples() {
        let a: GaussRat = "(3+4i)/5".parse().unwrap();
        let r = archimedean_closeness(&a, &int(2), 2, 6, 0.5, 128).unwrap();
        assert!(r.ratio.is_finite());
        assert!((a.height().to_f64() - 0.5 * 5f64.ln()).abs() < 1e-15);
        let r = archimedean_closeness(&GaussRat::real(int(2)), &int(2), 2, 4, 0.5, 128).unwrap();
        assert_eq!(r.argmax, 0);
        assert!((r.max_log_inv_dist + (2.0 - 2f64.powf(1.0 / 16.0)).ln()).abs() < 1e-12);
        assert!(r.max_log_inv_dist < 0.05);
        assert!(archimedean_closeness(&"i".parse().unwrap(), &int(2), 2, 2, 0.5, 128).is_err());
    }
}
