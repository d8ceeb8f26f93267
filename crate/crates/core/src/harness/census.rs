//! Census of S-integral Galois classes across the levels of a backward orbit.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::rational::{self, valuation_rat, Rational};
use crate::error::{Error, Result};
use crate::galois::level_factors;
use crate::integrality::{is_s_integral, SIntegralityReport, SSet, Witness};
use crate::radical::level_size;

use super::require_wandering;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusClass {
    pub index: usize,
    pub size: usize,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    /// S-integral, yet p-adically closer to α than the clustering threshold
    /// v_p(β)/n + 1/(p − 1) at some p ∈ S_fin.
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusDepth {
    pub depth: u32,
    pub n: u64,
    pub classes: Vec<CensusClass>,
}

impl CensusDepth {
    pub fn integral_sizes(&self) -> Vec<usize> {
        self.classes.iter().filter(|c| c.verdict).map(|c| c.size).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub d: u64,
    #[serde(rename = "S")]
    pub s: crate::integrality::SSet,
    pub max_depth: u32,
    pub depths: Vec<CensusDepth>,
    /// Largest S-integral class, and the first depth where it occurs.
    pub max_integral_size: Option<usize>,
    pub max_attained_depth: Option<u32>,
    /// One past the last depth holding an S-integral class (0 if none).
    pub stabilization_depth: u32,
    pub exceptional_count: usize,
    pub s_fin: usize,
}

impl CensusReport {
    /// S-integral classes strictly larger than `size`, over all depths.
    pub fn count_above(&self, size: usize) -> usize {
        self.depths.iter().flat_map(|d| d.integral_sizes()).filter(|&s| s > size).count()
    }

    /// Largest S-integral class size seen up to each depth.
    pub fn running_max(&self) -> Vec<usize> {
        let mut m = 0;
        self.depths
            .iter()
            .map(|d| {
                m = m.max(d.integral_sizes().into_iter().max().unwrap_or(0));
                m
            })
            .collect()
    }
}

fn is_exceptional(r: &SIntegralityReport, beta: &Rational, n: u64) -> bool {
    r.verdict
        && r.s_closeness.iter().any(|w| {
            let p = w.prime.value();
            let pm1 = Rational::from_integer((p - 1u32).into());
            let t = Rational::new(valuation_rat(beta, p).into(), n.into()) + Rational::from_integer(1.into()) / pm1;
            w.valuation > t
        })
}

/// S-integrality of every Galois class at depths 0..=max_depth.
pub fn s_integral_census(alpha: &Rational, beta: &Rational, d: u64, s: &SSet, max_depth: u32) -> Result<CensusReport> {
    require_wandering(alpha)?;
    if beta.is_zero() {
        return Err(Error::Domain("β = 0".into()));
    }
    if d < 2 {
        return Err(Error::Input("degree d must be at least 2".into()));
    }
    let depths: Vec<CensusDepth> = (0..=max_depth)
        .into_par_iter()
        .map(|m| {
            let n = level_size(d, m)?;
            let factors = level_factors(n, beta)?;
            let classes = factors
                .par_iter()
                .enumerate()
                .map(|(i, f)| {
                    let r = is_s_integral(i, f, beta, n, alpha, s)?;
                    Ok(CensusClass {
                        index: i,
                        size: f.degree(),
                        verdict: r.verdict,
                        exceptional: is_exceptional(&r, beta, n),
                        witnesses: r.witnesses,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CensusDepth { depth: m, n, classes })
        })
        .collect::<Result<_>>()?;
    let mut max_integral_size = None;
    let mut max_attained_depth = None;
    let mut last = None;
    let mut exceptional_count = 0;
    for dep in &depths {
        for c in dep.classes.iter().filter(|c| c.verdict) {
            last = Some(dep.depth);
            if max_integral_size.map(|m| c.size > m).unwrap_or(true) {
                max_integral_size = Some(c.size);
                max_attained_depth = Some(dep.depth);
            }
            exceptional_count += usize::from(c.exceptional);
        }
    }
    Ok(CensusReport {
        alpha: alpha.clone(),
        beta: beta.clone(),
        d,
        s: s.clone(),
        max_depth,
        depths,
        max_integral_size,
        max_attained_depth,
        stabilization_depth: last.map(|l| l + 1).unwrap_or(0),
        exceptional_count,
        s_fin: s.finite_len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::int;
    use crate::arith::Prime;

    #[test]
    fn census_examples() {
        let r = s_integral_census(&int(3), &int(2), 2, &SSet::archimedean(), 8).unwrap();
        assert!(r.depths[0].classes[0].verdict);
        let d1 = &r.depths[1].classes[0];
        assert!(!d1.verdict);
        assert_eq!(d1.witnesses, vec![Witness { prime: Prime::from_u64(7).unwrap(), valuation: int(1) }]);
        assert_eq!(r.stabilization_depth, 1);
        let r = s_integral_census(&int(3), &int(2), 2, &SSet::from_u64s(&[7]).unwrap(), 8).unwrap();
        assert!(r.depths[1].classes[0].verdict);
        assert!(r.depths[1].classes[0].exceptional);
        assert_eq!(r.stabilization_depth, 2);
        assert_eq!(r.exceptional_count, 1);
        assert!(matches!(
            s_integral_census(&int(1), &int(2), 2, &SSet::archimedean(), 2),
            Err(Error::Precondition(_))
        ));
    }
}
