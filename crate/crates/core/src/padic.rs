//! Newton polygons and the p-adic distances v_p(z − α) from a rational α to
//! the roots of x^n = β.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, valuation_rat, Rational};
use crate::arith::Prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rational::serde_str")]
    pub root_valuation: Rational,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub p: Prime,
    /// Lower hull vertices (k, v_p(a_k)).
    pub vertices: Vec<(u64, i64)>,
    /// Root valuations in decreasing order.
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn degree(&self) -> u64 {
        self.segments.iter().map(|s| s.multiplicity).sum()
    }

    /// Σ rootValuation · multiplicity.
    pub fn slope_sum(&self) -> Rational {
        self.segments
            .iter()
            .map(|s| &s.root_valuation * Rational::from_integer(s.multiplicity.into()))
            .sum()
    }

    /// Root valuations with multiplicity, largest first.
    pub fn root_valuations(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for s in &self.segments {
            for _ in 0..s.multiplicity {
                out.push(s.root_valuation.clone());
            }
        }
        out
    }

    pub fn max_root_valuation(&self) -> Option<&Rational> {
        self.segments.first().map(|s| &s.root_valuation)
    }
}

/// Lower hull of points (k, v) sorted by k; zero coefficients are omitted.
pub(crate) fn polygon_from_valuations(p: &Prime, vals: &[(u64, i64)]) -> NewtonPolygon {
    let mut hull: Vec<(u64, i64)> = Vec::new();
    for &pt in vals {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Drop (x2, y2) unless it lies strictly below the chord to pt.
            let lhs = (y2 - y1) as i128 * (pt.0 - x1) as i128;
            let rhs = (pt.1 - y1) as i128 * (x2 - x1) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            Segment {
                root_valuation: Rational::new((y1 - y2).into(), ((x2 - x1) as i64).into()),
                multiplicity: x2 - x1,
            }
        })
        .collect();
    NewtonPolygon { p: p.clone(), vertices: hull, segments }
}

/// Newton polygon of Σ a_k x^k (constant term first).
pub fn newton_polygon(coeffs: &[Rational], p: &Prime) -> Result<NewtonPolygon> {
    let last = coeffs.iter().rposition(|c| !c.is_zero());
    let Some(deg) = last else {
        return Err(Error::Input("zero polynomial has no Newton polygon".into()));
    };
    if coeffs[0].is_zero() {
        return Err(Error::Input("constant term is zero; deflate the root at 0 first".into()));
    }
    let vals: Vec<(u64, i64)> = coeffs[..=deg]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as u64, valuation_rat(c, p.value())))
        .collect();
    Ok(polygon_from_valuations(p, &vals))
}

fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// v_p of the binomial coefficient C(n, k), by Legendre's formula.
pub fn binomial_valuation(n: u64, k: u64, p: &Prime) -> u64 {
    match p.to_u64() {
        Some(q) if q <= n => (digit_sum(k, q) + digit_sum(n - k, q) - digit_sum(n, q)) / (q - 1),
        _ => 0,
    }
}

/// α^n − β, exactly.
pub fn shifted_constant(alpha: &Rational, beta: &Rational, n: u64) -> Rational {
    rational::pow_rat(alpha, n) - beta
}

/// Newton polygon of g(y) = (y + α)^n − β, whose roots are z_j − α.
pub fn shifted_polygon(alpha: &Rational, beta: &Rational, n: u64, p: &Prime) -> Result<NewtonPolygon> {
    if n == 0 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    let c0 = shifted_constant(alpha, beta, n);
    if c0.is_zero() {
        return Err(Error::Degenerate(format!(
            "α^n = β for α = {alpha}, β = {beta}, n = {n}: a root coincides with α"
        )));
    }
    let mut vals = vec![(0u64, valuation_rat(&c0, p.value()))];
    if alpha.is_zero() {
        vals.push((n, 0));
    } else {
        let va = valuation_rat(alpha, p.value());
        for k in 1..=n {
            let v = binomial_valuation(n, k, p) as i64 + (n - k) as i64 * va;
            vals.push((k, v));
        }
    }
    Ok(polygon_from_valuations(p, &vals))
}

/// The multiset {v_p(z_j − α)} over the n roots of x^n = β, largest first.
/// Its sum is v_p(α^n − β).
pub fn distance_profile(alpha: &Rational, beta: &Rational, n: u64, p: &Prime) -> Result<Vec<Rational>> {
    if beta.is_zero() {
        return Err(Error::Domain("β = 0 has no distinct roots".into()));
    }
    Ok(shifted_polygon(alpha, beta, n, p)?.root_valuations())
}

/// Entries strictly above t, counted with multiplicity.
pub fn cluster_count(profile: &[Rational], t: &Rational) -> usize {
    profile.iter().filter(|v| *v > t).count()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinDistanceBound {
    /// max over depths of max v_p(z − α).
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// First depth attaining `value`.
    pub attained_depth: u32,
    /// Largest entry of the profile at each depth 0..=max_depth.
    #[serde(with = "rational::serde_vec")]
    pub per_depth: Vec<Rational>,
}

/// Valuation form of the bound M(α): the deepest p-adic approach of α to
/// any root of x^{d^m} = β, m ≤ max_depth. Needs v_p(α) = 0.
pub fn min_distance_bound(
    alpha: &Rational,
    beta: &Rational,
    d: u64,
    p: &Prime,
    max_depth: u32,
) -> Result<MinDistanceBound> {
    if alpha.is_zero() || valuation_rat(alpha, p.value()) != 0 {
        return Err(Error::Precondition(format!("|α|_p = 1 fails for α = {alpha} at p = {p}")));
    }
    if d < 2 {
        return Err(Error::Input("degree d must be at least 2".into()));
    }
    let mut per_depth = Vec::with_capacity(max_depth as usize + 1);
    let mut n: u64 = 1;
    for m in 0..=max_depth {
        let top = distance_profile(alpha, beta, n, p)
            .map_err(|e| match e {
                Error::Degenerate(s) => Error::Degenerate(format!("depth {m}: {s}")),
                other => other,
            })?
            .into_iter()
            .next()
            .expect("n ≥ 1");
        per_depth.push(top);
        if m < max_depth {
            n = n.checked_mul(d).ok_or_else(|| Error::Resource("level size overflows".into()))?;
        }
    }
    let value = per_depth.iter().max().expect("depth 0 present").clone();
    let attained_depth = per_depth.iter().position(|v| *v == value).unwrap() as u32;
    Ok(MinDistanceBound { value, attained_depth, per_depth })
}
