//! Configurable bound suite: each cell measures one inequality over a range
//! of levels and reports pass/fail with the constant it implies.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::primes::is_prime_u64;
use crate::arith::rational::{self, valuation_rat, Rational};
use crate::arith::{weil_height, GaussRat, Place, Prime};
use crate::error::{Error, Result};
use crate::galois::{degree_bound_report, level_factors};
use crate::padic::{cluster_count, distance_profile};
use crate::radical::level_size;

use super::{archimedean_closeness, discrepancy};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    /// |mean h_{L_α} − h(α)| = h(β)/n against C·(1 + log √n)/√n.
    AzRate {
        #[serde(with = "rational::serde_str")]
        alpha: Rational,
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        d: u64,
        depths: (u32, u32),
        constant: f64,
    },
    /// D(n)·√(n / log n) against `factor` times its value at the first depth.
    DiscrepancyDecay {
        alpha: GaussRat,
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        d: u64,
        depths: (u32, u32),
        place: Place,
        factor: f64,
    },
    /// Random (α, β, n, p): at most one root above v_p(β)/n + 1/(p − 1), and
    /// at most p·log p/ε + 1 above ε.
    Clustering { samples: usize, seed: u64, n_max: u64, p_max: u64, epsilon: f64 },
    /// max log|z − α|⁻¹ against C·D³(h(α) + h(s) + 1)·n^ε.
    Closeness {
        alpha: GaussRat,
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        d: u64,
        depths: (u32, u32),
        epsilon: f64,
        constant: f64,
    },
    /// D(n) against C·n^{−δ}·√(log n)·A·(h(α) + h(s) + 1), A = max(1, closeness).
    ClosenessDiscrepancy {
        alpha: GaussRat,
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        d: u64,
        depths: (u32, u32),
        delta: f64,
        constant: f64,
    },
    /// Smallest Galois orbit at level n against ⌈√n⌉.
    DegreeBound {
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        ns: Vec<u64>,
    },
    /// h(γ) ≥ (1/(4D))·(log log D / log D)³ for every class of degree D ≥ 2.
    Dobrowolski {
        #[serde(with = "rational::serde_str")]
        beta: Rational,
        d: u64,
        depths: (u32, u32),
    },
}

impl Cell {
    pub fn kind(&self) -> &'static str {
        match self {
            Cell::AzRate { .. } => "az_rate",
            Cell::DiscrepancyDecay { .. } => "discrepancy_decay",
            Cell::Clustering { .. } => "clustering",
            Cell::Closeness { .. } => "closeness",
            Cell::ClosenessDiscrepancy { .. } => "closeness_discrepancy",
            Cell::DegreeBound { .. } => "degree_bound",
            Cell::Dobrowolski { .. } => "dobrowolski",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default = "default_precision")]
    pub precision: usize,
    pub cells: Vec<Cell>,
}

fn default_precision() -> usize {
    128
}

impl SuiteConfig {
    /// The shipped suite. Constants of the closeness and closeness-discrepancy cells were
    /// frozen from a calibration run.
    pub fn default_suite() -> Self {
        let r = |n: i64| Rational::from_integer(n.into());
        let gauss: GaussRat = "(3+4i)/5".parse().expect("literal");
        let mut cells = vec![Cell::AzRate { alpha: r(2), beta: r(2), d: 2, depths: (2, 10), constant: 1.0 }];
        for a in [GaussRat::real(r(2)), GaussRat::real(r(3)), gauss.clone()] {
            cells.push(Cell::DiscrepancyDecay {
                alpha: a,
                beta: r(2),
                d: 2,
                depths: (6, 12),
                place: Place::Infinity,
                factor: 4.0,
            });
        }
        cells.push(Cell::Clustering { samples: 1000, seed: 7, n_max: 64, p_max: 97, epsilon: 0.5 });
        cells.push(Cell::Closeness {
            alpha: gauss.clone(),
            beta: r(2),
            d: 2,
            depths: (1, 10),
            epsilon: 0.5,
            constant: 0.1,
        });
        cells.push(Cell::ClosenessDiscrepancy {
            alpha: GaussRat::real(r(2)),
            beta: r(2),
            d: 2,
            depths: (2, 12),
            delta: 0.5,
            constant: 0.5,
        });
        cells.push(Cell::DegreeBound { beta: r(2), ns: vec![4, 16, 64, 256, 1024] });
        cells.push(Cell::DegreeBound { beta: r(4), ns: vec![4, 16, 64, 256, 1024] });
        cells.push(Cell::Dobrowolski { beta: r(2), d: 2, depths: (1, 10) });
        SuiteConfig { precision: 128, cells }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub place: Option<Place>,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub index: usize,
    pub kind: String,
    pub pass: bool,
    /// Smallest constant that would make every row pass.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub implied_constant: Option<f64>,
    pub rows: Vec<SuiteRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cells: Vec<CellReport>,
    pub all_pass: bool,
}

fn row(depth: u32, n: u64, place: Option<Place>, lhs: f64, rhs: f64, pass: bool) -> SuiteRow {
    SuiteRow { depth: Some(depth), n: Some(n), place, lhs, rhs, pass }
}

fn max_ratio(rows: &[SuiteRow]) -> Option<f64> {
    rows.iter()
        .filter(|r| r.rhs > 0.0)
        .map(|r| r.lhs / r.rhs)
        .fold(None, |m, x| Some(m.map_or(x, |m: f64| m.max(x))))
}

/// D(n)·√(n / log n) at each depth of the range.
pub fn scaled_discrepancy(
    alpha: &GaussRat,
    beta: &Rational,
    d: u64,
    depths: (u32, u32),
    place: &Place,
) -> Result<Vec<(u32, u64, f64)>> {
    (depths.0..=depths.1)
        .map(|m| {
            let n = level_size(d, m)?;
            let dn = discrepancy(alpha, beta, d, m, place)?;
            let nf = n as f64;
            Ok((m, n, dn * (nf / nf.ln()).sqrt()))
        })
        .collect()
}

/// One randomly drawn clustering sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterSample {
    #[serde(with = "rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub n: u64,
    pub p: u64,
    /// Entries above v_p(β)/n + 1/(p − 1).
    pub close: usize,
    /// Entries above ε.
    pub above_eps: usize,
}

/// Deterministic random samples with n ≤ n_max and p ≤ p_max; β is scaled by
/// a random power of p so that v_p(β) varies.
pub fn clustering_samples(count: usize, seed: u64, n_max: u64, p_max: u64, epsilon: f64) -> Result<Vec<ClusterSample>> {
    let primes: Vec<u64> = (2..=p_max).filter(|&q| is_prime_u64(q)).collect();
    if primes.is_empty() || n_max == 0 {
        return Err(Error::Input("empty sample space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Vec::with_capacity(count);
    while raw.len() < count {
        let p = primes[rng.gen_range(0..primes.len())];
        let n = rng.gen_range(1..=n_max);
        let mut an: i64 = rng.gen_range(-60..=60);
        if an == 0 {
            an = 1;
        }
        let alpha = Rational::new(an.into(), rng.gen_range(1i64..=12).into());
        let mut bn = BigInt::from(rng.gen_range(1i64..=500));
        if rng.gen_bool(0.5) {
            bn = -bn;
        }
        let mut beta = Rational::new(bn, rng.gen_range(1i64..=30).into());
        let k: i32 = rng.gen_range(-3..=6);
        let pk = Rational::from_integer(BigInt::from(p).pow(k.unsigned_abs()));
        beta = if k >= 0 { beta * pk } else { beta / pk };
        if (rational::pow_rat(&alpha, n) - &beta).is_zero() {
            continue;
        }
        raw.push((alpha, beta, n, p));
    }
    raw.into_par_iter()
        .map(|(alpha, beta, n, p)| {
            let pp = Prime::from_u64(p)?;
            let prof = distance_profile(&alpha, &beta, n, &pp)?;
            let t = Rational::new(valuation_rat(&beta, pp.value()).into(), n.into())
                + Rational::new(1.into(), ((p - 1) as i64).into());
            let eps = Rational::from_float(epsilon).ok_or_else(|| Error::Input("ε must be finite".into()))?;
            Ok(ClusterSample {
                close: cluster_count(&prof, &t),
                above_eps: cluster_count(&prof, &eps),
                alpha,
                beta,
                n,
                p,
            })
        })
        .collect()
}

fn run_cell(index: usize, cell: &Cell, precision: usize) -> Result<CellReport> {
    let mut rows = Vec::new();
    let mut note = None;
    let mut implied = None;
    match cell {
        Cell::AzRate { beta, d, depths, constant, .. } => {
            let hb = weil_height(beta).to_f64();
            for m in depths.0..=depths.1 {
                let n = level_size(*d, m)?;
                let nf = n as f64;
                let lhs = hb / nf;
                let rhs = (1.0 + nf.sqrt().ln()) / nf.sqrt();
                rows.push(row(m, n, None, lhs, rhs, lhs <= constant * rhs));
            }
            implied = max_ratio(&rows);
        }
        Cell::DiscrepancyDecay { alpha, beta, d, depths, place, factor } => {
            let s = scaled_discrepancy(alpha, beta, *d, *depths, place)?;
            let base = s[0].2;
            let mut monotone = true;
            for (i, &(m, n, v)) in s.iter().enumerate() {
                if i > 0 && v >= s[i - 1].2 {
                    monotone = false;
                }
                rows.push(row(m, n, Some(place.clone()), v, factor * base, v <= factor * base));
            }
            implied = Some(s.iter().map(|x| x.2).fold(0.0, f64::max) / base);
            note = Some(format!("strictly decreasing: {monotone}"));
        }
        Cell::Clustering { samples, seed, n_max, p_max, epsilon } => {
            let ss = clustering_samples(*samples, *seed, *n_max, *p_max, *epsilon)?;
            let mut v1 = 0;
            let mut v2 = 0;
            for s in &ss {
                let bound = s.p as f64 * (s.p as f64).ln() / epsilon + 1.0;
                let ok1 = s.close <= 1;
                let ok2 = (s.above_eps as f64) <= bound;
                v1 += usize::from(!ok1);
                v2 += usize::from(!ok2);
                if !ok1 || !ok2 {
                    rows.push(SuiteRow {
                        depth: None,
                        n: Some(s.n),
                        place: Some(Place::finite(s.p)?),
                        lhs: s.close.max(s.above_eps) as f64,
                        rhs: 1.0,
                        pass: false,
                    });
                }
            }
            let max_close = ss.iter().map(|s| s.close).max().unwrap_or(0);
            note = Some(format!(
                "{} samples; threshold violations {v1}; ε-count violations {v2}; max close {max_close}",
                ss.len()
            ));
        }
        Cell::Closeness { alpha, beta, d, depths, epsilon, constant } => {
            for m in depths.0..=depths.1 {
                let r = archimedean_closeness(alpha, beta, *d, m, *epsilon, precision)?;
                let lhs = r.max_log_inv_dist;
                rows.push(row(m, r.n, Some(Place::Infinity), lhs, r.bound, lhs <= constant * r.bound));
            }
            implied = max_ratio(&rows);
        }
        Cell::ClosenessDiscrepancy { alpha, beta, d, depths, delta, constant } => {
            let ha = alpha.height().to_f64();
            let hb = weil_height(beta).to_f64();
            let rs: Vec<(u32, u64, f64, f64)> = (depths.0..=depths.1)
                .into_par_iter()
                .map(|m| {
                    let n = level_size(*d, m)?;
                    let nf = n as f64;
                    let dn = discrepancy(alpha, beta, *d, m, &Place::Infinity)?;
                    let a = archimedean_closeness(alpha, beta, *d, m, 0.0, precision)?.max_log_inv_dist.max(1.0);
                    let rhs = nf.powf(-delta) * nf.ln().sqrt() * a * (ha + hb / nf + 1.0);
                    Ok((m, n, dn, rhs))
                })
                .collect::<Result<_>>()?;
            for (m, n, lhs, rhs) in rs {
                rows.push(row(m, n, Some(Place::Infinity), lhs, rhs, lhs <= constant * rhs));
            }
            implied = max_ratio(&rows);
        }
        Cell::DegreeBound { beta, ns } => {
            for &n in ns {
                let r = degree_bound_report(beta, n)?;
                rows.push(SuiteRow {
                    depth: None,
                    n: Some(n),
                    place: None,
                    lhs: r.min_orbit_size as f64,
                    rhs: r.sqrt_threshold as f64,
                    pass: r.satisfied,
                });
            }
        }
        Cell::Dobrowolski { beta, d, depths } => {
            let hb = weil_height(beta).to_f64();
            for m in depths.0..=depths.1 {
                let n = level_size(*d, m)?;
                let h = hb / n as f64;
                for f in level_factors(n, beta)? {
                    let deg = f.degree() as f64;
                    if deg < 2.0 {
                        continue;
                    }
                    let bound = (deg.ln().ln() / deg.ln()).powi(3) / (4.0 * deg);
                    rows.push(row(m, n, None, h, bound, h >= bound));
                }
            }
            note = Some("lower bound: rows pass when lhs ≥ rhs".into());
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(CellReport { index, kind: cell.kind().into(), pass, implied_constant: implied, rows, note, error: None })
}

/// Runs every cell; failures and errors are reported per cell, never thrown.
pub fn bound_suite(config: &SuiteConfig) -> SuiteReport {
    let cells: Vec<CellReport> = config
        .cells
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            run_cell(i, c, config.precision).unwrap_or_else(|e| CellReport {
                index: i,
                kind: c.kind().into(),
                pass: false,
                implied_constant: None,
                rows: vec![],
                note: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let all_pass = cells.iter().all(|c| c.pass);
    SuiteReport { cells, all_pass }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineCell {
    pub alpha: GaussRat,
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub d: u64,
    pub place: Place,
    pub depths: Vec<u32>,
    /// D(n)·√(n / log n) per depth.
    pub scaled: Vec<f64>,
}

/// Frozen output of the calibration run for the discrepancy-decay cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyBaseline {
    pub cells: Vec<BaselineCell>,
}

/// Computes the baseline for every discrepancy-decay cell of `config`.
pub fn calibrate_discrepancy(config: &SuiteConfig) -> Result<DiscrepancyBaseline> {
    let mut cells = Vec::new();
    for c in &config.cells {
        if let Cell::DiscrepancyDecay { alpha, beta, d, depths, place, .. } = c {
            let s = scaled_discrepancy(alpha, beta, *d, *depths, place)?;
            cells.push(BaselineCell {
                alpha: alpha.clone(),
                beta: beta.clone(),
                d: *d,
                place: place.clone(),
                depths: s.iter().map(|x| x.0).collect(),
                scaled: s.iter().map(|x| x.2).collect(),
            });
        }
    }
    Ok(DiscrepancyBaseline { cells })
}
