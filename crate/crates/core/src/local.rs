//! Chordal distances, local heights λ_{α,v} for z ↦ z^d, their truncations,
//! and the equilibrium-measure integrals and constants built on them.

use std::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, valuation_rat, Rational};
use crate::arith::{log_abs, log_plus_abs, GaussRat, LogValue, Place, Prime};
use crate::error::{Error, Result};
use crate::mp::{self, par_sum, Ball};
use crate::padic::{self, polygon_from_valuations};
use crate::radical::RadicalPoint;

/// Projective point (x0 : x1) with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjPoint {
    #[serde(with = "rational::serde_str")]
    pub x0: Rational,
    #[serde(with = "rational::serde_str")]
    pub x1: Rational,
}

impl ProjPoint {
    pub fn new(x0: Rational, x1: Rational) -> Self {
        ProjPoint { x0, x1 }
    }

    /// (γ : 1).
    pub fn affine(g: Rational) -> Self {
        ProjPoint { x0: g, x1: Rational::one() }
    }

    /// (1 : 0).
    pub fn infinity() -> Self {
        ProjPoint { x0: Rational::one(), x1: Rational::zero() }
    }
}

/// |x|_v for rational x.
pub fn abs_v(x: &Rational, v: &Place) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    match v {
        Place::Infinity => x.abs(),
        Place::Finite(p) => {
            let e = valuation_rat(x, p.value());
            let pp = Rational::from_integer(p.value().clone().into());
            if e >= 0 {
                Rational::one() / rational::pow_rat(&pp, e as u64)
            } else {
                rational::pow_rat(&pp, (-e) as u64)
            }
        }
    }
}

/// δ_v(x, y) = |x0·y1 − y0·x1|_v / (max(|x0|_v,|x1|_v) · max(|y0|_v,|y1|_v)).
/// Exact for rational coordinates at every place.
pub fn chordal_distance(x: &ProjPoint, y: &ProjPoint, v: &Place) -> Result<Rational> {
    for pt in [x, y] {
        if pt.x0.is_zero() && pt.x1.is_zero() {
            return Err(Error::Input("(0 : 0) is not a projective point".into()));
        }
    }
    let num = abs_v(&(&x.x0 * &y.x1 - &y.x0 * &x.x1), v);
    let mx = abs_v(&x.x0, v).max(abs_v(&x.x1, v));
    let my = abs_v(&y.x0, v).max(abs_v(&y.x1, v));
    Ok(num / (mx * my))
}

/// A local height value: exact when it is a rational combination of logs,
/// otherwise a float with the precision it was computed at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalHeightValue {
    pub place: Place,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<LogValue>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<usize>,
    /// Bound on |value − true value| before the final rounding to f64.
    pub error_bound: f64,
}

impl LocalHeightValue {
    pub fn exact(place: Place, l: LogValue) -> Self {
        let value = l.to_f64();
        LocalHeightValue { place, exact: Some(l), value, precision: None, error_bound: 0.0 }
    }

    fn approx(place: Place, value: f64, precision: usize) -> Self {
        LocalHeightValue {
            place,
            exact: None,
            value,
            precision: Some(precision),
            error_bound: 2f64.powi(-(precision as i32 - 16)),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

fn inv_n(n: u64) -> Rational {
    Rational::new(1.into(), n.into())
}

/// log⁺|z|_v for any root z of x^n = β; the same for every conjugate.
pub fn log_plus_root(beta: &Rational, n: u64, v: &Place) -> LogValue {
    log_plus_abs(beta, v).scale(&inv_n(n))
}

fn log_plus_alpha(alpha: &GaussRat, v: &Place) -> Result<LogValue> {
    match (v, alpha.as_rational()) {
        (Place::Infinity, _) => Ok(alpha.log_plus_abs()),
        (Place::Finite(_), Some(a)) => Ok(log_plus_abs(a, v)),
        (Place::Finite(_), None) => Err(Error::Unsupported(
            "non-archimedean heights need a rational α".into(),
        )),
    }
}

fn is_root(alpha: &GaussRat, beta: &Rational, n: u64) -> bool {
    alpha.pow(n) == GaussRat::real(beta.clone())
}

/// Whether the point z is α itself.
fn coincides(alpha: &GaussRat, z: &RadicalPoint) -> bool {
    if !is_root(alpha, &z.beta, z.n) {
        return false;
    }
    // α is a root; decide which one by its argument, an exact multiple of π/2
    // or read off a precise embedding.
    let zb = z.embed(128);
    let ab = alpha.to_ball(128);
    let (zr, zi) = zb.to_f64();
    let (ar, ai) = ab.to_f64();
    let sep = 2.0 * (PI / z.n as f64).sin() * rational::rat_to_f64(&z.beta.abs()).powf(1.0 / z.n as f64);
    ((zr - ar).powi(2) + (zi - ai).powi(2)).sqrt() < sep / 4.0
}

/// ln|z − α| at ∞ as a ball with radius below 2^-(precision+8), or None at
/// a pole.
fn ln_dist_inf(alpha: &GaussRat, z: &RadicalPoint, precision: usize) -> Result<Option<Ball>> {
    if coincides(alpha, z) {
        return Ok(None);
    }
    let mut wp = precision + 32;
    loop {
        let diff = z.embed(wp).sub(&alpha.to_ball(wp));
        if let Some(l) = diff.ln_abs() {
            if l.rad_below_pow2(-(precision as i64) - 8) {
                return Ok(Some(l));
            }
        }
        wp *= 2;
        if wp > 1 << 16 {
            return Err(Error::Precision("could not separate z from α".into()));
        }
    }
}

fn logvalue_ball(l: &LogValue, prec: usize) -> Ball {
    let m = l.numeric(prec);
    Ball::with_rad(m, mp::pow2(-(prec as i64)), prec)
}

/// v_p(z − α) when it is the same for every conjugate z of the level, with
/// `None` meaning z = α. Errors when the conjugates disagree.
fn uniform_distance_valuation(alpha: &Rational, z: &RadicalPoint, p: &Prime) -> Result<Option<Rational>> {
    let a = GaussRat::real(alpha.clone());
    let n = z.n;
    let profile = if is_root(&a, &z.beta, n) {
        if coincides(&a, z) {
            return Ok(None);
        }
        // Drop the root y = 0 of (y + α)^n − β and read the rest.
        let va = valuation_rat(alpha, p.value());
        let vals: Vec<(u64, i64)> = (1..=n)
            .map(|k| (k - 1, padic::binomial_valuation(n, k, p) as i64 + (n - k) as i64 * va))
            .collect();
        polygon_from_valuations(p, &vals).root_valuations()
    } else {
        padic::distance_profile(alpha, &z.beta, n, p)?
    };
    let first = profile[0].clone();
    if profile.iter().any(|v| *v != first) {
        return Err(Error::Unsupported(format!(
            "v_{p}(z − α) differs across conjugates; use the level sum"
        )));
    }
    Ok(Some(first))
}

/// λ_{α,v}(z) = log⁺|z|_v + log⁺|α|_v − log|z − α|_v.
///
/// Exact at finite places when v_p(z − α) is shared by all conjugates of z;
/// a float with error below 2^-(precision−16) at ∞.
pub fn lambda_local(alpha: &GaussRat, z: &RadicalPoint, v: &Place, precision: usize) -> Result<LocalHeightValue> {
    let base = &log_plus_root(&z.beta, z.n, v) + &log_plus_alpha(alpha, v)?;
    match v {
        Place::Infinity => {
            let l = ln_dist_inf(alpha, z, precision)?.ok_or_else(pole)?;
            let wp = precision + 16;
            let total = logvalue_ball(&base, wp).sub(&l);
            Ok(LocalHeightValue::approx(v.clone(), total.mid_f64(), precision))
        }
        Place::Finite(p) => {
            let a = alpha.as_rational().expect("checked by log_plus_alpha");
            let e = uniform_distance_valuation(a, z, p)?.ok_or_else(pole)?;
            let t = LogValue::log_of(p.value()).scale(&e);
            Ok(LocalHeightValue::exact(v.clone(), &base + &t))
        }
    }
}

fn pole() -> Error {
    Error::Pole("z = α".into())
}

/// Σ_j λ_{α,v}(z_j) over all n roots of x^n = β, exactly:
/// log⁺|β|_v + n·log⁺|α|_v − log|α^n − β|_v.
pub fn lambda_level_sum(alpha: &GaussRat, beta: &Rational, n: u64, v: &Place) -> Result<LocalHeightValue> {
    let lp = &log_plus_abs(beta, v) + &log_plus_alpha(alpha, v)?.scale(&Rational::from_integer(n.into()));
    let diff = alpha.pow(n).sub_rational(beta);
    if diff.is_zero() {
        return Err(Error::Pole(format!("α is a root of x^{n} = {beta}")));
    }
    let l = match v {
        Place::Infinity => diff.log_abs()?,
        Place::Finite(_) => log_abs(&diff.re, v)?,
    };
    Ok(LocalHeightValue::exact(v.clone(), &lp - &l))
}

fn check_tau_open(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Input(format!("τ = {tau} must lie in (0, 1)")));
    }
    Ok(())
}

/// λ_{τ,v}(z) = log⁺|z|_v + log⁺|α|_v − log max(τ, |z − α|_v).
pub fn lambda_truncated(
    alpha: &GaussRat,
    z: &RadicalPoint,
    v: &Place,
    tau: f64,
    precision: usize,
) -> Result<LocalHeightValue> {
    check_tau_open(tau)?;
    let base = &log_plus_root(&z.beta, z.n, v) + &log_plus_alpha(alpha, v)?;
    let ln_tau = tau.ln();
    match v {
        Place::Infinity => {
            let wp = precision + 16;
            let b = logvalue_ball(&base, wp);
            let value = match ln_dist_inf(alpha, z, precision)? {
                Some(l) if l.mid_f64() >= ln_tau => b.sub(&l).mid_f64(),
                _ => b.mid_f64() - ln_tau,
            };
            Ok(LocalHeightValue::approx(v.clone(), value, precision.min(52)))
        }
        Place::Finite(p) => {
            let a = alpha.as_rational().expect("checked by log_plus_alpha");
            match uniform_distance_valuation(a, z, p)? {
                Some(e) if -rational::rat_to_f64(&e) * p.value().to_f64().unwrap().ln() >= ln_tau => {
                    let t = LogValue::log_of(p.value()).scale(&e);
                    Ok(LocalHeightValue::exact(v.clone(), &base + &t))
                }
                _ => Ok(LocalHeightValue::approx(v.clone(), base.to_f64() - ln_tau, 52)),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivation {
    /// ∫ log|z − α| dm_{S¹} = log⁺|α|.
    Jensen,
    /// Evaluation at the Gauss point, where |z − α| = max(1, |α|).
    GaussPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumIntegral {
    pub value: LocalHeightValue,
    pub derivation: Derivation,
}

/// ∫ λ_{α,v} dμ_v for the equilibrium measure of z^d: zero at every place.
pub fn equilibrium_integral(alpha: &GaussRat, v: &Place) -> Result<EquilibriumIntegral> {
    log_plus_alpha(alpha, v)?;
    let derivation = if v.is_archimedean() { Derivation::Jensen } else { Derivation::GaussPoint };
    Ok(EquilibriumIntegral { value: LocalHeightValue::exact(v.clone(), LogValue::zero()), derivation })
}

/// Midpoint rule for ∫ λ_{α,∞} dm_{S¹} with `points` nodes.
pub fn jensen_quadrature(alpha: &GaussRat, points: usize) -> f64 {
    let (ar, ai) = alpha.to_f64();
    let lp = alpha.log_plus_abs().to_f64();
    let h = 2.0 * PI / points as f64;
    let s = par_sum(points, |k| {
        let t = (k as f64 + 0.5) * h;
        let (dr, di) = (t.cos() - ar, t.sin() - ai);
        lp - 0.5 * (dr * dr + di * di).ln()
    });
    s / points as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationConstants {
    pub lipschitz: f64,
    pub dirichlet: f64,
}

/// Lipschitz constant and Dirichlet energy attached to λ_{τ,v}:
/// (1 + 1/τ, −4π log τ) at ∞ and (1, −log τ) at finite places.
pub fn truncation_constants(tau: f64, v: &Place) -> Result<TruncationConstants> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Input(format!("τ = {tau} must lie in (0, 1]")));
    }
    Ok(match v {
        Place::Infinity => TruncationConstants { lipschitz: 1.0 + 1.0 / tau, dirichlet: -4.0 * PI * tau.ln() },
        Place::Finite(_) => TruncationConstants { lipschitz: 1.0, dirichlet: -tau.ln() },
    })
}

/// ∫ |∇λ_{τ,∞}|² dA over P¹(C), by a polar midpoint grid on the charts
/// |z| ≤ 1 and |w| < 1 (w = 1/z), each with `grid` × `grid` nodes.
pub fn dirichlet_quadrature(alpha: &GaussRat, tau: f64, grid: usize) -> Result<f64> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Input(format!("τ = {tau} must lie in (0, 1]")));
    }
    if grid < 256 {
        return Err(Error::Input(format!("grid {grid} below 256")));
    }
    let (ar, ai) = alpha.to_f64();
    let amod = (ar * ar + ai * ai).sqrt();
    if (amod - 1.0).abs() <= tau / 2.0 {
        return Err(Error::Precondition(format!(
            "|α| = {amod} lies within τ/2 of the unit circle"
        )));
    }
    let tau2 = tau * tau;
    let a2 = amod * amod;
    let g = grid as f64;
    let cell = (1.0 / g) * (2.0 * PI / g);
    // Rows of the two charts are interleaved: index r < grid is the z chart.
    let s = par_sum(2 * grid, |row| {
        let chart = row / grid;
        let r = ((row % grid) as f64 + 0.5) / g;
        let terms: Vec<f64> = (0..grid)
            .map(|j| {
                let t = (j as f64 + 0.5) * 2.0 * PI / g;
                let (x, y) = (r * t.cos(), r * t.sin());
                let e = if chart == 0 {
                    let d2 = (x - ar).powi(2) + (y - ai).powi(2);
                    if d2 > tau2 {
                        1.0 / d2
                    } else {
                        0.0
                    }
                } else {
                    // 1 − α·w and |z − α| = |1 − αw| / |w|.
                    let (ur, ui) = (1.0 - (ar * x - ai * y), -(ar * y + ai * x));
                    let u2 = ur * ur + ui * ui;
                    if u2 > tau2 * r * r {
                        a2 / u2
                    } else {
                        1.0 / (r * r)
                    }
                };
                e * r
            })
            .collect();
        mp::pairwise_sum(&terms)
    });
    Ok(s * cell)
}

/// Right-hand side Lip/N^{1/κ} + (2h + C₂·log N/√N)^{1/2}·⟨λ_τ, λ_τ⟩^{1/2}.
pub fn frl_discrepancy_bound(n: u64, h: f64, tau: f64, c2: f64, v: &Place, kappa: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Input("orbit size must be at least 2".into()));
    }
    if !(kappa > 0.0) {
        return Err(Error::Input("κ must be positive".into()));
    }
    let k = truncation_constants(tau, v)?;
    let nf = n as f64;
    let inner = 2.0 * h + c2 * nf.ln() / nf.sqrt();
    Ok(k.lipschitz / nf.powf(1.0 / kappa) + inner.max(0.0).sqrt() * k.dirichlet.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn g(x: Rational) -> GaussRat {
        GaussRat::real(x)
    }

    #[test]
    fn chordal_examples() {
        let inf = Place::Infinity;
        let p3 = Place::finite(3).unwrap();
        assert_eq!(chordal_distance(&ProjPoint::affine(rat(3, 2)), &ProjPoint::infinity(), &p3).unwrap(), int(1));
        let x = ProjPoint::affine(int(5));
        assert_eq!(chordal_distance(&x, &x, &inf).unwrap(), int(0));
        assert_eq!(
            chordal_distance(&ProjPoint::affine(int(3)), &ProjPoint::affine(int(0)), &p3).unwrap(),
            rat(1, 3)
        );
        assert!(chordal_distance(&ProjPoint::new(int(0), int(0)), &x, &inf).is_err());
    }

    #[test]
    fn lambda_examples() {
        let inf = Place::Infinity;
        let one = RadicalPoint::new(int(1), 1, 0).unwrap();
        let v = lambda_local(&g(int(2)), &one, &inf, 128).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-15);
        let p7 = Place::finite(7).unwrap();
        let r = RadicalPoint::new(int(2), 2, 0).unwrap();
        assert!(lambda_local(&g(int(1)), &r, &p7, 128).unwrap().exact.unwrap().is_zero());
        let z = RadicalPoint::new(int(2), 4, 1).unwrap();
        let v = lambda_local(&g(int(2)), &z, &inf, 128).unwrap();
        let want = 0.25 * 2f64.ln() + 2f64.ln() - 0.5 * (2f64.sqrt() + 4.0).ln();
        assert!((v.value - want).abs() < 1e-14, "{}", v.value);
        assert!((v.value - 0.0219202).abs() < 1e-7);
        let two = RadicalPoint::new(int(4), 2, 0).unwrap();
        assert!(matches!(lambda_local(&g(int(2)), &two, &inf, 128), Err(Error::Pole(_))));
        assert!(matches!(lambda_local(&g(int(2)), &two, &Place::finite(3).unwrap(), 128), Err(Error::Pole(_))));
        let minus = RadicalPoint::new(int(4), 2, 1).unwrap();
        let v = lambda_local(&g(int(2)), &minus, &Place::finite(2).unwrap(), 128).unwrap();
        // z − α = −4, v_2 = 2.
        assert_eq!(v.exact.unwrap(), LogValue::log_of_u64(2).scale(&int(2)));
    }

    #[test]
    fn level_sum_matches_roots() {
        let p7 = Place::finite(7).unwrap();
        let s = lambda_level_sum(&g(int(3)), &int(2), 2, &p7).unwrap();
        assert_eq!(s.exact.unwrap(), LogValue::log_of_u64(7));
        let s = lambda_level_sum(&g(int(2)), &int(2), 4, &Place::Infinity).unwrap();
        let direct: f64 = (0..4)
            .map(|j| lambda_local(&g(int(2)), &RadicalPoint::new(int(2), 4, j).unwrap(), &Place::Infinity, 128).unwrap().value)
            .sum();
        assert!((s.value - direct).abs() < 1e-14);
    }

    #[test]
    fn truncated_examples() {
        let inf = Place::Infinity;
        let one = RadicalPoint::new(int(1), 1, 0).unwrap();
        let v = lambda_truncated(&g(int(2)), &one, &inf, 0.5, 128).unwrap();
        assert!((v.value - 2f64.ln()).abs() < 1e-15);
        let two = RadicalPoint::new(int(4), 2, 0).unwrap();
        let v = lambda_truncated(&g(int(2)), &two, &inf, 0.5, 128).unwrap();
        assert!((v.value - (2.0 * 2f64.ln() - 0.5f64.ln())).abs() < 1e-15);
        assert!(lambda_truncated(&g(int(2)), &one, &inf, 1.0, 128).is_err());
    }

    #[test]
    fn equilibrium_and_jensen() {
        for a in [int(2), int(5), int(0)] {
            let e = equilibrium_integral(&g(a), &Place::Infinity).unwrap();
            assert_eq!(e.value.value, 0.0);
        }
        let e = equilibrium_integral(&g(int(5)), &Place::finite(3).unwrap()).unwrap();
        assert_eq!(e.derivation, Derivation::GaussPoint);
        assert!(jensen_quadrature(&g(int(2)), 1 << 16).abs() < 1e-12);
        assert!(jensen_quadrature(&g(rat(1, 2)), 1 << 16).abs() < 1e-12);
    }

    #[test]
    fn constants_examples() {
        let c = truncation_constants(0.1, &Place::Infinity).unwrap();
        assert!((c.lipschitz - 11.0).abs() < 1e-12);
        assert!((c.dirichlet - 28.935138).abs() < 1e-5);
        let c = truncation_constants(0.5, &Place::finite(5).unwrap()).unwrap();
        assert_eq!(c.lipschitz, 1.0);
        assert!((c.dirichlet - 2f64.ln()).abs() < 1e-15);
        let c = truncation_constants(1.0, &Place::Infinity).unwrap();
        assert_eq!((c.lipschitz, c.dirichlet), (2.0, 0.0));
        let b = frl_discrepancy_bound(256, 0.0, 0.1, 1.0, &Place::Infinity, 1.0).unwrap();
        let want = 11.0 / 256.0 + (256f64.ln() / 16.0).sqrt() * (4.0 * PI * 10f64.ln()).sqrt();
        assert!((b - want).abs() < 1e-12);
    }

    #[test]
    fn dirichlet_energy_of_log_distance() {
        // For α = 0 the only gradient is that of −log|z| on τ < |z| < 1,
        // whose energy is 2π·log(1/τ).
        let e = dirichlet_quadrature(&g(int(0)), 0.5, 512).unwrap();
        assert!((e - 2.0 * PI * 2f64.ln()).abs() < 1e-2 * e, "{e}");
        assert!(dirichlet_quadrature(&g(int(1)), 0.5, 512).is_err());
    }
}
