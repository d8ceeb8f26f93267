//! Backward-orbit points of z ↦ z^d: the solutions of x^n = β.

use astro_float::BigFloat;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{self, Rational};
use crate::arith::{weil_height, LogValue, Prime};
use crate::error::{Error, Result};
use crate::mp::{self, Ball, CBall};

/// Largest level size accepted by [`preimages`].
pub const MAX_LEVEL: u64 = 1 << 20;

/// The root |β|^{1/n} · e^{2πi(j + θ)/n}, θ = 1/2 for β < 0 and 0 otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RadicalPoint {
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub n: u64,
    pub j: u64,
}

impl RadicalPoint {
    pub fn new(beta: Rational, n: u64, j: u64) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::Domain("radical points of 0".into()));
        }
        if n == 0 || j >= n {
            return Err(Error::Input(format!("index {j} out of range for n = {n}")));
        }
        Ok(RadicalPoint { beta, n, j })
    }

    /// Phase as an integer over 2n: the point is |β|^{1/n} · e^{2πi·phase/(2n)}.
    pub fn phase2(&self) -> u64 {
        2 * self.j + u64::from(self.beta.is_negative())
    }

    pub fn embed(&self, precision: usize) -> CBall {
        embed(self, precision)
    }
}

/// The n = d^m roots of x^n = β in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLevel {
    #[serde(with = "rational::serde_str")]
    pub beta: Rational,
    pub d: u64,
    pub depth: u32,
    pub n: u64,
}

impl OrbitLevel {
    pub fn point(&self, j: u64) -> RadicalPoint {
        RadicalPoint { beta: self.beta.clone(), n: self.n, j }
    }

    pub fn points(&self) -> impl Iterator<Item = RadicalPoint> + '_ {
        (0..self.n).map(|j| self.point(j))
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Embeds every point; parallel over indices, returned in index order.
    pub fn embed_all(&self, precision: usize) -> Vec<CBall> {
        let base = RootBase::new(&self.beta, self.n, precision);
        (0..self.n)
            .into_par_iter()
            .map(|j| base.root(2 * j + u64::from(self.beta.is_negative())))
            .collect()
    }
}

/// n = d^m, or a resource error past [`MAX_LEVEL`].
pub fn level_size(d: u64, m: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::Input(format!("degree d = {d} must be at least 2")));
    }
    match d.checked_pow(m) {
        Some(n) if n <= MAX_LEVEL => Ok(n),
        _ => Err(Error::Resource(format!("level size {d}^{m} exceeds 2^20"))),
    }
}

pub fn preimages(beta: &Rational, d: u64, m: u32) -> Result<OrbitLevel> {
    if beta.is_zero() {
        return Err(Error::Domain("backward orbit of 0".into()));
    }
    let n = level_size(d, m)?;
    Ok(OrbitLevel { beta: beta.clone(), d, depth: m, n })
}

/// Shared magnitude for all roots of one level.
struct RootBase {
    r: BigFloat,
    /// Per-component error bound for any root of the level.
    rad: BigFloat,
    /// Error bound of the magnitude alone (zero when it is exact).
    r_rad: BigFloat,
    n: u64,
    wp: usize,
    prec: usize,
}

impl RootBase {
    fn new(beta: &Rational, n: u64, prec: usize) -> RootBase {
        let wp = prec + 32;
        let mut cc = mp::consts();
        let abs = beta.abs();
        let (r, lnb) = if n == 1 || abs.is_one() {
            (mp::from_rat(&abs, wp), 0.0)
        } else {
            let l = mp::from_uint(abs.numer().magnitude(), wp)
                .ln(wp, mp::RM, &mut cc)
                .sub(&mp::from_uint(abs.denom().magnitude(), wp).ln(wp, mp::RM, &mut cc), wp, mp::RM);
            let lf = mp::to_f64(&l).abs();
            let e = l.div(&BigFloat::from_u64(n, 64), wp, mp::RM).exp(wp, mp::RM, &mut cc);
            (e, lf)
        };
        // ln, exp, π and sin/cos each contribute a few ulps at wp bits; the
        // slack of 2^10 absorbs them together with the argument scaling.
        let rf = mp::to_f64(&r).max(1.0);
        let bound = rf * (lnb + 8.0);
        let e = bound.log2().ceil() as i64 + 10 - wp as i64;
        let exact_r =
            abs.is_one() || (n == 1 && abs.denom().is_one() && abs.numer().bits() as usize <= wp);
        let r_rad = if exact_r { mp::zero(64) } else { mp::pow2(e) };
        RootBase { r, rad: mp::pow2(e), r_rad, n, wp, prec }
    }

    /// The root with phase `k/(2n)` of a full turn.
    fn root(&self, k: u64) -> CBall {
        let wp = self.wp;
        let n2 = 2 * self.n;
        let k = k % n2;
        // Quarter turns are exact.
        if (4 * k) % n2 == 0 {
            let q = 4 * k / n2;
            let z = mp::zero(wp);
            let r = self.r.clone();
            let (re, im) = match q {
                0 => (r, z),
                1 => (z, r),
                2 => (r.neg(), z),
                _ => (z, r.neg()),
            };
            let rad = self.r_rad.clone();
            return CBall {
                re: Ball::with_rad(re, rad.clone(), self.prec),
                im: Ball::with_rad(im, rad, self.prec),
            };
        }
        let mut cc = mp::consts();
        let pi = cc.pi(wp, mp::RM);
        let ang = pi
            .mul(&BigFloat::from_u64(2 * k, 64), wp, mp::RM)
            .div(&BigFloat::from_u64(n2, 64), wp, mp::RM);
        let c = ang.cos(wp, mp::RM, &mut cc).mul(&self.r, wp, mp::RM);
        let s = ang.sin(wp, mp::RM, &mut cc).mul(&self.r, wp, mp::RM);
        CBall {
            re: Ball::with_rad(c, self.rad.clone(), self.prec),
            im: Ball::with_rad(s, self.rad.clone(), self.prec),
        }
    }
}

/// Complex ball around the value of `pt` with relative radius below
/// 2^-(precision-8).
pub fn embed(pt: &RadicalPoint, precision: usize) -> CBall {
    let base = RootBase::new(&pt.beta, pt.n, precision.max(64));
    base.root(pt.phase2())
}

/// h(γ) = h(β)/n.
pub fn point_height(pt: &RadicalPoint) -> LogValue {
    weil_height(&pt.beta).scale(&Rational::new(1.into(), pt.n.into()))
}

/// v_p(β)/n, the valuation shared by all n roots above p.
pub fn level_valuation(beta: &Rational, n: u64, p: &Prime) -> Result<Rational> {
    if beta.is_zero() {
        return Err(Error::Domain("valuation of 0 undefined".into()));
    }
    let v = rational::valuation_rat(beta, p.value());
    Ok(Rational::new(v.into(), n.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn f(z: &CBall) -> (f64, f64) {
        z.to_f64()
    }

    #[test]
    fn level_examples() {
        let l = preimages(&int(2), 2, 2).unwrap();
        assert_eq!(l.n, 4);
        let q = 2f64.powf(0.25);
        let want = [(q, 0.0), (0.0, q), (-q, 0.0), (0.0, -q)];
        for (z, w) in l.embed_all(128).iter().zip(want) {
            let (a, b) = f(z);
            assert!((a - w.0).abs() < 1e-15 && (b - w.1).abs() < 1e-15);
        }
        let l = preimages(&int(-2), 2, 1).unwrap();
        let zs = l.embed_all(128);
        let s = 2f64.sqrt();
        assert!((f(&zs[0]).1 - s).abs() < 1e-15 && f(&zs[0]).0.abs() < 1e-30);
        assert!((f(&zs[1]).1 + s).abs() < 1e-15);
        let l = preimages(&int(1), 3, 1).unwrap();
        let zs = l.embed_all(64);
        assert!((f(&zs[1]).0 + 0.5).abs() < 1e-15);
        assert!((f(&zs[1]).1 - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn level_errors() {
        assert!(matches!(preimages(&int(2), 1, 3), Err(Error::Input(_))));
        assert!(matches!(preimages(&int(2), 2, 21), Err(Error::Resource(_))));
        assert!(preimages(&int(2), 2, 20).is_ok());
        assert!(matches!(preimages(&int(0), 2, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn embed_examples() {
        let z = embed(&RadicalPoint::new(int(2), 1, 0).unwrap(), 64);
        assert_eq!(f(&z), (2.0, 0.0));
        assert!(z.re.rad.is_zero());
        let z = embed(&RadicalPoint::new(int(2), 2, 1).unwrap(), 128);
        assert!((f(&z).0 + 2f64.sqrt()).abs() < 1e-15);
        let z = embed(&RadicalPoint::new(int(1), 4, 1).unwrap(), 64);
        assert_eq!(f(&z), (0.0, 1.0));
    }

    #[test]
    fn height_and_valuation_examples() {
        let h = point_height(&RadicalPoint::new(int(2), 8, 3).unwrap());
        assert_eq!(h, LogValue::log_of_u64(2).scale(&rat(1, 8)));
        let h = point_height(&RadicalPoint::new(int(4), 2, 0).unwrap());
        assert_eq!(h, LogValue::log_of_u64(2));
        assert!(point_height(&RadicalPoint::new(int(1), 16, 5).unwrap()).is_zero());
        let p2 = Prime::from_u64(2).unwrap();
        let p3 = Prime::from_u64(3).unwrap();
        assert_eq!(level_valuation(&int(2), 4, &p2).unwrap(), rat(1, 4));
        assert_eq!(level_valuation(&int(2), 4, &p3).unwrap(), rat(0, 1));
        assert_eq!(level_valuation(&rat(4, 9), 2, &p3).unwrap(), rat(-1, 1));
    }

    #[test]
    fn json_form() {
        let p = RadicalPoint::new(rat(-3, 2), 4, 1).unwrap();
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, r#"{"beta":"-3/2","n":4,"j":1}"#);
        assert_eq!(serde_json::from_str::<RadicalPoint>(&j).unwrap(), p);
    }
}
