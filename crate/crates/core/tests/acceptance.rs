//! Acceptance criteria 1–10. Each test prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbit_integra::arith::{
    padic_valuation_u64, product_formula_check, rat, GaussRat, Place, Prime, Rational,
};
use orbit_integra::galois::{capelli_irreducible, factor_binomial, subset_factor_oracle};
use orbit_integra::harness::{
    archimedean_direct_sum, az_identity, clustering_samples, s_integral_census, scaled_discrepancy,
    DiscrepancyBaseline, PlaceKey,
};
use orbit_integra::integrality::SSet;
use orbit_integra::local::{dirichlet_quadrature, jensen_quadrature};
use orbit_integra::padic::{distance_profile, shifted_constant, shifted_polygon};
use orbit_integra::radical::level_size;

mod common;
use common::quadratic_oracle;

fn report(k: u32, pass: bool, elapsed: Duration, limit: Option<Duration>, detail: &str) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = pass && in_time;
    println!(
        "criterion {k}: {} ({:.2}s{}) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.map(|l| format!(" / limit {}s", l.as_secs())).unwrap_or_default()
    );
    ok
}

fn random_rational(rng: &mut ChaCha8Rng, bits: u32) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-(1i64 << bits)..=(1i64 << bits));
        let den: i64 = rng.gen_range(1..=(1i64 << bits));
        if num != 0 {
            return rat(num, den);
        }
    }
}

#[test]
fn criterion_01_product_formula() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for i in 0..10_000 {
        let bits = 4 + (i % 40) as u32;
        let x = random_rational(&mut rng, bits);
        let r = product_formula_check(&x).unwrap();
        if !(r.holds && r.sum.is_zero()) {
            bad += 1;
        }
    }
    let ok = report(1, bad == 0, t.elapsed(), Some(Duration::from_secs(5)), &format!("violations {bad}/10000"));
    assert!(ok);
}

#[test]
fn criterion_02_az_identity_grid() {
    let t = Instant::now();
    let alphas = [rat(2, 1), rat(3, 1), rat(1, 2), rat(-3, 2), rat(5, 3)];
    let betas = [rat(2, 1), rat(3, 2), rat(-5, 1)];
    let mut checked = 0;
    let mut exact_fail = Vec::new();
    let mut worst = 0f64;
    for a in &alphas {
        for b in &betas {
            for d in [2u64, 3] {
                let max_depth = if d == 2 { 10 } else { 6 };
                for m in 1..=max_depth {
                    let n = level_size(d, m).unwrap();
                    let id = az_identity(a, b, n).unwrap();
                    if !id.holds || id.mean != id.target || !id.t_n.is_zero() {
                        exact_fail.push(format!("α={a} β={b} n={n}"));
                    }
                    let arch = id
                        .contributions
                        .iter()
                        .find(|(k, _)| *k == PlaceKey::Place(Place::Infinity))
                        .map(|(_, l)| l.to_f64())
                        .unwrap_or(0.0);
                    let direct = archimedean_direct_sum(&GaussRat::real(a.clone()), b, n, 128).unwrap();
                    worst = worst.max((arch - direct).abs());
                    checked += 1;
                }
            }
        }
    }
    let pass = exact_fail.is_empty() && worst <= 1e-9;
    let ok = report(
        2,
        pass,
        t.elapsed(),
        Some(Duration::from_secs(60)),
        &format!("30 cells, {checked} levels, exact failures {exact_fail:?}, max |exact − direct| {worst:.2e}"),
    );
    assert!(ok);
}

fn beta_corpus() -> Vec<Rational> {
    let ints = [
        2, -2, 3, -3, 4, -4, 5, 6, 7, -8, 8, 9, -9, 12, 16, -16, 25, 27, -27, 32, -32, 36, 49, 64, -64, 81, 100, 125,
        -125, 128, 243, 256, -324, 729, 1024, -1024, 4096, 1, -1, 10,
    ];
    let mut v: Vec<Rational> = ints.iter().map(|&k| rat(k, 1)).collect();
    v.extend([rat(1, 2), rat(-1, 4), rat(4, 9), rat(8, 27), rat(-27, 8), rat(9, 16), rat(3, 5), rat(16, 81), rat(-1, 64), rat(25, 4)]);
    assert_eq!(v.len(), 50);
    v
}

#[test]
fn criterion_03_factorization_oracle() {
    let t = Instant::now();
    let mut mismatch = Vec::new();
    let mut capelli_mismatch = Vec::new();
    for b in beta_corpus() {
        for n in 1..=64u64 {
            let fs = factor_binomial(n, &b).unwrap();
            if n <= 16 {
                let oracle = subset_factor_oracle(n, &b).unwrap();
                if fs != oracle {
                    mismatch.push(format!("β={b} n={n}"));
                }
            }
            if (fs.len() == 1) != capelli_irreducible(n, &b) {
                capelli_mismatch.push(format!("β={b} n={n}"));
            }
        }
    }
    let pass = mismatch.is_empty() && capelli_mismatch.is_empty();
    let ok = report(
        3,
        pass,
        t.elapsed(),
        Some(Duration::from_secs(120)),
        &format!("oracle mismatches {mismatch:?}; Capelli mismatches {capelli_mismatch:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_newton_slope_sum_and_quadratic_oracle() {
    let t = Instant::now();
    let primes = [2u64, 3, 5, 7, 11, 13, 97];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut slope_bad = 0;
    let mut done = 0;
    while done < 1000 {
        let a = random_rational(&mut rng, 8);
        let b = random_rational(&mut rng, 8);
        let n = rng.gen_range(1..=24u64);
        let p = primes[rng.gen_range(0..primes.len())];
        let c = shifted_constant(&a, &b, n);
        if c.is_zero() {
            continue;
        }
        let pr = Prime::from_u64(p).unwrap();
        let poly = shifted_polygon(&a, &b, n, &pr).unwrap();
        let prof = distance_profile(&a, &b, n, &pr).unwrap();
        let v_c = Rational::from_integer(padic_valuation_u64(&c, p).unwrap().into());
        let prof_sum: Rational = prof.iter().cloned().fold(Rational::zero(), |s, x| s + x);
        if poly.slope_sum() != v_c || prof_sum != v_c || prof.len() as u64 != n || poly.degree() != n {
            slope_bad += 1;
        }
        done += 1;
    }
    let mut quad_bad = Vec::new();
    let mut triples = 0;
    let small = [2u64, 3, 5, 7];
    while triples < 200 {
        let p = small[rng.gen_range(0..small.len())];
        let pk = |e: i32| if e >= 0 { rat((p as i64).pow(e as u32), 1) } else { rat(1, (p as i64).pow((-e) as u32)) };
        let a = random_rational(&mut rng, 5) * pk(rng.gen_range(-1..=2));
        // Bias toward β close to a square so the split case occurs.
        let b = if rng.gen_bool(0.5) {
            &a * &a + random_rational(&mut rng, 3) * pk(rng.gen_range(0..=6))
        } else {
            random_rational(&mut rng, 6) * pk(rng.gen_range(-2..=3))
        };
        if b.is_zero() || (&a * &a) == b {
            continue;
        }
        let got = distance_profile(&a, &b, 2, &Prime::from_u64(p).unwrap()).unwrap();
        let want = quadratic_oracle(&a, &b, p);
        if got != want {
            quad_bad.push(format!("α={a} β={b} p={p}: {got:?} vs {want:?}"));
        }
        triples += 1;
    }
    let ok = report(
        4,
        slope_bad == 0 && quad_bad.is_empty(),
        t.elapsed(),
        Some(Duration::from_secs(10)),
        &format!("slope-sum violations {slope_bad}/1000; quadratic mismatches {}/200 {quad_bad:?}", quad_bad.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_05_clustering() {
    let t = Instant::now();
    let eps = 0.5;
    let samples = clustering_samples(1000, 7, 64, 97, eps).unwrap();
    let close_bad = samples.iter().filter(|s| s.close > 1).count();
    let shape_bad = samples
        .iter()
        .filter(|s| {
            let p = s.p as f64;
            s.above_eps as f64 > p * p.ln() / eps + 1.0
        })
        .count();
    let ok = report(
        5,
        samples.len() == 1000 && close_bad == 0 && shape_bad == 0,
        t.elapsed(),
        None,
        &format!("{} samples; two-close violations {close_bad}; shape violations {shape_bad}", samples.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_06_dirichlet_quadrature() {
    let t = Instant::now();
    let alpha = GaussRat::real(rat(2, 1));
    let mut rows = Vec::new();
    let mut pass = true;
    for tau in [0.5f64, 0.1] {
        let e = dirichlet_quadrature(&alpha, tau, 2048).unwrap();
        let target = -4.0 * std::f64::consts::PI * tau.ln();
        let rel = (e - target).abs() / target;
        pass &= rel <= 0.01;
        rows.push(format!("τ={tau}: quadrature {e:.6}, −4π log τ {target:.6}, rel err {rel:.3}"));
    }
    let ok = report(6, pass, t.elapsed(), Some(Duration::from_secs(30)), &rows.join("; "));
    assert!(ok);
}

#[test]
fn criterion_07_jensen() {
    let t = Instant::now();
    let alphas = [
        GaussRat::real(rat(2, 1)),
        GaussRat::real(rat(1, 2)),
        GaussRat::new(rat(3, 5), rat(4, 5)),
    ];
    // The unit-circle α puts a log singularity on the contour; the midpoint
    // error there is O(log N / N), so it needs a much finer grid.
    let grids = [4096usize, 4096, 1 << 24];
    let mut rows = Vec::new();
    let mut pass = true;
    for (a, &g) in alphas.iter().zip(&grids) {
        let q = jensen_quadrature(a, g);
        pass &= q.abs() <= 1e-6;
        rows.push(format!("α={a}: {q:.2e} (N={g})"));
    }
    let ok = report(7, pass, t.elapsed(), None, &rows.join("; "));
    assert!(ok);
}

#[test]
fn criterion_08_discrepancy_decay() {
    let t = Instant::now();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/discrepancy_baseline.json")).unwrap();
    let base: DiscrepancyBaseline = serde_json::from_str(&text).unwrap();
    let want = [GaussRat::real(rat(2, 1)), GaussRat::real(rat(3, 1)), GaussRat::new(rat(3, 5), rat(4, 5))];
    let mut pass = base.cells.len() == 3;
    let mut rows = Vec::new();
    for (cell, a) in base.cells.iter().zip(&want) {
        pass &= cell.alpha == *a && cell.beta == rat(2, 1) && cell.d == 2 && cell.place == Place::Infinity;
        let fresh = scaled_discrepancy(&cell.alpha, &cell.beta, 2, (6, 12), &Place::Infinity).unwrap();
        let s6 = fresh[0].2;
        let peak = fresh.iter().map(|x| x.2).fold(0.0, f64::max);
        let below = fresh.iter().all(|x| x.2 < 4.0 * s6);
        let regress = fresh.iter().zip(&cell.scaled).all(|(x, &b)| (x.2 - b).abs() <= 1e-12 * b.abs().max(1e-300));
        pass &= below && regress;
        rows.push(format!("α={}: depth-6 {s6:.4e}, max {peak:.4e}, baseline match {regress}", cell.alpha));
    }
    let ok = report(8, pass, t.elapsed(), None, &rows.join("; "));
    assert!(ok);
}

#[test]
fn criterion_09_finiteness_census() {
    let t = Instant::now();
    let (a, b) = (rat(3, 1), rat(2, 1));
    let bare = s_integral_census(&a, &b, 2, &SSet::archimedean(), 12).unwrap();
    let seven = s_integral_census(&a, &b, 2, &SSet::from_u64s(&[7]).unwrap(), 12).unwrap();
    let profile = distance_profile(&a, &b, 2, &Prime::from_u64(7).unwrap()).unwrap();
    let d1_bare = &bare.depths[1].classes[0];
    let d1_seven = &seven.depths[1].classes[0];
    let witness_ok = !d1_bare.verdict
        && d1_bare.witnesses.iter().any(|w| w.prime == Prime::from_u64(7).unwrap() && w.valuation == Rational::one())
        && d1_seven.verdict
        && profile == vec![rat(1, 1), rat(0, 1)];
    let stable = bare.stabilization_depth <= 4 && seven.stabilization_depth <= 4;
    let full = bare.depths.len() == 13 && seven.depths.len() == 13;
    let ok = report(
        9,
        witness_ok && stable && full,
        t.elapsed(),
        Some(Duration::from_secs(60)),
        &format!(
            "stabilization S={{∞}}: {}, S={{∞,7}}: {}; depth-1 profile at 7 {:?}",
            bare.stabilization_depth,
            seven.stabilization_depth,
            profile.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_census_grid() {
    let t = Instant::now();
    let alphas = [rat(3, 1), rat(5, 1), rat(3, 2), rat(-2, 1), rat(7, 1)];
    let betas = [rat(2, 1), rat(-3, 1)];
    let sets = [SSet::archimedean(), SSet::from_u64s(&[2, 3, 7]).unwrap()];
    let mut bad = Vec::new();
    let mut configs = 0;
    for a in &alphas {
        for b in &betas {
            for s in &sets {
                configs += 1;
                let r = s_integral_census(a, b, 2, s, 12).unwrap();
                let run = r.running_max();
                let attained_early = r.max_attained_depth.is_none_or(|m| m <= 3);
                let flat = run.iter().skip(4).all(|&x| x == run[3]);
                let above = r.max_integral_size.map_or(0, |m| r.count_above(m));
                let exc_ok = r.exceptional_count <= r.s_fin;
                if !(attained_early && flat && above == 0 && exc_ok) {
                    bad.push(format!(
                        "α={a} β={b} S={s}: max {:?} at {:?}, above {above}, exceptional {}",
                        r.max_integral_size, r.max_attained_depth, r.exceptional_count
                    ));
                }
            }
        }
    }
    let ok = report(
        10,
        configs == 20 && bad.is_empty(),
        t.elapsed(),
        None,
        &format!("{configs} configurations, violations {bad:?}"),
    );
    assert!(ok);
}
