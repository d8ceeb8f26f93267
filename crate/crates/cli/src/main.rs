//! `orbit-integra` command-line front end.

mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use orbit_integra::arith::{fmt_rational, parse_rational, GaussRat, Place, Rational};
use orbit_integra::galois::{galois_orbits, level_factors};
use orbit_integra::harness::{
    az_pairing_curve, bound_suite, calibrate_discrepancy, discrepancy, s_integral_census, SuiteConfig,
};
use orbit_integra::integrality::SSet;
use orbit_integra::local::truncation_constants;
use orbit_integra::padic::{cluster_count, distance_profile, min_distance_bound};
use orbit_integra::radical::{level_size, preimages};
use orbit_integra::{Error, Result};

use output::{Emitter, Table};

const DEFAULT_PRECISION: usize = 128;
const PRECISION_ENV: &str = "ORBIT_INTEGRA_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "orbit-integra", version, about = "Backward orbits of z^d over Q: Galois orbits, p-adic distances, S-integrality and height bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Archimedean working precision in bits (default 128, or $ORBIT_INTEGRA_PRECISION).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the points of a level and its Galois classes.
    Orbit {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        depth: u32,
        /// Scatter plot of the level against the unit circle.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Factor x^n − β over Q.
    Factor {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        /// Degree n (or give --d and --depth).
        #[arg(long, conflicts_with_all = ["d", "depth"])]
        n: Option<u64>,
        #[arg(long, requires = "depth")]
        d: Option<u64>,
        #[arg(long, requires = "d")]
        depth: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// p-adic distance profiles v_p(z − α) for depths 0..=depth.
    Newton {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        depth: u32,
        #[arg(long, value_parser = prime_arg)]
        p: Place,
        #[command(flatten)]
        common: Common,
    },
    /// S-integrality census for depths 0..=depth.
    Integral {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        depth: u32,
        /// Finite primes of S, comma separated; ∞ is always included.
        #[arg(long = "S", value_parser = sset_arg, default_value = "")]
        s: SSet,
        #[command(flatten)]
        common: Common,
    },
    /// Discrepancy of the levels against the equilibrium measure.
    Discrepancy {
        #[arg(long, value_parser = gauss_arg, allow_hyphen_values = true)]
        alpha: GaussRat,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: u64,
        /// Last depth.
        #[arg(long)]
        depth: u32,
        /// First depth.
        #[arg(long, default_value_t = 1)]
        from: u32,
        /// Places, comma separated (default inf).
        #[arg(long, value_parser = places_arg, value_delimiter = ',', default_value = "inf")]
        place: Vec<Place>,
        /// Decay chart of D(n)·√(n/log n).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Pairing curve and the exact mean-height identity.
    Pairing {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        beta: Rational,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        depth: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run a bound suite; exits 1 if any cell fails.
    Verify {
        /// Suite configuration (JSON). Defaults to the built-in suite.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the discrepancy calibration baseline to this file.
        #[arg(long)]
        calibrate: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Lipschitz and Dirichlet constants of the truncated local height.
    Constants {
        #[arg(long)]
        tau: f64,
        /// Places, comma separated (default: inf and 2).
        #[arg(long, value_parser = places_arg, value_delimiter = ',', default_value = "inf,2")]
        place: Vec<Place>,
        #[command(flatten)]
        common: Common,
    },
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("'{s}': {e}"))
}

fn gauss_arg(s: &str) -> std::result::Result<GaussRat, String> {
    s.parse::<GaussRat>().map_err(|e| format!("'{s}': {e}"))
}

fn prime_arg(s: &str) -> std::result::Result<Place, String> {
    match s.parse::<Place>() {
        Ok(p @ Place::Finite(_)) => Ok(p),
        Ok(Place::Infinity) => Err(format!("'{s}': a finite prime is required")),
        Err(e) => Err(format!("'{s}': {e}")),
    }
}

fn places_arg(s: &str) -> std::result::Result<Place, String> {
    s.parse::<Place>().map_err(|e| format!("'{s}': {e}"))
}

fn sset_arg(s: &str) -> std::result::Result<SSet, String> {
    s.parse::<SSet>().map_err(|e| format!("'{s}': {e}"))
}

fn precision(c: &Common) -> Result<usize> {
    if let Some(p) = c.precision {
        return check_precision(p);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let p = v
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Input(format!("{PRECISION_ENV}='{v}' is not a bit count")))?;
            check_precision(p)
        }
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn check_precision(p: usize) -> Result<usize> {
    if !(32..=1 << 16).contains(&p) {
        return Err(Error::Input(format!("precision {p} outside 32..=65536")));
    }
    Ok(p)
}

/// Outcome of a command: data emitted, plus whether an assertion failed.
struct Outcome {
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome { failed: false }) => ExitCode::SUCCESS,
        Ok(Outcome { failed: true }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Orbit { beta, d, depth, svg, common } => cmd_orbit(&beta, d, depth, svg, &common),
        Command::Factor { beta, n, d, depth, common } => {
            let n = match (n, d, depth) {
                (Some(n), _, _) => n,
                (None, Some(d), Some(m)) => level_size(d, m)?,
                _ => return Err(Error::Input("give --n or both --d and --depth".into())),
            };
            cmd_factor(&beta, n, &common)
        }
        Command::Newton { alpha, beta, d, depth, p, common } => cmd_newton(&alpha, &beta, d, depth, &p, &common),
        Command::Integral { alpha, beta, d, depth, s, common } => cmd_integral(&alpha, &beta, d, depth, &s, &common),
        Command::Discrepancy { alpha, beta, d, depth, from, place, svg, common } => {
            cmd_discrepancy(&alpha, &beta, d, from, depth, &place, svg, &common)
        }
        Command::Pairing { alpha, beta, d, depth, common } => cmd_pairing(&alpha, &beta, d, depth, &common),
        Command::Verify { config, calibrate, common } => cmd_verify(config, calibrate, &common),
        Command::Constants { tau, place, common } => cmd_constants(tau, &place, &common),
    }
}

fn ok() -> Result<Outcome> {
    Ok(Outcome { failed: false })
}

fn csv_header() -> Vec<&'static str> {
    vec!["depth", "n", "class_index", "class_size", "place", "value"]
}

fn cmd_orbit(beta: &Rational, d: u64, depth: u32, svg: Option<PathBuf>, c: &Common) -> Result<Outcome> {
    let prec = precision(c)?;
    let level = preimages(beta, d, depth)?;
    let part = galois_orbits(&level, prec)?;
    let pts: Vec<(f64, f64)> = level.embed_all(prec).iter().map(|z| z.to_f64()).collect();
    if let Some(path) = svg {
        svg::write(&path, &svg::scatter(&pts, &part))?;
    }
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "level": level,
            "points": pts.iter().enumerate().map(|(j, (x, y))| json!({"j": j, "re": x, "im": y})).collect::<Vec<_>>(),
            "classes": part.classes.iter().enumerate().map(|(i, cl)| json!({
                "index": i,
                "factor": cl.factor.to_string(),
                "size": cl.size(),
                "indices": cl.indices,
            })).collect::<Vec<_>>(),
            "certificate": part.certificate,
        }))?,
        Format::Csv => {
            let rows = part.classes.iter().enumerate().map(|(i, cl)| {
                vec![depth.to_string(), level.n.to_string(), i.to_string(), cl.size().to_string(), "inf".into(), cl.factor.to_string()]
            });
            out.csv(&csv_header(), rows)?
        }
        Format::Table => {
            out.line(&format!(
                "level: x^{} = {}  (d = {d}, depth {depth}): {} points, {} Galois class{}",
                level.n,
                beta,
                level.n,
                part.classes.len(),
                if part.classes.len() == 1 { "" } else { "es" }
            ))?;
            let mut t = Table::new(&["class", "size", "factor", "indices"]);
            for (i, cl) in part.classes.iter().enumerate() {
                t.row(vec![i.to_string(), cl.size().to_string(), cl.factor.to_string(), output::abbreviate(&cl.indices)]);
            }
            out.table(&t)?;
            if level.n <= 64 {
                let mut t = Table::new(&["j", "re", "im"]);
                for (j, (x, y)) in pts.iter().enumerate() {
                    t.row(vec![j.to_string(), format!("{x:.15}"), format!("{y:.15}")]);
                }
                out.table(&t)?;
            }
        }
    }
    out.finish()?;
    ok()
}

fn cmd_factor(beta: &Rational, n: u64, c: &Common) -> Result<Outcome> {
    let fs = level_factors(n, beta)?;
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "n": n,
            "beta": fmt_rational(beta),
            "factors": fs.iter().map(|f| json!({"degree": f.degree(), "coefficients": f, "display": f.to_string()})).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows = fs.iter().enumerate().map(|(i, f)| {
                vec![String::new(), n.to_string(), i.to_string(), f.degree().to_string(), String::new(), f.to_string()]
            });
            out.csv(&csv_header(), rows)?
        }
        Format::Table => {
            out.line(&format!("x^{n} − ({beta}): {} irreducible factor(s)", fs.len()))?;
            let mut t = Table::new(&["#", "degree", "factor"]);
            for (i, f) in fs.iter().enumerate() {
                t.row(vec![i.to_string(), f.degree().to_string(), f.to_string()]);
            }
            out.table(&t)?;
        }
    }
    out.finish()?;
    ok()
}

fn cmd_newton(alpha: &Rational, beta: &Rational, d: u64, depth: u32, p: &Place, c: &Common) -> Result<Outcome> {
    let prime = p.prime().expect("finite prime").clone();
    let pm1 = Rational::from_integer((prime.value() - 1u32).into());
    let mut rows = Vec::new();
    for m in 0..=depth {
        let n = level_size(d, m)?;
        let prof = distance_profile(alpha, beta, n, &prime)?;
        let vb = orbit_integra::arith::padic_valuation(beta, &prime)?;
        let t = Rational::new(vb.into(), n.into()) + Rational::from_integer(1.into()) / &pm1;
        let close = cluster_count(&prof, &t);
        rows.push((m, n, prof, t, close));
    }
    let bound = min_distance_bound(alpha, beta, d, &prime, depth).ok();
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "alpha": fmt_rational(alpha),
            "beta": fmt_rational(beta),
            "p": prime,
            "levels": rows.iter().map(|(m, n, prof, t, close)| json!({
                "depth": m,
                "n": n,
                "profile": output::compress(prof),
                "threshold": fmt_rational(t),
                "cluster_count": close,
            })).collect::<Vec<_>>(),
            "min_distance_bound": bound,
        }))?,
        Format::Csv => {
            let r = rows.iter().map(|(m, n, prof, _, _)| {
                vec![m.to_string(), n.to_string(), String::new(), String::new(), prime.to_string(), output::profile_cell(prof)]
            });
            out.csv(&csv_header(), r)?
        }
        Format::Table => {
            out.line(&format!("v_{prime}(z − α) for α = {alpha}, roots of x^n = {beta}, n = {d}^m"))?;
            let mut t = Table::new(&["depth", "n", "profile", "threshold", "count above"]);
            for (m, n, prof, th, close) in &rows {
                t.row(vec![m.to_string(), n.to_string(), output::profile_cell(prof), th.to_string(), close.to_string()]);
            }
            out.table(&t)?;
            match &bound {
                Some(b) => out.line(&format!("max v_{prime}(z − α) over depths: {} (first at depth {})", b.value, b.attained_depth))?,
                None => out.line(&format!("min_distance_bound: |α|_{prime} ≠ 1, not evaluated"))?,
            }
        }
    }
    out.finish()?;
    ok()
}

fn cmd_integral(alpha: &Rational, beta: &Rational, d: u64, depth: u32, s: &SSet, c: &Common) -> Result<Outcome> {
    let rep = s_integral_census(alpha, beta, d, s, depth)?;
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&serde_json::to_value(&rep).map_err(json_err)?)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for dep in &rep.depths {
                for cl in &dep.classes {
                    let place = cl.witnesses.first().map(|w| w.prime.to_string()).unwrap_or_default();
                    rows.push(vec![
                        dep.depth.to_string(),
                        dep.n.to_string(),
                        cl.index.to_string(),
                        cl.size.to_string(),
                        place,
                        if cl.verdict { "integral".into() } else { "not integral".into() },
                    ]);
                }
            }
            out.csv(&csv_header(), rows.into_iter())?
        }
        Format::Table => {
            out.line(&format!("S-integrality relative to α = {alpha}, β = {beta}, d = {d}, S = {s}"))?;
            let mut t = Table::new(&["depth", "n", "class", "size", "verdict", "witnesses"]);
            for dep in &rep.depths {
                for cl in &dep.classes {
                    let w: Vec<String> = cl.witnesses.iter().map(|w| format!("{} (v = {})", w.prime, w.valuation)).collect();
                    let verdict = match (cl.verdict, cl.exceptional) {
                        (true, true) => "integral*",
                        (true, false) => "integral",
                        _ => "not integral",
                    };
                    let wit = if w.is_empty() && !cl.verdict { "unfactored cofactor".into() } else { w.join(", ") };
                    t.row(vec![dep.depth.to_string(), dep.n.to_string(), cl.index.to_string(), cl.size.to_string(), verdict.into(), wit]);
                }
            }
            out.table(&t)?;
            out.line(&format!(
                "largest S-integral class: {}; no S-integral class from depth {} on; exceptional classes (*): {} (|S_fin| = {})",
                rep.max_integral_size.map(|m| m.to_string()).unwrap_or_else(|| "none".into()),
                rep.stabilization_depth,
                rep.exceptional_count,
                rep.s_fin
            ))?;
        }
    }
    out.finish()?;
    ok()
}

#[allow(clippy::too_many_arguments)]
fn cmd_discrepancy(
    alpha: &GaussRat,
    beta: &Rational,
    d: u64,
    from: u32,
    depth: u32,
    places: &[Place],
    svg: Option<PathBuf>,
    c: &Common,
) -> Result<Outcome> {
    if from > depth {
        return Err(Error::Input(format!("--from {from} exceeds --depth {depth}")));
    }
    let mut rows: Vec<(u32, u64, Place, f64, f64)> = Vec::new();
    for m in from..=depth {
        let n = level_size(d, m)?;
        for v in places {
            let dn = discrepancy(alpha, beta, d, m, v)?;
            let nf = n as f64;
            let scaled = if n > 1 { dn * (nf / nf.ln()).sqrt() } else { f64::NAN };
            rows.push((m, n, v.clone(), dn, scaled));
        }
    }
    if let Some(path) = svg {
        svg::write(&path, &svg::decay(&rows))?;
    }
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "alpha": alpha,
            "beta": fmt_rational(beta),
            "d": d,
            "rows": rows.iter().map(|(m, n, v, dn, s)| json!({
                "depth": m, "n": n, "place": v, "discrepancy": dn, "scaled": output::finite(*s),
            })).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let r = rows.iter().map(|(m, n, v, dn, _)| {
                vec![m.to_string(), n.to_string(), String::new(), String::new(), v.to_string(), output::float(*dn)]
            });
            out.csv(&csv_header(), r)?
        }
        Format::Table => {
            out.line(&format!("D(n) = |mean λ_α,v − ∫λ_α,v dμ_v| for α = {alpha}, β = {beta}, d = {d}"))?;
            let mut t = Table::new(&["depth", "n", "place", "D(n)", "D(n)·√(n/log n)"]);
            for (m, n, v, dn, s) in &rows {
                t.row(vec![m.to_string(), n.to_string(), v.to_string(), output::float(*dn), output::float(*s)]);
            }
            out.table(&t)?;
        }
    }
    out.finish()?;
    ok()
}

fn cmd_pairing(alpha: &Rational, beta: &Rational, d: u64, depth: u32, c: &Common) -> Result<Outcome> {
    let prec = precision(c)?;
    let curve = az_pairing_curve(alpha, beta, d, depth, prec)?;
    let all = curve.iter().all(|r| r.identity_holds);
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "alpha": fmt_rational(alpha),
            "beta": fmt_rational(beta),
            "d": d,
            "identity_holds": all,
            "depths": curve,
        }))?,
        Format::Csv => {
            let r = curve.iter().map(|rec| {
                vec![rec.depth.to_string(), rec.n.to_string(), String::new(), String::new(), "all".into(), output::float(rec.mean_lambda_f64)]
            });
            out.csv(&csv_header(), r)?
        }
        Format::Table => {
            out.line(&format!("mean Σ_v λ_α,v over x^n = {beta}, α = {alpha}, n = {d}^m; target h(α) + h(β)/n"))?;
            let mut t = Table::new(&["depth", "n", "mean (exact)", "mean", "identity", "arch exact", "arch direct"]);
            for r in &curve {
                t.row(vec![
                    r.depth.to_string(),
                    r.n.to_string(),
                    r.mean_lambda.to_string(),
                    output::float(r.mean_lambda_f64),
                    if r.identity_holds { "exact".into() } else { "FAILS".into() },
                    output::float(r.archimedean_exact),
                    output::float(r.archimedean_direct),
                ]);
            }
            out.table(&t)?;
        }
    }
    out.finish()?;
    Ok(Outcome { failed: !all })
}

fn cmd_verify(config: Option<PathBuf>, calibrate: Option<PathBuf>, c: &Common) -> Result<Outcome> {
    let mut cfg = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read '{}': {e}", path.display())))?;
            serde_json::from_str::<SuiteConfig>(&text)
                .map_err(|e| Error::Input(format!("'{}': {e}", path.display())))?
        }
        None => SuiteConfig::default_suite(),
    };
    if let Some(p) = c.precision {
        cfg.precision = check_precision(p)?;
    } else if std::env::var(PRECISION_ENV).is_ok() {
        cfg.precision = precision(c)?;
    }
    if let Some(path) = calibrate {
        let b = calibrate_discrepancy(&cfg)?;
        let text = serde_json::to_string_pretty(&b).map_err(json_err)? + "\n";
        std::fs::write(&path, text).map_err(|e| Error::Input(format!("cannot write '{}': {e}", path.display())))?;
    }
    let rep = bound_suite(&cfg);
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&serde_json::to_value(&rep).map_err(json_err)?)?,
        Format::Csv => {
            let mut rows = Vec::new();
            for cell in &rep.cells {
                for r in &cell.rows {
                    rows.push(vec![
                        cell.index.to_string(),
                        cell.kind.clone(),
                        r.depth.map(|x| x.to_string()).unwrap_or_default(),
                        r.n.map(|x| x.to_string()).unwrap_or_default(),
                        r.place.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                        output::float(r.lhs),
                        output::float(r.rhs),
                        r.pass.to_string(),
                    ]);
                }
            }
            out.csv(&["cell", "kind", "depth", "n", "place", "lhs", "rhs", "pass"], rows.into_iter())?
        }
        Format::Table => {
            let mut t = Table::new(&["cell", "kind", "result", "implied constant", "note"]);
            for cell in &rep.cells {
                t.row(vec![
                    cell.index.to_string(),
                    cell.kind.clone(),
                    if cell.pass { "PASS".into() } else { "FAIL".into() },
                    cell.implied_constant.map(output::float).unwrap_or_default(),
                    cell.error.clone().or_else(|| cell.note.clone()).unwrap_or_default(),
                ]);
            }
            out.table(&t)?;
            out.line(if rep.all_pass { "all cells pass" } else { "some cells FAIL" })?;
        }
    }
    out.finish()?;
    Ok(Outcome { failed: !rep.all_pass })
}

fn cmd_constants(tau: f64, places: &[Place], c: &Common) -> Result<Outcome> {
    let ks = places
        .iter()
        .map(|v| truncation_constants(tau, v).map(|k| (v.clone(), k)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Emitter::new(c)?;
    match c.format {
        Format::Json => out.json(&json!({
            "tau": tau,
            "constants": ks.iter().map(|(v, k)| json!({"place": v, "lipschitz": k.lipschitz, "dirichlet": k.dirichlet})).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows = ks.iter().flat_map(|(v, k)| {
                [
                    vec![String::new(), String::new(), String::new(), String::new(), v.to_string(), output::float(k.lipschitz)],
                    vec![String::new(), String::new(), String::new(), String::new(), v.to_string(), output::float(k.dirichlet)],
                ]
            });
            out.csv(&csv_header(), rows)?
        }
        Format::Table => {
            out.line(&format!("truncation at τ = {tau}"))?;
            let mut t = Table::new(&["place", "Lipschitz", "Dirichlet"]);
            for (v, k) in &ks {
                t.row(vec![v.to_string(), output::float(k.lipschitz), output::float(k.dirichlet)]);
            }
            out.table(&t)?;
        }
    }
    out.finish()?;
    ok()
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Input(format!("serialization failed: {e}"))
}
