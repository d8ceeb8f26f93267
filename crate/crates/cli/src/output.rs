//! Rendering of command results as tables, CSV and JSON.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use orbit_integra::arith::{fmt_rational, Rational};
use orbit_integra::{Error, Result};
use serde_json::Value;

use crate::Common;

pub struct Emitter {
    sink: Box<dyn Write>,
}

fn io_err(e: io::Error) -> Error {
    Error::Input(format!("write failed: {e}"))
}

impl Emitter {
    pub fn new(c: &Common) -> Result<Self> {
        let sink: Box<dyn Write> = match &c.output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| Error::Input(format!("cannot create '{}': {e}", path.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Emitter { sink })
    }

    pub fn line(&mut self, s: &str) -> Result<()> {
        writeln!(self.sink, "{s}").map_err(io_err)
    }

    pub fn json(&mut self, v: &Value) -> Result<()> {
        let text = serde_json::to_string_pretty(v).map_err(|e| Error::Input(e.to_string()))?;
        self.line(&text)
    }

    pub fn csv<I>(&mut self, header: &[&str], rows: I) -> Result<()>
    where
        I: Iterator<Item = Vec<String>>,
    {
        let mut w = csv::Writer::from_writer(&mut self.sink);
        let csv_err = |e: csv::Error| Error::Input(format!("csv: {e}"));
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(&r).map_err(csv_err)?;
        }
        w.flush().map_err(io_err)
    }

    pub fn table(&mut self, t: &Table) -> Result<()> {
        let text = t.render();
        write!(self.sink, "{text}").map_err(io_err)
    }

    pub fn finish(mut self) -> Result<()> {
        self.sink.flush().map_err(io_err)
    }
}

/// Plain left-aligned text table.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, r: Vec<String>) {
        self.rows.push(r);
    }

    fn render(&self) -> String {
        let cols = self.header.len();
        let mut w = vec![0usize; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate().take(cols) {
                w[i] = w[i].max(c.chars().count());
            }
        }
        let fmt_row = |r: &[String]| {
            let cells: Vec<String> = (0..cols)
                .map(|i| {
                    let c = r.get(i).map(String::as_str).unwrap_or("");
                    format!("{c}{}", " ".repeat(w[i] - c.chars().count()))
                })
                .collect();
            cells.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = fmt_row(&self.header);
        out += &(w.iter().map(|&k| "-".repeat(k)).collect::<Vec<_>>().join("  ") + "\n");
        for r in &self.rows {
            out += &fmt_row(r);
        }
        out
    }
}

/// Fixed-width rendering so output is byte-stable.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x:.10}")
    } else {
        format!("{x:.10e}")
    }
}

pub fn finite(x: f64) -> Value {
    if x.is_finite() { Value::from(x) } else { Value::Null }
}

/// `[0, 1, 2, ..., 63]` style summary of an index list.
pub fn abbreviate(ix: &[u64]) -> String {
    if ix.len() <= 8 {
        return format!("{ix:?}");
    }
    let head: Vec<String> = ix[..3].iter().map(u64::to_string).collect();
    format!("[{}, ..., {}] ({} roots)", head.join(", "), ix[ix.len() - 1], ix.len())
}

/// Run-length form of a descending profile: value and multiplicity.
pub fn runs(profile: &[Rational]) -> Vec<(Rational, usize)> {
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for v in profile {
        match out.last_mut() {
            Some((w, k)) if w == v => *k += 1,
            _ => out.push((v.clone(), 1)),
        }
    }
    out
}

pub fn compress(profile: &[Rational]) -> Value {
    Value::Array(
        runs(profile)
            .into_iter()
            .map(|(v, k)| serde_json::json!({"valuation": fmt_rational(&v), "count": k}))
            .collect(),
    )
}

/// `3/2 x1; 1/4 x7`
pub fn profile_cell(profile: &[Rational]) -> String {
    runs(profile).into_iter().map(|(v, k)| format!("{v} x{k}")).collect::<Vec<_>>().join("; ")
}
