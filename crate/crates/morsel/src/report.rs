//! Deterministic CSV and JSON emission. CSV follows RFC 4180 (CRLF row
//! endings, quote-doubling) with '.' decimals and 17 significant digits;
//! JSON is serialized with sorted object keys and shortest-roundtrip
//! floats. Identical inputs therefore serialize to identical bytes.

use crate::error::Result;
use crate::mesh::ScalarSamples;
use crate::spectral::SweepEntry;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::Path;

/// 17 significant digits: enough to round-trip any f64 exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Table builder with RFC 4180 output.
#[derive(Debug, Clone)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Csv {
            header: header.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: AsRef<str>>(&mut self, cells: &[S]) {
        assert_eq!(
            cells.len(),
            self.header.len(),
            "row width must match the header"
        );
        self.rows
            .push(cells.iter().map(|s| s.as_ref().to_string()).collect());
    }

    pub fn push_floats(&mut self, cells: &[f64]) {
        let strings: Vec<String> = cells.iter().map(|&v| fmt_float(v)).collect();
        self.push(&strings);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let write_row = |cells: &[String], out: &mut String| {
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&quote(cell));
            }
            out.push_str("\r\n");
        };
        write_row(&self.header, &mut out);
        for row in &self.rows {
            write_row(row, &mut out);
        }
        out
    }
}

fn quote(cell: &str) -> String {
    if cell.contains(['"', ',', '\r', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// A sampled field as a grid table: `x,value` on the circle,
/// `x,y,value` on the torus, rows in node order.
pub fn field_csv(s: &ScalarSamples) -> String {
    let grid = s.grid();
    let mut csv = if grid.dim() == 1 {
        Csv::new(&["x", "value"])
    } else {
        Csv::new(&["x", "y", "value"])
    };
    for idx in grid.indices() {
        let p = grid.node(idx);
        if grid.dim() == 1 {
            csv.push_floats(&[p[0], s.get(idx)]);
        } else {
            csv.push_floats(&[p[0], p[1], s.get(idx)]);
        }
    }
    csv.render()
}

/// An ε sweep as `epsilon,lambda,residual,iterations`. Failed entries are
/// skipped by the caller (a sweep that errors is reported as an error).
pub fn sweep_csv(entries: &[SweepEntry]) -> String {
    let mut csv = Csv::new(&["epsilon", "lambda", "residual", "iterations"]);
    for e in entries {
        if let Ok(r) = &e.outcome {
            csv.push(&[
                fmt_float(e.epsilon),
                fmt_float(r.lambda),
                fmt_float(r.residual),
                r.iterations.to_string(),
            ]);
        }
    }
    csv.render()
}

/// Top-level run report: the resolved config echo plus per-operation
/// outputs and boolean verdicts. Serialized with sorted keys.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub subcommand: String,
    pub config_echo: String,
    pub outputs: Map<String, Value>,
    pub verdicts: Map<String, Value>,
}

impl RunReport {
    pub fn new(subcommand: &str, config_echo: &str) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            config_echo: config_echo.to_string(),
            outputs: Map::new(),
            verdicts: Map::new(),
        }
    }

    pub fn output(&mut self, key: &str, value: Value) {
        self.outputs.insert(key.to_string(), value);
    }

    pub fn verdict(&mut self, key: &str, pass: bool) {
        self.verdicts.insert(key.to_string(), Value::Bool(pass));
    }

    pub fn all_verdicts_pass(&self) -> bool {
        self.verdicts.values().all(|v| v == &Value::Bool(true))
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "subcommand": self.subcommand,
            "config": self.config_echo,
            "outputs": Value::Object(self.outputs.clone()),
            "verdicts": Value::Object(self.verdicts.clone()),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Write named files under `dir`, creating it if needed. Returns the
/// paths written, in input order.
pub fn write_outputs(dir: &Path, files: &[(String, String)]) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = dir.join(name);
        std::fs::write(&path, content)?;
        written.push(path);
    }
    Ok(written)
}

/// Human-readable registry listing for fixture discovery.
pub fn fixture_listing(fixtures: &[crate::fixtures::Fixture]) -> String {
    let mut s = String::new();
    for fx in fixtures {
        let _ = writeln!(s, "{}  [{}]", fx.name, fx.tags.join(", "));
        let _ = writeln!(s, "  {}", fx.summary);
        let _ = writeln!(
            s,
            "  dim = {}, n = {}, field = {}, c = {}",
            fx.dim, fx.n, fx.family, fx.c
        );
        if let Some(f) = fx.f {
            let _ = writeln!(s, "  f = {f}");
        }
        if let Some(phi) = fx.phi {
            let _ = writeln!(s, "  phi = {phi}");
        }
        if let Some(l) = fx.lyapunov {
            let _ = writeln!(s, "  lyapunov = {l}");
        }
        if let Some((lo, hi)) = fx.lambda_range {
            let _ = writeln!(s, "  state interval = [{lo}, {hi}]");
        }
        if let Some((lo, hi)) = fx.bracket {
            let _ = writeln!(s, "  root bracket = [{lo}, {hi}]");
        }
        let _ = writeln!(
            s,
            "  epsilons = {}",
            fx.epsilons
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        );
        let _ = writeln!(s);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_grid;
    use std::f64::consts::TAU;

    #[test]
    fn csv_quotes_and_terminates_per_rfc() {
        let mut csv = Csv::new(&["label", "value"]);
        csv.push(&["plain", "1"]);
        csv.push(&["with,comma", "2"]);
        csv.push(&["with\"quote", "3"]);
        let text = csv.render();
        assert_eq!(
            text,
            "label,value\r\nplain,1\r\n\"with,comma\",2\r\n\"with\"\"quote\",3\r\n"
        );
    }

    #[test]
    fn float_format_round_trips_exactly() {
        for &v in &[0.1, 1.0 / 3.0, 6.62607015e-34, -TAU, 0.0, 123456789.123456789] {
            let s = fmt_float(v);
            assert!(s.contains('.') || s.contains('e'), "{s}");
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s} did not round-trip");
        }
    }

    #[test]
    fn field_csv_lists_nodes_in_grid_order() {
        let grid = build_grid(1, 16, TAU).unwrap();
        let s = ScalarSamples::from_fn(grid, |p| p[0]);
        let text = field_csv(&s);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,value");
        let first = lines.next().unwrap();
        let cells: Vec<&str> = first.split(',').collect();
        assert_eq!(cells[0].parse::<f64>().unwrap(), 0.0);
        assert_eq!(text.lines().count(), 17);

        let grid2 = build_grid(2, 16, TAU).unwrap();
        let s2 = ScalarSamples::constant(grid2, 1.0);
        let text2 = field_csv(&s2);
        assert!(text2.starts_with("x,y,value\r\n"));
        assert_eq!(text2.lines().count(), 257);
    }

    #[test]
    fn report_serialization_is_stable() {
        let mut r = RunReport::new("eigen", "[grid]\ndim = 1\n");
        r.output("lambda", json!(2.0));
        r.output("alpha", json!({"z": 1, "a": 2}));
        r.verdict("decreasing", true);
        let a = r.to_json();
        let b = r.to_json();
        assert_eq!(a, b);
        // Keys inside objects come out sorted regardless of insertion order.
        let alpha_pos = a.find("\"alpha\"").unwrap();
        let lambda_pos = a.find("\"lambda\"").unwrap();
        assert!(alpha_pos < lambda_pos);
        assert!(r.all_verdicts_pass());
        r.verdict("bounded", false);
        assert!(!r.all_verdicts_pass());
    }

    #[test]
    fn outputs_land_in_the_requested_directory() {
        let dir = std::env::temp_dir().join(format!("morsel-report-test-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let files = vec![("a.csv".to_string(), "x\r\n1\r\n".to_string())];
        let written = write_outputs(&dir, &files).unwrap();
        assert_eq!(written.len(), 1);
        assert_eq!(std::fs::read_to_string(&written[0]).unwrap(), "x\r\n1\r\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn fixture_listing_covers_every_entry() {
        let all = crate::fixtures::all_fixtures();
        let text = fixture_listing(&all);
        for fx in &all {
            assert!(text.contains(fx.name), "{} missing", fx.name);
        }
    }
}
