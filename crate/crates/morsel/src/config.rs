//! Keyed-section plain-text run configuration (INI style). A file is
//! parsed into a raw section/key map with line numbers preserved, command
//! line overrides are applied on top, and the result is resolved into a
//! validated [`ExperimentConfig`]. Every diagnostic carries the line it
//! came from (line 0 marks a command-line override).
//!
//! The canonical echo of a resolved config is itself a parseable config
//! that resolves to the same experiment, so any report that embeds the
//! echo is sufficient to reproduce its run.

use crate::error::{Error, Result};
use crate::expr::SmoothExpr;
use crate::fixtures::Fixture;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

/// Sections a config may contain, in canonical order.
const SECTIONS: &[&str] = &[
    "grid",
    "field",
    "coefficients",
    "sweep",
    "analysis",
    "nonlinear",
    "output",
];

const KEYS: &[(&str, &[&str])] = &[
    ("grid", &["dim", "n", "period"]),
    ("field", &["family", "kappa", "bx", "by", "lyapunov"]),
    ("coefficients", &["c", "f", "a", "phi"]),
    ("sweep", &["epsilons"]),
    (
        "analysis",
        &[
            "delta",
            "tube_half_width",
            "n_stations",
            "truncations",
            "point_x",
            "point_y",
            "dt",
            "tail_tol",
        ],
    ),
    (
        "nonlinear",
        &["lambda_min", "lambda_max", "bracket_min", "bracket_max", "tol"],
    ),
    ("output", &["dir", "formats"]),
];

fn known_keys(section: &str) -> Option<&'static [&'static str]> {
    KEYS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k)
}

/// Parsed but unvalidated config: section → key → (line, value).
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, BTreeMap<String, (usize, String)>>,
}

impl RawConfig {
    /// Parse INI-style text: `[section]` headers, `key = value` pairs,
    /// `#`/`;` comments, blank lines. Unknown sections or keys, duplicate
    /// keys, and stray lines are errors carrying their line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RawConfig::default();
        let mut current: Option<String> = None;
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw_line.find(['#', ';']) {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| Error::Config {
                    line: line_no,
                    message: format!("unterminated section header '{raw_line}'"),
                })?;
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return Err(Error::Config {
                        line: line_no,
                        message: format!(
                            "unknown section '{name}'; expected one of {}",
                            SECTIONS.join(", ")
                        ),
                    });
                }
                current = Some(name.to_string());
                cfg.entries.entry(name.to_string()).or_default();
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("expected 'key = value', got '{line}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let Some(section) = current.clone() else {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("key '{key}' appears before any [section] header"),
                });
            };
            cfg.insert(&section, key, value, line_no)?;
        }
        Ok(cfg)
    }

    fn insert(&mut self, section: &str, key: &str, value: &str, line: usize) -> Result<()> {
        let keys = known_keys(section).expect("section validated before insert");
        if !keys.contains(&key) {
            return Err(Error::Config {
                line,
                message: format!(
                    "unknown key '{key}' in [{section}]; expected one of {}",
                    keys.join(", ")
                ),
            });
        }
        let slot = self.entries.entry(section.to_string()).or_default();
        if let Some((prev, _)) = slot.get(key) {
            return Err(Error::Config {
                line,
                message: format!("duplicate key '{key}' (first set on line {prev})"),
            });
        }
        slot.insert(key.to_string(), (line, value.to_string()));
        Ok(())
    }

    /// Apply a `section.key=value` command-line override (line 0). Unlike
    /// file entries, overrides may replace an existing value.
    pub fn apply_override(&mut self, spec: &str) -> Result<()> {
        let err = |message: String| Error::Config { line: 0, message };
        let (path, value) = spec
            .split_once('=')
            .ok_or_else(|| err(format!("override '{spec}' must look like section.key=value")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| err(format!("override '{spec}' must name section.key")))?;
        let (section, key, value) = (section.trim(), key.trim(), value.trim());
        if !SECTIONS.contains(&section) {
            return Err(err(format!(
                "unknown section '{section}' in override; expected one of {}",
                SECTIONS.join(", ")
            )));
        }
        let keys = known_keys(section).expect("checked above");
        if !keys.contains(&key) {
            return Err(err(format!(
                "unknown key '{key}' in [{section}]; expected one of {}",
                keys.join(", ")
            )));
        }
        self.entries
            .entry(section.to_string())
            .or_default()
            .insert(key.to_string(), (0, value.to_string()));
        Ok(())
    }

    fn get(&self, section: &str, key: &str) -> Option<(usize, &str)> {
        self.entries
            .get(section)
            .and_then(|s| s.get(key))
            .map(|(l, v)| (*l, v.as_str()))
    }

    fn required(&self, section: &str, key: &str) -> Result<(usize, &str)> {
        self.get(section, key).ok_or_else(|| Error::Config {
            line: 0,
            message: format!("missing required key '{key}' in [{section}]"),
        })
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config {
        line,
        message: format!("'{key}' must be a number, got '{v}'"),
    })
}

fn parse_expr(line: usize, key: &str, v: &str) -> Result<SmoothExpr> {
    SmoothExpr::parse(v).map_err(|e| Error::Config {
        line,
        message: format!("'{key}' is not a valid expression: {e}"),
    })
}

/// Validated experiment description. String fields keep the original
/// expression text (the canonical echo); parsed forms are built on demand.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub n: usize,
    pub period: f64,
    pub family: String,
    pub kappa: Option<f64>,
    pub bx: Option<String>,
    pub by: Option<String>,
    pub lyapunov: Option<String>,
    pub c: String,
    pub f: Option<String>,
    pub a: Option<String>,
    pub phi: Option<String>,
    pub epsilons: Vec<f64>,
    pub delta: f64,
    pub tube_half_width: f64,
    pub n_stations: usize,
    pub truncations: Vec<f64>,
    pub point: [f64; 2],
    pub dt: Option<f64>,
    pub tail_tol: Option<f64>,
    pub lambda_range: Option<(f64, f64)>,
    pub bracket: Option<(f64, f64)>,
    pub nonlinear_tol: f64,
    pub out_dir: String,
    pub formats: Vec<String>,
}

impl ExperimentConfig {
    /// Resolve and validate a raw config against the field registry.
    pub fn resolve(raw: &RawConfig) -> Result<Self> {
        let (l, v) = raw.required("grid", "dim")?;
        let dim: usize = parse_num(l, "dim", v)?;
        if dim != 1 && dim != 2 {
            return Err(Error::Config {
                line: l,
                message: format!("dim must be 1 or 2, got {dim}"),
            });
        }
        let (l, v) = raw.required("grid", "n")?;
        let n: usize = parse_num(l, "n", v)?;
        let period = match raw.get("grid", "period") {
            Some((l, v)) => {
                let p: f64 = parse_num(l, "period", v)?;
                if !(p > 0.0) {
                    return Err(Error::Config {
                        line: l,
                        message: format!("period must be positive, got {v}"),
                    });
                }
                p
            }
            None => TAU,
        };

        let (fam_line, family) = raw.required("field", "family")?;
        let family = family.to_string();
        let kappa = match raw.get("field", "kappa") {
            Some((l, v)) => Some(parse_num(l, "kappa", v)?),
            None => None,
        };
        let grab_expr = |section: &str, key: &str| -> Result<Option<String>> {
            match raw.get(section, key) {
                Some((l, v)) => {
                    parse_expr(l, key, v)?;
                    Ok(Some(v.to_string()))
                }
                None => Ok(None),
            }
        };
        let bx = grab_expr("field", "bx")?;
        let by = grab_expr("field", "by")?;
        let lyapunov = grab_expr("field", "lyapunov")?;
        if family == "expression" {
            if bx.is_none() {
                return Err(Error::Config {
                    line: fam_line,
                    message: "family 'expression' needs 'bx' (and 'by' in two dimensions)".into(),
                });
            }
        } else {
            crate::dynsys::builtin_field(&family, kappa).map_err(|e| Error::Config {
                line: fam_line,
                message: format!("field family does not resolve: {e}"),
            })?;
        }

        let c = match raw.get("coefficients", "c") {
            Some((l, v)) => {
                parse_expr(l, "c", v)?;
                v.to_string()
            }
            None => "1".to_string(),
        };
        let f = grab_expr("coefficients", "f")?;
        let a = grab_expr("coefficients", "a")?;
        let phi = grab_expr("coefficients", "phi")?;

        let (l, v) = raw.required("sweep", "epsilons")?;
        let epsilons = parse_list(l, "epsilons", v)?;
        if epsilons.is_empty() {
            return Err(Error::Config {
                line: l,
                message: "epsilons must list at least one value".into(),
            });
        }
        if epsilons.iter().any(|&e| e <= 0.0) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config {
                line: l,
                message: format!("epsilons must be positive and strictly decreasing, got '{v}'"),
            });
        }

        let get_f64 = |section: &str, key: &str, default: f64| -> Result<f64> {
            match raw.get(section, key) {
                Some((l, v)) => parse_num(l, key, v),
                None => Ok(default),
            }
        };
        let delta = get_f64("analysis", "delta", 0.4)?;
        let tube_half_width = get_f64("analysis", "tube_half_width", 0.3)?;
        let n_stations = match raw.get("analysis", "n_stations") {
            Some((l, v)) => parse_num(l, "n_stations", v)?,
            None => 16usize,
        };
        for (name, v) in [("delta", delta), ("tube_half_width", tube_half_width)] {
            if !(v > 0.0) {
                return Err(Error::Config {
                    line: 0,
                    message: format!("analysis.{name} must be positive, got {v}"),
                });
            }
        }
        let truncations = match raw.get("analysis", "truncations") {
            Some((l, v)) => {
                let t = parse_list(l, "truncations", v)?;
                if t.is_empty() || t.iter().any(|&x| x <= 0.0) || t.windows(2).any(|w| w[1] <= w[0])
                {
                    return Err(Error::Config {
                        line: l,
                        message: format!(
                            "truncations must be positive and strictly increasing, got '{v}'"
                        ),
                    });
                }
                t
            }
            None => vec![5.0, 10.0, 15.0],
        };
        let point = [
            get_f64("analysis", "point_x", 0.7)?,
            get_f64("analysis", "point_y", 0.0)?,
        ];
        let dt = match raw.get("analysis", "dt") {
            Some((l, v)) => Some(parse_num(l, "dt", v)?),
            None => None,
        };
        let tail_tol = match raw.get("analysis", "tail_tol") {
            Some((l, v)) => Some(parse_num(l, "tail_tol", v)?),
            None => None,
        };

        let pair = |lo_key: &str, hi_key: &str| -> Result<Option<(f64, f64)>> {
            match (raw.get("nonlinear", lo_key), raw.get("nonlinear", hi_key)) {
                (Some((ll, lv)), Some((hl, hv))) => {
                    let lo: f64 = parse_num(ll, lo_key, lv)?;
                    let hi: f64 = parse_num(hl, hi_key, hv)?;
                    if hi <= lo {
                        return Err(Error::Config {
                            line: hl,
                            message: format!("{hi_key} must exceed {lo_key} ({hi} vs {lo})"),
                        });
                    }
                    Ok(Some((lo, hi)))
                }
                (None, None) => Ok(None),
                (Some((l, _)), None) | (None, Some((l, _))) => Err(Error::Config {
                    line: l,
                    message: format!("{lo_key} and {hi_key} must be set together"),
                }),
            }
        };
        let lambda_range = pair("lambda_min", "lambda_max")?;
        let bracket = pair("bracket_min", "bracket_max")?;
        let nonlinear_tol = get_f64("nonlinear", "tol", 1e-6)?;

        let out_dir = match raw.get("output", "dir") {
            Some((_, v)) => v.to_string(),
            None => "out".to_string(),
        };
        let formats = match raw.get("output", "formats") {
            Some((l, v)) => {
                let fs: Vec<String> =
                    v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                for f in &fs {
                    if f != "csv" && f != "json" {
                        return Err(Error::Config {
                            line: l,
                            message: format!("unknown output format '{f}'; expected csv or json"),
                        });
                    }
                }
                fs
            }
            None => vec!["csv".to_string(), "json".to_string()],
        };

        let cfg = ExperimentConfig {
            dim,
            n,
            period,
            family,
            kappa,
            bx,
            by,
            lyapunov,
            c,
            f,
            a,
            phi,
            epsilons,
            delta,
            tube_half_width,
            n_stations,
            truncations,
            point,
            dt,
            tail_tol,
            lambda_range,
            bracket,
            nonlinear_tol,
            out_dir,
            formats,
        };
        // Surface grid construction errors (n too small, bad dim) with the
        // config machinery rather than at first use.
        cfg.grid().map_err(|e| Error::Config {
            line: 0,
            message: format!("grid does not resolve: {e}"),
        })?;
        Ok(cfg)
    }

    /// Load a config file, apply overrides, resolve.
    pub fn load(path: &std::path::Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut raw = RawConfig::parse(&text)?;
        for o in overrides {
            raw.apply_override(o)?;
        }
        Self::resolve(&raw)
    }

    /// Synthesize the config equivalent to a registry fixture.
    pub fn from_fixture(fx: &Fixture, overrides: &[String]) -> Result<Self> {
        let mut raw = RawConfig::parse(&fixture_text(fx))?;
        for o in overrides {
            raw.apply_override(o)?;
        }
        Self::resolve(&raw)
    }

    pub fn grid(&self) -> Result<crate::mesh::PeriodicGrid> {
        crate::mesh::build_grid(self.dim, self.n, self.period)
    }

    pub fn field(&self) -> Result<crate::dynsys::FieldSpec> {
        if self.family == "expression" {
            crate::dynsys::expression_field(
                self.bx.as_deref().expect("validated at resolve"),
                self.by.as_deref(),
            )
        } else {
            crate::dynsys::builtin_field(&self.family, self.kappa)
        }
    }

    pub fn c_expr(&self) -> SmoothExpr {
        SmoothExpr::parse(&self.c).expect("validated at resolve")
    }

    /// Zero-order coefficient for eigenvalue runs: the dedicated index 'a'
    /// when present, otherwise 'c'.
    pub fn index_expr(&self) -> SmoothExpr {
        let text = self.a.as_deref().unwrap_or(&self.c);
        SmoothExpr::parse(text).expect("validated at resolve")
    }

    pub fn f_expr(&self) -> Option<SmoothExpr> {
        self.f
            .as_deref()
            .map(|t| SmoothExpr::parse(t).expect("validated at resolve"))
    }

    pub fn phi_expr(&self) -> Option<SmoothExpr> {
        self.phi
            .as_deref()
            .map(|t| SmoothExpr::parse(t).expect("validated at resolve"))
    }

    pub fn lyapunov_expr(&self) -> Option<SmoothExpr> {
        self.lyapunov
            .as_deref()
            .map(|t| SmoothExpr::parse(t).expect("validated at resolve"))
    }

    /// Canonical text form: a config file that resolves to this exact
    /// experiment. Keys appear in fixed order; floats print shortest-
    /// roundtrip, so the echo is byte-stable.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[grid]");
        let _ = writeln!(s, "dim = {}", self.dim);
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "period = {}", self.period);
        let _ = writeln!(s, "[field]");
        let _ = writeln!(s, "family = {}", self.family);
        if let Some(k) = self.kappa {
            let _ = writeln!(s, "kappa = {k}");
        }
        for (key, val) in [
            ("bx", &self.bx),
            ("by", &self.by),
            ("lyapunov", &self.lyapunov),
        ] {
            if let Some(v) = val {
                let _ = writeln!(s, "{key} = {v}");
            }
        }
        let _ = writeln!(s, "[coefficients]");
        let _ = writeln!(s, "c = {}", self.c);
        for (key, val) in [("f", &self.f), ("a", &self.a), ("phi", &self.phi)] {
            if let Some(v) = val {
                let _ = writeln!(s, "{key} = {v}");
            }
        }
        let _ = writeln!(s, "[sweep]");
        let _ = writeln!(s, "epsilons = {}", join_floats(&self.epsilons));
        let _ = writeln!(s, "[analysis]");
        let _ = writeln!(s, "delta = {}", self.delta);
        let _ = writeln!(s, "tube_half_width = {}", self.tube_half_width);
        let _ = writeln!(s, "n_stations = {}", self.n_stations);
        let _ = writeln!(s, "truncations = {}", join_floats(&self.truncations));
        let _ = writeln!(s, "point_x = {}", self.point[0]);
        let _ = writeln!(s, "point_y = {}", self.point[1]);
        if let Some(dt) = self.dt {
            let _ = writeln!(s, "dt = {dt}");
        }
        if let Some(tt) = self.tail_tol {
            let _ = writeln!(s, "tail_tol = {tt}");
        }
        if self.lambda_range.is_some() || self.bracket.is_some() {
            let _ = writeln!(s, "[nonlinear]");
            if let Some((lo, hi)) = self.lambda_range {
                let _ = writeln!(s, "lambda_min = {lo}");
                let _ = writeln!(s, "lambda_max = {hi}");
            }
            if let Some((lo, hi)) = self.bracket {
                let _ = writeln!(s, "bracket_min = {lo}");
                let _ = writeln!(s, "bracket_max = {hi}");
            }
            let _ = writeln!(s, "tol = {}", self.nonlinear_tol);
        }
        let _ = writeln!(s, "[output]");
        let _ = writeln!(s, "dir = {}", self.out_dir);
        let _ = writeln!(s, "formats = {}", self.formats.join(","));
        s
    }
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(line, key, s))
        .collect()
}

fn join_floats(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn fixture_text(fx: &Fixture) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "[grid]\ndim = {}\nn = {}", fx.dim, fx.n);
    let _ = writeln!(s, "[field]\nfamily = {}", fx.family);
    for (key, val) in [("bx", fx.bx), ("by", fx.by), ("lyapunov", fx.lyapunov)] {
        if let Some(v) = val {
            let _ = writeln!(s, "{key} = {v}");
        }
    }
    let _ = writeln!(s, "[coefficients]\nc = {}", fx.c);
    for (key, val) in [("f", fx.f), ("phi", fx.phi)] {
        if let Some(v) = val {
            let _ = writeln!(s, "{key} = {v}");
        }
    }
    let _ = writeln!(s, "[sweep]\nepsilons = {}", join_floats(fx.epsilons));
    if fx.lambda_range.is_some() || fx.bracket.is_some() {
        let _ = writeln!(s, "[nonlinear]");
        if let Some((lo, hi)) = fx.lambda_range {
            let _ = writeln!(s, "lambda_min = {lo}\nlambda_max = {hi}");
        }
        if let Some((lo, hi)) = fx.bracket {
            let _ = writeln!(s, "bracket_min = {lo}\nbracket_max = {hi}");
        }
    }
    s
}
