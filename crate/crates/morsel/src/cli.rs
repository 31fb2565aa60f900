//! Command-line binding: six experiment subcommands over the library
//! modules plus registry discovery. Every run resolves a config (from a
//! file or a named fixture), executes, and writes deterministic CSV/JSON
//! artifacts into the output directory; wall times go to stderr only so
//! repeated runs produce byte-identical files.

use crate::concentration::{
    concentration_report, simplex_check, weighted_measure, Measure, WeightKind,
};
use crate::config::ExperimentConfig;
use crate::dynsys::{
    detect_recurrent_set, FieldSpec, FixedPoint, PointKind, RecurrentSet, VectorField,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::lyapunov::{psi_field, verify_lyapunov};
use crate::mesh::{interp_cubic, PeriodicGrid, Point, ScalarSamples};
use crate::report::{field_csv, fixture_listing, fmt_float, sweep_csv, write_outputs, Csv, RunReport};
use crate::spectral::{epsilon_sweep, pressure_prediction, EigenResult, Scheme};
use crate::transport::{
    branch_seed, check_conditions, count_branches, hyperbolicity_constants, oscillation_indicator,
    solve_linear, solve_nonlinear, viscous_solve,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(
    name = "morsel",
    about = "Small-diffusion spectra and vanishing-viscosity transport on periodic domains",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Principal-eigenpair sweep over the ε list.
    Eigen(RunArgs),
    /// Weighted-measure decomposition onto the recurrent skeleton.
    Concentrate(RunArgs),
    /// Limit transport solve, viscous comparison, oscillation diagnostic.
    Transport(RunArgs),
    /// State-dependent transport: constants, branch table, Picard solves.
    Nonlinear(RunArgs),
    /// Check a Lyapunov candidate against the detected recurrent set.
    Verify(RunArgs),
    /// Eigenvalue-limit candidates from the recurrent skeleton vs the sweep.
    Pressure(RunArgs),
    /// List the built-in fixture registry.
    ListFixtures {
        /// Keep only fixtures carrying this phenomenon tag.
        #[arg(long)]
        tag: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Path to an INI-style experiment config.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Name of a built-in fixture to run instead of a config file.
    #[arg(long, value_name = "NAME")]
    pub fixture: Option<String>,
    /// Override a config value, e.g. --set grid.n=128 (repeatable).
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    pub set: Vec<String>,
    /// Output directory (overrides [output] dir).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        match (&self.config, &self.fixture) {
            (Some(path), None) => ExperimentConfig::load(path, &self.set),
            (None, Some(name)) => {
                let fx = fixtures::fixture(name)?;
                ExperimentConfig::from_fixture(&fx, &self.set)
            }
            (Some(_), Some(_)) => Err(Error::Precondition(
                "--config and --fixture are mutually exclusive".into(),
            )),
            (None, None) => Err(Error::Precondition(
                "one of --config or --fixture is required".into(),
            )),
        }
    }

    fn out_dir(&self, cfg: &ExperimentConfig) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(&cfg.out_dir))
    }
}

/// Entry point used by the binary. Prints result paths on stdout, wall
/// time on stderr, and maps errors to exit codes at the caller.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eigen(args) => run_timed("eigen", &args, eigen),
        Command::Concentrate(args) => run_timed("concentrate", &args, concentrate),
        Command::Transport(args) => run_timed("transport", &args, transport),
        Command::Nonlinear(args) => run_timed("nonlinear", &args, nonlinear),
        Command::Verify(args) => run_timed("verify", &args, verify),
        Command::Pressure(args) => run_timed("pressure", &args, pressure),
        Command::ListFixtures { tag } => {
            let list = match &tag {
                Some(t) => fixtures::by_tag(t),
                None => fixtures::all_fixtures(),
            };
            if list.is_empty() {
                return Err(Error::Precondition(match tag {
                    Some(t) => format!(
                        "no fixtures carry tag '{t}'; known tags: {}",
                        fixtures::TAGS.join(", ")
                    ),
                    None => "fixture registry is empty".into(),
                }));
            }
            print!("{}", fixture_listing(&list));
            Ok(())
        }
    }
}

fn run_timed(
    name: &str,
    args: &RunArgs,
    handler: fn(&ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)>,
) -> Result<()> {
    let cfg = args.resolve()?;
    let t0 = Instant::now();
    let (report, mut files) = handler(&cfg)?;
    eprintln!("[{name}] wall time: {:.3}s", t0.elapsed().as_secs_f64());
    let dir = args.out_dir(&cfg);
    let want_csv = cfg.formats.iter().any(|f| f == "csv");
    let want_json = cfg.formats.iter().any(|f| f == "json");
    files.retain(|(n, _)| {
        (n.ends_with(".csv") && want_csv) || (n.ends_with(".json") && want_json)
    });
    if want_json {
        files.push(("report.json".to_string(), report.to_json()));
    }
    for path in write_outputs(&dir, &files)? {
        println!("wrote {}", path.display());
    }
    println!(
        "[{name}] verdicts: {}",
        if report.verdicts.is_empty() {
            "none".to_string()
        } else if report.all_verdicts_pass() {
            "all pass".to_string()
        } else {
            let failing: Vec<&str> = report
                .verdicts
                .iter()
                .filter(|(_, v)| *v != &Value::Bool(true))
                .map(|(k, _)| k.as_str())
                .collect();
            format!("FAILING: {}", failing.join(", "))
        }
    );
    Ok(())
}

/// The drift as a trait object, or None for the deliberately drift-free
/// families (so the assembly takes its advection-free path).
fn bound_field(cfg: &ExperimentConfig) -> Result<Option<(FieldSpec, f64)>> {
    if cfg.family == "zero" || cfg.family == "zero_1d" {
        return Ok(None);
    }
    let spec = cfg.field()?;
    if spec.takes_lambda() {
        return Err(Error::Precondition(
            "the drift depends on the state parameter; only the nonlinear \
             subcommand accepts such fields"
                .into(),
        ));
    }
    Ok(Some((spec, 0.0)))
}

fn sweep_results(
    cfg: &ExperimentConfig,
    grid: &PeriodicGrid,
    field: Option<&dyn VectorField>,
) -> Result<(String, Vec<EigenResult>)> {
    let index = cfg.index_expr();
    let c = ScalarSamples::from_fn(*grid, |p| index.eval(p[0], p[1], 0.0));
    let entries = epsilon_sweep(grid, field, &c, Scheme::ExponentialFitted, &cfg.epsilons)?;
    let csv = sweep_csv(&entries);
    let mut results = Vec::with_capacity(entries.len());
    for e in entries {
        results.push(e.outcome?);
    }
    Ok((csv, results))
}

fn eigen(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let spec = bound_field(cfg)?;
    let bound = spec.as_ref().map(|(s, l)| s.at(*l));
    let (csv, results) = sweep_results(cfg, &grid, bound.as_ref().map(|b| b as _))?;

    let mut report = RunReport::new("eigen", &cfg.echo());
    let lambdas: Vec<f64> = results.iter().map(|r| r.lambda).collect();
    report.output("epsilons", json!(cfg.epsilons));
    report.output("lambdas", json!(lambdas));
    report.output(
        "residuals",
        json!(results.iter().map(|r| r.residual).collect::<Vec<_>>()),
    );
    report.output(
        "iterations",
        json!(results.iter().map(|r| r.iterations).collect::<Vec<_>>()),
    );
    report.output(
        "lambda_strictly_decreasing",
        json!(lambdas.windows(2).all(|w| w[1] < w[0])),
    );
    report.verdict(
        "residuals_below_1e_8",
        results.iter().all(|r| r.residual <= 1e-8),
    );

    let last = results.last().expect("non-empty sweep");
    let files = vec![
        ("sweep.csv".to_string(), csv),
        ("eigenfunction.csv".to_string(), field_csv(&last.u)),
    ];
    Ok((report, files))
}

/// Local minima of the index over the grid: the concentration targets for
/// drift-free problems.
fn index_minima(samples: &ScalarSamples) -> Vec<Point> {
    let grid = samples.grid();
    let neighbors: &[(isize, isize)] = if grid.dim() == 1 {
        &[(-1, 0), (1, 0)]
    } else {
        &[(-1, 0), (1, 0), (0, -1), (0, 1)]
    };
    let mut out = Vec::new();
    for idx in grid.indices() {
        let (i, j) = grid.lattice(idx);
        let v = samples.get(idx);
        let strict_min = neighbors.iter().all(|&(di, dj)| {
            samples.get(grid.index(i as isize + di, j as isize + dj)) > v
        });
        if strict_min {
            out.push(grid.node(idx));
        }
    }
    out
}

fn synthetic_recurrent_set(centers: &[Point], dim: usize) -> RecurrentSet {
    RecurrentSet {
        fixed_points: centers
            .iter()
            .map(|&position| FixedPoint {
                position,
                jacobian: [[0.0; 2]; 2],
                eigen_real_parts: vec![0.0; dim],
                kind: PointKind::Sink,
                hyperbolic: false,
            })
            .collect(),
        orbits: Vec::new(),
        morse_smale: false,
    }
}

fn concentrate(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let spec = bound_field(cfg)?;
    let bound = spec.as_ref().map(|(s, l)| s.at(*l));
    let (sweep_text, results) = sweep_results(cfg, &grid, bound.as_ref().map(|b| b as _))?;

    let (kind, weight) = if let Some(phi) = cfg.phi_expr() {
        (WeightKind::GradientWeight, Some(phi))
    } else if let Some(l) = cfg.lyapunov_expr() {
        (WeightKind::LyapunovWeight, Some(l))
    } else {
        (WeightKind::Plain, None)
    };
    let measures: Vec<Measure> = results
        .iter()
        .map(|r| weighted_measure(r, kind, weight.as_ref()))
        .collect::<Result<_>>()?;

    let rec = match &bound {
        Some(b) => detect_recurrent_set(b, &grid),
        None => {
            let index = cfg.index_expr();
            let samples = ScalarSamples::from_fn(grid, |p| index.eval(p[0], p[1], 0.0));
            synthetic_recurrent_set(&index_minima(&samples), grid.dim())
        }
    };
    let conc = concentration_report(
        &rec,
        &measures,
        cfg.delta,
        cfg.n_stations,
        cfg.tube_half_width,
    )?;
    let verdict = simplex_check(&conc);

    let mut header: Vec<String> = vec!["epsilon".into()];
    header.extend((0..conc.centers.len()).map(|i| format!("ball_{i}")));
    header.extend((0..rec.orbits.len()).map(|j| format!("cycle_{j}")));
    header.push("residual".into());
    let mut csv = Csv::new(&header);
    for (k, &eps) in conc.epsilons.iter().enumerate() {
        let mut row = vec![eps];
        row.extend(&conc.ball_masses[k]);
        row.extend(&conc.cycle_integrals[k]);
        row.push(conc.residual_mass[k]);
        csv.push_floats(&row);
    }

    let mut report = RunReport::new("concentrate", &cfg.echo());
    report.output("weight", json!(kind.as_str()));
    report.output(
        "centers",
        json!(conc.centers.iter().map(|p| json!([p[0], p[1]])).collect::<Vec<_>>()),
    );
    report.output("delta", json!(conc.delta));
    report.output("half_width", json!(conc.half_width));
    report.output("epsilons", json!(conc.epsilons));
    report.output("ball_masses", json!(conc.ball_masses));
    report.output("cycle_integrals", json!(conc.cycle_integrals));
    report.output("residual_mass", json!(conc.residual_mass));
    report.output("ball_limits", json!(verdict.ball_limits));
    report.output("cycle_limits", json!(verdict.cycle_limits));
    report.output("simplex_total", json!(verdict.simplex_total));
    report.verdict("mass_bookkeeping", verdict.mass_bookkeeping);
    report.verdict("residual_decreasing", verdict.residual_decreasing);

    let files = vec![
        ("sweep.csv".to_string(), sweep_text),
        ("concentration.csv".to_string(), csv.render()),
    ];
    Ok((report, files))
}

fn transport(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let f_expr = cfg.f_expr().ok_or_else(|| {
        Error::Precondition("transport runs need [coefficients] f".into())
    })?;
    let c_expr = cfg.c_expr();
    let spec = cfg.field()?;
    if spec.takes_lambda() {
        return Err(Error::Precondition(
            "the drift depends on the state parameter; use the nonlinear subcommand".into(),
        ));
    }
    let bound = spec.at(0.0);
    let c_fn = |p: Point| c_expr.eval(p[0], p[1], 0.0);
    let f_fn = |p: Point| f_expr.eval(p[0], p[1], 0.0);

    let sol = solve_linear(&bound, &c_fn, &f_fn, &grid, cfg.dt, cfg.tail_tol)?;
    let off_mask_residual = grid
        .indices()
        .filter(|&i| !sol.mask.is_masked(i))
        .map(|i| sol.residual.get(i))
        .fold(0.0, f64::max);

    // Viscous comparison: sup gap off-mask for each ε in the sweep.
    let c_samples = ScalarSamples::from_fn(grid, &c_fn);
    let f_samples = ScalarSamples::from_fn(grid, &f_fn);
    let mut viscous = Csv::new(&["epsilon", "sup_gap_off_mask"]);
    let mut gaps = Vec::with_capacity(cfg.epsilons.len());
    for &eps in &cfg.epsilons {
        let u_eps = viscous_solve(eps, Some(&bound), &c_samples, &f_samples, &grid)?;
        let gap = grid
            .indices()
            .filter(|&i| !sol.mask.is_masked(i))
            .map(|i| (u_eps.get(i) - sol.u.get(i)).abs())
            .fold(0.0, f64::max);
        viscous.push_floats(&[eps, gap]);
        gaps.push(gap);
    }

    // Oscillation diagnostic at the configured probe point.
    let osc = oscillation_indicator(
        &bound,
        &c_fn,
        &f_fn,
        &grid,
        cfg.point,
        &cfg.truncations,
        cfg.dt,
        cfg.tail_tol,
    )?;

    // Maximum principle against a fine sampling of f/c.
    let (lo, hi) = fine_ratio_bounds(&grid, &f_fn, &c_fn);
    let max_principle = sol.u.min() >= lo - 1e-3 && sol.u.max() <= hi + 1e-3;

    // At every stagnation point of the drift the solution must take the
    // value f(P)/c(P); tabulate both sides for each detected point.
    let mut stagnation = Csv::new(&["x", "y", "u", "f_over_c", "gap"]);
    let mut stagnation_rows = Vec::new();
    let mut stagnation_gap: f64 = 0.0;
    if cfg.family != "zero" && cfg.family != "zero_1d" {
        for fp in detect_recurrent_set(&bound, &grid).fixed_points {
            let p = fp.position;
            let u_p = interp_cubic(&sol.u, p);
            let ratio = f_fn(p) / c_fn(p);
            let gap = (u_p - ratio).abs();
            stagnation_gap = stagnation_gap.max(gap);
            stagnation.push_floats(&[p[0], p[1], u_p, ratio, gap]);
            stagnation_rows.push(json!({
                "point": [p[0], p[1]],
                "u": u_p,
                "f_over_c": ratio,
                "gap": gap,
            }));
        }
    }

    let mut report = RunReport::new("transport", &cfg.echo());
    report.output("grad_max", json!(sol.grad_max));
    report.output("gradient_bound_ok", json!(sol.gradient_bound_ok));
    report.output("mask_fraction", json!(sol.mask.fraction()));
    report.output("off_mask_residual", json!(off_mask_residual));
    report.output("viscous_epsilons", json!(cfg.epsilons));
    report.output("viscous_gaps", json!(gaps));
    report.output("probe_point", json!([cfg.point[0], cfg.point[1]]));
    report.output("truncations", json!(osc.truncations));
    report.output("restarted_values", json!(osc.restarted));
    report.output("oscillation", json!(osc.osc));
    report.output("oscillation_window", json!(osc.window));
    report.output("stagnation_values", Value::Array(stagnation_rows.clone()));
    report.verdict("off_mask_residual_below_1e_3", off_mask_residual <= 1e-3);
    report.verdict("maximum_principle", max_principle);
    report.verdict(
        "viscous_gaps_strictly_decreasing",
        gaps.windows(2).all(|w| w[1] < w[0]),
    );
    if !stagnation_rows.is_empty() {
        report.verdict("stagnation_values_match", stagnation_gap <= 1e-4);
    }

    let mut files = vec![
        ("u.csv".to_string(), field_csv(&sol.u)),
        ("residual.csv".to_string(), field_csv(&sol.residual)),
        ("viscous.csv".to_string(), viscous.render()),
    ];
    if !stagnation_rows.is_empty() {
        files.push(("stagnation.csv".to_string(), stagnation.render()));
    }
    Ok((report, files))
}

fn fine_ratio_bounds(
    grid: &PeriodicGrid,
    f_fn: &dyn Fn(Point) -> f64,
    c_fn: &dyn Fn(Point) -> f64,
) -> (f64, f64) {
    let samples = if grid.dim() == 1 { 4096 } else { 256 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let along = |k: usize, axis: usize| k as f64 * grid.period(axis) / samples as f64;
    if grid.dim() == 1 {
        for k in 0..samples {
            let p = [along(k, 0), 0.0];
            let r = f_fn(p) / c_fn(p);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    } else {
        for k in 0..samples {
            for m in 0..samples {
                let p = [along(k, 0), along(m, 1)];
                let r = f_fn(p) / c_fn(p);
                lo = lo.min(r);
                hi = hi.max(r);
            }
        }
    }
    (lo, hi)
}

fn nonlinear(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let (range, bracket) = match (cfg.lambda_range, cfg.bracket) {
        (Some(r), Some(b)) => (r, b),
        _ => {
            return Err(Error::Precondition(
                "nonlinear runs need [nonlinear] lambda_min/lambda_max and \
                 bracket_min/bracket_max"
                    .into(),
            ))
        }
    };
    let f_expr = cfg.f_expr().ok_or_else(|| {
        Error::Precondition("nonlinear runs need [coefficients] f".into())
    })?;
    let c_expr = cfg.c_expr();
    let spec = cfg.field()?;

    let constants = hyperbolicity_constants(&spec, &c_expr, &f_expr, &grid, range);
    let conditions = check_conditions(&constants);

    // Stagnation points read from the drift frozen at the middle of the
    // state interval (the fixtures' zeros do not move with the state).
    let mid = spec.at(0.5 * (range.0 + range.1));
    let rec = detect_recurrent_set(&mid, &grid);
    let points: Vec<Point> = rec.fixed_points.iter().map(|f| f.position).collect();
    if points.is_empty() {
        return Err(Error::Precondition(
            "the drift has no stagnation points on the grid; branch counting \
             needs at least one"
                .into(),
        ));
    }
    let table = count_branches(&c_expr, &f_expr, &points, bracket)?;
    let max_k = table.counts.iter().copied().max().unwrap_or(0);
    if max_k == 0 {
        return Err(Error::Precondition(format!(
            "no admissible values in the bracket [{}, {}] at any stagnation point",
            bracket.0, bracket.1
        )));
    }

    // Attempt one solve per branch index. A branch that is repelling under
    // successive approximation legitimately fails to converge; it is
    // recorded as unrealized rather than aborting the enumeration. Only
    // when no branch at all converges is the run a solver failure.
    let mut files = Vec::new();
    let mut sol_summaries = Vec::new();
    let mut solutions = Vec::new();
    let mut first_failure: Option<Error> = None;
    for branch in 0..max_k {
        let values: Vec<f64> = table
            .roots
            .iter()
            .map(|r| r[branch.min(r.len() - 1)])
            .collect();
        let seed = branch_seed(&grid, &table.points, &values)?;
        match solve_nonlinear(
            &spec,
            &c_expr,
            &f_expr,
            &grid,
            range,
            &seed,
            cfg.nonlinear_tol,
            cfg.dt,
            cfg.tail_tol,
        ) {
            Ok(sol) => {
                files.push((format!("solution_{branch}.csv"), field_csv(&sol.solution.u)));
                sol_summaries.push(json!({
                    "branch": branch,
                    "seed_values": values,
                    "realized": true,
                    "iterations": sol.iterations,
                    "contraction": sol.contraction,
                    "final_delta": sol.history.last(),
                    "sup_norm": sol.solution.u.sup_norm(),
                }));
                solutions.push(sol);
            }
            Err(e @ Error::NonConvergence { .. }) => {
                sol_summaries.push(json!({
                    "branch": branch,
                    "seed_values": values,
                    "realized": false,
                    "error": e.to_string(),
                }));
                if first_failure.is_none() {
                    first_failure = Some(e);
                }
            }
            Err(other) => return Err(other),
        }
    }
    if solutions.is_empty() {
        return Err(first_failure.expect("max_k > 0 so at least one attempt ran"));
    }
    let mut gaps = Vec::new();
    for i in 0..solutions.len() {
        for j in (i + 1)..solutions.len() {
            let gap = solutions[i]
                .solution
                .u
                .zip_with(&solutions[j].solution.u, |a, b| a - b)
                .sup_norm();
            gaps.push(json!({ "pair": [i, j], "sup_gap": gap }));
        }
    }

    let mut report = RunReport::new("nonlinear", &cfg.echo());
    report.output(
        "constants",
        json!({
            "b0": constants.b0,
            "gamma": constants.gamma,
            "a0": constants.a0,
            "A": constants.big_a,
            "beta": constants.beta,
            "Lambda": constants.big_lambda,
            "sup_grad_f": constants.sup_grad_f,
        }),
    );
    report.output(
        "conditions",
        json!([conditions.0, conditions.1, conditions.2]),
    );
    report.output(
        "conditions_all_hold",
        json!(conditions.0 && conditions.1 && conditions.2),
    );
    report.output(
        "branch_table",
        json!({
            "points": table.points.iter().map(|p| json!([p[0], p[1]])).collect::<Vec<_>>(),
            "roots": table.roots,
            "degenerate": table.degenerate,
            "counts": table.counts,
            "total": table.total,
        }),
    );
    report.output("solutions", Value::Array(sol_summaries));
    report.output("realized_branches", json!(solutions.len()));
    report.output("attempted_branches", json!(max_k));
    report.output("pairwise_gaps", Value::Array(gaps));
    report.verdict(
        "iterations_contracting",
        solutions
            .iter()
            .all(|s| s.contraction.map(|r| r < 1.0).unwrap_or(true)),
    );

    let mut table_csv = Csv::new(&["point_x", "point_y", "count", "roots"]);
    for (p, roots) in table.points.iter().zip(&table.roots) {
        table_csv.push(&[
            fmt_float(p[0]),
            fmt_float(p[1]),
            roots.len().to_string(),
            roots
                .iter()
                .map(|&r| fmt_float(r))
                .collect::<Vec<_>>()
                .join("; "),
        ]);
    }
    files.push(("branches.csv".to_string(), table_csv.render()));
    Ok((report, files))
}

fn verify(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let l = cfg.lyapunov_expr().ok_or_else(|| {
        Error::Precondition("verify runs need [field] lyapunov".into())
    })?;
    let spec = cfg.field()?;
    if spec.takes_lambda() {
        return Err(Error::Precondition(
            "the drift depends on the state parameter; verify needs a fixed field".into(),
        ));
    }
    let bound = spec.at(0.0);
    let rec = detect_recurrent_set(&bound, &grid);
    let lr = verify_lyapunov(&l, &spec, &rec, &grid, 1e-8);

    let mut report = RunReport::new("verify", &cfg.echo());
    report.output("psi_min", json!(lr.psi_min));
    report.output("tube_radius", json!(lr.delta));
    report.output("outside_margin", json!(lr.outside_margin));
    report.output("negative_count", json!(lr.negative_count));
    report.output(
        "fixed_points",
        json!(rec
            .fixed_points
            .iter()
            .map(|f| json!({
                "position": [f.position[0], f.position[1]],
                "kind": f.kind.as_str(),
                "hyperbolic": f.hyperbolic,
            }))
            .collect::<Vec<_>>()),
    );
    report.output(
        "orbits",
        json!(rec
            .orbits
            .iter()
            .map(|o| json!({
                "period": o.period,
                "floquet_log": o.floquet_log,
                "attracting": o.attracting(),
                "hyperbolic": o.hyperbolic,
            }))
            .collect::<Vec<_>>()),
    );
    report.verdict("psi_nonnegative", lr.nonnegative);
    report.verdict("psi_vanishes_on_recurrent_elements", lr.vanishes_on_elements);
    report.verdict("psi_positive_outside_tubes", lr.positive_outside);
    report.verdict("morse_smale", rec.morse_smale);
    report.verdict("pass", lr.pass && rec.morse_smale);

    println!(
        "lyapunov verification {} (psi_min = {:.3e}, {} fixed points, {} orbits)",
        if lr.pass && rec.morse_smale { "PASSED" } else { "FAILED" },
        lr.psi_min,
        rec.fixed_points.len(),
        rec.orbits.len()
    );

    let files = vec![("psi.csv".to_string(), field_csv(&psi_field(&l, &spec, &grid)))];
    Ok((report, files))
}

fn pressure(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<(String, String)>)> {
    let grid = cfg.grid()?;
    let spec = bound_field(cfg)?.ok_or_else(|| {
        Error::Precondition("pressure candidates need a drift field".into())
    })?;
    let bound = spec.0.at(spec.1);
    let rec = detect_recurrent_set(&bound, &grid);
    let (_, results) = sweep_results(cfg, &grid, Some(&bound))?;
    let limit = results.last().map(|r| r.lambda);

    let index = cfg.index_expr();
    let pr = pressure_prediction(&rec, &grid, |p| index.eval(p[0], p[1], 0.0), limit)?;

    let mut csv = Csv::new(&["candidate", "value"]);
    for c in &pr.candidates {
        csv.push(&[c.label.clone(), fmt_float(c.value)]);
    }

    let mut report = RunReport::new("pressure", &cfg.echo());
    report.output(
        "candidates",
        json!(pr
            .candidates
            .iter()
            .map(|c| json!({ "label": c.label, "value": c.value }))
            .collect::<Vec<_>>()),
    );
    report.output("max_value", json!(pr.max_value));
    report.output("min_value", json!(pr.min_value));
    report.output("sweep_limit", json!(limit));
    if let Some((conv, gap)) = &pr.matched {
        report.output("matched_convention", json!(conv.as_str()));
        report.output("matched_gap", json!(gap));
        // The limit should single out one extremum: within a quarter of the
        // candidate spread, or within 5% when the candidates do not separate.
        let tol = (0.25 * (pr.max_value - pr.min_value)).max(0.05 * pr.max_value.abs().max(1.0));
        report.verdict("limit_identifies_convention", *gap <= tol);
    }

    let files = vec![("pressure.csv".to_string(), csv.render())];
    Ok((report, files))
}
