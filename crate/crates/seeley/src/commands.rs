use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use seeley_core::coeffs::compute_coefficients;
use seeley_core::geometry::{extend_ball, extend_disk_polar, RadialDomain};
use seeley_core::halfline::extend;
use seeley_core::quadrant::{extend_quadrant, QuadrantConfig};
use seeley_core::source::{AnalyticSource, Domain};
use seeley_core::verify::{run_suite, PropertyReport, SUITES};
use seeley_core::{JetFunction, OperatorConfig, Point, SmoothStep, Tangent};

use crate::args::{
    BallArgs, CoeffsArgs, Command, CutoffArgs, DiskArgs, ExtendArgs, QuadrantArgs, VerifyArgs,
};
use crate::config::{FunctionSpec, Loaded};
use crate::error::{CliError, Result};
use crate::grid::{cartesian, GridSpec};
use crate::output::{coefficient_records, fmt17, Table};

/// What a subcommand produced. Nothing is written until the whole
/// computation has succeeded.
#[derive(Debug)]
pub enum Outcome {
    Table {
        table: Table,
        metadata: serde_json::Value,
        output: Option<PathBuf>,
    },
    Report {
        report: VerifyReport,
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub reports: Vec<PropertyReport>,
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Coeffs(a) => coeffs(a),
        Command::Cutoff(a) => cutoff(a),
        Command::Extend1d(a) => extend1d(a),
        Command::ExtendQuadrant(a) => extend_quadrant_cmd(a),
        Command::ExtendBall(a) => extend_ball_cmd(a),
        Command::ExtendDisk(a) => extend_disk_cmd(a),
        Command::Verify(a) => verify(a),
    }
}

fn coeffs(a: CoeffsArgs) -> Result<Outcome> {
    let c = compute_coefficients(a.k);
    let records = coefficient_records(&c);
    let table = Table {
        header: ["j", "node", "exact", "shadow"].map(String::from).to_vec(),
        rows: records
            .iter()
            .map(|r| vec![r.j.to_string(), r.node.clone(), r.exact.clone(), r.shadow.clone()])
            .collect(),
    };
    let metadata = json!({
        "command": "coeffs",
        "k": a.k,
        "coefficients": records,
        "abs_sum": fmt17(c.decay_sum_f64(0)),
    });
    Ok(Outcome::Table {
        table,
        metadata,
        output: a.output,
    })
}

fn parse_abscissae(at: &str) -> Result<Vec<f64>> {
    if at.contains(':') {
        let g: GridSpec = at.parse().map_err(|e| CliError::Config(format!("--at: {e}")))?;
        return Ok(g.points());
    }
    at.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Config(format!("--at: `{v}` is not a finite number")))
        })
        .collect()
}

fn cutoff(a: CutoffArgs) -> Result<Outcome> {
    let step = SmoothStep::new(a.lo, a.hi).map_err(|e| CliError::Config(format!("--lo/--hi: {e}")))?;
    let xs = parse_abscissae(&a.at)?;
    let mut header = vec!["x".to_string()];
    header.extend((0..=a.order).map(|j| format!("d{j}")));
    let rows = xs
        .iter()
        .map(|&x| {
            let mut row = vec![fmt17(x)];
            row.extend(step.eval_jet(x, a.order).into_iter().map(fmt17));
            row
        })
        .collect();
    let metadata = json!({
        "command": "cutoff",
        "lo": fmt17(a.lo),
        "hi": fmt17(a.hi),
        "order": a.order,
    });
    Ok(Outcome::Table {
        table: Table { header, rows },
        metadata,
        output: a.output,
    })
}

/// Values and the jets of orders `1..=ell` along `direction` on every
/// point, evaluated in parallel and collected in grid order.
fn sample<F: JetFunction + Sync>(
    f: &F,
    coords: &[String],
    points: Vec<Vec<f64>>,
    ell: usize,
    direction: &[f64],
) -> Result<Table> {
    let vd = f.value_dim();
    let mut header: Vec<String> = coords.to_vec();
    for m in 0..=ell {
        let base = if m == 0 { "f".to_string() } else { format!("d{m}") };
        if vd == 1 {
            header.push(base);
        } else {
            header.extend((0..vd).map(|i| format!("{base}_{i}")));
        }
    }
    let w = Tangent(direction.to_vec());
    let rows = points
        .into_par_iter()
        .map(|z| {
            let p = Point(z);
            let mut row: Vec<String> = p.0.iter().map(|v| fmt17(*v)).collect();
            for m in 0..=ell {
                let tuple = vec![w.clone(); m];
                row.extend(f.jet(&p, &tuple)?.into_iter().map(fmt17));
            }
            Ok(row)
        })
        .collect::<std::result::Result<Vec<_>, seeley_core::Error>>()?;
    Ok(Table { header, rows })
}

fn operator_json(c: &OperatorConfig) -> serde_json::Value {
    let num = |v: f64| if v.is_finite() { json!(fmt17(v)) } else { json!(v.to_string()) };
    json!({
        "a": num(c.a),
        "tau": num(c.tau),
        "b": num(c.b),
        "upsilon": num(c.upsilon),
        "kappa": num(c.kappa),
        "kappa_prime": num(c.kappa_prime),
        "k": c.k,
        "vanishing_threshold": num(c.vanishing_threshold()),
        "reproduction_radius": num(c.reproduction_radius()),
    })
}

fn finish(
    command: &str,
    loaded: &Loaded,
    table: Table,
    extra: serde_json::Value,
    k: usize,
    start: Instant,
) -> Outcome {
    let metadata = json!({
        "command": command,
        "config": loaded.config,
        "coefficients": coefficient_records(&compute_coefficients(k)),
        "columns": table.header,
        "rows": table.rows.len(),
        "threads": rayon::current_num_threads(),
        "elapsed_seconds": start.elapsed().as_secs_f64(),
        "operator": extra,
    });
    Outcome::Table {
        output: loaded.config.output.clone(),
        table,
        metadata,
    }
}

fn coord_names(corner: &[&str], space: usize) -> Vec<String> {
    corner
        .iter()
        .map(|s| s.to_string())
        .chain((1..=space).map(|i| format!("x{i}")))
        .collect()
}

fn extend1d(a: ExtendArgs) -> Result<Outcome> {
    let start = Instant::now();
    let mut loaded = Loaded::read(a.common.config.as_deref())?;
    loaded.apply_common(&a.common);
    loaded.apply_operator(&a.operator);
    loaded.apply_x(a.x);
    let config = loaded.operator()?;
    let grid = loaded.grid()?;
    let x = loaded.config.x.clone().unwrap_or_default();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(loaded.invalid("x", "must be finite"));
    }
    let dim = 1 + x.len();
    let ell = loaded.ell(config.k)?;
    let direction = loaded.direction(dim)?;
    let function = loaded.function(FunctionSpec::Exp, dim)?;
    let source = AnalyticSource::new(function, Domain::time_interval(config.a, config.b), config.k);
    let ext = extend(source, config)?;
    let points = grid
        .points()
        .into_iter()
        .map(|t| {
            let mut z = vec![t];
            z.extend(&x);
            z
        })
        .collect();
    let table = sample(&ext, &coord_names(&["t"], x.len()), points, ell, &direction)?;
    Ok(finish("extend1d", &loaded, table, operator_json(&config), config.k, start))
}

/// Axis count and per-axis configs are capped for cost.
pub const QUADRANT_MAX_AXES: usize = 3;
pub const QUADRANT_MAX_K: usize = 4;

fn extend_quadrant_cmd(a: QuadrantArgs) -> Result<Outcome> {
    let start = Instant::now();
    let mut loaded = Loaded::read(a.common.config.as_deref())?;
    loaded.apply_common(&a.common);
    loaded.apply_operator(&a.operator);
    loaded.apply_x(a.x);
    loaded.apply_quadrant_n(a.n);
    let k = loaded.k();
    if k > QUADRANT_MAX_K {
        return Err(loaded.invalid("operator.k", format!("quadrant extensions support k <= {QUADRANT_MAX_K}")));
    }
    let axes = match loaded.config.quadrant.axes.clone() {
        Some(axes) => {
            if let Some(n) = loaded.config.quadrant.n.filter(|n| *n != axes.len()) {
                return Err(loaded.invalid("quadrant.n", format!("{n} axes requested but {} configured", axes.len())));
            }
            axes.iter()
                .enumerate()
                .map(|(i, s)| {
                    loaded.axis_operator(
                        s.a.unwrap_or(f64::NEG_INFINITY),
                        s.tau,
                        s.b,
                        s.upsilon,
                        k,
                        &format!("quadrant.axes[{i}]"),
                    )
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => vec![loaded.operator()?; loaded.config.quadrant.n.unwrap_or(2)],
    };
    let n = axes.len();
    if n == 0 || n > QUADRANT_MAX_AXES {
        return Err(loaded.invalid("quadrant.n", format!("need 1 to {QUADRANT_MAX_AXES} axes, got {n}")));
    }
    let grid = loaded.grid()?;
    let x = loaded.config.x.clone().unwrap_or_default();
    let dim = n + x.len();
    let ell = loaded.ell(k)?;
    let direction = loaded.direction(dim)?;
    let function = loaded.function(FunctionSpec::corner_product(n, dim), dim)?;
    let domain = Domain::Box {
        lo: axes.iter().map(|c| c.a).collect(),
        hi: axes.iter().map(|c| c.b).collect(),
    };
    let config = QuadrantConfig::new(axes.clone()).map_err(|e| loaded.invalid("quadrant", e))?;
    let ext = extend_quadrant(AnalyticSource::new(function, domain, k), config)?;
    let mut per_axis = vec![grid.points(); n];
    per_axis.extend(x.iter().map(|v| vec![*v]));
    let names: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let table = sample(&ext, &coord_names(&names, x.len()), cartesian(&per_axis), ell, &direction)?;
    let extra = json!({ "axes": axes.iter().map(operator_json).collect::<Vec<_>>() });
    Ok(finish("extend-quadrant", &loaded, table, extra, k, start))
}

fn radial_domain(loaded: &Loaded, dim: usize) -> Result<RadialDomain> {
    let b = &loaded.config.ball;
    let tau_hat = b.tau_hat.unwrap_or(-0.4);
    let upsilon_hat = b.upsilon_hat.unwrap_or(tau_hat / 2.0);
    if !(-1.0 < tau_hat && tau_hat < 0.0) {
        return Err(loaded.invalid("ball.tau_hat", format!("need -1 < tau_hat < 0, got {tau_hat}")));
    }
    if !(tau_hat < upsilon_hat && upsilon_hat < 0.0) {
        return Err(loaded.invalid(
            "ball.upsilon_hat",
            format!("need tau_hat < upsilon_hat < 0, got {upsilon_hat}"),
        ));
    }
    RadialDomain::new(dim, tau_hat, upsilon_hat, loaded.k()).map_err(|e| loaded.invalid("ball", e))
}

fn plane_points(grid: &GridSpec, dim: usize) -> Vec<Vec<f64>> {
    let mut axes = vec![grid.points(); dim.min(2)];
    axes.extend((2..dim).map(|_| vec![0.0]));
    cartesian(&axes)
}

fn radial_json(d: &RadialDomain) -> serde_json::Value {
    json!({
        "dim": d.dims,
        "tau_hat": fmt17(d.tau_hat()),
        "upsilon_hat": fmt17(d.upsilon_hat()),
        "k": d.k(),
        "vanishing_radius": fmt17(d.vanishing_radius()),
    })
}

fn extend_ball_cmd(a: BallArgs) -> Result<Outcome> {
    let start = Instant::now();
    let mut loaded = Loaded::read(a.common.config.as_deref())?;
    loaded.apply_common(&a.common);
    loaded.apply_radial(&a.radial);
    loaded.apply_dim(a.dim);
    let dim = loaded.config.ball.dim.unwrap_or(2);
    if dim == 0 {
        return Err(loaded.invalid("ball.dim", "must be at least 1"));
    }
    let domain = radial_domain(&loaded, dim)?;
    let grid = loaded.grid()?;
    let ell = loaded.ell(domain.k())?;
    let direction = loaded.direction(dim)?;
    let default = if dim == 2 {
        FunctionSpec::DiskSample
    } else {
        FunctionSpec::Polynomial {
            terms: (0..dim)
                .map(|i| crate::config::PolyTerm {
                    coef: 1.0,
                    exponents: (0..dim).map(|j| if i == j { 2 } else { 0 }).collect(),
                })
                .collect(),
        }
    };
    let function = loaded.function(default, dim)?;
    let ext = extend_ball(AnalyticSource::new(function, Domain::unit_ball(dim), domain.k()), domain.clone())?;
    let names: Vec<String> = (1..=dim).map(|i| format!("z{i}")).collect();
    let table = sample(&ext, &names, plane_points(&grid, dim), ell, &direction)?;
    Ok(finish("extend-ball", &loaded, table, radial_json(&domain), domain.k(), start))
}

fn extend_disk_cmd(a: DiskArgs) -> Result<Outcome> {
    let start = Instant::now();
    let mut loaded = Loaded::read(a.common.config.as_deref())?;
    loaded.apply_common(&a.common);
    loaded.apply_radial(&a.radial);
    loaded.apply_r0(a.r0);
    if let Some(d) = loaded.config.ball.dim.filter(|d| *d != 2) {
        return Err(loaded.invalid("ball.dim", format!("the polar route is planar, got dim = {d}")));
    }
    let r0 = loaded.config.ball.r0.unwrap_or(0.5);
    let domain = radial_domain(&loaded, 2)?;
    if !(0.0 < r0 && r0 < 1.0 + domain.tau_hat()) {
        return Err(loaded.invalid(
            "ball.r0",
            format!("need 0 < r0 < 1 + tau_hat = {}, got {r0}", 1.0 + domain.tau_hat()),
        ));
    }
    let grid = loaded.grid()?;
    let ell = loaded.ell(domain.k())?;
    let direction = loaded.direction(2)?;
    let function = loaded.function(FunctionSpec::DiskSample, 2)?;
    let ext = extend_disk_polar(AnalyticSource::new(function, Domain::unit_ball(2), domain.k()), &domain, r0)?;
    let names = ["z1".to_string(), "z2".to_string()];
    let table = sample(&ext, &names, plane_points(&grid, 2), ell, &direction)?;
    let mut extra = radial_json(&domain);
    extra["r0"] = json!(fmt17(r0));
    Ok(finish("extend-disk", &loaded, table, extra, domain.k(), start))
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let loaded = Loaded::read(a.config.as_deref())?;
    let seed = a.seed.or(loaded.config.seed).unwrap_or(0);
    let output = a.output.or(loaded.config.output.clone());
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else {
        vec![a.suite.as_str()]
    };
    let reports: Vec<PropertyReport> = names
        .par_iter()
        .map(|s| run_suite(s, seed))
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Outcome::Report {
        report: VerifyReport {
            suite: a.suite,
            seed,
            passed: reports.iter().all(|r| r.passed),
            reports,
        },
        output,
    })
}
