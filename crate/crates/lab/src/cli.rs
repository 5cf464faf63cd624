//! Command-line surface and subcommand implementations.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use riesz_core::dirichlet::{growth_fit, DEFAULT_LATTICE_CAP};
use riesz_core::extremal::{dual_extremal_solve_with, SolverOptions};
use riesz_core::homog2::{default_p_grid, threshold_scan, THRESHOLD_RESOLUTION};
use riesz_core::norms::{conjugate, lp_norm};
use riesz_core::rpk::{kw_norm, rpk_coefficient_check, KernelPoint};
use riesz_core::{all_coefficients, sample, GridFunction, NormExponent, TrigPoly};
use serde_json::{json, Value};

use crate::config::{Format, Overrides, RunConfig};
use crate::error::{LabError, Result};
use crate::figures::{figure_csv, figure_json, figure_table};
use crate::formats::{
    fmt_num, is_rlgf, parse_exponent, poly_from_json, poly_to_json, read_grid, write_grid, PolyJson,
};
use crate::search::{eval_grid, violation_search};
use crate::selftest::run_selftest;

#[derive(Debug, Parser)]
#[command(name = "riesz-lab", version, about = "Riesz projection laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file of `key = value` settings; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Grid points per axis (power of two).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Riesz projection of a polynomial (JSON) or grid (RLGF).
    Project {
        input: PathBuf,
        /// Project onto strictly negative frequencies (d = 1).
        #[arg(long)]
        minus: bool,
        /// Project in these axes only (0-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        axes: Option<Vec<usize>>,
    },
    /// L^p norm of a polynomial or grid; `p` may be `gm` or `inf`.
    Norm {
        input: PathBuf,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
    },
    /// Coefficientwise kernel inequality and, with `--r`, the kernel norm.
    RpkCheck {
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        /// Defaults to `4/q*`.
        #[arg(long, value_parser = parse_exponent)]
        p: Option<f64>,
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        /// Squared modulus of the kernel point.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Minimal-norm representative of an analytic polynomial (d = 1).
    DualExtremal {
        input: PathBuf,
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        /// Degree of the conjugate-analytic correction; defaults to 4 x degree.
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Surviving-exponent scan for the 2-homogeneous family.
    D2Scan {
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        eps: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = THRESHOLD_RESOLUTION)]
        resolution: f64,
    },
    /// Growth of spherical Dirichlet kernel norms.
    Dirichlet {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long, value_delimiter = ',', default_value = "5,10,15,20,25,30,35,40")]
        radii: Vec<f64>,
    },
    /// Search for polynomials violating `||P_+ psi||_p <= ||psi||_q`.
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
    },
    /// Upper/lower bound tables for the critical exponent.
    Figures {
        #[arg(long)]
        d: u32,
    },
    /// Runs the built-in invariant suite.
    Selftest,
}

pub enum Output {
    Text(String),
    Binary(Vec<u8>),
}

/// Result of a subcommand: what to emit and the exit status.
pub struct Outcome {
    pub output: Output,
    pub status: i32,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn text(s: String) -> Self {
        Self {
            output: Output::Text(s),
            status: 0,
            notes: Vec::new(),
        }
    }
}

fn exp_value(x: f64) -> Value {
    if x.is_infinite() {
        Value::String("inf".into())
    } else {
        json!(x)
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

enum Input {
    Poly(TrigPoly),
    Grid(GridFunction),
}

fn read_input(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path)?;
    if is_rlgf(&bytes) {
        Ok(Input::Grid(read_grid(bytes.as_slice())?))
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|_| LabError::invalid("input is neither RLGF nor UTF-8 JSON"))?;
        Ok(Input::Poly(poly_from_json(&text)?))
    }
}

fn poly_csv(p: &TrigPoly) -> String {
    let mut out: String = (0..p.dim()).map(|i| format!("a{i},")).collect();
    out.push_str("re,im\n");
    for (alpha, c) in p.terms() {
        for a in alpha.entries() {
            out.push_str(&format!("{a},"));
        }
        out.push_str(&format!("{},{}\n", fmt_num(c.re), fmt_num(c.im)));
    }
    out
}

pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig> {
    let base = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    base.apply(&Overrides {
        grid: g.grid,
        tol: g.tol,
        seed: g.seed,
        budget: g.budget,
        out: g.out.clone(),
        format: g.format,
    })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = resolve_config(&cli.global)?;
    let fmt = |default: Format| cfg.format.unwrap_or(default);
    match &cli.command {
        Command::Project { input, minus, axes } => project(
            &read_input(input)?,
            *minus,
            axes.as_deref(),
            fmt(Format::Json),
        ),
        Command::Norm { input, p } => {
            let exp = NormExponent::from_f64(*p)?;
            let g = match read_input(input)? {
                Input::Grid(g) => g,
                Input::Poly(poly) => sample(&poly, eval_grid(&poly, cfg.grid_for(poly.dim())))?,
            };
            let v = lp_norm(&g, exp)?;
            Ok(Outcome::text(match fmt(Format::Json) {
                Format::Json => {
                    pretty(&json!({"p": exp_value(*p), "norm": v, "grid": g.n_per_axis()}))
                }
                Format::Csv => format!(
                    "p,norm,grid\n{},{},{}\n",
                    fmt_num(*p),
                    fmt_num(v),
                    g.n_per_axis()
                ),
            }))
        }
        Command::RpkCheck { q, p, n_max, r } => {
            rpk_check(*q, *p, *n_max, *r, &cfg, fmt(Format::Json))
        }
        Command::DualExtremal { input, q, trunc } => {
            let Input::Poly(phi) = read_input(input)? else {
                return Err(LabError::invalid("dual-extremal needs a polynomial input"));
            };
            let opts = SolverOptions {
                trunc_degree: *trunc,
                tol: cfg.tol,
                grid: cfg.grid,
                ..SolverOptions::default()
            };
            let t = dual_extremal_solve_with(&phi, *q, &opts)?;
            let d = &t.diagnostics;
            let psi = all_coefficients(&t.extremal_kernel)?
                .poly
                .pruned(1e-15 * t.value.max(1.0));
            Ok(Outcome::text(match fmt(Format::Json) {
                Format::Json => pretty(&json!({
                    "q": exp_value(*q),
                    "value": t.value,
                    "primal": d.primal,
                    "dual": d.dual,
                    "duality_gap": d.duality_gap,
                    "iterations": d.iterations,
                    "trunc_degree": d.trunc_degree,
                    "grid": d.grid,
                    "extremal_kernel": PolyJson::from(&psi),
                })),
                Format::Csv => format!(
                    "q,value,primal,dual,duality_gap,iterations,trunc_degree,grid\n{},{},{},{},{:e},{},{},{}\n",
                    fmt_num(*q),
                    fmt_num(t.value),
                    fmt_num(d.primal),
                    fmt_num(d.dual),
                    d.duality_gap,
                    d.iterations,
                    d.trunc_degree,
                    d.grid
                ),
            }))
        }
        Command::D2Scan {
            q,
            eps,
            p_grid,
            resolution,
        } => {
            let grid = p_grid.clone().unwrap_or_else(default_p_grid);
            let scan = threshold_scan(*q, eps, &grid, *resolution, &cfg.series()?)?;
            let opt = |x: Option<f64>| x.map_or(Value::Null, |v| json!(v));
            Ok(Outcome::text(match fmt(Format::Csv) {
                Format::Csv => {
                    let mut out = String::from("eps,grid_threshold,threshold_p,a,b,psi_norm\n");
                    for r in &scan.rows {
                        let o = |x: Option<f64>| x.map_or_else(|| "none".to_string(), fmt_num);
                        out.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            fmt_num(r.eps),
                            o(r.grid_threshold),
                            o(r.threshold_p),
                            fmt_num(r.a),
                            fmt_num(r.b),
                            fmt_num(r.psi_norm)
                        ));
                    }
                    out
                }
                Format::Json => {
                    let rows: Vec<Value> = scan
                        .rows
                        .iter()
                        .map(|r| {
                            json!({
                                "eps": r.eps,
                                "grid_threshold": opt(r.grid_threshold),
                                "threshold_p": opt(r.threshold_p),
                                "a": r.a,
                                "b": r.b,
                                "psi_norm": r.psi_norm,
                            })
                        })
                        .collect();
                    pretty(&json!({
                        "q": exp_value(scan.q),
                        "q_star": scan.q_star,
                        "rows": rows,
                        "extrapolated": opt(scan.extrapolated),
                        "target": scan.target,
                        "resolution": scan.resolution,
                    }))
                }
            }))
        }
        Command::Dirichlet { d, p, radii } => {
            let fit = growth_fit(*d, *p, radii, cfg.grid)?;
            Ok(Outcome::text(match fmt(Format::Csv) {
                Format::Csv => {
                    let mut out = String::from("radius,norm,lattice_count\n");
                    for pt in &fit.points {
                        out.push_str(&format!(
                            "{},{},{}\n",
                            fmt_num(pt.radius),
                            fmt_num(pt.norm),
                            pt.lattice_count
                        ));
                    }
                    out.push_str(&format!(
                        "# exponent {} target {} c_hat {}\n",
                        fmt_num(fit.exponent),
                        fmt_num(fit.target),
                        fmt_num(fit.c_hat)
                    ));
                    out
                }
                Format::Json => {
                    let points: Vec<Value> = fit
                        .points
                        .iter()
                        .map(|pt| json!({"radius": pt.radius, "norm": pt.norm, "lattice_count": pt.lattice_count}))
                        .collect();
                    pretty(&json!({
                        "d": fit.dim,
                        "p": exp_value(fit.p),
                        "exponent": fit.exponent,
                        "target": fit.target,
                        "c_hat": fit.c_hat,
                        "lattice_cap": DEFAULT_LATTICE_CAP,
                        "points": points,
                    }))
                }
            }))
        }
        Command::Search { d, q, p } => {
            let report = violation_search(*d, *q, *p, &cfg)?;
            Ok(Outcome::text(match fmt(Format::Json) {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut out =
                        String::from("family,candidates,start_ratio,ratio,ascent_steps\n");
                    for f in &report.families {
                        out.push_str(&format!(
                            "{},{},{},{},{}\n",
                            f.family.name(),
                            f.candidates,
                            fmt_num(f.start_ratio),
                            fmt_num(f.ratio),
                            f.ascent_steps
                        ));
                    }
                    out
                }
            }))
        }
        Command::Figures { d } => {
            let table = figure_table(*d)?;
            Ok(Outcome::text(match fmt(Format::Csv) {
                Format::Csv => figure_csv(&table),
                Format::Json => {
                    let mut s = figure_json(&table);
                    s.push('\n');
                    s
                }
            }))
        }
        Command::Selftest => {
            let report = run_selftest();
            Ok(Outcome {
                output: Output::Text(report.render()),
                status: if report.failed() == 0 { 0 } else { 1 },
                notes: Vec::new(),
            })
        }
    }
}

fn project(input: &Input, minus: bool, axes: Option<&[usize]>, fmt: Format) -> Result<Outcome> {
    if minus && axes.is_some() {
        return Err(LabError::invalid("--minus and --axes are exclusive"));
    }
    match input {
        Input::Poly(p) => {
            let out = match (minus, axes) {
                (true, _) => p.riesz_project_minus()?,
                (false, Some(a)) => p.partial_project(a)?,
                (false, None) => p.riesz_project(),
            };
            Ok(Outcome::text(match fmt {
                Format::Json => {
                    let mut s = poly_to_json(&out);
                    s.push('\n');
                    s
                }
                Format::Csv => poly_csv(&out),
            }))
        }
        Input::Grid(g) => {
            let proj = match (minus, axes) {
                (true, _) => g.riesz_project_minus()?,
                (false, Some(a)) => {
                    let a = a.to_vec();
                    g.spectral_filter(|alpha| a.iter().all(|&i| i < alpha.len() && alpha[i] >= 0))?
                }
                (false, None) => g.riesz_project()?,
            };
            let mut bytes = Vec::new();
            write_grid(&proj.grid, &mut bytes)?;
            Ok(Outcome {
                output: Output::Binary(bytes),
                status: 0,
                notes: vec![format!("aliasing {:e}", proj.aliasing)],
            })
        }
    }
}

fn rpk_check(
    q: f64,
    p: Option<f64>,
    n_max: u32,
    r: Option<f64>,
    cfg: &RunConfig,
    fmt: Format,
) -> Result<Outcome> {
    let q_star = conjugate(q)?;
    let p = p.unwrap_or(4.0 / q_star);
    let report = rpk_coefficient_check(q, p, n_max)?;
    let kernel = match r {
        Some(r) => {
            let w = KernelPoint::from_r(r)?;
            let norm = kw_norm(&w, p, &cfg.series()?)?.require()?;
            Some((r, norm, (1.0 - r).powf(-1.0 / q_star)))
        }
        None => None,
    };
    let min_margin = report.margins.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Outcome::text(match fmt {
        Format::Json => pretty(&json!({
            "q": exp_value(q),
            "p": p,
            "n_max": n_max,
            "holds": report.holds(),
            "first_violation": report.first_violation,
            "min_margin": min_margin,
            "kernel": kernel.map(|(r, norm, bound)| json!({"r": r, "norm": norm, "bound": bound})),
        })),
        Format::Csv => {
            let mut out = String::from("n,margin,dominance_margin,factor_margin\n");
            for (i, m) in report.margins.iter().enumerate() {
                let dm = report.dominance_margins.get(i).copied().unwrap_or(f64::NAN);
                let fm = report.factor_margins.get(i).copied().unwrap_or(f64::NAN);
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    fmt_num(*m),
                    fmt_num(dm),
                    fmt_num(fm)
                ));
            }
            if let Some((r, norm, bound)) = kernel {
                out.push_str(&format!(
                    "# r {} norm {} bound {}\n",
                    fmt_num(r),
                    fmt_num(norm),
                    fmt_num(bound)
                ));
            }
            out
        }
    }))
}
