mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pd7kit::boutroux::{solve_c1, BowTie};
use pd7kit::equilibrium::{cubic_value, invariants_from_E, solve_equilibrium};
use pd7kit::levelset::{re_h_at_roots, sign_chart, trace_K};
use pd7kit::solution::{density_grid, AlgebraicSolution, Bounds};
use pd7kit::verify::{default_z_samples, verify};
use pd7kit::{ohyama, selftest, toy, Error, C};

use config::{Config, Format};

const SCHEMA: &str = "pd7kit/1";

#[derive(Parser)]
#[command(name = "pd7kit", version, about = "Algebraic Painlevé-III(D7) solutions and their Boutroux curve")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// key=value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for cached R_n tables.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Output format: json, csv or pretty.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// The polynomial R_n.
    Ohyama {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "json")]
        emit: Emit,
    },
    /// u_n(x), or U_n(y + z/n), with derivatives.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, conflicts_with = "y")]
        x: Option<C>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: Option<C>,
        #[arg(long, value_parser = complex, allow_hyphen_values = true, requires = "y")]
        z: Option<C>,
    },
    /// |U_n| on a grid of the Y-plane.
    Grid {
        #[arg(long)]
        n: i64,
        #[arg(long, value_parser = bounds, allow_hyphen_values = true, default_value = "-1,1,-1,1")]
        bounds: Bounds,
        #[arg(long, default_value_t = 201)]
        res: usize,
    },
    /// Relative Painlevé residual over quasi-random points of 0.1 ≤ |x| ≤ 10.
    Residual {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// The constant branch of 8U³ + 2U = y.
    Equilibrium {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
    },
    /// Weierstrass invariants for given y and E.
    Invariants {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
        #[arg(long = "E", value_parser = complex, allow_hyphen_values = true)]
        e: C,
    },
    /// Solve the Boutroux conditions for c₁(y).
    Boutroux {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
    },
    /// Boundary of the bow-tie region.
    Bowtie {
        #[arg(long, default_value_t = 24)]
        rays: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Critical trajectories of the quadratic differential.
    Levelset {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
    },
    /// Sign of Re h on a grid of the η-plane.
    Signchart {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
        #[arg(long, value_parser = bounds, allow_hyphen_values = true, default_value = "-1,1,-1,1")]
        bounds: Bounds,
        #[arg(long, default_value_t = 101)]
        res: usize,
    },
    /// Residuals of the limiting ODE over a sequence of n.
    Verify {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        y: C,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        n_list: Vec<i64>,
    },
    /// Checks of the toy Riemann-Hilbert problem.
    ToyRhp {
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: C,
        #[arg(long)]
        full_report: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Emit {
    Json,
    Pretty,
}

fn complex(s: &str) -> Result<C, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    match parts.as_slice() {
        [re] => Ok(C::new(num(re)?, 0.0)),
        [re, im] => Ok(C::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got `{s}`")),
    }
}

fn bounds(s: &str) -> Result<Bounds, String> {
    let v: Vec<f64> = s.split(',').map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    match v.as_slice() {
        &[re_min, re_max, im_min, im_max] if re_min < re_max && im_min < im_max => {
            Ok(Bounds { re_min, re_max, im_min, im_max })
        }
        _ => Err(format!("expected re_min,re_max,im_min,im_max with min < max, got `{s}`")),
    }
}

fn cj(z: C) -> Value {
    json!({"re": z.re, "im": z.im})
}

enum Output {
    Json(Value),
    Text(String),
}

fn with_schema(v: Value) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), SCHEMA.into());
    if let Value::Object(o) = v {
        m.extend(o);
    }
    Value::Object(m)
}

fn run(cmd: Cmd, cfg: &Config) -> Result<Output, Error> {
    let solution = |n: i64| -> Result<AlgebraicSolution, Error> {
        let mut s = AlgebraicSolution::new(n)?;
        s.pole_tol = cfg.pole_tol;
        Ok(s)
    };
    let out = match cmd {
        Cmd::Ohyama { n, emit } => {
            let r = ohyama::compute(n)?;
            match emit {
                Emit::Pretty => Output::Text(format!("R_{n} = {r}\n")),
                Emit::Json => Output::Json(json!({
                    "n": n,
                    "min_exp": r.min_exp(),
                    "max_exp": r.max_exp(),
                    "terms": r.to_json(),
                })),
            }
        }
        Cmd::Eval { n, x, y, z } => {
            let sol = solution(n)?;
            let v = match (x, y) {
                (Some(x), _) => {
                    let j = sol.jet_x(x, 2)?;
                    json!({"n": n, "x": cj(x), "u": cj(j.u), "du": cj(j.du), "d2u": cj(j.d2u)})
                }
                (None, Some(y)) => {
                    let z = z.unwrap_or(C::new(0.0, 0.0));
                    let j = sol.jet_shifted(y, z, 2)?;
                    json!({"n": n, "y": cj(y), "z": cj(z), "W": cj(j.u), "dW": cj(j.du), "d2W": cj(j.d2u)})
                }
                (None, None) => return Err(Error::InvalidIndex("one of --x or --y is required".into())),
            };
            Output::Json(v)
        }
        Cmd::Grid { n, bounds, res } => Output::Text(density_grid(n, bounds, res, res)?.to_csv("Y_re,Y_im,modulus")),
        Cmd::Residual { n, samples } => {
            let sol = solution(n)?;
            let mut worst = 0.0f64;
            let mut skipped = 0;
            for x in selftest::annulus_samples(samples) {
                match sol.ode_residual_relative(x) {
                    Ok(r) => worst = worst.max(r),
                    Err(Error::PoleHit) | Err(Error::ZeroHit) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Output::Json(json!({"n": n, "samples": samples, "skipped": skipped, "max_relative_residual": worst}))
        }
        Cmd::Equilibrium { y } => {
            let b = solve_equilibrium(y)?;
            Output::Json(json!({"y": cj(y), "U": cj(b.u), "cubic_residual": cubic_value(b.u, y).norm()}))
        }
        Cmd::Invariants { y, e } => {
            let w = invariants_from_E(y, e);
            Output::Json(json!({"y": cj(y), "E": cj(e), "g2": cj(w.g2), "g3": cj(w.g3)}))
        }
        Cmd::Boutroux { y } => {
            let b = solve_c1(y)?;
            let p = b.phases;
            Output::Json(json!({
                "y": cj(y),
                "c1": cj(b.c1),
                "residuals": {"I12": b.i12, "I23": b.i23},
                "iterations": b.iterations,
                "roots": b.curve.s().iter().map(|&s| cj(s)).collect::<Vec<_>>(),
                "E": cj(b.E),
                "psi": p.psi,
                "xi": p.xi,
                "kappa": p.kappa,
                "tau": p.tau,
                "diff_01": p.diff_01,
            }))
        }
        Cmd::Bowtie { rays, tol } => {
            let bt = BowTie::compute(rays, tol)?;
            let mut s = String::from("y_re,y_im,Y_re,Y_im\n");
            for y in bt.y_boundary() {
                let big = C::from_polar(y.norm().cbrt(), y.arg() / 3.0);
                s.push_str(&format!("{:?},{:?},{:?},{:?}\n", y.re, y.im, big.re, big.im));
            }
            Output::Text(s)
        }
        Cmd::Levelset { y } => {
            let b = solve_c1(y)?;
            let g = trace_K(&b)?;
            let arcs: Vec<Value> = g
                .arcs
                .iter()
                .map(|a| {
                    json!({
                        "start": a.start,
                        "end": a.end,
                        "arclength": a.arclength,
                        "max_drift": a.max_drift,
                        "points": a.points.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Output::Json(json!({
                "y": cj(y),
                "c1": cj(b.c1),
                "case": g.case,
                "axis_distance": g.axis_distance(),
                "reflection_defect": g.reflection_defect(),
                "origin_enclosed": g.origin_enclosed(),
                "re_h_at_roots": re_h_at_roots(&b)?,
                "arcs": arcs,
            }))
        }
        Cmd::Signchart { y, bounds, res } => {
            let b = solve_c1(y)?;
            Output::Text(sign_chart(&b, bounds, res, res)?.to_csv("eta_re,eta_im,sign"))
        }
        Cmd::Verify { y, n_list } => {
            let b = solve_c1(y)?;
            let rep = verify(&b, &n_list, &default_z_samples())?;
            let mut v = serde_json::to_value(&rep).map_err(|e| Error::Io(e.to_string()))?;
            v["passed"] = rep.passed().into();
            Output::Json(v)
        }
        Cmd::ToyRhp { z, full_report } => {
            let id = toy::toy_identity_check(z)?;
            let jump = (0..20).map(|k| toy::toy_jump_residual(-0.95 + 1.9 * k as f64 / 19.0, z)).collect::<Result<Vec<_>, _>>()?;
            let mut v = json!({
                "z": cj(z),
                "identity_product": id.product,
                "identity_g_form": id.g_form,
                "identity_g_square": id.g_square,
                "jump_residual": jump.iter().cloned().fold(0.0, f64::max),
                "ode_residual": toy::toy_ode_residual(z, 1e-4)?,
                "q": cj(toy::toy_nls_amplitude(z)?),
                "endpoint_growth": toy::endpoint_growth(z)?,
            });
            if full_report {
                let n1 = toy::toy_laurent_coefficient(1, z)?;
                v["N1"] = json!(n1.a.iter().map(|row| row.iter().map(|&e| cj(e)).collect::<Vec<_>>()).collect::<Vec<_>>());
                v["jump_residuals"] = json!(jump);
            }
            Output::Json(v)
        }
        Cmd::Selftest { only } => {
            let ids: Vec<u32> = if only.is_empty() { selftest::CRITERIA.iter().map(|c| c.0).collect() } else { only };
            let mut results = Vec::new();
            for id in ids {
                let r = selftest::run(id)?;
                eprintln!("{}", r.line());
                results.push(r);
            }
            let all = results.iter().all(|r| r.passed);
            let v = json!({"passed": all, "criteria": results});
            if !all {
                emit(&Output::Json(v), cfg.format, None).map_err(Error::Io)?;
                return Err(Error::InsufficientData("some criteria failed".into()));
            }
            Output::Json(v)
        }
    };
    Ok(out)
}

fn emit(out: &Output, format: Format, path: Option<&PathBuf>) -> Result<(), String> {
    let text = match out {
        Output::Text(s) => s.clone(),
        Output::Json(v) => {
            let v = with_schema(v.clone());
            let s = if format == Format::Pretty { serde_json::to_string_pretty(&v) } else { serde_json::to_string(&v) };
            s.map_err(|e| e.to_string())? + "\n"
        }
    };
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut cfg = match &cli.global.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config: {e}");
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };
    if let Some(c) = cli.global.cache {
        cfg.cache = Some(c);
    }
    if let Some(f) = cli.global.format {
        cfg.format = f;
    }
    for key in cfg.fixed_overrides() {
        eprintln!("warning: `{key}` is fixed in this build and was ignored");
    }
    if let Some(dir) = &cfg.cache {
        ohyama::init_shared(Some(dir.clone()));
    }
    match run(cli.cmd, &cfg) {
        Ok(out) => match emit(&out, cfg.format, cli.global.out.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
