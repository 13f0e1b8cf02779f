//! `specgap` — spectral-gap lower bounds from one-dimensional Neumann
//! models: single bounds, parameter sweeps, model profiles, and the
//! verification catalog.
//!
//! Exit codes: 0 success, 2 precondition violations (bad parameters,
//! `d > d_max`, malformed grids), 1 numerical failures and failed checks.

mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specgap::error::Error;
use specgap::gapbound::{hat_lambda, lichnerowicz, remark_bound, SolveMethod};
use specgap::modelfun::{model_profile, weighted_flux_residual};
use specgap::models::CurvatureDimension;
use specgap::ode::IntegratorConfig;
use specgap::spaces::{catalog, comparison_reports, verify_bound, SpaceKind};
use specgap::tridiag::assemble_neumann;

use output::{fmt_f64, parallel_map, Cell, Table};

#[derive(Parser)]
#[command(name = "specgap", version, about = "Sharp spectral-gap lower bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the bound for one (K, N, d).
    Bound(BoundArgs),
    /// Evaluate the bound over a (K, N, d) grid and check monotonicity in d.
    Sweep(SweepArgs),
    /// One-sided model profile: endpoints a, b and maximum m.
    Model(ModelArgs),
    /// Run the built-in verification catalog.
    Verify(VerifyArgs),
    /// Quick solver self-check against closed forms.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Shooting,
    Discretization,
    Both,
}

impl From<MethodArg> for SolveMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => SolveMethod::Auto,
            MethodArg::Shooting => SolveMethod::Shooting,
            MethodArg::Discretization => SolveMethod::Discretization,
            MethodArg::Both => SolveMethod::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long = "K", allow_hyphen_values = true)]
    k: f64,
    #[arg(long = "N")]
    n: f64,
    #[arg(long = "d")]
    d: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// K axis: value, comma list, or start:stop:count.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: String,
    #[arg(long = "N")]
    n: String,
    #[arg(long = "d")]
    d: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long = "R", allow_hyphen_values = true)]
    r: f64,
    #[arg(long = "l")]
    l: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Keep catalog spaces whose name contains any of these comma-separated
    /// substrings; no flag keeps everything.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Model(args) => cmd_model(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Selftest => cmd_selftest(),
    };
    ExitCode::from(code)
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) => 2,
        _ => 1,
    }
}

fn fail(err: &Error) -> u8 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn check_tol(tol: f64) -> Result<(), u8> {
    if !(1e-13..=1e-3).contains(&tol) {
        eprintln!("error: tol must lie in [1e-13, 1e-3], got {tol}");
        return Err(2);
    }
    Ok(())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), u8> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            1u8
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

const SWEEP_COLUMNS: &[&str] = &["K", "N", "d", "lambda_hat", "method", "achieved_tol"];

fn cmd_bound(args: BoundArgs) -> u8 {
    if let Err(c) = check_tol(args.tol) {
        return c;
    }
    let cd = match CurvatureDimension::new(args.k, args.n) {
        Ok(cd) => cd,
        Err(e) => return fail(&e),
    };
    let res = match hat_lambda(&cd, args.d, args.tol, args.method.into()) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let text = match args.format {
        None => {
            let mut s = String::new();
            s.push_str(&format!("K = {}\n", fmt_f64(args.k)));
            s.push_str(&format!("N = {}\n", fmt_f64(args.n)));
            s.push_str(&format!("d = {}\n", fmt_f64(args.d)));
            s.push_str(&format!("lambda_hat = {}\n", fmt_f64(res.lambda)));
            s.push_str(&format!("method = {}\n", res.method.as_str()));
            s.push_str(&format!("achieved_tol = {}\n", fmt_f64(res.achieved_tol)));
            if let Some(gap) = res.diagnostics.dual_gap {
                s.push_str(&format!("dual_gap = {}\n", fmt_f64(gap)));
            }
            if let Some(order) = res.diagnostics.observed_order {
                s.push_str(&format!("observed_order = {}\n", fmt_f64(order)));
                if res.diagnostics.order_warning {
                    s.push_str("order_warning = true\n");
                }
            }
            s
        }
        Some(fmt) => {
            let mut table = Table::new(SWEEP_COLUMNS);
            table.rows.push(vec![
                Cell::Num(args.k),
                Cell::Num(args.n),
                Cell::Num(args.d),
                Cell::Num(res.lambda),
                Cell::Text(res.method.as_str().into()),
                Cell::Num(res.achieved_tol),
            ]);
            match fmt {
                FormatArg::Csv => table.to_csv(),
                FormatArg::Json => table.to_json(),
            }
        }
    };
    match emit(&text, &args.out) {
        Ok(()) => 0,
        Err(c) => c,
    }
}

fn cmd_sweep(args: SweepArgs) -> u8 {
    if let Err(c) = check_tol(args.tol) {
        return c;
    }
    let (ks, ns, ds) = match (
        grid::parse_axis(&args.k),
        grid::parse_axis(&args.n),
        grid::parse_axis(&args.d),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (a, b, c) => {
            for e in [a.err(), b.err(), c.err()].into_iter().flatten() {
                eprintln!("error: {e}");
            }
            return 2;
        }
    };
    let jobs = args.jobs.max(1);
    let method: SolveMethod = args.method.into();
    let total = ks.len() * ns.len() * ds.len();

    // Row-major grid order: K outermost, d innermost.
    let point = |idx: usize| {
        let di = idx % ds.len();
        let ni = (idx / ds.len()) % ns.len();
        let ki = idx / (ds.len() * ns.len());
        (ks[ki], ns[ni], ds[di])
    };
    let results = parallel_map(total, jobs, |idx| {
        let (k, n, d) = point(idx);
        CurvatureDimension::new(k, n).and_then(|cd| hat_lambda(&cd, d, args.tol, method))
    });

    let mut table = Table::new(SWEEP_COLUMNS);
    for (idx, res) in results.iter().enumerate() {
        let (k, n, d) = point(idx);
        match res {
            Ok(r) => table.rows.push(vec![
                Cell::Num(k),
                Cell::Num(n),
                Cell::Num(d),
                Cell::Num(r.lambda),
                Cell::Text(r.method.as_str().into()),
                Cell::Num(r.achieved_tol),
            ]),
            Err(e) => {
                eprintln!("error at K = {k}, N = {n}, d = {d}: {e}");
                return exit_code(e);
            }
        }
    }

    // Built-in check: hat_lambda decreases along d for each fixed (K, N).
    let mut violations = 0usize;
    for ki in 0..ks.len() {
        for ni in 0..ns.len() {
            let mut pts: Vec<(f64, f64)> = (0..ds.len())
                .map(|di| {
                    let idx = (ki * ns.len() + ni) * ds.len() + di;
                    (ds[di], results[idx].as_ref().unwrap().lambda)
                })
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in pts.windows(2) {
                if w[1].0 > w[0].0 && w[1].1 >= w[0].1 {
                    violations += 1;
                }
            }
        }
    }
    table
        .trailers
        .push(("monotonicity_violations".into(), violations.to_string()));

    let text = match args.format {
        FormatArg::Csv => table.to_csv(),
        FormatArg::Json => table.to_json(),
    };
    if let Err(c) = emit(&text, &args.out) {
        return c;
    }
    if violations > 0 {
        eprintln!("error: {violations} monotonicity violations in the sweep");
        1
    } else {
        0
    }
}

fn cmd_model(args: ModelArgs) -> u8 {
    let config = IntegratorConfig::default();
    let profile = match model_profile(args.r, args.l, args.lambda, &config) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    let text = match args.format {
        None => {
            let mut s = String::new();
            s.push_str(&format!("R = {}\n", fmt_f64(args.r)));
            s.push_str(&format!("l = {}\n", fmt_f64(args.l)));
            s.push_str(&format!("lambda = {}\n", fmt_f64(args.lambda)));
            s.push_str(&format!("a = {}\n", fmt_f64(profile.model.a())));
            s.push_str(&format!("b = {}\n", fmt_f64(profile.b)));
            s.push_str(&format!("m = {}\n", fmt_f64(profile.m)));
            s.push_str(&format!(
                "flux_residual = {}\n",
                fmt_f64(weighted_flux_residual(&profile))
            ));
            s
        }
        Some(fmt) => {
            let mut table = Table::new(&["s", "v", "dv", "rho"]);
            for sample in profile.trajectory.samples() {
                let rho = profile.model.density(sample.x).unwrap_or(f64::NAN);
                table.rows.push(vec![
                    Cell::Num(sample.x),
                    Cell::Num(sample.v),
                    Cell::Num(sample.dv),
                    Cell::Num(rho),
                ]);
            }
            match fmt {
                FormatArg::Csv => table.to_csv(),
                FormatArg::Json => table.to_json(),
            }
        }
    };
    match emit(&text, &args.out) {
        Ok(()) => 0,
        Err(c) => c,
    }
}

const VERIFY_COLUMNS: &[&str] = &[
    "space",
    "K",
    "N",
    "diameter",
    "lambda1",
    "lambda_hat",
    "margin",
    "pass",
];

/// Grid and tolerances for the catalog comparison checks.
const CHECK_GRID: usize = 512;
const CHECK_TOL: f64 = 1e-4;

fn cmd_verify(args: VerifyArgs) -> u8 {
    if let Err(c) = check_tol(args.tol) {
        return c;
    }
    let needles: Vec<String> = args
        .filter
        .as_deref()
        .map(|f| {
            f.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        })
        .unwrap_or_default();
    let spaces: Vec<_> = catalog::<f64>()
        .into_iter()
        .filter(|s| needles.is_empty() || needles.iter().any(|n| s.name.contains(n)))
        .collect();

    struct SpaceOutcome {
        report: specgap::BoundReport64,
        checks: Option<(specgap::modelfun::GradientReport<f64>, specgap::modelfun::MaxReport<f64>)>,
    }

    let tol = args.tol;
    let results = parallel_map(spaces.len(), args.jobs.max(1), |i| {
        let space = &spaces[i];
        let report = verify_bound(space, tol)?;
        let checks = match space.kind {
            SpaceKind::Weighted(w) => {
                Some(comparison_reports(&w, CHECK_GRID, CHECK_TOL, CHECK_TOL)?)
            }
            _ => None,
        };
        Ok::<_, Error>(SpaceOutcome { report, checks })
    });

    let mut table = Table::new(VERIFY_COLUMNS);
    let mut all_pass = true;
    let mut check_lines = String::new();
    for res in &results {
        let outcome = match res {
            Ok(o) => o,
            Err(e) => return fail(e),
        };
        let r = &outcome.report;
        all_pass &= r.pass;
        table.rows.push(vec![
            Cell::Text(r.name.clone()),
            Cell::Num(r.k),
            Cell::Num(r.n),
            Cell::Num(r.diameter),
            Cell::Num(r.lambda1),
            Cell::Num(r.lambda_hat),
            Cell::Num(r.margin),
            Cell::Bool(r.pass),
        ]);
        if let Some((grad, max)) = &outcome.checks {
            all_pass &= grad.pass && max.pass;
            check_lines.push_str(&format!(
                "gradient {:12} max_violation = {:+.3e}  (1 + max_gamma = {:.3e})  {}\n",
                r.name,
                grad.max_violation,
                1.0 + grad.max_gamma,
                if grad.pass { "PASS" } else { "FAIL" }
            ));
            check_lines.push_str(&format!(
                "maximum  {:12} max_f = {:.6}  m_model = {:.6}  {}\n",
                r.name,
                max.max_f,
                max.m_model,
                if max.pass { "PASS" } else { "FAIL" }
            ));
        }
    }

    let text = match args.format {
        Some(FormatArg::Csv) => table.to_csv(),
        Some(FormatArg::Json) => table.to_json(),
        None => {
            let mut s = String::new();
            s.push_str(&format!(
                "{:<12} {:>7} {:>5} {:>10} {:>14} {:>14} {:>11} {:>5}\n",
                "space", "K", "N", "diameter", "lambda1", "lambda_hat", "margin", "pass"
            ));
            for row in &results {
                let r = &row.as_ref().unwrap().report;
                s.push_str(&format!(
                    "{:<12} {:>7.3} {:>5.2} {:>10.6} {:>14.8} {:>14.8} {:>11.2e} {:>5}\n",
                    r.name,
                    r.k,
                    r.n,
                    r.diameter,
                    r.lambda1,
                    r.lambda_hat,
                    r.margin,
                    if r.pass { "PASS" } else { "FAIL" }
                ));
            }
            if !check_lines.is_empty() {
                s.push('\n');
                s.push_str(&check_lines);
            }
            s.push_str(&format!(
                "\n{} spaces checked, all_pass = {all_pass}\n",
                results.len()
            ));
            s
        }
    };
    if let Err(c) = emit(&text, &args.out) {
        return c;
    }
    if all_pass {
        0
    } else {
        1
    }
}

fn cmd_selftest() -> u8 {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        if ok {
            println!("ok   {name}");
        } else {
            println!("FAIL {name}: {detail}");
            failures += 1;
        }
    };
    let pi = std::f64::consts::PI;
    let config = IntegratorConfig::default();

    let flat = CurvatureDimension::new(0.0, 4.0).unwrap();
    match hat_lambda(&flat, pi, 1e-10, SolveMethod::Shooting) {
        Ok(r) => check(
            "flat model shoots to pi^2/d^2",
            (r.lambda - 1.0).abs() < 1e-9,
            format!("lambda = {}", r.lambda),
        ),
        Err(e) => check("flat model shoots to pi^2/d^2", false, e.to_string()),
    }

    let sphere = CurvatureDimension::new(2.0, 3.0).unwrap();
    match hat_lambda(&sphere, pi, 1e-6, SolveMethod::Both) {
        Ok(r) => check(
            "Lichnerowicz endpoint (K=2, N=3, d=pi)",
            (r.lambda - 3.0).abs() < 1e-5,
            format!("lambda = {}", r.lambda),
        ),
        Err(e) => check("Lichnerowicz endpoint (K=2, N=3, d=pi)", false, e.to_string()),
    }
    check(
        "Lichnerowicz closed form",
        (lichnerowicz(&sphere).unwrap() - 3.0).abs() < 1e-14,
        String::new(),
    );

    let neg = CurvatureDimension::new(-3.0, 2.0).unwrap();
    match hat_lambda(&neg, 1.7, 1e-8, SolveMethod::Both) {
        Ok(r) => check(
            "dual-method agreement at K<0",
            r.diagnostics.dual_gap.unwrap_or(f64::INFINITY) < 1e-7,
            format!("gap = {:?}", r.diagnostics.dual_gap),
        ),
        Err(e) => check("dual-method agreement at K<0", false, e.to_string()),
    }

    match model_profile(2.0, 3.0, 3.0, &config) {
        Ok(p) => {
            check(
                "trig profile hits (pi/2, 1)",
                (p.b - pi / 2.0).abs() < 1e-8 && (p.m - 1.0).abs() < 1e-8,
                format!("b = {}, m = {}", p.b, p.m),
            );
            check(
                "weighted flux identity",
                weighted_flux_residual(&p) < 1e-6,
                format!("residual = {}", weighted_flux_residual(&p)),
            );
        }
        Err(e) => check("trig profile hits (pi/2, 1)", false, e.to_string()),
    }

    match model_profile(0.0, 3.0, 1.0, &config) {
        Ok(p) => check(
            "power profile maximum",
            (p.m - 0.21723).abs() < 1e-5,
            format!("m = {}", p.m),
        ),
        Err(e) => check("power profile maximum", false, e.to_string()),
    }

    match hat_lambda(&sphere, 2.0, 1e-9, SolveMethod::Shooting) {
        Ok(r) => {
            let bound = remark_bound(3.0, 2.0).unwrap();
            check(
                "remark inequality at d=2",
                r.lambda >= bound - 1e-8,
                format!("lambda = {}, bound = {bound}", r.lambda),
            );
        }
        Err(e) => check("remark inequality at d=2", false, e.to_string()),
    }

    let pencil = assemble_neumann(|_: f64| 1.0, (0.0, pi), 16).unwrap();
    let exact = {
        let h = pi / 16.0;
        4.0 / (h * h) * (pi / 32.0).sin().powi(2)
    };
    match pencil.eigenvalue_k(1, 1e-13) {
        Ok(l) => check(
            "discrete cosine spectrum",
            (l - exact).abs() < 1e-12,
            format!("lambda = {l}, exact = {exact}"),
        ),
        Err(e) => check("discrete cosine spectrum", false, e.to_string()),
    }

    if failures == 0 {
        println!("selftest: all checks passed");
        0
    } else {
        println!("selftest: {failures} checks failed");
        1
    }
}
