//! `dafn`: tables, checks, products, kernels and operator matrices for
//! discrete analytic functions on the integer lattice.
//!
//! Exit status: 0 on success, 1 when a mathematical check or precondition
//! fails, 2 on I/O or configuration errors.

mod cache;
mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use dafn_core::basis::{fourier_1d, fourier_2d, BasisTag, CoefficientSeries};
use dafn_core::lattice::{format_parts, LatticeFunction, Window};
use dafn_core::numeric::GaussianRational;
use dafn_core::operator::{
    bracket_check_lattice, commutator_a_check, kernel_gram, lie_identities_as_stated, matrix_of,
    random_lattice_functions, Op,
};
use dafn_core::products::{boxdot_product, ck_product, ck_product_truncated, ck_quotient, ck_quotient_triangular, ExpandableFunction};
use dafn_core::realization::{eval_realization, fourier_decay_check, rational_da_extend, Realization};
use dafn_core::schur::{bessel_norm_check, hda_multiplier_kernel, ks_gram, CoisometryRealization};
use dafn_core::verify::{run_criterion, VerifyConfig, CRITERIA};
use dafn_core::zeta::{extend_factorial_series, zeta_values_by_taylor};

use crate::config::{FileConfig, Format, Settings};

#[derive(Debug)]
pub enum CliError {
    /// A mathematical precondition or check failed.
    Math(dafn_core::Error),
    /// A check ran and reported failure; the report has been written.
    CheckFailed(String),
    Io(String),
    Config(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Math(_) | CliError::CheckFailed(_) => 1,
            CliError::Io(_) | CliError::Config(_) => 2,
        }
    }
}

impl From<dafn_core::Error> for CliError {
    fn from(e: dafn_core::Error) -> Self {
        CliError::Math(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Math(e) => write!(f, "{e}"),
            CliError::CheckFailed(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "dafn", version, about = "Discrete analytic functions on the integer lattice")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel kernels.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML file with defaults for the global options, `window` and `max_n`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Emit floating-point values instead of exact rationals.
    #[arg(long, global = true)]
    float: bool,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ZetaRoute {
    Extension,
    Taylor,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuotientRoute {
    Restriction,
    Triangular,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of ζ_0, …, ζ_N on a window; CSV columns n,x,y,re,im.
    Zeta {
        #[arg(long)]
        max_n: Option<usize>,
        /// XMIN:XMAX,YMIN:YMAX
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value = "extension")]
        route: ZetaRoute,
    },
    /// Discrete analytic extension of a function on the axis, given as
    /// coefficients in the factorial or monomial basis.
    Extend {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Checks D̄f = 0 on a lattice function file and reports the first failure.
    CheckDa {
        #[arg(long)]
        input: PathBuf,
    },
    /// Factorial-basis transform of a sequence on ℤ₊ or of a lattice function.
    Fourier {
        #[arg(long)]
        input: PathBuf,
    },
    /// C-K product of two ζ-series.
    CkMul {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Required unless a factor has finite support.
        #[arg(long)]
        truncation: Option<usize>,
    },
    /// C-K quotient p/q through degree N.
    CkDiv {
        #[arg(long)]
        num: PathBuf,
        #[arg(long)]
        den: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "restriction")]
        route: QuotientRoute,
    },
    /// ⊡ product of two ζ-series.
    Boxdot {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Rational function from a realization: samples, ζ-coefficients, decay estimate.
    Realize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Gram matrix of the reproducing kernel on lattice points.
    Kernel {
        /// JSON list of [x, y] pairs.
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
    /// N×N truncation of one operator in the basis ζ_n/n!.
    Matrix {
        /// dx, dy, Z, Z_adj, A_reZ, Dbar or I.
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Bracket relations on random lattice functions and on truncations.
    Brackets {
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 16)]
        n: usize,
    },
    /// Gram matrix of K_s for a coisometric realization.
    SchurKernel {
        #[arg(long)]
        realization: PathBuf,
        /// JSON list of complex points (numbers or [re, im]); lattice pairs with --lattice.
        #[arg(long)]
        points: PathBuf,
        /// Evaluate the lattice kernel C e_p(A) e_q(A)* C* instead.
        #[arg(long)]
        lattice: bool,
    },
    /// Norms of zⁿ under the Bessel weight, as ratios to (n!)².
    NormCheck {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
    },
    /// Runs the numbered acceptance criteria.
    VerifyAll {
        #[arg(long)]
        quick: bool,
        /// Restrict to these criteria.
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dafn: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(t) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let s = Settings {
        format: cli.format.or(file.format).unwrap_or_default(),
        format_explicit: cli.format.or(file.format).is_some(),
        float: cli.float || file.float.unwrap_or(false),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        output: cli.output.clone().or(file.output),
        window: file.window,
        max_n: file.max_n,
    };
    let (text, outcome) = dispatch(cli.command, &s)?;
    emit(&s, &text)?;
    outcome
}

/// Output text plus the status to report after it has been written.
type Dispatched = (String, CliResult<()>);

fn dispatch(cmd: Command, s: &Settings) -> CliResult<Dispatched> {
    match cmd {
        Command::Zeta { max_n, window, route } => cmd_zeta(s, max_n, window, route),
        Command::Extend { input, window } => cmd_extend(s, &input, window),
        Command::CheckDa { input } => cmd_check_da(s, &input),
        Command::Fourier { input } => cmd_fourier(s, &input),
        Command::CkMul { left, right, truncation } => {
            let (f, g): (ExpandableFunction, ExpandableFunction) = (read_json(&left)?, read_json(&right)?);
            let p = match truncation {
                Some(n) => ck_product_truncated(&f, &g, n)?,
                None => ck_product(&f, &g)?,
            };
            Ok((expandable_out(s, &p), Ok(())))
        }
        Command::CkDiv { num, den, n, route } => {
            let (p, q): (ExpandableFunction, ExpandableFunction) = (read_json(&num)?, read_json(&den)?);
            let f = match route {
                QuotientRoute::Restriction => ck_quotient(&p, &q, n)?,
                QuotientRoute::Triangular => ck_quotient_triangular(&p, &q, n)?,
            };
            Ok((expandable_out(s, &f), Ok(())))
        }
        Command::Boxdot { left, right } => {
            let (f, g): (ExpandableFunction, ExpandableFunction) = (read_json(&left)?, read_json(&right)?);
            Ok((expandable_out(s, &boxdot_product(&f, &g)), Ok(())))
        }
        Command::Realize { input, n } => cmd_realize(s, &input, n),
        Command::Kernel { points, n } => cmd_kernel(s, &points, n),
        Command::Matrix { op, n } => {
            let op: Op = op.parse()?;
            let m = matrix_of(op, n);
            let text = match s.format {
                Format::Csv => m.to_csv(s.float),
                Format::Json if s.float => to_json(&json!({
                    "op": op.symbol(), "n": n, "band": m.band(), "precision": "f64",
                    "entries": m.entries().iter().map(|row| row.iter().map(float_pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })),
                Format::Json => to_json(&m),
            };
            Ok((text, Ok(())))
        }
        Command::Brackets { size, count, n } => cmd_brackets(s, size, count, n),
        Command::SchurKernel { realization, points, lattice } => cmd_schur_kernel(s, &realization, &points, lattice),
        Command::NormCheck { n, resolution } => cmd_norm_check(s, n, resolution),
        Command::VerifyAll { quick, criteria } => cmd_verify(s, quick, criteria),
    }
}

fn emit(s: &Settings, text: &str) -> CliResult<()> {
    match &s.output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn float_pair(v: &GaussianRational) -> [f64; 2] {
    let c = v.to_complex64();
    [c.re, c.im]
}

/// An exact value as `{"re","im"}` strings, or a float pair with `--float`.
fn value_json(v: &GaussianRational, float: bool) -> Value {
    if float {
        json!(float_pair(v))
    } else {
        serde_json::to_value(v).expect("serializable")
    }
}

fn numeric_header(float: bool) -> Value {
    if float {
        json!({"numeric": "float", "precision": "f64"})
    } else {
        json!({"numeric": "exact"})
    }
}

fn with_header(float: bool, body: Value) -> Value {
    let mut v = numeric_header(float);
    if let (Some(head), Value::Object(rest)) = (v.as_object_mut(), body) {
        head.extend(rest);
    }
    v
}

fn csv_header(float: bool, columns: &str) -> String {
    if float {
        format!("# precision=f64\n{columns}\n")
    } else {
        format!("{columns}\n")
    }
}

fn window_arg(arg: Option<String>, s: &Settings, default: &str) -> CliResult<Window> {
    let text = arg.or_else(|| s.window.clone()).unwrap_or_else(|| default.to_string());
    text.parse().map_err(|e: dafn_core::Error| CliError::Config(e.to_string()))
}

fn cmd_zeta(s: &Settings, max_n: Option<usize>, window: Option<String>, route: ZetaRoute) -> CliResult<Dispatched> {
    let n = max_n.or(s.max_n).unwrap_or(8);
    let w = window_arg(window, s, "0:0,0:0")?;
    let tables: Vec<LatticeFunction> = match route {
        ZetaRoute::Extension => {
            let t = cache::zeta_table(n, &w)?;
            (0..=n).map(|k| t.values(k).clone()).collect()
        }
        ZetaRoute::Taylor => zeta_values_by_taylor(n, &w),
    };
    let text = match s.format {
        Format::Csv => {
            let mut out = csv_header(s.float, "n,x,y,re,im");
            for (k, f) in tables.iter().enumerate() {
                for ((x, y), v) in w.points().zip(f.values()) {
                    let (re, im) = format_parts(v, s.float);
                    writeln!(out, "{k},{x},{y},{re},{im}").expect("string write");
                }
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = tables
                .iter()
                .enumerate()
                .flat_map(|(k, f)| {
                    w.points()
                        .zip(f.values())
                        .map(move |((x, y), v)| json!({"n": k, "x": x, "y": y, "value": value_json(v, s.float)}))
                })
                .collect();
            to_json(&with_header(s.float, json!({"max_n": n, "window": w.to_string(), "rows": rows})))
        }
    };
    Ok((text, Ok(())))
}

fn lattice_out(s: &Settings, f: &LatticeFunction) -> String {
    match s.format {
        Format::Csv if s.float => format!("# precision=f64\n{}", f.to_csv(true)),
        Format::Csv => f.to_csv(false),
        Format::Json => {
            let values: Vec<Value> = f.values().iter().map(|v| value_json(v, s.float)).collect();
            to_json(&with_header(s.float, json!({"window": f.window(), "values": values})))
        }
    }
}

fn expandable_out(s: &Settings, f: &ExpandableFunction) -> String {
    match s.format {
        Format::Csv => {
            let mut out = csv_header(s.float, "n,re,im");
            for (k, v) in f.coeffs().coeffs().iter().enumerate() {
                let (re, im) = format_parts(v, s.float);
                writeln!(out, "{k},{re},{im}").expect("string write");
            }
            out
        }
        Format::Json if s.float => {
            let mut v = serde_json::to_value(f).expect("serializable");
            v["coeffs"] = json!(f.coeffs().coeffs().iter().map(float_pair).collect::<Vec<_>>());
            to_json(&with_header(true, v))
        }
        Format::Json => to_json(f),
    }
}

fn cmd_extend(s: &Settings, input: &Path, window: Option<String>) -> CliResult<Dispatched> {
    let series: CoefficientSeries = read_json(input)?;
    let factorial = match series.basis() {
        BasisTag::FactorialX => series,
        BasisTag::Monomial => {
            let p = dafn_core::numeric::Poly1::new(series.coeffs().to_vec());
            dafn_core::basis::poly1_to_factorial(&p)
        }
        BasisTag::Zeta => series.retag(BasisTag::FactorialX),
    };
    let w = window_arg(window, s, "0:3,0:3")?;
    let values = extend_factorial_series(&factorial).eval_window(&w);
    let text = match s.format {
        Format::Csv => lattice_out(s, &values),
        Format::Json => {
            let zeta: Vec<Value> = factorial.coeffs().iter().map(|v| value_json(v, s.float)).collect();
            let vals: Vec<Value> = values.values().iter().map(|v| value_json(v, s.float)).collect();
            to_json(&with_header(s.float, json!({"zeta_coeffs": zeta, "window": w, "values": vals})))
        }
    };
    Ok((text, Ok(())))
}

fn cmd_check_da(s: &Settings, input: &Path) -> CliResult<Dispatched> {
    let f: LatticeFunction = read_json(input)?;
    let r = f.is_discrete_analytic()?;
    let witness = r.witness.as_ref().map(|(x, y, v)| (x, y, v.to_string()));
    let text = match s.format {
        Format::Csv => {
            let mut out = String::from("analytic,x,y,residual\n");
            match &witness {
                Some((x, y, v)) => writeln!(out, "false,{x},{y},{v}"),
                None => writeln!(out, "true,,,"),
            }
            .expect("string write");
            out
        }
        Format::Json => to_json(&json!({
            "analytic": r.analytic,
            "witness": witness.as_ref().map(|(x, y, v)| json!({"x": x, "y": y, "residual": v})),
        })),
    };
    let status = match witness {
        Some((x, y, v)) => {
            Err(CliError::CheckFailed(format!("not discrete analytic: witness ({x},{y}), residual {v}")))
        }
        None => Ok(()),
    };
    Ok((text, status))
}

fn cmd_fourier(s: &Settings, input: &Path) -> CliResult<Dispatched> {
    let raw: Value = read_json(input)?;
    let text = if raw.is_array() {
        let vals: Vec<GaussianRational> =
            serde_json::from_value(raw).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
        let c = fourier_1d(&vals);
        match s.format {
            Format::Csv => {
                let mut out = csv_header(s.float, "n,re,im");
                for (k, v) in c.coeffs().iter().enumerate() {
                    let (re, im) = format_parts(v, s.float);
                    writeln!(out, "{k},{re},{im}").expect("string write");
                }
                out
            }
            Format::Json if s.float => to_json(&with_header(
                true,
                json!({"basis": "factorial_x", "coeffs": c.coeffs().iter().map(float_pair).collect::<Vec<_>>()}),
            )),
            Format::Json => to_json(&c),
        }
    } else {
        let f: LatticeFunction =
            serde_json::from_value(raw).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
        let c = fourier_2d(&f)?;
        match s.format {
            Format::Csv => {
                let mut out = csv_header(s.float, "m,n,re,im");
                for ((m, n), v) in c.terms() {
                    let (re, im) = format_parts(v, s.float);
                    writeln!(out, "{m},{n},{re},{im}").expect("string write");
                }
                out
            }
            Format::Json => {
                let terms: Vec<Value> =
                    c.terms().map(|((m, n), v)| json!({"m": m, "n": n, "value": value_json(v, s.float)})).collect();
                to_json(&with_header(s.float, json!({"basis": "factorial_xy", "terms": terms})))
            }
        }
    };
    Ok((text, Ok(())))
}

fn cmd_realize(s: &Settings, input: &Path, n: usize) -> CliResult<Dispatched> {
    let r: Realization = read_json(input)?;
    let samples: Vec<GaussianRational> = (0..=n as u64).map(|x| eval_realization(&r, x)).collect::<Result<_, _>>()?;
    let decay = fourier_decay_check(&r, n)?;
    let zt = dafn_core::zeta::zeta_by_extension(n, &Window::new(0, 0, 0, 0)?);
    let f = rational_da_extend(&r, &zt, n)?;
    let text = match s.format {
        Format::Csv => {
            let mut out = csv_header(s.float, "x,re,im");
            for (x, v) in samples.iter().enumerate() {
                let (re, im) = format_parts(v, s.float);
                writeln!(out, "{x},{re},{im}").expect("string write");
            }
            out
        }
        Format::Json => {
            let samples: Vec<Value> = samples.iter().map(|v| value_json(v, s.float)).collect();
            let zeta: Value = serde_json::from_str(&expandable_out(&Settings { format: Format::Json, ..s.clone() }, &f))
                .expect("own output parses");
            to_json(&with_header(
                s.float,
                json!({"restriction": samples, "decay_estimate": decay, "zeta": zeta}),
            ))
        }
    };
    Ok((text, Ok(())))
}

fn bounding_window(points: &[(i64, i64)]) -> CliResult<Window> {
    if points.is_empty() {
        return Err(CliError::Config("point list is empty".into()));
    }
    let xs = points.iter().map(|p| p.0);
    let ys = points.iter().map(|p| p.1);
    Ok(Window::new(
        xs.clone().min().unwrap_or(0),
        xs.max().unwrap_or(0),
        ys.clone().min().unwrap_or(0),
        ys.max().unwrap_or(0),
    )?)
}

fn gram_text(s: &Settings, m: &DMatrix<Complex64>, extra: Value) -> String {
    match s.format {
        Format::Csv => {
            let mut out = csv_header(true, "i,j,re,im");
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let v = m[(i, j)] + Complex64::new(0.0, 0.0);
                    writeln!(out, "{i},{j},{:e},{:e}", v.re, v.im).expect("string write");
                }
            }
            out
        }
        Format::Json => {
            let rows: Vec<Vec<[f64; 2]>> =
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
            let mut body = with_header(true, json!({"gram": rows}));
            if let (Some(o), Value::Object(e)) = (body.as_object_mut(), extra) {
                o.extend(e);
            }
            to_json(&body)
        }
    }
}

fn cmd_kernel(s: &Settings, points: &Path, n: usize) -> CliResult<Dispatched> {
    let pts: Vec<(i64, i64)> = read_json(points)?;
    let w = bounding_window(&pts)?;
    let zt = cache::zeta_table(n, &w)?;
    let k = kernel_gram(&pts, &zt, n)?;
    let text = gram_text(s, &k.gram, json!({"points": pts, "truncation": n, "min_eigenvalue": k.min_eigenvalue}));
    Ok((text, Ok(())))
}

fn cmd_brackets(s: &Settings, size: usize, count: usize, n: usize) -> CliResult<Dispatched> {
    let w = Window::anchored(size, size)?;
    let fs = random_lattice_functions(count, &w, s.seed);
    let mut rows = Vec::new();
    for id in lie_identities_as_stated() {
        let r = bracket_check_lattice(&id, &fs)?;
        rows.push(json!({"relation": id.name, "mode": "lattice", "holds": r.holds, "first_violation": r.first_violation}));
    }
    let a = commutator_a_check(n)?;
    rows.push(json!({
        "relation": "[dx,A] = (1 + dx + dx^2)/2", "mode": "matrix", "holds": a.printed_holds,
        "first_violation": a.printed_first_violation,
    }));
    rows.push(json!({
        "relation": "[dx,A] = (1 + dx)^2/2", "mode": "matrix", "holds": a.corrected_holds,
        "first_violation": a.corrected_first_violation,
    }));
    let failures: Vec<String> = rows
        .iter()
        .filter(|r| r["holds"] == json!(false))
        .map(|r| r["relation"].as_str().unwrap_or_default().to_string())
        .collect();
    let text = match s.format {
        Format::Csv => {
            let mut out = String::from("relation,mode,holds\n");
            for r in &rows {
                writeln!(out, "\"{}\",{},{}", r["relation"].as_str().unwrap_or_default(), r["mode"].as_str().unwrap_or_default(), r["holds"])
                    .expect("string write");
            }
            out
        }
        Format::Json => to_json(&json!({"window": w, "functions": count, "matrix_size": n, "relations": rows})),
    };
    let status = if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("relations failing: {}", failures.join("; "))))
    };
    Ok((text, status))
}

fn cmd_schur_kernel(s: &Settings, realization: &Path, points: &Path, lattice: bool) -> CliResult<Dispatched> {
    let r: CoisometryRealization = read_json(realization)?;
    let defect = r.coisometry_defect();
    if !r.is_coisometry() {
        eprintln!("dafn: warning: realization is not coisometric (max |MM* - I| = {defect:.3e}); evaluating anyway");
    }
    let gram = if lattice {
        let pts: Vec<(i64, i64)> = read_json(points)?;
        let mut g = DMatrix::zeros(pts.len(), pts.len());
        for (i, &p) in pts.iter().enumerate() {
            for (j, &q) in pts.iter().enumerate() {
                g[(i, j)] = hda_multiplier_kernel(&r, p, q)?;
            }
        }
        g
    } else {
        let raw: Vec<dafn_core::schur::Num> = read_json(points)?;
        let pts: Vec<Complex64> = raw.into_iter().map(Complex64::from).collect();
        ks_gram(&r, &pts)
    };
    let text = gram_text(s, &gram, json!({"coisometry_defect": defect, "lattice": lattice}));
    Ok((text, Ok(())))
}

fn cmd_norm_check(s: &Settings, n: usize, resolution: usize) -> CliResult<Dispatched> {
    let mut rows = Vec::new();
    for k in 0..=n {
        rows.push((k, bessel_norm_check(k, resolution)?));
    }
    let off: Vec<usize> = rows.iter().filter(|(_, r)| (r - 1.0).abs() > 5e-3).map(|(k, _)| *k).collect();
    let text = match s.format {
        Format::Csv => {
            let mut out = csv_header(true, "n,ratio");
            for (k, r) in &rows {
                writeln!(out, "{k},{r:.12}").expect("string write");
            }
            out
        }
        Format::Json => to_json(&with_header(
            true,
            json!({"resolution": resolution, "ratios": rows.iter().map(|(k, r)| json!({"n": k, "ratio": r})).collect::<Vec<_>>()}),
        )),
    };
    let status = if off.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("ratios off by more than 0.5% for n in {off:?}")))
    };
    Ok((text, status))
}

fn cmd_verify(s: &Settings, quick: bool, criteria: Vec<u8>) -> CliResult<Dispatched> {
    let cfg = VerifyConfig { quick, seed: VerifyConfig::default().seed ^ s.seed };
    let ids: Vec<u8> = if criteria.is_empty() { (1..=CRITERIA).collect() } else { criteria };
    let mut outcomes = Vec::new();
    for id in ids {
        outcomes.push(run_criterion(id, &cfg)?);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    let text = match s.format {
        Format::Json => to_json(&outcomes),
        Format::Csv => {
            let mut out = String::from("criterion,passed,seconds,title\n");
            for o in &outcomes {
                writeln!(out, "{},{},{:.3},\"{}\"", o.id, o.passed, o.seconds, o.title).expect("string write");
            }
            out
        }
    };
    let human: String = outcomes.iter().map(ToString::to_string).collect();
    // The readable report is the default; an explicit --format asks for data.
    let text = if s.format_explicit { text } else { human };
    let status = if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("criteria failing: {failed:?}")))
    };
    Ok((text, status))
}
