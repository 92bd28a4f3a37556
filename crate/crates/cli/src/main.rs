//! `fcbsc`: b-symbol distances, function locality, code-length bounds and
//! function-correcting encoders from the shell.
//!
//! Exit codes: 0 success, 1 verification or property failure, 2 usage or
//! parse error, 3 search or enumeration cap, 4 construction hypothesis not met.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fcbsc::codes;
use fcbsc::encoders::{self, EncodingScheme};
use fcbsc::functions::{self, FunctionTable, WeightDistribution};
use fcbsc::report::{self, ReportConfig, Suite};
use fcbsc::{io, metric, CheckStatus, Code, Error, Word};
use serde_json::{json, Value};

use output::Format;

/// Directory for files the CLI writes when `--out` is not given.
const OUT_DIR_ENV: &str = "FCBSC_OUT_DIR";

const CAP_K: usize = 12;
const CAP_N_MAX: usize = 16;
const CAP_R_MAX: usize = 12;

#[derive(Parser)]
#[command(name = "fcbsc", version, about = "b-symbol metric, locality and function-correcting code tools")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Lift the default caps (k <= 12, n_max <= 16, r_max <= 12).
    #[arg(long, global = true)]
    unsafe_caps: bool,
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hamming and b-symbol distance between two bitstrings.
    Dist {
        x: String,
        y: String,
        #[arg(long)]
        b: usize,
        /// Also print both read vectors.
        #[arg(long)]
        read_vectors: bool,
    },
    /// Locality profile of a function and the locality checks that apply.
    Locality {
        #[command(flatten)]
        func: FunctionArgs,
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
    },
    /// Exact minimum code length with the bounds and constructions around it.
    Bounds {
        #[arg(long = "M", required_unless_present = "matrix")]
        m: Option<usize>,
        #[arg(long = "D", required_unless_present = "matrix")]
        d: Option<usize>,
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// Requirement matrix JSON file for the irregular length.
        #[arg(long, conflicts_with_all = ["m", "d"])]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = CAP_N_MAX)]
        n_max: usize,
    },
    /// Build an encoder, write it to a file and verify it.
    Encode {
        #[arg(value_enum)]
        construction: Construction,
        #[command(flatten)]
        func: FunctionArgs,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        /// Code file for the generic construction.
        #[arg(long)]
        code: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an encoding scheme file against a function exhaustively.
    Verify {
        #[arg(long)]
        scheme: PathBuf,
        #[command(flatten)]
        func: FunctionArgs,
    },
    /// Exact optimal redundancy by exhaustive search.
    Search {
        #[command(flatten)]
        func: FunctionArgs,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        b: usize,
        #[arg(long, default_value_t = CAP_R_MAX)]
        r_max: usize,
        /// Write the optimal scheme here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a batch of property checks over small instances.
    Report {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Smallest instance ranges, for a quick run.
        #[arg(long)]
        tiny: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Lambda4,
    Generic,
    DeltaParity,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Metric,
    Locality,
    Bounds,
    Encoders,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    /// Hamming weight on F_2^k.
    Weight,
    /// floor(w_b(u) / T) on F_2^k.
    Delta,
    Constant,
}

#[derive(Args)]
struct FunctionArgs {
    /// Truth table, JSON {"k","values"} or CSV lines "bitstring,label".
    #[arg(long, conflicts_with = "builtin")]
    table: Option<PathBuf>,
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "T")]
    threshold: Option<usize>,
}

struct Ctx {
    format: Format,
    unsafe_caps: bool,
    verbose: u8,
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

impl Ctx {
    fn cap(&self, what: &str, value: usize, cap: usize) -> Result<()> {
        if !self.unsafe_caps && value > cap {
            return Err(anyhow::Error::new(Error::CapExceeded { len: value, cap })
                .context(format!("{what}={value} above the default cap {cap}; pass --unsafe-caps to allow")));
        }
        Ok(())
    }

    fn emit(&self, value: &Value, table: impl FnOnce() -> String) -> Result<()> {
        print!("{}", output::render(self.format, value, table)?);
        Ok(())
    }

    fn log(&self, msg: impl FnOnce() -> String) {
        if self.verbose > 0 {
            eprintln!("{}", msg());
        }
    }
}

/// What a `FunctionArgs` resolved to; `family` is set for weight
/// distribution functions so the threshold checks can run.
struct Resolved {
    f: FunctionTable,
    family: Option<WeightDistribution>,
    name: String,
}

fn resolve_function(ctx: &Ctx, args: &FunctionArgs, b: usize) -> Result<Resolved> {
    if let Some(path) = &args.table {
        let text = read_file(path)?;
        let f = io::table_from_str(&text).with_context(|| format!("reading {}", path.display()))?;
        ctx.cap("k", f.k(), CAP_K)?;
        return Ok(Resolved {
            f,
            family: None,
            name: path.display().to_string(),
        });
    }
    let builtin = args.builtin.ok_or_else(|| usage("give --table FILE or --builtin"))?;
    let k = args.k.ok_or_else(|| usage("--k is required with --builtin"))?;
    if k == 0 {
        return Err(usage("k must be >= 1"));
    }
    ctx.cap("k", k, CAP_K)?;
    Ok(match builtin {
        Builtin::Weight => Resolved {
            f: FunctionTable::hamming_weight(k)?,
            family: if b == 1 { Some(WeightDistribution::new(1, 1, k)?) } else { None },
            name: format!("w_H on F_2^{k}"),
        },
        Builtin::Constant => Resolved {
            f: FunctionTable::constant(k)?,
            family: None,
            name: format!("constant on F_2^{k}"),
        },
        Builtin::Delta => {
            let threshold = args.threshold.ok_or_else(|| usage("--T is required with --builtin delta"))?;
            if threshold == 0 {
                return Err(usage("T must be >= 1"));
            }
            let wd = WeightDistribution::new(threshold, b, k)?;
            Resolved {
                f: functions::make_weight_distribution(&wd)?,
                family: Some(wd),
                name: format!("Delta_{threshold}^{b} on F_2^{k}"),
            }
        }
    })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let tmp = path.with_extension("tmp-write");
    fs::write(&tmp, text).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move into {}", path.display()))?;
    Ok(())
}

fn out_path(explicit: &Option<PathBuf>, default_name: &str) -> Result<PathBuf> {
    if let Some(p) = explicit {
        return Ok(p.clone());
    }
    let dir = std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    Ok(dir.join(default_name))
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        Err(usage(format!("{name} must be >= 1")))
    } else {
        Ok(())
    }
}

fn cmd_dist(ctx: &Ctx, x: &str, y: &str, b: usize, read_vectors: bool) -> Result<u8> {
    positive("b", b)?;
    let x: Word = x.parse()?;
    let y: Word = y.parse()?;
    let rel = metric::check_distance_relation(&x, &y, b)?;
    let mut value = serde_json::to_value(&rel)?;
    value["x"] = json!(x);
    value["y"] = json!(y);
    if read_vectors {
        value["read_vector_x"] = serde_json::to_value(metric::read_vector(&x, b)?)?;
        value["read_vector_y"] = serde_json::to_value(metric::read_vector(&y, b)?)?;
    }
    ctx.emit(&value, || {
        let mut s = format!(
            "x={x} y={y} n={} b={b}\nd_H={}\nd_b={}\ncase={:?} bounds=[{}, {}] {}\n",
            rel.n,
            rel.d_hamming,
            rel.d_b,
            rel.case,
            rel.lower,
            rel.upper,
            if rel.pass { "consistent" } else { "VIOLATED" }
        );
        if read_vectors {
            for (name, w) in [("x", &x), ("y", &y)] {
                let rv = metric::read_vector(w, b).expect("checked above");
                let windows: Vec<String> = rv.windows.iter().map(|w| w.to_string()).collect();
                s.push_str(&format!("pi_{b}({name}) = ({})\n", windows.join(", ")));
            }
        }
        s
    })?;
    Ok(if rel.pass { 0 } else { 1 })
}

fn cmd_locality(ctx: &Ctx, func: &FunctionArgs, rho: usize, b: usize) -> Result<u8> {
    positive("b", b)?;
    let r = resolve_function(ctx, func, b)?;
    let report = functions::check_locality_theorems(&r.f, rho, b, r.family.as_ref())?;
    let mut value = serde_json::to_value(&report)?;
    value["function"] = json!(r.name);
    ctx.emit(&value, || {
        let mut s = format!(
            "function: {}\nrho={rho} b={b}\nlambda_s={}\nwitness={}\n",
            r.name, report.lambda_s, report.witness
        );
        for c in &report.checks {
            s.push_str(&format!("{:<12} {:<22} {}  [{}]\n", c.status.as_str(), c.id, c.claim, c.detail));
        }
        s
    })?;
    Ok(if report.all_ok() { 0 } else { 1 })
}

fn bound_row(name: &str, value: Value, status: &str, detail: String) -> Value {
    json!({ "name": name, "value": value, "status": status, "detail": detail })
}

fn cmd_bounds(ctx: &Ctx, m: Option<usize>, d: Option<usize>, b: usize, matrix: Option<&Path>, n_max: usize) -> Result<u8> {
    positive("b", b)?;
    ctx.cap("n_max", n_max, CAP_N_MAX)?;
    let mut rows = Vec::new();
    let mut code = 0;
    if let Some(path) = matrix {
        let demands = io::matrix_from_json(&read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
        let exact = codes::exact_min_length_irregular(&demands, b, n_max)?;
        let status = if exact.is_exact() { "exact" } else { "cap" };
        let detail = if exact.vacuous {
            "zero matrix: no parity needed".to_string()
        } else {
            format!("witness [{}]", join_words(&exact.witness))
        };
        rows.push(bound_row("exact", json!(exact.value), status, detail));
        if !exact.is_exact() {
            code = 3;
        }
        if demands.m() >= 2 {
            let p = codes::generalized_plotkin_lower(&demands)?;
            let status = if p.extrapolated { "lower-bound-extrapolated" } else { "lower-bound" };
            let sound = exact.value.is_none_or(|n| n as u64 >= p.ceiling || exact.vacuous);
            rows.push(bound_row(
                "generalized-plotkin",
                json!(p.ceiling),
                status,
                format!("{}/{}{}", p.numerator, p.denominator, if sound { "" } else { " EXCEEDS exact" }),
            ));
            if !sound {
                code = 1;
            }
        }
    } else {
        let (m, d) = (m.expect("required by clap"), d.expect("required by clap"));
        if m < 2 {
            return Err(usage("M must be >= 2"));
        }
        positive("D", d)?;
        let exact = codes::exact_min_length(m, d, b, n_max)?;
        let status = if exact.is_exact() { "exact" } else { "cap" };
        rows.push(bound_row("exact", json!(exact.value), status, format!("witness [{}]", join_words(&exact.witness))));
        if !exact.is_exact() {
            code = 3;
        }
        if let Some(n) = exact.value {
            match codes::plotkin_bound_b(n, d, b) {
                Ok(cap) => rows.push(bound_row(
                    "plotkin-cap",
                    json!(cap),
                    if m <= cap { "consistent" } else { "violated" },
                    format!("A_b({n},{d}) <= {cap}"),
                )),
                Err(e) if e.is_hypothesis() => rows.push(bound_row("plotkin-cap", Value::Null, "inapplicable", e.to_string())),
                Err(e) => return Err(e.into()),
            }
            if n > b {
                if let Ok(cap) = codes::plotkin_bound_b(n - 1, d, b) {
                    rows.push(bound_row(
                        "plotkin-below",
                        json!(cap),
                        if m > cap { "certifies-lower" } else { "no-certificate" },
                        format!("A_b({},{d}) <= {cap}", n - 1),
                    ));
                }
            }
        }
        for (name, built) in constructions(m, d, b) {
            let ok = built.len() >= m && built.min_distance().is_none_or(|x| x >= d);
            let len = built.n();
            let better = exact.value.is_none_or(|n| len >= n);
            rows.push(bound_row(
                name,
                json!(len),
                if ok && better { "upper-bound" } else { "invalid" },
                format!(
                    "{} words, min b-distance {}",
                    built.len(),
                    built.min_distance().map_or("-".to_string(), |x| x.to_string())
                ),
            ));
            if !(ok && better) {
                code = 1;
            }
        }
        if b > 1 && d % 2 == 0 {
            let r = codes::nb_le_nh_check(m, d / 2, b, n_max)?;
            rows.push(bound_row("b-symbol-vs-hamming", Value::Null, r.status.as_str(), r.detail.clone()));
            if r.status == CheckStatus::Fail {
                code = 1;
            }
        }
    }
    let value = Value::Array(rows);
    ctx.emit(&value, || {
        value
            .as_array()
            .expect("rows")
            .iter()
            .map(|r| {
                format!(
                    "{:<22} {:<8} {:<26} {}\n",
                    r["name"].as_str().unwrap_or(""),
                    match &r["value"] {
                        Value::Null => "-".to_string(),
                        v => v.to_string(),
                    },
                    r["status"].as_str().unwrap_or(""),
                    r["detail"].as_str().unwrap_or("")
                )
            })
            .collect()
    })?;
    Ok(code)
}

/// Explicit codes with `>= m` words and b-distance `>= d`.
fn constructions(m: usize, d: usize, b: usize) -> Vec<(&'static str, Code)> {
    let mut out = Vec::new();
    if m == 2 && d >= b {
        if let (Ok(zero), Ok(ones)) = (Word::zero(d), Word::new(u64::MAX >> (64 - d.min(64)), d)) {
            if let Ok(c) = Code::new(vec![zero, ones], b) {
                out.push(("repetition", c));
            }
        }
    }
    if b == 1 && d.is_multiple_of(2) && m * d / 2 <= 64 {
        if let Ok(c) = codes::staircase_code(m, d / 2) {
            out.push(("staircase", c));
        }
    }
    if d.is_multiple_of(2) && b < 32 && m <= 1 << b {
        if let Ok(c) = codes::power_repetition_code(b, d / 2) {
            out.push(("power-repetition", c));
        }
    }
    out
}

fn join_words(words: &[Word]) -> String {
    words.iter().map(Word::to_string).collect::<Vec<_>>().join(" ")
}

fn verdict_table(scheme: &EncodingScheme, v: &encoders::Verdict) -> String {
    let mut s = format!(
        "k={} r={} t={} b={} provenance={}\n{} ({} pairs checked)\n",
        scheme.k(),
        scheme.r(),
        scheme.t(),
        scheme.b(),
        scheme.provenance(),
        if v.pass { "pass" } else { "FAIL" },
        v.pairs_checked
    );
    if let Some(w) = &v.witness {
        s.push_str(&format!("witness u={} v={} d_b={} < {}\n", w.u, w.v, w.distance, w.required));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_encode(
    ctx: &Ctx,
    construction: Construction,
    func: &FunctionArgs,
    t: usize,
    b: usize,
    code_path: Option<&Path>,
    out: &Option<PathBuf>,
) -> Result<u8> {
    positive("t", t)?;
    positive("b", b)?;
    let (scheme, f) = match construction {
        Construction::Lambda4 => {
            let r = resolve_function(ctx, func, b)?;
            (encoders::encoder_lambda4(&r.f, t, b)?, r.f)
        }
        Construction::Generic => {
            let r = resolve_function(ctx, func, b)?;
            let path = code_path.ok_or_else(|| usage("--code FILE is required for the generic construction"))?;
            let code = io::code_from_str(&read_file(path)?).with_context(|| format!("reading {}", path.display()))?;
            (encoders::encoder_generic(&r.f, t, b, &code)?, r.f)
        }
        Construction::DeltaParity => {
            if func.table.is_some() {
                return Err(usage("delta-parity builds its own function; give --T and --k"));
            }
            let k = func.k.ok_or_else(|| usage("--k is required"))?;
            let threshold = func.threshold.ok_or_else(|| usage("--T is required"))?;
            ctx.cap("k", k, CAP_K)?;
            positive("T", threshold)?;
            positive("k", k)?;
            let scheme = encoders::encoder_delta_parity(threshold, t, b, k)?;
            let f = functions::make_weight_distribution(&WeightDistribution::new(threshold, b, k)?)?;
            (scheme, f)
        }
    };
    let path = out_path(out, "scheme.json")?;
    write_atomic(&path, &io::scheme_to_json(&scheme))?;
    ctx.log(|| format!("wrote {}", path.display()));
    let verdict = encoders::verify_fcbsc(&scheme, &f)?;
    let value = json!({
        "scheme": path.display().to_string(),
        "k": scheme.k(),
        "r": scheme.r(),
        "t": t,
        "b": b,
        "provenance": scheme.provenance(),
        "verdict": verdict,
    });
    ctx.emit(&value, || format!("wrote {}\n{}", path.display(), verdict_table(&scheme, &verdict)))?;
    Ok(if verdict.pass { 0 } else { 1 })
}

fn cmd_verify(ctx: &Ctx, scheme_path: &Path, func: &FunctionArgs) -> Result<u8> {
    let scheme = io::scheme_from_json(&read_file(scheme_path)?).with_context(|| format!("reading {}", scheme_path.display()))?;
    let r = resolve_function(ctx, func, scheme.b())?;
    let verdict = encoders::verify_fcbsc(&scheme, &r.f)?;
    ctx.emit(&serde_json::to_value(&verdict)?, || verdict_table(&scheme, &verdict))?;
    Ok(if verdict.pass { 0 } else { 1 })
}

fn cmd_search(ctx: &Ctx, func: &FunctionArgs, t: usize, b: usize, r_max: usize, out: &Option<PathBuf>) -> Result<u8> {
    positive("t", t)?;
    positive("b", b)?;
    ctx.cap("r_max", r_max, CAP_R_MAX)?;
    let r = resolve_function(ctx, func, b)?;
    let res = encoders::optimal_redundancy_search(&r.f, t, b, r_max)?;
    if let (Some(scheme), Some(_)) = (&res.scheme, out) {
        let path = out_path(out, "scheme.json")?;
        write_atomic(&path, &io::scheme_to_json(scheme))?;
        ctx.log(|| format!("wrote {}", path.display()));
    }
    let value = json!({
        "function": r.name,
        "t": t,
        "b": b,
        "value": res.value,
        "status": res.status,
        "r_max": res.r_max,
        "nodes": res.nodes,
    });
    ctx.emit(&value, || match res.value {
        Some(v) => format!("r_f^b(k,t) = {v}  ({}, t={t}, b={b})", r.name),
        None => format!("r_f^b(k,t) > {r_max}  (search cap reached)"),
    })?;
    Ok(if res.value.is_some() { 0 } else { 3 })
}

fn cmd_report(ctx: &Ctx, suite: SuiteArg, kmax: Option<usize>, nmax: Option<usize>, tiny: bool) -> Result<u8> {
    let base = if tiny { ReportConfig::TINY } else { ReportConfig::DEFAULT };
    let cfg = ReportConfig {
        kmax: kmax.unwrap_or(base.kmax),
        nmax: nmax.unwrap_or(base.nmax),
    };
    ctx.cap("kmax", cfg.kmax, CAP_K)?;
    ctx.cap("nmax", cfg.nmax, CAP_N_MAX)?;
    let suite = match suite {
        SuiteArg::Metric => Suite::Metric,
        SuiteArg::Locality => Suite::Locality,
        SuiteArg::Bounds => Suite::Bounds,
        SuiteArg::Encoders => Suite::Encoders,
        SuiteArg::All => Suite::All,
    };
    let rows = report::run_suite(suite, &cfg)?;
    let overall = report::overall(&rows);
    ctx.emit(&serde_json::to_value(&rows)?, || {
        let mut s: String = rows.iter().map(|r| format!("{r}\n")).collect();
        s.push_str(&format!("overall: {}\n", overall.as_str()));
        s
    })?;
    Ok(match overall {
        CheckStatus::Fail => 1,
        CheckStatus::Unknown => 3,
        _ => 0,
    })
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx {
        format: cli.format,
        unsafe_caps: cli.unsafe_caps,
        verbose: cli.verbose,
    };
    match &cli.command {
        Command::Dist { x, y, b, read_vectors } => cmd_dist(&ctx, x, y, *b, *read_vectors),
        Command::Locality { func, rho, b } => cmd_locality(&ctx, func, *rho, *b),
        Command::Bounds { m, d, b, matrix, n_max } => cmd_bounds(&ctx, *m, *d, *b, matrix.as_deref(), *n_max),
        Command::Encode {
            construction,
            func,
            t,
            b,
            code,
            out,
        } => cmd_encode(&ctx, *construction, func, *t, *b, code.as_deref(), out),
        Command::Verify { scheme, func } => cmd_verify(&ctx, scheme, func),
        Command::Search { func, t, b, r_max, out } => cmd_search(&ctx, func, *t, *b, *r_max, out),
        Command::Report { suite, kmax, nmax, tiny } => cmd_report(&ctx, *suite, *kmax, *nmax, *tiny),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(e) if e.is_cap() => 3,
        Some(e) if e.is_hypothesis() => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
