//! Batch front-end for `fayk-core`.
//!
//! Exit status: 0 when the command succeeds or the checked identity holds,
//! 1 when an identity is violated, 2 on usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fayk_core::arith::EXACT_Q_PRECISION;
use fayk_core::classify::{classify, format_complex, format_real, ClassifyError, ClassifyOptions, DisplayScalar};
use fayk_core::fay::{fay_residual_with_tol, reconstruct, FayError, Strategy, RESIDUAL_TOL};
use fayk_core::json::{parse, AnyLaurent, JsonError, JsonScalar};
use fayk_core::laurent::{BiLaurent, FaySeeds};
use fayk_core::ring::CoefficientRing;
use fayk_core::theta::{
    admissible_sample, kronecker_expand, nome_from_tau, trisecant_check, Cusp, FormalNome, NumericNome,
};
use fayk_core::zagier::{
    build_c, cusp_period_extract, period_report, period_residual, period_residual_weight, AnyCSeries, CSeries,
    ZagierError,
};
use fayk_core::{Complex64, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "FAYK_THREADS";

#[derive(Parser, Debug)]
#[command(name = "fayk", version, about = "Formal solutions of the Fay identity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Rational,
    Qseries,
    Complex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Pivot,
    Full,
}

#[derive(Args, Debug, Clone, Default)]
pub struct NomeArgs {
    /// Nome as `re[,im]` or `a+bi`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tau")]
    pub q: Option<String>,
    /// Point of the upper half plane as `re,im` or `a+bi`
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand the Kronecker function
    Expand {
        #[command(flatten)]
        nome: NomeArgs,
        #[arg(long, value_enum)]
        ring: Option<RingArg>,
        #[arg(long, default_value_t = 9, allow_hyphen_values = true)]
        order: i32,
        /// q-adic precision in qseries mode
        #[arg(long, default_value_t = EXACT_Q_PRECISION)]
        nq: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the Fay residual of a series
    CheckFay {
        input: PathBuf,
        /// Relative tolerance for numeric series
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild a solution from its five seed coefficients
    Reconstruct {
        /// a-10,a0-1,a10,a30,a50 as rationals `p/q`
        #[arg(long, allow_hyphen_values = true)]
        seeds: String,
        #[arg(long, default_value_t = 9)]
        order: i32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Pivot)]
        strategy: StrategyArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Name the family of a solution and its parameters
    Classify {
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Build the period generating series of a solution
    BuildC {
        input: PathBuf,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the period relations weight by weight
    CheckPeriods {
        /// A C-series, or a Laurent series to build one from
        input: PathBuf,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Cusp period bilinear form up to scalar
    ExtractPeriod {
        #[arg(long, default_value_t = 12)]
        k: u32,
        #[arg(long, allow_hyphen_values = true)]
        q1: String,
        #[arg(long, allow_hyphen_values = true)]
        q2: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Sample the theta-function trisecant identity
    Trisecant {
        #[command(flatten)]
        nome: NomeArgs,
        #[arg(long, value_enum)]
        ring: Option<RingArg>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

/// A parsed invocation together with the environment it runs in.
#[derive(Debug)]
pub struct JobConfig {
    pub command: Command,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    status: i32,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        status: EXIT_USAGE,
        msg: msg.into(),
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        usage(format!("malformed input: {e}"))
    }
}

type Res<T> = Result<T, Failure>;

/// Accepts `re`, `re,im` and `a+bi` forms.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let s = s.trim();
    if let Some((re, im)) = s.split_once(',') {
        let p = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a complex number"));
        return Ok(Complex64::new(p(re)?, p(im)?));
    }
    Complex64::from_str(s).map_err(|_| format!("`{s}` is not a complex number"))
}

fn parse_nome(args: &NomeArgs) -> Res<Option<Complex64>> {
    let q = match (&args.q, &args.tau) {
        (Some(q), _) => parse_complex(q).map_err(usage)?,
        (None, Some(t)) => {
            let tau = parse_complex(t).map_err(usage)?;
            if tau.im <= 0.0 {
                return Err(usage("tau must lie in the upper half plane"));
            }
            nome_from_tau(tau)
        }
        (None, None) => return Ok(None),
    };
    if !(q.norm() < 1.0) {
        return Err(usage(format!("nome {} is outside the unit disc", format_complex(q))));
    }
    Ok(Some(q))
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        JobConfig { command, threads: None }
    }

    /// Cross-field checks that clap cannot express.
    pub fn validate(&self) -> Result<(), String> {
        match &self.command {
            Command::Expand { nome, ring, order, .. } => {
                let q = parse_nome(nome).map_err(|f| f.msg)?;
                if *order < 1 {
                    return Err("--order must be at least 1".into());
                }
                match (ring, q) {
                    (Some(RingArg::Rational), Some(q)) if q != Complex64::new(0.0, 0.0) => {
                        Err("rational mode needs q = 0; use --ring complex".into())
                    }
                    (Some(RingArg::Qseries), Some(_)) => Err("qseries mode is formal in q; drop --q/--tau".into()),
                    _ => Ok(()),
                }
            }
            Command::Trisecant { nome, ring, samples, .. } => {
                if matches!(ring, Some(RingArg::Rational | RingArg::Qseries)) {
                    return Err("trisecant sampling is numeric only".into());
                }
                if *samples == 0 {
                    return Err("--samples must be positive".into());
                }
                parse_nome(nome).map(|_| ()).map_err(|f| f.msg)
            }
            Command::Reconstruct { order, .. } if *order < 5 => Err("--order must be at least 5".into()),
            _ => Ok(()),
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{v}`")),
        },
    }
}

/// Parse `argv` (program name first), run the job and collect its output.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return if status == EXIT_OK {
                Outcome { status, stdout: text, stderr: String::new() }
            } else {
                Outcome { status, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut job = JobConfig::new(cli.command);
    let fail = |msg: String| Outcome {
        status: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    };
    match threads_from_env() {
        Ok(t) => job.threads = t,
        Err(e) => return fail(e),
    }
    if let Err(e) = job.validate() {
        return fail(e);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = job.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return fail(e.to_string()),
    };
    let mut out = String::new();
    let result = pool.install(|| execute(&job.command, &mut out));
    match result {
        Ok(status) => Outcome { status, stdout: out, stderr: String::new() },
        Err(f) => Outcome {
            status: f.status,
            stdout: out,
            stderr: format!("error: {}\n", f.msg),
        },
    }
}

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_laurent(path: &Path) -> Res<AnyLaurent> {
    AnyLaurent::from_json(&read_json(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(v: &Value, output: &Option<PathBuf>, out: &mut String) -> Res<()> {
    let text = pretty(v);
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            out.push_str(&format!("wrote {}\n", path.display()));
        }
        None => out.push_str(&text),
    }
    Ok(())
}

fn execute(cmd: &Command, out: &mut String) -> Res<i32> {
    match cmd {
        Command::Expand { nome, ring, order, nq, output } => {
            let q = parse_nome(nome)?.unwrap_or_default();
            let ring = ring.unwrap_or(if q == Complex64::new(0.0, 0.0) { RingArg::Rational } else { RingArg::Complex });
            let expand_err = |e: fayk_core::theta::ThetaError| usage(e.to_string());
            let v = match ring {
                RingArg::Rational => kronecker_expand(&Cusp, *order).map_err(expand_err)?.to_json(),
                RingArg::Qseries => kronecker_expand(&FormalNome { precision: *nq }, *order)
                    .map_err(expand_err)?
                    .to_json(),
                RingArg::Complex => kronecker_expand(&NumericNome(q), *order).map_err(expand_err)?.to_json(),
            };
            emit(&v, output, out)?;
            Ok(EXIT_OK)
        }
        Command::CheckFay { input, tol, json } => {
            let tol = tol.unwrap_or(RESIDUAL_TOL);
            match read_laurent(input)? {
                AnyLaurent::Rational(f) => check_fay(&f, tol, *json, out),
                AnyLaurent::QSeries(f) => check_fay(&f, tol, *json, out),
                AnyLaurent::Complex(f) => check_fay(&f, tol, *json, out),
            }
        }
        Command::Reconstruct { seeds, order, strategy, output } => {
            let parts: Vec<&str> = seeds.split(',').map(str::trim).collect();
            if parts.len() != 5 {
                return Err(usage("--seeds needs five values a-10,a0-1,a10,a30,a50"));
            }
            let vals = parts
                .iter()
                .map(|p| Rational::from_str(p).map_err(|_| usage(format!("seed `{p}` is not a rational p/q"))))
                .collect::<Res<Vec<_>>>()?;
            let [a, b, c, d, e]: [Rational; 5] = vals.try_into().expect("five seeds");
            let strategy = match strategy {
                StrategyArg::Pivot => Strategy::Pivot,
                StrategyArg::Full => Strategy::Full,
            };
            match reconstruct(&FaySeeds::new(a, b, c, d, e), *order, strategy) {
                Ok(f) => {
                    emit(&f.to_json(), output, out)?;
                    Ok(EXIT_OK)
                }
                Err(err @ (FayError::Inconsistent { .. } | FayError::Underdetermined { .. })) => {
                    out.push_str(&format!("no solution with these seeds: {err}\n"));
                    Ok(EXIT_VIOLATED)
                }
                Err(err) => Err(usage(err.to_string())),
            }
        }
        Command::Classify { input, tol, json } => {
            let mut opts = ClassifyOptions::default();
            if let Some(t) = tol {
                opts.tol = *t;
            }
            match read_laurent(input)? {
                AnyLaurent::Rational(f) => run_classify(&f, &opts, *json, out),
                AnyLaurent::QSeries(f) => run_classify(&f, &opts, *json, out),
                AnyLaurent::Complex(f) => run_classify(&f, &opts, *json, out),
            }
        }
        Command::BuildC { input, kmax, output } => {
            let v = match read_laurent(input)? {
                AnyLaurent::Rational(f) => c_series(&f, *kmax)?.to_json(),
                AnyLaurent::QSeries(f) => c_series(&f, *kmax)?.to_json(),
                AnyLaurent::Complex(f) => c_series(&f, *kmax)?.to_json(),
            };
            emit(&v, output, out)?;
            Ok(EXIT_OK)
        }
        Command::CheckPeriods { input, kmax, tol, json } => {
            let v = read_json(input)?;
            let tol = tol.unwrap_or(RESIDUAL_TOL);
            let c = if v.get("weights").is_some() {
                AnyCSeries::from_json(&v)?
            } else {
                match AnyLaurent::from_json(&v)? {
                    AnyLaurent::Rational(f) => AnyCSeries::Rational(c_series(&f, *kmax)?),
                    AnyLaurent::QSeries(f) => AnyCSeries::QSeries(c_series(&f, *kmax)?),
                    AnyLaurent::Complex(f) => AnyCSeries::Complex(c_series(&f, *kmax)?),
                }
            };
            match c {
                AnyCSeries::Rational(c) => check_periods(&c, tol, *json, out),
                AnyCSeries::QSeries(c) => check_periods(&c, tol, *json, out),
                AnyCSeries::Complex(c) => check_periods(&c, tol, *json, out),
            }
        }
        Command::ExtractPeriod { k, q1, q2, output } => {
            let q1 = parse_complex(q1).map_err(usage)?;
            let q2 = parse_complex(q2).map_err(usage)?;
            let p = match cusp_period_extract(*k, q1, q2) {
                Ok(p) => p,
                Err(e @ ZagierError::DegenerateElimination(_)) => {
                    out.push_str(&format!("{e}\n"));
                    return Ok(EXIT_VIOLATED);
                }
                Err(e) => return Err(usage(e.to_string())),
            };
            let residual = period_residual_weight(&p.poly).max_magnitude();
            let sv = |x, y| {
                p.block_singular_values(x, y)
                    .iter()
                    .take(2)
                    .map(|s| format_real(*s))
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            out.push_str(&format!("weight: {k}\n"));
            out.push_str(&format!("mu: {}, {}\n", format_complex(p.mu[0]), format_complex(p.mu[1])));
            out.push_str(&format!("period residual: {}\n", format_real(residual)));
            out.push_str(&format!("singular values (even X, odd Y): {}\n", sv(0, 1)));
            out.push_str(&format!("singular values (odd X, even Y): {}\n", sv(1, 0)));
            out.push_str(&format!("singular values (odd X, odd Y): {}\n", sv(1, 1)));
            if let Some(path) = output {
                let numerator: Vec<Value> = p
                    .poly
                    .terms()
                    .map(|(i, j, c)| json!({"i": i, "j": j, "value": c.to_json()}))
                    .collect();
                let v = json!({
                    "k": k,
                    "mu": [p.mu[0].to_json(), p.mu[1].to_json()],
                    "numerator": numerator,
                });
                emit(&v, &Some(path.clone()), out)?;
            }
            Ok(EXIT_OK)
        }
        Command::Trisecant { nome, samples, seed, tol, .. } => {
            let q = parse_nome(nome)?.unwrap_or(Complex64::new(0.003, 0.0));
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let pts: Vec<_> = (0..*samples).map(|_| admissible_sample(q, &mut rng)).collect();
            let worst = trisecant_check(q, &pts).map_err(|e| usage(e.to_string()))?;
            out.push_str(&format!("nome: {}\n", format_complex(q)));
            out.push_str(&format!("samples: {samples}\n"));
            out.push_str(&format!("max relative residual: {}\n", format_real(worst)));
            let ok = worst <= *tol;
            out.push_str(if ok { "status: identity holds\n" } else { "status: identity violated\n" });
            Ok(if ok { EXIT_OK } else { EXIT_VIOLATED })
        }
    }
}

fn c_series<R: CoefficientRing>(f: &BiLaurent<R>, kmax: Option<u32>) -> Res<CSeries<R>> {
    let kmax = kmax.unwrap_or((f.order() + 1).max(0) as u32);
    build_c(f, kmax).map_err(|e| usage(e.to_string()))
}

fn check_fay<R: CoefficientRing>(f: &BiLaurent<R>, tol: f64, as_json: bool, out: &mut String) -> Res<i32> {
    let order = match f.min_degree() {
        Some(mu) => f.order() + mu,
        None => {
            out.push_str("max residual: 0\nstatus: identity holds\n");
            return Ok(EXIT_OK);
        }
    };
    let violated = |index: [i32; 4], detail: String, out: &mut String| {
        out.push_str(&format!("worst index: {index:?}\n{detail}\nstatus: identity violated\n"));
        Ok(EXIT_VIOLATED)
    };
    let residual = match fay_residual_with_tol(f, order, tol) {
        Ok(r) => r,
        Err(FayError::NonzeroRemainder { divisor, index, magnitude }) => {
            let index = index.map(|x| x as i32);
            let detail = format!("cleared form not divisible by {divisor} (remainder {})", format_real(magnitude));
            return violated(index, detail, out);
        }
        Err(e @ FayError::NegativeExponent { index }) => return violated(index, e.to_string(), out),
        Err(e) => return Err(usage(e.to_string())),
    };
    let report = residual.report(f.max_magnitude());
    let holds = if R::EXACT {
        report.worst_index.is_none()
    } else {
        report.relative <= tol
    };
    if as_json {
        let mut v = serde_json::to_value(&report).expect("plain struct");
        v["holds"] = json!(holds);
        out.push_str(&pretty(&v));
    } else {
        out.push_str(&format!("order: {}\n", report.order));
        out.push_str(&format!("max residual: {}\n", format_real(report.max_abs)));
        out.push_str(&format!("relative residual: {}\n", format_real(report.relative)));
        match report.worst_index {
            Some(i) => out.push_str(&format!("worst index: {i:?}\n")),
            None => out.push_str("worst index: none\n"),
        }
        out.push_str(if holds { "status: identity holds\n" } else { "status: identity violated\n" });
    }
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATED })
}

fn run_classify<R>(f: &BiLaurent<R>, opts: &ClassifyOptions, as_json: bool, out: &mut String) -> Res<i32>
where
    R: CoefficientRing + JsonScalar + DisplayScalar,
{
    match classify(f, opts) {
        Ok(class) => {
            if as_json {
                out.push_str(&pretty(&class.to_json()));
            } else {
                out.push_str(&format!("{class}\n"));
            }
            Ok(EXIT_OK)
        }
        Err(ClassifyError::NotAFaySolution { worst_index, detail }) => {
            match worst_index {
                Some(i) => out.push_str(&format!("not a Fay solution: {detail}\nworst index: {i:?}\n")),
                None => out.push_str(&format!("not a Fay solution: {detail}\n")),
            }
            Ok(EXIT_VIOLATED)
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn check_periods<R: CoefficientRing>(c: &CSeries<R>, tol: f64, as_json: bool, out: &mut String) -> Res<i32> {
    let residuals = period_residual(c);
    let report = period_report(&residuals);
    let holds = if R::EXACT {
        residuals.values().all(|r| r.is_zero())
    } else {
        report.iter().all(|r| r.max_s <= tol && r.max_u <= tol)
    };
    if as_json {
        out.push_str(&pretty(&json!({"weights": report, "holds": holds})));
    } else {
        for r in &report {
            out.push_str(&format!(
                "k={:<3} max|S|={} max|U|={}\n",
                r.k,
                format_real(r.max_s),
                format_real(r.max_u)
            ));
        }
        out.push_str(if holds { "status: relations hold\n" } else { "status: relations violated\n" });
    }
    Ok(if holds { EXIT_OK } else { EXIT_VIOLATED })
}
