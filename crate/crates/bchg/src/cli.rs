//! The `bchg` command line: evaluation, classification, c-function, boundedness, catalog, scans
//! and the verification suites.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input or a domain error,
//! 3 a numerical failure. Errors are printed to stderr as a JSON object.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{is_bounded, run_suite, SuiteConfig};
use crate::cfunc::{b0_nonsingular, c_function};
use crate::error::{Error, Result};
use crate::evaluator::{f_deformed, g_deformed, EvalOptions, Method};
use crate::multiplicity::catalog::{catalog, lookup, CatalogEntry};
use crate::multiplicity::{classify, deform, ell_range, rho, rho_hull, Deformation, Multiplicity};
use crate::rootsys::{to_complex, RootSystem};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "BCHG_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bchg", version, about = "Hypergeometric functions for BC-type root systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum MethodArg {
    Auto,
    Series,
    Ode,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Series => Method::Series,
            MethodArg::Ode => Method::Ode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FunctionArg {
    F,
    G,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Args, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunConfig {
    /// Rank r; inferred from --lambda or --x when omitted.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Squared length of the long roots.
    #[arg(long = "p", default_value_t = 2.0)]
    pub long_norm: f64,
    /// Multiplicity m_s,m_m,m_l (or m_s,m_l in rank one).
    #[arg(long, allow_hyphen_values = true)]
    pub mult: Option<String>,
    /// Deformation ell,ellTilde.
    #[arg(long, allow_hyphen_values = true)]
    pub deform: Option<String>,
    /// Spectral parameter: comma-separated "a+bi" entries, or rho, rho-ell, k*rho.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Point x, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Initial series truncation height.
    #[arg(long, default_value_t = 60)]
    pub trunc: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; falls back to BCHG_THREADS, then all cores.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate F (or G) at one point.
    Eval {
        #[command(flatten)]
        cfg: RunConfig,
        #[arg(long, value_enum, default_value_t = FunctionArg::F)]
        function: FunctionArg,
    },
    /// Print the multiplicity sets containing m and (ell_min, ell_max).
    Classify {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Print c(m; lambda) and whether the leading asymptotic coefficient is nonzero.
    Cfun {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// Boundedness verdict from the convex hull criterion.
    Bounded {
        #[command(flatten)]
        cfg: RunConfig,
    },
    /// List or look up catalog entries.
    Catalog {
        #[command(flatten)]
        cfg: RunConfig,
        /// Family name, e.g. "sp(2,1)", "SU(2,4)", "so(7,3)".
        #[arg(long)]
        name: Option<String>,
        /// K-type index for sp(p,1), s for so(2r,1).
        #[arg(long)]
        n: Option<usize>,
        /// K-type case for so(p,q).
        #[arg(long)]
        case: Option<u8>,
        /// Line bundle parameter for Hermitian spaces.
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<f64>,
    },
    /// Evaluate along a ray from the origin or on a box grid.
    Scan {
        #[command(flatten)]
        cfg: RunConfig,
        #[arg(long, value_enum, default_value_t = FunctionArg::F)]
        function: FunctionArg,
        /// Ray direction (points t * dir / |dir|).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "box_range")]
        ray: Option<String>,
        /// Largest t on the ray.
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        /// Box lo,hi applied to every coordinate.
        #[arg(long = "box", allow_hyphen_values = true)]
        box_range: Option<String>,
        /// Intervals per ray or per box axis.
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Run a verification suite; exits with 1 if any check fails.
    Verify {
        #[command(flatten)]
        cfg: RunConfig,
        /// estimates, engines, bounded or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Samples per estimate check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Samples per boundedness probe check.
        #[arg(long, default_value_t = 50)]
        probes: usize,
    },
}

impl Command {
    pub fn config(&self) -> &RunConfig {
        match self {
            Command::Eval { cfg, .. }
            | Command::Classify { cfg }
            | Command::Cfun { cfg }
            | Command::Bounded { cfg }
            | Command::Catalog { cfg, .. }
            | Command::Scan { cfg, .. }
            | Command::Verify { cfg, .. } => cfg,
        }
    }
}

impl RunConfig {
    /// The flags that reproduce this configuration, in a fixed order with defaults spelled out.
    pub fn canonical(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut push = |k: &str, val: String| {
            v.push(format!("--{k}"));
            v.push(val);
        };
        if let Some(r) = self.rank {
            push("rank", r.to_string());
        }
        push("p", self.long_norm.to_string());
        for (k, val) in [("mult", &self.mult), ("deform", &self.deform), ("lambda", &self.lambda), ("x", &self.x)] {
            if let Some(s) = val {
                push(k, s.replace(' ', ""));
            }
        }
        push("method", format!("{:?}", self.method).to_lowercase());
        push("trunc", self.trunc.to_string());
        push("tol", format!("{:e}", self.tol));
        push("seed", self.seed.to_string());
        if let Some(o) = &self.out {
            push("out", o.display().to_string());
        }
        push("format", format!("{:?}", self.format).to_lowercase());
        if let Some(t) = self.threads {
            push("threads", t.to_string());
        }
        v
    }

    fn eval_options(&self) -> EvalOptions {
        EvalOptions { method: self.method.into(), tol: self.tol, height: self.trunc }
    }

    fn mult(&self) -> Result<Multiplicity> {
        let s = self.mult.as_deref().ok_or_else(|| Error::Invalid("--mult is required".into()))?;
        let v = parse_reals(s)?;
        match v.as_slice() {
            [a, b, c] => Ok(Multiplicity::new(*a, *b, *c)),
            [a, c] => Ok(Multiplicity::new(*a, 0.0, *c)),
            _ => Err(Error::Invalid(format!("--mult expects m_s,m_m,m_l, got {s:?}"))),
        }
    }

    fn deformation(&self) -> Result<Option<Deformation>> {
        let Some(s) = self.deform.as_deref() else { return Ok(None) };
        match parse_reals(s)?.as_slice() {
            [a] => Ok(Some(Deformation::new(*a, 0.0))),
            [a, b] => Ok(Some(Deformation::new(*a, *b))),
            _ => Err(Error::Invalid(format!("--deform expects ell,ellTilde, got {s:?}"))),
        }
    }

    fn x(&self) -> Result<Option<Vec<f64>>> {
        self.x.as_deref().map(parse_reals).transpose()
    }

    /// The rank from `--rank`, else from the length of `--lambda` or `--x`, else 1.
    fn rank(&self) -> Result<usize> {
        if let Some(r) = self.rank {
            return Ok(r);
        }
        if let Some(l) = self.lambda.as_deref() {
            if !is_symbolic(l) {
                return Ok(l.split(',').count());
            }
        }
        Ok(self.x()?.map_or(1, |x| x.len()))
    }

    fn root_system(&self) -> Result<RootSystem> {
        RootSystem::new(self.rank()?, self.long_norm)
    }

    fn lambda(&self, rs: &RootSystem, m: &Multiplicity, d: Option<Deformation>) -> Result<Vec<Complex64>> {
        let s = self.lambda.as_deref().ok_or_else(|| Error::Invalid("--lambda is required".into()))?;
        let lambda = parse_lambda(s, rs, m, d)?;
        if lambda.len() != rs.rank() {
            return Err(Error::Invalid(format!("--lambda has {} entries, rank is {}", lambda.len(), rs.rank())));
        }
        Ok(lambda)
    }

    fn point(&self, rs: &RootSystem) -> Result<Vec<f64>> {
        let x = self.x()?.ok_or_else(|| Error::Invalid("--x is required".into()))?;
        if x.len() != rs.rank() {
            return Err(Error::Invalid(format!("--x has {} entries, rank is {}", x.len(), rs.rank())));
        }
        Ok(x)
    }
}

fn is_symbolic(s: &str) -> bool {
    s.trim().ends_with("rho") || s.trim().ends_with("rho-ell")
}

pub fn parse_reals(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("not a number: {t:?}"))))
        .collect()
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (exponents allowed in either part).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Invalid(format!("not a complex number: {s:?}"));
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

/// `rho` is the hull vector (`ρ(m)`, or `ρ(m(2ℓ̃))` under a deformation), `rho-ell` is
/// `ρ(m(ℓ,ℓ̃))`, `k*rho` scales either.
pub fn parse_lambda(s: &str, rs: &RootSystem, m: &Multiplicity, d: Option<Deformation>) -> Result<Vec<Complex64>> {
    let t = s.trim();
    if is_symbolic(t) {
        let (k, what) = match t.split_once('*') {
            Some((k, w)) => (k.trim().parse::<f64>().map_err(|_| Error::Invalid(format!("bad factor in {s:?}")))?, w.trim()),
            None => (1.0, t),
        };
        let v = match (what, d) {
            ("rho", None) | ("rho-ell", None) => rho(rs, m),
            ("rho", Some(d)) => rho_hull(rs, m, d),
            ("rho-ell", Some(d)) => rho(rs, &deform(m, d)),
            _ => return Err(Error::Invalid(format!("cannot parse lambda {s:?}"))),
        };
        return Ok(to_complex(&v.iter().map(|c| c * k).collect::<Vec<_>>()));
    }
    t.split(',').map(parse_complex).collect()
}

fn init_threads(cfg: &RunConfig) -> Result<()> {
    let n = match cfg.threads {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("{THREADS_ENV}={v:?} is not a count")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn sink(cfg: &RunConfig) -> Result<Box<dyn Write>> {
    match &cfg.out {
        Some(p) => {
            let f = File::create(p).map_err(|e| Error::Invalid(format!("cannot create {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Invalid(format!("write failed: {e}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Invalid(e.to_string()))
}

/// Shortest round-trip form, switching to an exponent for very small or large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn fmt_c(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", num(z.re), num(-z.im))
    } else {
        format!("{}+{}i", num(z.re), num(z.im))
    }
}

/// One evaluated point; the JSON form of `eval` and `scan`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PointRow {
    pub id: usize,
    pub function: FunctionArg,
    pub m: Multiplicity,
    pub deformation: Deformation,
    pub lambda: Vec<Complex64>,
    pub x: Vec<f64>,
    pub value: Complex64,
    pub method: Method,
    pub err_est: f64,
}

/// Writes rows with the fixed column set
/// `id, m_s, m_m, m_l, ell, ellTilde, lambda_re_j…, lambda_im_j…, x_j…, value_re, value_im, method, err_est`.
pub fn write_point_csv<W: Write>(out: W, rank: usize, rows: &[PointRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let e = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
    let mut header: Vec<String> = ["id", "m_s", "m_m", "m_l", "ell", "ellTilde"].map(String::from).to_vec();
    header.extend((1..=rank).map(|j| format!("lambda_re_{j}")));
    header.extend((1..=rank).map(|j| format!("lambda_im_{j}")));
    header.extend((1..=rank).map(|j| format!("x_{j}")));
    header.extend(["value_re", "value_im", "method", "err_est"].map(String::from));
    w.write_record(&header).map_err(e)?;
    for r in rows {
        let mut rec = vec![
            r.id.to_string(),
            num(r.m.short),
            num(r.m.middle),
            num(r.m.long),
            num(r.deformation.ell),
            num(r.deformation.ell_tilde),
        ];
        rec.extend(r.lambda.iter().map(|z| num(z.re)));
        rec.extend(r.lambda.iter().map(|z| num(z.im)));
        rec.extend(r.x.iter().map(|&v| num(v)));
        rec.extend([num(r.value.re), num(r.value.im), r.method.label().to_string(), num(r.err_est)]);
        w.write_record(&rec).map_err(e)?;
    }
    w.flush().map_err(io_err)
}

fn point_text(r: &PointRow) -> String {
    let name = match r.function {
        FunctionArg::F => "F",
        FunctionArg::G => "G",
    };
    format!(
        "{name}(x={:?}) = {}  method={} err_est={:.3e}\n",
        r.x,
        fmt_c(r.value),
        r.method.label(),
        r.err_est
    )
}

#[allow(clippy::too_many_arguments)]
fn evaluate(
    rs: &RootSystem,
    m: &Multiplicity,
    d: Deformation,
    lambda: &[Complex64],
    x: &[f64],
    function: FunctionArg,
    opts: &EvalOptions,
    id: usize,
) -> Result<PointRow> {
    let r = match function {
        FunctionArg::F => f_deformed(rs, m, d, lambda, x, opts)?,
        FunctionArg::G => g_deformed(rs, m, d, lambda, x, opts)?,
    };
    Ok(PointRow {
        id,
        function,
        m: m.for_rank(rs.rank()),
        deformation: d,
        lambda: lambda.to_vec(),
        x: x.to_vec(),
        value: r.value,
        method: r.method,
        err_est: r.err_est,
    })
}

fn write_points(cfg: &RunConfig, rank: usize, rows: &[PointRow]) -> Result<()> {
    let mut out = sink(cfg)?;
    match cfg.format {
        Format::Json => out.write_all(to_json(&rows)?.as_bytes()).map_err(io_err)?,
        Format::Csv => write_point_csv(&mut out, rank, rows)?,
        Format::Text => {
            for r in rows {
                out.write_all(point_text(r).as_bytes()).map_err(io_err)?;
            }
        }
    }
    out.flush().map_err(io_err)
}

fn cmd_eval(cfg: &RunConfig, function: FunctionArg) -> Result<i32> {
    let rs = cfg.root_system()?;
    let m = cfg.mult()?;
    let d = cfg.deformation()?;
    let lambda = cfg.lambda(&rs, &m, d)?;
    let x = cfg.point(&rs)?;
    let row = evaluate(&rs, &m, d.unwrap_or_default(), &lambda, &x, function, &cfg.eval_options(), 0)?;
    if cfg.format == Format::Json {
        let mut out = sink(cfg)?;
        out.write_all(to_json(&row)?.as_bytes()).map_err(io_err)?;
        out.flush().map_err(io_err)?;
    } else {
        write_points(cfg, rs.rank(), &[row])?;
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyOut {
    m: Multiplicity,
    rank: usize,
    sets: Vec<&'static str>,
    ell_range: [f64; 2],
    rho: Vec<f64>,
}

fn cmd_classify(cfg: &RunConfig) -> Result<i32> {
    let rs = cfg.root_system()?;
    let m = cfg.mult()?.for_rank(rs.rank());
    let (lo, hi) = ell_range(&m);
    let c = ClassifyOut {
        m,
        rank: rs.rank(),
        sets: classify(&m, rs.rank()).into_iter().map(|s| s.label()).collect(),
        ell_range: [lo, hi],
        rho: rho(&rs, &m),
    };
    let text = match cfg.format {
        Format::Json => to_json(&c)?,
        Format::Csv => format!("m_s,m_m,m_l,rank,sets,ell_min,ell_max\n{},{},{},{},{},{lo},{hi}\n", m.short, m.middle, m.long, c.rank, c.sets.join(" ")),
        Format::Text => format!("{}; ell_range=[{lo}, {hi}]\n", c.sets.join(" ")),
    };
    let mut out = sink(cfg)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct CfunOut {
    m: Multiplicity,
    lambda: Vec<Complex64>,
    /// `null` at a pole.
    c: Option<Complex64>,
    log_abs: f64,
    order: i32,
    pole_hits: u32,
    zero: bool,
    /// `null` when the criterion does not apply (`m_s = 0`).
    b0_nonsingular: Option<bool>,
}

fn cmd_cfun(cfg: &RunConfig) -> Result<i32> {
    let rs = cfg.root_system()?;
    let m = cfg.mult()?.for_rank(rs.rank());
    let lambda = cfg.lambda(&rs, &m, None)?;
    let c = c_function(&rs, &m, &lambda)?;
    let b0 = match b0_nonsingular(&rs, &m, &lambda) {
        Ok(b) => Some(b),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let o = CfunOut {
        m,
        lambda: lambda.clone(),
        c: if c.is_pole() { None } else { Some(c.value()) },
        log_abs: c.log_scale(),
        order: c.order,
        pole_hits: c.pole_hits,
        zero: c.is_zero(),
        b0_nonsingular: b0,
    };
    let b0s = b0.map_or("n/a".to_string(), |b| b.to_string());
    let text = match cfg.format {
        Format::Json => to_json(&o)?,
        Format::Csv => format!(
            "c_re,c_im,order,pole_hits,b0_nonsingular\n{},{},{},{},{b0s}\n",
            o.c.map_or(f64::INFINITY, |z| z.re),
            o.c.map_or(0.0, |z| z.im),
            o.order,
            o.pole_hits
        ),
        Format::Text => {
            let v = match o.c {
                None => "pole".to_string(),
                Some(z) => fmt_c(z),
            };
            format!("c(m; lambda) = {v}  order={} pole_hits={}  b0_nonsingular={b0s}\n", o.order, o.pole_hits)
        }
    };
    let mut out = sink(cfg)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(0)
}

fn cmd_bounded(cfg: &RunConfig) -> Result<i32> {
    let rs = cfg.root_system()?;
    let m = cfg.mult()?;
    let d = cfg.deformation()?;
    let lambda = cfg.lambda(&rs, &m, d)?;
    let q = is_bounded(&rs, &m, &lambda, d);
    let text = match cfg.format {
        Format::Json => to_json(&q)?,
        Format::Csv => format!(
            "verdict,in_hull,hypotheses_ok,advisory,hull_vector\n{},{},{},{},{}\n",
            q.verdict.map_or("none".into(), |v| format!("{v:?}").to_lowercase()),
            q.in_hull,
            q.hypotheses_ok,
            q.advisory,
            q.hull_vector.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
        ),
        Format::Text => {
            let v = q.verdict.map_or("no verdict".into(), |v| format!("{v:?}").to_lowercase());
            format!(
                "{v}{}: hull vector {:?}, Re lambda in hull: {}; {}\n",
                if q.advisory { " (advisory)" } else { "" },
                q.hull_vector,
                q.in_hull,
                q.note
            )
        }
    };
    let mut out = sink(cfg)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(0)
}

fn catalog_line(e: &CatalogEntry) -> String {
    let b = e.base;
    let s = e.sigma_tau;
    format!(
        "{:<24} r={} base=({}, {}, {}) ell={} ellTilde={} deformed=({}, {}, {}) rho={:?} ({:?}) mirror={}\n",
        e.name,
        e.rank,
        b.short,
        b.middle,
        b.long,
        e.deform.ell,
        e.deform.ell_tilde,
        s.short,
        s.middle,
        s.long,
        e.rho,
        e.rho_basis,
        e.mirror_ell
    )
}

fn cmd_catalog(cfg: &RunConfig, name: Option<&str>, n: Option<usize>, case: Option<u8>, ell: Option<f64>) -> Result<i32> {
    let entries = match name {
        Some(nm) => vec![lookup(nm, n, case, ell)?],
        None => catalog(),
    };
    let text = match cfg.format {
        Format::Json => to_json(&entries)?,
        Format::Csv => {
            let mut s = String::from("name,rank,m_s,m_m,m_l,ell,ellTilde,sigma_s,sigma_m,sigma_l,rho,rho_basis,mirror_ell\n");
            for e in &entries {
                s.push_str(&format!(
                    "\"{}\",{},{},{},{},{},{},{},{},{},{},{:?},{}\n",
                    e.name,
                    e.rank,
                    e.base.short,
                    e.base.middle,
                    e.base.long,
                    e.deform.ell,
                    e.deform.ell_tilde,
                    e.sigma_tau.short,
                    e.sigma_tau.middle,
                    e.sigma_tau.long,
                    e.rho.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                    e.rho_basis,
                    e.mirror_ell
                ));
            }
            s
        }
        Format::Text => entries.iter().map(catalog_line).collect(),
    };
    let mut out = sink(cfg)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)?;
    Ok(0)
}

fn scan_points(rank: usize, ray: Option<&str>, t_max: f64, box_range: Option<&str>, steps: usize) -> Result<Vec<Vec<f64>>> {
    if steps == 0 {
        return Err(Error::Invalid("--steps must be positive".into()));
    }
    if let Some(b) = box_range {
        let (lo, hi) = match parse_reals(b)?.as_slice() {
            [lo, hi] => (*lo, *hi),
            _ => return Err(Error::Invalid(format!("--box expects lo,hi, got {b:?}"))),
        };
        let per = steps + 1;
        let total = per.checked_pow(rank as u32).filter(|&t| t <= 1_000_000).ok_or_else(|| Error::Invalid("box grid too large".into()))?;
        return Ok((0..total)
            .map(|mut k| {
                (0..rank)
                    .map(|_| {
                        let i = k % per;
                        k /= per;
                        lo + (hi - lo) * i as f64 / steps as f64
                    })
                    .collect()
            })
            .collect());
    }
    let dir = match ray {
        Some(r) => parse_reals(r)?,
        None => (1..=rank).map(|j| j as f64).collect(),
    };
    if dir.len() != rank {
        return Err(Error::Invalid(format!("--ray has {} entries, rank is {rank}", dir.len())));
    }
    let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n == 0.0 {
        return Err(Error::Invalid("--ray must be nonzero".into()));
    }
    Ok((0..=steps).map(|k| dir.iter().map(|v| v / n * t_max * k as f64 / steps as f64).collect()).collect())
}

fn cmd_scan(cfg: &RunConfig, function: FunctionArg, ray: Option<&str>, t_max: f64, box_range: Option<&str>, steps: usize) -> Result<i32> {
    let m = cfg.mult()?;
    let d = cfg.deformation()?;
    let rank = match (cfg.rank, ray) {
        (Some(r), _) => r,
        (None, Some(r)) => r.split(',').count(),
        _ => cfg.rank()?,
    };
    let rs = RootSystem::new(rank, cfg.long_norm)?;
    let lambda = cfg.lambda(&rs, &m, d)?;
    let points = scan_points(rank, ray, t_max, box_range, steps)?;
    let opts = cfg.eval_options();
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, x)| evaluate(&rs, &m, d.unwrap_or_default(), &lambda, x, function, &opts, i))
        .collect::<Result<Vec<_>>>()?;
    let mut c = cfg.clone();
    if cfg.format == Format::Text && cfg.out.is_some() {
        c.format = Format::Csv;
    }
    write_points(&c, rank, &rows)?;
    Ok(0)
}

fn cmd_verify(cfg: &RunConfig, suite: &str, samples: usize, probes: usize) -> Result<i32> {
    let sc = SuiteConfig { seed: cfg.seed, samples, probes, long_norm: cfg.long_norm, ..Default::default() };
    let summary = run_suite(suite, &sc)?;
    match (&cfg.out, cfg.format) {
        (None, Format::Text) => print!("{}", summary.to_text()),
        (None, Format::Json) => print!("{}", summary.to_json()?),
        (None, Format::Csv) => summary.write_csv(io::stdout().lock())?,
        (Some(_), f) => {
            let mut out = sink(cfg)?;
            match f {
                Format::Json => out.write_all(summary.to_json()?.as_bytes()).map_err(io_err)?,
                Format::Csv => summary.write_csv(&mut out)?,
                Format::Text => out.write_all(summary.to_text().as_bytes()).map_err(io_err)?,
            }
            out.flush().map_err(io_err)?;
            eprint!("{}", summary.to_text());
        }
    }
    Ok(if summary.passed { 0 } else { 1 })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
    exit_code: i32,
}

/// The JSON object printed to stderr for a failed command.
pub fn error_json(e: &Error) -> String {
    let body = ErrorBody { kind: e.kind(), message: e.to_string(), exit_code: e.exit_code() };
    serde_json::json!({ "error": body }).to_string()
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: &Cli) -> i32 {
    let res = init_threads(cli.command.config()).and_then(|()| match &cli.command {
        Command::Eval { cfg, function } => cmd_eval(cfg, *function),
        Command::Classify { cfg } => cmd_classify(cfg),
        Command::Cfun { cfg } => cmd_cfun(cfg),
        Command::Bounded { cfg } => cmd_bounded(cfg),
        Command::Catalog { cfg, name, n, case, ell } => cmd_catalog(cfg, name.as_deref(), *n, *case, *ell),
        Command::Scan { cfg, function, ray, t_max, box_range, steps } => {
            cmd_scan(cfg, *function, ray.as_deref(), *t_max, box_range.as_deref(), *steps)
        }
        Command::Verify { cfg, suite, samples, probes } => cmd_verify(cfg, suite, *samples, *probes),
    });
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            e.exit_code()
        }
    }
}

/// Parses `std::env::args` and runs; the binary's whole body.
pub fn main() -> i32 {
    run(&Cli::parse())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bchg").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn complex_syntax() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("-1.5-0.25i").unwrap(), c(-1.5, -0.25));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn lambda_sugar() {
        let rs = RootSystem::new(2, 2.0).unwrap();
        let m = Multiplicity::new(2.0, 2.0, 1.0);
        let re = |v: Vec<Complex64>| v.iter().map(|z| z.re).collect::<Vec<_>>();
        assert_eq!(re(parse_lambda("rho", &rs, &m, None).unwrap()), vec![2.0, 4.0]);
        assert_eq!(re(parse_lambda("1.5*rho", &rs, &m, None).unwrap()), vec![3.0, 6.0]);
        let d = Deformation::new(0.5, 0.5);
        assert_eq!(re(parse_lambda("rho", &rs, &m, Some(d)).unwrap()), rho_hull(&rs, &m, d));
        assert_eq!(re(parse_lambda("rho-ell", &rs, &m, Some(d)).unwrap()), rho(&rs, &deform(&m, d)));
    }

    #[test]
    fn canonical_round_trip() {
        let cli = parse(&["eval", "--mult", "4, 1, -1", "--lambda", "1+2i,-3", "--x", "0.5,1", "--tol", "1e-10", "--format", "json"]);
        let cfg = cli.command.config().clone();
        let canon = cfg.canonical();
        let mut args = vec!["eval".to_string()];
        args.extend(canon.iter().cloned());
        let again = Cli::try_parse_from(std::iter::once("bchg".to_string()).chain(args)).unwrap();
        assert_eq!(again.command.config().canonical(), canon);
        assert_eq!(again.command.config().mult().unwrap(), Multiplicity::new(4.0, 1.0, -1.0));
    }

    #[test]
    fn rank_inference() {
        let cli = parse(&["eval", "--mult", "2,2,1", "--lambda", "rho", "--x", "0.8,1.7"]);
        assert_eq!(cli.command.config().rank().unwrap(), 2);
        let cli = parse(&["eval", "--mult", "4,0,3", "--lambda", "2.5", "--x", "1.0"]);
        assert_eq!(cli.command.config().rank().unwrap(), 1);
    }

    #[test]
    fn box_and_ray_points() {
        let p = scan_points(2, None, 1.0, Some("0,1"), 2).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p[1], vec![0.5, 0.0]);
        let r = scan_points(2, Some("3,4"), 5.0, None, 5).unwrap();
        assert_eq!(r.len(), 6);
        assert!((r[5][0] - 3.0).abs() < 1e-12 && (r[5][1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn csv_columns_are_fixed() {
        let row = PointRow {
            id: 0,
            function: FunctionArg::F,
            m: Multiplicity::new(1.0, 2.0, 3.0),
            deformation: Deformation::NONE,
            lambda: vec![Complex64::new(1.0, -1.0); 2],
            x: vec![0.5, 1.0],
            value: Complex64::new(0.25, 0.0),
            method: Method::Ode,
            err_est: 1e-12,
        };
        let mut buf = Vec::new();
        write_point_csv(&mut buf, 2, &[row]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let head = s.lines().next().unwrap();
        assert_eq!(
            head,
            "id,m_s,m_m,m_l,ell,ellTilde,lambda_re_1,lambda_re_2,lambda_im_1,lambda_im_2,x_1,x_2,value_re,value_im,method,err_est"
        );
        assert!(s.lines().nth(1).unwrap().ends_with(",0.25,0,ode,1e-12"));
    }

    #[test]
    fn error_object_shape() {
        let j: serde_json::Value = serde_json::from_str(&error_json(&Error::Domain("x".into()))).unwrap();
        assert_eq!(j["error"]["kind"], "domain");
        assert_eq!(j["error"]["exitCode"], 2);
    }
}
