//! `forge` command line: build bundles, verify them, run campaigns and the
//! solver demo, export spectra.
//!
//! Exit codes: 0 when every claim passes, 1 when a claim fails, 2 on invalid
//! input or a violated premise. Errors go to stderr as one JSON object.

pub mod parse;

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num::rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::constructions::{
    example1, example2, theorem1_pair, theorem2_pauli_pair, theorem3_background,
    theorem4_background, Bundle, ConstructionError, Example1Params, Example2Params, NestedPsi,
};
use crate::continuous::ft_eval;
use crate::lattice::{autocorrelation, dft_eval, LatticeSignal};
use crate::scalar::{parse_phase_angle, parse_rational, parse_rational_vec, Scalar};
use crate::signal::{Mode, Operator, Signal};
use crate::verification::{
    property_campaign, run_claims, run_claims_timed, solver_demo, CampaignConfig, LandingStats,
    Magnitudes, SolverConfig, SolverConstraint, SolverTarget, VerifyError,
};
use parse::{parse_body, parse_entries};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Seed override read before `--seed`.
pub const SEED_ENV: &str = "FORGE_SEED";

#[derive(Debug, Parser)]
#[command(name = "forge", version, about = "Non-uniqueness constructions for Fourier phase retrieval, with exact verification")]
pub struct Cli {
    /// Write the main output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModeArgs {
    /// Signals on the integer lattice (default).
    #[arg(long, conflicts_with = "continuous")]
    pub discrete: bool,
    /// Signals on R^d built from box indicators.
    #[arg(long)]
    pub continuous: bool,
}

impl ModeArgs {
    pub fn mode(self) -> Mode {
        if self.continuous {
            Mode::Continuous
        } else {
            Mode::Discrete
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-tap stencil acting on two indicators.
    Example1 {
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        a2: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b1: String,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        b2: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        z: String,
        /// Indicator radius; 1/2 (discrete) or 1/4 (continuous) by default.
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Three-tap stencil with a reference offset (background problem).
    Example2 {
        #[arg(long, default_value = "i", allow_hyphen_values = true)]
        a1: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a2: String,
        /// Unit scalar e^{iφ}.
        #[arg(long, conflicts_with = "phi", allow_hyphen_values = true)]
        phase: Option<String>,
        /// Angle φ in radians, e.g. `pi/2`.
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<String>,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value = "3/4")]
        rho: String,
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        center: String,
        /// Source signal; two nested indicators when omitted.
        #[arg(long, allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b1: String,
        #[arg(long, default_value = "3", allow_hyphen_values = true)]
        b2: String,
        /// Offset of the second indicator; defaults to twice the center.
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Non-associated pair `Lψ`, `L*ψ`.
    Thm1 {
        #[arg(long, default_value = "0=1;1=2", allow_hyphen_values = true)]
        stencil: String,
        #[arg(long, default_value = "0=1;2=3", allow_hyphen_values = true)]
        psi: String,
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Pair with equal pointwise moduli from a symmetric stencil.
    Thm2 {
        #[arg(long, default_value = "0=i;2=1;-2=1", allow_hyphen_values = true)]
        stencil: String,
        #[arg(long, default_value = "0=1;1=3", allow_hyphen_values = true)]
        psi: String,
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Associated background triple from ψ and φ.
    Thm3 {
        #[arg(long, default_value = "5=1", allow_hyphen_values = true)]
        psi: String,
        #[arg(long, default_value = "-1=1;1=2", allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value = "box:9/2:11/2", allow_hyphen_values = true)]
        u0: String,
        #[arg(long, default_value = "box:-3/2:3/2", allow_hyphen_values = true)]
        u1: String,
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Background triple from a separated reference offset.
    Thm4 {
        #[arg(long, default_value = "0=i;2=1;-2=1", allow_hyphen_values = true)]
        stencil: String,
        #[arg(long, default_value = "0=1;1=3", allow_hyphen_values = true)]
        psi: String,
        #[arg(long, default_value = "ball:1/2:3/4", allow_hyphen_values = true)]
        base: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        y_star: String,
        /// Unit scalar e^{iφ}; derived from the reference taps when omitted.
        #[arg(long, allow_hyphen_values = true)]
        phase: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Re-run every claim of a bundle (`-` reads stdin).
    Verify {
        bundle: String,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Randomized Theorem 1/2 instances with negative controls.
    Campaign {
        #[arg(long, default_value_t = 500)]
        thm1: usize,
        #[arg(long, default_value_t = 500)]
        thm2: usize,
        /// Instances per negative-control class.
        #[arg(long, default_value_t = 200)]
        controls: usize,
        #[arg(long, default_value = "1,2,3", value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write one CSV row per instance here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Alternating projections from the magnitudes of a bundle's `f`.
    Solve {
        bundle: String,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 3000)]
        polish: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Allow complex values on the support (real by default).
        #[arg(long)]
        complex: bool,
    },
    /// CSV of `p, |ŵ(p)|` along each coordinate axis.
    Spectrum {
        /// Signal or bundle JSON (`-` reads stdin).
        signal: String,
        #[arg(long)]
        grid: usize,
        /// Signal to take from a bundle.
        #[arg(long, default_value = "f")]
        name: String,
        /// Half-width of the sampled window; π on the lattice by default.
        #[arg(long)]
        span: Option<f64>,
    },
}

/// A failure with its exit code and diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub diagnostic: Value,
}

impl Failure {
    fn invalid(kind: &str, detail: impl ToString) -> Failure {
        Failure {
            code: EXIT_INVALID,
            diagnostic: json!({ "error": kind, "detail": detail.to_string() }),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Failure {
        match &e {
            ConstructionError::Precondition { condition, detail } => Failure {
                code: EXIT_INVALID,
                diagnostic: json!({
                    "error": "precondition",
                    "condition": condition.name(),
                    "statement": condition.statement(),
                    "detail": detail,
                }),
            },
            ConstructionError::Inconsistent(detail) => Failure {
                code: EXIT_CLAIM_FAILED,
                diagnostic: json!({ "error": "inconsistent", "detail": detail }),
            },
            _ => Failure::invalid("invalid-input", e),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        Failure::invalid("invalid-bundle", e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn input<T, E: ToString>(r: Result<T, E>, what: &str) -> CliResult<T> {
    r.map_err(|e| Failure::invalid("invalid-input", format!("{what}: {}", e.to_string())))
}

fn scalar(text: &str, what: &str) -> CliResult<Scalar> {
    input(Scalar::parse(text), what)
}

fn rational(text: &str, what: &str) -> CliResult<BigRational> {
    input(parse_rational(text), what)
}

fn rat_vec(text: &str, what: &str) -> CliResult<Vec<BigRational>> {
    input(parse_rational_vec(text), what)
}

fn read_text(path: &str) -> CliResult<String> {
    let mut text = String::new();
    if path == "-" {
        input(std::io::stdin().read_to_string(&mut text), "stdin")?;
    } else {
        text = input(std::fs::read_to_string(path), path)?;
    }
    Ok(text)
}

fn radius(r: &Option<String>, mode: Mode) -> CliResult<BigRational> {
    match r {
        Some(t) => rational(t, "--r"),
        None => Ok(Example1Params::default_radius(mode)),
    }
}

/// `@file.json` reads a signal; otherwise `x=v;…` becomes a sum of
/// indicators of radius `r`.
fn signal_arg(text: &str, mode: Mode, r: &BigRational, what: &str) -> CliResult<Signal> {
    if let Some(path) = text.strip_prefix('@') {
        let w: Signal = input(serde_json::from_str(&read_text(path)?), what)?;
        if w.mode() != mode {
            return Err(Failure::invalid("invalid-input", format!("{what}: signal mode differs from the requested mode")));
        }
        return Ok(w);
    }
    let entries = input(parse_entries(text), what)?;
    let mut acc: Option<Signal> = None;
    for (x, v) in entries {
        let bump = crate::constructions::chi(mode, &x, r, &v)?;
        acc = Some(match acc {
            None => bump,
            Some(a) => input(a.add(&bump), what)?,
        });
    }
    acc.ok_or_else(|| Failure::invalid("invalid-input", format!("{what}: empty")))
}

fn stencil_arg(text: &str, mode: Mode) -> CliResult<Operator> {
    let taps = input(parse_entries(text), "--stencil")?;
    let dim = taps[0].0.len();
    input(Operator::from_taps(mode, dim, taps), "--stencil")
}

fn seed(flag: u64) -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => input(v.trim().parse::<u64>(), SEED_ENV),
        Err(_) => Ok(flag),
    }
}

fn read_bundle(path: &str) -> CliResult<Bundle> {
    input(serde_json::from_str(&read_text(path)?), "bundle")
}

/// Main output and exit code of a successful dispatch.
struct Output {
    text: String,
    code: i32,
}

fn json_out(v: &impl Serialize, code: i32) -> Output {
    let mut text = serde_json::to_string_pretty(v).expect("outputs serialize");
    text.push('\n');
    Output { text, code }
}

fn build(command: &Command) -> CliResult<Bundle> {
    Ok(match command {
        Command::Example1 { a1, a2, b1, b2, y, z, r, mode } => {
            let mode = mode.mode();
            let p = Example1Params {
                a1: scalar(a1, "--a1")?,
                a2: scalar(a2, "--a2")?,
                b1: scalar(b1, "--b1")?,
                b2: scalar(b2, "--b2")?,
                y: rat_vec(y, "--y")?,
                z: rat_vec(z, "--z")?,
                r: radius(r, mode)?,
                mode,
            };
            example1(&p)?.bundle
        }
        Command::Example2 { a1, a2, phase, phi, y, rho, center, psi, r, b1, b2, z, mode } => {
            let mode = mode.mode();
            let phase = match (phase, phi) {
                (Some(p), _) => scalar(p, "--phase")?,
                (None, Some(a)) => input(parse_phase_angle(a), "--phi")?,
                (None, None) => Scalar::one(),
            };
            let (a1, a2) = (scalar(a1, "--a1")?, scalar(a2, "--a2")?);
            let (y, rho, center) = (rat_vec(y, "--y")?, rational(rho, "--rho")?, rat_vec(center, "--center")?);
            let p = match psi {
                Some(text) => {
                    let psi = signal_arg(text, mode, &radius(r, mode)?, "--psi")?;
                    Example2Params { a1, a2, phase, y, rho, center, psi, nested: None }
                }
                None => {
                    let z = match z {
                        Some(t) => rat_vec(t, "--z")?,
                        None => center.iter().map(|c| c * BigRational::from_integer(2.into())).collect(),
                    };
                    let r = match r {
                        Some(t) => rational(t, "--r")?,
                        None => BigRational::new(1.into(), 4.into()),
                    };
                    let nested = NestedPsi { b1: scalar(b1, "--b1")?, b2: scalar(b2, "--b2")?, z, r };
                    Example2Params::with_nested_psi(mode, a1, a2, phase, y, rho, center, nested)?
                }
            };
            example2(&p)?.bundle
        }
        Command::Thm1 { stencil, psi, r, mode } | Command::Thm2 { stencil, psi, r, mode } => {
            let mode = mode.mode();
            let op = stencil_arg(stencil, mode)?;
            let psi = signal_arg(psi, mode, &radius(r, mode)?, "--psi")?;
            if matches!(command, Command::Thm1 { .. }) {
                theorem1_pair(&op, &psi)?.bundle
            } else {
                theorem2_pauli_pair(&op, &psi)?.bundle
            }
        }
        Command::Thm3 { psi, phi, u0, u1, r, mode } => {
            let mode = mode.mode();
            let r = radius(r, mode)?;
            let psi = signal_arg(psi, mode, &r, "--psi")?;
            let phi = signal_arg(phi, mode, &r, "--phi")?;
            let u0 = input(parse_body(u0), "--u0")?;
            let u1 = input(parse_body(u1), "--u1")?;
            theorem3_background(&psi, &phi, &u0, &u1)?.bundle
        }
        Command::Thm4 { stencil, psi, base, y_star, phase, r, mode } => {
            let mode = mode.mode();
            let op = stencil_arg(stencil, mode)?;
            let psi = signal_arg(psi, mode, &radius(r, mode)?, "--psi")?;
            let base = input(parse_body(base), "--base")?;
            let y = rat_vec(y_star, "--y-star")?;
            let phase = phase.as_deref().map(|p| scalar(p, "--phase")).transpose()?;
            theorem4_background(&op, &psi, &base, &y, phase.as_ref())?.bundle
        }
        _ => unreachable!("not a builder"),
    })
}

fn verify(path: &str, timing: bool) -> CliResult<Output> {
    let bundle = read_bundle(path)?;
    let rep = if timing { run_claims_timed(&bundle)? } else { run_claims(&bundle)? };
    let code = if rep.pass { EXIT_PASS } else { EXIT_CLAIM_FAILED };
    Ok(json_out(&rep, code))
}

fn campaign(config: CampaignConfig, csv: &Option<PathBuf>) -> CliResult<Output> {
    if let Some(d) = config.dims.iter().find(|d| !(1..=3).contains(*d)) {
        return Err(Failure::invalid("invalid-input", format!("--dims: dimension {d} is outside 1..=3")));
    }
    let summary = property_campaign(&config);
    if let Some(path) = csv {
        input(std::fs::write(path, summary.to_csv()), "--csv")?;
    }
    let out = json!({
        "config": summary.config,
        "pass": summary.pass(),
        "controls_meet_0.95": summary.controls_meet(0.95),
        "classes": summary.classes,
    });
    Ok(json_out(&out, if summary.pass() { EXIT_PASS } else { EXIT_CLAIM_FAILED }))
}

fn lattice_signal<'a>(bundle: &'a Bundle, name: &str) -> CliResult<&'a LatticeSignal> {
    bundle
        .signals
        .get(name)
        .ok_or_else(|| Failure::invalid("invalid-bundle", format!("bundle has no signal `{name}`")))?
        .as_discrete()
        .ok_or_else(|| Failure::invalid("invalid-bundle", "the solver works on lattice signals only"))
}

fn solve(path: &str, config: SolverConfig) -> CliResult<Output> {
    let bundle = read_bundle(path)?;
    let f = lattice_signal(&bundle, "f")?;
    let g = bundle.signals.get("g").and_then(Signal::as_discrete);
    let mut support = vec![1usize; f.dim()];
    for w in [Some(f), g].into_iter().flatten() {
        if let Some((lo, hi)) = w.bounding_box() {
            for (s, (l, h)) in support.iter_mut().zip(lo.iter().zip(&hi)) {
                *s = (*s).max((h - l + 1) as usize);
            }
        }
    }
    let target = SolverTarget {
        magnitudes: Magnitudes::Autocorrelation(autocorrelation(f)),
        support_box: support,
        f: Some(f.clone()),
        g: g.cloned(),
    };
    let runs = solver_demo(&target, &config)?;
    let stats = LandingStats::from_runs(&runs);
    let code = if stats.converged > 0 && stats.other == 0 { EXIT_PASS } else { EXIT_CLAIM_FAILED };
    Ok(json_out(&json!({ "config": config, "landing": stats, "runs": runs }), code))
}

fn spectrum(path: &str, grid: usize, name: &str, span: Option<f64>) -> CliResult<Output> {
    if grid < 2 {
        return Err(Failure::invalid("invalid-input", "--grid must be at least 2"));
    }
    let value: Value = input(serde_json::from_str(&read_text(path)?), "signal")?;
    let w: Signal = if value.get("claims").is_some() {
        let bundle: Bundle = input(serde_json::from_value(value), "bundle")?;
        bundle
            .signals
            .get(name)
            .cloned()
            .ok_or_else(|| Failure::invalid("invalid-bundle", format!("bundle has no signal `{name}`")))?
    } else {
        input(serde_json::from_value(value), "signal")?
    };
    let span = span.unwrap_or_else(|| match &w {
        Signal::Continuous(c) => c
            .as_boxes()
            .and_then(|b| b.min_halfwidth())
            .map_or(PI, |h| 4.0 * PI / h),
        Signal::Discrete(_) => PI,
    });
    if !(span.is_finite() && span > 0.0) {
        return Err(Failure::invalid("invalid-input", "--span must be positive"));
    }
    let mut out = csv::Writer::from_writer(Vec::new());
    input(out.write_record(["axis", "p", "modulus"]), "csv")?;
    for axis in 0..w.dim() {
        for k in 0..grid {
            let mut p = vec![0.0; w.dim()];
            p[axis] = -span + 2.0 * span * k as f64 / grid as f64;
            let v = match &w {
                Signal::Discrete(v) => input(dft_eval(v, &p), "signal")?,
                Signal::Continuous(c) => input(ft_eval(c, &p), "signal")?,
            };
            input(
                out.write_record([axis.to_string(), p[axis].to_string(), v.norm().to_string()]),
                "csv",
            )?;
        }
    }
    let text = String::from_utf8(out.into_inner().expect("in-memory writer")).expect("utf-8");
    Ok(Output { text, code: EXIT_PASS })
}

fn dispatch(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Verify { bundle, timing } => verify(bundle, *timing),
        Command::Campaign { thm1, thm2, controls, dims, seed: s, csv } => campaign(
            CampaignConfig { thm1: *thm1, thm2: *thm2, controls: *controls, dims: dims.clone(), seed: seed(*s)? },
            csv,
        ),
        Command::Solve { bundle, restarts, iterations, polish, seed: s, complex } => solve(
            bundle,
            SolverConfig {
                restarts: *restarts,
                iterations: *iterations,
                polish: *polish,
                constraint: if *complex { SolverConstraint::Complex } else { SolverConstraint::Real },
                seed: seed(*s)?,
                ..SolverConfig::default()
            },
        ),
        Command::Spectrum { signal, grid, name, span } => spectrum(signal, *grid, name, *span),
        builder => Ok(json_out(&build(builder)?, EXIT_PASS)),
    }
}

fn emit_failure(err: &mut dyn Write, f: &Failure) {
    let _ = writeln!(err, "{}", f.diagnostic);
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_PASS;
            }
            emit_failure(err, &Failure::invalid("usage", e.render()));
            return EXIT_INVALID;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &o.text).map_err(|e| e.to_string()),
                None => out.write_all(o.text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    emit_failure(err, &Failure::invalid("io", e));
                    EXIT_INVALID
                }
            }
        }
        Err(f) => {
            emit_failure(err, &f);
            f.code
        }
    }
}
