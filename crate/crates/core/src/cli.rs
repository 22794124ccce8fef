//! Command-line front end: argument parsing and the text/JSON emitters.
//!
//! Exit codes: 0 success, 1 a certificate check or instance check failed,
//! 2 usage or parse error (including `m < 2`).

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::builder::TypedValueParser as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::conicbundle::{build_certificate, ExampleCertificate};
use crate::cones::{chambers_of_y, classify, nef_cone};
use crate::coxring::{base_locus, count_sections, DEFAULT_COEFF_RANGE};
use crate::error::{Error, Result};
use crate::picard::{ConstructionParams, DivisorClassY};
use crate::verifier::{run_instance, InstanceConfig, InstanceReport, SectionMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "conic-bundle", version, about = "Certify and sample the Fano conic bundles X -> Y with -K_Y not nef")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every class-level identity of the construction.
    Certificate(CommonArgs),
    /// Instantiate X for concrete sections and audit fibers and smoothness.
    Verify(VerifyArgs),
    /// Base locus of a linear system on Y.
    Baselocus(ClassArgs),
    /// Effective / big / movable / nef / ample.
    Classify(ClassArgs),
    /// Dimension of the space of global sections.
    H0(ClassArgs),
    /// Effective, movable and nef cones with the chamber decomposition.
    Cones(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(u64).range(1..).map(|v| v as usize))]
    pub samples: usize,
    /// Add random terms to the special sections (same shape along V).
    #[arg(long)]
    pub perturb: bool,
    #[arg(long, default_value_t = DEFAULT_COEFF_RANGE, value_parser = clap::value_parser!(i64).range(1..))]
    pub coeff_range: i64,
}

#[derive(Debug, Args)]
pub struct ClassArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// A class such as "2D-4H".
    #[arg(long, allow_hyphen_values = true)]
    pub class: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Certificate,
    Verify,
    Baselocus,
    Classify,
    H0,
    Cones,
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub m: i64,
    pub seed: u64,
    pub n_samples: usize,
    pub coefficient_range: i64,
    pub output_format: Format,
    pub perturb_sections: bool,
    pub class: Option<String>,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        let base = |command, c: &CommonArgs| RunConfig {
            command,
            m: c.m,
            seed: DEFAULT_SEED,
            n_samples: DEFAULT_SAMPLES,
            coefficient_range: DEFAULT_COEFF_RANGE,
            output_format: c.format,
            perturb_sections: false,
            class: None,
        };
        match &cli.command {
            Command::Certificate(c) => base(CommandKind::Certificate, c),
            Command::Cones(c) => base(CommandKind::Cones, c),
            Command::Verify(v) => RunConfig {
                seed: v.seed,
                n_samples: v.samples,
                coefficient_range: v.coeff_range,
                perturb_sections: v.perturb,
                ..base(CommandKind::Verify, &v.common)
            },
            Command::Baselocus(a) | Command::Classify(a) | Command::H0(a) => {
                let kind = match &cli.command {
                    Command::Baselocus(_) => CommandKind::Baselocus,
                    Command::Classify(_) => CommandKind::Classify,
                    _ => CommandKind::H0,
                };
                RunConfig { class: Some(a.class.clone()), ..base(kind, &a.common) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Self { code, stdout, stderr: String::new() }
    }

    fn usage(msg: String) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: msg }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&RunConfig::from(&cli)),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome::ok(EXIT_OK, text)
            }
        }
    }
}

pub fn execute(config: &RunConfig) -> Outcome {
    let params = match ConstructionParams::new(config.m) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let class = match config.class.as_deref().map(str::parse::<DivisorClassY>).transpose() {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let json = config.output_format == Format::Json;
    match config.command {
        CommandKind::Certificate => {
            let cert = build_certificate(&params);
            let out = if json { to_json(&cert) } else { certificate_text(&cert) };
            Outcome::ok(if cert.valid { EXIT_OK } else { EXIT_FAILED }, out)
        }
        CommandKind::Verify => match verify(config, &params) {
            Ok(report) => {
                let out = if json { to_json(&report) } else { verify_text(&report) };
                Outcome::ok(if report.pass { EXIT_OK } else { EXIT_FAILED }, out)
            }
            Err(e) => Outcome::usage(format!("error: {e}\n")),
        },
        CommandKind::Baselocus => {
            let cls = class.expect("class is required");
            let bl = base_locus(cls, &params);
            let out = if json {
                to_json(&json!({ "m": params.m(), "result": bl }))
            } else {
                let strata: Vec<_> = bl.strata.iter().map(ToString::to_string).collect();
                let primes: Vec<_> = bl.raw_primes.iter().map(|p| format!("{{{}}}", p.join(","))).collect();
                format!(
                    "# conic-bundle baselocus m={}\nBs|{}| = {}\nminimal primes: {}\n",
                    params.m(),
                    cls,
                    strata.join(" ∪ "),
                    if primes.is_empty() { "none".to_string() } else { primes.join(" ") }
                )
            };
            Outcome::ok(EXIT_OK, out)
        }
        CommandKind::Classify => {
            let cls = class.expect("class is required");
            let r = classify(cls, &params);
            let out = if json {
                to_json(&json!({ "m": params.m(), "result": r }))
            } else {
                let props = [
                    ("effective", r.effective),
                    ("big", r.big),
                    ("movable", r.movable),
                    ("nef", r.nef),
                    ("ample", r.ample),
                ];
                let words: Vec<_> =
                    props.iter().map(|&(n, v)| if v { n.to_string() } else { format!("not {n}") }).collect();
                format!("# conic-bundle classify m={}\n{}: {}\n", params.m(), cls, words.join(", "))
            };
            Outcome::ok(EXIT_OK, out)
        }
        CommandKind::H0 => {
            let cls = class.expect("class is required");
            let h0 = count_sections(cls, &params);
            let out = if json {
                let v = h0.to_u64().map_or_else(|| Value::String(h0.to_string()), Value::from);
                to_json(&json!({ "m": params.m(), "class": cls, "h0": v }))
            } else {
                format!("# conic-bundle h0 m={}\nh0(Y, O({})) = {}\n", params.m(), cls, h0)
            };
            Outcome::ok(EXIT_OK, out)
        }
        CommandKind::Cones => {
            let dec = chambers_of_y(&params);
            let nef = nef_cone(&params);
            let out = if json {
                to_json(&json!({
                    "m": params.m(),
                    "effective": dec.effective,
                    "movable": dec.movable,
                    "nef": nef,
                    "walls": dec.walls,
                    "chambers": dec.chambers,
                }))
            } else {
                let mut s = format!("# conic-bundle cones m={}\n", params.m());
                let _ = writeln!(s, "Eff(Y) = {}", dec.effective);
                let _ = writeln!(s, "Mov(Y) = {}", dec.movable);
                let _ = writeln!(s, "Nef(Y) = {}", nef);
                let walls: Vec<_> = dec.walls.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "walls: {}", walls.join(", "));
                let _ = writeln!(s, "chambers: {}", dec.chambers.len());
                for c in &dec.chambers {
                    let _ = writeln!(s, "  {} {}", c.cone, c.label);
                }
                s
            };
            Outcome::ok(EXIT_OK, out)
        }
    }
}

fn verify(config: &RunConfig, params: &ConstructionParams) -> Result<InstanceReport> {
    if config.n_samples == 0 {
        return Err(Error::Degenerate("--samples must be at least 1".into()));
    }
    let mode = if config.perturb_sections { SectionMode::Perturbed } else { SectionMode::Special };
    let instance = InstanceConfig {
        coeff_range: config.coefficient_range,
        ..InstanceConfig::new(config.seed, config.n_samples, mode)
    };
    run_instance(params, &instance)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn certificate_text(c: &ExampleCertificate) -> String {
    let mut s = String::new();
    let k = &c.classes;
    let _ = writeln!(s, "# conic-bundle certificate m={}", c.m);
    let _ = writeln!(s, "D = {}   H = {}", k.d, k.h);
    let _ = writeln!(s, "-K_Y = {}", k.anti_k);
    let _ = writeln!(s, "G = {}", k.g);
    let _ = writeln!(s, "M = {}", k.m_twist);
    let _ = writeln!(s, "Δ_f = {}", c.discriminant);
    let bundle: Vec<_> = c.bundle_e.iter().map(|d| format!("O({d})")).collect();
    let _ = writeln!(s, "E = {}", bundle.join(" ⊕ "));
    let _ = writeln!(s, "-K_Z = {}", c.anti_k_z);
    let _ = writeln!(s, "X = {}", c.x_class);
    let _ = writeln!(s, "-K_Z - X = {}", c.anti_k_z_minus_x);
    let sym2: Vec<_> = c.sym2_summands.iter().map(|(d, n)| format!("O({d})^{n}")).collect();
    let _ = writeln!(s, "Sym2(E(-mH)) = {}", sym2.join(" ⊕ "));
    let _ = writeln!(s, "Nef(Y) = {}   Eff(Y) = {}", c.nef_cone, c.effective_cone);
    let _ = writeln!(s, "dim_Y = {}   dim_Z = {}   dim_X = {}", c.dims.dim_y, c.dims.dim_z, c.dims.dim_x);
    let _ = writeln!(
        s,
        "rho_Y = {}   rho_Z = {}   rho_X = {}   delta = {}",
        c.picard.rho_y, c.picard.rho_z, c.picard.rho_x, c.picard.delta
    );
    let _ = writeln!(s, "checks:");
    for ch in &c.checks {
        let tag = if ch.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "  [{tag}] {}", ch.name);
        if !ch.pass || ch.expected != ch.computed {
            let _ = writeln!(s, "         expected: {}", ch.expected);
            let _ = writeln!(s, "         computed: {}", ch.computed);
        }
    }
    let _ = writeln!(s, "unverified claims:");
    for p in &c.prose_claims {
        let _ = writeln!(s, "  - {} [{}] ({})", p.claim, p.source, p.role);
    }
    let passed = c.checks.iter().filter(|ch| ch.pass).count();
    let verdict = if c.valid { "VALID" } else { "INVALID" };
    let _ = writeln!(s, "result: {verdict} ({passed}/{} checks)", c.checks.len());
    s
}

fn verify_text(r: &InstanceReport) -> String {
    let mut s = String::new();
    let cfg = &r.config;
    let mode = match cfg.mode {
        SectionMode::Special => "special",
        SectionMode::Perturbed => "perturbed",
    };
    let _ = writeln!(
        s,
        "# conic-bundle verify m={} seed={} samples={} sections={} coeff-range={} point-range={}",
        r.m, cfg.seed, cfg.samples, mode, cfg.coeff_range, cfg.point_range
    );
    let terms: Vec<_> = r.section_terms.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(s, "section terms: {}", terms.join(" "));
    let _ = writeln!(s, "Sym2 degree pattern: {}", ok(r.degrees_match));
    let si = &r.symbolic_identity;
    let _ = writeln!(
        s,
        "dF|_W = σ′(z0² dν1 + z1(2z0+z1) dν2): homogeneous {}, chart z0=1 {}, chart z1=1 {}",
        ok(si.homogeneous),
        ok(si.chart_z0),
        ok(si.chart_z1)
    );
    let t = &r.tallies;
    let types = |m: &std::collections::BTreeMap<_, usize>| {
        m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(s, "V points: {} [{}]", r.v_points.len(), types(&t.v_fiber_types));
    let _ = writeln!(s, "  σ|_V ≠ 0: {}/{}", t.sigma_nonzero_on_v, r.v_points.len());
    let _ = writeln!(s, "  dF ≠ 0 on W (5-point z-grid): {}/{}", t.w_smooth, t.w_checks);
    let _ = writeln!(s, "generic points: {} [{}]", r.generic_points.len(), types(&t.generic_fiber_types));
    let _ = writeln!(s, "node probes on y0=0: {}", r.node_probes.len());
    let _ = writeln!(s, "  dF ≠ 0 at line-pair nodes: {}/{}", t.node_smooth, t.node_checks);
    let _ = writeln!(s, "chart lines: det S squarefree {}/{}", t.chart_lines_squarefree, t.chart_lines);
    let _ = writeln!(s, "lines through V: det S not squarefree {}/{}", t.v_lines_not_squarefree, t.v_lines);
    let _ = writeln!(s, "fiber lines: deg det S = 6 {}/{}", t.fiber_lines_degree_6, t.fiber_lines);
    let _ = writeln!(s, "audit: {}", r.audit);
    if r.failures.is_empty() {
        let _ = writeln!(s, "failures: none");
    } else {
        let _ = writeln!(s, "failures: {}", r.failures.len());
        for f in &r.failures {
            let _ = writeln!(s, "  {f}");
        }
    }
    let _ = writeln!(s, "result: {}", if r.pass { "PASS" } else { "FAIL" });
    s
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("conic-bundle").chain(args.iter().copied()))
    }

    #[test]
    fn certificate_exit_codes() {
        let out = run_args(&["certificate", "--m", "2", "--format", "json"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("\"dim_X\": 9"));
        assert_eq!(run_args(&["certificate", "--m", "1"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["certificate", "--m", "-3"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["certificate", "--format", "yaml"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn json_is_parsable_with_stable_keys() {
        let a = run_args(&["certificate", "--m", "4", "--format", "json"]).stdout;
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["discriminant"], "6D-16H");
        assert_eq!(a, run_args(&["certificate", "--m", "4", "--format", "json"]).stdout);
    }

    #[test]
    fn queries() {
        let out = run_args(&["baselocus", "--m", "2", "--class", "2D-4H"]);
        assert!(out.stdout.contains("Bs|2D-4H| = V\n"), "{}", out.stdout);
        let out = run_args(&["classify", "--m", "2", "--class", "3D-1H"]);
        assert!(out.stdout.contains("big") && out.stdout.contains("not nef"));
        let out = run_args(&["cones", "--m", "3"]);
        assert!(out.stdout.contains("chambers: 2") && out.stdout.contains("1D+0H"));
        let out = run_args(&["h0", "--m", "2", "--class", "D"]);
        assert!(out.stdout.contains("= 421"));
        let out = run_args(&["h0", "--m", "2", "--class", "-D", "--format", "json"]);
        assert_eq!(serde_json::from_str::<Value>(&out.stdout).unwrap()["h0"], 0);
        assert_eq!(run_args(&["h0", "--m", "2", "--class", "2Q"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["h0", "--m", "2"]).code, EXIT_USAGE);
    }

    #[test]
    fn verify_small() {
        let out = run_args(&["verify", "--m", "2", "--samples", "2", "--seed", "3"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert!(out.stdout.starts_with("# conic-bundle verify m=2 seed=3 samples=2"));
        assert_eq!(run_args(&["verify", "--samples", "0"]).code, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--coeff-range", "0"]).code, EXIT_USAGE);
    }
}
