//! Command dispatch for the `sbr` binary.
//!
//! Exit codes: 0 for success or a positive verdict, 1 for a negative verdict,
//! 2 for usage and input errors, 3 for internal consistency failures.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use sbr_core::constants::{affine_decompose, basis_coordinates, density_report, AffineOutcome, Violation};
use sbr_core::expr::{parse_matrix, parse_ratfunc};
use sbr_core::json::{
    coordinates_json, document, matrix_json, rat_matrix_json, realization_from_json, realization_to_json,
    transcript_json, transfer_json, verdict_json,
};
use sbr_core::linalg::FieldMatrix;
use sbr_core::pencil::{congruence_diagonalize, derivative_identity_check, Diagonalization, Realization};
use sbr_core::ratio::RatMatrix;
use sbr_core::realize::{certify, transfer_check, verify_realization, Certificate, Mode, Transcript, Verdict, VerifyOptions};
use sbr_core::{Error, FieldSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Decide realizability; build and verify a realization when one exists.
    Check,
    /// Build a realization and print its pencil document.
    Realize,
    /// Compare a pencil's Schur complement with a target at random points.
    Verify,
    /// Partial derivatives of an expression, or the derivative identity of a pencil.
    Derive,
    /// Split an element as `r0 + sum z_i r_i` with every piece in `F(z^2)`.
    Decompose,
    /// Coordinates in the monomial basis over `F(z^2)`.
    Coords,
    /// Symbolic Schur complement of a pencil.
    Schur,
    /// Congruence diagonalization of a constant symmetric matrix.
    Diagonalize,
    /// Dimension counts of the realizable subspaces.
    Density,
    /// Compare verdicts over the base field and an extension.
    Transfer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Br,
    Sbr,
    Hbr,
    Hsbr,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Br => Mode::Br,
            ModeArg::Sbr => Mode::Sbr,
            ModeArg::Hbr => Mode::Hbr,
            ModeArg::Hsbr => Mode::Hsbr,
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("bad seed `{s}`: {e}"))
}

/// Realizability of rational matrices by linear pencils over finite fields.
#[derive(Debug, Clone, Parser)]
#[command(name = "sbr", version)]
pub struct CommandConfig {
    pub command: Command,
    /// Target expressions (`check`, `realize`, `derive`, ...).
    pub inputs: Vec<String>,
    /// `gf<p>`, `gf4`, `gf256`, `gf65536` or `gf2^<k>:<hex modulus>`.
    #[arg(long, default_value = "gf2")]
    pub field: String,
    /// Number of variables; defaults to the largest index used.
    #[arg(long)]
    pub vars: Option<usize>,
    #[arg(long, value_enum, default_value = "sbr")]
    pub mode: ModeArg,
    #[arg(long, default_value = "0xB355", value_parser = parse_seed)]
    pub seed: u64,
    /// Random points used by verification.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Degree of the characteristic-2 extension used for sampling.
    #[arg(long, default_value_t = 16)]
    pub ext_degree: u32,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Pencil document to read.
    #[arg(long)]
    pub pencil: Option<PathBuf>,
    /// Target expression for `verify`.
    #[arg(long)]
    pub target: Option<String>,
    /// Write the built pencil document here.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Extension field for `transfer`.
    #[arg(long)]
    pub ext_field: Option<String>,
    /// Variable count over the extension for `transfer`.
    #[arg(long)]
    pub ext_vars: Option<usize>,
    /// Restrict `derive` to one variable (1-based).
    #[arg(long)]
    pub var: Option<usize>,
}

/// Exit code and rendered output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Maps a library error to an exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) | Error::ProcedureDisagreement(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = std::result::Result<Report, Failure>;

/// Result of a command before rendering.
struct Report {
    code: i32,
    text: String,
    json: Map<String, Value>,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Self {
        let Value::Object(json) = json else { panic!("reports are objects") };
        Report { code, text, json }
    }
}

pub fn run_command(cfg: &CommandConfig) -> Outcome {
    match dispatch(cfg) {
        Ok(report) => {
            let stdout = if cfg.json {
                let mut fields = report.json;
                fields.insert("command".into(), json!(command_name(cfg.command)));
                let mut s = serde_json::to_string_pretty(&document(fields)).expect("plain data");
                s.push('\n');
                s
            } else {
                report.text
            };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(Failure::Lib(e)) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
        Err(Failure::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn command_name(c: Command) -> String {
    c.to_possible_value().expect("no skipped variants").get_name().to_string()
}

fn dispatch(cfg: &CommandConfig) -> Run {
    match cfg.command {
        Command::Check => check(cfg, false),
        Command::Realize => check(cfg, true),
        Command::Verify => verify(cfg),
        Command::Derive => derive(cfg),
        Command::Decompose => decompose(cfg),
        Command::Coords => coords(cfg),
        Command::Schur => schur(cfg),
        Command::Diagonalize => diagonalize(cfg),
        Command::Density => density(cfg),
        Command::Transfer => transfer(cfg),
    }
}

fn field(cfg: &CommandConfig) -> std::result::Result<FieldSpec, Failure> {
    Ok(cfg.field.parse()?)
}

/// Largest `zK` index in `src`.
fn inferred_vars(src: &str) -> usize {
    let bytes = src.as_bytes();
    let mut best = 0;
    for (i, &b) in bytes.iter().enumerate() {
        let starts_word = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_');
        if b == b'z' && starts_word {
            let digits: String = src[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

fn nvars_for(cfg: &CommandConfig, sources: &[&str]) -> usize {
    cfg.vars.unwrap_or_else(|| sources.iter().map(|s| inferred_vars(s)).max().unwrap_or(0))
}

fn single_input(cfg: &CommandConfig) -> std::result::Result<&str, Failure> {
    match (cfg.inputs.as_slice(), cfg.target.as_deref()) {
        ([one], None) => Ok(one),
        ([], Some(t)) => Ok(t),
        ([], None) => Err(Failure::Usage(format!("`{}` needs an expression", command_name(cfg.command)))),
        _ => Err(Failure::Usage(format!("`{}` takes exactly one expression", command_name(cfg.command)))),
    }
}

fn read_pencil(cfg: &CommandConfig) -> std::result::Result<Realization, Failure> {
    let path = cfg
        .pencil
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("`{}` needs --pencil <path>", command_name(cfg.command))))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(realization_from_json(&text)?)
}

fn verify_options(cfg: &CommandConfig) -> VerifyOptions {
    VerifyOptions { points: cfg.points, ext_degree: cfg.ext_degree, seed: cfg.seed }
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("z{i}")).collect()
}

fn describe_violation(v: &Violation) -> String {
    match v {
        Violation::Coordinate { beta, value } => {
            format!("nonzero coordinate at beta = {} ({value})", beta.bit_string())
        }
        Violation::ConstantPart { value } => format!("nonzero part in F(z^2): {value}"),
        Violation::InhomogeneousWitness { var, value } => {
            format!("witness q{} = {value} is not homogeneous of degree 0", var + 1)
        }
    }
}

fn describe_certificate(c: &Certificate) -> String {
    match c {
        Certificate::Unconditional => "unconditional".into(),
        Certificate::Witnesses(ws) => {
            let mut s = String::from("square witnesses");
            for w in ws {
                let mut parts = Vec::new();
                if let Some(q0) = &w.witnesses.q0 {
                    parts.push(format!("q0 = {q0}"));
                }
                parts.extend(w.witnesses.qs.iter().enumerate().map(|(i, q)| format!("q{} = {q}", i + 1)));
                let _ = write!(s, "\n  entry ({0},{0}): {1}", w.index + 1, parts.join(", "));
            }
            s
        }
        Certificate::Asymmetric { row, col } => format!("entry ({},{}) differs from its transpose", row + 1, col + 1),
        Certificate::NotHomogeneousDegreeOne { row, col } => {
            format!("entry ({},{}) is not homogeneous of degree 1", row + 1, col + 1)
        }
        Certificate::OutsideSubspace { index, violation } => {
            format!("entry ({0},{0}) has {1}", index + 1, describe_violation(violation))
        }
    }
}

fn describe_transcript(t: &Transcript) -> String {
    let exact = match t.exact {
        Some(true) => ", exact comparison passed",
        Some(false) => ", exact comparison failed",
        None => "",
    };
    let status = if t.passed { "passed" } else { "FAILED" };
    let mut s = format!("verification: {status} at {} points in {} ({} skipped){exact}", t.points.len(), t.field, t.skipped);
    if let Some(i) = t.first_mismatch {
        let _ = write!(s, "\nfirst mismatch at point {}", i + 1);
    }
    s
}

fn describe_realization(r: &Realization) -> String {
    format!(
        "pencil: size {}, top block {}, symmetric {}, homogeneous {}",
        r.size(),
        r.top(),
        r.is_symmetric(),
        r.is_homogeneous()
    )
}

fn emit(cfg: &CommandConfig, r: &Realization) -> std::result::Result<(), Failure> {
    if let Some(path) = &cfg.emit {
        let mut text = realization_to_json(r);
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn check(cfg: &CommandConfig, print_pencil: bool) -> Run {
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let n = nvars_for(cfg, &[src]);
    let target = parse_matrix(src, spec, n)?;
    let mode = Mode::from(cfg.mode);
    let verdict = certify(&target, mode, &verify_options(cfg))?;
    if let Some(r) = &verdict.realization {
        emit(cfg, r)?;
    }
    let code = if verdict.realizable { EXIT_OK } else { EXIT_NEGATIVE };
    let text = if print_pencil && cfg.emit.is_none() {
        verdict.realization.as_ref().map(|r| realization_to_json(r) + "\n").unwrap_or_default()
    } else {
        verdict_text(&verdict, &target, spec, n)
    };
    let json = json!({
        "field": spec.to_string(),
        "nvars": n,
        "target": rat_matrix_json(&target),
        "verdict": verdict_json(&verdict),
    });
    let mut report = Report::new(code, text, json);
    if print_pencil && !verdict.realizable && !cfg.json {
        report.text = verdict_text(&verdict, &target, spec, n);
    }
    Ok(report)
}

fn verdict_text(v: &Verdict, target: &RatMatrix, spec: FieldSpec, n: usize) -> String {
    let mut s = format!("target: {target}\nfield: {spec}, {n} variables\nmode: {}\n", v.mode);
    let _ = writeln!(s, "verdict: {}", if v.realizable { "realizable" } else { "not realizable" });
    let _ = writeln!(s, "certificate: {}", describe_certificate(&v.certificate));
    if let Some(r) = &v.realization {
        let _ = writeln!(s, "{}", describe_realization(r));
    }
    if let Some(t) = &v.transcript {
        let _ = writeln!(s, "{}", describe_transcript(t));
    }
    s
}

fn verify(cfg: &CommandConfig) -> Run {
    let r = read_pencil(cfg)?;
    let src = single_input(cfg)?;
    let target = parse_matrix(src, r.spec(), r.nvars())?;
    let transcript = verify_realization(&r, &target, &verify_options(cfg))?;
    let mode = Mode::from(cfg.mode);
    let flags_ok = (!mode.symmetric() || r.is_symmetric()) && (!mode.homogeneous() || r.is_homogeneous());
    let ok = transcript.passed && flags_ok;
    let mut text = format!("{}\n{}\n", describe_realization(&r), describe_transcript(&transcript));
    if !flags_ok {
        let _ = writeln!(text, "pencil lacks the structure required for {mode}");
    }
    let json = json!({
        "mode": mode.to_string(),
        "structure_ok": flags_ok,
        "symmetric": r.is_symmetric(),
        "homogeneous": r.is_homogeneous(),
        "transcript": transcript_json(&transcript),
        "passed": ok,
    });
    Ok(Report::new(if ok { EXIT_OK } else { EXIT_NEGATIVE }, text, json))
}

fn selected_vars(cfg: &CommandConfig, n: usize) -> std::result::Result<Vec<usize>, Failure> {
    match cfg.var {
        None => Ok((0..n).collect()),
        Some(v) if (1..=n).contains(&v) => Ok(vec![v - 1]),
        Some(v) => Err(Failure::Usage(format!("--var {v} out of range for {n} variables"))),
    }
}

fn derive(cfg: &CommandConfig) -> Run {
    if cfg.pencil.is_some() {
        return derive_identity(cfg);
    }
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let n = nvars_for(cfg, &[src]);
    let r = parse_ratfunc(src, spec, n)?;
    let mut text = String::new();
    let mut partials = Map::new();
    for i in selected_vars(cfg, n)? {
        let d = r.derive(i)?;
        let _ = writeln!(text, "d/dz{}: {d}", i + 1);
        partials.insert(format!("z{}", i + 1), json!(d.to_string()));
    }
    let json = json!({"field": spec.to_string(), "nvars": n, "input": r.to_string(), "partials": partials});
    Ok(Report::new(EXIT_OK, text, json))
}

fn derive_identity(cfg: &CommandConfig) -> Run {
    let r = read_pencil(cfg)?;
    let mut text = String::new();
    let mut checks = Vec::new();
    let mut holds = true;
    for i in selected_vars(cfg, r.nvars())? {
        let rep = derivative_identity_check(&r, i, cfg.points, cfg.ext_degree, cfg.seed)?;
        holds &= rep.holds;
        let _ = writeln!(
            text,
            "z{}: derivative identity {} at {} points",
            i + 1,
            if rep.holds { "holds" } else { "FAILS" },
            rep.checked
        );
        checks.push(json!({"var": i + 1, "holds": rep.holds, "checked": rep.checked, "first_mismatch": rep.first_mismatch}));
    }
    let json = json!({"identity": checks, "holds": holds});
    Ok(Report::new(if holds { EXIT_OK } else { EXIT_NEGATIVE }, text, json))
}

fn decompose(cfg: &CommandConfig) -> Run {
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let n = nvars_for(cfg, &[src]);
    let r = parse_ratfunc(src, spec, n)?;
    match affine_decompose(&r)? {
        AffineOutcome::Decomposed(d) => {
            let mut text = format!("r0: {}\n", d.r0);
            for (i, g) in d.gradient.iter().enumerate() {
                let _ = writeln!(text, "r{}: {g}", i + 1);
            }
            let json = json!({
                "in_subspace": true,
                "r0": d.r0.to_string(),
                "gradient": d.gradient.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            });
            Ok(Report::new(EXIT_OK, text, json))
        }
        AffineOutcome::NotInSubspace { var, partial } => {
            let text = format!("not in the subspace: d/dz{} = {partial} is not in F(z^2)\n", var + 1);
            let json = json!({"in_subspace": false, "var": var + 1, "partial": partial.to_string()});
            Ok(Report::new(EXIT_NEGATIVE, text, json))
        }
    }
}

fn coords(cfg: &CommandConfig) -> Run {
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let n = nvars_for(cfg, &[src]);
    let r = parse_ratfunc(src, spec, n)?;
    let c = basis_coordinates(&r)?;
    let mut text = String::new();
    for (beta, v) in c.iter() {
        let _ = writeln!(text, "{}: {v}", beta.bit_string());
    }
    let violation = c.first_violation().map(|(b, _)| b.bit_string());
    let json = json!({"coords": coordinates_json(&c), "first_violation": violation});
    Ok(Report::new(EXIT_OK, text, json))
}

fn schur(cfg: &CommandConfig) -> Run {
    let r = read_pencil(cfg)?;
    let s = r.schur_symbolic()?;
    let text = format!("{}\n", s.display_with(&names(r.nvars())));
    Ok(Report::new(EXIT_OK, text, json!({"schur": rat_matrix_json(&s)})))
}

fn diagonalize(cfg: &CommandConfig) -> Run {
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let m = parse_matrix(src, spec, 0)?;
    let s = FieldMatrix::from_fn(spec, m.rows(), m.cols(), |i, j| {
        m.get(i, j).constant_value().expect("no variables")
    });
    if !s.is_symmetric() {
        return Err(Failure::Lib(Error::NotSymmetric));
    }
    match congruence_diagonalize(&s)? {
        Diagonalization::Diagonal { p, d } => {
            let text = format!("S = P^T D P with\nP = {p}\nD = {d}\n");
            let json = json!({"alternate": false, "p": matrix_json(&p), "d": matrix_json(&d)});
            Ok(Report::new(EXIT_OK, text, json))
        }
        Diagonalization::Alternate => {
            let text = "alternate: every diagonal entry is zero, so no diagonal form exists\n".to_string();
            Ok(Report::new(EXIT_NEGATIVE, text, json!({"alternate": true})))
        }
    }
}

fn density(cfg: &CommandConfig) -> Run {
    let n = cfg.vars.ok_or_else(|| Failure::Usage("`density` needs --vars".into()))?;
    let d = density_report(u32::try_from(n).unwrap_or(u32::MAX))?;
    let text = format!(
        "n = {}\n[F(z):F(z^2)]        = {}\ndim SBR subspace     = {}\n[F(z)_1:F(z^2)_0]    = {}\ndim hSBR subspace    = {}\nSBR fraction         = {}\nhSBR fraction        = {}\n",
        d.n,
        d.dim_total,
        d.dim_sbr,
        d.dim_total_h,
        d.dim_hsbr,
        d.ratio_sbr(),
        d.ratio_hsbr()
    );
    let json = json!({
        "n": d.n,
        "dim_total": d.dim_total,
        "dim_sbr": d.dim_sbr,
        "dim_total_h": d.dim_total_h,
        "dim_hsbr": d.dim_hsbr,
        "ratio_sbr": d.ratio_sbr().to_string(),
        "ratio_hsbr": d.ratio_hsbr().to_string(),
    });
    Ok(Report::new(EXIT_OK, text, json))
}

fn transfer(cfg: &CommandConfig) -> Run {
    let src = single_input(cfg)?;
    let spec = field(cfg)?;
    let n = nvars_for(cfg, &[src]);
    let target = parse_matrix(src, spec, n)?;
    let ext: FieldSpec = cfg
        .ext_field
        .as_deref()
        .ok_or_else(|| Failure::Usage("`transfer` needs --ext-field".into()))?
        .parse()?;
    let ext_vars = cfg.ext_vars.unwrap_or(n);
    let mode = Mode::from(cfg.mode);
    let rep = transfer_check(&target, ext, ext_vars, mode)?;
    if !rep.agree {
        return Err(Failure::Lib(Error::Inconsistent(format!(
            "{mode} verdict changes from {spec} in {n} variables to {ext} in {ext_vars} variables"
        ))));
    }
    let verdict = if rep.verdict_base.realizable { "realizable" } else { "not realizable" };
    let text = format!(
        "mode: {mode}\nbase: {spec}, {n} variables: {verdict}\nextension: {ext}, {ext_vars} variables: {verdict}\ncertificate over base: {}\n",
        describe_certificate(&rep.verdict_base.certificate)
    );
    let mut json = transfer_json(&rep);
    json["field"] = json!(spec.to_string());
    json["ext_field"] = json!(ext.to_string());
    let code = if rep.verdict_base.realizable { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Report::new(code, text, json))
}
