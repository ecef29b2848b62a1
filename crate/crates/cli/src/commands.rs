//! Command implementations. Each returns the text to emit and whether every
//! check passed; hard errors come back as `Err`.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use bvfrob_core::algebra::validate_algebra;
use bvfrob_core::axioms::check_axioms;
use bvfrob_core::bv::{check_ddbar_lemma, tensor_product, validate_dgbv, validate_integral};
use bvfrob_core::fixtures::{FixtureParams, FixtureRegistry};
use bvfrob_core::frobenius::{
    check_deformed_product_identity, check_potentiality, check_wdvv, connection_flatness, euler_analysis, frobenius_data,
    render_spectrum, FrobeniusData,
};
use bvfrob_core::hodge::DgbvContext;
use bvfrob_core::mc::{solve_mc, verify_mc};
use bvfrob_core::pivot::PivotRule;
use bvfrob_core::scalar::format_scalar;
use bvfrob_core::{DgbvData, Error, Result, ValidationReport};
use sha2::{Digest, Sha256};

use crate::format::{parse_dgbv_text, parse_frobenius_text, serialize_dgbv, serialize_frobenius, DgbvFile, FrobeniusFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Full,
    Summary,
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub text: String,
    pub passed: bool,
}

/// Input bytes (hashed into reports) and the parsed data.
pub struct Input {
    pub bytes: Vec<u8>,
    pub data: DgbvData,
}

/// Maps an error to the process exit status: 2 for bad input, 3 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::Unknown { .. } => 2,
        _ => 3,
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

pub fn load_input(path: Option<&Path>, fixture: Option<&str>, params: &FixtureParams) -> Result<Input> {
    match (path, fixture) {
        (Some(p), None) => {
            let text = read_file(p)?;
            let data = parse_dgbv_text(&text)?.to_data()?;
            Ok(Input { bytes: text.into_bytes(), data })
        }
        (None, Some(name)) => {
            let text = cmd_fixture(name, params)?;
            let data = parse_dgbv_text(&text)?.to_data()?;
            Ok(Input { bytes: text.into_bytes(), data })
        }
        _ => Err(Error::InvalidInput("give exactly one of an input file or --fixture".into())),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn validation_reports(d: &DgbvData) -> Vec<ValidationReport> {
    vec![validate_algebra(d.alg()), validate_dgbv(d), validate_integral(d), check_ddbar_lemma(d)]
}

fn header(out: &mut String, input: &Input, order: Option<usize>) {
    let _ = writeln!(out, "bvfrob report");
    let _ = writeln!(out, "format_version: {}", crate::format::FORMAT_VERSION);
    let _ = writeln!(out, "input_sha256: {}", sha256_hex(&input.bytes));
    if let Some(n) = order {
        let _ = writeln!(out, "order: {n}");
    }
}

fn sections(out: &mut String, title: &str, reports: &[ValidationReport], format: Format) {
    let _ = writeln!(out, "\n== {title}");
    for r in reports {
        match format {
            Format::Full => out.push_str(&r.to_string()),
            Format::Summary => {
                let _ = writeln!(out, "[{}] {}", r.section, if r.passed() { "PASS" } else { "FAIL" });
            }
        }
    }
}

fn summary(out: &mut String, reports: &[&ValidationReport], extra: Option<&str>) -> bool {
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "\n== summary");
    let _ = writeln!(out, "checks: {} passed, {} failed", reports.len() - failed, failed);
    if let Some(e) = extra {
        let _ = writeln!(out, "{e}");
    }
    let ok = failed == 0;
    let _ = writeln!(out, "result: {}", if ok { "PASS" } else { "FAIL" });
    ok
}

pub fn cmd_validate(input: &Input, format: Format) -> CommandOutput {
    let mut text = String::new();
    header(&mut text, input, None);
    let reps = validation_reports(&input.data);
    sections(&mut text, "validation", &reps, format);
    let passed = summary(&mut text, &reps.iter().collect::<Vec<_>>(), None);
    CommandOutput { text, passed }
}

pub struct RunOptions {
    pub order: usize,
    pub pivot: Arc<dyn PivotRule>,
    pub format: Format,
}

pub struct RunResult {
    pub output: CommandOutput,
    pub frobenius: Option<FrobeniusData>,
}

fn stage<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Pipeline { .. } | Error::MaurerCartan { .. } => e,
        other => Error::Pipeline { stage: name.into(), reason: other.to_string() },
    })
}

/// Validation, then the whole construction and every check.
pub fn cmd_run(input: &Input, opts: &RunOptions) -> Result<RunResult> {
    let mut text = String::new();
    header(&mut text, input, Some(opts.order));
    let _ = writeln!(text, "pivot: {}", opts.pivot.name());
    let vals = validation_reports(&input.data);
    sections(&mut text, "validation", &vals, opts.format);
    if vals.iter().any(|r| !r.passed()) {
        let passed = summary(&mut text, &vals.iter().collect::<Vec<_>>(), Some("pipeline not run: input failed validation"));
        return Ok(RunResult { output: CommandOutput { text, passed }, frobenius: None });
    }
    let ctx = stage("decomposition", DgbvContext::with_rule(input.data.clone(), opts.pivot.clone()))?;
    let sol = stage("maurer-cartan", solve_mc(&ctx, opts.order))?;
    let f = stage("frobenius data", frobenius_data(&sol, &ctx))?;
    let d = ctx.data();
    let alg = d.alg();
    let euler = euler_analysis(&f);
    let mut euler_rep = euler.report.clone();
    if euler.bigraded_spectrum.is_none() {
        euler_rep.note("no (p,q) metadata: spectrum checked against total degrees only");
    }
    let checks = vec![
        verify_mc(&sol, &ctx),
        check_axioms(&f, opts.order)?,
        check_potentiality(&f),
        check_wdvv(&f),
        connection_flatness(&f),
        check_deformed_product_identity(&sol, &f, d),
        euler_rep,
    ];

    if opts.format == Format::Full {
        let _ = writeln!(text, "\n== harmonic basis");
        for (a, h) in sol.harmonic.iter().enumerate() {
            let _ = writeln!(
                text,
                "t{a} <-> {} (degree {}, deg t{a} = {})",
                alg.render(h),
                alg.homogeneous_degree(h).unwrap_or(0),
                f.vars.degree(a)
            );
        }
        let _ = writeln!(text, "\n== gamma (through order {})", sol.gamma_hat.order());
        for (m, x) in sol.gamma_hat.iter() {
            let _ = writeln!(text, "{}: {}", m.render(), alg.render(x));
        }
        let _ = writeln!(text, "\n== alpha");
        for (m, x) in sol.alpha.iter() {
            let _ = writeln!(text, "{}: {}", m.render(), alg.render(x));
        }
        let _ = writeln!(text, "\n== structure constants (through order {})", f.a.order());
        let r = f.rank();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let s = f.a.get(a, b, c);
                    if !s.is_zero() {
                        let _ = writeln!(text, "A^{c}_({a},{b}) = {}", s.render());
                    }
                }
            }
        }
        let _ = writeln!(text, "\n== metric");
        for a in 0..r {
            let row: Vec<String> = (0..r).map(|b| format_scalar(f.g.get(a, b))).collect();
            let _ = writeln!(text, "{}", row.join(" "));
        }
        let _ = writeln!(text, "\n== potential (through order {})", f.phi.order());
        let _ = writeln!(text, "Phi = {}", f.phi.render());
    }
    let _ = writeln!(text, "\n== euler field");
    let weights: Vec<String> = euler.weights.iter().map(format_scalar).collect();
    let _ = writeln!(text, "weights: {}", weights.join(" "));
    let _ = writeln!(text, "spectrum: {}", render_spectrum(&euler.spectrum));
    let _ = writeln!(text, "unit eigenvalue: {}", format_scalar(&euler.unit_eigenvalue));
    if let Some(b) = &euler.bigraded_spectrum {
        let _ = writeln!(text, "bigraded spectrum: {}", render_spectrum(b));
    }
    sections(&mut text, "checks", &checks, opts.format);
    let all: Vec<&ValidationReport> = vals.iter().chain(checks.iter()).collect();
    let passed = summary(&mut text, &all, None);
    Ok(RunResult { output: CommandOutput { text, passed }, frobenius: Some(f) })
}

/// Serialized tensor product; both factors must validate.
pub fn cmd_tensor(a: &Input, b: &Input) -> Result<String> {
    for (which, x) in [("first", a), ("second", b)] {
        if let Some(r) = validation_reports(&x.data).into_iter().find(|r| !r.passed()) {
            return Err(Error::InvalidInput(format!("{which} factor fails validation:\n{r}")));
        }
    }
    Ok(serialize_dgbv(&DgbvFile::from_data(&tensor_product(&a.data, &b.data)?)))
}

pub fn cmd_fixture(name: &str, params: &FixtureParams) -> Result<String> {
    let f = FixtureRegistry::with_builtin().get(name)?;
    Ok(serialize_dgbv(&DgbvFile::from_data(&f.build(params)?)))
}

pub fn frobenius_text(f: &FrobeniusData) -> String {
    serialize_frobenius(&FrobeniusFile::from_data(f))
}

/// Axiom check on an external Frobenius data file.
pub fn cmd_check_axioms(text: &str, order: usize, format: Format) -> Result<CommandOutput> {
    let f = parse_frobenius_text(text)?.to_data()?;
    let mut out = String::new();
    let _ = writeln!(out, "bvfrob axiom report");
    let _ = writeln!(out, "input_sha256: {}", sha256_hex(text.as_bytes()));
    let _ = writeln!(out, "order: {order}");
    let rep = check_axioms(&f, order)?;
    sections(&mut out, "axioms", std::slice::from_ref(&rep), format);
    let passed = summary(&mut out, &[&rep], None);
    Ok(CommandOutput { text: out, passed })
}
