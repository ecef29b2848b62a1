use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bvfrob_cli::commands::{frobenius_text, read_file};
use bvfrob_cli::*;
use bvfrob_core::fixtures::FixtureParams;
use bvfrob_core::pivot::PivotRegistry;
use bvfrob_core::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Formal Frobenius manifolds from finite-dimensional dGBV algebras.
///
/// Exit status: 0 all checks pass, 1 some check failed, 2 invalid input,
/// 3 pipeline failure.
#[derive(Parser)]
#[command(name = "bvfrob", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra, operator and trace axioms and the ddbar-lemma.
    Validate {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Run the full construction and every check.
    Run {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        out: Output,
        /// Truncation order (maximum word length).
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Pivot rule for exact elimination.
        #[arg(long, default_value = "lowest")]
        pivot: String,
        /// Also write the Frobenius data as JSON to this path.
        #[arg(long)]
        frobenius_out: Option<PathBuf>,
    },
    /// Tensor product of two algebra files.
    Tensor {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit a built-in example as an algebra file.
    Fixture {
        name: String,
        /// Half the number of generators for "trivial".
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the Frobenius manifold axioms on a Frobenius data file.
    CheckAxioms {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        order: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Source {
    /// Algebra file (JSON).
    input: Option<PathBuf>,
    /// Use a built-in example instead of a file.
    #[arg(long)]
    fixture: Option<String>,
    /// Parameter for the "trivial" example.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Full)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Full,
    Summary,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Full => Format::Full,
            FormatArg::Summary => Format::Summary,
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Pipeline {
            stage: "output".into(),
            reason: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(src: &Source) -> Result<Input> {
    load_input(src.input.as_deref(), src.fixture.as_deref(), &FixtureParams { m: src.m })
}

fn status(passed: bool) -> i32 {
    if passed {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Validate { src, out } => {
            let r = cmd_validate(&load(&src)?, out.format.into());
            emit(&r.text, out.output.as_deref())?;
            Ok(status(r.passed))
        }
        Command::Run { src, out, order, pivot, frobenius_out } => {
            let pivot = PivotRegistry::with_builtin().get(&pivot)?;
            let input = load(&src)?;
            let r = cmd_run(&input, &RunOptions { order, pivot, format: out.format.into() })?;
            emit(&r.output.text, out.output.as_deref())?;
            if let (Some(p), Some(f)) = (frobenius_out, &r.frobenius) {
                emit(&frobenius_text(f), Some(&p))?;
            }
            Ok(status(r.output.passed))
        }
        Command::Tensor { first, second, output } => {
            let params = FixtureParams::default();
            let a = load_input(Some(&first), None, &params)?;
            let b = load_input(Some(&second), None, &params)?;
            emit(&cmd_tensor(&a, &b)?, output.as_deref())?;
            Ok(0)
        }
        Command::Fixture { name, m, output } => {
            emit(&cmd_fixture(&name, &FixtureParams { m })?, output.as_deref())?;
            Ok(0)
        }
        Command::CheckAxioms { input, order, out } => {
            let r = cmd_check_axioms(&read_file(&input)?, order, out.format.into())?;
            emit(&r.text, out.output.as_deref())?;
            Ok(status(r.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
