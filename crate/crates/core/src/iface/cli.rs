//! Command-line surface. Exit status: 0 success, 1 input or usage error,
//! 2 internal invariant violation.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::dsl::{parse_setup, render_setup};
use super::render::{
    exactness_json, json_text, pieces_text, poly_json, presentation_json, ring_json, smith_json, Format,
};
use crate::blowup::{validate_setup, BlowupError, BlowupSetup};
use crate::polyring::{parse_polynomial, ParseError};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "wblow", version, about = "Integral Chow rings of weighted blow-ups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Override the truncation degree of the setup.
    #[arg(long, global = true, value_name = "N")]
    max_degree: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Presentation of the blow-up (Keel form when i* is surjective).
    Blowup { file: PathBuf },
    /// Keel presentation; fails when i* is not surjective.
    Keel { file: PathBuf },
    /// Chow ring of the exceptional divisor.
    Pbundle { file: PathBuf },
    /// Gysin pullback of a class on the center.
    Gysin {
        file: PathBuf,
        #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
        class: String,
    },
    /// Total Chern class of the blow-up from that of Y.
    Chern {
        file: PathBuf,
        #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
        total_chern_y: String,
    },
    /// Check exactness of the key sequence (all degrees unless --degree).
    Verify {
        file: PathBuf,
        #[arg(long, value_name = "K")]
        degree: Option<u32>,
    },
    /// Graded pieces of the blow-up as abelian groups.
    Pieces { file: PathBuf },
    /// Run the setup checks and print the report.
    Validate { file: PathBuf },
    /// Print the setup in normalized form.
    Render { file: PathBuf },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<BlowupError> for Failure {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::Internal(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn load(path: &PathBuf, max_degree: Option<u32>) -> Result<BlowupSetup, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let setup = parse_setup(&text)
        .map_err(|e| Failure::Input(format!("{}:{}:{}: {}", path.display(), e.line, e.col, e.message)))?;
    match max_degree {
        Some(d) if d != setup.truncation() => Ok(setup.with_truncation(d)?),
        _ => Ok(setup),
    }
}

fn literal_error(flag: &str, e: ParseError) -> Failure {
    Failure::Input(format!("{flag}: column {}: {}", e.col, e.message))
}

fn run(cli: Cli) -> Result<(String, i32), Failure> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let out = |text: String, value: serde_json::Value| match format {
        Format::Text => text,
        Format::Json => json_text(&value),
    };
    match cli.command {
        Command::Blowup { file } => {
            let s = load(&file, cli.max_degree)?;
            let p = s.presentation()?;
            let text = format!("{} presentation, valid through degree {}\n{p}\n", p.kind, p.valid_through);
            Ok((out(text, presentation_json(&p)), 0))
        }
        Command::Keel { file } => {
            let s = load(&file, cli.max_degree)?;
            let p = s.keel_presentation()?;
            Ok((out(format!("{p}\n"), presentation_json(&p)), 0))
        }
        Command::Pbundle { file } => {
            let s = load(&file, cli.max_degree)?;
            let r = s.exceptional_ring();
            Ok((out(format!("{r}\n"), ring_json(r, s.truncation())), 0))
        }
        Command::Gysin { file, class } => {
            let s = load(&file, cli.max_degree)?;
            let alpha = parse_polynomial(&class, s.rx().sig()).map_err(|e| literal_error("--class", e))?;
            let g = s.gysin_pullback(&alpha)?;
            let v = json!({ "class": poly_json(&alpha), "gysin": poly_json(&g) });
            Ok((out(format!("{g}\n"), v), 0))
        }
        Command::Chern { file, total_chern_y } => {
            let s = load(&file, cli.max_degree)?;
            let cy = parse_polynomial(&total_chern_y, s.ry().sig()).map_err(|e| literal_error("--total-chern-y", e))?;
            let res = s.total_chern_blowup(&cy)?;
            let p = s.presentation()?;
            let c = s.to_presentation(&p, &res.class)?;
            let v = json!({
                "presentation": p.to_string(),
                "kind": p.kind.to_string(),
                "valid_through": p.valid_through,
                "total_chern": poly_json(&c),
                "correction": poly_json(&res.correction),
                "pair": { "y": poly_json(res.class.y_part()), "exceptional": poly_json(res.class.exc_part()) },
            });
            Ok((out(format!("{c}\n"), v), 0))
        }
        Command::Verify { file, degree } => {
            let s = load(&file, cli.max_degree)?;
            let p = s.presentation()?;
            let degrees: Vec<u32> = match degree {
                Some(k) => vec![k],
                None => (0..=s.truncation()).collect(),
            };
            let reports =
                degrees.into_iter().map(|k| s.verify_key_sequence_with(&p, k)).collect::<Result<Vec<_>, _>>()?;
            let all = reports.iter().all(|r| r.holds());
            let text: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let v = json!({ "exact": all, "reports": reports.iter().map(exactness_json).collect::<Vec<_>>() });
            Ok((out(text, v), if all { 0 } else { 2 }))
        }
        Command::Pieces { file } => {
            let s = load(&file, cli.max_degree)?;
            let pieces = (0..=s.truncation())
                .map(|k| Ok((k, s.blowup_graded_piece(k)?)))
                .collect::<Result<Vec<_>, BlowupError>>()?;
            let v = json!({ "pieces": pieces.iter().map(|(k, p)| smith_json(*k, p)).collect::<Vec<_>>() });
            Ok((out(pieces_text(&pieces), v), 0))
        }
        Command::Validate { file } => {
            let s = load(&file, cli.max_degree)?;
            let rep = validate_setup(s.pullback(), s.pushforward(), s.bundle(), s.codim(), s.truncation());
            let checks: Vec<_> =
                rep.checks.iter().map(|c| json!({ "check": c.name, "outcome": format!("{:?}", c.outcome) })).collect();
            Ok((out(format!("{rep}\n"), json!({ "valid": rep.is_ok(), "checks": checks })), 0))
        }
        Command::Render { file } => {
            let s = load(&file, cli.max_degree)?;
            let text = render_setup(&s);
            Ok((out(text.clone(), json!({ "setup": text })), 0))
        }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: msg, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: msg }
            };
        }
    };
    match run(cli) {
        Ok((stdout, code)) => CliOutput { code, stdout, stderr: String::new() },
        Err(Failure::Input(m)) => CliOutput { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Internal(m)) => CliOutput { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}
