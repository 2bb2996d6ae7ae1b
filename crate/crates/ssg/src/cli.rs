// SPDX-License-Identifier: Apache-2.0

//! Command-line driver.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::format::{self, PresentationFile};
use crate::{check, collapsed_file, dot, Checked, Error};

#[derive(Debug, Parser)]
#[command(name = "ssg", version, about = "Simplicity of algebras attached to self-similar groupoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and print the report.
    Check(Common),
    /// Print the nucleus of the collapsed system.
    Nucleus(Common),
    /// Print the collapsed system as a presentation file.
    Collapse(Common),
    /// Print Δ and its synchronized vertices.
    Delta(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    pub file: PathBuf,
    /// Field characteristic, 0 or a prime; repeatable. Overrides the file.
    #[arg(long = "field", value_name = "0|p")]
    pub fields: Vec<u64>,
    /// Write the JSON report here.
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Write moore.dot, h.dot and delta.dot into this directory.
    #[arg(long, value_name = "DIR")]
    pub dot: Option<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn load(common: &Common) -> Result<PresentationFile, Error> {
    let text = fs::read_to_string(&common.file).map_err(io_err(&common.file))?;
    let mut file = format::parse(&text)?;
    if !common.fields.is_empty() {
        file.options.fields = common.fields.clone();
        file.fields()?;
    }
    Ok(file)
}

fn write_artifacts(common: &Common, checked: &Checked) -> Result<(), Error> {
    if let Some(path) = &common.json {
        fs::write(path, checked.report.to_json()).map_err(io_err(path))?;
    }
    if let Some(dir) = &common.dot {
        if let (Some(store), Some(a)) = (checked.outcome.collapsed_store(), checked.outcome.analysis()) {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            for (name, text) in dot::all(store, a) {
                let path = dir.join(name);
                fs::write(&path, text).map_err(io_err(&path))?;
            }
        }
    }
    Ok(())
}

/// Runs one command, writing to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let (Command::Check(common) | Command::Nucleus(common) | Command::Collapse(common) | Command::Delta(common)) =
        &cli.command;
    let file = load(common)?;
    let checked = check(&file)?;
    write_artifacts(common, &checked)?;
    let report = &checked.report;
    let text = match &cli.command {
        Command::Check(_) => report.render_text(),
        Command::Nucleus(_) => match &report.nucleus {
            Some(n) => {
                let mut s = serde_json::to_string_pretty(n).expect("plain data serializes");
                s.push('\n');
                s
            }
            None => format!("{}\n", report.verdict.reason.as_deref().unwrap_or("no nucleus")),
        },
        Command::Collapse(_) => match collapsed_file(&file, &checked.outcome) {
            Some(c) => {
                let mut s = c.to_json();
                s.push('\n');
                s
            }
            None => format!("{}\n", report.verdict.reason.as_deref().unwrap_or("no collapse")),
        },
        Command::Delta(_) => match report.structure.as_ref().filter(|s| s.error.is_none()) {
            Some(s) => {
                let mut t = serde_json::to_string_pretty(&s.delta).expect("plain data serializes");
                t.push('\n');
                t
            }
            None => format!("{}\n", report.verdict.reason.as_deref().unwrap_or("no Δ")),
        },
    };
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    let code = match &cli.command {
        Command::Collapse(_) if checked.outcome.collapsed().is_some() => 0,
        _ => report.exit_code(),
    };
    Ok(code)
}

pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
