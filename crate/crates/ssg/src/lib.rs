// SPDX-License-Identifier: Apache-2.0

//! File formats, reports and diagrams around [`ssg_core`].

pub mod cli;
pub mod dot;
pub mod format;
pub mod report;

use ssg_core::machine::MachineError;
use ssg_core::pipeline::{self, InputError, Outcome};

use crate::format::{ParseError, PresentationFile};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Input(#[from] InputError),
}

impl Error {
    /// 2 when a resource cap stopped the run, 1 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(InputError::Machine(MachineError::StateCap { .. })) => 2,
            _ => 1,
        }
    }
}

pub struct Checked {
    pub outcome: Outcome,
    pub report: Report,
}

/// Runs the whole pipeline on a parsed file.
pub fn check(file: &PresentationFile) -> Result<Checked, Error> {
    let options = file.pipeline_options()?;
    let presentation = file.presentation();
    let outcome = pipeline::run(&presentation, &options)?;
    let report = Report::build(&presentation, file.options.bounds, &options.fields, &outcome);
    Ok(Checked { outcome, report })
}

/// The collapsed system as a presentation file carrying the original options.
pub fn collapsed_file(file: &PresentationFile, outcome: &Outcome) -> Option<PresentationFile> {
    let stage = outcome.collapsed()?;
    let p = ssg_core::catalog::Presentation {
        graph: stage.system.raw_graph.clone(),
        generators: stage.system.specs.clone(),
    };
    Some(PresentationFile::from_presentation(&p, file.options.clone()))
}
