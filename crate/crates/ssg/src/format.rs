// SPDX-License-Identifier: Apache-2.0

//! JSON presentation files.

use serde::{Deserialize, Serialize};
use ssg_core::algebra::Field;
use ssg_core::catalog::Presentation;
use ssg_core::graph::{RawEdge, RawGraph};
use ssg_core::machine::{GeneratorSpec, RuleSpec, Token, DEFAULT_STATE_CAP};
use ssg_core::nucleus::NucleusLimits;
use ssg_core::pipeline::PipelineOptions;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub graph: GraphFile,
    #[serde(default)]
    pub generators: Vec<GeneratorFile>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub id: String,
    pub src: String,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub name: String,
    pub dom: String,
    pub im: String,
    pub rules: Vec<RuleFile>,
}

/// `restriction` lists generator names, `name^-1` for inverses; the word
/// `[t1, …, tk]` means the product with `tk` applied first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub edge: String,
    pub image: String,
    #[serde(default)]
    pub restriction: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    /// `0` for the rationals, otherwise a prime.
    pub fields: Vec<u64>,
    pub bounds: Bounds,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fields: vec![0, 2, 3],
            bounds: Bounds::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Bounds {
    pub nucleus_states: usize,
    pub nucleus_depth: usize,
    pub tight_depth: usize,
    pub oracle_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            nucleus_states: 10_000,
            nucleus_depth: 12,
            tight_depth: 12,
            oracle_depth: 12,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Json {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("options.fields: {0} is neither 0 nor a prime")]
    BadField(u64),
}

pub fn parse(text: &str) -> Result<PresentationFile, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: PresentationFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ParseError::Json {
            path: if path == "." { String::from("<root>") } else { path },
            message: strip_position(&inner.to_string()),
            line: inner.line(),
            column: inner.column(),
        }
    })?;
    file.fields()?;
    Ok(file)
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

impl PresentationFile {
    pub fn presentation(&self) -> Presentation {
        Presentation {
            graph: RawGraph {
                vertices: self.graph.vertices.clone(),
                edges: self.graph.edges.iter().map(|e| RawEdge::new(&e.id, &e.src, &e.rng)).collect(),
            },
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorSpec {
                    name: g.name.clone(),
                    dom: g.dom.clone(),
                    im: g.im.clone(),
                    rules: g
                        .rules
                        .iter()
                        .map(|r| RuleSpec {
                            edge: r.edge.clone(),
                            image: r.image.clone(),
                            restriction: r.restriction.iter().map(|t| Token::parse(t)).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn fields(&self) -> Result<Vec<Field>, ParseError> {
        self.options
            .fields
            .iter()
            .map(|&c| Field::from_characteristic(c).map_err(|_| ParseError::BadField(c)))
            .collect()
    }

    pub fn pipeline_options(&self) -> Result<PipelineOptions, ParseError> {
        let b = self.options.bounds;
        Ok(PipelineOptions {
            fields: self.fields()?,
            nucleus: NucleusLimits {
                max_elements: b.nucleus_states,
                max_depth: b.nucleus_depth,
                ..NucleusLimits::default()
            },
            oracle_depth: b.oracle_depth,
            state_cap: DEFAULT_STATE_CAP,
        })
    }

    pub fn from_presentation(p: &Presentation, options: Options) -> PresentationFile {
        PresentationFile {
            graph: GraphFile {
                vertices: p.graph.vertices.clone(),
                edges: p
                    .graph
                    .edges
                    .iter()
                    .map(|e| EdgeFile {
                        id: e.id.clone(),
                        src: e.src.clone(),
                        rng: e.rng.clone(),
                    })
                    .collect(),
            },
            generators: p
                .generators
                .iter()
                .map(|g| GeneratorFile {
                    name: g.name.clone(),
                    dom: g.dom.clone(),
                    im: g.im.clone(),
                    rules: g
                        .rules
                        .iter()
                        .map(|r| RuleFile {
                            edge: r.edge.clone(),
                            image: r.image.clone(),
                            restriction: r.restriction.iter().map(|t| t.to_string()).collect(),
                        })
                        .collect(),
                })
                .collect(),
            options,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// One line per generator: `c: e→e, f→f·d`.
pub fn recursion_echo(p: &Presentation) -> Vec<String> {
    p.generators
        .iter()
        .map(|g| {
            let rules: Vec<String> = g
                .rules
                .iter()
                .map(|r| {
                    let w: Vec<String> = r.restriction.iter().map(|t| t.to_string()).collect();
                    if w.is_empty() {
                        format!("{}→{}", r.edge, r.image)
                    } else {
                        format!("{}→{}·{}", r.edge, r.image, w.join(" "))
                    }
                })
                .collect();
            format!("{} ({}→{}): {}", g.name, g.dom, g.im, rules.join(", "))
        })
        .collect()
}
