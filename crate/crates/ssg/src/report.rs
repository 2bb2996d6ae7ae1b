// SPDX-License-Identifier: Apache-2.0

//! Serializable run reports.

use std::fmt::Write as _;

use serde::Serialize;
use ssg_core::algebra::Field;
use ssg_core::catalog::Presentation;
use ssg_core::graph::{Graph, Path};
use ssg_core::machine::{ElementRef, MachineStore};
use ssg_core::pipeline::{Analysis, Outcome};
use ssg_core::simplicity::KernelReport;

use crate::format::{recursion_echo, Bounds};

/// How a stage's claims were established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Decided by a terminating exact computation.
    Exact,
    /// Checked up to a stated depth.
    Bounded,
    /// Not run, or not valid, because a prerequisite failed.
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub input: InputSummary,
    pub bounds: Bounds,
    pub fields: Vec<String>,
    pub cf: CfSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collapse: Option<CollapseSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nucleus: Option<NucleusSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureSection>,
    pub verdict: VerdictSection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub generators: usize,
    pub recursion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfSection {
    pub evidence: Evidence,
    pub holds: bool,
    pub orbits: Vec<Vec<String>>,
    /// `(vertex, out-degree)`.
    pub condition1_failures: Vec<(String, usize)>,
    /// Ordered pairs `(v, w)`: nothing reachable from `w` lies in the orbit of `v`.
    pub condition2_failures: Vec<(String, String)>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connector {
    pub vertex: String,
    pub rep: String,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseSection {
    pub evidence: Evidence,
    pub reps: Vec<String>,
    pub connectors: Vec<Connector>,
    pub vertices: usize,
    pub edges: usize,
    pub generators: Vec<String>,
    pub recursion: Vec<String>,
    pub check: CollapseCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseCheck {
    pub evidence: Evidence,
    pub depth: usize,
    pub checked_steps: usize,
    /// No new state pairs appeared before `depth`.
    pub saturated: bool,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NucleusSection {
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub elements: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureSection {
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub moore_edges: usize,
    pub h_edges: usize,
    pub cycles: Vec<String>,
    pub delta: DeltaSection,
    pub recurrent: Vec<SubgroupSection>,
    pub kernels: Vec<KernelSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeltaSection {
    pub vertices: Vec<String>,
    /// `(from, edge, to)` by vertex label.
    pub edges: Vec<(String, String, String)>,
    pub synchronized: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupSection {
    pub base: String,
    pub elements: Vec<String>,
    pub witness: Vec<String>,
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelSection {
    pub base: String,
    pub witness: Vec<String>,
    pub columns: Vec<String>,
    /// One 0/1 string per coset, in column order.
    pub rows: Vec<String>,
    pub snf_divisors: Vec<String>,
    pub rank: usize,
    pub bad_in_characteristic_zero: bool,
    pub bad_primes: Vec<u64>,
    pub fields: Vec<FieldKernel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldKernel {
    pub field: String,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictSection {
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_field: Option<Vec<(String, bool)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cstar_simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn path_names(graph: &Graph, p: &Path) -> Vec<String> {
    p.edges().iter().map(|&e| graph.edge_name(e).to_string()).collect()
}

fn labels(store: &MachineStore, elements: &[ElementRef]) -> Vec<String> {
    elements.iter().map(|&g| store.label(g)).collect()
}

impl Report {
    pub fn build(p: &Presentation, bounds: Bounds, fields: &[Field], outcome: &Outcome) -> Report {
        let graph = &outcome.loaded.graph;
        let vname = |v| graph.vertex_name(v).to_string();
        let (holds, condition1_failures, condition2_failures, note, evidence) = match &outcome.cf {
            Ok(cf) => (
                cf.holds,
                cf.condition1_failures.iter().map(|&(v, d)| (vname(v), d)).collect(),
                cf.condition2_failures.iter().map(|&(v, w)| (vname(v), vname(w))).collect(),
                cf.explanation.clone(),
                Evidence::Exact,
            ),
            Err(e) => (false, Vec::new(), Vec::new(), e.to_string(), Evidence::Inapplicable),
        };
        let cf = CfSection {
            evidence,
            holds,
            orbits: outcome.orbits.classes().iter().map(|c| c.iter().map(|&v| vname(v)).collect()).collect(),
            condition1_failures,
            condition2_failures,
            note,
        };

        let collapse = outcome.collapse.as_ref().map(|c| match c {
            Ok(stage) => {
                let choice = &stage.choice;
                let connectors = graph
                    .vertices()
                    .filter(|&v| !choice.orbits().is_rep(v))
                    .map(|v| Connector {
                        vertex: vname(v),
                        rep: vname(choice.rep(v)),
                        word: choice.connector_word(v).iter().map(|t| t.to_string()).collect(),
                    })
                    .collect();
                let system = &stage.system;
                let collapsed = Presentation {
                    graph: system.raw_graph.clone(),
                    generators: system.specs.clone(),
                };
                CollapseSection {
                    evidence: Evidence::Exact,
                    reps: choice.reps().into_iter().map(vname).collect(),
                    connectors,
                    vertices: system.graph.vertex_count(),
                    edges: system.graph.edge_count(),
                    generators: system.specs.iter().map(|g| g.name.clone()).collect(),
                    recursion: recursion_echo(&collapsed),
                    check: CollapseCheck {
                        evidence: if stage.check.saturated { Evidence::Exact } else { Evidence::Bounded },
                        depth: stage.check.depth,
                        checked_steps: stage.check.checked_steps,
                        saturated: stage.check.saturated,
                        passed: stage.check.passed(),
                        mismatch: stage.check.first_mismatch.as_ref().map(|m| {
                            format!(
                                "{} on {} (depth {}): expected {}, found {}",
                                m.generator,
                                m.path.join(""),
                                m.depth,
                                m.expected.join(""),
                                m.found.join("")
                            )
                        }),
                    },
                }
            }
            Err(e) => CollapseSection {
                evidence: Evidence::Inapplicable,
                reps: Vec::new(),
                connectors: Vec::new(),
                vertices: 0,
                edges: 0,
                generators: Vec::new(),
                recursion: vec![e.to_string()],
                check: CollapseCheck {
                    evidence: Evidence::Inapplicable,
                    depth: 0,
                    checked_steps: 0,
                    saturated: false,
                    passed: false,
                    mismatch: None,
                },
            },
        });

        let cstore = outcome.collapsed_store();
        let nucleus = outcome.nucleus.as_ref().map(|n| match n {
            Ok(n) => {
                let store = cstore.expect("nucleus runs on the collapsed system");
                NucleusSection {
                    evidence: Evidence::Exact,
                    size: Some(n.len()),
                    elements: labels(store, &n.elements),
                    certificate_depth: Some(n.certificate_depth),
                    rounds: Some(n.rounds),
                    diagnostic: None,
                }
            }
            Err(e) => NucleusSection {
                evidence: Evidence::Inapplicable,
                size: None,
                elements: Vec::new(),
                certificate_depth: None,
                rounds: None,
                diagnostic: Some(e.to_string()),
            },
        });

        let structure = outcome.analysis.as_ref().map(|a| {
            let store = cstore.expect("analysis runs on the collapsed system");
            match a {
                Ok(a) => structure_section(store, a),
                Err(e) => StructureSection {
                    evidence: Evidence::Inapplicable,
                    error: Some(e.to_string()),
                    moore_edges: 0,
                    h_edges: 0,
                    cycles: Vec::new(),
                    delta: DeltaSection::default(),
                    recurrent: Vec::new(),
                    kernels: Vec::new(),
                },
            }
        });

        let verdict = match &outcome.verdict {
            Ok(v) => VerdictSection {
                evidence: Evidence::Exact,
                per_field: Some(v.per_field.iter().map(|(f, s)| (f.to_string(), *s)).collect()),
                summary: Some(v.summary.to_string()),
                cstar_simple: outcome.cstar_simple(),
                reason: None,
            },
            Err(e) => VerdictSection {
                evidence: Evidence::Inapplicable,
                per_field: None,
                summary: None,
                cstar_simple: None,
                reason: Some(e.0.clone()),
            },
        };

        Report {
            input: InputSummary {
                vertices: graph.vertex_count(),
                edges: graph.edge_count(),
                generators: p.generators.len(),
                recursion: recursion_echo(p),
            },
            bounds,
            fields: fields.iter().map(|f| f.to_string()).collect(),
            cf,
            collapse,
            nucleus,
            structure,
            verdict,
        }
    }

    /// 0 when decided, 2 when inapplicable or a cap was hit.
    pub fn exit_code(&self) -> i32 {
        match self.verdict.evidence {
            Evidence::Exact => 0,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let i = &self.input;
        let _ = writeln!(out, "input: {} vertices, {} edges, {} generators", i.vertices, i.edges, i.generators);
        for line in &i.recursion {
            let _ = writeln!(out, "  {line}");
        }
        let b = &self.bounds;
        let _ = writeln!(
            out,
            "bounds: nucleus_states={} nucleus_depth={} tight_depth={} oracle_depth={}",
            b.nucleus_states, b.nucleus_depth, b.tight_depth, b.oracle_depth
        );
        let orbits: Vec<String> = self.cf.orbits.iter().map(|c| format!("{{{}}}", c.join(","))).collect();
        let _ = writeln!(out, "orbits: {}", orbits.join(" "));
        let _ = writeln!(out, "CF [{}]: {}", evidence(self.cf.evidence), if self.cf.holds { "holds" } else { "fails" });
        for (v, d) in &self.cf.condition1_failures {
            let _ = writeln!(out, "  condition 1 fails at {v} (out-degree {d})");
        }
        for (v, w) in &self.cf.condition2_failures {
            let _ = writeln!(out, "  condition 2 fails for ({v}, {w})");
        }
        if self.cf.evidence == Evidence::Inapplicable {
            let _ = writeln!(out, "  {}", self.cf.note);
        }
        if let Some(c) = &self.collapse {
            let _ = writeln!(
                out,
                "collapse [{}]: reps {{{}}}, {} vertices, {} edges, {} generators",
                evidence(c.evidence),
                c.reps.join(","),
                c.vertices,
                c.edges,
                c.generators.len()
            );
            for k in &c.connectors {
                let _ = writeln!(out, "  connector {}→{}: {}", k.vertex, k.rep, k.word.join(" "));
            }
            let _ = writeln!(
                out,
                "  check [{}] depth {}: {} steps, {}",
                evidence(c.check.evidence),
                c.check.depth,
                c.check.checked_steps,
                match (c.check.passed, c.check.saturated) {
                    (true, true) => "agrees on all paths",
                    (true, false) => "agrees",
                    _ => "MISMATCH",
                }
            );
            if let Some(m) = &c.check.mismatch {
                let _ = writeln!(out, "  {m}");
            }
        }
        if let Some(n) = &self.nucleus {
            match n.size {
                Some(size) => {
                    let _ = writeln!(
                        out,
                        "nucleus [{}]: |N| = {size}, certificate depth {}",
                        evidence(n.evidence),
                        n.certificate_depth.unwrap_or(0)
                    );
                    let _ = writeln!(out, "  {}", n.elements.join(", "));
                }
                None => {
                    let _ = writeln!(out, "nucleus [{}]: {}", evidence(n.evidence), n.diagnostic.as_deref().unwrap_or(""));
                }
            }
        }
        if let Some(s) = &self.structure {
            if let Some(e) = &s.error {
                let _ = writeln!(out, "structure [{}]: {e}", evidence(s.evidence));
            } else {
                let _ = writeln!(out, "cycles: {{{}}}", s.cycles.join(", "));
                let _ = writeln!(
                    out,
                    "delta: {} vertices, {} synchronized",
                    s.delta.vertices.len(),
                    s.delta.synchronized.len()
                );
                let unsync: Vec<&String> = s.delta.vertices.iter().filter(|v| !s.delta.synchronized.contains(v)).collect();
                if !unsync.is_empty() {
                    let names: Vec<&str> = unsync.iter().map(|v| v.as_str()).collect();
                    let _ = writeln!(out, "  not synchronized: {}", names.join(" "));
                }
                let nontrivial: Vec<&SubgroupSection> = s.recurrent.iter().filter(|r| !r.trivial).collect();
                let _ = writeln!(
                    out,
                    "recurrent subgroups: {} ({} nontrivial)",
                    s.recurrent.len(),
                    nontrivial.len()
                );
                for k in s.kernels.iter().filter(|k| k.columns.len() > 1) {
                    let _ = writeln!(out, "  H at {} witness {}: {{{}}}", k.base, k.witness.join(""), k.columns.join(", "));
                    let _ = writeln!(out, "    rows {}", k.rows.join(" "));
                    let _ = writeln!(out, "    snf divisors [{}], rank {}", k.snf_divisors.join(", "), k.rank);
                    for f in &k.fields {
                        let basis: Vec<String> = f.basis.iter().map(|v| format!("({})", v.join(","))).collect();
                        let shown = if basis.is_empty() { String::from("0") } else { basis.join(" ") };
                        let _ = writeln!(out, "    kernel over {}: {shown}", f.field);
                    }
                }
            }
        }
        let v = &self.verdict;
        match (&v.summary, &v.reason) {
            (Some(summary), _) => {
                let per: Vec<String> = v
                    .per_field
                    .iter()
                    .flatten()
                    .map(|(f, s)| format!("{f}: {}", if *s { "simple" } else { "not simple" }))
                    .collect();
                let _ = writeln!(out, "verdict [{}]: {summary}", evidence(v.evidence));
                let _ = writeln!(out, "  {}", per.join(", "));
                let _ = writeln!(
                    out,
                    "  reduced C*-algebra: {}",
                    if v.cstar_simple == Some(true) { "simple" } else { "not simple" }
                );
            }
            (None, reason) => {
                let _ = writeln!(out, "verdict [{}]: {}", evidence(v.evidence), reason.as_deref().unwrap_or(""));
            }
        }
        out
    }
}

fn evidence(e: Evidence) -> &'static str {
    match e {
        Evidence::Exact => "exact",
        Evidence::Bounded => "bounded",
        Evidence::Inapplicable => "inapplicable",
    }
}

pub fn delta_section(store: &MachineStore, a: &Analysis) -> DeltaSection {
    let graph = store.graph();
    let label = |i: usize| a.delta.vertex_label(store, i);
    DeltaSection {
        vertices: (0..a.delta.len()).map(label).collect(),
        edges: a
            .delta
            .edges
            .iter()
            .map(|&(i, e, j)| (label(i), graph.edge_name(e).to_string(), label(j)))
            .collect(),
        synchronized: a.synchronized.iter().map(|&i| label(i)).collect(),
    }
}

fn kernel_section(store: &MachineStore, k: &KernelReport) -> KernelSection {
    let graph = store.graph();
    let m = &k.matrix;
    KernelSection {
        base: graph.vertex_name(k.subgroup.base).to_string(),
        witness: path_names(graph, &k.subgroup.witness),
        columns: labels(store, &k.subgroup.elements),
        rows: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        snf_divisors: k.snf.divisors.iter().map(|d| d.to_string()).collect(),
        rank: k.snf.rank,
        bad_in_characteristic_zero: k.bad_in_characteristic_zero,
        bad_primes: k.bad_primes.clone(),
        fields: k
            .kernels
            .iter()
            .map(|(f, basis)| FieldKernel {
                field: f.to_string(),
                basis: basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
            })
            .collect(),
    }
}

fn structure_section(store: &MachineStore, a: &Analysis) -> StructureSection {
    let graph = store.graph();
    StructureSection {
        evidence: Evidence::Exact,
        error: None,
        moore_edges: a.moore.edges.len(),
        h_edges: a.h.edges.len(),
        cycles: labels(store, &a.cycles),
        delta: delta_section(store, a),
        recurrent: a
            .recurrent
            .iter()
            .map(|r| SubgroupSection {
                base: graph.vertex_name(r.base).to_string(),
                elements: labels(store, &r.elements),
                witness: path_names(graph, &r.witness),
                trivial: r.is_trivial(),
            })
            .collect(),
        kernels: a.kernels.iter().map(|k| kernel_section(store, k)).collect(),
    }
}
