// SPDX-License-Identifier: Apache-2.0

//! The full decision procedure: CF test, collapse, nucleus, Δ, recurrent
//! subgroups, kernels and verdicts. Each stage keeps its artifact so callers
//! can report partial progress.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Field;
use crate::catalog::Presentation;
use crate::collapse::{self, CollapseChoice, CollapseError, CollapseReport, CollapsedSystem};
use crate::graph::{Graph, GraphError};
use crate::machine::{ElementRef, MachineError, MachineStore, DEFAULT_STATE_CAP};
use crate::nucleus::{self, MooreDiagram, NucleusError, NucleusLimits, NucleusResult};
use crate::simplicity::{self, DeltaGraph, Inapplicable, KernelReport, RecurrentSubgroup, SimplicityError, SimplicityVerdict};
use crate::structure::{self, CfVerdict, OrbitPartition, StructureError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    pub fields: Vec<Field>,
    pub nucleus: NucleusLimits,
    /// Depth of the independent collapse check.
    pub oracle_depth: usize,
    pub state_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            fields: vec![Field::Rational, Field::Prime(2), Field::Prime(3)],
            nucleus: NucleusLimits::default(),
            oracle_depth: 6,
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

/// Problems with the input itself.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

pub struct Loaded {
    pub graph: Graph,
    pub store: MachineStore,
}

pub fn load(p: &Presentation, state_cap: usize) -> Result<Loaded, InputError> {
    let graph = Graph::new(&p.graph)?;
    let (store, _) = MachineStore::load_generators_with_cap(&graph, &p.generators, state_cap)?;
    Ok(Loaded { graph, store })
}

pub struct CollapseStage {
    pub choice: CollapseChoice,
    pub system: CollapsedSystem,
    pub check: CollapseReport,
}

pub fn collapse_stage(store: &mut MachineStore, orbits: &OrbitPartition, oracle_depth: usize) -> Result<CollapseStage, CollapseError> {
    let choice = collapse::choose_collapse(store, orbits)?;
    let system = collapse::collapse(store, &choice)?;
    let check = collapse::verify_collapse(store, &choice, &system, oracle_depth);
    Ok(CollapseStage { choice, system, check })
}

/// Everything computed from the nucleus of the collapsed system.
pub struct Analysis {
    pub moore: MooreDiagram,
    pub h: MooreDiagram,
    pub cycles: Vec<ElementRef>,
    pub delta: DeltaGraph,
    pub synchronized: Vec<usize>,
    pub recurrent: Vec<RecurrentSubgroup>,
    pub kernels: Vec<KernelReport>,
}

pub fn analyze(store: &mut MachineStore, nucleus: &NucleusResult, fields: &[Field]) -> Result<Analysis, SimplicityError> {
    let moore = nucleus::moore_diagram(store, nucleus);
    let h = nucleus::h_subgraph(&moore);
    let cycles = nucleus::cycle_vertices(&h);
    let delta = simplicity::build_delta(store, &cycles)?;
    let graph = store.graph().clone();
    let synchronized = simplicity::synchronized_vertices(&delta, &graph)?;
    let recurrent = simplicity::recurrent_subgroups(store, &h, &cycles)?;
    let kernels = recurrent
        .iter()
        .map(|r| simplicity::kernel_report(store, r, &delta, &synchronized, fields))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Analysis {
        moore,
        h,
        cycles,
        delta,
        synchronized,
        recurrent,
        kernels,
    })
}

pub struct Outcome {
    pub loaded: Loaded,
    pub orbits: OrbitPartition,
    pub cf: Result<CfVerdict, StructureError>,
    pub collapse: Option<Result<CollapseStage, CollapseError>>,
    pub nucleus: Option<Result<NucleusResult, NucleusError>>,
    pub analysis: Option<Result<Analysis, SimplicityError>>,
    pub verdict: Result<SimplicityVerdict, Inapplicable>,
}

impl Outcome {
    pub fn collapsed(&self) -> Option<&CollapseStage> {
        self.collapse.as_ref().and_then(|c| c.as_ref().ok())
    }

    pub fn collapsed_store(&self) -> Option<&MachineStore> {
        self.collapsed().map(|c| &c.system.store)
    }

    pub fn nucleus(&self) -> Option<&NucleusResult> {
        self.nucleus.as_ref().and_then(|n| n.as_ref().ok())
    }

    pub fn analysis(&self) -> Option<&Analysis> {
        self.analysis.as_ref().and_then(|a| a.as_ref().ok())
    }

    pub fn cstar_simple(&self) -> Option<bool> {
        self.verdict.as_ref().ok().map(simplicity::cstar_verdict)
    }
}

fn inapplicable(reason: String) -> Result<SimplicityVerdict, Inapplicable> {
    Err(Inapplicable(reason))
}

pub fn run(p: &Presentation, options: &PipelineOptions) -> Result<Outcome, InputError> {
    let loaded = load(p, options.state_cap)?;
    let orbits = structure::orbit_partition(&loaded.store);
    let cf = structure::is_type_cf(&loaded.graph, &orbits);
    let mut outcome = Outcome {
        loaded,
        orbits,
        cf,
        collapse: None,
        nucleus: None,
        analysis: None,
        verdict: inapplicable(String::new()),
    };
    let cf = match &outcome.cf {
        Err(e) => {
            outcome.verdict = inapplicable(format!("{e}"));
            return Ok(outcome);
        }
        Ok(v) if !v.holds => {
            outcome.verdict = inapplicable(String::from("the system is not of type CF"));
            return Ok(outcome);
        }
        Ok(v) => v.clone(),
    };
    let stage = collapse_stage(&mut outcome.loaded.store, &outcome.orbits, options.oracle_depth);
    let mut stage = match stage {
        Ok(s) => s,
        Err(e) => {
            outcome.verdict = inapplicable(format!("collapse failed: {e}"));
            outcome.collapse = Some(Err(e));
            return Ok(outcome);
        }
    };
    if !stage.check.passed() {
        outcome.verdict = inapplicable(String::from("the collapsed system disagrees with the original action"));
        outcome.collapse = Some(Ok(stage));
        return Ok(outcome);
    }
    let nucleus = nucleus::compute_nucleus(&mut stage.system.store, options.nucleus);
    let contraction = nucleus.as_ref().map(|_| ()).map_err(|e| format!("{e}"));
    if let Ok(n) = &nucleus {
        let analysis = analyze(&mut stage.system.store, n, &options.fields);
        outcome.verdict = match &analysis {
            Ok(a) => simplicity::simplicity_verdict(&cf, contraction, &a.kernels, &options.fields),
            Err(e) => inapplicable(format!("{e}")),
        };
        outcome.analysis = Some(analysis);
    } else {
        outcome.verdict = simplicity::simplicity_verdict(&cf, contraction, &[], &options.fields);
    }
    outcome.nucleus = Some(nucleus);
    outcome.collapse = Some(Ok(stage));
    Ok(outcome)
}
