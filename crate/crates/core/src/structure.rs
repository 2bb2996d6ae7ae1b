// SPDX-License-Identifier: Apache-2.0

//! Orbits of the groupoid on vertices, and the congruence-freeness test.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, VertexId};
use crate::machine::{ElementRef, MachineError, MachineStore, Token};

/// Orbits with one representative (the least vertex) per class and, for
/// every vertex `u`, a shortest generator word evaluating into `Iso(u, rep u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    rep_of: Vec<VertexId>,
    classes: Vec<Vec<VertexId>>,
    witnesses: Vec<Vec<Token>>,
}

/// Generator tokens in connector order: declaration index, plain before
/// inverse.
pub fn ordered_tokens(store: &MachineStore) -> Vec<(Token, VertexId, VertexId)> {
    let mut out = Vec::new();
    for (name, g) in store.generators() {
        let (d, i) = (store.dom(g), store.im(g));
        out.push((Token::plain(&name), d, i));
        out.push((Token::inverted(&name), i, d));
    }
    out
}

pub fn orbit_partition(store: &MachineStore) -> OrbitPartition {
    let graph = store.graph();
    let n = graph.vertex_count();
    let tokens = ordered_tokens(store);
    let mut rep_of: Vec<Option<VertexId>> = vec![None; n];
    let mut witnesses: Vec<Vec<Token>> = vec![Vec::new(); n];
    let mut classes = Vec::new();
    for rep in graph.vertices() {
        if rep_of[rep.index()].is_some() {
            continue;
        }
        // Words t1…tk with im(t1) = rep; the product has domain dom(tk).
        rep_of[rep.index()] = Some(rep);
        let mut class = vec![rep];
        let mut queue = VecDeque::from([rep]);
        while let Some(cur) = queue.pop_front() {
            for (t, d, i) in &tokens {
                if *i != cur || rep_of[d.index()].is_some() {
                    continue;
                }
                rep_of[d.index()] = Some(rep);
                let mut w = witnesses[cur.index()].clone();
                w.push(t.clone());
                witnesses[d.index()] = w;
                class.push(*d);
                queue.push_back(*d);
            }
        }
        class.sort();
        classes.push(class);
    }
    OrbitPartition {
        rep_of: rep_of.into_iter().map(|r| r.expect("every vertex visited")).collect(),
        classes,
        witnesses,
    }
}

impl OrbitPartition {
    pub fn rep(&self, v: VertexId) -> VertexId {
        self.rep_of[v.index()]
    }

    pub fn is_rep(&self, v: VertexId) -> bool {
        self.rep_of[v.index()] == v
    }

    pub fn reps(&self) -> Vec<VertexId> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    pub fn class_of(&self, v: VertexId) -> &[VertexId] {
        let r = self.rep(v);
        self.classes.iter().find(|c| c[0] == r).expect("class exists")
    }

    pub fn same_orbit(&self, u: VertexId, v: VertexId) -> bool {
        self.rep(u) == self.rep(v)
    }

    pub fn witness(&self, v: VertexId) -> &[Token] {
        &self.witnesses[v.index()]
    }

    /// Evaluates the witness of `v` to an element of `Iso(v, rep v)`.
    pub fn witness_element(&self, store: &mut MachineStore, v: VertexId) -> Result<ElementRef, MachineError> {
        Ok(store
            .evaluate(self.witness(v), v)?
            .expect("witness words are composable by construction"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("the graph has no edges; the congruence-free criterion assumes a nonempty edge set")]
    NoEdges,
}

/// Outcome of the two-condition test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfVerdict {
    pub holds: bool,
    /// Vertices whose out-degree is not greater than one, with the degree.
    pub condition1_failures: Vec<(VertexId, usize)>,
    /// Ordered pairs `(v, w)` such that no vertex in the orbit of `v` is
    /// reachable from `w`.
    pub condition2_failures: Vec<(VertexId, VertexId)>,
    pub explanation: String,
}

pub fn is_type_cf(graph: &Graph, orbits: &OrbitPartition) -> Result<CfVerdict, StructureError> {
    if graph.edge_count() == 0 {
        return Err(StructureError::NoEdges);
    }
    let condition1_failures: Vec<(VertexId, usize)> = graph
        .vertices()
        .map(|v| (v, graph.out_degree(v)))
        .filter(|&(_, d)| d <= 1)
        .collect();
    let reach: Vec<_> = graph.vertices().map(|w| graph.reachable_from(w)).collect();
    let mut condition2_failures = Vec::new();
    for v in graph.vertices() {
        for w in graph.vertices() {
            if v == w {
                continue;
            }
            let hit = orbits.class_of(v).iter().any(|u| reach[w.index()].contains(u));
            if !hit {
                condition2_failures.push((v, w));
            }
        }
    }
    let holds = condition1_failures.is_empty() && condition2_failures.is_empty();
    let explanation = String::from(
        "condition 1: every vertex emits at least two edges; condition 2: for distinct v, w some path from w \
         ends in the orbit of v (G meets Iso(a, v) exactly when a lies in the orbit of v, so the pointwise \
         condition reduces to reachability into orbits)",
    );
    Ok(CfVerdict {
        holds,
        condition1_failures,
        condition2_failures,
        explanation,
    })
}
