// SPDX-License-Identifier: Apache-2.0

//! Nucleus of a contracting groupoid, its Moore diagram, the diagonal
//! subgraph ℋ and the cycle set 𝒞.
//!
//! Contraction is only semi-decided. Starting from the eventual range of
//! the restriction closure of the generators, the candidate set `N` is
//! enlarged by the eventual range of `closure(N·N)` until that range adds
//! nothing new. Caps on `|N|`, on the certificate depth and on the number
//! of rounds turn divergence into a diagnostic.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{EdgeId, VertexId};
use crate::machine::{ElementRef, MachineError, MachineStore};
use crate::scc::Condensation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NucleusLimits {
    /// Largest admissible `|N|`.
    pub max_elements: usize,
    /// Largest admissible certificate depth.
    pub max_depth: usize,
    pub max_rounds: usize,
}

impl Default for NucleusLimits {
    fn default() -> Self {
        NucleusLimits {
            max_elements: 10_000,
            max_depth: 12,
            max_rounds: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NucleusError {
    #[error("not shown contracting within limits {limits:?}: {reason}")]
    NotContractingWithin { limits: NucleusLimits, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleusResult {
    /// Sorted by handle.
    pub elements: Vec<ElementRef>,
    /// Every restriction of a product of two elements of `N` at paths of
    /// this length lies in `N`.
    pub certificate_depth: usize,
    pub rounds: usize,
    pub limits: NucleusLimits,
    /// Vertex identities kept although no cycle of restrictions reaches them.
    pub retained_identities: Vec<VertexId>,
}

impl NucleusResult {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: ElementRef) -> bool {
        self.elements.binary_search(&g).is_ok()
    }
}

fn not_contracting(limits: NucleusLimits, reason: String) -> NucleusError {
    NucleusError::NotContractingWithin { limits, reason }
}

/// Every element reachable from `seeds` by restriction.
pub fn restriction_closure(store: &MachineStore, seeds: &[ElementRef]) -> BTreeSet<ElementRef> {
    let mut seen: BTreeSet<ElementRef> = seeds.iter().copied().collect();
    let mut queue: VecDeque<ElementRef> = seen.iter().copied().collect();
    while let Some(g) = queue.pop_front() {
        for (_, _, r) in store.transitions(g) {
            if seen.insert(r) {
                queue.push_back(r);
            }
        }
    }
    seen
}

/// Elements of a restriction-closed set lying on, or reachable from, a
/// cycle of its restriction graph.
pub fn eventual_range(store: &MachineStore, closed: &BTreeSet<ElementRef>) -> BTreeSet<ElementRef> {
    let items: Vec<ElementRef> = closed.iter().copied().collect();
    let index: BTreeMap<ElementRef, usize> = items.iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let adjacency: Vec<Vec<usize>> = items
        .iter()
        .map(|&g| store.transitions(g).into_iter().map(|(_, _, r)| index[&r]).collect())
        .collect();
    let cond = Condensation::new(&adjacency);
    let mut seen = vec![false; items.len()];
    let mut queue: VecDeque<usize> = cond.cyclic_vertices().into_iter().collect();
    for &i in &queue {
        seen[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        for &j in &adjacency[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    items.into_iter().zip(seen).filter(|&(_, s)| s).map(|(g, _)| g).collect()
}

fn cap_error(limits: NucleusLimits, err: MachineError) -> NucleusError {
    not_contracting(limits, alloc::format!("{err}"))
}

/// Composable products `g·h` with `g, h ∈ n`.
fn products(store: &mut MachineStore, n: &[ElementRef]) -> Result<Vec<ElementRef>, MachineError> {
    let mut out = BTreeSet::new();
    for &g in n {
        for &h in n {
            if let Some(p) = store.multiply(g, h)? {
                out.insert(p);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Smallest `n` such that every restriction of `g` at a path of length at
/// least `n` lies in `target`, if it is at most `max`. The level sets are
/// eventually periodic; the search gives up after `max + LEVEL_SLACK` levels
/// without a repeat.
pub fn absorption_depth(store: &MachineStore, g: ElementRef, target: &BTreeSet<ElementRef>, max: usize) -> Option<usize> {
    let mut seen: BTreeMap<BTreeSet<ElementRef>, usize> = BTreeMap::new();
    let mut levels: Vec<BTreeSet<ElementRef>> = Vec::new();
    let mut level: BTreeSet<ElementRef> = BTreeSet::from([g]);
    while levels.len() <= max + LEVEL_SLACK {
        if let Some(&start) = seen.get(&level) {
            if levels[start..].iter().any(|l| !l.is_subset(target)) {
                return None;
            }
            let mut d = start;
            while d > 0 && levels[d - 1].is_subset(target) {
                d -= 1;
            }
            return (d <= max).then_some(d);
        }
        let next = level
            .iter()
            .flat_map(|&x| store.transitions(x).into_iter().map(|(_, _, r)| r))
            .collect();
        seen.insert(level.clone(), levels.len());
        levels.push(core::mem::replace(&mut level, next));
    }
    None
}

const LEVEL_SLACK: usize = 4096;

pub fn compute_nucleus(store: &mut MachineStore, limits: NucleusLimits) -> Result<NucleusResult, NucleusError> {
    let graph = store.graph().clone();
    let mut seeds: Vec<ElementRef> = graph.vertices().map(|v| store.identity(v)).collect();
    for (_, g) in store.generators() {
        seeds.push(g);
        seeds.push(store.inverse(g));
    }
    let mut n = eventual_range(store, &restriction_closure(store, &seeds));
    let mut rounds = 0;
    loop {
        if n.len() > limits.max_elements {
            return Err(not_contracting(limits, alloc::format!("candidate nucleus exceeds {} elements", limits.max_elements)));
        }
        if rounds >= limits.max_rounds {
            return Err(not_contracting(limits, alloc::format!("no fixed point after {rounds} rounds")));
        }
        rounds += 1;
        let current: Vec<ElementRef> = n.iter().copied().collect();
        let prods = products(store, &current).map_err(|e| cap_error(limits, e))?;
        let grown = eventual_range(store, &restriction_closure(store, &prods));
        let before = n.len();
        n.extend(grown);
        if n.len() == before {
            break;
        }
    }
    let current: Vec<ElementRef> = n.iter().copied().collect();
    let mut certificate_depth = 0;
    for p in products(store, &current).map_err(|e| cap_error(limits, e))? {
        match absorption_depth(store, p, &n, limits.max_depth) {
            Some(d) => certificate_depth = certificate_depth.max(d),
            None => {
                return Err(not_contracting(
                    limits,
                    alloc::format!("product {} not absorbed within depth {}", store.label(p), limits.max_depth),
                ))
            }
        }
    }
    let mut retained_identities = Vec::new();
    for v in graph.vertices() {
        let id = store.identity(v);
        if n.insert(id) {
            retained_identities.push(v);
        }
    }
    Ok(NucleusResult {
        elements: n.into_iter().collect(),
        certificate_depth,
        rounds,
        limits,
        retained_identities,
    })
}

/// Elements of `N` that no cycle of restrictions within `N` reaches; for a
/// minimal nucleus this is empty apart from retained identities.
pub fn minimality_defects(store: &MachineStore, nucleus: &NucleusResult) -> Vec<ElementRef> {
    let all: BTreeSet<ElementRef> = nucleus.elements.iter().copied().collect();
    let recurrent = eventual_range(store, &all);
    all.difference(&recurrent).copied().collect()
}

/// Whether `N` without `g` still absorbs all deep restrictions of every
/// element of `N`, within `depth`.
pub fn survives_removal(store: &MachineStore, nucleus: &NucleusResult, g: ElementRef, depth: usize) -> bool {
    let rest: BTreeSet<ElementRef> = nucleus.elements.iter().copied().filter(|&h| h != g).collect();
    nucleus
        .elements
        .iter()
        .all(|&h| absorption_depth(store, h, &rest, depth).is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MooreEdge {
    pub from: ElementRef,
    pub edge: EdgeId,
    pub image: EdgeId,
    pub to: ElementRef,
}

/// `g →(e, g(e)) g|_e` over `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreDiagram {
    pub vertices: Vec<ElementRef>,
    pub edges: Vec<MooreEdge>,
}

pub fn moore_diagram(store: &MachineStore, nucleus: &NucleusResult) -> MooreDiagram {
    let edges = nucleus
        .elements
        .iter()
        .flat_map(|&g| {
            store
                .transitions(g)
                .into_iter()
                .map(move |(e, f, r)| MooreEdge { from: g, edge: e, image: f, to: r })
        })
        .collect();
    MooreDiagram {
        vertices: nucleus.elements.clone(),
        edges,
    }
}

/// The subgraph of edges with label `(e, e)`.
pub fn h_subgraph(moore: &MooreDiagram) -> MooreDiagram {
    MooreDiagram {
        vertices: moore.vertices.clone(),
        edges: moore.edges.iter().copied().filter(|m| m.edge == m.image).collect(),
    }
}

impl MooreDiagram {
    fn position(&self, g: ElementRef) -> usize {
        self.vertices.binary_search(&g).expect("edge endpoints are vertices")
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for m in &self.edges {
            adj[self.position(m.from)].push(self.position(m.to));
        }
        adj
    }

    pub fn out_edges(&self, g: ElementRef) -> impl Iterator<Item = &MooreEdge> {
        self.edges.iter().filter(move |m| m.from == g)
    }
}

/// Vertices of ℋ lying on a nonempty cycle.
pub fn cycle_vertices(h: &MooreDiagram) -> Vec<ElementRef> {
    let cond = Condensation::new(&h.adjacency());
    let mut out: Vec<ElementRef> = cond.cyclic_vertices().into_iter().map(|i| h.vertices[i]).collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph::Graph;
    use crate::machine::Token;

    fn load(p: &catalog::Presentation) -> MachineStore {
        let g = Graph::new(&p.graph).unwrap();
        MachineStore::load_generators(&g, &p.generators).unwrap().0
    }

    fn element(store: &mut MachineStore, word: &[&str]) -> ElementRef {
        let w: Vec<Token> = word.iter().map(|t| Token::parse(t)).collect();
        store.evaluate(&w, VertexId(0)).unwrap().unwrap()
    }

    #[test]
    fn basilica_nucleus_has_seven_elements() {
        let mut s = load(&catalog::basilica());
        let n = compute_nucleus(&mut s, NucleusLimits::default()).unwrap();
        let mut expected: Vec<ElementRef> = [
            &[][..],
            &["c"],
            &["c^-1"],
            &["d"],
            &["d^-1"],
            &["d^-1", "c"],
            &["c^-1", "d"],
        ]
        .iter()
        .map(|w| element(&mut s, w))
        .collect();
        expected.sort();
        assert_eq!(n.elements, expected);
        assert!(n.retained_identities.is_empty());
        assert!(minimality_defects(&s, &n).is_empty());

        let h = h_subgraph(&moore_diagram(&s, &n));
        assert_eq!(cycle_vertices(&h), vec![s.identity(VertexId(0))]);
    }

    #[test]
    fn identities_only() {
        let g = Graph::new(&catalog::bouquet(&["a", "b"])).unwrap();
        let mut s = MachineStore::new(&g);
        let n = compute_nucleus(&mut s, NucleusLimits::default()).unwrap();
        assert_eq!(n.elements, vec![s.identity(VertexId(0))]);
        let moore = moore_diagram(&s, &n);
        assert_eq!(moore.edges.len(), 2);
        assert_eq!(h_subgraph(&moore).edges.len(), 2);
    }

    #[test]
    fn removing_any_non_identity_breaks_absorption() {
        let mut s = load(&catalog::basilica());
        let n = compute_nucleus(&mut s, NucleusLimits::default()).unwrap();
        for &g in &n.elements {
            if !s.is_identity(g) {
                assert!(!survives_removal(&s, &n, g, 12), "{}", s.label(g));
            }
        }
    }

    #[test]
    fn caps_give_diagnostic() {
        let mut s = load(&catalog::basilica());
        let limits = NucleusLimits {
            max_elements: 3,
            ..NucleusLimits::default()
        };
        let err = compute_nucleus(&mut s, limits).unwrap_err();
        let NucleusError::NotContractingWithin { reason, .. } = err;
        assert!(reason.contains("exceeds"));
    }

    #[test]
    fn grigorchuk_pair_nucleus_and_cycles() {
        let mut s = load(&catalog::grigorchuk_pair_groupoid());
        let n = compute_nucleus(&mut s, NucleusLimits::default()).unwrap();
        let mut names: Vec<String> = n.elements.iter().map(|&g| s.label(g)).collect();
        names.sort();
        assert_eq!(names, ["a_x", "a_y", "b_x", "b_y", "c_x", "c_y", "d_x", "d_y", "id_x", "id_y"]);
        let h = h_subgraph(&moore_diagram(&s, &n));
        assert!(h.edges.iter().all(|m| s.act_edge(m.from, m.edge).unwrap().0 == m.edge));
        let mut cyc: Vec<String> = cycle_vertices(&h).into_iter().map(|g| s.label(g)).collect();
        cyc.sort();
        assert_eq!(cyc, ["b_x", "b_y", "c_x", "c_y", "d_x", "d_y", "id_x", "id_y"]);
    }
}
