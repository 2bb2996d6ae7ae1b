// SPDX-License-Identifier: Apache-2.0

//! Collapsing every orbit of vertices onto one representative.
//!
//! Each vertex `u` carries a connector `f_u ∈ Iso(u, rep u)` (the identity on
//! representatives). The first-level bijection of `f_u` labels every
//! out-edge `d` of `u` by an out-edge `f_u(d)` of `rep u`; iterating the
//! labelling along paths gives a tree isomorphism `ε_u` from `uΓ*` onto the
//! paths of the collapsed graph Λ starting at `rep u`. An element
//! `s ∈ Iso(u, u')` is transported to `ε_{u'} s ε_u⁻¹`, whose first level is
//!
//! ```text
//!   f_u(d)  ↦  f_{u'}(s(d)),   restriction  ε s|_d ε⁻¹.
//! ```
//!
//! Transport is a groupoid morphism, so the collapsed presentation keeps the
//! original generator names and reuses their restriction words.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::{EdgeId, Graph, GraphError, Path, RawEdge, RawGraph, VertexId};
use crate::machine::{ElementRef, GeneratorSpec, MachineError, MachineStore, RuleSpec, Token};
use crate::structure::OrbitPartition;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CollapseError {
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("connector for vertex {vertex:?} is not in Iso(vertex, rep)")]
    BadConnector { vertex: VertexId },
}

/// Representatives and connectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseChoice {
    orbits: OrbitPartition,
    connectors: Vec<ElementRef>,
    words: Vec<Vec<Token>>,
}

/// Representatives are the least vertex of each orbit; `f_u` is the
/// evaluation of the orbit witness word of `u`.
pub fn choose_collapse(store: &mut MachineStore, orbits: &OrbitPartition) -> Result<CollapseChoice, MachineError> {
    let mut connectors = Vec::new();
    let mut words = Vec::new();
    for v in store.graph().clone().vertices() {
        connectors.push(orbits.witness_element(store, v)?);
        words.push(orbits.witness(v).to_vec());
    }
    Ok(CollapseChoice {
        orbits: orbits.clone(),
        connectors,
        words,
    })
}

impl CollapseChoice {
    pub fn orbits(&self) -> &OrbitPartition {
        &self.orbits
    }

    pub fn reps(&self) -> Vec<VertexId> {
        self.orbits.reps()
    }

    pub fn rep(&self, v: VertexId) -> VertexId {
        self.orbits.rep(v)
    }

    pub fn connector(&self, v: VertexId) -> ElementRef {
        self.connectors[v.index()]
    }

    pub fn connector_word(&self, v: VertexId) -> &[Token] {
        &self.words[v.index()]
    }

    /// Replaces a connector; the new element must lie in `Iso(v, rep v)`.
    pub fn set_connector(&mut self, store: &MachineStore, v: VertexId, f: ElementRef) -> Result<(), CollapseError> {
        if store.dom(f) != v || store.im(f) != self.rep(v) {
            return Err(CollapseError::BadConnector { vertex: v });
        }
        self.connectors[v.index()] = f;
        self.words[v.index()] = store.word(f);
        Ok(())
    }

    /// `f_{s(d)}(d)`, an out-edge of `rep(s(d))`.
    pub fn label(&self, store: &MachineStore, d: EdgeId) -> EdgeId {
        let u = store.graph().src(d);
        store.act_edge(self.connector(u), d).expect("d leaves u").0
    }

    /// The out-edge `d` of `u` with `f_u(d) = x`.
    pub fn unlabel(&self, store: &MachineStore, u: VertexId, x: EdgeId) -> Option<EdgeId> {
        store
            .graph()
            .out_edges(u)
            .iter()
            .copied()
            .find(|&d| self.label(store, d) == x)
    }
}

/// The collapsed system over Λ.
#[derive(Clone, Debug)]
pub struct CollapsedSystem {
    pub graph: Graph,
    pub raw_graph: RawGraph,
    pub specs: Vec<GeneratorSpec>,
    pub store: MachineStore,
    pub generators: BTreeMap<String, ElementRef>,
    /// Γ-vertex of each Λ-vertex.
    pub vertex_origin: Vec<VertexId>,
    /// Γ-edge (leaving a representative) of each Λ-edge.
    pub edge_origin: Vec<EdgeId>,
}

impl CollapsedSystem {
    /// Λ-vertex of a representative.
    pub fn vertex_of(&self, rep: VertexId) -> Option<VertexId> {
        self.vertex_origin.iter().position(|&v| v == rep).map(|i| VertexId(i as u32))
    }

    /// Λ-edge of a Γ-edge leaving a representative.
    pub fn edge_of(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_origin.iter().position(|&x| x == e).map(|i| EdgeId(i as u32))
    }
}

pub fn collapse(store: &MachineStore, choice: &CollapseChoice) -> Result<CollapsedSystem, CollapseError> {
    let graph = store.graph();
    let reps = choice.reps();
    let mut vertex_origin = Vec::new();
    let mut raw = RawGraph::default();
    for v in graph.vertices().filter(|&v| choice.orbits.is_rep(v)) {
        raw.vertices.push(graph.vertex_name(v).into());
        vertex_origin.push(v);
    }
    let mut edge_origin = Vec::new();
    for e in graph.edges().filter(|&e| reps.contains(&graph.src(e))) {
        raw.edges.push(RawEdge::new(
            graph.edge_name(e),
            graph.vertex_name(graph.src(e)),
            graph.vertex_name(choice.rep(graph.rng(e))),
        ));
        edge_origin.push(e);
    }
    let lambda = Graph::new(&raw)?;

    let mut specs = Vec::new();
    for (name, g) in store.generators() {
        let (u, w) = (store.dom(g), store.im(g));
        let mut rules = Vec::new();
        for (d, gd, restriction) in store.transitions(g) {
            let x = choice.label(store, d);
            let y = store.act_edge(choice.connector(w), gd).expect("g(d) leaves w").0;
            rules.push((
                x,
                RuleSpec {
                    edge: graph.edge_name(x).into(),
                    image: graph.edge_name(y).into(),
                    restriction: store.word(restriction),
                },
            ));
        }
        rules.sort_by_key(|(x, _)| *x);
        let rules = rules.into_iter().map(|(_, r)| r).collect();
        specs.push(GeneratorSpec {
            name,
            dom: graph.vertex_name(choice.rep(u)).into(),
            im: graph.vertex_name(choice.rep(w)).into(),
            rules,
        });
    }
    let (cstore, generators) = MachineStore::load_generators_with_cap(&lambda, &specs, store.state_cap())?;
    Ok(CollapsedSystem {
        graph: lambda,
        raw_graph: raw,
        specs,
        store: cstore,
        generators,
        vertex_origin,
        edge_origin,
    })
}

/// Transport of an arbitrary element of the original groupoid.
pub fn transport(
    store: &MachineStore,
    choice: &CollapseChoice,
    collapsed: &mut CollapsedSystem,
    s: ElementRef,
) -> Result<ElementRef, MachineError> {
    let v = collapsed
        .vertex_of(choice.rep(store.dom(s)))
        .expect("representatives are Λ-vertices");
    Ok(collapsed
        .store
        .evaluate(&store.word(s), v)?
        .expect("words of elements compose"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseMismatch {
    pub generator: String,
    /// Λ-path (as Λ-edge names) on which the actions differ.
    pub path: Vec<String>,
    pub depth: usize,
    pub expected: Vec<String>,
    pub found: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseReport {
    pub depth: usize,
    /// Number of `(state pair, edge)` transitions compared.
    pub checked_steps: usize,
    /// The set of reachable state pairs stopped growing before `depth`, so
    /// the actions agree on paths of every length.
    pub saturated: bool,
    pub first_mismatch: Option<CollapseMismatch>,
}

impl CollapseReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `ε_u⁻¹(P)` for a Λ-path given by Γ-edges leaving representatives.
fn lift(store: &MachineStore, choice: &CollapseChoice, u: VertexId, lambda_edges: &[EdgeId]) -> Option<Path> {
    let graph = store.graph();
    let mut at = u;
    let mut out = Vec::new();
    for &x in lambda_edges {
        let d = choice.unlabel(store, at, x)?;
        out.push(d);
        at = graph.rng(d);
    }
    if out.is_empty() {
        Some(Path::anchor(u))
    } else {
        Path::from_edges(graph, &out)
    }
}

/// `ε_u(p)` as a sequence of Γ-edges leaving representatives.
fn project(store: &MachineStore, choice: &CollapseChoice, p: &Path) -> Vec<EdgeId> {
    p.edges().iter().map(|&d| choice.label(store, d)).collect()
}

/// Compares, level by level, every original generator acting on lifted
/// Λ-paths with its collapsed counterpart. Pairs `(g|_p, g'|_{ε p})` are
/// deduplicated, which is equivalent to checking each path of length at
/// most `depth` separately.
pub fn verify_collapse(
    store: &MachineStore,
    choice: &CollapseChoice,
    collapsed: &CollapsedSystem,
    depth: usize,
) -> CollapseReport {
    let graph = store.graph();
    let lambda = &collapsed.graph;
    let names = |es: &[EdgeId]| -> Vec<String> { es.iter().map(|&e| String::from(graph.edge_name(e))).collect() };
    // (original state, collapsed state) -> (generator, Γ-edges of the Λ-path so far)
    let mut seen: BTreeSet<(ElementRef, ElementRef)> = BTreeSet::new();
    let mut level: Vec<(ElementRef, ElementRef, usize, Vec<EdgeId>)> = Vec::new();
    let generators = store.generators();
    for (i, (name, g)) in generators.iter().enumerate() {
        let lg = collapsed.generators[name];
        if seen.insert((*g, lg)) {
            level.push((*g, lg, i, Vec::new()));
        }
    }
    let mut checked = 0;
    for n in 1..=depth {
        let mut next = Vec::new();
        for (g, lg, i, prefix) in &level {
            for &x in lambda.out_edges(collapsed.store.dom(*lg)) {
                checked += 1;
                let d = choice.unlabel(store, store.dom(*g), collapsed.edge_origin[x.index()]);
                let expected = d.and_then(|d| store.act_edge(*g, d).ok());
                let found = collapsed.store.act_edge(*lg, x).ok();
                let agree = match (expected, found) {
                    (Some((d2, _)), Some((y, _))) => choice.label(store, d2) == collapsed.edge_origin[y.index()],
                    _ => false,
                };
                let mut path = prefix.clone();
                path.push(collapsed.edge_origin[x.index()]);
                if !agree {
                    let (name, g0) = &generators[*i];
                    let u = store.dom(*g0);
                    let full_expected = lift(store, choice, u, &path)
                        .and_then(|p| store.act_path(*g0, &p))
                        .map(|(img, _)| project(store, choice, &img))
                        .unwrap_or_default();
                    let start = collapsed.generators[name];
                    let full_found: Vec<EdgeId> = Path::from_edges(
                        lambda,
                        &path.iter().map(|&e| collapsed.edge_of(e).expect("Λ-edge")).collect::<Vec<_>>(),
                    )
                    .and_then(|lp| collapsed.store.act_path(start, &lp))
                    .map(|(img, _)| img.edges().iter().map(|&y| collapsed.edge_origin[y.index()]).collect())
                    .unwrap_or_default();
                    return CollapseReport {
                        depth,
                        checked_steps: checked,
                        saturated: false,
                        first_mismatch: Some(CollapseMismatch {
                            generator: name.clone(),
                            path: names(&path),
                            depth: n,
                            expected: names(&full_expected),
                            found: names(&full_found),
                        }),
                    };
                }
                let (Some((_, h)), Some((_, lh))) = (expected, found) else { unreachable!() };
                if seen.insert((h, lh)) {
                    next.push((h, lh, *i, path));
                }
            }
        }
        if next.is_empty() {
            return CollapseReport {
                depth,
                checked_steps: checked,
                saturated: true,
                first_mismatch: None,
            };
        }
        level = next;
    }
    CollapseReport {
        depth,
        checked_steps: checked,
        saturated: false,
        first_mismatch: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::structure::{is_type_cf, orbit_partition};
    use alloc::vec;

    fn load(p: &catalog::Presentation) -> MachineStore {
        let g = Graph::new(&p.graph).unwrap();
        MachineStore::load_generators(&g, &p.generators).unwrap().0
    }

    fn setup(p: &catalog::Presentation) -> (MachineStore, CollapseChoice, CollapsedSystem) {
        let mut s = load(p);
        let o = orbit_partition(&s);
        let c = choose_collapse(&mut s, &o).unwrap();
        let l = collapse(&s, &c).unwrap();
        (s, c, l)
    }

    /// First-level table as (edge, image, restriction-label) name triples.
    fn table(store: &MachineStore, g: ElementRef) -> Vec<(String, String, String)> {
        let graph = store.graph();
        store
            .transitions(g)
            .into_iter()
            .map(|(e, f, r)| (graph.edge_name(e).into(), graph.edge_name(f).into(), store.label(r)))
            .collect()
    }

    #[test]
    fn two_vertex_groupoid_collapses_to_basilica() {
        let (s, c, mut l) = setup(&catalog::two_vertex_basilica_groupoid());
        let w = s.graph().vertex("w").unwrap();
        assert_eq!(c.reps(), vec![VertexId(0)]);
        assert_eq!(c.connector_word(w), &[Token::inverted("a")]);
        assert_eq!(l.graph.vertex_count(), 1);
        let names: Vec<&str> = l.graph.edges().map(|e| l.graph.edge_name(e)).collect();
        assert_eq!(names, vec!["i", "j"]);

        // With i ↔ e and j ↔ f these are c(ep)=ep, c(fp)=f d(p), d(ep)=f c(p), d(fp)=ep.
        let a = l.generators["a"];
        let b = l.generators["b"];
        let id = String::from("id_v");
        assert_eq!(
            table(&l.store, a),
            vec![("i".into(), "i".into(), id.clone()), ("j".into(), "j".into(), "b".into())]
        );
        assert_eq!(
            table(&l.store, b),
            vec![("i".into(), "j".into(), "a".into()), ("j".into(), "i".into(), id)]
        );

        let basilica = catalog::basilica();
        let bg = Graph::new(&basilica.graph).unwrap();
        let (bs, bm) = MachineStore::load_generators(&bg, &basilica.generators).unwrap();
        for (ours, theirs) in [(a, bm["c"]), (b, bm["d"])] {
            for n in 0..=6 {
                for (lp, bp) in l.graph.paths_from(VertexId(0), n).unwrap().iter().zip(bg.paths_from(VertexId(0), n).unwrap()) {
                    let x = l.store.act_path(ours, lp).unwrap().0;
                    let y = bs.act_path(theirs, &bp).unwrap().0;
                    assert_eq!(x.edges(), y.edges());
                }
            }
        }

        assert!(verify_collapse(&s, &c, &l, 6).passed());
        let ainv = {
            let mut s2 = s.clone();
            let g = s2.generator("a").unwrap();
            let gi = s2.inverse(g);
            transport(&s2, &c, &mut l, gi).unwrap()
        };
        assert_eq!(l.store.inverse(a), ainv);
    }

    #[test]
    fn singleton_orbits_collapse_to_a_relabelling() {
        let (s, c, l) = setup(&catalog::grigorchuk_pair_groupoid());
        assert_eq!(c.reps().len(), 2);
        assert_eq!(l.graph.edge_count(), 8);
        for (name, g) in s.generators() {
            assert_eq!(table(&s, g), table(&l.store, l.generators[&name]));
        }
        assert!(verify_collapse(&s, &c, &l, 4).passed());
    }

    #[test]
    fn pair_set_saturates() {
        for p in [catalog::two_vertex_basilica_groupoid(), catalog::grigorchuk_pair_groupoid()] {
            let (s, c, l) = setup(&p);
            let report = verify_collapse(&s, &c, &l, 12);
            assert!(report.passed() && report.saturated);
            let shallow = verify_collapse(&s, &c, &l, 1);
            assert!(shallow.passed() && !shallow.saturated);
        }
    }

    #[test]
    fn corrupted_connector_is_caught_at_depth_one() {
        let (s, mut c, l) = setup(&catalog::two_vertex_basilica_groupoid());
        let w = s.graph().vertex("w").unwrap();
        let b = s.generator("b").unwrap();
        c.set_connector(&s, w, b).unwrap();
        let report = verify_collapse(&s, &c, &l, 6);
        let m = report.first_mismatch.expect("mismatch");
        assert_eq!(m.depth, 1);
        let a = s.generator("a").unwrap();
        assert!(c.set_connector(&s, w, a).is_err());
    }

    #[test]
    fn cf_input_gives_strongly_connected_lambda() {
        for p in [catalog::two_vertex_basilica_groupoid(), catalog::grigorchuk_pair_groupoid()] {
            let (s, c, l) = setup(&p);
            assert!(is_type_cf(s.graph(), c.orbits()).unwrap().holds);
            assert!(l.graph.is_strongly_connected());
            let lo = orbit_partition(&l.store);
            assert!(is_type_cf(&l.graph, &lo).unwrap().holds);
        }
    }

    #[test]
    fn collapse_is_idempotent() {
        let (_, _, l) = setup(&catalog::two_vertex_basilica_groupoid());
        let mut s2 = l.store.clone();
        let o2 = orbit_partition(&s2);
        let c2 = choose_collapse(&mut s2, &o2).unwrap();
        let l2 = collapse(&s2, &c2).unwrap();
        assert_eq!(l2.specs, l.specs);
    }
}
