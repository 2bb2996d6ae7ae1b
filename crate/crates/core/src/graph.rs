// SPDX-License-Identifier: Apache-2.0

//! Finite directed multigraphs, paths, and reachability.
//!
//! Vertices and edges are numbered in declaration order and every listing the
//! crate produces follows that order, so two runs over the same input agree
//! byte for byte.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::scc::Condensation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Unvalidated graph description, as read from a presentation file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEdge {
    pub id: String,
    pub src: String,
    pub rng: String,
}

impl RawEdge {
    pub fn new(id: &str, src: &str, rng: &str) -> Self {
        RawEdge {
            id: id.into(),
            src: src.into(),
            rng: rng.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphViolation {
    EmptyVertexSet,
    DuplicateVertex(String),
    DuplicateEdge(String),
    /// An edge id is also used as a vertex id.
    EdgeShadowsVertex(String),
    DanglingEndpoint { edge: String, endpoint: String },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::EmptyVertexSet => write!(f, "graph has no vertices"),
            GraphViolation::DuplicateVertex(v) => write!(f, "duplicate vertex id `{v}`"),
            GraphViolation::DuplicateEdge(e) => write!(f, "duplicate edge id `{e}`"),
            GraphViolation::EdgeShadowsVertex(e) => {
                write!(f, "edge id `{e}` is already used as a vertex id")
            }
            GraphViolation::DanglingEndpoint { edge, endpoint } => {
                write!(f, "dangling endpoint: edge `{edge}` refers to undeclared vertex `{endpoint}`")
            }
        }
    }
}

struct ViolationList<'a>(&'a [GraphViolation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("invalid graph: {}", ViolationList(.0))]
    Invalid(Vec<GraphViolation>),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Edge {
    name: String,
    src: VertexId,
    rng: VertexId,
}

/// A validated finite directed multigraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    /// Position of each edge inside its source's out-edge list.
    out_pos: Vec<usize>,
    vertex_index: BTreeMap<String, VertexId>,
    edge_index: BTreeMap<String, EdgeId>,
}

impl Graph {
    /// Validates a raw description, reporting every violation found.
    pub fn new(raw: &RawGraph) -> Result<Graph, GraphError> {
        let mut violations = Vec::new();
        if raw.vertices.is_empty() {
            violations.push(GraphViolation::EmptyVertexSet);
        }
        let mut vertex_index = BTreeMap::new();
        let mut vertex_names = Vec::new();
        for name in &raw.vertices {
            if vertex_index.contains_key(name) {
                violations.push(GraphViolation::DuplicateVertex(name.clone()));
                continue;
            }
            vertex_index.insert(name.clone(), VertexId(vertex_names.len() as u32));
            vertex_names.push(name.clone());
        }
        let mut edge_index = BTreeMap::new();
        let mut edges = Vec::new();
        for e in &raw.edges {
            if edge_index.contains_key(&e.id) {
                violations.push(GraphViolation::DuplicateEdge(e.id.clone()));
                continue;
            }
            if vertex_index.contains_key(&e.id) {
                violations.push(GraphViolation::EdgeShadowsVertex(e.id.clone()));
            }
            let mut endpoint = |name: &String| match vertex_index.get(name) {
                Some(&v) => Some(v),
                None => {
                    violations.push(GraphViolation::DanglingEndpoint {
                        edge: e.id.clone(),
                        endpoint: name.clone(),
                    });
                    None
                }
            };
            let src = endpoint(&e.src);
            let rng = endpoint(&e.rng);
            if let (Some(src), Some(rng)) = (src, rng) {
                edge_index.insert(e.id.clone(), EdgeId(edges.len() as u32));
                edges.push(Edge {
                    name: e.id.clone(),
                    src,
                    rng,
                });
            }
        }
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut out = vec![Vec::new(); vertex_names.len()];
        let mut out_pos = vec![0; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            let list: &mut Vec<EdgeId> = &mut out[e.src.index()];
            out_pos[i] = list.len();
            list.push(EdgeId(i as u32));
        }
        Ok(Graph {
            vertex_names,
            edges,
            out,
            out_pos,
            vertex_index,
            edge_index,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn src(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].src
    }

    pub fn rng(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].rng
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.index()].name
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.index() < self.vertex_names.len()
    }

    /// Out-edges of `v` in declaration order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.index()]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v.index()].len()
    }

    /// Index of `e` within the out-edge list of its source.
    pub fn out_position(&self, e: EdgeId) -> usize {
        self.out_pos[e.index()]
    }

    /// Builds a path from edge names; `None` if a name is unknown or the
    /// edges do not chain.
    pub fn path_by_names(&self, names: &[&str]) -> Option<Path> {
        let ids: Option<Vec<EdgeId>> = names.iter().map(|n| self.edge(n)).collect();
        Path::from_edges(self, &ids?)
    }

    /// All paths of length `n` starting at `v`, lexicographic in edge order.
    pub fn paths_from(&self, v: VertexId, n: usize) -> Result<Vec<Path>, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut level = vec![Path::anchor(v)];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &level {
                for &e in self.out_edges(p.range()) {
                    next.push(p.extended(self, e));
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// Vertex adjacency lists (one entry per edge; parallel edges repeat).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.out
            .iter()
            .map(|es| es.iter().map(|&e| self.rng(e).index()).collect())
            .collect()
    }

    pub fn condensation(&self) -> Condensation {
        Condensation::new(&self.adjacency())
    }

    /// Strongly connected components as vertex sets, topologically ordered.
    pub fn scc(&self) -> Vec<Vec<VertexId>> {
        self.condensation()
            .components
            .into_iter()
            .map(|c| c.into_iter().map(|v| VertexId(v as u32)).collect())
            .collect()
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.condensation().len() <= 1
    }

    /// Vertices reachable from `v` by a path of length ≥ 0.
    pub fn reachable_from(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(v);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let w = self.rng(e);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn display_path<'a>(&'a self, p: &'a Path) -> PathDisplay<'a> {
        PathDisplay { graph: self, path: p }
    }
}

/// A finite path; the empty path is anchored at a single vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    source: VertexId,
    edges: Vec<EdgeId>,
    range: VertexId,
}

impl Path {
    pub fn anchor(v: VertexId) -> Path {
        Path {
            source: v,
            edges: Vec::new(),
            range: v,
        }
    }

    pub fn edge(graph: &Graph, e: EdgeId) -> Path {
        Path {
            source: graph.src(e),
            edges: vec![e],
            range: graph.rng(e),
        }
    }

    /// `None` when the sequence is empty (no anchor) or does not chain.
    pub fn from_edges(graph: &Graph, edges: &[EdgeId]) -> Option<Path> {
        let (&first, rest) = edges.split_first()?;
        if first.index() >= graph.edge_count() {
            return None;
        }
        let mut p = Path::edge(graph, first);
        for &e in rest {
            if e.index() >= graph.edge_count() || graph.src(e) != p.range {
                return None;
            }
            p.edges.push(e);
            p.range = graph.rng(e);
        }
        Some(p)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn first_edge(&self) -> Option<EdgeId> {
        self.edges.first().copied()
    }

    /// Appends an edge. Panics if `e` does not leave the current range.
    pub fn extended(&self, graph: &Graph, e: EdgeId) -> Path {
        assert_eq!(graph.src(e), self.range, "edge does not continue the path");
        let mut p = self.clone();
        p.edges.push(e);
        p.range = graph.rng(e);
        p
    }

    /// `pq`, or `None` (the zero of the path monoid) when `r(p) != s(q)`.
    pub fn concat(&self, q: &Path) -> Option<Path> {
        if self.range != q.source {
            return None;
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&q.edges);
        Some(Path {
            source: self.source,
            edges,
            range: q.range,
        })
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.source == other.source && other.edges.starts_with(&self.edges)
    }

    /// If `self = prefix · m`, returns `m`.
    pub fn strip_prefix(&self, prefix: &Path, graph: &Graph) -> Option<Path> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        let rest = &self.edges[prefix.edges.len()..];
        if rest.is_empty() {
            Some(Path::anchor(prefix.range))
        } else {
            Path::from_edges(graph, rest)
        }
    }

    /// The prefix of length `n` (clamped to the path length).
    pub fn prefix(&self, graph: &Graph, n: usize) -> Path {
        if n == 0 {
            return Path::anchor(self.source);
        }
        let n = n.min(self.edges.len());
        Path::from_edges(graph, &self.edges[..n]).expect("prefix of a valid path")
    }
}

pub struct PathDisplay<'a> {
    graph: &'a Graph,
    path: &'a Path,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            return write!(f, "{}", self.graph.vertex_name(self.path.source));
        }
        for &e in &self.path.edges {
            f.write_str(self.graph.edge_name(e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    pub(crate) fn two_quadrant_graph() -> Graph {
        let raw = RawGraph {
            vertices: vec!["x".into(), "y".into()],
            edges: vec![
                RawEdge::new("i", "x", "x"),
                RawEdge::new("j", "x", "x"),
                RawEdge::new("e", "x", "y"),
                RawEdge::new("f", "x", "y"),
                RawEdge::new("m", "y", "y"),
                RawEdge::new("n", "y", "y"),
                RawEdge::new("g", "y", "x"),
                RawEdge::new("h", "y", "x"),
            ],
        };
        Graph::new(&raw).unwrap()
    }

    fn double_two_cycle() -> Graph {
        let raw = RawGraph {
            vertices: vec!["u".into(), "v".into(), "x".into(), "y".into()],
            edges: vec![
                RawEdge::new("a", "u", "v"),
                RawEdge::new("b", "v", "u"),
                RawEdge::new("c", "x", "y"),
                RawEdge::new("d", "y", "x"),
            ],
        };
        Graph::new(&raw).unwrap()
    }

    #[test]
    fn out_degree_four_everywhere() {
        let g = two_quadrant_graph();
        for v in g.vertices() {
            assert_eq!(g.out_degree(v), 4);
        }
    }

    #[test]
    fn single_vertex_without_edges_is_valid() {
        let g = Graph::new(&RawGraph {
            vertices: vec!["v".into()],
            edges: vec![],
        })
        .unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn dangling_and_duplicate_are_all_reported() {
        let raw = RawGraph {
            vertices: vec!["x".into(), "x".into()],
            edges: vec![RawEdge::new("e", "x", "nowhere"), RawEdge::new("e", "x", "x")],
        };
        let err = Graph::new(&raw).unwrap_err();
        let GraphError::Invalid(v) = err else { panic!() };
        assert_eq!(
            v,
            vec![
                GraphViolation::DuplicateVertex("x".into()),
                GraphViolation::DanglingEndpoint {
                    edge: "e".into(),
                    endpoint: "nowhere".into()
                },
            ]
        );
        assert!(v[1].to_string().contains("dangling endpoint"));
    }

    #[test]
    fn empty_vertex_set_rejected() {
        let err = Graph::new(&RawGraph::default()).unwrap_err();
        assert_eq!(err, GraphError::Invalid(vec![GraphViolation::EmptyVertexSet]));
    }

    #[test]
    fn concat_cases() {
        let g = two_quadrant_graph();
        let i = g.path_by_names(&["i"]).unwrap();
        let j = g.path_by_names(&["j"]).unwrap();
        let e = g.path_by_names(&["e"]).unwrap();
        let ij = i.concat(&j).unwrap();
        assert_eq!(g.display_path(&ij).to_string(), "ij");
        assert_eq!(e.concat(&i), None);
        let x = Path::anchor(g.vertex("x").unwrap());
        assert_eq!(x.concat(&i).unwrap(), i);
        assert_eq!(i.concat(&x).unwrap(), i);
    }

    #[test]
    fn paths_from_levels() {
        let g = two_quadrant_graph();
        let x = g.vertex("x").unwrap();
        let one: Vec<_> = g
            .paths_from(x, 1)
            .unwrap()
            .iter()
            .map(|p| g.display_path(p).to_string())
            .collect();
        assert_eq!(one, vec!["i", "j", "e", "f"]);
        assert_eq!(g.paths_from(x, 0).unwrap(), vec![Path::anchor(x)]);
        assert_eq!(g.paths_from(x, 2).unwrap().len(), 16);
        assert!(g.paths_from(VertexId(9), 1).is_err());
    }

    #[test]
    fn paths_from_agrees_with_exhaustive_sequences() {
        // Oracle: every sequence of two edge ids, kept when it chains from x.
        let g = two_quadrant_graph();
        let x = g.vertex("x").unwrap();
        let mut brute = Vec::new();
        for a in g.edges() {
            for b in g.edges() {
                if let Some(p) = Path::from_edges(&g, &[a, b]) {
                    if p.source() == x {
                        brute.push(p);
                    }
                }
            }
        }
        brute.sort();
        let mut got = g.paths_from(x, 2).unwrap();
        got.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn scc_examples() {
        let g = two_quadrant_graph();
        assert_eq!(g.scc().len(), 1);
        assert!(g.is_strongly_connected());

        let d = double_two_cycle();
        let comps: Vec<Vec<&str>> = d
            .scc()
            .iter()
            .map(|c| c.iter().map(|&v| d.vertex_name(v)).collect())
            .collect();
        assert_eq!(comps.len(), 2);
        assert!(comps.contains(&vec!["u", "v"]));
        assert!(comps.contains(&vec!["x", "y"]));

        let edgeless = Graph::new(&RawGraph {
            vertices: vec!["a".into(), "b".into(), "c".into()],
            edges: vec![],
        })
        .unwrap();
        assert_eq!(edgeless.scc().len(), 3);
    }

    #[test]
    fn strip_prefix_roundtrip() {
        let g = two_quadrant_graph();
        let p = g.path_by_names(&["i", "e", "g"]).unwrap();
        let q = g.path_by_names(&["i"]).unwrap();
        let m = p.strip_prefix(&q, &g).unwrap();
        assert_eq!(q.concat(&m).unwrap(), p);
        let whole = p.strip_prefix(&p, &g).unwrap();
        assert_eq!(whole, Path::anchor(g.vertex("x").unwrap()));
        assert!(q.strip_prefix(&p, &g).is_none());
    }
}
