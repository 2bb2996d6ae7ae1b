// SPDX-License-Identifier: Apache-2.0

//! Deciding simplicity of the Steinberg algebra of a contracting groupoid
//! on a strongly connected graph.
//!
//! The left action `e·Y = {g ∈ 𝒞 : g(e) = e, g|_e ∈ Y}` on subsets of 𝒞
//! generates the graph Δ from the singletons `{id_v}`. Its unique sink
//! component is the set of synchronized vertices. Each recurrent subgroup
//! `H` is then projected onto the cosets of `H ∩ Y` for every synchronized
//! `Y` over the same base; the algebra is simple over `K` exactly when
//! these projections are jointly injective on `KH` for every `H`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{self, AlgebraElement, Field, IntegerMatrix, Scalar, SnfResult};
use crate::graph::{EdgeId, Graph, Path, VertexId};
use crate::machine::{ElementRef, MachineError, MachineStore};
use crate::nucleus::MooreDiagram;
use crate::scc::Condensation;
use crate::structure::CfVerdict;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimplicityError {
    #[error("the graph is not strongly connected; collapse the system before computing synchronized vertices")]
    NotStronglyConnected,
    #[error("Δ has {0} minimal components; expected exactly one")]
    MinimalComponents(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("more than {0} relations met while enumerating recurrent subgroups")]
    RelationCap(usize),
    #[error("support is not contained in the recurrent subgroup")]
    SupportOutsideSubgroup,
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// `e·Y` for `Y ⊆ 𝒞` over `r(e)`.
pub fn act_on_subset(store: &MachineStore, cycles: &[ElementRef], e: EdgeId, y: &[ElementRef]) -> Vec<ElementRef> {
    let s = store.graph().src(e);
    cycles
        .iter()
        .copied()
        .filter(|&g| store.dom(g) == s && store.im(g) == s)
        .filter(|&g| match store.act_edge(g, e) {
            Ok((f, r)) => f == e && y.binary_search(&r).is_ok(),
            Err(_) => false,
        })
        .collect()
}

/// `p·Y = {g ∈ 𝒞 : g(p) = p, g|_p ∈ Y}`, computed along the whole path.
pub fn act_path_on_subset(store: &MachineStore, cycles: &[ElementRef], p: &Path, y: &[ElementRef]) -> Vec<ElementRef> {
    cycles
        .iter()
        .copied()
        .filter(|&g| store.dom(g) == p.source() && store.im(g) == p.source())
        .filter(|&g| match store.act_path(g, p) {
            Some((q, r)) => &q == p && y.binary_search(&r).is_ok(),
            None => false,
        })
        .collect()
}

/// Orbit of the singletons `{id_v}` under the left action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGraph {
    /// Sorted element sets.
    pub vertices: Vec<Vec<ElementRef>>,
    pub bases: Vec<VertexId>,
    /// `(Y, e, e·Y)`.
    pub edges: Vec<(usize, EdgeId, usize)>,
    /// Index of `{id_v}` for each vertex `v` of the graph.
    pub marked: Vec<usize>,
}

fn base_of(store: &MachineStore, y: &[ElementRef]) -> Result<VertexId, SimplicityError> {
    let ids: Vec<ElementRef> = y.iter().copied().filter(|&g| store.is_identity(g)).collect();
    match ids.as_slice() {
        [id] => Ok(store.dom(*id)),
        _ => Err(SimplicityError::Inconsistent(format!("Δ vertex with {} identities", ids.len()))),
    }
}

pub fn build_delta(store: &MachineStore, cycles: &[ElementRef]) -> Result<DeltaGraph, SimplicityError> {
    let graph = store.graph();
    let mut index: BTreeMap<Vec<ElementRef>, usize> = BTreeMap::new();
    let mut delta = DeltaGraph {
        vertices: Vec::new(),
        bases: Vec::new(),
        edges: Vec::new(),
        marked: Vec::new(),
    };
    let mut queue = VecDeque::new();
    let mut intern = |delta: &mut DeltaGraph, queue: &mut VecDeque<usize>, y: Vec<ElementRef>| -> Result<usize, SimplicityError> {
        if let Some(&i) = index.get(&y) {
            return Ok(i);
        }
        let i = delta.vertices.len();
        delta.bases.push(base_of(store, &y)?);
        index.insert(y.clone(), i);
        delta.vertices.push(y);
        queue.push_back(i);
        Ok(i)
    };
    for v in graph.vertices() {
        let i = intern(&mut delta, &mut queue, vec![store.identity(v)])?;
        delta.marked.push(i);
    }
    while let Some(i) = queue.pop_front() {
        let base = delta.bases[i];
        for e in graph.edges().filter(|&e| graph.rng(e) == base) {
            let y = act_on_subset(store, cycles, e, &delta.vertices[i]);
            let j = intern(&mut delta, &mut queue, y)?;
            delta.edges.push((i, e, j));
        }
    }
    Ok(delta)
}

impl DeltaGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, y: &[ElementRef]) -> Option<usize> {
        self.vertices.iter().position(|v| v == y)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, _, j) in &self.edges {
            adj[i].push(j);
        }
        adj
    }

    pub fn step(&self, i: usize, e: EdgeId) -> Option<usize> {
        self.edges.iter().find(|&&(a, f, _)| a == i && f == e).map(|&(_, _, j)| j)
    }

    /// `p·Y` by single-edge steps, last edge first.
    pub fn act_path(&self, i: usize, p: &Path) -> Option<usize> {
        p.edges().iter().rev().try_fold(i, |acc, &e| self.step(acc, e))
    }

    /// Renders a vertex as `{id,b,c}_x`, dropping a `_x` suffix from names.
    pub fn vertex_label(&self, store: &MachineStore, i: usize) -> String {
        let graph = store.graph();
        let base = graph.vertex_name(self.bases[i]);
        let suffix = format!("_{base}");
        let names: Vec<String> = self.vertices[i]
            .iter()
            .map(|&g| {
                if store.is_identity(g) {
                    return String::from("id");
                }
                let l = store.label(g);
                match l.strip_suffix(suffix.as_str()) {
                    Some(s) if !s.is_empty() => String::from(s),
                    _ => l,
                }
            })
            .collect();
        format!("{{{}}}_{}", names.join(","), base)
    }
}

/// The unique sink component of Δ; requires a strongly connected graph.
pub fn synchronized_vertices(delta: &DeltaGraph, graph: &Graph) -> Result<Vec<usize>, SimplicityError> {
    if !graph.is_strongly_connected() {
        return Err(SimplicityError::NotStronglyConnected);
    }
    let cond = Condensation::new(&delta.adjacency());
    let sinks = cond.sinks();
    if sinks.len() != 1 {
        return Err(SimplicityError::MinimalComponents(sinks.len()));
    }
    let mut out = cond.components[sinks[0]].clone();
    out.sort_unstable();
    Ok(out)
}

/// `H_p = {g : g(p) = p, g|_p = g}` for a closed path `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrentSubgroup {
    pub base: VertexId,
    /// Sorted.
    pub elements: Vec<ElementRef>,
    pub witness: Path,
}

impl RecurrentSubgroup {
    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Whether `set` (within `Iso(v, v)`) contains `id_v` and is closed under
/// products and inverses.
pub fn is_subgroup(store: &mut MachineStore, v: VertexId, set: &[ElementRef]) -> Result<bool, MachineError> {
    if set.binary_search(&store.identity(v)).is_err() {
        return Ok(false);
    }
    for &g in set {
        if store.dom(g) != v || store.im(g) != v {
            return Ok(false);
        }
        if set.binary_search(&store.inverse(g)).is_err() {
            return Ok(false);
        }
        for &h in set {
            match store.multiply(g, h)? {
                Some(p) if set.binary_search(&p).is_ok() => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

pub const RELATION_CAP: usize = 1 << 16;

type Relation = Vec<(u32, u32)>;

fn compose(a: &Relation, b: &Relation) -> Relation {
    let mut out = BTreeSet::new();
    for &(g, h) in a {
        for &(_, k) in b.iter().filter(|&&(x, _)| x == h) {
            out.insert((g, k));
        }
    }
    out.into_iter().collect()
}

/// Every recurrent subgroup, deduplicated by base and element set. The
/// relations `R_p = {(g, g|_p) : g(p) = p}` on 𝒞 form a finite monoid under
/// concatenation; each closed `p` contributes the diagonal of `R_p`.
pub fn recurrent_subgroups(
    store: &mut MachineStore,
    h: &MooreDiagram,
    cycles: &[ElementRef],
) -> Result<Vec<RecurrentSubgroup>, SimplicityError> {
    let graph = store.graph().clone();
    let pos = |g: ElementRef| cycles.binary_search(&g).ok().map(|i| i as u32);
    let letter: Vec<Relation> = graph
        .edges()
        .map(|e| {
            let mut r: Relation = h
                .edges
                .iter()
                .filter(|m| m.edge == e)
                .filter_map(|m| Some((pos(m.from)?, pos(m.to)?)))
                .collect();
            r.sort_unstable();
            r
        })
        .collect();
    let mut seen: BTreeSet<(VertexId, VertexId, Relation)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for e in graph.edges() {
        let r = letter[e.index()].clone();
        if !r.is_empty() && seen.insert((graph.src(e), graph.rng(e), r.clone())) {
            queue.push_back((r, Path::edge(&graph, e)));
        }
    }
    let mut found: BTreeMap<(VertexId, Vec<ElementRef>), Path> = BTreeMap::new();
    let mut order = Vec::new();
    while let Some((rel, p)) = queue.pop_front() {
        if p.source() == p.range() {
            let diag: Vec<ElementRef> = rel.iter().filter(|(g, h)| g == h).map(|&(g, _)| cycles[g as usize]).collect();
            if !diag.is_empty() {
                let key = (p.source(), diag);
                if !found.contains_key(&key) && is_subgroup(store, key.0, &key.1)? {
                    order.push(key.clone());
                    found.insert(key, p.clone());
                }
            }
        }
        for &e in graph.out_edges(p.range()) {
            let r = compose(&rel, &letter[e.index()]);
            if r.is_empty() {
                continue;
            }
            if seen.insert((p.source(), graph.rng(e), r.clone())) {
                if seen.len() > RELATION_CAP {
                    return Err(SimplicityError::RelationCap(RELATION_CAP));
                }
                queue.push_back((r, p.extended(&graph, e)));
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|key| {
            let witness = found[&key].clone();
            RecurrentSubgroup {
                base: key.0,
                elements: key.1,
                witness,
            }
        })
        .collect())
}

/// `H ∩ Y`, or `None` when the bases differ.
pub fn intersect_with_vertex(
    store: &mut MachineStore,
    h: &RecurrentSubgroup,
    delta: &DeltaGraph,
    y: usize,
) -> Result<Option<Vec<ElementRef>>, SimplicityError> {
    if delta.bases[y] != h.base {
        return Ok(None);
    }
    let k: Vec<ElementRef> = h
        .elements
        .iter()
        .copied()
        .filter(|g| delta.vertices[y].binary_search(g).is_ok())
        .collect();
    if !is_subgroup(store, h.base, &k)? {
        return Err(SimplicityError::Inconsistent(format!(
            "H ∩ {} is not a subgroup",
            delta.vertex_label(store, y)
        )));
    }
    Ok(Some(k))
}

/// Cosets of `H ∩ Y` for one synchronized vertex `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetBlock {
    pub delta_vertex: usize,
    pub intersection: Vec<ElementRef>,
    /// Left cosets `gK`, each sorted, in order of their least column.
    pub cosets: Vec<Vec<ElementRef>>,
    /// Earlier block with the same intersection, whose rows are reused.
    pub duplicate_of: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub subgroup: RecurrentSubgroup,
    pub blocks: Vec<CosetBlock>,
    /// Columns are the elements of `H` in sorted order; one row per coset of
    /// each distinct intersection.
    pub matrix: IntegerMatrix,
    pub snf: SnfResult,
    pub kernels: Vec<(Field, Vec<Vec<Scalar>>)>,
    /// `rank_ℚ < |H|`.
    pub bad_in_characteristic_zero: bool,
    /// Primes dividing some elementary divisor.
    pub bad_primes: Vec<u64>,
}

impl KernelReport {
    pub fn kernel(&self, field: Field) -> Option<&[Vec<Scalar>]> {
        self.kernels.iter().find(|(f, _)| *f == field).map(|(_, k)| k.as_slice())
    }

    /// Whether the characteristic of `field` yields a nontrivial kernel.
    pub fn is_bad(&self, field: Field) -> bool {
        self.snf.nullity(field) > 0
    }
}

fn left_cosets(store: &mut MachineStore, h: &[ElementRef], k: &[ElementRef]) -> Result<Vec<Vec<ElementRef>>, MachineError> {
    let mut covered = BTreeSet::new();
    let mut out = Vec::new();
    for &g in h {
        if covered.contains(&g) {
            continue;
        }
        let mut coset = Vec::new();
        for &x in k {
            let gx = store.multiply(g, x)?.expect("same base vertex");
            coset.push(gx);
            covered.insert(gx);
        }
        coset.sort_unstable();
        out.push(coset);
    }
    Ok(out)
}

pub fn kernel_report(
    store: &mut MachineStore,
    h: &RecurrentSubgroup,
    delta: &DeltaGraph,
    synchronized: &[usize],
    fields: &[Field],
) -> Result<KernelReport, SimplicityError> {
    let mut blocks: Vec<CosetBlock> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &y in synchronized {
        let Some(k) = intersect_with_vertex(store, h, delta, y)? else {
            continue;
        };
        let duplicate_of = blocks.iter().position(|b| b.intersection == k);
        let cosets = left_cosets(store, &h.elements, &k)?;
        if duplicate_of.is_none() {
            for c in &cosets {
                rows.push(h.elements.iter().map(|g| i64::from(c.binary_search(g).is_ok())).collect());
            }
        }
        blocks.push(CosetBlock {
            delta_vertex: y,
            intersection: k,
            cosets,
            duplicate_of,
        });
    }
    if rows.is_empty() {
        return Err(SimplicityError::Inconsistent(String::from(
            "no synchronized vertex over the base of a recurrent subgroup",
        )));
    }
    let matrix = IntegerMatrix::from_rows(h.elements.len(), &rows);
    let snf = algebra::smith_normal_form(&matrix);
    let kernels = fields.iter().map(|&f| (f, algebra::nullspace(&matrix, f))).collect();
    let bad_in_characteristic_zero = snf.rank < snf.cols;
    let bad_primes = snf.bad_primes();
    Ok(KernelReport {
        subgroup: h.clone(),
        blocks,
        matrix,
        snf,
        kernels,
        bad_in_characteristic_zero,
        bad_primes,
    })
}

/// Whether `a`, supported in `KH`, lies in the kernel of every projection.
pub fn essential_membership_on_span(a: &AlgebraElement, store: &MachineStore, report: &KernelReport) -> Result<bool, SimplicityError> {
    let h = &report.subgroup;
    if !algebra::supported_in(a, store, h.base, &h.elements) {
        return Err(SimplicityError::SupportOutsideSubgroup);
    }
    let field = a.field();
    let mut x = vec![field.zero(); h.elements.len()];
    for (s, k) in a.terms() {
        let i = h.elements.binary_search(&s.group_part()).expect("support checked");
        x[i] = k.clone();
    }
    Ok(algebra::apply(&report.matrix, &x, field).iter().all(Scalar::is_zero))
}

/// Characteristics in which the algebra is simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacteristicSummary {
    SimpleInAll,
    NotSimpleInAny,
    /// Simple in characteristic zero and every prime not listed.
    SimpleExceptPrimes(Vec<u64>),
}

impl CharacteristicSummary {
    pub fn is_simple_in(&self, characteristic: u64) -> bool {
        match self {
            CharacteristicSummary::SimpleInAll => true,
            CharacteristicSummary::NotSimpleInAny => false,
            CharacteristicSummary::SimpleExceptPrimes(ps) => !ps.contains(&characteristic),
        }
    }
}

impl core::fmt::Display for CharacteristicSummary {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CharacteristicSummary::SimpleInAll => f.write_str("simple for all characteristics"),
            CharacteristicSummary::NotSimpleInAny => f.write_str("not simple in any characteristic"),
            CharacteristicSummary::SimpleExceptPrimes(ps) => {
                let list: Vec<String> = ps.iter().map(|p| format!("{p}")).collect();
                write!(f, "simple except in characteristic {}", list.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicityVerdict {
    pub per_field: Vec<(Field, bool)>,
    pub summary: CharacteristicSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("inapplicable: {0}")]
pub struct Inapplicable(pub String);

/// Combines the kernel reports. `contraction` carries the reason when the
/// nucleus could not be established.
pub fn simplicity_verdict(
    cf: &CfVerdict,
    contraction: Result<(), String>,
    kernels: &[KernelReport],
    fields: &[Field],
) -> Result<SimplicityVerdict, Inapplicable> {
    if !cf.holds {
        return Err(Inapplicable(String::from("the system is not of type CF")));
    }
    if let Err(reason) = contraction {
        return Err(Inapplicable(format!("contraction not established ({reason})")));
    }
    let per_field = fields
        .iter()
        .map(|&f| (f, kernels.iter().all(|k| !k.is_bad(f))))
        .collect();
    let summary = if kernels.iter().any(|k| k.bad_in_characteristic_zero) {
        CharacteristicSummary::NotSimpleInAny
    } else {
        let primes: BTreeSet<u64> = kernels.iter().flat_map(|k| k.bad_primes.iter().copied()).collect();
        if primes.is_empty() {
            CharacteristicSummary::SimpleInAll
        } else {
            CharacteristicSummary::SimpleExceptPrimes(primes.into_iter().collect())
        }
    };
    Ok(SimplicityVerdict { per_field, summary })
}

/// The reduced C*-algebra is simple exactly when the complex Steinberg
/// algebra is.
pub fn cstar_verdict(verdict: &SimplicityVerdict) -> bool {
    verdict.summary.is_simple_in(0)
}
