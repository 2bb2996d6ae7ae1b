// SPDX-License-Identifier: Apache-2.0

//! Groupoid elements as states of a partial, length-preserving transducer.
//!
//! A state with domain `v` and image `w` reads an edge `e` leaving `v`,
//! writes an edge `g(e)` leaving `w` and moves to the state `g|_e`. Products
//! and inverses are new states whose transitions are computed on demand from
//! their factors; after every operation the freshly created states are
//! compared by bisimulation against the existing ones and merged into the
//! earliest equal state. Handles returned by the public API are always the
//! canonical representatives, so two handles denote the same element exactly
//! when they are equal.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{EdgeId, Graph, Path, VertexId};

/// Default bound on the number of interned states.
pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Handle to a groupoid element stored in a [`MachineStore`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementRef(u32);

impl ElementRef {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One letter of a restriction word: a generator or its formal inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub name: String,
    pub inverse: bool,
}

impl Token {
    pub fn plain(name: &str) -> Token {
        Token {
            name: name.into(),
            inverse: false,
        }
    }

    pub fn inverted(name: &str) -> Token {
        Token {
            name: name.into(),
            inverse: true,
        }
    }

    /// Parses `c` or `c^-1`.
    pub fn parse(text: &str) -> Token {
        match text.strip_suffix("^-1") {
            Some(base) => Token::inverted(base),
            None => Token::plain(text),
        }
    }

    pub fn invert(&self) -> Token {
        Token {
            name: self.name.clone(),
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// `edge ↦ image` with the restriction written as a word `t1 t2 … tk`,
/// meaning the product `t1·t2·…·tk` (so `tk` acts first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub edge: String,
    pub image: String,
    pub restriction: Vec<Token>,
}

impl RuleSpec {
    pub fn new(edge: &str, image: &str, restriction: &[&str]) -> RuleSpec {
        RuleSpec {
            edge: edge.into(),
            image: image.into(),
            restriction: restriction.iter().map(|t| Token::parse(t)).collect(),
        }
    }
}

/// Wreath-recursion description of one generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub dom: String,
    pub im: String,
    pub rules: Vec<RuleSpec>,
}

impl GeneratorSpec {
    pub fn new(name: &str, dom: &str, im: &str, rules: Vec<RuleSpec>) -> GeneratorSpec {
        GeneratorSpec {
            name: name.into(),
            dom: dom.into(),
            im: im.into(),
            rules,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{generator}`: unknown vertex `{vertex}`")]
    UnknownVertex { generator: String, vertex: String },
    #[error("generator `{generator}`: unknown edge `{edge}`")]
    UnknownEdge { generator: String, edge: String },
    #[error("generator `{generator}`: edge `{edge}` does not leave the domain vertex")]
    RuleOutsideDomain { generator: String, edge: String },
    #[error("generator `{generator}`: image `{image}` does not leave the image vertex")]
    ImageOutsideRange { generator: String, image: String },
    #[error("generator `{generator}`: no rule for out-edge `{edge}`")]
    MissingRule { generator: String, edge: String },
    #[error("generator `{generator}`: more than one rule for edge `{edge}`")]
    DuplicateRule { generator: String, edge: String },
    #[error("generator `{generator}`: rule violates bijectivity at image `{image}`")]
    NotBijective { generator: String, image: String },
    #[error("generator `{generator}`: restriction at `{edge}` uses unknown generator `{token}`")]
    UnknownToken {
        generator: String,
        edge: String,
        token: String,
    },
    #[error("generator `{generator}`: restriction at `{edge}` has mismatched dom/im chain ({detail})")]
    RestrictionChain {
        generator: String,
        edge: String,
        detail: String,
    },
    #[error("edge {edge:?} is outside the domain of the element")]
    EdgeOutsideDomain { edge: EdgeId },
    #[error("state cap of {cap} exceeded")]
    StateCap { cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Atom(usize),
    Identity(VertexId),
    Inverse(u32),
    Product(u32, u32),
}

#[derive(Clone, Debug)]
struct State {
    kind: Kind,
    dom: VertexId,
    im: VertexId,
    /// Indexed by position in `out_edges(dom)`: (output edge, next state).
    trans: Option<Vec<(EdgeId, u32)>>,
}

type Signature = (VertexId, VertexId, Vec<EdgeId>);

/// Interning table of transducer states with product/inverse memos and a
/// union-find of proven equalities.
#[derive(Clone, Debug)]
pub struct MachineStore {
    graph: Graph,
    states: Vec<State>,
    parent: Vec<u32>,
    identities: Vec<u32>,
    generator_names: Vec<String>,
    generators: Vec<u32>,
    products: BTreeMap<(u32, u32), u32>,
    inverses: BTreeMap<u32, u32>,
    buckets: BTreeMap<Signature, Vec<u32>>,
    state_cap: usize,
}

impl MachineStore {
    /// A store holding only the identities `id_v`.
    pub fn new(graph: &Graph) -> MachineStore {
        let mut store = MachineStore {
            graph: graph.clone(),
            states: Vec::new(),
            parent: Vec::new(),
            identities: Vec::new(),
            generator_names: Vec::new(),
            generators: Vec::new(),
            products: BTreeMap::new(),
            inverses: BTreeMap::new(),
            buckets: BTreeMap::new(),
            state_cap: DEFAULT_STATE_CAP,
        };
        for v in graph.vertices() {
            let trans = graph
                .out_edges(v)
                .iter()
                .map(|&e| (e, graph.rng(e).0))
                .collect();
            let id = store.push(Kind::Identity(v), v, v, Some(trans));
            store.identities.push(id);
        }
        // Identity transitions point at ids that exist now.
        store.minimize_from(0);
        store
    }

    /// Builds the store for a list of generators and returns it together with
    /// the name → element map.
    pub fn load_generators(
        graph: &Graph,
        specs: &[GeneratorSpec],
    ) -> Result<(MachineStore, BTreeMap<String, ElementRef>), MachineError> {
        Self::load_generators_with_cap(graph, specs, DEFAULT_STATE_CAP)
    }

    pub fn load_generators_with_cap(
        graph: &Graph,
        specs: &[GeneratorSpec],
        cap: usize,
    ) -> Result<(MachineStore, BTreeMap<String, ElementRef>), MachineError> {
        let mut store = MachineStore::new(graph);
        store.state_cap = cap;
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        let mut ends = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            if index.insert(spec.name.as_str(), i).is_some() {
                return Err(MachineError::DuplicateGenerator(spec.name.clone()));
            }
            let vertex = |name: &str| {
                graph.vertex(name).ok_or_else(|| MachineError::UnknownVertex {
                    generator: spec.name.clone(),
                    vertex: name.into(),
                })
            };
            ends.push((vertex(&spec.dom)?, vertex(&spec.im)?));
        }

        // First-level tables, checked for totality and bijectivity.
        let mut tables: Vec<Vec<(EdgeId, &[Token])>> = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            let (dom, im) = ends[i];
            let edge = |name: &str| {
                graph.edge(name).ok_or_else(|| MachineError::UnknownEdge {
                    generator: spec.name.clone(),
                    edge: name.into(),
                })
            };
            let mut table: Vec<Option<(EdgeId, &[Token])>> = vec![None; graph.out_degree(dom)];
            let mut hit = vec![false; graph.out_degree(im)];
            for rule in &spec.rules {
                let e = edge(&rule.edge)?;
                let f = edge(&rule.image)?;
                if graph.src(e) != dom {
                    return Err(MachineError::RuleOutsideDomain {
                        generator: spec.name.clone(),
                        edge: rule.edge.clone(),
                    });
                }
                if graph.src(f) != im {
                    return Err(MachineError::ImageOutsideRange {
                        generator: spec.name.clone(),
                        image: rule.image.clone(),
                    });
                }
                let slot = &mut table[graph.out_position(e)];
                if slot.is_some() {
                    return Err(MachineError::DuplicateRule {
                        generator: spec.name.clone(),
                        edge: rule.edge.clone(),
                    });
                }
                if core::mem::replace(&mut hit[graph.out_position(f)], true) {
                    return Err(MachineError::NotBijective {
                        generator: spec.name.clone(),
                        image: rule.image.clone(),
                    });
                }
                *slot = Some((f, &rule.restriction));
            }
            if let Some(pos) = table.iter().position(Option::is_none) {
                return Err(MachineError::MissingRule {
                    generator: spec.name.clone(),
                    edge: graph.edge_name(graph.out_edges(dom)[pos]).into(),
                });
            }
            if let Some(pos) = hit.iter().position(|h| !h) {
                return Err(MachineError::NotBijective {
                    generator: spec.name.clone(),
                    image: graph.edge_name(graph.out_edges(im)[pos]).into(),
                });
            }
            tables.push(table.into_iter().map(Option::unwrap).collect());
        }

        for (i, spec) in specs.iter().enumerate() {
            let (dom, im) = ends[i];
            let id = store.push(Kind::Atom(i), dom, im, None);
            store.generators.push(id);
            store.generator_names.push(spec.name.clone());
        }
        for i in 0..specs.len() {
            let atom = store.generators[i];
            store.inverse_lazy(atom);
        }
        for (i, spec) in specs.iter().enumerate() {
            let dom = ends[i].0;
            let mut trans = Vec::new();
            for (pos, &(f, word)) in tables[i].iter().enumerate() {
                let e = graph.out_edges(dom)[pos];
                let target = store.evaluate_word(&index, &ends, spec, e, f, word)?;
                trans.push((f, target));
            }
            let atom = store.generators[i] as usize;
            store.states[atom].trans = Some(trans);
        }

        let all: Vec<u32> = (0..store.states.len() as u32).collect();
        store.close(all)?;
        store.minimize_from(store.identities.len());
        let map = specs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), ElementRef(store.find(store.generators[i]))))
            .collect();
        Ok((store, map))
    }

    fn evaluate_word(
        &mut self,
        index: &BTreeMap<&str, usize>,
        ends: &[(VertexId, VertexId)],
        spec: &GeneratorSpec,
        e: EdgeId,
        f: EdgeId,
        word: &[Token],
    ) -> Result<u32, MachineError> {
        let edge_name: String = self.graph.edge_name(e).into();
        let chain_err = |detail: String| MachineError::RestrictionChain {
            generator: spec.name.clone(),
            edge: edge_name.clone(),
            detail,
        };
        let want_dom = self.graph.rng(e);
        let want_im = self.graph.rng(f);
        if word.is_empty() {
            if want_dom != want_im {
                return Err(chain_err(alloc::format!(
                    "empty word needs {} = {}",
                    self.graph.vertex_name(want_dom),
                    self.graph.vertex_name(want_im)
                )));
            }
            return Ok(self.identities[want_dom.index()]);
        }
        let mut acc: Option<u32> = None;
        for token in word {
            let gi = *index.get(token.name.as_str()).ok_or_else(|| MachineError::UnknownToken {
                generator: spec.name.clone(),
                edge: edge_name.clone(),
                token: token.name.clone(),
            })?;
            let atom = self.generators[gi];
            let state = if token.inverse {
                self.inverse_lazy(atom)
            } else {
                atom
            };
            let im = if token.inverse { ends[gi].0 } else { ends[gi].1 };
            acc = Some(match acc {
                None => {
                    if im != want_im {
                        return Err(chain_err(alloc::format!(
                            "word ends in {} but the image edge ends in {}",
                            self.graph.vertex_name(im),
                            self.graph.vertex_name(want_im)
                        )));
                    }
                    state
                }
                Some(h) => {
                    if self.states[h as usize].dom != im {
                        return Err(chain_err(alloc::format!("`{token}` does not compose")));
                    }
                    self.product_lazy(h, state)
                }
            });
        }
        let acc = acc.expect("nonempty word");
        if self.states[acc as usize].dom != want_dom {
            return Err(chain_err(alloc::format!(
                "word starts in {} but the edge ends in {}",
                self.graph.vertex_name(self.states[acc as usize].dom),
                self.graph.vertex_name(want_dom)
            )));
        }
        Ok(acc)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn state_cap(&self) -> usize {
        self.state_cap
    }

    pub fn set_state_cap(&mut self, cap: usize) {
        self.state_cap = cap;
    }

    /// Number of interned states, including merged duplicates.
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Number of distinct elements currently interned.
    pub fn canonical_count(&self) -> usize {
        (0..self.states.len() as u32).filter(|&s| self.find(s) == s).count()
    }

    pub fn canonical_elements(&self) -> Vec<ElementRef> {
        (0..self.states.len() as u32)
            .filter(|&s| self.find(s) == s)
            .map(ElementRef)
            .collect()
    }

    /// Generators in declaration order.
    pub fn generators(&self) -> Vec<(String, ElementRef)> {
        self.generator_names
            .iter()
            .zip(&self.generators)
            .map(|(n, &g)| (n.clone(), ElementRef(self.find(g))))
            .collect()
    }

    pub fn generator(&self, name: &str) -> Option<ElementRef> {
        let i = self.generator_names.iter().position(|n| n == name)?;
        Some(ElementRef(self.find(self.generators[i])))
    }

    pub fn identity(&self, v: VertexId) -> ElementRef {
        ElementRef(self.identities[v.index()])
    }

    pub fn is_identity(&self, g: ElementRef) -> bool {
        let g = self.find(g.0);
        g == self.identities[self.states[g as usize].dom.index()]
    }

    pub fn dom(&self, g: ElementRef) -> VertexId {
        self.states[g.index()].dom
    }

    pub fn im(&self, g: ElementRef) -> VertexId {
        self.states[g.index()].im
    }

    /// `(g(e), g|_e)`.
    pub fn act_edge(&self, g: ElementRef, e: EdgeId) -> Result<(EdgeId, ElementRef), MachineError> {
        let st = &self.states[g.index()];
        if e.index() >= self.graph.edge_count() || self.graph.src(e) != st.dom {
            return Err(MachineError::EdgeOutsideDomain { edge: e });
        }
        let (f, t) = self.trans(g.0)[self.graph.out_position(e)];
        Ok((f, ElementRef(self.find(t))))
    }

    /// `(g(p), g|_p)`, or `None` when `p` does not start at `dom g`.
    pub fn act_path(&self, g: ElementRef, p: &Path) -> Option<(Path, ElementRef)> {
        if p.source() != self.dom(g) {
            return None;
        }
        let mut cur = g;
        let mut out = Vec::with_capacity(p.len());
        for &e in p.edges() {
            let (f, next) = self.act_edge(cur, e).ok()?;
            out.push(f);
            cur = next;
        }
        let image = if out.is_empty() {
            Path::anchor(self.im(g))
        } else {
            Path::from_edges(&self.graph, &out).expect("image of a path is a path")
        };
        Some((image, cur))
    }

    /// Restriction `g|_p` (shorthand for the second half of [`act_path`]).
    ///
    /// [`act_path`]: MachineStore::act_path
    pub fn restrict(&self, g: ElementRef, p: &Path) -> Option<ElementRef> {
        self.act_path(g, p).map(|(_, r)| r)
    }

    /// First-level table of `g`: `(e, g(e), g|_e)` over the out-edges of `dom g`.
    pub fn transitions(&self, g: ElementRef) -> Vec<(EdgeId, EdgeId, ElementRef)> {
        let dom = self.dom(g);
        self.graph
            .out_edges(dom)
            .iter()
            .zip(self.trans(g.0))
            .map(|(&e, &(f, t))| (e, f, ElementRef(self.find(t))))
            .collect()
    }

    /// `h·g` (apply `g`, then `h`), or `None` when `im g != dom h`.
    pub fn multiply(&mut self, h: ElementRef, g: ElementRef) -> Result<Option<ElementRef>, MachineError> {
        let (h, g) = (self.find(h.0), self.find(g.0));
        if self.states[g as usize].im != self.states[h as usize].dom {
            return Ok(None);
        }
        let mark = self.states.len();
        let p = self.product_lazy(h, g);
        if p as usize >= mark {
            if let Err(err) = self.close(vec![p]) {
                self.rollback(mark);
                return Err(err);
            }
            self.minimize_from(mark);
        }
        Ok(Some(ElementRef(self.find(p))))
    }

    /// Product of a nonempty composable list, left to right.
    pub fn multiply_all(&mut self, word: &[ElementRef]) -> Result<Option<ElementRef>, MachineError> {
        let Some((&first, rest)) = word.split_first() else {
            return Ok(None);
        };
        let mut acc = first;
        for &g in rest {
            match self.multiply(acc, g)? {
                Some(x) => acc = x,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    pub fn inverse(&mut self, g: ElementRef) -> ElementRef {
        let mark = self.states.len();
        let x = self.inverse_lazy(self.find(g.0));
        if x as usize >= mark {
            let cap = core::mem::replace(&mut self.state_cap, usize::MAX);
            self.close(vec![x]).expect("inverse closure is bounded by the existing states");
            self.state_cap = cap;
            self.minimize_from(mark);
        }
        ElementRef(self.find(x))
    }

    /// Bisimulation check; by the canonical-handle invariant this agrees
    /// with handle equality, which it checks first.
    pub fn equals(&mut self, g: ElementRef, h: ElementRef) -> bool {
        let (g, h) = (self.find(g.0), self.find(h.0));
        if g == h {
            return true;
        }
        self.try_merge(g, h)
    }

    /// Evaluates a word of generator tokens as a product; the empty word at
    /// `v` is `id_v`.
    pub fn evaluate(&mut self, word: &[Token], v: VertexId) -> Result<Option<ElementRef>, MachineError> {
        if word.is_empty() {
            return Ok(Some(self.identity(v)));
        }
        let mut elems = Vec::new();
        for t in word {
            let Some(g) = self.generator(&t.name) else {
                return Ok(None);
            };
            elems.push(if t.inverse { self.inverse(g) } else { g });
        }
        self.multiply_all(&elems)
    }

    /// A word over the generators naming `g` (empty for identities).
    pub fn word(&self, g: ElementRef) -> Vec<Token> {
        let mut out = Vec::new();
        self.word_into(g.0, false, &mut out);
        out
    }

    fn word_into(&self, s: u32, invert: bool, out: &mut Vec<Token>) {
        match self.states[s as usize].kind {
            Kind::Identity(_) => {}
            Kind::Atom(i) => out.push(Token {
                name: self.generator_names[i].clone(),
                inverse: invert,
            }),
            Kind::Inverse(x) => self.word_into(x, !invert, out),
            Kind::Product(h, g) => {
                if invert {
                    self.word_into(g, true, out);
                    self.word_into(h, true, out);
                } else {
                    self.word_into(h, false, out);
                    self.word_into(g, false, out);
                }
            }
        }
    }

    /// Human-readable name: `id_v` or the generator word, space separated.
    pub fn label(&self, g: ElementRef) -> String {
        let w = self.word(g);
        if w.is_empty() {
            return alloc::format!("id_{}", self.graph.vertex_name(self.dom(g)));
        }
        let parts: Vec<String> = w.iter().map(|t| alloc::format!("{t}")).collect();
        parts.join(" ")
    }

    // ----- internals -------------------------------------------------------

    fn push(&mut self, kind: Kind, dom: VertexId, im: VertexId, trans: Option<Vec<(EdgeId, u32)>>) -> u32 {
        let id = self.states.len() as u32;
        self.states.push(State { kind, dom, im, trans });
        self.parent.push(id);
        id
    }

    fn find(&self, mut s: u32) -> u32 {
        while self.parent[s as usize] != s {
            s = self.parent[s as usize];
        }
        s
    }

    fn trans(&self, s: u32) -> &[(EdgeId, u32)] {
        self.states[s as usize]
            .trans
            .as_deref()
            .expect("transitions are filled before a state is exposed")
    }

    fn is_identity_raw(&self, s: u32) -> bool {
        matches!(self.states[s as usize].kind, Kind::Identity(_))
    }

    fn product_lazy(&mut self, h: u32, g: u32) -> u32 {
        let (h, g) = (self.find(h), self.find(g));
        if self.is_identity_raw(h) {
            return g;
        }
        if self.is_identity_raw(g) {
            return h;
        }
        if let Some(&p) = self.products.get(&(h, g)) {
            return self.find(p);
        }
        let (dom, im) = (self.states[g as usize].dom, self.states[h as usize].im);
        let p = self.push(Kind::Product(h, g), dom, im, None);
        self.products.insert((h, g), p);
        p
    }

    fn inverse_lazy(&mut self, x: u32) -> u32 {
        let x = self.find(x);
        match self.states[x as usize].kind {
            Kind::Identity(_) => return x,
            Kind::Inverse(y) => return self.find(y),
            _ => {}
        }
        if let Some(&i) = self.inverses.get(&x) {
            return self.find(i);
        }
        let (dom, im) = (self.states[x as usize].im, self.states[x as usize].dom);
        let i = self.push(Kind::Inverse(x), dom, im, None);
        self.inverses.insert(x, i);
        self.inverses.insert(i, x);
        i
    }

    /// Fills transitions of every state reachable from `start`.
    fn close(&mut self, start: Vec<u32>) -> Result<(), MachineError> {
        let mut stack = start;
        while let Some(s) = stack.pop() {
            if self.states.len() > self.state_cap {
                return Err(MachineError::StateCap { cap: self.state_cap });
            }
            if self.states[s as usize].trans.is_some() {
                continue;
            }
            let needs: Vec<u32> = match self.states[s as usize].kind {
                Kind::Product(h, g) => vec![h, g],
                Kind::Inverse(x) => vec![x],
                _ => Vec::new(),
            };
            let pending: Vec<u32> = needs
                .into_iter()
                .filter(|&d| self.states[d as usize].trans.is_none())
                .collect();
            if !pending.is_empty() {
                stack.push(s);
                stack.extend(pending);
                continue;
            }
            let trans = self.compute_trans(s);
            for &(_, t) in &trans {
                if self.states[t as usize].trans.is_none() {
                    stack.push(t);
                }
            }
            self.states[s as usize].trans = Some(trans);
        }
        if self.states.len() > self.state_cap {
            return Err(MachineError::StateCap { cap: self.state_cap });
        }
        Ok(())
    }

    fn compute_trans(&mut self, s: u32) -> Vec<(EdgeId, u32)> {
        let st = self.states[s as usize].clone();
        match st.kind {
            Kind::Product(h, g) => {
                let gt = self.trans(g).to_vec();
                let mut out = Vec::with_capacity(gt.len());
                for (e1, g1) in gt {
                    let (e2, h1) = self.trans(h)[self.graph.out_position(e1)];
                    let t = self.product_lazy(h1, g1);
                    out.push((e2, t));
                }
                out
            }
            Kind::Inverse(x) => {
                let xt = self.trans(x).to_vec();
                let xdom = self.states[x as usize].dom;
                let mut out = vec![(EdgeId(0), 0); xt.len()];
                for (pos, (f, r)) in xt.into_iter().enumerate() {
                    let e = self.graph.out_edges(xdom)[pos];
                    let t = self.inverse_lazy(r);
                    out[self.graph.out_position(f)] = (e, t);
                }
                out
            }
            Kind::Atom(_) | Kind::Identity(_) => unreachable!("atoms and identities are filled at creation"),
        }
    }

    fn rollback(&mut self, mark: usize) {
        self.states.truncate(mark);
        self.parent.truncate(mark);
        let m = mark as u32;
        self.products.retain(|&(h, g), &mut p| p < m && h < m && g < m);
        self.inverses.retain(|&a, &mut b| a < m && b < m);
    }

    fn signature(&self, s: u32) -> Signature {
        let st = &self.states[s as usize];
        (st.dom, st.im, self.trans(s).iter().map(|&(f, _)| f).collect())
    }

    /// Merges every state created at or after `mark` into an earlier equal
    /// state when one exists.
    fn minimize_from(&mut self, mark: usize) {
        for s in mark as u32..self.states.len() as u32 {
            if self.find(s) != s {
                continue;
            }
            let sig = self.signature(s);
            let candidates = self.buckets.get(&sig).cloned().unwrap_or_default();
            let mut merged = false;
            for c in candidates {
                if self.find(c) == c && c != s && self.try_merge(c, s) {
                    merged = true;
                    break;
                }
            }
            if !merged {
                self.buckets.entry(sig).or_default().push(s);
            }
        }
        for s in mark..self.states.len() {
            self.parent[s] = self.find(s as u32);
        }
    }

    /// Coinductive equality with a scratch union-find; commits on success.
    fn try_merge(&mut self, a: u32, b: u32) -> bool {
        let mut overlay: BTreeMap<u32, u32> = BTreeMap::new();
        let find_o = |store: &Self, overlay: &BTreeMap<u32, u32>, x: u32| {
            let mut r = store.find(x);
            while let Some(&p) = overlay.get(&r) {
                r = p;
            }
            r
        };
        let mut todo = vec![(a, b)];
        while let Some((x, y)) = todo.pop() {
            let (rx, ry) = (find_o(self, &overlay, x), find_o(self, &overlay, y));
            if rx == ry {
                continue;
            }
            let (sx, sy) = (&self.states[rx as usize], &self.states[ry as usize]);
            if sx.dom != sy.dom || sx.im != sy.im {
                return false;
            }
            let (tx, ty) = (self.trans(rx), self.trans(ry));
            if tx.iter().zip(ty).any(|(p, q)| p.0 != q.0) {
                return false;
            }
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            overlay.insert(hi, lo);
            todo.extend(tx.iter().zip(ty).map(|(p, q)| (p.1, q.1)));
        }
        let finals: Vec<(u32, u32)> = overlay
            .keys()
            .map(|&k| (k, find_o(self, &overlay, k)))
            .collect();
        for (k, r) in finals {
            self.parent[k as usize] = r;
        }
        true
    }
}
