// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use proptest::prelude::*;
use ssg_core::catalog::{self, Presentation};
use ssg_core::graph::{EdgeId, Graph, Path, VertexId};
use ssg_core::machine::{ElementRef, GeneratorSpec, MachineStore, RuleSpec, Token};

pub fn load(p: &Presentation) -> MachineStore {
    let g = Graph::new(&p.graph).unwrap();
    MachineStore::load_generators(&g, &p.generators).unwrap().0
}

/// Systems of small out-degree used across the property suites.
pub fn small_systems() -> Vec<(&'static str, Presentation)> {
    vec![
        ("basilica", catalog::basilica()),
        ("grigorchuk", catalog::grigorchuk()),
        ("two-vertex", catalog::two_vertex_basilica_groupoid()),
    ]
}

/// Random walk of tokens in application order, interpreted against `store`:
/// each choice picks among the tokens whose domain is the current vertex.
pub fn word_from_choices(store: &MachineStore, start: usize, choices: &[usize]) -> (VertexId, Vec<Token>) {
    let n = store.graph().vertex_count();
    let v0 = VertexId((start % n) as u32);
    let mut v = v0;
    let mut applied = Vec::new();
    for &c in choices {
        let options: Vec<(Token, VertexId)> = store
            .generators()
            .into_iter()
            .flat_map(|(name, g)| {
                let (d, i) = (store.dom(g), store.im(g));
                [(Token::plain(&name), d, i), (Token::inverted(&name), i, d)]
            })
            .filter(|(_, d, _)| *d == v)
            .map(|(t, _, i)| (t, i))
            .collect();
        if options.is_empty() {
            break;
        }
        let (t, i) = options[c % options.len()].clone();
        applied.push(t);
        v = i;
    }
    applied.reverse();
    (v0, applied)
}

/// Applies the tokens one at a time (last token first) without forming
/// products.
pub fn act_word(store: &mut MachineStore, word: &[Token], p: &Path) -> Option<Path> {
    let mut cur = p.clone();
    for t in word.iter().rev() {
        let g = store.generator(&t.name)?;
        let g = if t.inverse { store.inverse(g) } else { g };
        cur = store.act_path(g, &cur)?.0;
    }
    Some(cur)
}

/// Path from `v` of length at most `choices.len()` following the choices.
pub fn path_from(graph: &Graph, v: VertexId, choices: &[usize]) -> Path {
    let mut p = Path::anchor(v);
    for &c in choices {
        let out = graph.out_edges(p.range());
        if out.is_empty() {
            break;
        }
        p = p.extended(graph, out[c % out.len()]);
    }
    p
}

/// Path ending at `v`, built backwards along in-edges.
pub fn path_into(graph: &Graph, v: VertexId, choices: &[usize]) -> Path {
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut cur = v;
    for &c in choices {
        let ins: Vec<EdgeId> = graph.edges().filter(|&e| graph.rng(e) == cur).collect();
        if ins.is_empty() {
            break;
        }
        let e = ins[c % ins.len()];
        edges.push(e);
        cur = graph.src(e);
    }
    edges.reverse();
    if edges.is_empty() {
        Path::anchor(v)
    } else {
        Path::from_edges(graph, &edges).unwrap()
    }
}

/// Whether `g` and `h` act identically on every path of length `depth`.
pub fn same_action(store: &MachineStore, g: ElementRef, h: ElementRef, depth: usize) -> bool {
    if store.dom(g) != store.dom(h) || store.im(g) != store.im(h) {
        return false;
    }
    let graph = store.graph().clone();
    graph
        .paths_from(store.dom(g), depth)
        .unwrap()
        .iter()
        .all(|p| store.act_path(g, p).map(|x| x.0) == store.act_path(h, p).map(|x| x.0))
}

/// Random automaton group on a bouquet of two loops: each generator permutes
/// the letters and restricts to a single token or to the identity.
pub fn random_bouquet_group() -> impl Strategy<Value = Presentation> {
    (1usize..=3)
        .prop_flat_map(|k| proptest::collection::vec((any::<bool>(), 0usize..7, 0usize..7), k))
        .prop_map(|gens| {
            let k = gens.len();
            let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
            let token = |c: usize| -> Vec<String> {
                // 0..k plain, k..2k inverse, else identity.
                if c < k {
                    vec![names[c].clone()]
                } else if c < 2 * k {
                    vec![format!("{}^-1", names[c - k])]
                } else {
                    Vec::new()
                }
            };
            let generators = gens
                .iter()
                .enumerate()
                .map(|(i, &(swap, r0, r1))| {
                    let (i0, i1) = if swap { ("b", "a") } else { ("a", "b") };
                    let w0 = token(r0);
                    let w1 = token(r1);
                    let w0: Vec<&str> = w0.iter().map(String::as_str).collect();
                    let w1: Vec<&str> = w1.iter().map(String::as_str).collect();
                    GeneratorSpec::new(&names[i], "v", "v", vec![RuleSpec::new("a", i0, &w0), RuleSpec::new("b", i1, &w1)])
                })
                .collect();
            Presentation {
                graph: catalog::bouquet(&["a", "b"]),
                generators,
            }
        })
}
