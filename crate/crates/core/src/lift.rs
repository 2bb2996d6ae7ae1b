// SPDX-License-Identifier: Apache-2.0

//! Lifting a self-similar group on two letters to a groupoid on a
//! three-vertex graph with a single orbit.
//!
//! The graph has vertices `x, y, z` and edges
//!
//! ```text
//!   e: x→z   f: x→y   k: z→y   l: z→x   i: y→x   j: y→z
//! ```
//!
//! with the labelling β sending `e, k, i` to the first letter and `f, l, j`
//! to the second. The groupoid consists of the maps `β_u⁻¹ h β_v`; it is
//! generated by `h[u,v] = β_u⁻¹ h β_v` (domain `v`, image `u`) for the
//! generators `h` of the group, together with `1[u,v] = β_u⁻¹ β_v` for
//! `u ≠ v`. Collapsing onto `x` with connectors `1[x,y]`, `1[x,z]` returns
//! the original group, acting on the loops `e` and `f`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::Presentation;
use crate::graph::{Graph, GraphError, RawEdge, RawGraph};
use crate::machine::{GeneratorSpec, RuleSpec, Token};

const VERTICES: [&str; 3] = ["x", "y", "z"];

/// `(edge, source, range, letter index)`.
const EDGES: [(&str, &str, &str, usize); 6] = [
    ("e", "x", "z", 0),
    ("f", "x", "y", 1),
    ("k", "z", "y", 0),
    ("l", "z", "x", 1),
    ("i", "y", "x", 0),
    ("j", "y", "z", 1),
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LiftError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("the group must act on a bouquet of exactly two loops, found {vertices} vertices and {edges} edges")]
    NotTwoLetterBouquet { vertices: usize, edges: usize },
    #[error("generator `{0}` has no rule for letter `{1}`")]
    MissingRule(String, String),
    #[error("generator name `{0}` collides with the connector names of the lift")]
    ReservedName(String),
}

/// The lifted presentation and the letter carried by each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lift {
    pub presentation: Presentation,
    /// `(edge name, letter name)` for every edge of the three-vertex graph.
    pub beta: Vec<(String, String)>,
}

/// Name of `β_u⁻¹ h β_v`; `h = "1"` is the identity of the group.
pub fn lifted_name(h: &str, u: &str, v: &str) -> String {
    format!("{h}[{u},{v}]")
}

fn out_edge(src: &str, letter: usize) -> &'static str {
    EDGES
        .iter()
        .find(|(_, s, _, l)| *s == src && *l == letter)
        .map(|(e, ..)| *e)
        .expect("each vertex emits one edge per letter")
}

fn range_of(edge: &str) -> &'static str {
    EDGES.iter().find(|(e, ..)| *e == edge).map(|(_, _, r, _)| *r).expect("known edge")
}

/// `β_u⁻¹ (t1⋯tk) β_v` as a word in the lifted generators. Intermediate
/// vertices are all `v`.
fn transport_word(word: &[Token], u: &str, v: &str) -> Vec<Token> {
    if word.is_empty() {
        return if u == v { Vec::new() } else { vec![Token::plain(&lifted_name("1", u, v))] };
    }
    word.iter()
        .enumerate()
        .map(|(n, t)| {
            let left = if n == 0 { u } else { v };
            if t.inverse {
                Token::inverted(&lifted_name(&t.name, v, left))
            } else {
                Token::plain(&lifted_name(&t.name, left, v))
            }
        })
        .collect()
}

pub fn lift_two_letter_group(group: &Presentation) -> Result<Lift, LiftError> {
    let graph = Graph::new(&group.graph)?;
    let letters: Vec<_> = graph.edges().collect();
    if graph.vertex_count() != 1 || letters.len() != 2 {
        return Err(LiftError::NotTwoLetterBouquet {
            vertices: graph.vertex_count(),
            edges: letters.len(),
        });
    }
    let letter_name = |n: usize| String::from(graph.edge_name(letters[n]));
    let letter_index = |name: &str| letters.iter().position(|&e| graph.edge_name(e) == name);

    let mut generators = Vec::new();
    for u in VERTICES {
        for v in VERTICES {
            if u == v {
                continue;
            }
            let rules = out_of(v)
                .map(|(c, letter)| {
                    let d = out_edge(u, letter);
                    RuleSpec {
                        edge: c.into(),
                        image: d.into(),
                        restriction: transport_word(&[], range_of(d), range_of(c)),
                    }
                })
                .collect();
            generators.push(GeneratorSpec {
                name: lifted_name("1", u, v),
                dom: v.into(),
                im: u.into(),
                rules,
            });
        }
    }
    for h in &group.generators {
        if h.name == "1" {
            return Err(LiftError::ReservedName(h.name.clone()));
        }
        for u in VERTICES {
            for v in VERTICES {
                let mut rules = Vec::new();
                for (c, letter) in out_of(v) {
                    let rule = h
                        .rules
                        .iter()
                        .find(|r| letter_index(&r.edge) == Some(letter))
                        .ok_or_else(|| LiftError::MissingRule(h.name.clone(), letter_name(letter)))?;
                    let image = letter_index(&rule.image)
                        .ok_or_else(|| LiftError::MissingRule(h.name.clone(), rule.image.clone()))?;
                    let d = out_edge(u, image);
                    rules.push(RuleSpec {
                        edge: c.into(),
                        image: d.into(),
                        restriction: transport_word(&rule.restriction, range_of(d), range_of(c)),
                    });
                }
                generators.push(GeneratorSpec {
                    name: lifted_name(&h.name, u, v),
                    dom: v.into(),
                    im: u.into(),
                    rules,
                });
            }
        }
    }
    let raw = RawGraph {
        vertices: VERTICES.iter().map(|v| String::from(*v)).collect(),
        edges: EDGES.iter().map(|(e, s, r, _)| RawEdge::new(e, s, r)).collect(),
    };
    let beta = EDGES.iter().map(|(e, .., l)| (String::from(*e), letter_name(*l))).collect();
    Ok(Lift {
        presentation: Presentation { graph: raw, generators },
        beta,
    })
}

fn out_of(v: &str) -> impl Iterator<Item = (&'static str, usize)> + '_ {
    EDGES.iter().filter(move |(_, s, ..)| *s == v).map(|(e, _, _, l)| (*e, *l))
}
