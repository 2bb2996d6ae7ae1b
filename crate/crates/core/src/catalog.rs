// SPDX-License-Identifier: Apache-2.0

//! Standard presentations used throughout the tests and as CLI fixtures.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{RawEdge, RawGraph};
use crate::machine::{GeneratorSpec, RuleSpec};

/// A graph together with wreath-recursion generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub graph: RawGraph,
    pub generators: Vec<GeneratorSpec>,
}

fn raw(vertices: &[&str], edges: &[(&str, &str, &str)]) -> RawGraph {
    RawGraph {
        vertices: vertices.iter().map(|v| (*v).into()).collect(),
        edges: edges.iter().map(|(e, s, r)| RawEdge::new(e, s, r)).collect(),
    }
}

fn r(edge: &str, image: &str, restriction: &[&str]) -> RuleSpec {
    RuleSpec::new(edge, image, restriction)
}

fn gen(name: &str, dom: &str, im: &str, rules: Vec<RuleSpec>) -> GeneratorSpec {
    GeneratorSpec::new(name, dom, im, rules)
}

/// Bouquet of loops at a single vertex `v`.
pub fn bouquet(letters: &[&str]) -> RawGraph {
    let edges: Vec<(&str, &str, &str)> = letters.iter().map(|l| (*l, "v", "v")).collect();
    raw(&["v"], &edges)
}

/// The Basilica group on the loops `e`, `f`.
pub fn basilica() -> Presentation {
    Presentation {
        graph: bouquet(&["e", "f"]),
        generators: vec![
            gen("c", "v", "v", vec![r("e", "e", &[]), r("f", "f", &["d"])]),
            gen("d", "v", "v", vec![r("e", "f", &["c"]), r("f", "e", &[])]),
        ],
    }
}

/// The Basilica group on the loops `a`, `b` (the input of [`crate::lift`]).
pub fn basilica_ab() -> Presentation {
    Presentation {
        graph: bouquet(&["a", "b"]),
        generators: vec![
            gen("c", "v", "v", vec![r("a", "a", &[]), r("b", "b", &["d"])]),
            gen("d", "v", "v", vec![r("a", "b", &["c"]), r("b", "a", &[])]),
        ],
    }
}

/// The first Grigorchuk group on the loops `i`, `j`.
pub fn grigorchuk() -> Presentation {
    Presentation {
        graph: bouquet(&["i", "j"]),
        generators: vec![
            gen("a", "v", "v", vec![r("i", "j", &[]), r("j", "i", &[])]),
            gen("b", "v", "v", vec![r("i", "i", &["a"]), r("j", "j", &["c"])]),
            gen("c", "v", "v", vec![r("i", "i", &["a"]), r("j", "j", &["d"])]),
            gen("d", "v", "v", vec![r("i", "i", &[]), r("j", "j", &["b"])]),
        ],
    }
}

/// A two-vertex groupoid with a single orbit whose collapse onto the
/// bouquet of two loops is the Basilica group.
pub fn two_vertex_basilica_groupoid() -> Presentation {
    Presentation {
        graph: raw(&["v", "w"], &[("i", "v", "v"), ("j", "v", "w"), ("k", "w", "v"), ("l", "w", "v")]),
        generators: vec![
            gen("a", "v", "w", vec![r("i", "l", &[]), r("j", "k", &["b"])]),
            gen("b", "w", "v", vec![r("k", "i", &[]), r("l", "j", &["a"])]),
        ],
    }
}

/// Two vertices with out-degree four: the Grigorchuk group at `x` and the
/// Grigorchuk–Erschler group at `y`, joined by the edges `e, f, g, h`.
pub fn grigorchuk_pair_groupoid() -> Presentation {
    let graph = raw(
        &["x", "y"],
        &[
            ("i", "x", "x"),
            ("j", "x", "x"),
            ("e", "x", "y"),
            ("f", "x", "y"),
            ("m", "y", "y"),
            ("n", "y", "y"),
            ("g", "y", "x"),
            ("h", "y", "x"),
        ],
    );
    let generators = vec![
        gen(
            "a_x",
            "x",
            "x",
            vec![r("i", "j", &[]), r("j", "i", &[]), r("e", "f", &[]), r("f", "e", &[])],
        ),
        gen(
            "b_x",
            "x",
            "x",
            vec![r("i", "i", &["a_x"]), r("j", "j", &["c_x"]), r("e", "e", &[]), r("f", "f", &[])],
        ),
        gen(
            "c_x",
            "x",
            "x",
            vec![r("i", "i", &["a_x"]), r("j", "j", &["d_x"]), r("e", "e", &[]), r("f", "f", &[])],
        ),
        gen(
            "d_x",
            "x",
            "x",
            vec![r("i", "i", &[]), r("j", "j", &["b_x"]), r("e", "e", &[]), r("f", "f", &[])],
        ),
        gen(
            "a_y",
            "y",
            "y",
            vec![r("m", "n", &[]), r("n", "m", &[]), r("g", "h", &[]), r("h", "g", &[])],
        ),
        gen(
            "b_y",
            "y",
            "y",
            vec![r("m", "m", &["a_y"]), r("n", "n", &["b_y"]), r("g", "g", &[]), r("h", "h", &[])],
        ),
        gen(
            "c_y",
            "y",
            "y",
            vec![r("m", "m", &["a_y"]), r("n", "n", &["d_y"]), r("g", "g", &[]), r("h", "h", &[])],
        ),
        gen(
            "d_y",
            "y",
            "y",
            vec![r("m", "m", &[]), r("n", "n", &["c_y"]), r("g", "g", &[]), r("h", "h", &[])],
        ),
    ];
    Presentation { graph, generators }
}

/// Two disjoint directed 2-cycles `u ⇄ v`, `x ⇄ y` with isomorphisms
/// `u → x`, `v → y` between them.
pub fn double_two_cycle() -> Presentation {
    Presentation {
        graph: raw(&["u", "v", "x", "y"], &[("a", "u", "v"), ("b", "v", "u"), ("c", "x", "y"), ("d", "y", "x")]),
        generators: vec![
            gen("f_ux", "u", "x", vec![r("a", "c", &["f_vy"])]),
            gen("f_vy", "v", "y", vec![r("b", "d", &["f_ux"])]),
        ],
    }
}

/// Two bouquets with no isomorphism between their vertices.
pub fn disconnected_bouquets() -> Presentation {
    Presentation {
        graph: raw(&["p", "q"], &[("a", "p", "p"), ("b", "p", "p"), ("c", "q", "q"), ("d", "q", "q")]),
        generators: vec![
            gen("s", "p", "p", vec![r("a", "b", &[]), r("b", "a", &["s"])]),
            gen("t", "q", "q", vec![r("c", "d", &[]), r("d", "c", &["t"])]),
        ],
    }
}

/// Binary odometer on a graph where `w` has a single out-edge.
pub fn odometer_with_tail() -> Presentation {
    Presentation {
        graph: raw(&["v", "w"], &[("a", "v", "v"), ("b", "v", "v"), ("t", "v", "w"), ("s", "w", "v")]),
        generators: vec![gen(
            "o",
            "v",
            "v",
            vec![r("a", "b", &[]), r("b", "a", &["o"]), r("t", "t", &[])],
        )],
    }
}
