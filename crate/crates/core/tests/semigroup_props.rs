// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use proptest::prelude::*;
use ssg_core::graph::{Path, VertexId};
use ssg_core::machine::MachineStore;
use ssg_core::semigroup::{multiply_opt, CanonicalElement};

type Spec = (usize, Vec<usize>, Vec<usize>, Vec<usize>);

fn element_spec() -> impl Strategy<Value = Spec> {
    (
        0usize..4,
        proptest::collection::vec(0usize..16, 0..=4),
        proptest::collection::vec(0usize..4, 0..=3),
        proptest::collection::vec(0usize..4, 0..=3),
    )
}

/// `p g q*` with `g` a random word, `p` ending at `im g`, `q` at `dom g`.
fn build(store: &mut MachineStore, (start, w, p, q): &Spec) -> CanonicalElement {
    let (v, t) = word_from_choices(store, *start, w);
    let g = store.evaluate(&t, v).unwrap().unwrap();
    let graph = store.graph().clone();
    let p = path_into(&graph, store.im(g), p);
    let q = path_into(&graph, store.dom(g), q);
    CanonicalElement::make(store, p, g, q).unwrap()
}

fn act(s: Option<&CanonicalElement>, store: &MachineStore, w: Option<Path>) -> Option<Path> {
    s?.act_on_path(store, &w?)
}

fn all_paths(store: &MachineStore, depth: usize) -> Vec<Path> {
    let graph = store.graph();
    let mut out = Vec::new();
    for v in graph.vertices() {
        for n in 0..=depth {
            out.extend(graph.paths_from(v, n).unwrap());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn associativity_with_action_oracle(sys in 0usize..3, a in element_spec(), b in element_spec(), c in element_spec()) {
        let mut store = load(&small_systems()[sys].1);
        let (s, t, u) = (build(&mut store, &a), build(&mut store, &b), build(&mut store, &c));
        let st = s.multiply(&t, &mut store).unwrap();
        let tu = t.multiply(&u, &mut store).unwrap();
        let left = multiply_opt(st.as_ref(), Some(&u), &mut store).unwrap();
        let right = multiply_opt(Some(&s), tu.as_ref(), &mut store).unwrap();
        prop_assert_eq!(&left, &right);
        for w in all_paths(&store, 5) {
            let direct = act(Some(&s), &store, act(Some(&t), &store, act(Some(&u), &store, Some(w.clone()))));
            prop_assert_eq!(act(left.as_ref(), &store, Some(w.clone())), direct.clone());
            let via_st = act(st.as_ref(), &store, act(Some(&u), &store, Some(w)));
            prop_assert_eq!(via_st, direct);
        }
    }

    #[test]
    fn regularity(sys in 0usize..3, a in element_spec()) {
        let mut store = load(&small_systems()[sys].1);
        let s = build(&mut store, &a);
        let ss = s.star(&mut store);
        let sss = multiply_opt(s.multiply(&ss, &mut store).unwrap().as_ref(), Some(&s), &mut store).unwrap();
        prop_assert_eq!(sss, Some(s.clone()));
        let s3 = multiply_opt(ss.multiply(&s, &mut store).unwrap().as_ref(), Some(&ss), &mut store).unwrap();
        prop_assert_eq!(s3, Some(ss));
    }

    #[test]
    fn idempotents_commute_and_order_by_prefix(
        sys in 0usize..3,
        v in 0usize..4,
        p in proptest::collection::vec(0usize..4, 0..=4),
        q in proptest::collection::vec(0usize..4, 0..=4),
        share in any::<bool>(),
    ) {
        let mut store = load(&small_systems()[sys].1);
        let graph = store.graph().clone();
        let v = VertexId((v % graph.vertex_count()) as u32);
        let p = path_from(&graph, v, &p);
        let q = if share {
            p.concat(&path_from(&graph, p.range(), &q)).unwrap()
        } else {
            path_from(&graph, v, &q)
        };
        let pp = CanonicalElement::projection(&store, &p);
        let qq = CanonicalElement::projection(&store, &q);
        let a = pp.multiply(&qq, &mut store).unwrap();
        let b = qq.multiply(&pp, &mut store).unwrap();
        prop_assert_eq!(&a, &b);
        // qq* ≤ pp* means qq* = pp*·qq*.
        prop_assert_eq!(a == Some(qq.clone()), p.is_prefix_of(&q));
    }
}
