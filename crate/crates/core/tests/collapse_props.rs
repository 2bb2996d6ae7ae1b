// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use proptest::prelude::*;
use ssg_core::catalog::{self, Presentation};
use ssg_core::collapse::{choose_collapse, collapse, verify_collapse};
use ssg_core::graph::{Graph, VertexId};
use ssg_core::lift::lift_two_letter_group;
use ssg_core::machine::MachineStore;
use ssg_core::structure::{is_type_cf, orbit_partition};

fn orbit_systems() -> Vec<Presentation> {
    vec![
        catalog::two_vertex_basilica_groupoid(),
        catalog::grigorchuk_pair_groupoid(),
        catalog::double_two_cycle(),
        catalog::disconnected_bouquets(),
        catalog::odometer_with_tail(),
        lift_two_letter_group(&catalog::basilica_ab()).unwrap().presentation,
        lift_two_letter_group(&catalog::grigorchuk()).unwrap().presentation,
    ]
}

#[test]
fn witnesses_evaluate_into_rep_and_label_bijectively() {
    for p in orbit_systems() {
        let mut store = load(&p);
        let orbits = orbit_partition(&store);
        let graph = store.graph().clone();
        for v in graph.vertices() {
            let f = orbits.witness_element(&mut store, v).unwrap();
            assert_eq!((store.dom(f), store.im(f)), (v, orbits.rep(v)));
        }
        let choice = choose_collapse(&mut store, &orbits).unwrap();
        for v in graph.vertices() {
            let mut labels: Vec<_> = graph.out_edges(v).iter().map(|&d| choice.label(&store, d)).collect();
            labels.sort();
            let mut rep_out = graph.out_edges(orbits.rep(v)).to_vec();
            rep_out.sort();
            assert_eq!(labels, rep_out);
        }
    }
}

#[test]
fn condition_two_orientations_are_independent() {
    for p in orbit_systems() {
        let store = load(&p);
        let graph = store.graph().clone();
        let orbits = orbit_partition(&store);
        let verdict = is_type_cf(&graph, &orbits).unwrap();
        for v in graph.vertices() {
            for w in graph.vertices() {
                if v == w {
                    continue;
                }
                let reach = graph.reachable_from(w);
                let ok = orbits.class_of(v).iter().any(|u| reach.contains(u));
                assert_eq!(verdict.condition2_failures.contains(&(v, w)), !ok);
            }
        }
    }
}

#[test]
fn cf_transfers_to_the_collapse() {
    for p in orbit_systems() {
        let mut store = load(&p);
        let graph = store.graph().clone();
        let orbits = orbit_partition(&store);
        if !is_type_cf(&graph, &orbits).unwrap().holds {
            continue;
        }
        let choice = choose_collapse(&mut store, &orbits).unwrap();
        let c = collapse(&store, &choice).unwrap();
        assert!(c.graph.is_strongly_connected());
        let o2 = orbit_partition(&c.store);
        assert!(is_type_cf(&c.graph, &o2).unwrap().holds);
        assert!(verify_collapse(&store, &choice, &c, 5).passed());
        // Collapsing again changes nothing.
        let mut s2 = c.store.clone();
        let ch2 = choose_collapse(&mut s2, &o2).unwrap();
        let c2 = collapse(&s2, &ch2).unwrap();
        assert_eq!(c2.raw_graph, c.raw_graph);
        for (name, g) in c.store.generators() {
            let g2 = c2.generators[&name];
            for p in c.graph.paths_from(c.store.dom(g), 6).unwrap() {
                let a = c.store.act_path(g, &p).map(|x| x.0);
                let b = c2.store.act_path(g2, &p).map(|x| x.0);
                assert_eq!(a, b, "{name}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Restriction compatibility: the collapsed restriction of a transported
    /// element at a Λ-edge is the transport of the original restriction at
    /// the lifted edge.
    #[test]
    fn restriction_compatibility(sys in 0usize..7, start in 0usize..4, w in proptest::collection::vec(0usize..32, 0..=4)) {
        let mut store = load(&orbit_systems()[sys]);
        let orbits = orbit_partition(&store);
        let choice = choose_collapse(&mut store, &orbits).unwrap();
        let mut c = collapse(&store, &choice).unwrap();
        let (v, t) = word_from_choices(&store, start, &w);
        let g = store.evaluate(&t, v).unwrap().unwrap();
        let tg = ssg_core::collapse::transport(&store, &choice, &mut c, g).unwrap();
        for (d, _, r) in store.transitions(g) {
            let x = choice.label(&store, d);
            let lx = c.edge_of(x).unwrap();
            let (_, restricted) = c.store.act_edge(tg, lx).unwrap();
            let tr = ssg_core::collapse::transport(&store, &choice, &mut c, r).unwrap();
            prop_assert!(c.store.equals(restricted, tr));
        }
    }
}

#[test]
fn lifted_group_collapses_to_itself_at_depth_eight() {
    for (h, name) in [(catalog::basilica_ab(), "basilica"), (catalog::grigorchuk(), "grigorchuk")] {
        let lift = lift_two_letter_group(&h).unwrap();
        let graph = Graph::new(&lift.presentation.graph).unwrap();
        let (mut store, _) = MachineStore::load_generators(&graph, &lift.presentation.generators).unwrap();
        let orbits = orbit_partition(&store);
        let choice = choose_collapse(&mut store, &orbits).unwrap();
        let c = collapse(&store, &choice).unwrap();
        assert!(verify_collapse(&store, &choice, &c, 8).passed(), "{name}");
        let hstore = load(&h);
        let hv = VertexId(0);
        let lv = c.vertex_of(VertexId(0)).unwrap();
        // Λ-edges e, f carry the letters of the first and second loop.
        for (hname, hg) in hstore.generators() {
            let lg = c.generators[&format!("{hname}[x,x]")];
            for hp in hstore.graph().paths_from(hv, 8).unwrap() {
                let letters: Vec<usize> = hp.edges().iter().map(|e| e.index()).collect();
                let lp = ssg_core::graph::Path::from_edges(
                    &c.graph,
                    &letters.iter().map(|&i| c.graph.out_edges(lv)[i]).collect::<Vec<_>>(),
                )
                .unwrap();
                let himg: Vec<usize> = hstore.act_path(hg, &hp).unwrap().0.edges().iter().map(|e| e.index()).collect();
                let limg: Vec<usize> = c.store.act_path(lg, &lp).unwrap().0.edges().iter().map(|&e| c.graph.out_position(e)).collect();
                assert_eq!(himg, limg, "{name} {hname}");
            }
        }
    }
}
