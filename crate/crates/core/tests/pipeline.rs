// SPDX-License-Identifier: Apache-2.0

use ssg_core::algebra::{Field, IntegerMatrix};
use ssg_core::catalog;
use ssg_core::pipeline::{run, PipelineOptions};
use ssg_core::simplicity::CharacteristicSummary;

fn options() -> PipelineOptions {
    PipelineOptions {
        fields: vec![Field::Rational, Field::Prime(2), Field::Prime(3), Field::Prime(5)],
        ..PipelineOptions::default()
    }
}

fn sorted_rows(m: &IntegerMatrix) -> Vec<String> {
    let mut rows: Vec<String> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect();
    rows.sort();
    rows
}

#[test]
fn two_vertex_groupoid_is_simple_everywhere() {
    let out = run(&catalog::two_vertex_basilica_groupoid(), &options()).unwrap();
    assert!(out.cf.as_ref().unwrap().holds);
    let store = out.collapsed_store().unwrap();
    assert_eq!(store.graph().vertex_count(), 1);
    assert_eq!(out.nucleus().unwrap().len(), 7);
    let a = out.analysis().unwrap();
    assert_eq!(a.cycles.len(), 1);
    assert!(a.recurrent.iter().all(|h| h.is_trivial()));
    assert_eq!(a.delta.len(), 1);
    let v = out.verdict.as_ref().unwrap();
    assert_eq!(v.summary, CharacteristicSummary::SimpleInAll);
    assert!(v.per_field.iter().all(|&(_, s)| s));
    assert_eq!(out.cstar_simple(), Some(true));
}

#[test]
fn grigorchuk_pair_is_never_simple() {
    let out = run(&catalog::grigorchuk_pair_groupoid(), &options()).unwrap();
    let store = out.collapsed_store().unwrap();
    assert_eq!(out.nucleus().unwrap().len(), 10);
    let a = out.analysis().unwrap();
    let labels: Vec<String> = (0..a.delta.len()).map(|i| a.delta.vertex_label(store, i)).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(
        sorted,
        ["{id,b,c,d}_x", "{id,b,c,d}_y", "{id,b}_x", "{id,c}_x", "{id,c}_y", "{id,d}_x", "{id,d}_y", "{id}_x", "{id}_y"]
    );
    let unsync: Vec<&String> = (0..a.delta.len()).filter(|i| !a.synchronized.contains(i)).map(|i| &labels[i]).collect();
    assert_eq!(unsync, ["{id}_x", "{id}_y"]);
    let nontrivial: Vec<(String, String)> = a
        .recurrent
        .iter()
        .filter(|h| !h.is_trivial())
        .map(|h| (store.graph().display_path(&h.witness).to_string(), h.elements.iter().map(|&g| store.label(g)).collect::<Vec<_>>().join(",")))
        .collect();
    assert_eq!(
        nontrivial,
        [
            ("n".to_string(), "id_y,b_y".to_string()),
            ("nn".to_string(), "id_y,b_y,c_y,d_y".to_string()),
            ("jjj".to_string(), "id_x,b_x,c_x,d_x".to_string()),
        ]
    );
    let jjj = a.kernels.iter().find(|k| k.subgroup.elements.len() == 4 && store.graph().vertex_name(k.subgroup.base) == "x").unwrap();
    assert_eq!(sorted_rows(&jjj.matrix), ["0011", "0101", "0110", "1001", "1010", "1100", "1111"]);
    let v = out.verdict.as_ref().unwrap();
    assert_eq!(v.summary, CharacteristicSummary::NotSimpleInAny);
    assert_eq!(out.cstar_simple(), Some(false));
}

#[test]
fn grigorchuk_bouquet_fails_only_in_characteristic_two() {
    let out = run(&catalog::grigorchuk(), &options()).unwrap();
    let v = out.verdict.as_ref().unwrap();
    assert_eq!(v.summary, CharacteristicSummary::SimpleExceptPrimes(vec![2]));
}
