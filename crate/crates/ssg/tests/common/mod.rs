// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use ssg::format::{self, Options, PresentationFile};
use ssg_core::catalog::{self, Presentation};
use ssg_core::lift::lift_two_letter_group;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(format!("{name}.json"))
}

/// Every fixture with the presentation it is generated from.
pub fn catalog_fixtures() -> Vec<(&'static str, Presentation)> {
    vec![
        ("two_vertex_basilica_groupoid", catalog::two_vertex_basilica_groupoid()),
        ("grigorchuk_pair_groupoid", catalog::grigorchuk_pair_groupoid()),
        ("grigorchuk_bouquet", catalog::grigorchuk()),
        ("basilica", catalog::basilica()),
        ("lifted_basilica", lift_two_letter_group(&catalog::basilica_ab()).unwrap().presentation),
        ("odometer_with_tail", catalog::odometer_with_tail()),
        ("disconnected_bouquets", catalog::disconnected_bouquets()),
        ("double_two_cycle", catalog::double_two_cycle()),
    ]
}

pub fn fixture_text(p: &Presentation) -> String {
    let mut s = PresentationFile::from_presentation(p, Options::default()).to_json();
    s.push('\n');
    s
}

pub fn read_fixture(name: &str) -> PresentationFile {
    format::parse(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn ssg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssg")).args(args).output().unwrap()
}
