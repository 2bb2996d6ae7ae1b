// SPDX-License-Identifier: Apache-2.0

//! The JSON fixtures are generated from the core catalog. Set
//! `SSG_WRITE_FIXTURES=1` to regenerate them.

mod common;

use common::{catalog_fixtures, fixture_path, fixture_text, read_fixture};

#[test]
fn fixtures_match_catalog() {
    let write = std::env::var_os("SSG_WRITE_FIXTURES").is_some();
    for (name, p) in catalog_fixtures() {
        let path = fixture_path(name);
        let expected = fixture_text(&p);
        if write {
            std::fs::write(&path, &expected).unwrap();
        }
        let found = std::fs::read_to_string(&path).unwrap_or_default();
        assert_eq!(found, expected, "{name} is stale; rerun with SSG_WRITE_FIXTURES=1");
        assert_eq!(read_fixture(name).presentation(), p);
    }
}
