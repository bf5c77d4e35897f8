//! Byte-exact outputs checked into `tests/golden`. Set `RINGLAB_BLESS=1` to
//! rewrite them after an intended change.

use std::path::PathBuf;

use ringlab_core::dsl::parse_ring;
use ringlab_core::localized::lambda1_localized;
use ringlab_core::semidirect::{LocalizedSemidirect, WitnessBounds};
use ringlab_core::subring::{compress_classes, compressed_commuting_graph, Mode};
use ringlab_core::verify::direct_product_data;
use ringlab_core::Budget;

fn check(name: &str, got: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("RINGLAB_BLESS").is_some() {
        std::fs::write(&path, got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{name} differs from golden output");
}

fn graph(spec: &str, mode: Mode) -> ringlab_core::CompressedGraph {
    compressed_commuting_graph(&parse_ring(spec, &Budget::default()).unwrap(), mode).unwrap()
}

#[test]
fn z4_partition() {
    let r = parse_ring("z:4", &Budget::default()).unwrap();
    check("z4_classes.json", &compress_classes(&r, Mode::Nonunital).unwrap().to_json());
}

#[test]
fn gf64_unital_graph() {
    check("gf64_unital.json", &graph("gf:2:6", Mode::Unital).to_json());
}

#[test]
fn upper_triangular_graph() {
    let g = graph("tri:gf:2:1:2", Mode::Nonunital);
    check("t2.json", &g.to_json());
    check("t2.dot", &g.to_dot());
}

#[test]
fn localized_graph() {
    check("z_1_6.json", &lambda1_localized(6).unwrap().to_json());
}

#[test]
fn direct_product_semidirect() {
    let h = LocalizedSemidirect::new(direct_product_data(&Budget::default())).unwrap();
    check("directproduct.json", &h.lambda1(WitnessBounds::default()).graph.to_json());
}
