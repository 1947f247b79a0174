//! Replays the checked-in fuzz corpus through the same round-trip checks the
//! fuzz targets make, so the seeds stay meaningful on stable toolchains.

use std::fs;
use std::path::PathBuf;

use rankthree::coherent::{scheme_spectrum, CoherentConfiguration};
use rankthree::design::{verify_steiner, SteinerSystem};
use rankthree::{Graph, PermGroup};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn graph_seeds() {
    let mut accepted = 0;
    for (name, text) in seeds("parse_graph") {
        if let Ok(g) = Graph::parse(&text) {
            assert_eq!(Graph::parse(&g.to_text()).unwrap(), g, "{name}");
            accepted += 1;
        }
    }
    assert!(Graph::parse("4 3\n0 1\n1 2\n").is_err());
    assert_eq!(accepted, 4);
}

#[test]
fn steiner_seeds() {
    for (name, text) in seeds("parse_steiner") {
        match SteinerSystem::parse(&text) {
            Ok(d) => {
                assert_eq!(SteinerSystem::parse(&d.to_text()).unwrap(), d);
                assert!(verify_steiner(&d).passed(), "{name}");
            }
            Err(_) => assert_eq!(name, "truncated"),
        }
    }
}

#[test]
fn coherent_seeds() {
    for (name, text) in seeds("parse_coherent") {
        let cc = CoherentConfiguration::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(CoherentConfiguration::parse(&cc.to_text()).unwrap(), cc);
        let _ = scheme_spectrum(&cc);
    }
}

#[test]
fn generator_seeds() {
    for (name, text) in seeds("parse_generators") {
        let g = PermGroup::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let back = PermGroup::parse(&g.to_text()).unwrap();
        assert_eq!(back.generators(), g.generators(), "{name}");
        assert!(g.is_transitive(), "{name}");
        g.orbitals().unwrap();
    }
}
