//! Frozen invariants of the built-in groups.
//!
//! Homology groups of the flat 3-manifolds are the standard ones; Betti
//! numbers are cross-checked against the wedge-basis projector.

use flatform::calabi::torus_action;
use flatform::catalog;
use flatform::crystal::Bieberbach;
use flatform::hcc::full_report;
use flatform::linalg::int_vec;
use flatform::topology::{betti, betti_oracle, center_rank, h1};

fn bg(name: &str) -> Bieberbach {
    Bieberbach::new(catalog::get(name).unwrap().group).unwrap()
}

#[test]
fn homology_of_flat_three_manifolds() {
    let table: [(&str, usize, &[i64]); 10] = [
        ("g1", 3, &[]),
        ("g2", 1, &[2, 2]),
        ("g3", 1, &[3]),
        ("g4", 1, &[2]),
        ("g5", 1, &[]),
        ("g6", 0, &[4, 4]),
        ("b1", 2, &[2]),
        ("b2", 2, &[]),
        ("b3", 1, &[2, 2]),
        ("b4", 1, &[4]),
    ];
    for (name, free, torsion) in table {
        let h = h1(&bg(name));
        assert_eq!(h.free_rank, free, "{name}");
        assert_eq!(h.torsion_divisors, int_vec(torsion), "{name}");
    }
}

#[test]
fn betti_of_flat_three_manifolds() {
    let table: [(&str, [u64; 4]); 10] = [
        ("g1", [1, 3, 3, 1]),
        ("g2", [1, 1, 1, 1]),
        ("g3", [1, 1, 1, 1]),
        ("g4", [1, 1, 1, 1]),
        ("g5", [1, 1, 1, 1]),
        ("g6", [1, 0, 0, 1]),
        ("b1", [1, 2, 1, 0]),
        ("b2", [1, 2, 1, 0]),
        ("b3", [1, 1, 0, 0]),
        ("b4", [1, 1, 0, 0]),
    ];
    for (name, expected) in table {
        let g = bg(name);
        assert_eq!(betti(&g).unwrap().values(), expected, "{name}");
        for (j, &b) in expected.iter().enumerate() {
            assert_eq!(betti_oracle(&g, j).unwrap(), b, "{name} degree {j}");
        }
        assert_eq!(g.is_orientable(), name.starts_with('g'), "{name}");
    }
}

#[test]
fn hantzsche_wendt_alias() {
    assert_eq!(catalog::get("g6").unwrap().group, catalog::get("hantzsche-wendt").unwrap().group);
    let g = bg("hantzsche-wendt");
    assert_eq!(h1(&g).free_rank, 0);
    assert_eq!(center_rank(&g), 0);
}

#[test]
fn every_entry_reports_pass() {
    for e in catalog::all() {
        let r = full_report(&e.name, &e.group);
        assert!(r.passed(), "{}: {:?}", e.name, r.errors);
    }
}

#[test]
fn bott_klein_bottle_matches_catalog_klein_bottle() {
    let a = bg("bott2-1");
    let b = bg("klein");
    assert_eq!(h1(&a), h1(&b));
    assert_eq!(betti(&a).unwrap(), betti(&b).unwrap());
}

#[test]
fn three_dimensional_bott_groups() {
    for (name, order) in [("bott3-110", 2), ("bott3-101", 4), ("bott3-000", 1)] {
        let g = bg(name);
        assert!(full_report(name, g.group()).passed(), "{name}");
        assert_eq!(g.holonomy().order(), order, "{name}");
    }
}

#[test]
fn g2_lambda_solution_kills_relators() {
    let g = bg("g2");
    let cert = torus_action(&g).unwrap();
    assert_eq!(cert.k, 1);
    for r in g.presentation().relators() {
        assert!(r.evaluate(&cert.rho.images).is_identity());
    }
}
