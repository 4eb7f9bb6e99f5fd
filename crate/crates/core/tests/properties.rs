//! Cross-module invariants on random members.

mod common;

use common::{random_member, rng, uniform_angles};
use hypertet::builder::Tetrahedron;
use hypertet::{
    build, classify, edge_lengths, gram_from_angles, measure, milnor_check, normals_from_gram,
    slice, DihedralAngles, Kind, SliceSpec, DEFAULT_TOL,
};
use proptest::prelude::*;

fn permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_ignores_face_labels(seed in any::<u64>()) {
        let a = uniform_angles(&mut rng(seed), 0.05);
        let kind = classify(&a, DEFAULT_TOL).kind;
        for p in permutations() {
            prop_assert_eq!(classify(&a.relabeled(p), DEFAULT_TOL).kind, kind);
        }
    }

    #[test]
    fn gram_and_geometric_routes_agree(seed in any::<u64>()) {
        let a = random_member(&mut rng(seed));
        let built = build(&a).unwrap();
        let normals = normals_from_gram(&gram_from_angles(&a), DEFAULT_TOL).unwrap();
        let factored = Tetrahedron::from_normals(normals).unwrap();
        let (m1, m2) = (measure(&built), measure(&factored));
        prop_assert!(m1.dihedrals.max_abs_diff(&a) < 1e-9);
        prop_assert!(m2.dihedrals.max_abs_diff(&a) < 1e-9);
        // Congruent tetrahedra: same edge lengths, and those match the trig route.
        let lens = edge_lengths(&a).unwrap().lengths;
        for ((x, y), z) in m1.edges.iter().zip(&m2.edges).zip(&lens) {
            prop_assert!((x - y).abs() < 1e-8);
            prop_assert!((x - z).abs() < 1e-8);
        }
    }

    #[test]
    fn members_pass_milnor(seed in any::<u64>()) {
        let a = random_member(&mut rng(seed));
        prop_assert!(milnor_check(&gram_from_angles(&a), 0.0).valid);
    }

    #[test]
    fn relabeled_member_builds_congruent(seed in any::<u64>(), k in 0usize..24) {
        let a = random_member(&mut rng(seed));
        let p = permutations()[k];
        let b = a.relabeled(p);
        let (ea, eb) = (measure(&build(&a).unwrap()).edges, measure(&build(&b).unwrap()).edges);
        let rel = DihedralAngles::new(ea).relabeled(p);
        prop_assert!(rel.max_abs_diff(&DihedralAngles::new(eb)) < 1e-8);
    }

    #[test]
    fn shrinking_all_angles_reaches_exterior(seed in any::<u64>()) {
        let a = random_member(&mut rng(seed));
        // Below one third of π/2 every vertex sum is under π.
        prop_assert_eq!(classify(&a.scaled(0.3), DEFAULT_TOL).kind, Kind::Exterior);
    }
}

#[test]
fn there_are_24_relabelings() {
    assert_eq!(permutations().len(), 24);
}

#[test]
fn swapping_free_edges_transposes_the_slice() {
    let spec = SliceSpec::two_free_at_vertex(1.3, 25);
    let (g, t) = (slice(&spec).unwrap(), slice(&spec.swapped()).unwrap());
    for i in 0..25 {
        for j in 0..25 {
            assert_eq!(g.get(i, j).kind, t.get(j, i).kind);
        }
    }
    assert!(g.count(Kind::Interior) > 0 && g.count(Kind::Exterior) > 0);
}
