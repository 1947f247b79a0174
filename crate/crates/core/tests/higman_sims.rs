use num_bigint::BigUint;
use rankthree::aut::{automorphism_group, refine, Coloring};
use rankthree::coherent::spectrum::{krein_check, scheme_spectrum};
use rankthree::coherent::CoherentConfiguration;
use rankthree::hs::{higman_sims_graph, is_triangle_free, HS_PARAMS};
use rankthree::SrgParams;

#[test]
fn parameters_and_shape() {
    let g = higman_sims_graph();
    assert_eq!(g.n(), 100);
    assert_eq!(g.edge_count(), 1100);
    assert_eq!(g.check_srg(), Some(SrgParams::new(100, 22, 0, 6)));
    assert_eq!(HS_PARAMS, SrgParams::new(100, 22, 0, 6));
    assert!(is_triangle_free(&g));
    // λ = 0 makes every neighbourhood edgeless, so the condition holds vacuously on edges
    assert_eq!(g.four_vertex_condition().unwrap(), Some((0, 0)));
}

#[test]
fn individualized_refinement_splits_by_distance() {
    let g = higman_sims_graph();
    for v in [0, 1, 57] {
        let c = refine(&g, &Coloring::unit(100).individualize(v)).unwrap();
        let mut sizes = c.class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 22, 77], "vertex {v}");
    }
}

#[test]
fn automorphism_group_and_stabilizer() {
    let g = higman_sims_graph();
    let aut = automorphism_group(&g).unwrap();
    assert_eq!(aut.order(), BigUint::from(88_704_000u64));
    assert!(aut.is_transitive());
    let stab = aut.stabilizer(0);
    assert_eq!(stab.order(), BigUint::from(887_040u64));
    assert_eq!(aut.order() / stab.order(), BigUint::from(100u32));
    let orbitals = aut.orbitals().unwrap();
    assert_eq!(orbitals.rank, 3);
    let mut sub = orbitals.subdegrees.clone();
    sub.sort_unstable();
    assert_eq!(sub, vec![1, 22, 77]);
    assert!(aut.is_primitive().unwrap());

    let closure = CoherentConfiguration::wl2_closure(&g);
    let group_side = CoherentConfiguration::from_group_orbitals(&aut);
    assert!(closure.is_refined_by(&group_side));
    assert!(group_side.is_refined_by(&closure));
}

#[test]
fn closure_spectrum_and_krein() {
    let g = higman_sims_graph();
    let cc = CoherentConfiguration::wl2_closure(&g);
    assert_eq!(cc.rank(), 3);
    assert_eq!(cc.fibers().len(), 1);
    assert!(cc.is_commutative());
    let sp = scheme_spectrum(&cc).unwrap();
    let adjacency = sp.valencies.iter().position(|&v| v == 22).unwrap();
    let mut eig: Vec<(i64, u64)> = sp
        .eigenvalues(adjacency)
        .iter()
        .zip(&sp.multiplicities)
        .map(|(&e, &m)| (e.round() as i64, m))
        .collect();
    for (row, &(e, _)) in eig.iter().enumerate() {
        assert!((sp.eigenvalues(adjacency)[row] - e as f64).abs() < 1e-9);
    }
    eig.sort_unstable_by(|a, b| b.cmp(a));
    assert_eq!(eig, vec![(22, 1), (2, 77), (-8, 22)]);
    let k = krein_check(&sp, 1e-8);
    assert!(k.pass, "{k:?}");
    assert!(k.min >= -1e-8);
}
