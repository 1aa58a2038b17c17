use zeta_core::adversary::arrival_layout;
use zeta_core::harness::random_unit_disks;
use zeta_core::{
    build_intersection_graph, chain_blocks, exact_mcds, generate_block, is_cds, run_gcds, Family, Params,
    SequenceVariant, Tolerance,
};

#[test]
fn benchmark_inputs_fit_the_exact_solvers() {
    let tol = Tolerance::default();
    let g = build_intersection_graph(&random_unit_disks(18, 3).unwrap(), tol).unwrap();
    assert_eq!(g.n(), 18);
    assert!(exact_mcds(&g).is_ok());

    let block = chain_blocks(&generate_block(Family::UnitDisk, &Params::default()).unwrap(), 2).unwrap();
    let seq = arrival_layout(&block, SequenceVariant::General).unwrap().sequence();
    let path = seq.graph(tol).unwrap();
    assert_eq!(exact_mcds(&path).unwrap().len(), 5);
    assert!(is_cds(&path, run_gcds(&seq, tol).unwrap().solution()));
}
