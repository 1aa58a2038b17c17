//! Online greedy algorithms for dominating, independent and connected
//! dominating sets on geometric intersection graphs, together with exact
//! offline oracles and generators for the matching adversarial instances.

pub mod adversary;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod harness;
pub mod offline;
pub mod online;

pub use adversary::{
    adaptive_mis_adversary, arrival_sequence, chain_blocks, cyclone_order, generate_block, generate_zeta_witness,
    verify_block, verify_kissing_configuration, verify_path, verify_path_of_cycles, BlockInstance, BlockKind, Family,
    KissingConfiguration, Params, SequenceVariant, Verdict,
};
pub use error::{Error, Result};
pub use geometry::{interiors_intersect, intersects, separation, translate, Point, Shape, Tolerance};
pub use graph::{
    build_intersection_graph, independent_kissing_number, is_cds, is_dominating_set, is_independent_set,
    max_independent_set_exact, IntersectionGraph, VertexSet,
};
pub use harness::{
    build_instance, run_experiment, run_suite, verify_instance, Algorithm, Construction, ExperimentSpec, Instance,
    RatioReport, SuiteOptions, SuiteReport, Variant,
};
pub use offline::{exact_mcds, exact_mds, exact_mis};
pub use online::{greedy_is, run_gcds, run_gds, ArrivalSequence, OnlineAlgorithm, OnlineState, StepRecord};
