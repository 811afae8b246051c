//! Tight-subframe structure of scaled frames.

mod affine;
mod orthogonal;
mod poset;

pub use affine::{
    affine_dependence_flag, affine_dependence_report, affine_hull_member, is_face_subset,
    relative_interiors_intersect, strict_scaling_report, AffineDependenceReport, RelintResult,
    RelintWitness, StrictScalingReport, WitnessSearch, WITNESS_CAP,
};
pub use orthogonal::{
    all_orthogonal_decompositions, is_prime_scaling, orthogonal_decompose_scaling,
    smallest_orthogonal_partition, DecompositionBlock, OrthogonalDecomposition,
    OrthogonalPartition, EXHAUSTIVE_CAP,
};
pub use poset::{
    ec_pairwise_disjoint, empty_cover, factor_poset, reconstruct_poset, EmptyCover, FactorPoset,
    POSET_CAP,
};
