//! Combinatorics of ordered variable words: combinatorial spaces and OVW
//! trees, the largeness calculus over a ternary predicate, monochromatic
//! substructure searches, and independently checkable certificates.

pub use num_bigint::BigUint;

pub mod cert;
pub mod large_ramsey;
pub mod largeness;
pub mod ramsey;
pub mod spaces;
pub mod words;

pub use cert::{
    canonical_json, cert_apartness, cert_cs_subtree, cert_gr_subspace, cert_hj_line,
    cert_large_homog_space, cert_large_homog_tree, cert_largeness, cert_sparse_subset,
    cert_split_largeness, fnv1a64, verify_certificate, CertError, Certificate, CertificateKind,
    CheckResult, RunConfig, SplitMix64, VerifyReport, CERTIFICATE_VERSION,
};
pub use large_ramsey::{
    canonical_space, canonical_tree, certify_not_gr_large, find_large_homog_ovw_subtree,
    find_large_homog_subspace, ovw_exponent, BlockTrace, BoundParams, GrRefutation,
    LargeHomogSpace, LargeHomogTree, OvwMode, PipelineError, PipelineOptions,
};
pub use largeness::{
    apart_extremes, generate_large, is_large, is_large_bruteforce, is_sparse, sparse_subset,
    split_large, theta_apart, theta_apart_naive, verify_witness, BruteForceOracle, FinSet,
    GrowthCaps, LargenessError, LargenessOutcome, LargenessWitness, OrdinalExpr, ThetaKind,
    ThetaPredicate, ThetaTable,
};
pub use ramsey::{
    find_cs_subtree, find_gr_subspace, find_hj_line, homogeneous_space_color,
    homogeneous_subspaces_color, homogeneous_tree_color, product_coloring, verify_hj_instance,
    Coloring, ColoringBody, CsStrategy, HjMode, HjVerdict, HomogeneousSpace, HomogeneousTree,
    RamseyError, SubstructureColoring, DEFAULT_COLORING_BUDGET,
};
pub use spaces::{CombinatorialSpace, OVWTree, SpaceError, StructureRepr, DEFAULT_POINT_BUDGET};
pub use words::{Alphabet, Token, VariableWord, Word, WordError};
