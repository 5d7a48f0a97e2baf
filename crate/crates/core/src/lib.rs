//! Finite-dimensional quantum-state analysis in the logos graph picture.
//!
//! The crate puts two taxonomies of bipartite states side by side:
//!
//! - the orthodox one: purity, product and convex-mixture constructions,
//!   Schmidt coefficients, the partial-transpose test and CHSH values;
//! - the power-graph one: rank-1 projectors joined by commutation, Born-rule
//!   potentia on every node (a PSA), effective valuations drawn per context,
//!   and the strong / weak / separable classification built from intensive
//!   and effective relations between the two reduced PSAs.
//!
//! All values are immutable and every randomized routine takes an explicit
//! seed.

pub mod bell;
pub mod diagnostics;
pub mod error;
pub mod fixtures;
pub mod haar;
pub mod io;
pub mod linalg;
pub mod powers;
pub mod relations;
pub mod state;
pub mod tolerance;

pub use num_complex::Complex64;

pub use bell::{
    chsh_value, classical_bound_check, optimal_chsh, simulate_epr_run, BoundCheck, BoundVerdict, ChshSetting,
    DichotomicObservable, OptimalChsh, RunStatistics,
};
pub use diagnostics::{ppt_check, schmidt, trace_distance, PptResult, PptVerdict, SchmidtDecomposition};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use powers::{
    build_power_graph, enumerate_maximal_contexts, find_global_binary_valuation, psa_from_state, reconstruct_state,
    sample_effective_valuation, BinaryValuation, Context, EffectiveValuation, KsOutcome, PowerGraph, Psa,
};
pub use relations::{
    classify_entanglement, compare_with_standard, correlated_partner_context, effective_related, intensive_related,
    intensive_related_finite, Classification, ComparisonReport, ContextFamily, RelationVerdict,
};
pub use state::{bell_state, born, convex_mix, density_from_ket, DensityOperator, Projector, PureState};
pub use tolerance::Tolerances;
