//! Spectral operator calculus on Gevrey spaces over the periodic grid.
//!
//! The crate discretizes, on a torus with FFT-exact convolutions, the
//! calculus of pseudo-differential operators with spatially Gevrey-regular
//! symbols: exponentially weighted Fourier norms, the sharp bracket
//! inequalities behind paraproduct estimates, symbol classes with
//! frequency-dependent Gevrey radius, h-parametrized quantizations, and the
//! conjugation of operators by `e^{tau D^sigma}`. Everything is pure and
//! immutable after construction, so sweeps parallelize freely.

// index loops mirror the lattice formulas, and `!(x > y)` validations
// reject NaN where `x <= y` would accept it
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod conjugate;
pub mod error;
pub mod gevrey;
pub mod grid;
pub mod inequalities;
pub mod jet;
pub mod quantize;
pub mod streams;
pub mod symbol;

pub use conjugate::{
    apply_weight, choose_k, classify_region, conjugated_multiply, conjugated_symbol,
    expansion_remainder, weight_w, ConjugationParams, ExpansionReport, RegionLabel, WeightParams,
    WeightW,
};
pub use error::{GevreyError, Result};
pub use gevrey::{
    embedding_constant, fourier_gevrey_norm, sobolev_norm, spatial_gevrey_seminorm,
    verify_embedding, GevreyParams, SeminormEstimate, SeminormMethod, SpatialField,
};
pub use grid::{
    bracket, forward_transform, inverse_transform, make_grid, FrequencyPoint, GridSpec,
    SampledFunction,
};
pub use inequalities::{
    check_poly_gevrey, check_tri1, check_tri2, compare_remark_constants, tri1_constant,
    tri2_constant, IneqReport, IneqSample,
};
pub use quantize::{
    estimate_action_norm, quantize_direct, quantize_fourier_h, quantize_fourier_h0,
    OperatorNormReport,
};
pub use symbol::{
    canonical_symbol, estimate_seminorm, gevrey_bump, load_symbol, save_symbol,
    validate_class_membership, GevreyBump, SampledSymbol, SeminormTable, SupportBox,
    SymbolClassParams,
};
