//! Bipolar-oriented random planar maps with heavy-tailed face degrees.
//!
//! The crate implements the move calculus behind the sewing bijection between
//! two-dimensional lattice walks and bipolar-oriented planar maps, together
//! with the surrounding machinery:
//!
//! * [`stepdist`] — admissible step distributions on the move alphabet
//!   `{m_e} ∪ {m_{i,j}}` derived from face-weight sequences, including the
//!   power-law family with tail exponent `alpha + 2`.
//! * [`sewing`] — the incremental sewing engine: build a marked bipolar map
//!   from a move word, decode a map back into its move word, contour paths and
//!   the NW/SE spanning trees.
//! * [`walks`] — unconditioned and conditioned lattice walks, exact
//!   enumeration, and exact window laws via dynamic programming.
//! * [`infinite`] — the bi-infinite (forward + reverse) construction of the
//!   local limit, absorption bookkeeping, and certified graph balls.
//! * [`canon`] — canonical codes for rooted multigraphs.
//! * [`levy`] — the limiting two-dimensional spectrally one-sided stable pair
//!   assembled from a truncated Poisson jump point process.
//! * [`stats`] — Hill tail-index estimation, Kolmogorov–Smirnov tests, total
//!   variation distance, and the scaling experiment harness.
//! * [`codec`] — text/JSON/CSV serializations shared with the CLI.

pub mod canon;
pub mod codec;
pub mod infinite;
pub mod levy;
pub mod moves;
pub mod rng;
pub mod sewing;
pub mod stats;
pub mod stepdist;
pub mod walks;

pub use canon::{canonical_code, code_hex, isomorphic_rooted, RootedGraph};
pub use infinite::{
    grow_until_certified, HalfPlaneComplex, InfiniteError, MoveWindow, RootedBall, VertexSide,
};
pub use codec::{
    csv_document, csv_real, map_json_decode, map_json_encode, moves_text_decode,
    moves_text_encode, CodecError,
};
pub use levy::{
    assemble_pair, default_delta, drift_m_alpha, expected_jump_count, integrate_adaptive,
    nu_rectangle_mass, sample_jump_ppp, truncation_variance_rate, Jump, LevyError, StablePairPath,
};
pub use moves::{LatticePath, Move};
pub use rng::Stream;
pub use sewing::{build_map, decode_map, validate_bipolar, MarkedBipolarMap, SewingError, Violation};
pub use stats::{
    empirical_tv, hill_tail_index, ks_two_sample, scaling_experiment, RescaledPath,
    ScalingReport, StatsError, TestResult,
};
pub use stepdist::{power_law_constants, Alpha, StepDistribution, WeightSequence};
pub use walks::{
    count_paths, enumerate_conditioned, exact_window_law, sample_conditioned,
    sample_conditioned_indexed, sample_unconditioned, WalkError, WalkSpec, WindowLaw,
};
