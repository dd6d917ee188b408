//! Exact simulation, density evaluation and symmetry algebra for two-speed
//! bullet models: random systems of vertical lines moving up and horizontal
//! lines moving right, with creations, turns, coalescences and annihilations.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`], [`model`], [`skeleton`], [`symmetry`]: immutable diagram types,
//!   point classification, skeletons and the dihedral group action.
//! * [`rng`], [`sampler`]: seeded Poisson samplers and the x-sweep simulator.
//! * [`density`]: closed-form log-density of a diagram under Poisson entries.
//! * [`reversibility`]: invariants, reverse parameters and condition checkers.
//! * [`stats`], [`verify`]: statistical tests and verification suites.

pub mod density;
pub mod error;
pub mod model;
pub mod params;
pub mod reversibility;
pub mod rng;
pub mod sampler;
pub mod skeleton;
pub mod stats;
pub mod symmetry;
pub mod verify;

pub use density::{log_density, segment_lengths, LogDensity};
pub use error::{Error, Result};
pub use model::{
    classify_points, extract_stats, restrict, validate_configuration, ConfigStats, Configuration, Orientation, Point,
    PointKind, Rectangle, Segment, Violation,
};
pub use params::{Intensities, Parameter};
pub use rng::RngStream;
pub use sampler::{build_diagram, InitialLaw, DEFAULT_MAX_EVENTS};
pub use skeleton::{config_distance, skeleton_of, Skeleton};
pub use symmetry::{apply_symmetry, stats_map_under_symmetry, KindPermutation, SymmetryElement};
pub use verify::{ReportKind, VerificationReport};
