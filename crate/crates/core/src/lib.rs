//! Cover filtrations built from a single cover.
//!
//! Each element of a cover becomes a vertex, and each set of elements with a
//! common member becomes a simplex born at the generalized Steinhaus distance
//! `1 - μ(⋂)/μ(⋃)` of those elements. On top of that filtration the crate
//! provides:
//!
//! - [`nerve`]: exact Steinhaus nerves and clique-rank filtrations,
//! - [`metrics`]: bottleneck distance between covers and an interleaving check,
//! - [`paths`]: ρ-stable paths, maximally stable paths and the
//!   hops/instability Pareto frontier,
//! - [`geometry`]: ball covers in `R^n`, closed-form and Monte Carlo Steinhaus
//!   distances, and a Rips vs. Steinhaus persistence comparison,
//! - [`persistence`]: H0/H1 persistence diagrams and their bottleneck distance,
//! - [`ingest`]: ratings data to covers, plus a synthetic planted-bridge dataset.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod cover;
pub mod cover_io;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod ingest;
pub mod matching;
pub mod metrics;
pub mod nerve;
pub mod paths;
pub mod persistence;
mod union_find;

pub use cover::{
    generalized_steinhaus, steinhaus_distance, Cover, Fraction, Interner, Measure, MeasuredSet,
    MemberId,
};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use nerve::{
    build_clique_rank_filtration, build_steinhaus_nerve, one_skeleton, FilteredComplex,
    NerveOptions, Simplex,
};
