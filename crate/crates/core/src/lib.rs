//! Bipolar assumption-based argumentation over mined argument graphs.
//!
//! * [`framework`] and [`semantics`]: the formalism and its reference
//!   (brute-force) semantics.
//! * [`solver`]: SAT-backed search for the largest extensions.
//! * [`graph`] and [`pipeline`]: mined argument graphs, from documents to
//!   support/attack edges, including fact ingestion.
//! * [`verification`]: fact-check reports and refinement feedback.

pub mod fixtures;
pub mod framework;
pub mod graph;
pub mod pipeline;
pub mod semantics;
pub mod solver;
pub mod verification;

pub use framework::{from_graph, AssumptionSet, BipolarFramework, Extension, FrameworkError};
pub use graph::{ArgumentGraph, NodeKind, Relation};
pub use semantics::Semantics;
