//! Exact computations on metrized graphs: effective resistance, voltage
//! functions, the tau constant, the canonical measure and the invariant
//! `A_{p,q}`, together with the graph operations that transform tau.

pub mod check;
pub mod circuit;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod integration;
pub mod linalg;
pub mod ops;
pub mod optimizer;
pub mod rational;
pub mod scalar;
pub mod suite;
pub mod tau;

pub use circuit::{edge_profile, edge_profiles, resistance, voltage, EdgeProfile, ReductionNetwork, ResistanceMatrix};
pub use error::{Error, Result};
pub use graph::{build_graph, Edge, MetrizedGraph, PointOnGraph};
pub use integration::{apq_direct, integrate_product, tau_via_integral, EdgePolynomial, FnTag, Term};
pub use ops::{Factor, OpResult};
pub use scalar::{format_scalar, parse_scalar, ratio, int, ExtScalar, Scalar};
pub use tau::{apq_identity, canonical_measure, tau, tau_edge_sum, tau_gradient, CanonicalMeasure, GradientVector, TauReport};
