//! Spectrum-preserving graph contraction.
//!
//! Contracts a connected simple graph onto fewer vertices so that the
//! eigenvalues of the reduced graph's Laplacian or normalized Laplacian
//! interlace those of the original, and measures whether they do.

pub mod contraction;
pub mod error;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod reducers;
pub mod spectral;
pub mod tucker;

pub use contraction::{classify, contract, contract_edges, contraction_sequence, quotient, ContractionClass};
pub use error::{Error, Result};
pub use graph::{e, Edge, Graph, MultiGraph, SpanningTree};
pub use partition::{Chain, Partition};
pub use reducers::{cycle_invariant_reduce, node_removal_reduce, verify_reduction, ReductionOutcome, ReductionResult};
pub use spectral::{check_interlacing, eigenvalues, graph_matrix, InterlacingReport, MatrixKind, Spectrum, SymMatrix};
