//! Commutation graphs of rank-1 projectors with intensive valuations.
//!
//! A finite-dimensional Hilbert space induces a graph whose nodes are rank-1
//! projectors and whose edges join commuting pairs. Complete subgraphs are
//! contexts; a full context is an orthonormal basis. A density matrix assigns
//! each node its Born value, giving a valuation that is consistent across all
//! contexts at once, even on graphs where no {0, 1} assignment can be.
//!
//! ```
//! use logos_qm::fixtures::spin;
//! use logos_qm::hilbert::DensityMatrix;
//! use logos_qm::powergraph::{context_from_basis, PowerGraph, DEFAULT_TOL};
//! use logos_qm::psa::evaluate_psa;
//!
//! let g = PowerGraph::empty(2, DEFAULT_TOL);
//! let (g, _x) = context_from_basis(&g, &spin::x_basis()).unwrap();
//! let (g, _y) = context_from_basis(&g, &spin::y_basis()).unwrap();
//! let psa = evaluate_psa(&DensityMatrix::from_pure(&spin::up_x()), &g).unwrap();
//! assert!((psa.value(0).unwrap() - 1.0).abs() < 1e-12);
//! assert!((psa.value(2).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod dot;
pub mod error;
pub mod fixtures;
pub mod hilbert;
pub mod json;
pub mod ksvaluation;
pub mod opposition;
pub mod powergraph;
pub mod psa;
pub mod report;
pub mod sampler;
pub mod tomography;

pub use error::{Error, Result};
