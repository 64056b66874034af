//! Exact computation of Severi degrees and node polynomials through
//! long-edge graphs, templates and (τ, n)-words.

pub mod algebra;
pub mod counting;
pub mod enumerate;
pub mod error;
pub mod graphs;
pub mod phi;
pub mod severi;
pub mod table;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
