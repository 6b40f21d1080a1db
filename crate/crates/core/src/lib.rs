//! Quotient quantum graphs from group actions and representations, with a
//! secular-equation eigenvalue solver to check isospectrality.

pub mod action;
pub mod d4;
pub mod error;
pub mod examples;
pub mod graph;
pub mod group;
pub mod io;
pub mod linalg;
pub mod quotient;
pub mod rep;
pub mod spectral;

pub use error::{Error, Result};
