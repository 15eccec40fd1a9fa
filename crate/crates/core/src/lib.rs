//! Exact search and verification engine for algebraically primitive
//! Teichmüller curves in the hyperelliptic component of ΩM₃(2,2).
//!
//! The pipeline runs bottom-up:
//!
//! * [`exactnum`] cyclotomic arithmetic, Galois action, certified signs, cubic subfields
//! * [`relations`] order bounds for vanishing sums of roots of unity and the two root searches
//! * [`search`] root tuples to circumferences, heights and saddle lengths
//! * [`twist`] twist-parameter elimination and the final classification
//! * [`flatmodel`] vertical cylinder decompositions and the regular 14-gon

pub mod exactnum;
pub mod flatmodel;
pub mod relations;
pub mod search;
pub mod twist;

mod error;
pub mod ser;

pub use error::{Error, Result};
