//! Signature-restricted module extraction for ALC ontologies.
//!
//! The pipeline clausifies an ontology, isolates the roles outside the
//! requested signature, forgets roles and concept names by saturation and
//! finally substitutes the introduced definers back.  Three results can be
//! assembled from it: general modules, deductive modules (subsets of the
//! input) and, when definers can be eliminated, uniform interpolants.
//! A small tableau reasoner is included as a test oracle.

pub mod cli;
pub mod error;
pub mod generate;
pub mod locality;
pub mod module_builder;
pub mod normalize;
pub mod oracle;
pub mod parser_io;
pub mod provenance;
pub mod report;
pub mod saturation;
pub mod store;
pub mod syntax;
pub mod forgetting;

mod budget;

pub use budget::Budget;
pub use error::Error;
