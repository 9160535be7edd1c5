use thiserror::Error;

use crate::parser_io::ParseError;
use crate::syntax::Name;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("conflict computation ran out of time for roles {}", names(.uncovered))]
    BudgetExceeded { uncovered: Vec<Name> },
    #[error("clause store is not role isolated for the signature")]
    NotRoleIsolated,
    #[error("tableau exceeded {limit} nodes")]
    ResourceExceeded { limit: usize },
    #[error("requested {requested} names but the ontology has only {available}")]
    SignatureTooLarge { requested: usize, available: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn names(ns: &[Name]) -> String {
    ns.iter().map(Name::text).collect::<Vec<_>>().join(", ")
}
