use thiserror::Error;

/// Errors raised while building or querying finite models.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("set '{set}' is empty")]
    EmptySet { set: String },

    #[error("set '{set}' contains duplicate element '{element}'")]
    DuplicateElement { set: String, element: String },

    #[error("element '{element}' of set '{set}' contains the reserved separator '{separator}'")]
    ReservedSeparator {
        set: String,
        element: String,
        separator: &'static str,
    },

    #[error("map '{map}' is not total: no entry for '{missing}'")]
    NonTotal { map: String, missing: String },

    #[error("map '{map}' sends '{key}' to '{value}', which is not in its codomain")]
    NotInCodomain {
        map: String,
        key: String,
        value: String,
    },

    #[error("map '{map}' has an entry for '{key}', which is not in its domain")]
    NotInDomain { map: String, key: String },

    #[error("set mismatch in {context}: expected '{expected}', found '{found}'")]
    SetMismatch {
        context: String,
        expected: String,
        found: String,
    },

    #[error("unknown action label '{0}'")]
    UnknownLabel(String),

    #[error("unknown variable '{0}'")]
    UnknownVariable(String),

    #[error("generator 'id' must be the identity map")]
    BadIdentity,

    #[error("{what} has {size} table entries, above the enumeration limit of {limit}")]
    TooLarge {
        what: String,
        size: u128,
        limit: usize,
    },

    #[error("determination does not hold for the base word: {0}")]
    BaseDeterminationFails(String),

    #[error("invalid mechanism record: {0}")]
    InvalidMechanism(String),

    #[error("structural equations are cyclic through '{0}'")]
    Cyclic(String),

    #[error("model does not match structural causal model: {0}")]
    ModelMismatch(String),

    #[error("invalid structural causal model: {0}")]
    InvalidScm(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid domino scenario: {0}")]
    InvalidScenario(String),

    #[error("action '{action}' leaves the enumerated family from state '{state}'")]
    LeavesFamily { action: String, state: String },

    #[error("{file}: at '{path}': {reason}")]
    Schema {
        file: String,
        path: String,
        reason: String,
    },

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
