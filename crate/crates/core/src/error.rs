use thiserror::Error;

/// Everything that can go wrong while loading data, training or scoring.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: constant `{constant}` used as `{found}` but already has type `{expected}`")]
    TypeConflict {
        line: usize,
        constant: String,
        expected: String,
        found: String,
    },

    #[error("predicate `{predicate}` takes {expected} arguments, got {found}")]
    Arity {
        predicate: String,
        expected: usize,
        found: usize,
    },

    #[error("argument {position} of `{predicate}` must have type `{expected}`, got `{found}`")]
    ArgumentType {
        predicate: String,
        position: usize,
        expected: String,
        found: String,
    },

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    #[error("unknown constant `{constant}` of type `{type_tag}`")]
    UnknownConstant { constant: String, type_tag: String },

    #[error("atom `{0}` is not ground")]
    NotGround(String),

    #[error("atom `{atom}` is not an instance of target `{target}`")]
    WrongTarget { atom: String, target: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("class `{class}` has {count} examples, fewer than {folds} folds")]
    TooFewExamples {
        class: &'static str,
        count: usize,
        folds: usize,
    },

    #[error("metric needs at least one {0} example")]
    EmptyClass(&'static str),

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("model document: {0}")]
    Format(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
