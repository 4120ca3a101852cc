use thiserror::Error;

/// Errors raised by the guesswork library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet must have at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("invalid type vector: {0}")]
    InvalidType(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("absolute-continuity violation: type puts mass {mass} on letter {letter} which has probability 0")]
    AbsoluteContinuity { letter: usize, mass: f64 },

    #[error("not a k-type: {0}")]
    NotAKType(String),

    #[error("type-space too large: {count} types exceeds the cap of {cap}")]
    TypeSpaceTooLarge { count: u128, cap: u128 },

    #[error("word-space too large: {count} words exceeds the cap of {cap}")]
    WordSpaceTooLarge { count: u128, cap: u128 },

    #[error("alpha out of domain: {0} (must be > -1)")]
    AlphaOutOfDomain(f64),

    #[error("renyi order must be positive and finite, got {0}")]
    InvalidRenyiOrder(f64),

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("epsilon too large for l_plus: h(p) - epsilon must be at least -log max p (epsilon <= {max})")]
    EpsilonTooLargeForLPlus { epsilon: f64, max: f64 },

    #[error(
        "epsilon inadmissible: {epsilon} is outside the admissible interval ({lower}, {upper})"
    )]
    EpsilonInadmissible {
        epsilon: f64,
        lower: f64,
        upper: f64,
    },

    #[error("empty typical set at word length {k}")]
    EmptyTypicalSet { k: usize },

    #[error("invalid word length {0}")]
    InvalidWordLength(usize),

    #[error("guess index {0} outside 1..=m^k")]
    InvalidGuessIndex(f64),
}

impl Error {
    /// Resource-guard refusals, as opposed to invalid input.
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::TypeSpaceTooLarge { .. } | Error::WordSpaceTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
