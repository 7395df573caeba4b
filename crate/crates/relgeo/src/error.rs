use crate::group::Word;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed element: factor index {0} out of range")]
    MalformedElement(usize),

    #[error("alphabet mismatch: expected {expected} letters, got {got}")]
    AlphabetMismatch { expected: usize, got: usize },

    #[error("length query out of range: radius {radius} is insufficient")]
    OutOfRange { radius: u32 },

    #[error("capacity exceeded: largest completed radius {completed}")]
    Capacity { completed: u32 },

    #[error("state budget exceeded during determinization ({0} states)")]
    StateBudget(usize),

    #[error("enlargement with m = 0 would produce an empty alphabet")]
    EmptyAlphabet,

    #[error("degenerate fellow-traveler constant C = 0")]
    DegenerateConstant,

    #[error("language is not prefix-closed")]
    NotPrefixClosed,

    #[error("factor language for omega = {omega} violates (L1)")]
    L1Violation { omega: usize, witness: Option<Word> },

    #[error("word has a parabolic shortening; derived word undefined")]
    ParabolicShortening,

    #[error("identity-valued letter {0:?} rejected")]
    IdentityLetter(String),

    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),

    #[error("letter {symbol:?}: declared parabolic tag {omega} does not match its element")]
    BadParabolicTag { symbol: String, omega: usize },

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("soundness alert: bounded conjugacy search disagrees with the exact oracle")]
    SoundnessAlert,

    #[error("ball cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
