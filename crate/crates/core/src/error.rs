use thiserror::Error;

use crate::series::Exponent;

/// Failures raised by the analysis pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("the polynomial does not vanish at the origin")]
    NotVanishingAtOrigin,
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("empty input")]
    EmptyInput,
    #[error("the germ is not reduced (it has a repeated factor)")]
    NotReduced,
    #[error("the polynomial is not mini-regular in x")]
    NotMiniregular,
    #[error("no admissible shear was found")]
    NoValidShear,
    #[error("order cannot be decided below the horizon; a horizon of at least {needed} is required")]
    IndeterminateOrder { needed: Exponent },
    #[error("requested exponent {requested} exceeds the series horizon {horizon}")]
    HorizonExceeded { requested: Exponent, horizon: Exponent },
    #[error("numerical precision exhausted")]
    PrecisionExhausted,
    #[error("the arc is a multiple root; its valley degree is infinite")]
    MultipleRoot,
    #[error("inconsistent canyon: {0}")]
    InconsistentCanyon(String),
    #[error("partial Milnor number is not an integer: {0}")]
    NonIntegerMilnor(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
