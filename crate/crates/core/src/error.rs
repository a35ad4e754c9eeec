use thiserror::Error;

use crate::pa::SessionState;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("no root of unity of order 2^{0} in the table (max 2^16)")]
    RootOrder(u32),
    #[error("transform size {0} must be a power of two in [2, 65536]")]
    PlanSize(usize),
    #[error("unsupported radix {0}; expected 2, 4 or 16")]
    Radix(u32),
    #[error("plan verification failed: {0}")]
    PlanVerification(&'static str),
    #[error("vector length {found} does not match plan size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("stage {stage} out of range for a plan with {stages} stages")]
    StageOutOfRange { stage: usize, stages: usize },
    #[error("operand of {limbs} limbs exceeds half of plan size {size}")]
    OperandTooLarge { limbs: usize, size: usize },
    #[error("2^{0} - 1 is not a catalogued Mersenne prime")]
    NotMersenneExponent(u64),
    #[error("security condition violated: r = {r} must be below gamma - s = {gamma} - {s}")]
    SecurityCondition { r: u64, gamma: u64, s: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("MH multiplier b must be odd")]
    EvenMultiplier,
    #[error("expected {expected} bytes of key material, found {found}")]
    InputLength { expected: usize, found: usize },
    #[error("key material exhausted while reloading block {block}: need {needed} more bits")]
    InsufficientMaterial { block: usize, needed: usize },
    #[error("block equal to 2^gamma - 1 must be screened out before hashing")]
    UnscreenedBlock,
    #[error("operation `{op}` not allowed in state {state:?}")]
    InvalidTransition { state: SessionState, op: &'static str },
    #[error("bit window requires beta < alpha (alpha = {alpha}, beta = {beta})")]
    Window { alpha: usize, beta: usize },
    #[error("malformed rate curve: {0}")]
    Curve(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
