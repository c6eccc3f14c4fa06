use thiserror::Error;

/// Errors produced by state construction, gate application, and synthesis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("target state has zero norm")]
    ZeroNormTarget,

    #[error("qudit dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("instruction angle is not finite")]
    NonFiniteAngle,

    #[error("{kind} at level {level} is out of range for cutoff {max}")]
    LevelOutOfRange {
        kind: &'static str,
        level: usize,
        max: usize,
    },

    #[error("selectivity indices ({n_a:?}, {n_b:?}) exceed cutoffs ({max_a}, {max_b})")]
    SelectivityOutOfRange {
        n_a: Option<usize>,
        n_b: Option<usize>,
        max_a: usize,
        max_b: usize,
    },

    #[error(
        "swap on mode {mode} would drive amplitude {amp:.3e} at the truncation \
         boundary out of the space"
    )]
    TruncationLeak { mode: char, amp: f64 },

    #[error("coefficients are not confined to a single diagonal: found ({n_a}, {n_b})")]
    OffDiagonalCoefficient { n_a: usize, n_b: usize },

    #[error("reverse evolution failed to reach the ground state (|<0|psi>| = {overlap})")]
    ReverseEvolutionStalled { overlap: f64 },

    #[error("least-squares fit needs at least {needed} points, got {got}")]
    UnderDeterminedFit { needed: usize, got: usize },

    #[error("control rates must be strictly positive")]
    NonPositiveRates,
}

pub type Result<T> = std::result::Result<T, Error>;
