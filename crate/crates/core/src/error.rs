use thiserror::Error;

pub type Result<T, E = GqsError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GqsError {
    #[error("a partition needs at least two knots, got {0}")]
    TooFewKnots(usize),

    #[error("{what}: expected length {expected}, got {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{what}[{index}] is not finite")]
    NonFinite { what: &'static str, index: usize },

    #[error("knots must be strictly increasing: x[{index}] - x[{prev}] = {gap:e} is too small", prev = .index - 1)]
    KnotsNotIncreasing { index: usize, gap: f64 },

    #[error("beta[{index}] = {value} is outside [-1, 0)")]
    BetaOutOfRange { index: usize, value: f64 },

    #[error("theta = {0} is outside (0, 1/4]")]
    ThetaOutOfRange(f64),

    #[error("{what} = {value} is out of range 0..={max}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("{what} = {requested} exceeds the cap of {max}")]
    LevelCap {
        what: &'static str,
        requested: u32,
        max: u32,
    },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("tolerance {tol:e} not reached within {levels} bisections (error bound {bound:e})")]
    ToleranceUnreachable { tol: f64, levels: u32, bound: f64 },

    #[error("x = {x} lies outside [{a}, {b}]")]
    OutsideDomain { x: f64, a: f64, b: f64 },

    #[error("relative coordinate t = {0} lies outside [0, 1]")]
    OutsideUnitInterval(f64),

    #[error("interval {interval}: {condition}")]
    ShapePrecondition { interval: usize, condition: String },

    #[error("tridiagonal system is not strictly diagonally dominant at row {row}")]
    NotDiagonallyDominant { row: usize },

    #[error("function value at x = {x} is not finite")]
    NonFiniteSample { x: f64 },
}
