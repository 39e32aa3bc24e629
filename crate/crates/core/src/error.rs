use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime below 2^16")]
    InvalidModulus(u64),
    #[error("rational {num}/{den} not embeddable in F_{p}")]
    RationalNotEmbeddable { num: i64, den: i64, p: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("gcd undefined: both operands are zero")]
    GcdUndefined,
    #[error("non-integrable monomial T^{degree}")]
    NonIntegrable { degree: usize },
    #[error("degenerate scaling by zero")]
    DegenerateScaling,
    #[error("coefficient of T^{degree} does not lie in the base field")]
    NotInBaseField { degree: usize },
    #[error("not a rational function: zero denominator")]
    NotRational,
    #[error("scalar continued fraction undefined at entry {index}")]
    ScalarCfUndefined { index: usize },
    #[error("continued fraction has no partial quotients")]
    EmptyExpansion,
    #[error("zero series")]
    ZeroSeries,
    #[error("series precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("polynomial violates condition (*): {0}")]
    StarViolated(String),
    #[error("leading coefficient in X is zero")]
    ZeroLeadingCoefficient,
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("delta undefined at n = {n}")]
    DeltaUndefined { n: usize },
    #[error("not a perfect-expansion spec: delta_l = {found}, expected 2k*e1/e2 = {expected}")]
    DeltaMismatch { found: u32, expected: u32 },
    #[error("generated {what} vanishes at n = {n}")]
    VanishingScalar { what: &'static str, n: usize },
    #[error("excluded by hypothesis: {0}")]
    ExcludedByHypothesis(String),
    #[error("insufficient expansion: {0}")]
    InsufficientExpansion(String),
    #[error("wrong residue class: p = {p} must be {expected}")]
    WrongResidueClass { p: u32, expected: &'static str },
    #[error("derivation inapplicable: {0}")]
    DerivationInapplicable(String),
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
