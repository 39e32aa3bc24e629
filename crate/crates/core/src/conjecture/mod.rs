//! The quartic `-x^4/12 - T x^3 + x^2 + 1 = 0`: derivation and verification
//! of its conjectured Frobenius relations, and approximation exponents.

pub mod derivation;
pub mod exponent;
pub mod normalize;
pub mod power;
pub mod verify;

pub use derivation::{derive_frobenius_relation, derive_frobenius_relation_with, DerivationTrace};
pub use exponent::{approximation_exponent, ClosedForm, ExponentReport, Rational};
pub use normalize::{alpha_to_beta, beta_to_alpha, normalize_to_beta, NormalizedRelation};
pub use power::{power_reduce, power_table, PowerBasisElement};
pub use verify::{
    conjecture2_shape, eight_over_27, verify_conjecture1, verify_conjecture2, verify_conjecture2_with_l, Conj1Verdict,
    Conj2Solution, Conj2Verdict, StageFailure, VerdictSummary,
};
