//! Expansions of type `(p, l, k)` built from the pairs `(P_k, Q_k)`.

pub mod explore;
pub mod family;
pub mod index;
pub mod perfect;
pub mod props;
pub mod relation;

pub use explore::{expand_from_relation, match_a_multiple, perfect_prefix_len, type_sweep, TypeSample};
pub use family::{a_degree, a_sequence, p_power, PQConstants, PQFamily};
pub use index::{corollary2_index, valuation, IndexSequence};
pub use perfect::{corollary1_generate, theorem1_generate, GeneratedExpansion, PerfectExpansionSpec};
pub use props::{prop1_verify, prop2_predicted, prop2_verify, Prop1Report, Prop2Outcome, Prop2Report};
pub use relation::{cf_value_series, relation_residual, FrobeniusRelation};
