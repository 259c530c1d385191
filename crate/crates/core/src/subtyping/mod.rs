//! Coercive subtyping: derivations, coercion terms and coherence.

mod coercion;
mod coherence;
mod derivation;

pub use coercion::{coercion_term, coercive_apply, CoercionTerm};
pub use coherence::{check_coherence, CoercionClass, CoherenceReport, PairReport};
pub use derivation::{derive_subtype, Rule, SubtypeDerivation, SubtypeSearch};
