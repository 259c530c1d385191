//! Montague-style semantics with a generative lexicon: a many-sorted second-order lambda calculus
//! with coercive subtyping, a word-anchored lexicon of optional coercion
//! terms, and meaning assembly from composition trees to many-sorted
//! higher-order logical forms.

pub mod assembly;
pub mod lexicon;
pub mod logic;
pub mod plurals;
pub mod reduction;
pub mod subtyping;
pub mod terms;
