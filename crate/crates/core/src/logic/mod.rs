//! Many-sorted higher-order formulas read off normal terms of type `t`,
//! with Hilbert operators kept as terms, their presuppositions, and the
//! tau/epsilon duality.

mod formula;
mod hilbert;
mod render;

pub use formula::{term_to_formula, Binding, Connective, Expr, Formula, HilbertOp, LogicError, Quantifier};
pub use hilbert::{presuppositions, tau_epsilon_rewrite, typing_facts, Direction, TypingFact};
pub use render::Notation;
