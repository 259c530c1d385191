//! Syntax, well-formedness and type checking for types and terms of the
//! many-sorted second-order lambda calculus.

mod check;
mod parse;
mod signature;
mod term;
mod types;

pub use check::{check_type, check_type_wf, type_of, Env, TypeError};
pub use parse::{parse_term, parse_term_in, parse_type, ParseError};
pub use signature::{
    generic_element_type, names, poly_and_body, poly_and_type, quantifier_type, BaseCoercion, Signature,
    SignatureError, SortPredicate,
};
pub use term::{alpha_eq, canonical_key, SpineArg, Term};
pub use types::{fresh_name, type_eq, Type, PROP};
