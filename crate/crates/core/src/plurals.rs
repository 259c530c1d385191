//! Operators for plurals: `q` turns an individual into a singleton property,
//! `star` is distributivity, `sharp` restricted distributivity from sets of
//! sets to their constituent subsets, `c` coverings, and `card` the
//! cardinality of a predicate.

use thiserror::Error;

use crate::terms::{names, parse_term, parse_type, Signature, SignatureError, Type};

pub const EXTENSION: &str = "plurals";
/// The sort of natural numbers.
pub const NAT: &str = "N";

pub const Q: &str = "q";
pub const STAR: &str = "star";
pub const SHARP: &str = "sharp";
pub const COVER: &str = "c";
pub const CARD: &str = "card";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PluralError {
    #[error("plural operators need `{0}` in the signature")]
    MissingPrerequisite(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

const OPERATORS: [(&str, &str, &str); 4] = [
    (Q, "Pi a. a -> a -> t", "Lam a. lam x:a. lam y:a. eq{a} x y"),
    (
        STAR,
        "Pi a. (a -> t) -> (a -> t) -> t",
        "Lam a. lam P:a -> t. lam Q:a -> t. forall{a} (lam x:a. implies (Q x) (P x))",
    ),
    (
        SHARP,
        "Pi a. ((a -> t) -> t) -> ((a -> t) -> t) -> t",
        "Lam a. lam R:(a -> t) -> t. lam S:(a -> t) -> t. \
         forall{a -> t} (lam P:a -> t. implies (S P) (R P))",
    ),
    (
        COVER,
        "Pi a. ((a -> t) -> t) -> (a -> t) -> t",
        "Lam a. lam R:(a -> t) -> t. lam P:a -> t. forall{a} (lam x:a. implies (P x) \
         (exists{a -> t} (lam Q:a -> t. and (Q x) \
         (and (forall{a} (lam y:a. implies (Q y) (P y))) (R Q)))))",
    ),
];

/// Declared type of `card`.
pub fn card_type() -> Type {
    Type::forall("a", Type::arrow(Type::pred(Type::var("a")), Type::sort(NAT)))
}

/// Adds `q`, `star`, `sharp`, `c` as defined constants and `card` as a
/// constant. Installing twice is a no-op.
pub fn install_plural_operators(sig: &mut Signature) -> Result<(), PluralError> {
    if sig.extensions().iter().any(|e| e == EXTENSION) {
        return Ok(());
    }
    if sig.constant_type(names::EQ).is_none() {
        return Err(PluralError::MissingPrerequisite(names::EQ.into()));
    }
    if !sig.has_sort(NAT) {
        return Err(PluralError::MissingPrerequisite(NAT.into()));
    }
    for (name, ty, body) in OPERATORS {
        let ty = parse_type(sig, ty).expect("operator type parses");
        let body = parse_term(sig, body).expect("operator body parses");
        sig.define(name, ty, body)?;
        sig.mark_builtin(name);
    }
    sig.add_constant(CARD, card_type())?;
    sig.mark_builtin(CARD);
    sig.record_extension(EXTENSION);
    Ok(())
}
