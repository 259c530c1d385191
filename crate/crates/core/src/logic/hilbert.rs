use std::collections::BTreeSet;

use serde::Serialize;

use crate::reduction::normalize;
use crate::terms::{canonical_key, fresh_name, generic_element_type, names, Signature, SpineArg, Term, Type};

/// Hilbert subterms `op{A} P` whose free variables are all free in `term`,
/// outermost first.
fn closed_hilbert_subterms(term: &Term, ops: &[&str]) -> Vec<(String, Type, Term, Term)> {
    let mut out = Vec::new();
    walk(term, ops, &mut Vec::new(), &mut out);
    out
}

fn walk(t: &Term, ops: &[&str], bound: &mut Vec<String>, out: &mut Vec<(String, Type, Term, Term)>) {
    let (head, args) = t.unspine();
    if let (Term::Const(c, _), [SpineArg::Type(a), SpineArg::Term(p), ..]) = (head, args.as_slice()) {
        if ops.contains(&c.as_str()) {
            let op = Term::ty_app(Term::constant(c.clone(), generic_element_type()), a.clone());
            let sub = Term::app(op, p.clone());
            if sub.free_vars().iter().all(|(x, _)| !bound.contains(x)) {
                out.push((c.clone(), a.clone(), p.clone(), sub));
            }
        }
    }
    match t {
        Term::App(f, a) => {
            walk(f, ops, bound, out);
            walk(a, ops, bound, out);
        }
        Term::Lam(x, _, b) => {
            bound.push(x.clone());
            walk(b, ops, bound, out);
            bound.pop();
        }
        Term::TyApp(f, _) | Term::TyLam(_, f) => walk(f, ops, bound, out),
        _ => {}
    }
}

/// For every subterm `iota{A} P`, `epsilon{A} P` or `eta{A} P` the
/// proposition `P (op{A} P)`, beta-normalized, without duplicates.
/// Subterms that mention locally bound variables are skipped.
pub fn presuppositions(term: &Term) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    closed_hilbert_subterms(term, &[names::IOTA, names::EPSILON, names::ETA])
        .into_iter()
        .map(|(_, _, p, sub)| normalize(&Term::app(p, sub)))
        .filter(|t| seen.insert(canonical_key(t)))
        .collect()
}

/// A type judgement `term : sort` about a generic element whose restriction
/// is the predicate of a sort.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypingFact {
    pub term: String,
    pub sort: String,
}

pub fn typing_facts(sig: &Signature, term: &Term) -> Vec<TypingFact> {
    let mut out: Vec<TypingFact> = Vec::new();
    for (_, _, p, sub) in closed_hilbert_subterms(term, &[names::IOTA, names::EPSILON, names::ETA]) {
        if let Term::Const(pred, _) = &p {
            if let Some(sort) = sig.sort_of_predicate(pred) {
                let fact = TypingFact { term: sub.to_string(), sort: sort.to_string() };
                if !out.contains(&fact) {
                    out.push(fact);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `tau{A} P` becomes `epsilon{A} (lam x:A. not (P x))`.
    TauToEpsilon,
    /// `epsilon{A} P` becomes `tau{A} (lam x:A. not (P x))`.
    EpsilonToTau,
}

/// Rewrites with the duality `tau x. P(x) = epsilon x. not P(x)` (or its
/// converse) everywhere in `term`.
pub fn tau_epsilon_rewrite(term: &Term, dir: Direction) -> Term {
    let (from, to) = match dir {
        Direction::TauToEpsilon => (names::TAU, names::EPSILON),
        Direction::EpsilonToTau => (names::EPSILON, names::TAU),
    };
    rewrite(term, from, to)
}

fn negated(p: &Term, a: &Type) -> Term {
    let not = Term::constant(names::NOT, Type::arrow(Type::prop(), Type::prop()));
    match p {
        Term::Lam(x, ty, body) => Term::lam(x.clone(), ty.clone(), Term::app(not, (**body).clone())),
        _ => {
            let mut avoid = BTreeSet::new();
            p.all_names(&mut avoid);
            let x = fresh_name("x", &avoid);
            let body = Term::app(not, Term::app(p.clone(), Term::var(x.clone(), a.clone())));
            Term::lam(x, a.clone(), body)
        }
    }
}

fn rewrite(t: &Term, from: &str, to: &str) -> Term {
    if let Term::App(f, p) = t {
        if let Term::TyApp(h, a) = &**f {
            if let Term::Const(c, ty) = &**h {
                if c == from {
                    let p = rewrite(p, from, to);
                    let op = Term::ty_app(Term::constant(to, ty.clone()), a.clone());
                    return Term::app(op, negated(&p, a));
                }
            }
        }
    }
    match t {
        Term::App(f, a) => Term::app(rewrite(f, from, to), rewrite(a, from, to)),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), rewrite(b, from, to)),
        Term::TyApp(f, ty) => Term::ty_app(rewrite(f, from, to), ty.clone()),
        Term::TyLam(a, b) => Term::ty_lam(a.clone(), rewrite(b, from, to)),
        _ => t.clone(),
    }
}
