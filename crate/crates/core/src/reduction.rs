//! β and type-β reduction, normalisation, η-long forms and the head-form
//! decomposition of normal terms.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::terms::{fresh_name, Signature, SpineArg, Term, Type};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("normalisation exceeded the configured bound of {0} steps")]
    StepLimit(usize),
    #[error("term is not β-normal")]
    NotNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostOutermost,
    RightmostInnermost,
}

fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match &**f {
            Term::Lam(x, _, body) => Some(body.substitute(x, a)),
            _ => None,
        },
        Term::TyApp(f, ty) => match &**f {
            Term::TyLam(v, body) => Some(body.type_substitute(v, ty)),
            _ => None,
        },
        _ => None,
    }
}

/// One leftmost-outermost reduction step, or `None` on a normal term.
pub fn step(t: &Term) -> Option<Term> {
    step_with(Strategy::LeftmostOutermost, t)
}

pub fn step_with(strategy: Strategy, t: &Term) -> Option<Term> {
    match strategy {
        Strategy::LeftmostOutermost => step_lo(t),
        Strategy::RightmostInnermost => step_ri(t),
    }
}

fn step_lo(t: &Term) -> Option<Term> {
    if let Some(r) = contract(t) {
        return Some(r);
    }
    match t {
        Term::Var(..) | Term::Const(..) => None,
        Term::App(f, a) => step_lo(f)
            .map(|f2| Term::app(f2, (**a).clone()))
            .or_else(|| step_lo(a).map(|a2| Term::app((**f).clone(), a2))),
        Term::TyApp(f, ty) => step_lo(f).map(|f2| Term::ty_app(f2, ty.clone())),
        Term::Lam(x, ty, b) => step_lo(b).map(|b2| Term::lam(x.clone(), ty.clone(), b2)),
        Term::TyLam(v, b) => step_lo(b).map(|b2| Term::ty_lam(v.clone(), b2)),
    }
}

fn step_ri(t: &Term) -> Option<Term> {
    match t {
        Term::Var(..) | Term::Const(..) => None,
        Term::App(f, a) => step_ri(a)
            .map(|a2| Term::app((**f).clone(), a2))
            .or_else(|| step_ri(f).map(|f2| Term::app(f2, (**a).clone())))
            .or_else(|| contract(t)),
        Term::TyApp(f, ty) => step_ri(f).map(|f2| Term::ty_app(f2, ty.clone())).or_else(|| contract(t)),
        Term::Lam(x, ty, b) => step_ri(b).map(|b2| Term::lam(x.clone(), ty.clone(), b2)),
        Term::TyLam(v, b) => step_ri(b).map(|b2| Term::ty_lam(v.clone(), b2)),
    }
}

pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(..) | Term::Const(..) => true,
        Term::App(f, a) => !matches!(**f, Term::Lam(..)) && is_normal(f) && is_normal(a),
        Term::TyApp(f, _) => !matches!(**f, Term::TyLam(..)) && is_normal(f),
        Term::Lam(_, _, b) | Term::TyLam(_, b) => is_normal(b),
    }
}

/// Normalisation with a chosen strategy and an optional step bound.
#[derive(Debug, Clone, Copy, Default)]
pub struct Normalizer {
    pub strategy: Strategy,
    pub max_steps: Option<usize>,
}

impl Normalizer {
    pub fn new(strategy: Strategy) -> Self {
        Normalizer { strategy, max_steps: None }
    }

    pub fn with_limit(mut self, max_steps: usize) -> Self {
        self.max_steps = Some(max_steps);
        self
    }

    pub fn normalize(&self, t: &Term) -> Result<Term, ReductionError> {
        let mut cur = t.clone();
        let mut steps = 0usize;
        while let Some(next) = step_with(self.strategy, &cur) {
            steps += 1;
            if self.max_steps.is_some_and(|m| steps > m) {
                return Err(ReductionError::StepLimit(steps - 1));
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Every intermediate term, starting with the input and ending with the
    /// normal form.
    pub fn trace(&self, t: &Term) -> Result<Vec<Term>, ReductionError> {
        let mut out = vec![t.clone()];
        while let Some(next) = step_with(self.strategy, out.last().expect("non-empty")) {
            if self.max_steps.is_some_and(|m| out.len() > m) {
                return Err(ReductionError::StepLimit(out.len() - 1));
            }
            out.push(next);
        }
        Ok(out)
    }
}

/// Leftmost-outermost normal form. Terminates on every well-typed term.
pub fn normalize(t: &Term) -> Term {
    Normalizer::default().normalize(t).expect("no step bound configured")
}

/// Replaces defined constants by their bodies, transitively.
pub fn unfold_definitions(sig: &Signature, t: &Term) -> Term {
    match t {
        Term::Const(c, _) => match sig.definition(c) {
            Some(body) => unfold_definitions(sig, body),
            None => t.clone(),
        },
        Term::Var(..) => t.clone(),
        Term::App(f, a) => Term::app(unfold_definitions(sig, f), unfold_definitions(sig, a)),
        Term::TyApp(f, ty) => Term::ty_app(unfold_definitions(sig, f), ty.clone()),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), unfold_definitions(sig, b)),
        Term::TyLam(v, b) => Term::ty_lam(v.clone(), unfold_definitions(sig, b)),
    }
}

/// Normal form after unfolding every defined constant.
pub fn normalize_in(sig: &Signature, t: &Term) -> Term {
    normalize(&unfold_definitions(sig, t))
}

/// Type read off the annotations, without checking; `None` on an ill-formed
/// application.
pub(crate) fn annotated_type(t: &Term) -> Option<Type> {
    match t {
        Term::Var(_, ty) | Term::Const(_, ty) => Some(ty.clone()),
        Term::App(f, _) => match annotated_type(f)? {
            Type::Arrow(_, b) => Some(*b),
            _ => None,
        },
        Term::TyApp(f, w) => match annotated_type(f)? {
            Type::Forall(v, b) => Some(b.substitute(&v, w)),
            _ => None,
        },
        Term::Lam(_, ty, b) => Some(Type::arrow(ty.clone(), annotated_type(b)?)),
        Term::TyLam(v, b) => Some(Type::forall(v.clone(), annotated_type(b)?)),
    }
}

/// η-long form of a β-normal, well-typed term: every head is fully applied
/// and every arrow or universal position is abstracted.
pub fn eta_long(t: &Term) -> Term {
    let ty = annotated_type(t).expect("eta_long expects a well-typed term");
    let mut avoid = BTreeSet::new();
    t.all_names(&mut avoid);
    ty.all_names(&mut avoid);
    long(t, &ty, &mut avoid)
}

fn long(t: &Term, ty: &Type, avoid: &mut BTreeSet<String>) -> Term {
    match ty {
        Type::Arrow(dom, cod) => match t {
            Term::Lam(x, xty, b) => Term::lam(x.clone(), xty.clone(), long(b, cod, avoid)),
            _ => {
                let x = fresh_name("x", avoid);
                avoid.insert(x.clone());
                let applied = Term::app(t.clone(), Term::var(x.clone(), (**dom).clone()));
                Term::lam(x, (**dom).clone(), long(&applied, cod, avoid))
            }
        },
        Type::Forall(v, body) => match t {
            Term::TyLam(w, b) => {
                let body = body.substitute(v, &Type::var(w.clone()));
                Term::ty_lam(w.clone(), long(b, &body, avoid))
            }
            _ => {
                let w = fresh_name(v, avoid);
                avoid.insert(w.clone());
                let body = body.substitute(v, &Type::var(w.clone()));
                let applied = Term::ty_app(t.clone(), Type::var(w.clone()));
                Term::ty_lam(w, long(&applied, &body, avoid))
            }
        },
        Type::Sort(_) | Type::Var(_) => {
            let (head, args) = t.unspine();
            let mut cur = annotated_type(head).expect("typed head");
            let mut out = head.clone();
            for a in args {
                match a {
                    SpineArg::Type(w) => {
                        if let Type::Forall(v, b) = cur {
                            cur = b.substitute(&v, &w);
                        }
                        out = Term::ty_app(out, w);
                    }
                    SpineArg::Term(arg) => {
                        let Type::Arrow(d, c) = cur else { panic!("ill-typed spine") };
                        out = Term::app(out, long(&arg, &d, avoid));
                        cur = *c;
                    }
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Binder {
    Term(String, Type),
    Type(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NormalArg {
    Type(Type),
    Term(NormalForm),
}

/// Leading abstractions, a head variable or constant, and a spine of type
/// and term arguments that are themselves in this form.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub binders: Vec<Binder>,
    pub head: Term,
    pub args: Vec<NormalArg>,
}

impl NormalForm {
    pub fn reassemble(&self) -> Term {
        let spine = self.args.iter().map(|a| match a {
            NormalArg::Type(t) => SpineArg::Type(t.clone()),
            NormalArg::Term(n) => SpineArg::Term(n.reassemble()),
        });
        let body = Term::spine(self.head.clone(), spine);
        self.binders.iter().rev().fold(body, |acc, b| match b {
            Binder::Term(x, ty) => Term::lam(x.clone(), ty.clone(), acc),
            Binder::Type(v) => Term::ty_lam(v.clone(), acc),
        })
    }
}

pub fn head_decompose(t: &Term) -> Result<NormalForm, ReductionError> {
    let mut binders = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Lam(x, ty, b) => {
                binders.push(Binder::Term(x.clone(), ty.clone()));
                cur = b;
            }
            Term::TyLam(v, b) => {
                binders.push(Binder::Type(v.clone()));
                cur = b;
            }
            _ => break,
        }
    }
    let (head, spine) = cur.unspine();
    if !matches!(head, Term::Var(..) | Term::Const(..)) {
        return Err(ReductionError::NotNormal);
    }
    let args = spine
        .into_iter()
        .map(|a| match a {
            SpineArg::Type(t) => Ok(NormalArg::Type(t)),
            SpineArg::Term(t) => head_decompose(&t).map(NormalArg::Term),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NormalForm { binders, head: head.clone(), args })
}
