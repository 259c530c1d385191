use std::collections::BTreeSet;

use crate::reduction::normalize;
use crate::terms::{fresh_name, type_eq, type_of, Signature, Term, Type};

use super::derivation::{derive_subtype, Rule, SubtypeDerivation};

/// A coercion `λsource. term` read off a subtyping derivation. The source
/// variable has the subtype and `term` has the supertype.
#[derive(Debug, Clone, PartialEq)]
pub struct CoercionTerm {
    pub source: String,
    pub source_type: Type,
    pub target_type: Type,
    pub term: Term,
}

impl CoercionTerm {
    /// The source variable is the only free variable and occurs exactly once.
    pub fn is_linear(&self) -> bool {
        let fv = self.term.free_vars();
        fv.len() == 1 && fv[0].0 == self.source && self.term.occurrences(&self.source) == 1
    }

    pub fn apply(&self, u: &Term) -> Term {
        self.term.substitute(&self.source, u)
    }

    pub fn as_function(&self) -> Term {
        Term::lam(self.source.clone(), self.source_type.clone(), self.term.clone())
    }

    pub fn normalized(&self) -> CoercionTerm {
        CoercionTerm { term: normalize(&self.term), ..self.clone() }
    }
}

struct Fresh {
    used: BTreeSet<String>,
}

impl Fresh {
    fn var(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.used);
        self.used.insert(n.clone());
        n
    }
}

/// Extracts the coercion of a derivation with source variable `source`.
pub fn coercion_term(d: &SubtypeDerivation, source: &str) -> CoercionTerm {
    let mut fresh = Fresh { used: BTreeSet::from([source.to_string()]) };
    let term = extract(d, source, &mut fresh);
    CoercionTerm { source: source.to_string(), source_type: d.sub.clone(), target_type: d.sup.clone(), term }
}

fn extract(d: &SubtypeDerivation, x: &str, fresh: &mut Fresh) -> Term {
    let xv = Term::var(x, d.sub.clone());
    match &d.rule {
        Rule::Reflexivity => xv,
        Rule::BaseEdge { name } => {
            Term::app(Term::constant(name.clone(), Type::arrow(d.sub.clone(), d.sup.clone())), xv)
        }
        Rule::Transitivity => {
            let t = extract(&d.premises[0], x, fresh);
            let y = fresh.var("y");
            let u = extract(&d.premises[1], &y, fresh);
            u.substitute(&y, &t)
        }
        Rule::ArrowCovariant => {
            let Type::Arrow(dom, _) = &d.sub else { unreachable!("covariant rule on non-arrow") };
            let w = fresh.var("w");
            let y = fresh.var("y");
            let t = extract(&d.premises[0], &y, fresh);
            let fw = Term::app(xv, Term::var(w.clone(), (**dom).clone()));
            Term::lam(w, (**dom).clone(), t.substitute(&y, &fw))
        }
        Rule::ArrowContravariant => {
            let p = &d.premises[0];
            let z = fresh.var("z");
            let t = extract(p, &z, fresh);
            Term::lam(z, p.sub.clone(), Term::app(xv, t))
        }
        Rule::ArrowCoCo => {
            let (co, contra) = (&d.premises[0], &d.premises[1]);
            let y = fresh.var("y");
            let t = extract(co, &y, fresh);
            let z = fresh.var("z");
            let u = extract(contra, &z, fresh);
            Term::lam(z, contra.sub.clone(), t.substitute(&y, &Term::app(xv, u)))
        }
        Rule::ForallIntro { var } => Term::ty_lam(var.clone(), extract(&d.premises[0], x, fresh)),
        Rule::ForallElim { witness } => Term::ty_app(extract(&d.premises[0], x, fresh), witness.clone()),
        Rule::ForallElimLeft { witness } => {
            let s = fresh.var("s");
            let t = extract(&d.premises[0], &s, fresh);
            t.substitute(&s, &Term::ty_app(xv, witness.clone()))
        }
    }
}

/// Applies `f` to `u`, inserting a coercion on `u` when its type is a proper
/// subtype of the domain of `f`.
pub fn coercive_apply(sig: &Signature, f: &Term, u: &Term) -> Option<Term> {
    let tf = type_of(sig, f).ok()?;
    let (dom, _) = tf.as_arrow()?;
    let tu = type_of(sig, u).ok()?;
    if type_eq(dom, &tu) {
        return Some(Term::app(f.clone(), u.clone()));
    }
    let d = derive_subtype(sig, &tu, dom)?;
    let c = coercion_term(&d, "x");
    Some(Term::app(f.clone(), c.apply(u)))
}
