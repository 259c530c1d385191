use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::signature::Signature;
use super::term::Term;
use super::types::{type_eq, Type};

/// Types of free term variables.
pub type Env = BTreeMap<String, Type>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypeError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("constant `{name}` used at {used}, declared {declared}")]
    ConstantTypeMismatch { name: String, declared: Type, used: Type },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{name}` annotated {annotated}, bound at {bound}")]
    VariableAnnotationMismatch { name: String, annotated: Type, bound: Type },
    #[error("type mismatch: expected {expected}, got {got}")]
    ApplicationMismatch { expected: Type, got: Type },
    #[error("{0} is not a function type")]
    NotAFunction(Type),
    #[error("{0} is not a universal type")]
    NotPolymorphic(Type),
    #[error("type variable `{var}` occurs free in the type of free variable `{term_var}`")]
    EscapingTypeVariable { var: String, term_var: String },
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
}

/// Computes the type of `term`; typing is syntax-directed so the result is
/// unique.
pub fn check_type(sig: &Signature, env: &Env, term: &Term) -> Result<Type, TypeError> {
    Checker { sig, env, locals: Vec::new() }.infer(term)
}

/// Type of a term whose free variables are typed by their own annotations.
pub fn type_of(sig: &Signature, term: &Term) -> Result<Type, TypeError> {
    let env: Env = term.free_vars().into_iter().collect();
    check_type(sig, &env, term)
}

pub fn check_type_wf(sig: &Signature, ty: &Type) -> Result<(), TypeError> {
    let mut sorts = BTreeSet::new();
    ty.sorts(&mut sorts);
    match sorts.into_iter().find(|s| !sig.has_sort(s)) {
        Some(s) => Err(TypeError::UnknownSort(s)),
        None => Ok(()),
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    env: &'a Env,
    locals: Vec<(String, Type)>,
}

impl Checker<'_> {
    fn lookup(&self, x: &str) -> Option<&Type> {
        self.locals.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t).or_else(|| self.env.get(x))
    }

    fn infer(&mut self, term: &Term) -> Result<Type, TypeError> {
        match term {
            Term::Var(x, ann) => {
                let bound = self.lookup(x).ok_or_else(|| TypeError::UnboundVariable(x.clone()))?;
                if !type_eq(bound, ann) {
                    return Err(TypeError::VariableAnnotationMismatch {
                        name: x.clone(),
                        annotated: ann.clone(),
                        bound: bound.clone(),
                    });
                }
                Ok(ann.clone())
            }
            Term::Const(c, ty) => {
                let declared =
                    self.sig.constant_type(c).ok_or_else(|| TypeError::UnknownConstant(c.clone()))?;
                if !type_eq(declared, ty) {
                    return Err(TypeError::ConstantTypeMismatch {
                        name: c.clone(),
                        declared: declared.clone(),
                        used: ty.clone(),
                    });
                }
                Ok(ty.clone())
            }
            Term::App(f, a) => {
                let tf = self.infer(f)?;
                let ta = self.infer(a)?;
                match tf {
                    Type::Arrow(dom, cod) => {
                        if type_eq(&dom, &ta) {
                            Ok(*cod)
                        } else {
                            Err(TypeError::ApplicationMismatch { expected: *dom, got: ta })
                        }
                    }
                    other => Err(TypeError::NotAFunction(other)),
                }
            }
            Term::Lam(x, ty, body) => {
                check_type_wf(self.sig, ty)?;
                self.locals.push((x.clone(), ty.clone()));
                let tb = self.infer(body);
                self.locals.pop();
                Ok(Type::arrow(ty.clone(), tb?))
            }
            Term::TyApp(f, ty) => {
                check_type_wf(self.sig, ty)?;
                match self.infer(f)? {
                    Type::Forall(v, body) => Ok(body.substitute(&v, ty)),
                    other => Err(TypeError::NotPolymorphic(other)),
                }
            }
            Term::TyLam(v, body) => {
                for (x, ty) in body.free_vars() {
                    let bound = self.lookup(&x).cloned().unwrap_or(ty);
                    if bound.has_free_var(v) {
                        return Err(TypeError::EscapingTypeVariable { var: v.clone(), term_var: x });
                    }
                }
                let tb = self.infer(body)?;
                Ok(Type::forall(v.clone(), tb))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::signature::{names, poly_and_body, poly_and_type};

    fn sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("e").unwrap();
        sig.add_sort("dog").unwrap();
        sig.add_sort("chair").unwrap();
        sig.add_constant("club", Type::pred(Type::sort("e"))).unwrap();
        sig.add_constant("barks", Type::pred(Type::sort("dog"))).unwrap();
        sig.add_constant("chair0", Type::sort("chair")).unwrap();
        sig
    }

    #[test]
    fn eta_expanded_predicate() {
        let sig = sig();
        let e = Type::sort("e");
        let t =
            Term::lam("x", e.clone(), Term::app(sig.constant("club").unwrap(), Term::var("x", e.clone())));
        assert_eq!(check_type(&sig, &Env::new(), &t).unwrap(), Type::pred(e));
    }

    #[test]
    fn polymorphic_identity() {
        let a = Type::var("a");
        let id = Term::ty_lam("a", Term::lam("x", a.clone(), Term::var("x", a.clone())));
        let ty = check_type(&sig(), &Env::new(), &id).unwrap();
        assert_eq!(ty, Type::forall("b", Type::arrow(Type::var("b"), Type::var("b"))));
    }

    #[test]
    fn poly_and_definition_has_its_declared_type() {
        let ty = check_type(&sig(), &Env::new(), &poly_and_body()).unwrap();
        assert_eq!(ty, poly_and_type());
        assert_eq!(sig().constant_type(names::POLY_AND), Some(&poly_and_type()));
    }

    #[test]
    fn a_chair_barks_is_a_mismatch() {
        let sig = sig();
        let t = Term::app(sig.constant("barks").unwrap(), sig.constant("chair0").unwrap());
        assert_eq!(
            check_type(&sig, &Env::new(), &t),
            Err(TypeError::ApplicationMismatch { expected: Type::sort("dog"), got: Type::sort("chair") })
        );
    }

    #[test]
    fn unknown_constant_and_unbound_variable() {
        let sig = sig();
        let e = Type::sort("e");
        assert_eq!(
            check_type(&sig, &Env::new(), &Term::constant("nope", e.clone())),
            Err(TypeError::UnknownConstant("nope".into()))
        );
        assert_eq!(
            check_type(&sig, &Env::new(), &Term::var("x", e)),
            Err(TypeError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn escaping_type_variable_is_rejected() {
        // Lam a. x  with x : a free
        let a = Type::var("a");
        let t = Term::ty_lam("a", Term::var("x", a.clone()));
        let env = Env::from([("x".to_string(), a)]);
        assert!(matches!(check_type(&sig(), &env, &t), Err(TypeError::EscapingTypeVariable { .. })));
    }

    #[test]
    fn type_application_instantiates() {
        let sig = sig();
        let e = Type::sort("e");
        let t = Term::ty_app(sig.constant(names::FORALL).unwrap(), e.clone());
        assert_eq!(check_type(&sig, &Env::new(), &t).unwrap(), Type::arrow(Type::pred(e), Type::prop()));
    }
}
