use std::collections::BTreeSet;
use std::fmt;

use crate::terms::{fresh_name, type_eq, Signature, Type};

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    /// `S < S`, with the identity coercion.
    Reflexivity,
    /// A declared base coercion `c : e_i -> e_j`.
    BaseEdge { name: String },
    /// `A<B  B<C / A<C`
    Transitivity,
    /// `A<B  C<D / D->A < C->B`
    ArrowCoCo,
    /// `A<B / T->A < T->B`
    ArrowCovariant,
    /// `A<B / B->T < A->T`
    ArrowContravariant,
    /// `U<T[X] / U < Pi X. T[X]`, with `X` not free in `U`.
    ForallIntro { var: String },
    /// `U < Pi X. T[X] / U < T[W]`
    ForallElim { witness: Type },
    /// Sequent-style left elimination `S[W] < U / Pi X. S[X] < U`.
    ForallElimLeft { witness: Type },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Reflexivity => "refl",
            Rule::BaseEdge { .. } => "base",
            Rule::Transitivity => "trans",
            Rule::ArrowCoCo => "arrow",
            Rule::ArrowCovariant => "arrow-co",
            Rule::ArrowContravariant => "arrow-contra",
            Rule::ForallIntro { .. } => "pi-intro",
            Rule::ForallElim { .. } => "pi-elim",
            Rule::ForallElimLeft { .. } => "pi-elim-left",
        }
    }
}

/// A derivation tree of a subtyping judgement `sub < sup`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubtypeDerivation {
    pub sub: Type,
    pub sup: Type,
    pub rule: Rule,
    pub premises: Vec<SubtypeDerivation>,
}

impl SubtypeDerivation {
    pub fn reflexive(ty: Type) -> Self {
        SubtypeDerivation { sub: ty.clone(), sup: ty, rule: Rule::Reflexivity, premises: vec![] }
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Self::height).max().unwrap_or(0)
    }

    /// Checks every node against its rule.
    pub fn is_valid(&self, sig: &Signature) -> bool {
        if !self.premises.iter().all(|p| p.is_valid(sig)) {
            return false;
        }
        let p = &self.premises;
        match (&self.rule, p.as_slice()) {
            (Rule::Reflexivity, []) => type_eq(&self.sub, &self.sup),
            (Rule::BaseEdge { name }, []) => match (&self.sub, &self.sup) {
                (Type::Sort(i), Type::Sort(j)) => sig.coercion_between(i, j).is_some_and(|c| &c.name == name),
                _ => false,
            },
            (Rule::Transitivity, [ab, bc]) => {
                type_eq(&ab.sub, &self.sub) && type_eq(&ab.sup, &bc.sub) && type_eq(&bc.sup, &self.sup)
            }
            (Rule::ArrowCoCo, [ab, cd]) => match (&self.sub, &self.sup) {
                (Type::Arrow(d, a), Type::Arrow(c, b)) => {
                    type_eq(&ab.sub, a) && type_eq(&ab.sup, b) && type_eq(&cd.sub, c) && type_eq(&cd.sup, d)
                }
                _ => false,
            },
            (Rule::ArrowCovariant, [ab]) => match (&self.sub, &self.sup) {
                (Type::Arrow(t1, a), Type::Arrow(t2, b)) => {
                    type_eq(t1, t2) && type_eq(&ab.sub, a) && type_eq(&ab.sup, b)
                }
                _ => false,
            },
            (Rule::ArrowContravariant, [ab]) => match (&self.sub, &self.sup) {
                (Type::Arrow(b, t1), Type::Arrow(a, t2)) => {
                    type_eq(t1, t2) && type_eq(&ab.sub, a) && type_eq(&ab.sup, b)
                }
                _ => false,
            },
            (Rule::ForallIntro { var }, [d]) => {
                !self.sub.has_free_var(var)
                    && type_eq(&d.sub, &self.sub)
                    && type_eq(&Type::forall(var.clone(), d.sup.clone()), &self.sup)
            }
            (Rule::ForallElim { witness }, [d]) => match &d.sup {
                Type::Forall(v, body) => {
                    type_eq(&d.sub, &self.sub) && type_eq(&body.substitute(v, witness), &self.sup)
                }
                _ => false,
            },
            (Rule::ForallElimLeft { witness }, [d]) => match &self.sub {
                Type::Forall(v, body) => {
                    type_eq(&d.sub, &body.substitute(v, witness)) && type_eq(&d.sup, &self.sup)
                }
                _ => false,
            },
            _ => false,
        }
    }

    fn write_tree(&self, out: &mut String, indent: usize) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("{} < {}  [{}", self.sub, self.sup, self.rule.name()));
        match &self.rule {
            Rule::BaseEdge { name } => out.push_str(&format!(" {name}")),
            Rule::ForallIntro { var } => out.push_str(&format!(" {var}")),
            Rule::ForallElim { witness } | Rule::ForallElimLeft { witness } => {
                out.push_str(&format!(" {witness}"))
            }
            _ => {}
        }
        out.push_str("]\n");
        for p in &self.premises {
            p.write_tree(out, indent + 1);
        }
    }
}

impl fmt::Display for SubtypeDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_tree(&mut s, 0);
        f.write_str(s.trim_end())
    }
}

/// Syntax-directed search for subtyping derivations.
///
/// Base pairs go through the transitive closure of the coercion graph,
/// arrows are decomposed by variance, a universal on the right is introduced
/// and a universal on the left is instantiated with a witness drawn from the
/// declared sorts and the subterms of the goal.
#[derive(Debug, Clone, Copy)]
pub struct SubtypeSearch {
    pub max_depth: usize,
    /// Use the sequent-style left elimination instead of transitivity
    /// through an instance.
    pub alternative_elim: bool,
}

impl Default for SubtypeSearch {
    fn default() -> Self {
        SubtypeSearch { max_depth: 32, alternative_elim: false }
    }
}

pub fn derive_subtype(sig: &Signature, s: &Type, t: &Type) -> Option<SubtypeDerivation> {
    SubtypeSearch::default().derive(sig, s, t)
}

fn subterms(ty: &Type, out: &mut Vec<Type>) {
    if !out.iter().any(|t| type_eq(t, ty)) {
        out.push(ty.clone());
    }
    match ty {
        Type::Arrow(a, b) => {
            subterms(a, out);
            subterms(b, out);
        }
        Type::Forall(v, b) => {
            let mut inner = Vec::new();
            subterms(b, &mut inner);
            for t in inner.into_iter().filter(|t| !t.has_free_var(v)) {
                if !out.iter().any(|o| type_eq(o, &t)) {
                    out.push(t);
                }
            }
        }
        _ => {}
    }
}

impl SubtypeSearch {
    pub fn derive(&self, sig: &Signature, s: &Type, t: &Type) -> Option<SubtypeDerivation> {
        self.go(sig, s, t, self.max_depth)
    }

    fn go(&self, sig: &Signature, s: &Type, t: &Type, depth: usize) -> Option<SubtypeDerivation> {
        if depth == 0 {
            return None;
        }
        if type_eq(s, t) {
            return Some(SubtypeDerivation::reflexive(s.clone()));
        }
        if let (Type::Sort(i), Type::Sort(j)) = (s, t) {
            let path = sig.coercion_path(i, j)?;
            let mut edges = path.into_iter().map(|c| SubtypeDerivation {
                sub: Type::sort(&c.from),
                sup: Type::sort(&c.to),
                rule: Rule::BaseEdge { name: c.name.clone() },
                premises: vec![],
            });
            let first = edges.next()?;
            return Some(edges.fold(first, |acc, e| SubtypeDerivation {
                sub: acc.sub.clone(),
                sup: e.sup.clone(),
                rule: Rule::Transitivity,
                premises: vec![acc, e],
            }));
        }
        if let Type::Forall(x, body) = t {
            let mut avoid = s.free_vars();
            body.all_names(&mut avoid);
            avoid.remove(x);
            let var = if s.has_free_var(x) { fresh_name(x, &avoid) } else { x.clone() };
            let inner = body.substitute(x, &Type::var(var.clone()));
            if let Some(d) = self.go(sig, s, &inner, depth - 1) {
                return Some(SubtypeDerivation {
                    sub: s.clone(),
                    sup: t.clone(),
                    rule: Rule::ForallIntro { var },
                    premises: vec![d],
                });
            }
        }
        if let Type::Forall(x, body) = s {
            for w in self.witnesses(sig, s, t) {
                let inst = body.substitute(x, &w);
                let Some(d) = self.go(sig, &inst, t, depth - 1) else { continue };
                if self.alternative_elim {
                    return Some(SubtypeDerivation {
                        sub: s.clone(),
                        sup: t.clone(),
                        rule: Rule::ForallElimLeft { witness: w },
                        premises: vec![d],
                    });
                }
                let elim = SubtypeDerivation {
                    sub: s.clone(),
                    sup: inst,
                    rule: Rule::ForallElim { witness: w },
                    premises: vec![SubtypeDerivation::reflexive(s.clone())],
                };
                if d.rule == Rule::Reflexivity {
                    return Some(elim);
                }
                return Some(SubtypeDerivation {
                    sub: s.clone(),
                    sup: t.clone(),
                    rule: Rule::Transitivity,
                    premises: vec![elim, d],
                });
            }
        }
        if let (Type::Arrow(d, a), Type::Arrow(c, b)) = (s, t) {
            if type_eq(d, c) {
                let p = self.go(sig, a, b, depth - 1)?;
                return Some(SubtypeDerivation {
                    sub: s.clone(),
                    sup: t.clone(),
                    rule: Rule::ArrowCovariant,
                    premises: vec![p],
                });
            }
            if type_eq(a, b) {
                let p = self.go(sig, c, d, depth - 1)?;
                return Some(SubtypeDerivation {
                    sub: s.clone(),
                    sup: t.clone(),
                    rule: Rule::ArrowContravariant,
                    premises: vec![p],
                });
            }
            let co = self.go(sig, a, b, depth - 1)?;
            let contra = self.go(sig, c, d, depth - 1)?;
            return Some(SubtypeDerivation {
                sub: s.clone(),
                sup: t.clone(),
                rule: Rule::ArrowCoCo,
                premises: vec![co, contra],
            });
        }
        None
    }

    fn witnesses(&self, sig: &Signature, s: &Type, t: &Type) -> Vec<Type> {
        let mut out = Vec::new();
        subterms(t, &mut out);
        let mut free = t.free_vars();
        free.extend(s.free_vars());
        for v in free {
            let v = Type::var(v);
            if !out.iter().any(|o| type_eq(o, &v)) {
                out.push(v);
            }
        }
        let known: BTreeSet<String> = sig.sorts().map(str::to_string).collect();
        for srt in known {
            let st = Type::Sort(srt);
            if !out.iter().any(|o| type_eq(o, &st)) {
                out.push(st);
            }
        }
        out
    }
}
