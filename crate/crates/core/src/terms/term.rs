//! Church-style terms. Variables carry their type annotation; binders are
//! named, and equality on terms is alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;

use super::types::{alpha_eq_in, fresh_name, write_type, Type};

#[derive(Debug, Clone)]
pub enum Term {
    Var(String, Type),
    Const(String, Type),
    App(Box<Term>, Box<Term>),
    Lam(String, Type, Box<Term>),
    TyApp(Box<Term>, Type),
    TyLam(String, Box<Term>),
}

/// One element of an application spine.
#[derive(Debug, Clone, PartialEq)]
pub enum SpineArg {
    Type(Type),
    Term(Term),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: Type) -> Term {
        Term::Var(name.into(), ty)
    }

    pub fn constant(name: impl Into<String>, ty: Type) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn lam(name: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam(name.into(), ty, Box::new(body))
    }

    pub fn ty_app(f: Term, ty: Type) -> Term {
        Term::TyApp(Box::new(f), ty)
    }

    pub fn ty_lam(name: impl Into<String>, body: Term) -> Term {
        Term::TyLam(name.into(), Box::new(body))
    }

    /// Applies a spine of type and term arguments.
    pub fn spine(head: Term, args: impl IntoIterator<Item = SpineArg>) -> Term {
        args.into_iter().fold(head, |acc, a| match a {
            SpineArg::Type(t) => Term::ty_app(acc, t),
            SpineArg::Term(t) => Term::app(acc, t),
        })
    }

    /// Splits `h {W} a b ...` into its head and arguments, outermost last.
    pub fn unspine(&self) -> (&Term, Vec<SpineArg>) {
        let mut args = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Term::App(f, a) => {
                    args.push(SpineArg::Term((**a).clone()));
                    cur = f;
                }
                Term::TyApp(f, t) => {
                    args.push(SpineArg::Type(t.clone()));
                    cur = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (cur, args)
    }

    /// Name of the head constant, if the spine head is a constant.
    pub fn head_const(&self) -> Option<&str> {
        match self.unspine().0 {
            Term::Const(c, _) => Some(c),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(..) | Term::Const(..) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Lam(_, _, b) | Term::TyLam(_, b) => 1 + b.size(),
            Term::TyApp(f, _) => 1 + f.size(),
        }
    }

    /// Free term variables with the annotation at their first occurrence.
    pub fn free_vars(&self) -> Vec<(String, Type)> {
        let mut out: Vec<(String, Type)> = Vec::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<String>, out: &mut Vec<(String, Type)>) {
        match self {
            Term::Var(x, ty) => {
                if !bound.contains(x) && !out.iter().any(|(y, _)| y == x) {
                    out.push((x.clone(), ty.clone()));
                }
            }
            Term::Const(..) => {}
            Term::App(f, a) => {
                f.collect_free_vars(bound, out);
                a.collect_free_vars(bound, out);
            }
            Term::Lam(x, _, b) => {
                bound.push(x.clone());
                b.collect_free_vars(bound, out);
                bound.pop();
            }
            Term::TyApp(f, _) => f.collect_free_vars(bound, out),
            Term::TyLam(_, b) => b.collect_free_vars(bound, out),
        }
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y, _) => x == y,
            Term::Const(..) => false,
            Term::App(f, a) => f.has_free_var(x) || a.has_free_var(x),
            Term::Lam(y, _, b) => y != x && b.has_free_var(x),
            Term::TyApp(f, _) | Term::TyLam(_, f) => f.has_free_var(x),
        }
    }

    /// Number of free occurrences of `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y, _) => usize::from(x == y),
            Term::Const(..) => 0,
            Term::App(f, a) => f.occurrences(x) + a.occurrences(x),
            Term::Lam(y, _, b) => {
                if y == x {
                    0
                } else {
                    b.occurrences(x)
                }
            }
            Term::TyApp(f, _) | Term::TyLam(_, f) => f.occurrences(x),
        }
    }

    /// Free type variables occurring anywhere in the term (annotations,
    /// type arguments, constant types).
    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add = |ty: &Type, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in ty.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Term::Var(_, ty) | Term::Const(_, ty) => add(ty, bound, out),
            Term::App(f, a) => {
                f.collect_ftv(bound, out);
                a.collect_ftv(bound, out);
            }
            Term::Lam(_, ty, b) => {
                add(ty, bound, out);
                b.collect_ftv(bound, out);
            }
            Term::TyApp(f, ty) => {
                f.collect_ftv(bound, out);
                add(ty, bound, out);
            }
            Term::TyLam(a, b) => {
                bound.push(a.clone());
                b.collect_ftv(bound, out);
                bound.pop();
            }
        }
    }

    /// Every name (term or type, bound or free) occurring in the term.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x, ty) | Term::Const(x, ty) => {
                out.insert(x.clone());
                ty.all_names(out);
            }
            Term::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
            Term::Lam(x, ty, b) => {
                out.insert(x.clone());
                ty.all_names(out);
                b.all_names(out);
            }
            Term::TyApp(f, ty) => {
                f.all_names(out);
                ty.all_names(out);
            }
            Term::TyLam(a, b) => {
                out.insert(a.clone());
                b.all_names(out);
            }
        }
    }

    /// Constants occurring in the term.
    pub fn constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Const(c, _) => {
                out.insert(c.clone());
            }
            Term::Var(..) => {}
            Term::App(f, a) => {
                f.constants(out);
                a.constants(out);
            }
            Term::Lam(_, _, b) | Term::TyLam(_, b) | Term::TyApp(b, _) => b.constants(out),
        }
    }

    /// Capture-avoiding substitution `self[x := by]`.
    pub fn substitute(&self, x: &str, by: &Term) -> Term {
        let by_fv: BTreeSet<String> = by.free_vars().into_iter().map(|(n, _)| n).collect();
        let by_ftv = by.free_type_vars();
        self.subst_inner(x, by, &by_fv, &by_ftv)
    }

    fn subst_inner(&self, x: &str, by: &Term, by_fv: &BTreeSet<String>, by_ftv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(y, _) => {
                if y == x {
                    by.clone()
                } else {
                    self.clone()
                }
            }
            Term::Const(..) => self.clone(),
            Term::App(f, a) => {
                Term::app(f.subst_inner(x, by, by_fv, by_ftv), a.subst_inner(x, by, by_fv, by_ftv))
            }
            Term::TyApp(f, ty) => Term::ty_app(f.subst_inner(x, by, by_fv, by_ftv), ty.clone()),
            Term::Lam(y, ty, b) => {
                if y == x || !b.has_free_var(x) {
                    return self.clone();
                }
                if by_fv.contains(y) {
                    let mut avoid = by_fv.clone();
                    b.all_names(&mut avoid);
                    avoid.insert(x.to_string());
                    let fresh = fresh_name(y, &avoid);
                    let renamed = b.substitute(y, &Term::Var(fresh.clone(), ty.clone()));
                    Term::lam(fresh, ty.clone(), renamed.subst_inner(x, by, by_fv, by_ftv))
                } else {
                    Term::lam(y.clone(), ty.clone(), b.subst_inner(x, by, by_fv, by_ftv))
                }
            }
            Term::TyLam(a, b) => {
                if !b.has_free_var(x) {
                    return self.clone();
                }
                if by_ftv.contains(a) {
                    let mut avoid = by_ftv.clone();
                    b.all_names(&mut avoid);
                    let fresh = fresh_name(a, &avoid);
                    let renamed = b.type_substitute(a, &Type::Var(fresh.clone()));
                    Term::ty_lam(fresh, renamed.subst_inner(x, by, by_fv, by_ftv))
                } else {
                    Term::ty_lam(a.clone(), b.subst_inner(x, by, by_fv, by_ftv))
                }
            }
        }
    }

    /// Capture-avoiding substitution of a type for a free type variable.
    pub fn type_substitute(&self, a: &str, by: &Type) -> Term {
        let by_ftv = by.free_vars();
        self.tsubst_inner(a, by, &by_ftv)
    }

    fn tsubst_inner(&self, a: &str, by: &Type, by_ftv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(x, ty) => Term::Var(x.clone(), ty.substitute(a, by)),
            Term::Const(c, ty) => Term::Const(c.clone(), ty.substitute(a, by)),
            Term::App(f, arg) => Term::app(f.tsubst_inner(a, by, by_ftv), arg.tsubst_inner(a, by, by_ftv)),
            Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.substitute(a, by), b.tsubst_inner(a, by, by_ftv)),
            Term::TyApp(f, ty) => Term::ty_app(f.tsubst_inner(a, by, by_ftv), ty.substitute(a, by)),
            Term::TyLam(b_var, body) => {
                if b_var == a || !body.free_type_vars().contains(a) {
                    return self.clone();
                }
                if by_ftv.contains(b_var) {
                    let mut avoid = by_ftv.clone();
                    body.all_names(&mut avoid);
                    avoid.insert(a.to_string());
                    let fresh = fresh_name(b_var, &avoid);
                    let renamed = body.type_substitute(b_var, &Type::Var(fresh.clone()));
                    Term::ty_lam(fresh, renamed.tsubst_inner(a, by, by_ftv))
                } else {
                    Term::ty_lam(b_var.clone(), body.tsubst_inner(a, by, by_ftv))
                }
            }
        }
    }

    /// Renders in the core syntax with Unicode binders (`λ`, `Λ`, `→`, `Π`).
    pub fn unicode(&self) -> String {
        let mut s = String::new();
        write_term(&mut s, self, Ctx::Top, true);
        s
    }
}

/// A string that identifies the alpha-equivalence class of a term; bound
/// names are replaced by binding depth.
pub fn canonical_key(t: &Term) -> String {
    let mut out = String::new();
    key_term(t, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn key_type(ty: &Type, tvars: &mut Vec<String>, out: &mut String) {
    match ty {
        Type::Sort(s) => {
            out.push_str(s);
        }
        Type::Var(v) => match tvars.iter().rposition(|x| x == v) {
            Some(i) => out.push_str(&format!("#{i}")),
            None => {
                out.push('?');
                out.push_str(v);
            }
        },
        Type::Arrow(a, b) => {
            out.push('(');
            key_type(a, tvars, out);
            out.push('>');
            key_type(b, tvars, out);
            out.push(')');
        }
        Type::Forall(v, b) => {
            tvars.push(v.clone());
            out.push_str("(P ");
            key_type(b, tvars, out);
            out.push(')');
            tvars.pop();
        }
    }
}

fn key_term(t: &Term, vars: &mut Vec<String>, tvars: &mut Vec<String>, out: &mut String) {
    match t {
        Term::Var(x, ty) => {
            match vars.iter().rposition(|v| v == x) {
                Some(i) => out.push_str(&format!("#{i}")),
                None => out.push_str(x),
            }
            out.push(':');
            key_type(ty, tvars, out);
        }
        Term::Const(c, ty) => {
            out.push_str(c);
            out.push(':');
            key_type(ty, tvars, out);
        }
        Term::App(f, a) => {
            out.push('(');
            key_term(f, vars, tvars, out);
            out.push(' ');
            key_term(a, vars, tvars, out);
            out.push(')');
        }
        Term::Lam(x, ty, b) => {
            out.push_str("(L ");
            key_type(ty, tvars, out);
            out.push(' ');
            vars.push(x.clone());
            key_term(b, vars, tvars, out);
            vars.pop();
            out.push(')');
        }
        Term::TyApp(f, ty) => {
            out.push('(');
            key_term(f, vars, tvars, out);
            out.push_str(" {");
            key_type(ty, tvars, out);
            out.push_str("})");
        }
        Term::TyLam(a, b) => {
            out.push_str("(T ");
            tvars.push(a.clone());
            key_term(b, vars, tvars, out);
            tvars.pop();
            out.push(')');
        }
    }
}

/// Alpha-equivalence of terms. Free variables are compared by name and
/// annotation, bound ones by binding position.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    term_eq_in(a, b, &mut Vec::new(), &mut Vec::new())
}

fn term_eq_in(
    a: &Term,
    b: &Term,
    vars: &mut Vec<(String, String)>,
    tvars: &mut Vec<(String, String)>,
) -> bool {
    match (a, b) {
        (Term::Var(x, tx), Term::Var(y, ty)) => {
            let ix = vars.iter().rposition(|(l, _)| l == x);
            let iy = vars.iter().rposition(|(_, r)| r == y);
            let same = match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            };
            same && alpha_eq_in(tx, ty, tvars)
        }
        (Term::Const(x, tx), Term::Const(y, ty)) => x == y && alpha_eq_in(tx, ty, tvars),
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            term_eq_in(f1, f2, vars, tvars) && term_eq_in(a1, a2, vars, tvars)
        }
        (Term::Lam(x, tx, b1), Term::Lam(y, ty, b2)) => {
            if !alpha_eq_in(tx, ty, tvars) {
                return false;
            }
            vars.push((x.clone(), y.clone()));
            let r = term_eq_in(b1, b2, vars, tvars);
            vars.pop();
            r
        }
        (Term::TyApp(f1, t1), Term::TyApp(f2, t2)) => {
            alpha_eq_in(t1, t2, tvars) && term_eq_in(f1, f2, vars, tvars)
        }
        (Term::TyLam(x, b1), Term::TyLam(y, b2)) => {
            tvars.push((x.clone(), y.clone()));
            let r = term_eq_in(b1, b2, vars, tvars);
            tvars.pop();
            r
        }
        _ => false,
    }
}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        canonical_key(self).hash(state)
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        alpha_eq(self, other)
    }
}

impl Eq for Term {}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    Head,
    Arg,
}

fn write_binder_type(out: &mut String, ty: &Type, unicode: bool) {
    let prec = u8::from(matches!(ty, Type::Forall(..)));
    write_type(out, ty, prec, unicode);
}

fn write_term(out: &mut String, t: &Term, ctx: Ctx, unicode: bool) {
    match t {
        Term::Var(x, _) | Term::Const(x, _) => out.push_str(x),
        Term::Lam(x, ty, b) => {
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            out.push_str(if unicode { "λ" } else { "lam " });
            out.push_str(x);
            out.push(':');
            write_binder_type(out, ty, unicode);
            out.push_str(". ");
            write_term(out, b, Ctx::Top, unicode);
            if wrap {
                out.push(')');
            }
        }
        Term::TyLam(a, b) => {
            let wrap = ctx != Ctx::Top;
            if wrap {
                out.push('(');
            }
            out.push_str(if unicode { "Λ" } else { "Lam " });
            out.push_str(a);
            out.push_str(". ");
            write_term(out, b, Ctx::Top, unicode);
            if wrap {
                out.push(')');
            }
        }
        Term::TyApp(f, ty) => {
            write_term(out, f, Ctx::Head, unicode);
            out.push('{');
            write_type(out, ty, 0, unicode);
            out.push('}');
        }
        Term::App(..) => {
            // Flatten the term-application spine; type applications stay
            // attached to whatever they follow.
            let mut args = Vec::new();
            let mut cur = t;
            while let Term::App(f, a) = cur {
                args.push(&**a);
                cur = f;
            }
            args.reverse();
            out.push('(');
            write_term(out, cur, Ctx::Head, unicode);
            for a in args {
                out.push(' ');
                write_term(out, a, Ctx::Arg, unicode);
            }
            out.push(')');
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self, Ctx::Top, false);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e() -> Type {
        Type::sort("e")
    }

    fn club() -> Term {
        Term::constant("club", Type::pred(e()))
    }

    #[test]
    fn substitution_into_body() {
        // (lam x:e. P x)[P := club]  ->  lam x:e. club x
        let p = Term::var("P", Type::pred(e()));
        let t = Term::lam("x", e(), Term::app(p, Term::var("x", e())));
        let out = t.substitute("P", &club());
        assert_eq!(out, Term::lam("x", e(), Term::app(club(), Term::var("x", e()))));
    }

    #[test]
    fn substitution_under_shadowing_binder() {
        let t = Term::lam("x", e(), Term::var("x", e()));
        let out = t.substitute("x", &Term::constant("leeds", e()));
        assert_eq!(out, t);
        assert_eq!(out.to_string(), "lam x:e. x");
    }

    #[test]
    fn substitution_renames_to_avoid_capture() {
        // (lam y:e. f x y)[x := y] must not capture y
        let f = Term::var("f", Type::arrows([e(), e()], Type::prop()));
        let t = Term::lam("y", e(), Term::apps(f, [Term::var("x", e()), Term::var("y", e())]));
        let out = t.substitute("x", &Term::var("y", e()));
        let Term::Lam(binder, _, body) = &out else { panic!() };
        assert_ne!(binder, "y");
        assert!(body.has_free_var("y"));
        assert_eq!(out.occurrences("y"), 1);
    }

    #[test]
    fn identity_substitution() {
        let t = Term::lam("y", e(), Term::app(club(), Term::var("x", e())));
        assert_eq!(t.substitute("x", &Term::var("x", e())), t);
    }

    #[test]
    fn type_substitution_avoids_capture() {
        // (Lam b. lam y:b. x)[a := b] with x : a
        let t = Term::ty_lam("b", Term::lam("y", Type::var("b"), Term::var("x", Type::var("a"))));
        let out = t.type_substitute("a", &Type::var("b"));
        let Term::TyLam(b, body) = &out else { panic!() };
        assert_ne!(b, "b");
        let Term::Lam(_, yty, x) = &**body else { panic!() };
        assert_eq!(*yty, Type::var(b.clone()));
        assert!(matches!(&**x, Term::Var(_, Type::Var(v)) if v == "b"));
    }

    #[test]
    fn alpha_equivalence_of_binders() {
        let l = Term::lam("x", e(), Term::app(club(), Term::var("x", e())));
        let r = Term::lam("z", e(), Term::app(club(), Term::var("z", e())));
        assert_eq!(l, r);
        let free = Term::lam("z", e(), Term::app(club(), Term::var("x", e())));
        assert_ne!(l, free);
    }

    #[test]
    fn display_flattens_spines() {
        let defeated = Term::constant("defeated", Type::arrows([e(), e()], Type::prop()));
        let t = Term::apps(defeated, [Term::var("x", e()), Term::constant("Leeds", e())]);
        assert_eq!(t.to_string(), "(defeated x Leeds)");
    }
}
