//! Types of the many-sorted second-order calculus: base sorts (including the
//! proposition type `t`), type variables, arrows and universal quantification.

use std::collections::BTreeSet;
use std::fmt;

/// Name of the proposition type.
pub const PROP: &str = "t";

#[derive(Debug, Clone)]
pub enum Type {
    Sort(String),
    Var(String),
    Arrow(Box<Type>, Box<Type>),
    Forall(String, Box<Type>),
}

impl Type {
    pub fn sort(name: impl Into<String>) -> Type {
        Type::Sort(name.into())
    }

    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn prop() -> Type {
        Type::Sort(PROP.to_string())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Right-nested arrow `a1 -> a2 -> ... -> cod`.
    pub fn arrows(doms: impl IntoIterator<Item = Type>, cod: Type) -> Type {
        let doms: Vec<Type> = doms.into_iter().collect();
        doms.into_iter().rev().fold(cod, |acc, d| Type::arrow(d, acc))
    }

    pub fn forall(var: impl Into<String>, body: Type) -> Type {
        Type::Forall(var.into(), Box::new(body))
    }

    /// `a -> t`
    pub fn pred(a: Type) -> Type {
        Type::arrow(a, Type::prop())
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Type::Sort(s) if s == PROP)
    }

    pub fn as_arrow(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Type::Sort(_) => {}
            Type::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free_var(&self, v: &str) -> bool {
        match self {
            Type::Sort(_) => false,
            Type::Var(w) => w == v,
            Type::Arrow(a, b) => a.has_free_var(v) || b.has_free_var(v),
            Type::Forall(w, body) => w != v && body.has_free_var(v),
        }
    }

    /// Every name used anywhere in the type, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Sort(s) | Type::Var(s) => {
                out.insert(s.clone());
            }
            Type::Arrow(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Type::Forall(v, body) => {
                out.insert(v.clone());
                body.all_names(out);
            }
        }
    }

    /// Sorts mentioned by the type.
    pub fn sorts(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Sort(s) => {
                out.insert(s.clone());
            }
            Type::Var(_) => {}
            Type::Arrow(a, b) => {
                a.sorts(out);
                b.sorts(out);
            }
            Type::Forall(_, body) => body.sorts(out),
        }
    }

    /// Capture-avoiding substitution `self[var := by]`.
    pub fn substitute(&self, var: &str, by: &Type) -> Type {
        match self {
            Type::Sort(_) => self.clone(),
            Type::Var(v) => {
                if v == var {
                    by.clone()
                } else {
                    self.clone()
                }
            }
            Type::Arrow(a, b) => Type::arrow(a.substitute(var, by), b.substitute(var, by)),
            Type::Forall(v, body) => {
                if v == var || !body.has_free_var(var) {
                    return self.clone();
                }
                let by_free = by.free_vars();
                if by_free.contains(v) {
                    let mut avoid = by_free;
                    body.all_names(&mut avoid);
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let renamed = body.substitute(v, &Type::Var(fresh.clone()));
                    Type::forall(fresh, renamed.substitute(var, by))
                } else {
                    Type::forall(v.clone(), body.substitute(var, by))
                }
            }
        }
    }

    /// Size in constructors.
    pub fn size(&self) -> usize {
        match self {
            Type::Sort(_) | Type::Var(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Forall(_, b) => 1 + b.size(),
        }
    }

    /// Final codomain after stripping arrows (not foralls).
    pub fn result(&self) -> &Type {
        match self {
            Type::Arrow(_, b) => b.result(),
            other => other,
        }
    }

    /// Renders with Unicode connectives (`→`, `Π`).
    pub fn unicode(&self) -> String {
        let mut s = String::new();
        write_type(&mut s, self, 0, true);
        s
    }
}

/// Alpha-equivalence of types.
pub fn type_eq(a: &Type, b: &Type) -> bool {
    alpha_eq_in(a, b, &mut Vec::new())
}

/// Alpha-equivalence under a stack of paired binders, innermost last. Used by
/// term comparison, where `Λ` binders scope over annotations.
pub(crate) fn alpha_eq_in(a: &Type, b: &Type, stack: &mut Vec<(String, String)>) -> bool {
    match (a, b) {
        (Type::Sort(x), Type::Sort(y)) => x == y,
        (Type::Var(x), Type::Var(y)) => {
            let ix = stack.iter().rposition(|(l, _)| l == x);
            let iy = stack.iter().rposition(|(_, r)| r == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Type::Arrow(a1, b1), Type::Arrow(a2, b2)) => {
            alpha_eq_in(a1, a2, stack) && alpha_eq_in(b1, b2, stack)
        }
        (Type::Forall(x, b1), Type::Forall(y, b2)) => {
            stack.push((x.clone(), y.clone()));
            let r = alpha_eq_in(b1, b2, stack);
            stack.pop();
            r
        }
        _ => false,
    }
}

impl PartialEq for Type {
    fn eq(&self, other: &Type) -> bool {
        type_eq(self, other)
    }
}

impl Eq for Type {}

/// Picks `base`, or `base` with a numeric suffix, avoiding every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{stem}{i}")).find(|n| !avoid.contains(n)).expect("unbounded suffix search")
}

pub(crate) fn write_type(out: &mut String, ty: &Type, prec: u8, unicode: bool) {
    match ty {
        Type::Sort(s) | Type::Var(s) => out.push_str(s),
        Type::Arrow(a, b) => {
            if prec > 0 {
                out.push('(');
            }
            write_type(out, a, 1, unicode);
            out.push_str(if unicode { " → " } else { " -> " });
            write_type(out, b, 0, unicode);
            if prec > 0 {
                out.push(')');
            }
        }
        Type::Forall(v, body) => {
            if prec > 0 {
                out.push('(');
            }
            out.push_str(if unicode { "Π" } else { "Pi " });
            out.push_str(v);
            out.push_str(". ");
            write_type(out, body, 0, unicode);
            if prec > 0 {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_type(&mut s, self, 0, false);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Type {
        Type::var("a")
    }

    #[test]
    fn alpha_renamed_foralls_are_equal() {
        let l = Type::forall("a", Type::arrow(a(), a()));
        let r = Type::forall("b", Type::arrow(Type::var("b"), Type::var("b")));
        assert!(type_eq(&l, &r));
    }

    #[test]
    fn arrows_are_not_symmetric() {
        let e = Type::sort("e");
        assert!(!type_eq(&Type::arrow(e.clone(), Type::prop()), &Type::arrow(Type::prop(), e)));
    }

    #[test]
    fn different_constructors_differ() {
        assert!(!type_eq(&Type::forall("a", a()), &Type::sort("e")));
    }

    #[test]
    fn bound_and_free_variables_differ() {
        // Pi a. b  vs  Pi b. b
        let l = Type::forall("a", Type::var("b"));
        let r = Type::forall("b", Type::var("b"));
        assert!(!type_eq(&l, &r));
    }

    #[test]
    fn substitution_replaces_free_occurrences() {
        let ty = Type::pred(a());
        assert_eq!(ty.substitute("a", &Type::sort("Pl")), Type::pred(Type::sort("Pl")));
    }

    #[test]
    fn substitution_avoids_capture() {
        // (Pi b. a -> b)[a := b]  must not capture b
        let ty = Type::forall("b", Type::arrow(a(), Type::var("b")));
        let out = ty.substitute("a", &Type::var("b"));
        match &out {
            Type::Forall(v, body) => {
                assert_ne!(v, "b");
                assert_eq!(**body, Type::arrow(Type::var("b"), Type::var(v.clone())));
            }
            _ => panic!("expected forall"),
        }
    }

    #[test]
    fn substitution_respects_shadowing() {
        let ty = Type::forall("a", a());
        assert_eq!(ty.substitute("a", &Type::sort("e")), ty);
    }

    #[test]
    fn display_parenthesises_left_arrows() {
        let ty = Type::forall("a", Type::arrow(Type::pred(a()), Type::prop()));
        assert_eq!(ty.to_string(), "Pi a. (a -> t) -> t");
        assert_eq!(ty.unicode(), "Πa. (a → t) → t");
    }
}
