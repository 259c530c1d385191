//! First-order matching of a function's outermost type binders against the
//! type of its argument.

use std::collections::{BTreeMap, BTreeSet};

use crate::reduction::normalize;
use crate::terms::{fresh_name, type_eq, Term, Type};

type Subst = BTreeMap<String, Type>;

fn matches(
    pat: &Type,
    target: &Type,
    vars: &BTreeSet<String>,
    rigid: &mut Vec<String>,
    s: &mut Subst,
) -> bool {
    match (pat, target) {
        (Type::Var(v), _) if vars.contains(v) && !rigid.contains(v) => {
            if target.free_vars().iter().any(|x| rigid.contains(x)) {
                return false;
            }
            match s.get(v) {
                Some(bound) => type_eq(bound, target),
                None => {
                    s.insert(v.clone(), target.clone());
                    true
                }
            }
        }
        (Type::Var(a), Type::Var(b)) => a == b,
        (Type::Sort(a), Type::Sort(b)) => a == b,
        (Type::Arrow(p1, p2), Type::Arrow(t1, t2)) => {
            matches(p1, t1, vars, rigid, s) && matches(p2, t2, vars, rigid, s)
        }
        (Type::Forall(x, p), Type::Forall(y, t)) => {
            let mut avoid = vars.clone();
            pat.all_names(&mut avoid);
            target.all_names(&mut avoid);
            let z = fresh_name("z", &avoid);
            let (p, t) = (p.substitute(x, &Type::var(&z)), t.substitute(y, &Type::var(&z)));
            rigid.push(z);
            let ok = matches(&p, &t, vars, rigid, s);
            rigid.pop();
            ok
        }
        _ => false,
    }
}

/// Applies `f : Pi a1..ak. D -> C` to `a : A`, instantiating the binders
/// that occur in `D` by matching it against `A`. Binders left unmatched are
/// abstracted again around the application. The result is beta-normal.
pub fn apply_instantiated(f: &Term, fty: &Type, a: &Term, aty: &Type) -> Option<(Term, Type)> {
    let mut names: Vec<String> = Vec::new();
    let mut ty = fty.clone();
    let arg_vars = aty.free_vars();
    let mut avoid = arg_vars.clone();
    fty.all_names(&mut avoid);
    while let Type::Forall(v, b) = ty {
        let n = if names.contains(&v) || arg_vars.contains(&v) { fresh_name(&v, &avoid) } else { v.clone() };
        avoid.insert(n.clone());
        ty = b.substitute(&v, &Type::var(&n));
        names.push(n);
    }
    let Type::Arrow(dom, cod) = ty else { return None };
    let (dom, cod) = (*dom, *cod);
    if names.is_empty() {
        return type_eq(&dom, aty).then(|| (normalize(&Term::app(f.clone(), a.clone())), cod));
    }
    let vars: BTreeSet<String> = names.iter().cloned().collect();
    let mut s = Subst::new();
    if !matches(&dom, aty, &vars, &mut Vec::new(), &mut s) {
        return None;
    }
    let mut head = f.clone();
    let mut rest = Vec::new();
    for n in &names {
        let w = match s.get(n) {
            Some(w) => w.clone(),
            None => {
                rest.push(n.clone());
                Type::var(n)
            }
        };
        head = Term::ty_app(head, w);
    }
    let mut ty = cod;
    for (n, w) in &s {
        ty = ty.substitute(n, w);
    }
    let mut term = Term::app(head, a.clone());
    for n in rest.iter().rev() {
        term = Term::ty_lam(n.clone(), term);
        ty = Type::forall(n.clone(), ty);
    }
    Some((normalize(&term), ty))
}
