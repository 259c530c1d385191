//! Brute-force reading enumeration: every combination of modifier choices at
//! every application node is built without pruning, then filtered by typing,
//! the economy condition and rigidity.

use std::collections::{BTreeMap, BTreeSet};

use mglex::assembly::{apply_instantiated, CompositionTree};
use mglex::lexicon::{Flag, Lexicon, IDENTITY_LABEL};
use mglex::reduction::{normalize, normalize_in};
use mglex::terms::{canonical_key, names, type_of, SpineArg, Term, Type};

#[derive(Clone)]
struct Choice {
    label: String,
    flag: Flag,
    /// `None` is the identity.
    term: Option<Term>,
}

#[derive(Clone)]
struct Value {
    term: Term,
    ty: Type,
    anchor: Option<(usize, String)>,
    /// (occurrence, cluster, label, flag) for every cluster slot.
    slots: Vec<(usize, usize, String, Flag)>,
}

struct Walk<'a> {
    lex: &'a Lexicon,
    leaf: usize,
    node: usize,
}

fn menu(lex: &Lexicon, anchor: &Option<(usize, String)>) -> Vec<Choice> {
    let mut out = Vec::new();
    match anchor {
        Some((_, w)) => {
            let e = lex.entry(w).unwrap();
            out.push(Choice { label: IDENTITY_LABEL.into(), flag: e.identity_flag, term: None });
            for o in &e.optional_terms {
                out.push(Choice { label: o.label.clone(), flag: o.flag, term: Some(o.term.clone()) });
            }
        }
        None => out.push(Choice { label: IDENTITY_LABEL.into(), flag: Flag::Flexible, term: None }),
    }
    out
}

fn apply_choice(sig: &mglex::terms::Signature, c: &Choice, t: &Term, ty: &Type) -> Option<(Term, Type)> {
    match &c.term {
        None => Some((t.clone(), ty.clone())),
        Some(m) => {
            let app = Term::app(m.clone(), t.clone());
            let aty = type_of(sig, &app).ok()?;
            Some((normalize(&app), aty))
        }
    }
}

/// Base-sort coercion found by breadth-first search over declared edges.
fn sort_coercion(lex: &Lexicon, from: &Type, to: &Type) -> Option<Term> {
    let (Type::Sort(a), Type::Sort(b)) = (from, to) else { return None };
    if a == b {
        return None;
    }
    let edges = lex.signature.base_coercions();
    let mut prev: BTreeMap<String, String> = BTreeMap::new();
    let mut frontier = vec![a.clone()];
    let mut seen = BTreeSet::from([a.clone()]);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in frontier {
            for e in edges.iter().filter(|e| e.from == s) {
                if seen.insert(e.to.clone()) {
                    prev.insert(e.to.clone(), e.name.clone());
                    next.push(e.to.clone());
                }
            }
        }
        frontier = next;
    }
    let mut chain = Vec::new();
    let mut at = b.clone();
    while at != *a {
        let name = prev.get(&at)?;
        chain.push(name.clone());
        at = edges.iter().find(|e| &e.name == name).unwrap().from.clone();
    }
    let mut x = Term::var("x", from.clone());
    for name in chain.iter().rev() {
        x = Term::app(lex.signature.constant(name).unwrap(), x);
    }
    Some(Term::lam("x", from.clone(), x))
}

fn is_land(t: &Term) -> Option<(Type, Type)> {
    let (h, args) = t.unspine();
    match (h, args.as_slice()) {
        (Term::Const(c, _), [SpineArg::Type(a), SpineArg::Type(b), SpineArg::Term(_), SpineArg::Term(_)])
            if c == names::POLY_AND =>
        {
            Some((a.clone(), b.clone()))
        }
        _ => None,
    }
}

impl Walk<'_> {
    fn values(&mut self, tree: &CompositionTree) -> Vec<Value> {
        let node = self.node;
        self.node += 1;
        match tree {
            CompositionTree::Leaf(w) => {
                let occ = self.leaf;
                self.leaf += 1;
                let e = self.lex.entry(w).unwrap();
                vec![Value {
                    term: e.principal.clone(),
                    ty: e.principal_type.clone(),
                    anchor: Some((occ, w.clone())),
                    slots: vec![],
                }]
            }
            CompositionTree::Node(f, a) => {
                let fs = self.values(f);
                let xs = self.values(a);
                let mut out = Vec::new();
                for fv in &fs {
                    for av in &xs {
                        self.combine(fv, av, node, &mut out);
                    }
                }
                out
            }
        }
    }

    fn combine(&self, f: &Value, a: &Value, node: usize, out: &mut Vec<Value>) {
        let sig = &self.lex.signature;
        let mut slots = f.slots.clone();
        slots.extend(a.slots.iter().cloned());
        if let Some((alpha, beta)) = is_land(&f.term) {
            let Some((applied, _)) = apply_instantiated(&f.term, &f.ty, &a.term, &a.ty) else { return };
            let fillers = |target: &Type| -> Vec<(Term, Option<(String, Flag)>)> {
                let mut v = Vec::new();
                for c in menu(self.lex, &a.anchor) {
                    let t = c
                        .term
                        .clone()
                        .unwrap_or_else(|| Term::lam("x", a.ty.clone(), Term::var("x", a.ty.clone())));
                    if type_of(sig, &t).ok() == Some(Type::arrow(a.ty.clone(), target.clone())) {
                        let st = a.anchor.as_ref().map(|_| (c.label.clone(), c.flag));
                        v.push((t, st));
                    }
                }
                if let Some(c) = sort_coercion(self.lex, &a.ty, target) {
                    let st = a.anchor.as_ref().map(|_| ("coercion".to_string(), Flag::Flexible));
                    v.push((c, st));
                }
                v
            };
            for (l, ls) in fillers(&alpha) {
                for (r, rs) in fillers(&beta) {
                    let term = Term::apps(applied.clone(), [l.clone(), r]);
                    let Ok(ty) = type_of(sig, &term) else { continue };
                    let mut slots = slots.clone();
                    for (label, flag) in ls.iter().cloned().chain(rs) {
                        slots.push((a.anchor.as_ref().unwrap().0, node, label, flag));
                    }
                    out.push(Value { term: normalize(&term), ty, anchor: None, slots });
                }
            }
            return;
        }
        if let Some((term, ty)) = apply_instantiated(&f.term, &f.ty, &a.term, &a.ty) {
            let keep = matches!(a.ty.as_arrow(), Some((d, c)) if c.is_prop() && *d == ty) || a.ty == ty;
            out.push(Value { term, ty, anchor: if keep { a.anchor.clone() } else { None }, slots });
            return;
        }
        for mf in menu(self.lex, &f.anchor) {
            for ma in menu(self.lex, &a.anchor) {
                let Some((ft, fty)) = apply_choice(sig, &mf, &f.term, &f.ty) else { continue };
                let Some((at, aty)) = apply_choice(sig, &ma, &a.term, &a.ty) else { continue };
                let modified = mf.term.is_some() || ma.term.is_some();
                let direct = apply_instantiated(&ft, &fty, &at, &aty);
                match direct {
                    Some((term, ty)) if modified => {
                        out.push(Value { term, ty, anchor: None, slots: slots.clone() });
                    }
                    Some(_) => {}
                    None => {
                        let Some((dom, cod)) = fty.as_arrow() else { continue };
                        if let Some(c) = sort_coercion(self.lex, &aty, dom) {
                            let term = normalize(&Term::app(ft.clone(), Term::app(c, at.clone())));
                            out.push(Value { term, ty: cod.clone(), anchor: None, slots: slots.clone() });
                        }
                    }
                }
            }
        }
    }
}

fn rigid_ok(slots: &[(usize, usize, String, Flag)]) -> bool {
    let mut groups: BTreeMap<(usize, usize), Vec<(&str, Flag)>> = BTreeMap::new();
    for (o, c, l, f) in slots {
        groups.entry((*o, *c)).or_default().push((l, *f));
    }
    groups.values().all(|g| {
        g.iter().all(|(_, f)| *f == Flag::Flexible)
            || g.iter().all(|(l, f)| *f == Flag::Rigid && *l == g[0].0)
    })
}

/// Alpha-invariant keys of every reading the oracle accepts.
pub fn readings(lex: &Lexicon, tree: &CompositionTree) -> BTreeSet<String> {
    let mut w = Walk { lex, leaf: 0, node: 0 };
    w.values(tree)
        .into_iter()
        .filter(|v| rigid_ok(&v.slots))
        .filter_map(|v| {
            let lf = normalize_in(&lex.signature, &v.term);
            type_of(&lex.signature, &lf).ok().map(|_| canonical_key(&lf))
        })
        .collect()
}

/// Largest number of cluster slots any single combination opens.
pub fn max_slots(lex: &Lexicon, tree: &CompositionTree) -> usize {
    let mut w = Walk { lex, leaf: 0, node: 0 };
    w.values(tree).iter().map(|v| v.slots.len()).max().unwrap_or(0)
}
