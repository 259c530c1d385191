//! Meaning assembly: composing a tree of lexicon words into every well-typed
//! reading, repairing type mismatches with word-anchored modifiers and sort
//! coercions under the flexible/rigid discipline.

mod instantiate;
mod tree;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use instantiate::apply_instantiated;
pub use tree::{CompositionTree, TreeError};

use crate::lexicon::{Flag, LexEntry, Lexicon, OptionalTerm};
use crate::logic::{presuppositions, typing_facts, TypingFact};
use crate::reduction::{normalize, normalize_in};
use crate::subtyping::{coercion_term, derive_subtype};
use crate::terms::{canonical_key, names, type_eq, type_of, SpineArg, Term, Type};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
}

/// One modifier choice made during composition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TraceStep {
    /// Leaf index of the word occurrence the modifier is anchored to.
    pub occurrence: Option<usize>,
    pub word: Option<String>,
    pub label: String,
    pub flag: Flag,
    /// The copredication cluster the slot belongs to, if any.
    pub cluster: Option<usize>,
}

/// A partial reading of a subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub term: Term,
    pub ty: Type,
    /// The word occurrence whose modifiers may act on this subtree.
    pub anchor: Option<(usize, String)>,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reading {
    /// Normal form with definitions unfolded.
    pub logical_form: Term,
    pub ty: Type,
    pub trace: Vec<TraceStep>,
    /// Other traces that produce the same logical form.
    pub alternative_traces: Vec<Vec<TraceStep>>,
    pub presuppositions: Vec<Term>,
    pub typing_facts: Vec<TypingFact>,
}

impl Reading {
    /// Labels of the non-identity modifiers used.
    pub fn labels(&self) -> Vec<&str> {
        self.trace
            .iter()
            .filter(|s| s.label != crate::lexicon::IDENTITY_LABEL)
            .map(|s| s.label.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assembly {
    pub readings: Vec<Reading>,
    pub warnings: Vec<String>,
}

/// Label recorded when a sort coercion fills a slot.
pub fn coercion_label(from: &Type, to: &Type) -> String {
    format!("<:{from}<{to}")
}

struct Ctx<'a> {
    lex: &'a Lexicon,
    next_leaf: usize,
    next_node: usize,
}

/// Composes `tree` into all readings. An empty list is a semantic rejection.
pub fn assemble(lex: &Lexicon, tree: &CompositionTree) -> Result<Vec<Reading>, AssemblyError> {
    Ok(assemble_report(lex, tree)?.readings)
}

/// Like [`assemble`], also reporting readings whose type is not `t`.
pub fn assemble_report(lex: &Lexicon, tree: &CompositionTree) -> Result<Assembly, AssemblyError> {
    for w in tree.words() {
        if lex.entry(w).is_none() {
            return Err(AssemblyError::UnknownWord(w.to_string()));
        }
    }
    let mut ctx = Ctx { lex, next_leaf: 0, next_node: 0 };
    let candidates = ctx.compose(tree);
    Ok(finish(lex, enforce_rigidity(candidates)))
}

impl Ctx<'_> {
    fn compose(&mut self, tree: &CompositionTree) -> Vec<Candidate> {
        let node = self.next_node;
        self.next_node += 1;
        match tree {
            CompositionTree::Leaf(w) => {
                let occ = self.next_leaf;
                self.next_leaf += 1;
                let e = self.lex.entry(w).expect("words checked before composition");
                vec![Candidate {
                    term: e.principal.clone(),
                    ty: e.principal_type.clone(),
                    anchor: Some((occ, w.clone())),
                    steps: vec![],
                }]
            }
            CompositionTree::Node(f, a) => {
                let fs = self.compose(f);
                let args = self.compose(a);
                let mut out = Vec::new();
                for fc in &fs {
                    for ac in &args {
                        out.extend(resolve_application(self.lex, fc, ac, node));
                    }
                }
                enforce_rigidity(out)
            }
        }
    }
}

fn step(anchor: &Option<(usize, String)>, m: &OptionalTerm, cluster: Option<usize>) -> TraceStep {
    TraceStep {
        occurrence: anchor.as_ref().map(|(o, _)| *o),
        word: anchor.as_ref().map(|(_, w)| w.clone()),
        label: m.label.clone(),
        flag: m.flag,
        cluster,
    }
}

fn entry_of<'a>(lex: &'a Lexicon, c: &Candidate) -> Option<&'a LexEntry> {
    c.anchor.as_ref().and_then(|(_, w)| lex.entry(w))
}

/// The modifiers available on a candidate: the anchor's identity and
/// optional terms with the right domain, or a bare identity when unanchored.
fn modifiers(lex: &Lexicon, c: &Candidate) -> Vec<OptionalTerm> {
    match entry_of(lex, c) {
        Some(e) => e.modifiers_from(&c.ty),
        None => vec![OptionalTerm::identity(&c.ty, Flag::Flexible)],
    }
}

fn modify(m: &OptionalTerm, t: &Term) -> Term {
    if m.is_identity() {
        t.clone()
    } else {
        normalize(&Term::app(m.term.clone(), t.clone()))
    }
}

/// Splits `Land{a}{b} P Q` into `(a, b)`.
fn poly_and_parts(t: &Term) -> Option<(Type, Type)> {
    let (head, args) = t.unspine();
    match (head, args.as_slice()) {
        (Term::Const(c, _), [SpineArg::Type(a), SpineArg::Type(b), SpineArg::Term(_), SpineArg::Term(_)])
            if c == names::POLY_AND =>
        {
            Some((a.clone(), b.clone()))
        }
        _ => None,
    }
}

/// Terms of type `xi -> target` that may fill a copredication slot.
fn slot_fillers(
    lex: &Lexicon,
    arg: &Candidate,
    target: &Type,
    cluster: usize,
) -> Vec<(Term, Option<TraceStep>)> {
    let xi = &arg.ty;
    let mut out = Vec::new();
    match entry_of(lex, arg) {
        Some(e) => {
            for m in e.modifiers_from(xi) {
                if type_eq(m.codomain(), target) {
                    out.push((m.term.clone(), Some(step(&arg.anchor, &m, Some(cluster)))));
                }
            }
        }
        None if type_eq(xi, target) => {
            out.push((OptionalTerm::identity(xi, Flag::Flexible).term, None));
        }
        None => {}
    }
    if !type_eq(xi, target) {
        if let Some(d) = derive_subtype(&lex.signature, xi, target) {
            let c = coercion_term(&d, "x");
            let m = OptionalTerm {
                label: coercion_label(xi, target),
                term: c.as_function(),
                flag: Flag::Flexible,
                ty: Type::arrow(xi.clone(), target.clone()),
            };
            let st = arg.anchor.as_ref().map(|_| step(&arg.anchor, &m, Some(cluster)));
            out.push((m.term, st));
        }
    }
    out
}

/// Applies `f` to `a`, inserting a sort coercion on `a` when needed.
fn coercive(lex: &Lexicon, f: &Term, fty: &Type, a: &Term, aty: &Type) -> Option<(Term, Type, String)> {
    let (dom, cod) = fty.as_arrow()?;
    if type_eq(dom, aty) {
        return None;
    }
    let d = derive_subtype(&lex.signature, aty, dom)?;
    let c = coercion_term(&d, "x");
    let term = normalize(&Term::app(f.clone(), c.apply(a)));
    Some((term, cod.clone(), coercion_label(aty, dom)))
}

/// Every way of applying `f` to `a`: directly (after instantiating
/// polymorphic functions) when the types agree, otherwise with a modifier on
/// the function and/or the argument, or a sort coercion on the argument. A
/// function of the shape `Land{a}{b} P Q` applied to an entity opens a
/// copredication cluster whose two slots are filled from the entity's
/// modifiers.
pub fn resolve_application(lex: &Lexicon, f: &Candidate, a: &Candidate, node: usize) -> Vec<Candidate> {
    let base_steps = || {
        let mut s = f.steps.clone();
        s.extend(a.steps.iter().cloned());
        s
    };
    if let Some((alpha, beta)) = poly_and_parts(&f.term) {
        let Some((applied, _)) = apply_instantiated(&f.term, &f.ty, &a.term, &a.ty) else {
            return vec![];
        };
        let mut out = Vec::new();
        for (ft, fs) in slot_fillers(lex, a, &alpha, node) {
            for (gt, gs) in slot_fillers(lex, a, &beta, node) {
                let term = normalize(&Term::apps(applied.clone(), [ft.clone(), gt]));
                let mut steps = base_steps();
                steps.extend(fs.iter().cloned());
                steps.extend(gs);
                out.push(Candidate { term, ty: Type::prop(), anchor: None, steps });
            }
        }
        return out;
    }

    let inherit = |ty: &Type| -> Option<(usize, String)> {
        let keeps = match a.ty.as_arrow() {
            Some((dom, cod)) => cod.is_prop() && type_eq(dom, ty),
            None => false,
        } || type_eq(&a.ty, ty);
        if keeps {
            a.anchor.clone()
        } else {
            None
        }
    };

    if let Some((term, ty)) = apply_instantiated(&f.term, &f.ty, &a.term, &a.ty) {
        let anchor = inherit(&ty);
        return vec![Candidate { term, ty, anchor, steps: base_steps() }];
    }

    let mut out = Vec::new();
    for mf in modifiers(lex, f) {
        for ma in modifiers(lex, a) {
            let (ft, fty) =
                (modify(&mf, &f.term), if mf.is_identity() { f.ty.clone() } else { mf.codomain().clone() });
            let (at, aty) =
                (modify(&ma, &a.term), if ma.is_identity() { a.ty.clone() } else { ma.codomain().clone() });
            let mut steps = base_steps();
            if !mf.is_identity() {
                steps.push(step(&f.anchor, &mf, None));
            }
            if !ma.is_identity() {
                steps.push(step(&a.anchor, &ma, None));
            }
            let both_identity = mf.is_identity() && ma.is_identity();
            if !both_identity {
                if let Some((term, ty)) = apply_instantiated(&ft, &fty, &at, &aty) {
                    out.push(Candidate { term, ty, anchor: None, steps });
                    continue;
                }
            }
            if let Some((term, ty, label)) = coercive(lex, &ft, &fty, &at, &aty) {
                steps.push(TraceStep {
                    occurrence: a.anchor.as_ref().map(|(o, _)| *o),
                    word: a.anchor.as_ref().map(|(_, w)| w.clone()),
                    label,
                    flag: Flag::Flexible,
                    cluster: None,
                });
                out.push(Candidate { term, ty, anchor: None, steps });
            }
        }
    }
    out
}

/// True when, for every word occurrence in every copredication cluster, the
/// slot modifiers are all flexible or all the same rigid modifier.
pub fn rigidity_ok(steps: &[TraceStep]) -> bool {
    let mut groups: BTreeMap<(usize, usize), Vec<&TraceStep>> = BTreeMap::new();
    for s in steps {
        if let (Some(o), Some(c)) = (s.occurrence, s.cluster) {
            groups.entry((o, c)).or_default().push(s);
        }
    }
    groups.values().all(|g| {
        g.iter().all(|s| s.flag == Flag::Flexible)
            || g.iter().all(|s| s.flag == Flag::Rigid && s.label == g[0].label)
    })
}

pub fn enforce_rigidity(candidates: Vec<Candidate>) -> Vec<Candidate> {
    candidates.into_iter().filter(|c| rigidity_ok(&c.steps)).collect()
}

fn finish(lex: &Lexicon, candidates: Vec<Candidate>) -> Assembly {
    let sig = &lex.signature;
    let mut by_form: BTreeMap<String, (Term, Type, Vec<Vec<TraceStep>>)> = BTreeMap::new();
    for c in candidates {
        let lf = normalize_in(sig, &c.term);
        let ty = match type_of(sig, &lf) {
            Ok(ty) => ty,
            Err(_) => continue,
        };
        let entry = by_form.entry(canonical_key(&lf)).or_insert_with(|| (lf, ty, Vec::new()));
        if !entry.2.contains(&c.steps) {
            entry.2.push(c.steps);
        }
    }
    let mut warnings = Vec::new();
    let mut readings: Vec<Reading> = by_form
        .into_values()
        .map(|(lf, ty, mut traces)| {
            traces.sort();
            let trace = traces.remove(0);
            if !ty.is_prop() {
                warnings.push(format!("reading {lf} has type {ty}, not t"));
            }
            Reading {
                presuppositions: presuppositions(&lf),
                typing_facts: typing_facts(sig, &lf),
                logical_form: lf,
                ty,
                trace,
                alternative_traces: traces,
            }
        })
        .collect();
    readings.sort_by(|a, b| {
        a.trace
            .cmp(&b.trace)
            .then_with(|| canonical_key(&a.logical_form).cmp(&canonical_key(&b.logical_form)))
    });
    warnings.sort();
    Assembly { readings, warnings }
}
