//! Bounded coherence check for the coercion graph of a signature.
//!
//! Derivations are enumerated by height over a finite universe of types: the
//! declared sorts (without `t`) and their vacuous quantifications `Pi X. e`.
//! Each derivation is represented by the normal form of its coercion, after
//! collapsing composed base coercions `c_jk (c_ij u)` into `c_ik u`. The
//! normal form of a compound coercion depends only on the normal forms of its
//! premises, so classes can be combined without keeping whole derivations.

use std::collections::HashMap;

use serde::Serialize;

use crate::terms::{Signature, Term, Type, PROP};

#[derive(Debug, Clone, Serialize)]
pub struct CoercionClass {
    /// Normal coercion, written over the source variable `x`.
    pub coercion: String,
    /// Number of derivations (saturating) that yield this coercion.
    pub derivations: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairReport {
    pub from: String,
    pub to: String,
    pub classes: Vec<CoercionClass>,
    /// The single class agrees with the declared coercion (identity when
    /// `from == to`).
    pub matches_declared: bool,
}

impl PairReport {
    pub fn is_coherent(&self) -> bool {
        self.classes.len() <= 1
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoherenceReport {
    pub depth: usize,
    pub pairs: Vec<PairReport>,
}

impl CoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.pairs.iter().all(|p| p.is_coherent() && p.matches_declared)
    }

    pub fn incoherent_pairs(&self) -> impl Iterator<Item = &PairReport> {
        self.pairs.iter().filter(|p| !p.is_coherent() || !p.matches_declared)
    }

    pub fn pair(&self, from: &str, to: &str) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.from == from && p.to == to)
    }

    /// All distinct normal coercions across base pairs.
    pub fn distinct_coercions(&self) -> usize {
        self.pairs.iter().map(|p| p.classes.len()).sum()
    }
}

const SRC: &str = "x";
const TV: &str = "X";

/// Normal form of a coercion over the universe, written over the source
/// variable: an optional outer `Lam X.`, a chain of base coercions (outermost
/// first) and the source, possibly instantiated at a witness sort.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Nf {
    lam: bool,
    chain: Vec<usize>,
    witness: Option<usize>,
}

struct Graph<'a> {
    sig: &'a Signature,
    sorts: Vec<String>,
}

impl Graph<'_> {
    /// Pushes coercion `outer` on top of `chain`, merging `c_jk (c_ij u)`
    /// into `c_ik u` when the composite is declared.
    fn push(&self, outer: usize, mut chain: Vec<usize>) -> Vec<usize> {
        let edges = self.sig.base_coercions();
        if let Some(&inner) = chain.first() {
            let (c1, c2) = (&edges[inner], &edges[outer]);
            if c1.to == c2.from {
                if let Some(k) = edges.iter().position(|c| c.from == c1.from && c.to == c2.to) {
                    chain.remove(0);
                    return self.push(k, chain);
                }
            }
        }
        chain.insert(0, outer);
        chain
    }

    /// `outer[x := inner]`, normalized.
    fn compose(&self, inner: &Nf, outer: &Nf) -> Nf {
        let mut base = match outer.witness {
            None => inner.clone(),
            // (Lam X. u){w} reduces to u; a bare source takes the witness.
            Some(_) if inner.lam => Nf { lam: false, ..inner.clone() },
            Some(w) => Nf { witness: Some(w), ..inner.clone() },
        };
        for &c in outer.chain.iter().rev() {
            base.chain = self.push(c, std::mem::take(&mut base.chain));
        }
        base.lam |= outer.lam;
        base
    }

    fn term(&self, nf: &Nf, source: &Type) -> Term {
        let edges = self.sig.base_coercions();
        let mut t = Term::var(SRC, source.clone());
        if let Some(w) = nf.witness {
            t = Term::ty_app(t, Type::sort(&self.sorts[w]));
        }
        for &c in nf.chain.iter().rev() {
            let e = &edges[c];
            t = Term::app(
                Term::constant(e.name.clone(), Type::arrow(Type::sort(&e.from), Type::sort(&e.to))),
                t,
            );
        }
        if nf.lam {
            t = Term::ty_lam(TV, t);
        }
        t
    }
}

struct Interner {
    forms: Vec<Nf>,
    ids: HashMap<Nf, usize>,
}

impl Interner {
    fn intern(&mut self, nf: Nf) -> usize {
        if let Some(&id) = self.ids.get(&nf) {
            return id;
        }
        let id = self.forms.len();
        self.forms.push(nf.clone());
        self.ids.insert(nf, id);
        id
    }
}

/// Coercion classes of one cell with their derivation counts.
type Classes = Vec<(usize, u128)>;

fn add(classes: &mut Classes, id: usize, n: u128) {
    match classes.iter_mut().find(|(c, _)| *c == id) {
        Some((_, m)) => *m = m.saturating_add(n),
        None => classes.push((id, n)),
    }
}

/// Memo table indexed by a pair of small integers.
struct Memo(Vec<Vec<usize>>);

impl Memo {
    const EMPTY: usize = usize::MAX;

    fn get_or(&mut self, a: usize, b: usize, f: impl FnOnce() -> usize) -> usize {
        if self.0.len() <= a {
            self.0.resize(a + 1, Vec::new());
        }
        let row = &mut self.0[a];
        if row.len() <= b {
            row.resize(b + 1, Memo::EMPTY);
        }
        if row[b] == Memo::EMPTY {
            row[b] = f();
        }
        row[b]
    }
}

/// Checks that all derivations of height at most `max_depth` between base
/// sorts yield the same coercion.
#[allow(clippy::needless_range_loop)]
pub fn check_coherence(sig: &Signature, max_depth: usize) -> CoherenceReport {
    let sorts: Vec<String> = sig.sorts().filter(|s| *s != PROP).map(str::to_string).collect();
    let n = sorts.len();
    let g = Graph { sig, sorts };
    let sorts = &g.sorts;
    // Universe indices: 0..n sorts, n..2n their quantifications.
    let ty_of = |i: usize| -> Type {
        if i < n {
            Type::sort(&sorts[i])
        } else {
            Type::forall(TV, Type::sort(&sorts[i - n]))
        }
    };
    let size = 2 * n;
    let mut interner = Interner { forms: Vec::new(), ids: HashMap::new() };

    let identity = interner.intern(Nf { lam: false, chain: vec![], witness: None });
    let mut leaves: Vec<Vec<Classes>> = vec![vec![Classes::new(); size]; size];
    for (i, row) in leaves.iter_mut().enumerate() {
        row[i].push((identity, 1));
    }
    for (k, c) in sig.base_coercions().iter().enumerate() {
        let (Some(i), Some(j)) =
            (sorts.iter().position(|s| *s == c.from), sorts.iter().position(|s| *s == c.to))
        else {
            continue;
        };
        let id = interner.intern(Nf { lam: false, chain: vec![k], witness: None });
        add(&mut leaves[i][j], id, 1);
    }

    let mut compose = Memo(Vec::new());
    let mut intro = Memo(Vec::new());
    let mut elim = Memo(Vec::new());

    let mut level = if max_depth == 0 { vec![vec![Classes::new(); size]; size] } else { leaves.clone() };
    for _ in 1..max_depth {
        let mut next = leaves.clone();
        // Transitivity.
        for i in 0..size {
            for j in 0..size {
                if level[i][j].is_empty() {
                    continue;
                }
                for k in 0..size {
                    if level[j][k].is_empty() {
                        continue;
                    }
                    for &(a, ca) in &level[i][j] {
                        for &(b, cb) in &level[j][k] {
                            let id = compose.get_or(a, b, || {
                                let nf = g.compose(&interner.forms[a], &interner.forms[b]);
                                interner.intern(nf)
                            });
                            add(&mut next[i][k], id, ca.saturating_mul(cb));
                        }
                    }
                }
            }
        }
        for i in 0..size {
            // Introduction: i < e  gives  i < Pi X. e.
            for j in 0..n {
                for &(a, ca) in &level[i][j] {
                    let id = intro.get_or(a, 0, || {
                        let nf = Nf { lam: true, ..interner.forms[a].clone() };
                        interner.intern(nf)
                    });
                    add(&mut next[i][n + j], id, ca);
                }
            }
            // Elimination: i < Pi X. e  gives  i < e, one derivation per
            // witness sort.
            for j in 0..n {
                for &(a, ca) in &level[i][n + j] {
                    for w in 0..n {
                        let id = elim.get_or(a, w, || {
                            let applied = Nf { lam: false, chain: vec![], witness: Some(w) };
                            let nf = g.compose(&interner.forms[a], &applied);
                            interner.intern(nf)
                        });
                        add(&mut next[i][j], id, ca);
                    }
                }
            }
        }
        level = next;
    }

    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if level[i][j].is_empty() {
                continue;
            }
            let mut classes: Vec<(String, u128, Term)> = level[i][j]
                .iter()
                .map(|&(id, c)| {
                    let t = g.term(&interner.forms[id], &ty_of(i));
                    (t.to_string(), c, t)
                })
                .collect();
            classes.sort_by(|a, b| a.0.cmp(&b.0));
            let declared = if i == j {
                Some(Term::var(SRC, ty_of(i)))
            } else {
                sig.coercion_between(&sorts[i], &sorts[j]).map(|c| {
                    Term::app(
                        Term::constant(c.name.clone(), Type::arrow(ty_of(i), ty_of(j))),
                        Term::var(SRC, ty_of(i)),
                    )
                })
            };
            let matches_declared = classes.len() == 1 && declared.is_some_and(|d| d == classes[0].2);
            pairs.push(PairReport {
                from: sorts[i].clone(),
                to: sorts[j].clone(),
                classes: classes
                    .into_iter()
                    .map(|(coercion, derivations, _)| CoercionClass { coercion, derivations })
                    .collect(),
                matches_declared,
            });
        }
    }
    CoherenceReport { depth: max_depth, pairs }
}
