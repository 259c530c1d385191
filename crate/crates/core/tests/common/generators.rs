//! Seeded generators of well-typed terms and of coercion graphs with
//! derivable subtype pairs.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mglex::terms::{generic_element_type, names, quantifier_type, Signature, Term, Type};

/// A signature over `n` sorts `s0..` with a constant, a predicate, a unary
/// function to the next sort and a binary relation per sort.
pub fn term_signature(n: usize) -> Signature {
    let mut sig = Signature::new();
    for i in 0..n {
        sig.add_sort(format!("s{i}")).unwrap();
    }
    sig.add_constant("top", Type::prop()).unwrap();
    for i in 0..n {
        let s = Type::sort(format!("s{i}"));
        let next = Type::sort(format!("s{}", (i + 1) % n));
        sig.add_constant(format!("k{i}"), s.clone()).unwrap();
        sig.add_constant(format!("p{i}"), Type::pred(s.clone())).unwrap();
        sig.add_constant(format!("f{i}"), Type::arrow(s.clone(), next.clone())).unwrap();
        sig.add_constant(format!("r{i}"), Type::arrows([s, next], Type::prop())).unwrap();
    }
    sig
}

pub struct TermGen<'a> {
    pub sig: &'a Signature,
    pub rng: ChaCha8Rng,
    sorts: Vec<String>,
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

impl<'a> TermGen<'a> {
    pub fn new(sig: &'a Signature, rng: ChaCha8Rng) -> Self {
        let sorts = sig.sorts().filter(|s| *s != "t").map(String::from).collect();
        TermGen { sig, rng, sorts }
    }

    fn sort(&mut self) -> Type {
        Type::sort(self.sorts.choose(&mut self.rng).unwrap().clone())
    }

    pub fn ty(&mut self, depth: usize) -> Type {
        match self.rng.gen_range(0..if depth == 0 { 2 } else { 4 }) {
            0 => self.sort(),
            1 => Type::prop(),
            _ => Type::arrow(self.ty(depth - 1), self.ty(depth - 1)),
        }
    }

    /// A closed term of type `ty` of size roughly `budget`.
    pub fn closed(&mut self, ty: &Type, budget: usize) -> Term {
        self.term(ty, &mut Vec::new(), budget)
    }

    /// Like [`TermGen::closed`], resampling until the size is at most `max`.
    pub fn closed_at_most(&mut self, ty: &Type, budget: usize, max: usize) -> Term {
        loop {
            let t = self.closed(ty, budget);
            if t.size() <= max {
                return t;
            }
        }
    }

    fn visible<'e>(&self, env: &'e [(String, Type)]) -> Vec<&'e (String, Type)> {
        env.iter()
            .enumerate()
            .filter(|(i, (n, _))| !env[i + 1..].iter().any(|(m, _)| m == n))
            .map(|(_, b)| b)
            .collect()
    }

    fn name(&mut self) -> String {
        NAMES.choose(&mut self.rng).unwrap().to_string()
    }

    fn split(&mut self, budget: usize, parts: usize) -> Vec<usize> {
        let mut out = vec![0; parts];
        for _ in 0..budget.saturating_sub(1) {
            out[self.rng.gen_range(0..parts)] += 1;
        }
        out
    }

    fn atom(&mut self, ty: &Type, env: &mut Vec<(String, Type)>) -> Term {
        let vars: Vec<Term> = self
            .visible(env)
            .into_iter()
            .filter(|(_, t)| t == ty)
            .map(|(n, t)| Term::var(n.clone(), t.clone()))
            .collect();
        if let Some(v) = vars.choose(&mut self.rng) {
            if self.rng.gen_bool(0.7) {
                return v.clone();
            }
        }
        match ty {
            Type::Arrow(d, c) => {
                let x = self.name();
                env.push((x.clone(), (**d).clone()));
                let body = self.atom(c, env);
                env.pop();
                Term::lam(x, (**d).clone(), body)
            }
            Type::Sort(s) if s == "t" => self.sig.constant("top").unwrap(),
            Type::Sort(s) => {
                let i = &s[1..];
                self.sig.constant(&format!("k{i}")).unwrap()
            }
            _ => unreachable!("generated types are closed and monomorphic"),
        }
    }

    fn term(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, budget: usize) -> Term {
        if budget <= 2 {
            return self.atom(ty, env);
        }
        match self.rng.gen_range(0..10) {
            0..=2 => self.redex(ty, env, budget),
            3 => self.poly_redex(ty, env, budget),
            4 => self.spine_of_var(ty, env, budget).unwrap_or_else(|| self.structural(ty, env, budget)),
            _ => self.structural(ty, env, budget),
        }
    }

    fn redex(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, budget: usize) -> Term {
        let a = self.ty(1);
        let x = self.name();
        let b = self.split(budget - 1, 2);
        env.push((x.clone(), a.clone()));
        let body = self.term(ty, env, b[0]);
        env.pop();
        let arg = self.term(&a, env, b[1]);
        Term::app(Term::lam(x, a, body), arg)
    }

    /// `(Lam a. lam f:a->a. lam x:a. f (f x)){ty} g u` or the polymorphic
    /// identity, so that type redexes and duplicating redexes both occur.
    fn poly_redex(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, budget: usize) -> Term {
        let a = Type::var("a");
        if self.rng.gen_bool(0.5) {
            let id = Term::ty_lam("a", Term::lam("v", a.clone(), Term::var("v", a)));
            let arg = self.term(ty, env, budget - 1);
            return Term::app(Term::ty_app(id, ty.clone()), arg);
        }
        let fa = Type::arrow(a.clone(), a.clone());
        let twice = Term::ty_lam(
            "a",
            Term::lam(
                "g",
                fa.clone(),
                Term::lam(
                    "v",
                    a.clone(),
                    Term::app(Term::var("g", fa.clone()), Term::app(Term::var("g", fa), Term::var("v", a))),
                ),
            ),
        );
        let b = self.split(budget - 1, 2);
        let x = self.name();
        env.push((x.clone(), ty.clone()));
        let body = self.term(ty, env, b[0]);
        env.pop();
        let g = Term::lam(x, ty.clone(), body);
        let u = self.term(ty, env, b[1]);
        Term::apps(Term::ty_app(twice, ty.clone()), [g, u])
    }

    fn spine_of_var(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, budget: usize) -> Option<Term> {
        let heads: Vec<(String, Type, Vec<Type>)> = self
            .visible(env)
            .into_iter()
            .filter_map(|(n, t)| {
                let mut args = Vec::new();
                let mut cur = t;
                while let Type::Arrow(d, c) = cur {
                    args.push((**d).clone());
                    cur = c;
                    if cur == ty {
                        return Some((n.clone(), t.clone(), args));
                    }
                }
                None
            })
            .collect();
        let (n, t, args) = heads.choose(&mut self.rng)?.clone();
        let b = self.split(budget - 1, args.len());
        let args: Vec<Term> = args.iter().zip(b).map(|(a, k)| self.term(a, env, k)).collect();
        Some(Term::apps(Term::var(n, t), args))
    }

    fn structural(&mut self, ty: &Type, env: &mut Vec<(String, Type)>, budget: usize) -> Term {
        match ty {
            Type::Arrow(d, c) => {
                let x = self.name();
                env.push((x.clone(), (**d).clone()));
                let body = self.term(c, env, budget - 1);
                env.pop();
                Term::lam(x, (**d).clone(), body)
            }
            Type::Sort(s) if s == "t" => {
                let n = self.sorts.len();
                let i = self.rng.gen_range(0..n);
                let si = Type::sort(format!("s{i}"));
                match self.rng.gen_range(0..5) {
                    0 => Term::app(
                        self.sig.constant(&format!("p{i}")).unwrap(),
                        self.term(&si, env, budget - 1),
                    ),
                    1 => {
                        let b = self.split(budget - 1, 2);
                        let next = Type::sort(format!("s{}", (i + 1) % n));
                        let r = self.sig.constant(&format!("r{i}")).unwrap();
                        let (u, v) = (self.term(&si, env, b[0]), self.term(&next, env, b[1]));
                        Term::apps(r, [u, v])
                    }
                    2 => {
                        let b = self.split(budget - 1, 2);
                        let op = [names::AND, names::OR, names::IMPLIES].choose(&mut self.rng).unwrap();
                        let (u, v) = (self.term(ty, env, b[0]), self.term(ty, env, b[1]));
                        Term::apps(self.sig.constant(op).unwrap(), [u, v])
                    }
                    3 => Term::app(self.sig.constant(names::NOT).unwrap(), self.term(ty, env, budget - 1)),
                    _ => {
                        let q = [names::FORALL, names::EXISTS].choose(&mut self.rng).unwrap();
                        let x = self.name();
                        env.push((x.clone(), si.clone()));
                        let body = self.term(ty, env, budget - 2);
                        env.pop();
                        Term::app(
                            Term::ty_app(Term::constant(*q, quantifier_type()), si.clone()),
                            Term::lam(x, si, body),
                        )
                    }
                }
            }
            Type::Sort(s) if self.rng.gen_bool(0.3) => {
                let op = [names::IOTA, names::EPSILON, names::TAU].choose(&mut self.rng).unwrap();
                let x = self.name();
                env.push((x.clone(), ty.clone()));
                let body = self.term(&Type::prop(), env, budget - 2);
                env.pop();
                Term::app(
                    Term::ty_app(Term::constant(*op, generic_element_type()), ty.clone()),
                    Term::lam(x, ty.clone(), body),
                )
            }
            Type::Sort(s) => {
                let n = self.sorts.len();
                let i: usize = s[1..].parse().unwrap();
                let prev = (i + n - 1) % n;
                let f = self.sig.constant(&format!("f{prev}")).unwrap();
                Term::app(f, self.term(&Type::sort(format!("s{prev}")), env, budget - 1))
            }
            _ => unreachable!("generated types are closed and monomorphic"),
        }
    }
}

/// A random acyclic coercion graph on `n` sorts `d0..`, closed under
/// composition. Edges only go from lower to higher indices.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Signature {
    let mut sig = Signature::new();
    for i in 0..n {
        sig.add_sort(format!("d{i}")).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                sig.add_base_coercion(format!("d{i}"), format!("d{j}"), format!("c{i}{j}")).unwrap();
            }
        }
    }
    sig.close_base_coercions().unwrap();
    sig.validate().unwrap();
    sig
}

pub struct SubtypeGen<'a> {
    pub sig: &'a Signature,
    pub rng: &'a mut ChaCha8Rng,
}

impl SubtypeGen<'_> {
    fn sorts(&self) -> Vec<String> {
        self.sig.sorts().filter(|s| *s != "t").map(String::from).collect()
    }

    pub fn ty(&mut self, depth: usize) -> Type {
        if depth == 0 || self.rng.gen_bool(0.4) {
            let sorts = self.sorts();
            return Type::sort(sorts.choose(self.rng).unwrap().clone());
        }
        Type::arrow(self.ty(depth - 1), self.ty(depth - 1))
    }

    fn above(&mut self, s: &str) -> String {
        let ups: Vec<String> = self.sorts().into_iter().filter(|u| self.sig.reaches(s, u)).collect();
        ups.choose(self.rng).unwrap().clone()
    }

    fn below(&mut self, s: &str) -> String {
        let downs: Vec<String> = self.sorts().into_iter().filter(|d| self.sig.reaches(d, s)).collect();
        downs.choose(self.rng).unwrap().clone()
    }

    /// A type `T'` with `ty <= T'`.
    pub fn gen_super(&mut self, ty: &Type) -> Type {
        let out = match ty {
            Type::Sort(s) => Type::sort(self.above(s)),
            Type::Arrow(a, b) => Type::arrow(self.gen_sub(a), self.gen_super(b)),
            other => other.clone(),
        };
        if self.rng.gen_bool(0.1) {
            Type::forall("X", out)
        } else {
            out
        }
    }

    /// A type `S` with `S <= ty`.
    pub fn gen_sub(&mut self, ty: &Type) -> Type {
        let out = match ty {
            Type::Sort(s) => Type::sort(self.below(s)),
            Type::Arrow(a, b) => {
                if a == b && self.rng.gen_bool(0.2) {
                    return Type::forall("X", Type::arrow(Type::var("X"), Type::var("X")));
                }
                Type::arrow(self.gen_super(a), self.gen_sub(b))
            }
            other => other.clone(),
        };
        if self.rng.gen_bool(0.1) {
            Type::forall("Y", out)
        } else {
            out
        }
    }
}
