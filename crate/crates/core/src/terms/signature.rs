//! Declared sorts, typed constants, definitional constants and the graph of
//! base coercions between sorts.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::check::{check_type, TypeError};
use super::term::Term;
use super::types::{type_eq, Type, PROP};

/// Names of the built-in logical vocabulary.
pub mod names {
    pub const AND: &str = "and";
    pub const OR: &str = "or";
    pub const IMPLIES: &str = "implies";
    pub const NOT: &str = "not";
    pub const FORALL: &str = "forall";
    pub const EXISTS: &str = "exists";
    pub const IOTA: &str = "iota";
    pub const EPSILON: &str = "epsilon";
    pub const TAU: &str = "tau";
    /// Indefinite generic element; an epsilon with its own display name.
    pub const ETA: &str = "eta";
    pub const MOST: &str = "most";
    pub const EQ: &str = "eq";
    /// Polymorphic conjunction used for copredication.
    pub const POLY_AND: &str = "Land";
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignatureError {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("duplicate sort `{0}`")]
    DuplicateSort(String),
    #[error("duplicate constant `{0}`")]
    DuplicateConstant(String),
    #[error("constant `{0}` must have a closed type")]
    OpenConstantType(String),
    #[error("base coercion `{name}` from `{from}` to itself")]
    ReflexiveCoercion { from: String, name: String },
    #[error("second base coercion between `{from}` and `{to}`")]
    DuplicateCoercion { from: String, to: String },
    #[error("base coercion `{name}` from `{from}` to `{to}` closes a cycle")]
    CyclicCoercion { from: String, to: String, name: String },
    #[error("base coercions not closed under composition: missing `{from}` < `{to}`")]
    NotComposable { from: String, to: String },
    #[error("definition `{name}` is ill-typed: {source}")]
    IllTypedDefinition { name: String, source: TypeError },
    #[error("definition `{name}` has type {found}, declared {declared}")]
    DefinitionTypeMismatch { name: String, declared: Type, found: Type },
    #[error("definition `{0}` must be closed")]
    OpenDefinition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BaseCoercion {
    pub from: String,
    pub to: String,
    pub name: String,
}

/// A sort-recognising predicate: `predicate` holds of exactly the `sort` entities.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SortPredicate {
    pub predicate: String,
    pub sort: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signature {
    sorts: BTreeSet<String>,
    constants: BTreeMap<String, Type>,
    definitions: BTreeMap<String, Term>,
    definition_order: Vec<String>,
    coercions: Vec<BaseCoercion>,
    sort_predicates: Vec<SortPredicate>,
    builtin: BTreeSet<String>,
    extensions: Vec<String>,
}

fn a() -> Type {
    Type::var("a")
}

/// `Pi a. (a -> t) -> t`
pub fn quantifier_type() -> Type {
    Type::forall("a", Type::arrow(Type::pred(a()), Type::prop()))
}

/// `Pi a. (a -> t) -> a`
pub fn generic_element_type() -> Type {
    Type::forall("a", Type::arrow(Type::pred(a()), a()))
}

/// `Pi a. Pi b. (a -> t) -> (b -> t) -> Pi x. x -> (x -> a) -> (x -> b) -> t`
pub fn poly_and_type() -> Type {
    let xi = Type::var("x");
    Type::forall(
        "a",
        Type::forall(
            "b",
            Type::arrows(
                [Type::pred(a()), Type::pred(Type::var("b"))],
                Type::forall(
                    "x",
                    Type::arrows(
                        [xi.clone(), Type::arrow(xi.clone(), a()), Type::arrow(xi, Type::var("b"))],
                        Type::prop(),
                    ),
                ),
            ),
        ),
    )
}

/// The body of the polymorphic conjunction:
/// `Lam a. Lam b. lam P. lam Q. Lam x. lam y:x. lam f. lam g. and (P (f y)) (Q (g y))`.
pub fn poly_and_body() -> Term {
    let (al, be, xi) = (Type::var("a"), Type::var("b"), Type::var("x"));
    let p = Term::var("P", Type::pred(al.clone()));
    let q = Term::var("Q", Type::pred(be.clone()));
    let f = Term::var("f", Type::arrow(xi.clone(), al.clone()));
    let g = Term::var("g", Type::arrow(xi.clone(), be.clone()));
    let y = Term::var("y", xi.clone());
    let and = Term::constant(names::AND, Type::arrows([Type::prop(), Type::prop()], Type::prop()));
    let body = Term::apps(and, [Term::app(p, Term::app(f, y.clone())), Term::app(q, Term::app(g, y))]);
    Term::ty_lam(
        "a",
        Term::ty_lam(
            "b",
            Term::lam(
                "P",
                Type::pred(al.clone()),
                Term::lam(
                    "Q",
                    Type::pred(be.clone()),
                    Term::ty_lam(
                        "x",
                        Term::lam(
                            "y",
                            xi.clone(),
                            Term::lam(
                                "f",
                                Type::arrow(xi.clone(), al),
                                Term::lam("g", Type::arrow(xi, be), body),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )
}

impl Default for Signature {
    fn default() -> Self {
        Self::new()
    }
}

impl Signature {
    /// A signature holding `t` and the logical vocabulary.
    pub fn new() -> Signature {
        let mut sig = Signature {
            sorts: BTreeSet::from([PROP.to_string()]),
            constants: BTreeMap::new(),
            definitions: BTreeMap::new(),
            definition_order: Vec::new(),
            coercions: Vec::new(),
            sort_predicates: Vec::new(),
            builtin: BTreeSet::new(),
            extensions: Vec::new(),
        };
        let t = Type::prop;
        let binary = Type::arrows([t(), t()], t());
        for c in [names::AND, names::OR, names::IMPLIES] {
            sig.insert_builtin(c, binary.clone());
        }
        sig.insert_builtin(names::NOT, Type::arrow(t(), t()));
        for q in [names::FORALL, names::EXISTS] {
            sig.insert_builtin(q, quantifier_type());
        }
        for h in [names::IOTA, names::EPSILON, names::TAU, names::ETA, names::MOST] {
            sig.insert_builtin(h, generic_element_type());
        }
        sig.insert_builtin(names::EQ, Type::forall("a", Type::arrows([a(), a()], t())));
        sig.define(names::POLY_AND, poly_and_type(), poly_and_body())
            .expect("polymorphic conjunction is well-typed");
        sig.builtin.insert(names::POLY_AND.to_string());
        sig
    }

    fn insert_builtin(&mut self, name: &str, ty: Type) {
        self.constants.insert(name.to_string(), ty);
        self.builtin.insert(name.to_string());
    }

    pub fn sorts(&self) -> impl Iterator<Item = &str> {
        self.sorts.iter().map(String::as_str)
    }

    pub fn has_sort(&self, s: &str) -> bool {
        self.sorts.contains(s)
    }

    pub fn add_sort(&mut self, s: impl Into<String>) -> Result<(), SignatureError> {
        let s = s.into();
        if !self.sorts.insert(s.clone()) {
            return Err(SignatureError::DuplicateSort(s));
        }
        Ok(())
    }

    /// Adds the sort unless already present.
    pub fn ensure_sort(&mut self, s: impl Into<String>) {
        self.sorts.insert(s.into());
    }

    /// Checks that every sort is declared and no type variable is free.
    pub fn check_closed_type(&self, ty: &Type) -> Result<(), SignatureError> {
        let mut sorts = BTreeSet::new();
        ty.sorts(&mut sorts);
        if let Some(s) = sorts.into_iter().find(|s| !self.sorts.contains(s)) {
            return Err(SignatureError::UnknownSort(s));
        }
        if let Some(v) = ty.free_vars().into_iter().next() {
            return Err(SignatureError::UnknownSort(v));
        }
        Ok(())
    }

    pub fn add_constant(&mut self, name: impl Into<String>, ty: Type) -> Result<(), SignatureError> {
        let name = name.into();
        if self.constants.contains_key(&name) {
            return Err(SignatureError::DuplicateConstant(name));
        }
        self.check_closed_type(&ty)?;
        self.constants.insert(name, ty);
        Ok(())
    }

    pub fn constant_type(&self, name: &str) -> Option<&Type> {
        self.constants.get(name)
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.constants.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// A constant term for a declared name.
    pub fn constant(&self, name: &str) -> Option<Term> {
        self.constants.get(name).map(|ty| Term::constant(name, ty.clone()))
    }

    pub fn is_builtin(&self, name: &str) -> bool {
        self.builtin.contains(name)
    }

    pub(crate) fn mark_builtin(&mut self, name: &str) {
        self.builtin.insert(name.to_string());
    }

    /// Declares a constant together with a closed definition body that
    /// unfolds during normalisation. The body may only mention constants
    /// that already exist, so definitions are never recursive.
    pub fn define(&mut self, name: impl Into<String>, ty: Type, body: Term) -> Result<(), SignatureError> {
        let name = name.into();
        if self.constants.contains_key(&name) {
            return Err(SignatureError::DuplicateConstant(name));
        }
        self.check_closed_type(&ty)?;
        if !body.free_vars().is_empty() || !body.free_type_vars().is_empty() {
            return Err(SignatureError::OpenDefinition(name));
        }
        let found = check_type(self, &Default::default(), &body)
            .map_err(|source| SignatureError::IllTypedDefinition { name: name.clone(), source })?;
        if !type_eq(&found, &ty) {
            return Err(SignatureError::DefinitionTypeMismatch { name, declared: ty, found });
        }
        self.constants.insert(name.clone(), ty);
        self.definition_order.push(name.clone());
        self.definitions.insert(name, body);
        Ok(())
    }

    pub fn definition(&self, name: &str) -> Option<&Term> {
        self.definitions.get(name)
    }

    /// Definitions in the order they were made.
    pub fn definitions(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.definition_order.iter().map(|k| (k.as_str(), &self.definitions[k]))
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.definitions.contains_key(name)
    }

    /// Adds an edge `from < to` witnessed by the constant `name : from -> to`.
    /// Closure under composition is checked separately by [`Signature::validate`].
    pub fn add_base_coercion(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        name: impl Into<String>,
    ) -> Result<(), SignatureError> {
        let (from, to, name) = (from.into(), to.into(), name.into());
        for s in [&from, &to] {
            if !self.sorts.contains(s) {
                return Err(SignatureError::UnknownSort(s.clone()));
            }
        }
        if from == to {
            return Err(SignatureError::ReflexiveCoercion { from, name });
        }
        if self.coercion_between(&from, &to).is_some() {
            return Err(SignatureError::DuplicateCoercion { from, to });
        }
        if self.reaches(&to, &from) {
            return Err(SignatureError::CyclicCoercion { from, to, name });
        }
        self.add_constant(name.clone(), Type::arrow(Type::sort(&from), Type::sort(&to)))?;
        self.coercions.push(BaseCoercion { from, to, name });
        Ok(())
    }

    pub fn base_coercions(&self) -> &[BaseCoercion] {
        &self.coercions
    }

    pub fn coercion_between(&self, from: &str, to: &str) -> Option<&BaseCoercion> {
        self.coercions.iter().find(|c| c.from == from && c.to == to)
    }

    pub fn coercion_named(&self, name: &str) -> Option<&BaseCoercion> {
        self.coercions.iter().find(|c| c.name == name)
    }

    /// Reflexive-transitive reachability in the coercion graph.
    pub fn reaches(&self, from: &str, to: &str) -> bool {
        self.coercion_path(from, to).is_some()
    }

    /// Shortest chain of base coercions from `from` to `to` (empty if equal).
    pub fn coercion_path(&self, from: &str, to: &str) -> Option<Vec<&BaseCoercion>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut prev: BTreeMap<&str, &BaseCoercion> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(cur) = queue.pop_front() {
            for c in self.coercions.iter().filter(|c| c.from == cur) {
                if seen.insert(c.to.as_str()) {
                    prev.insert(c.to.as_str(), c);
                    if c.to == to {
                        let mut path = vec![c];
                        let mut at = c.from.as_str();
                        while at != from {
                            let p = prev[at];
                            path.push(p);
                            at = p.from.as_str();
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(c.to.as_str());
                }
            }
        }
        None
    }

    /// Checks that the coercion graph is closed under composition:
    /// whenever `i < j < k`, an edge `i < k` exists.
    pub fn validate(&self) -> Result<(), SignatureError> {
        for c1 in &self.coercions {
            for c2 in self.coercions.iter().filter(|c| c.from == c1.to) {
                if self.coercion_between(&c1.from, &c2.to).is_none() {
                    return Err(SignatureError::NotComposable { from: c1.from.clone(), to: c2.to.clone() });
                }
            }
        }
        Ok(())
    }

    /// Adds the missing composite edges, named `c_<from>_<to>`.
    pub fn close_base_coercions(&mut self) -> Result<(), SignatureError> {
        loop {
            let missing = self.coercions.iter().find_map(|c1| {
                self.coercions
                    .iter()
                    .filter(|c2| c2.from == c1.to)
                    .find(|c2| self.coercion_between(&c1.from, &c2.to).is_none())
                    .map(|c2| (c1.from.clone(), c2.to.clone()))
            });
            let Some((from, to)) = missing else { return Ok(()) };
            let mut name = format!("c_{from}_{to}");
            while self.constants.contains_key(&name) {
                name.push('\'');
            }
            self.add_base_coercion(from, to, name)?;
        }
    }

    pub fn add_sort_predicate(&mut self, p: SortPredicate) -> Result<(), SignatureError> {
        if !self.sorts.contains(&p.sort) {
            return Err(SignatureError::UnknownSort(p.sort));
        }
        self.sort_predicates.push(p);
        Ok(())
    }

    pub fn sort_predicates(&self) -> &[SortPredicate] {
        &self.sort_predicates
    }

    /// The sort recognised by a predicate constant, if declared.
    pub fn sort_of_predicate(&self, pred: &str) -> Option<&str> {
        self.sort_predicates.iter().find(|p| p.predicate == pred).map(|p| p.sort.as_str())
    }

    pub fn extensions(&self) -> &[String] {
        &self.extensions
    }

    pub(crate) fn record_extension(&mut self, name: &str) {
        if !self.extensions.iter().any(|e| e == name) {
            self.extensions.push(name.to_string());
        }
    }
}
