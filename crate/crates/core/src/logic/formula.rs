use std::collections::BTreeSet;

use thiserror::Error;

use crate::reduction::{annotated_type, is_normal};
use crate::terms::{
    fresh_name, generic_element_type, names, quantifier_type, Signature, SpineArg, Term, Type,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
    Implies,
}

/// Generic-element operators of type `Pi a. (a -> t) -> a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HilbertOp {
    Iota,
    Epsilon,
    Tau,
    Eta,
    Most,
}

impl Quantifier {
    pub fn constant(self) -> &'static str {
        match self {
            Quantifier::Forall => names::FORALL,
            Quantifier::Exists => names::EXISTS,
        }
    }
}

impl Connective {
    pub fn constant(self) -> &'static str {
        match self {
            Connective::And => names::AND,
            Connective::Or => names::OR,
            Connective::Implies => names::IMPLIES,
        }
    }
}

impl HilbertOp {
    pub const ALL: [HilbertOp; 5] =
        [HilbertOp::Iota, HilbertOp::Epsilon, HilbertOp::Tau, HilbertOp::Eta, HilbertOp::Most];

    pub fn constant(self) -> &'static str {
        match self {
            HilbertOp::Iota => names::IOTA,
            HilbertOp::Epsilon => names::EPSILON,
            HilbertOp::Tau => names::TAU,
            HilbertOp::Eta => names::ETA,
            HilbertOp::Most => names::MOST,
        }
    }

    pub fn from_constant(c: &str) -> Option<HilbertOp> {
        HilbertOp::ALL.into_iter().find(|op| op.constant() == c)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub var: String,
    pub ty: Type,
}

/// Terms inside formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(String, Type),
    /// A non-logical constant, with its annotation and any type arguments.
    Const {
        name: String,
        ty: Type,
        ty_args: Vec<Type>,
    },
    Apply(Box<Expr>, Vec<Expr>),
    Hilbert {
        op: HilbertOp,
        ty: Type,
        pred: Box<Expr>,
    },
    Lambda(Binding, Box<Expr>),
    /// A proposition in term position, e.g. the body of a predicate.
    Prop(Box<Formula>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom { pred: Expr, args: Vec<Expr> },
    Eq { ty: Type, lhs: Expr, rhs: Expr },
    Not(Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Binding, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogicError {
    #[error("`{0}` cannot head a formula or term")]
    NonLogicalHead(String),
    #[error("term is not beta-normal")]
    NotNormal,
    #[error("term is not of type t")]
    NotAProposition,
    #[error("unsupported construct: {0}")]
    Unsupported(String),
}

fn is_logical(c: &str) -> bool {
    [names::AND, names::OR, names::IMPLIES, names::NOT, names::FORALL, names::EXISTS, names::EQ].contains(&c)
}

/// Translates a beta-normal term of type `t` into a formula. Quantifier
/// arguments that are not abstractions are eta-expanded.
pub fn term_to_formula(sig: &Signature, term: &Term) -> Result<Formula, LogicError> {
    if !is_normal(term) {
        return Err(LogicError::NotNormal);
    }
    if !annotated_type(term).is_some_and(|t| t.is_prop()) {
        return Err(LogicError::NotAProposition);
    }
    let mut avoid = BTreeSet::new();
    term.all_names(&mut avoid);
    Converter { sig, avoid }.formula(term)
}

struct Converter<'a> {
    sig: &'a Signature,
    avoid: BTreeSet<String>,
}

impl Converter<'_> {
    fn formula(&mut self, t: &Term) -> Result<Formula, LogicError> {
        let (head, args) = t.unspine();
        match head {
            Term::Const(c, _) if is_logical(c) => self.logical(c, &args),
            Term::Const(c, ty) => {
                if self.sig.is_defined(c) {
                    return Err(LogicError::NonLogicalHead(c.clone()));
                }
                let (pred, rest) = self.head_expr(c, ty, &args)?;
                Ok(Formula::Atom { pred, args: rest })
            }
            Term::Var(x, ty) => {
                let args = self.term_args(&args)?;
                Ok(Formula::Atom { pred: Expr::Var(x.clone(), ty.clone()), args })
            }
            Term::Lam(..) | Term::TyLam(..) => Err(LogicError::NotNormal),
            _ => unreachable!("unspine returns a head"),
        }
    }

    fn logical(&mut self, c: &str, args: &[SpineArg]) -> Result<Formula, LogicError> {
        let bad = || LogicError::NonLogicalHead(c.to_string());
        match (c, args) {
            (names::NOT, [SpineArg::Term(a)]) => Ok(Formula::Not(Box::new(self.formula(a)?))),
            (names::AND | names::OR | names::IMPLIES, [SpineArg::Term(a), SpineArg::Term(b)]) => {
                let conn = match c {
                    names::AND => Connective::And,
                    names::OR => Connective::Or,
                    _ => Connective::Implies,
                };
                Ok(Formula::Binary(conn, Box::new(self.formula(a)?), Box::new(self.formula(b)?)))
            }
            (names::FORALL | names::EXISTS, [SpineArg::Type(ty), SpineArg::Term(p)]) => {
                let q = if c == names::FORALL { Quantifier::Forall } else { Quantifier::Exists };
                let (var, body) = match p {
                    Term::Lam(x, _, body) => (x.clone(), (**body).clone()),
                    _ => {
                        let x = fresh_name("x", &self.avoid);
                        self.avoid.insert(x.clone());
                        (x.clone(), Term::app(p.clone(), Term::var(x, ty.clone())))
                    }
                };
                let body = self.formula(&body)?;
                Ok(Formula::Quant(q, Binding { var, ty: ty.clone() }, Box::new(body)))
            }
            (names::EQ, [SpineArg::Type(ty), SpineArg::Term(a), SpineArg::Term(b)]) => {
                Ok(Formula::Eq { ty: ty.clone(), lhs: self.expr(a)?, rhs: self.expr(b)? })
            }
            _ => Err(bad()),
        }
    }

    fn term_args(&mut self, args: &[SpineArg]) -> Result<Vec<Expr>, LogicError> {
        args.iter()
            .map(|a| match a {
                SpineArg::Term(t) => self.expr(t),
                SpineArg::Type(_) => {
                    Err(LogicError::Unsupported("type argument after term arguments".into()))
                }
            })
            .collect()
    }

    /// The head expression of a constant-headed spine and the remaining
    /// term arguments.
    fn head_expr(&mut self, c: &str, ty: &Type, args: &[SpineArg]) -> Result<(Expr, Vec<Expr>), LogicError> {
        if let Some(op) = HilbertOp::from_constant(c) {
            return match args {
                [SpineArg::Type(a), SpineArg::Term(p), rest @ ..] => {
                    let h = Expr::Hilbert { op, ty: a.clone(), pred: Box::new(self.expr(p)?) };
                    Ok((h, self.term_args(rest)?))
                }
                _ => Err(LogicError::NonLogicalHead(c.to_string())),
            };
        }
        if self.sig.is_defined(c) || is_logical(c) {
            return Err(LogicError::NonLogicalHead(c.to_string()));
        }
        let n = args.iter().take_while(|a| matches!(a, SpineArg::Type(_))).count();
        let ty_args = args[..n]
            .iter()
            .map(|a| match a {
                SpineArg::Type(t) => t.clone(),
                SpineArg::Term(_) => unreachable!(),
            })
            .collect();
        let head = Expr::Const { name: c.to_string(), ty: ty.clone(), ty_args };
        Ok((head, self.term_args(&args[n..])?))
    }

    fn expr(&mut self, t: &Term) -> Result<Expr, LogicError> {
        if annotated_type(t).is_some_and(|ty| ty.is_prop()) {
            return Ok(Expr::Prop(Box::new(self.formula(t)?)));
        }
        match t {
            Term::Lam(x, ty, b) => {
                Ok(Expr::Lambda(Binding { var: x.clone(), ty: ty.clone() }, Box::new(self.expr(b)?)))
            }
            Term::TyLam(..) => Err(LogicError::Unsupported("type abstraction inside a formula".into())),
            _ => {
                let (head, args) = t.unspine();
                let (h, rest) = match head {
                    Term::Const(c, ty) => self.head_expr(c, ty, &args)?,
                    Term::Var(x, ty) => (Expr::Var(x.clone(), ty.clone()), self.term_args(&args)?),
                    _ => return Err(LogicError::NotNormal),
                };
                Ok(if rest.is_empty() { h } else { Expr::Apply(Box::new(h), rest) })
            }
        }
    }
}

fn logical_const(c: &str) -> Term {
    let t = Type::prop;
    let ty = match c {
        names::NOT => Type::arrow(t(), t()),
        names::FORALL | names::EXISTS => quantifier_type(),
        names::EQ => Type::forall("a", Type::arrows([Type::var("a"), Type::var("a")], t())),
        _ => Type::arrows([t(), t()], t()),
    };
    Term::constant(c, ty)
}

impl Expr {
    pub fn to_term(&self) -> Term {
        match self {
            Expr::Var(x, ty) => Term::var(x.clone(), ty.clone()),
            Expr::Const { name, ty, ty_args } => ty_args
                .iter()
                .fold(Term::constant(name.clone(), ty.clone()), |acc, a| Term::ty_app(acc, a.clone())),
            Expr::Apply(h, args) => Term::apps(h.to_term(), args.iter().map(Expr::to_term)),
            Expr::Hilbert { op, ty, pred } => Term::app(
                Term::ty_app(Term::constant(op.constant(), generic_element_type()), ty.clone()),
                pred.to_term(),
            ),
            Expr::Lambda(b, body) => Term::lam(b.var.clone(), b.ty.clone(), body.to_term()),
            Expr::Prop(f) => f.to_term(),
        }
    }

    /// Removes double negations and contracts `lam x. f(.., x)` to `f(..)`.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Apply(h, args) => {
                Expr::Apply(Box::new(h.simplify()), args.iter().map(Expr::simplify).collect())
            }
            Expr::Hilbert { op, ty, pred } => {
                Expr::Hilbert { op: *op, ty: ty.clone(), pred: Box::new(pred.simplify()) }
            }
            Expr::Prop(f) => Expr::Prop(Box::new(f.simplify())),
            Expr::Lambda(b, body) => {
                let body = body.simplify();
                if let Expr::Prop(f) = &body {
                    if let Formula::Atom { pred, args } = &**f {
                        if let Some((Expr::Var(x, _), init)) = args.split_last() {
                            let mentions = |e: &Expr| e.to_term().has_free_var(&b.var);
                            if *x == b.var && !mentions(pred) && !init.iter().any(mentions) {
                                return if init.is_empty() {
                                    pred.clone()
                                } else {
                                    Expr::Apply(Box::new(pred.clone()), init.to_vec())
                                };
                            }
                        }
                    }
                }
                Expr::Lambda(b.clone(), Box::new(body))
            }
            _ => self.clone(),
        }
    }
}

impl Formula {
    /// The term this formula stands for; the inverse of [`term_to_formula`]
    /// up to eta-expansion of quantifier arguments.
    pub fn to_term(&self) -> Term {
        match self {
            Formula::Atom { pred, args } => Term::apps(pred.to_term(), args.iter().map(Expr::to_term)),
            Formula::Eq { ty, lhs, rhs } => {
                Term::apps(Term::ty_app(logical_const(names::EQ), ty.clone()), [lhs.to_term(), rhs.to_term()])
            }
            Formula::Not(f) => Term::app(logical_const(names::NOT), f.to_term()),
            Formula::Binary(c, a, b) => Term::apps(logical_const(c.constant()), [a.to_term(), b.to_term()]),
            Formula::Quant(q, b, body) => Term::app(
                Term::ty_app(logical_const(q.constant()), b.ty.clone()),
                Term::lam(b.var.clone(), b.ty.clone(), body.to_term()),
            ),
        }
    }

    /// Removes double negations, and eta-contracts predicates in term
    /// position.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Not(f) => match &**f {
                Formula::Not(g) => g.simplify(),
                _ => Formula::Not(Box::new(f.simplify())),
            },
            Formula::Atom { pred, args } => {
                Formula::Atom { pred: pred.simplify(), args: args.iter().map(Expr::simplify).collect() }
            }
            Formula::Eq { ty, lhs, rhs } => {
                Formula::Eq { ty: ty.clone(), lhs: lhs.simplify(), rhs: rhs.simplify() }
            }
            Formula::Binary(c, a, b) => Formula::Binary(*c, Box::new(a.simplify()), Box::new(b.simplify())),
            Formula::Quant(q, b, body) => Formula::Quant(*q, b.clone(), Box::new(body.simplify())),
        }
    }

    /// Sorts mentioned anywhere in the formula.
    pub fn sorts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let t = self.to_term();
        let mut types = Vec::new();
        collect_types(&t, &mut types);
        for ty in types {
            ty.sorts(&mut out);
        }
        out
    }
}

fn collect_types(t: &Term, out: &mut Vec<Type>) {
    match t {
        Term::Var(_, ty) | Term::Const(_, ty) => out.push(ty.clone()),
        Term::App(f, a) => {
            collect_types(f, out);
            collect_types(a, out);
        }
        Term::Lam(_, ty, b) => {
            out.push(ty.clone());
            collect_types(b, out);
        }
        Term::TyApp(f, ty) => {
            out.push(ty.clone());
            collect_types(f, out);
        }
        Term::TyLam(_, b) => collect_types(b, out),
    }
}
