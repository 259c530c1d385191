use serde_json::{json, Value};

use super::formula::{Binding, Connective, Expr, Formula, HilbertOp, Quantifier};
use crate::terms::Type;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Unicode,
    Ascii,
}

struct Symbols {
    forall: &'static str,
    exists: &'static str,
    and: &'static str,
    or: &'static str,
    implies: &'static str,
    not: &'static str,
    lambda: &'static str,
}

const UNICODE: Symbols =
    Symbols { forall: "∀", exists: "∃", and: "∧", or: "∨", implies: "⇒", not: "¬", lambda: "λ" };
const ASCII: Symbols = Symbols {
    forall: "forall ",
    exists: "exists ",
    and: "&",
    or: "|",
    implies: "->",
    not: "~",
    lambda: "lam ",
};

fn hilbert_symbol(op: HilbertOp, n: Notation) -> &'static str {
    match (op, n) {
        (HilbertOp::Iota, Notation::Unicode) => "ι",
        (HilbertOp::Epsilon, Notation::Unicode) => "ε",
        (HilbertOp::Tau, Notation::Unicode) => "τ",
        (HilbertOp::Eta, Notation::Unicode) => "η",
        (HilbertOp::Iota, Notation::Ascii) => "iota",
        (HilbertOp::Epsilon, Notation::Ascii) => "epsilon",
        (HilbertOp::Tau, Notation::Ascii) => "tau",
        (HilbertOp::Eta, Notation::Ascii) => "eta",
        (HilbertOp::Most, _) => "most",
    }
}

struct Renderer {
    n: Notation,
    sym: &'static Symbols,
}

impl Renderer {
    fn new(n: Notation) -> Self {
        Renderer { n, sym: if n == Notation::Unicode { &UNICODE } else { &ASCII } }
    }

    fn ty(&self, ty: &Type) -> String {
        let s = if self.n == Notation::Unicode { ty.unicode() } else { ty.to_string() };
        match ty {
            Type::Sort(_) | Type::Var(_) => s,
            _ => format!("({s})"),
        }
    }

    fn binding(&self, b: &Binding) -> String {
        format!("{}:{}", b.var, self.ty(&b.ty))
    }

    fn formula(&self, f: &Formula) -> String {
        match f {
            Formula::Atom { pred, args } => {
                let head = self.head(pred);
                if args.is_empty() {
                    head
                } else {
                    format!("{head}({})", self.args(args))
                }
            }
            Formula::Eq { lhs, rhs, .. } => format!("{} = {}", self.expr(lhs), self.expr(rhs)),
            Formula::Not(g) => {
                let inner = self.formula(g);
                match &**g {
                    Formula::Binary(..) | Formula::Quant(..) | Formula::Eq { .. } => {
                        format!("{}({inner})", self.sym.not)
                    }
                    _ => format!("{}{inner}", self.sym.not),
                }
            }
            Formula::Binary(c, a, b) => {
                let op = match c {
                    Connective::And => self.sym.and,
                    Connective::Or => self.sym.or,
                    Connective::Implies => self.sym.implies,
                };
                format!("{} {op} {}", self.operand(a), self.operand(b))
            }
            Formula::Quant(q, b, body) => {
                let sym = match q {
                    Quantifier::Forall => self.sym.forall,
                    Quantifier::Exists => self.sym.exists,
                };
                let inner = self.formula(body);
                match &**body {
                    Formula::Binary(..) | Formula::Eq { .. } => {
                        format!("{sym}{} ({inner})", self.binding(b))
                    }
                    _ => format!("{sym}{} {inner}", self.binding(b)),
                }
            }
        }
    }

    fn operand(&self, f: &Formula) -> String {
        match f {
            Formula::Binary(..) | Formula::Quant(..) => format!("({})", self.formula(f)),
            _ => self.formula(f),
        }
    }

    fn args(&self, args: &[Expr]) -> String {
        args.iter().map(|a| self.expr(a)).collect::<Vec<_>>().join(", ")
    }

    /// An expression in head position.
    fn head(&self, e: &Expr) -> String {
        match e {
            Expr::Var(..) | Expr::Const { .. } | Expr::Apply(..) => self.expr(e),
            Expr::Hilbert { pred, .. } if !matches!(**pred, Expr::Lambda(..)) => self.expr(e),
            _ => format!("({})", self.expr(e)),
        }
    }

    fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::Var(x, _) => x.clone(),
            Expr::Const { name, .. } => name.clone(),
            Expr::Apply(h, args) => format!("{}({})", self.head(h), self.args(args)),
            Expr::Hilbert { op, pred, .. } => {
                let sym = hilbert_symbol(*op, self.n);
                match &**pred {
                    Expr::Lambda(b, body) => {
                        let sep = if self.n == Notation::Ascii || *op == HilbertOp::Most { " " } else { "" };
                        format!("{sym}{sep}{}. {}", self.binding(b), self.expr(body))
                    }
                    p => format!("{sym}({})", self.expr(p)),
                }
            }
            Expr::Lambda(b, body) => format!("{}{}. {}", self.sym.lambda, self.binding(b), self.expr(body)),
            Expr::Prop(f) => self.formula(f),
        }
    }
}

impl Formula {
    pub fn render(&self, n: Notation) -> String {
        Renderer::new(n).formula(self)
    }

    /// `∃x:e (club(x) ∧ defeated(x, Leeds))`
    pub fn unicode(&self) -> String {
        self.render(Notation::Unicode)
    }

    /// `exists x:e (club(x) & defeated(x, Leeds))`
    pub fn ascii(&self) -> String {
        self.render(Notation::Ascii)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Formula::Atom { pred, args } => json!({
                "kind": "atom",
                "pred": pred.to_json(),
                "args": args.iter().map(Expr::to_json).collect::<Vec<_>>(),
            }),
            Formula::Eq { ty, lhs, rhs } => json!({
                "kind": "eq", "type": ty.to_string(), "lhs": lhs.to_json(), "rhs": rhs.to_json(),
            }),
            Formula::Not(f) => json!({"kind": "not", "body": f.to_json()}),
            Formula::Binary(c, a, b) => json!({
                "kind": c.constant(), "left": a.to_json(), "right": b.to_json(),
            }),
            Formula::Quant(q, b, body) => json!({
                "kind": q.constant(), "var": b.var, "type": b.ty.to_string(), "body": body.to_json(),
            }),
        }
    }
}

impl Expr {
    pub fn to_json(&self) -> Value {
        match self {
            Expr::Var(x, ty) => json!({"kind": "var", "name": x, "type": ty.to_string()}),
            Expr::Const { name, ty, ty_args } => {
                let mut v = json!({"kind": "const", "name": name, "type": ty.to_string()});
                if !ty_args.is_empty() {
                    v["type_args"] = ty_args.iter().map(|t| Value::from(t.to_string())).collect();
                }
                v
            }
            Expr::Apply(h, args) => json!({
                "kind": "apply",
                "head": h.to_json(),
                "args": args.iter().map(Expr::to_json).collect::<Vec<_>>(),
            }),
            Expr::Hilbert { op, ty, pred } => json!({
                "kind": op.constant(), "type": ty.to_string(), "pred": pred.to_json(),
            }),
            Expr::Lambda(b, body) => json!({
                "kind": "lambda", "var": b.var, "type": b.ty.to_string(), "body": body.to_json(),
            }),
            Expr::Prop(f) => f.to_json(),
        }
    }
}
