use std::fmt;

use serde_json::{json, Value};

/// A binary syntactic tree saying which subtree applies to the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompositionTree {
    Leaf(String),
    Node(Box<CompositionTree>, Box<CompositionTree>),
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
#[error("malformed composition tree: {0}")]
pub struct TreeError(pub String);

impl CompositionTree {
    pub fn leaf(word: impl Into<String>) -> Self {
        CompositionTree::Leaf(word.into())
    }

    pub fn node(function: CompositionTree, argument: CompositionTree) -> Self {
        CompositionTree::Node(Box::new(function), Box::new(argument))
    }

    /// Parses `{"fn": .., "arg": ..}` with string leaves.
    pub fn from_json(src: &str) -> Result<Self, TreeError> {
        let v: Value = serde_json::from_str(src).map_err(|e| TreeError(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, TreeError> {
        match v {
            Value::String(w) => Ok(CompositionTree::leaf(w.clone())),
            Value::Object(m) => {
                if let Some(k) = m.keys().find(|k| *k != "fn" && *k != "arg") {
                    return Err(TreeError(format!("unexpected key `{k}`")));
                }
                let f = m.get("fn").ok_or_else(|| TreeError("missing `fn`".into()))?;
                let a = m.get("arg").ok_or_else(|| TreeError("missing `arg`".into()))?;
                Ok(CompositionTree::node(Self::from_value(f)?, Self::from_value(a)?))
            }
            other => Err(TreeError(format!("expected a word or an object, found {other}"))),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            CompositionTree::Leaf(w) => Value::String(w.clone()),
            CompositionTree::Node(f, a) => json!({"fn": f.to_value(), "arg": a.to_value()}),
        }
    }

    /// Leaf words from left to right.
    pub fn words(&self) -> Vec<&str> {
        match self {
            CompositionTree::Leaf(w) => vec![w.as_str()],
            CompositionTree::Node(f, a) => {
                let mut out = f.words();
                out.extend(a.words());
                out
            }
        }
    }
}

impl fmt::Display for CompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompositionTree::Leaf(w) => f.write_str(w),
            CompositionTree::Node(g, a) => write!(f, "({g} {a})"),
        }
    }
}
