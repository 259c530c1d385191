//! The word-driven lexicon: principal terms, optional terms (modifiers) with
//! flexible or rigid flags, and the JSON document format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plurals::{self, PluralError};
use crate::terms::{
    parse_term, parse_type, type_eq, type_of, BaseCoercion, ParseError, Signature, SignatureError,
    SortPredicate, Term, Type, PROP,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Label of the identity modifier every entry carries.
pub const IDENTITY_LABEL: &str = "Id";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    #[default]
    #[serde(alias = "flex")]
    Flexible,
    #[serde(alias = "rig")]
    Rigid,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Flexible => "flexible",
            Flag::Rigid => "rigid",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionalTerm {
    pub label: String,
    pub term: Term,
    pub flag: Flag,
    /// Type of `term`, always an arrow.
    pub ty: Type,
}

impl OptionalTerm {
    pub fn identity(ty: &Type, flag: Flag) -> OptionalTerm {
        OptionalTerm {
            label: IDENTITY_LABEL.to_string(),
            term: Term::lam("x", ty.clone(), Term::var("x", ty.clone())),
            flag,
            ty: Type::arrow(ty.clone(), ty.clone()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.label == IDENTITY_LABEL
    }

    pub fn domain(&self) -> &Type {
        self.ty.as_arrow().expect("modifiers have arrow types").0
    }

    pub fn codomain(&self) -> &Type {
        self.ty.as_arrow().expect("modifiers have arrow types").1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexEntry {
    pub word: String,
    pub principal: Term,
    pub principal_type: Type,
    pub optional_terms: Vec<OptionalTerm>,
    pub identity_flag: Flag,
}

impl LexEntry {
    /// Optional terms of type `from -> to`, preceded by the identity when
    /// `from` and `to` coincide.
    pub fn transformations_for(&self, from: &Type, to: &Type) -> Vec<OptionalTerm> {
        self.modifiers_from(from).into_iter().filter(|m| type_eq(m.codomain(), to)).collect()
    }

    /// The identity on `from` followed by every optional term whose domain
    /// is `from`, in lexicon order.
    pub fn modifiers_from(&self, from: &Type) -> Vec<OptionalTerm> {
        let mut out = vec![OptionalTerm::identity(from, self.identity_flag)];
        out.extend(self.optional_terms.iter().filter(|m| type_eq(m.domain(), from)).cloned());
        out
    }

    pub fn optional(&self, label: &str) -> Option<&OptionalTerm> {
        self.optional_terms.iter().find(|m| m.label == label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub signature: Signature,
    entries: Vec<LexEntry>,
    index: BTreeMap<String, usize>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LexiconError {
    #[error("malformed lexicon document: {0}")]
    Document(String),
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    SchemaVersion(u32),
    #[error("in {context}: {source}")]
    Parse { context: String, source: ParseError },
    #[error("entry `{word}`: {detail}")]
    TypeErrorInEntry { word: String, detail: String },
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("duplicate entry for `{0}`")]
    DuplicateWord(String),
    #[error("entry `{word}`: duplicate optional term `{label}`")]
    DuplicateLabel { word: String, label: String },
    #[error("unknown extension `{0}`")]
    UnknownExtension(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Plural(#[from] PluralError),
}

impl LexiconError {
    /// Short machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            LexiconError::Document(_) | LexiconError::SchemaVersion(_) | LexiconError::Parse { .. } => {
                "parse"
            }
            _ => "type",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantDoc {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefinitionDoc {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionalDoc {
    pub label: String,
    pub term: String,
    #[serde(default)]
    pub flag: Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub word: String,
    pub principal: String,
    #[serde(default)]
    pub optional: Vec<OptionalDoc>,
    #[serde(default)]
    pub identity_flag: Flag,
}

/// The serialized form of a lexicon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LexiconDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub sorts: Vec<String>,
    #[serde(default)]
    pub base_coercions: Vec<BaseCoercion>,
    #[serde(default)]
    pub constants: Vec<ConstantDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub definitions: Vec<DefinitionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sort_predicates: Vec<SortPredicate>,
    #[serde(default)]
    pub entries: Vec<EntryDoc>,
}

fn parse_ty(sig: &Signature, context: &str, src: &str) -> Result<Type, LexiconError> {
    let ty = parse_type(sig, src)
        .map_err(|source| LexiconError::Parse { context: context.to_string(), source })?;
    sig.check_closed_type(&ty).map_err(|e| match e {
        SignatureError::UnknownSort(s) => LexiconError::UnknownSort(s),
        e => e.into(),
    })?;
    Ok(ty)
}

fn entry_term(sig: &Signature, word: &str, what: &str, src: &str) -> Result<(Term, Type), LexiconError> {
    let term = parse_term(sig, src).map_err(|source| match source {
        ParseError::UnknownIdentifier(id) => LexiconError::TypeErrorInEntry {
            word: word.to_string(),
            detail: format!("{what}: unknown identifier `{id}`"),
        },
        source => LexiconError::Parse { context: format!("entry `{word}`, {what}"), source },
    })?;
    if let Some(v) = term.free_type_vars().into_iter().next() {
        return Err(LexiconError::UnknownSort(v));
    }
    let ty = type_of(sig, &term).map_err(|e| LexiconError::TypeErrorInEntry {
        word: word.to_string(),
        detail: format!("{what}: {e}"),
    })?;
    Ok((term, ty))
}

impl Lexicon {
    pub fn new(signature: Signature) -> Lexicon {
        Lexicon { signature, entries: Vec::new(), index: BTreeMap::new() }
    }

    pub fn from_json(src: &str) -> Result<Lexicon, LexiconError> {
        let doc: LexiconDocument =
            serde_json::from_str(src).map_err(|e| LexiconError::Document(e.to_string()))?;
        Lexicon::load(&doc)
    }

    /// Builds and validates a lexicon; every term is type-checked eagerly.
    pub fn load(doc: &LexiconDocument) -> Result<Lexicon, LexiconError> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(LexiconError::SchemaVersion(doc.schema_version));
        }
        let mut sig = Signature::new();
        for s in &doc.sorts {
            sig.add_sort(s.clone())?;
        }
        for c in &doc.base_coercions {
            sig.add_base_coercion(c.from.clone(), c.to.clone(), c.name.clone())?;
        }
        sig.validate()?;
        for c in &doc.constants {
            let ty = parse_ty(&sig, &format!("constant `{}`", c.name), &c.ty)?;
            sig.add_constant(c.name.clone(), ty)?;
        }
        for ext in &doc.extensions {
            match ext.as_str() {
                plurals::EXTENSION => plurals::install_plural_operators(&mut sig)?,
                other => return Err(LexiconError::UnknownExtension(other.to_string())),
            }
        }
        for d in &doc.definitions {
            let context = format!("definition `{}`", d.name);
            let ty = parse_ty(&sig, &context, &d.ty)?;
            let body = parse_term(&sig, &d.term).map_err(|source| LexiconError::Parse { context, source })?;
            sig.define(d.name.clone(), ty, body)?;
        }
        for p in &doc.sort_predicates {
            sig.add_sort_predicate(p.clone())?;
        }
        let mut lex = Lexicon::new(sig);
        for e in &doc.entries {
            let entry = lex.entry_from_doc(e)?;
            lex.insert(entry)?;
        }
        Ok(lex)
    }

    fn entry_from_doc(&self, e: &EntryDoc) -> Result<LexEntry, LexiconError> {
        let sig = &self.signature;
        let (principal, principal_type) = entry_term(sig, &e.word, "principal term", &e.principal)?;
        let mut optional_terms: Vec<OptionalTerm> = Vec::new();
        for o in &e.optional {
            if o.label == IDENTITY_LABEL || optional_terms.iter().any(|m| m.label == o.label) {
                return Err(LexiconError::DuplicateLabel { word: e.word.clone(), label: o.label.clone() });
            }
            let (term, ty) = entry_term(sig, &e.word, &format!("optional term `{}`", o.label), &o.term)?;
            if ty.as_arrow().is_none() {
                return Err(LexiconError::TypeErrorInEntry {
                    word: e.word.clone(),
                    detail: format!("optional term `{}` has non-arrow type {ty}", o.label),
                });
            }
            optional_terms.push(OptionalTerm { label: o.label.clone(), term, flag: o.flag, ty });
        }
        Ok(LexEntry {
            word: e.word.clone(),
            principal,
            principal_type,
            optional_terms,
            identity_flag: e.identity_flag,
        })
    }

    pub fn insert(&mut self, entry: LexEntry) -> Result<(), LexiconError> {
        if self.index.contains_key(&entry.word) {
            return Err(LexiconError::DuplicateWord(entry.word));
        }
        self.index.insert(entry.word.clone(), self.entries.len());
        self.entries.push(entry);
        Ok(())
    }

    pub fn entry(&self, word: &str) -> Option<&LexEntry> {
        self.index.get(word).map(|&i| &self.entries[i])
    }

    /// Entries in document order.
    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn to_document(&self) -> LexiconDocument {
        let sig = &self.signature;
        let user = |name: &str| !sig.is_builtin(name);
        LexiconDocument {
            schema_version: SCHEMA_VERSION,
            sorts: sig.sorts().filter(|s| *s != PROP).map(str::to_string).collect(),
            base_coercions: sig.base_coercions().to_vec(),
            constants: sig
                .constants()
                .filter(|(n, _)| user(n) && !sig.is_defined(n) && sig.coercion_named(n).is_none())
                .map(|(n, ty)| ConstantDoc { name: n.to_string(), ty: ty.to_string() })
                .collect(),
            extensions: sig.extensions().to_vec(),
            definitions: sig
                .definitions()
                .filter(|(n, _)| user(n))
                .map(|(n, body)| DefinitionDoc {
                    name: n.to_string(),
                    ty: sig.constant_type(n).expect("defined constants are declared").to_string(),
                    term: body.to_string(),
                })
                .collect(),
            sort_predicates: sig.sort_predicates().to_vec(),
            entries: self
                .entries
                .iter()
                .map(|e| EntryDoc {
                    word: e.word.clone(),
                    principal: e.principal.to_string(),
                    optional: e
                        .optional_terms
                        .iter()
                        .map(|m| OptionalDoc {
                            label: m.label.clone(),
                            term: m.term.to_string(),
                            flag: m.flag,
                        })
                        .collect(),
                    identity_flag: e.identity_flag,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("documents serialize")
    }
}
