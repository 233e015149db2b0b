//! Symbol tables for the two logics.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The universal standpoint, admitted by every precisification.
pub const UNIVERSAL: &str = "*";

/// Predicates introduced by the translation into standpoint logic.
pub const RESERVED_PREDICATES: [&str; 4] = ["ind", "ext", "ink", "prec"];

pub(crate) const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VocabError {
    #[error("symbol `{0}` is declared more than once")]
    Duplicate(String),
    #[error("`{0}` is not a valid predicate name")]
    BadPredicate(String),
    #[error("`{0}` is not a valid constant name (expected [a-z][A-Za-z0-9_]*)")]
    BadConstant(String),
    #[error("`{0}` is not a valid standpoint name")]
    BadStandpoint(String),
    #[error("nullary predicate `{0}` must start with an uppercase letter")]
    LowercaseNullary(String),
    #[error("{kind} predicate `{name}` must have arity at least 1")]
    ZeroArity { name: String, kind: PredicateKind },
    #[error("`{0}` is reserved and cannot be declared")]
    Reserved(String),
}

/// Read-only view of a vocabulary used by the parser and by formula validation.
pub trait Signature {
    fn predicate_arity(&self, name: &str) -> Option<usize>;
    fn is_constant(&self, name: &str) -> bool;
    fn is_standpoint(&self, name: &str) -> bool;
    /// Declared predicates in symbol order.
    fn predicate_list(&self) -> Vec<(String, usize)>;
    /// An open signature accepts every well-formed symbol without arity checks.
    fn is_open(&self) -> bool {
        false
    }
}

fn is_ident_tail(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_predicate_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && is_ident_tail(chars.as_str())
        && !KEYWORDS.contains(&s)
}

pub(crate) fn is_constant_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && is_ident_tail(chars.as_str())
        && !KEYWORDS.contains(&s)
}

pub(crate) fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase()) && is_ident_tail(s)
}

fn check_predicate(name: &str, arity: usize) -> Result<(), VocabError> {
    if !is_predicate_name(name) {
        return Err(VocabError::BadPredicate(name.to_string()));
    }
    if arity == 0 && !name.starts_with(|c: char| c.is_ascii_uppercase()) {
        return Err(VocabError::LowercaseNullary(name.to_string()));
    }
    Ok(())
}

fn check_standpoint(name: &str) -> Result<(), VocabError> {
    if name == UNIVERSAL || is_constant_name(name) {
        Ok(())
    } else {
        Err(VocabError::BadStandpoint(name.to_string()))
    }
}

/// Tracks every declared name so that the symbol sets stay pairwise disjoint.
#[derive(Default)]
struct NameRegistry(BTreeSet<String>);

impl NameRegistry {
    fn claim(&mut self, name: &str) -> Result<(), VocabError> {
        if self.0.insert(name.to_string()) {
            Ok(())
        } else {
            Err(VocabError::Duplicate(name.to_string()))
        }
    }

    fn claim_unreserved(&mut self, name: &str) -> Result<(), VocabError> {
        if RESERVED_PREDICATES.contains(&name) {
            return Err(VocabError::Reserved(name.to_string()));
        }
        self.claim(name)
    }

    fn claim_arities(
        &mut self,
        entries: impl IntoIterator<Item = (String, usize)>,
        kind: PredicateKind,
    ) -> Result<BTreeMap<String, usize>, VocabError> {
        let mut out = BTreeMap::new();
        for (name, arity) in entries {
            check_predicate(&name, arity.max(1))?;
            if arity == 0 {
                return Err(VocabError::ZeroArity { name, kind });
            }
            self.claim_unreserved(&name)?;
            out.insert(name, arity);
        }
        Ok(out)
    }
}

/// Vocabulary of first-order standpoint logic: predicates with arities,
/// constants and standpoints (always including `*`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoslVocabulary {
    predicates: BTreeMap<String, usize>,
    constants: BTreeSet<String>,
    standpoints: BTreeSet<String>,
}

impl FoslVocabulary {
    pub fn new<P, C, S>(predicates: P, constants: C, standpoints: S) -> Result<Self, VocabError>
    where
        P: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = String>,
        S: IntoIterator<Item = String>,
    {
        let mut names = NameRegistry::default();
        let mut preds = BTreeMap::new();
        for (name, arity) in predicates {
            check_predicate(&name, arity)?;
            names.claim(&name)?;
            preds.insert(name, arity);
        }
        let mut consts = BTreeSet::new();
        for name in constants {
            if !is_constant_name(&name) {
                return Err(VocabError::BadConstant(name));
            }
            names.claim(&name)?;
            consts.insert(name);
        }
        let mut sps = BTreeSet::new();
        sps.insert(UNIVERSAL.to_string());
        for name in standpoints {
            check_standpoint(&name)?;
            if name == UNIVERSAL {
                continue;
            }
            names.claim(&name)?;
            sps.insert(name);
        }
        Ok(FoslVocabulary {
            predicates: preds,
            constants: consts,
            standpoints: sps,
        })
    }

    /// Convenience constructor from string slices, mostly for tests and fixtures.
    pub fn from_parts(
        predicates: &[(&str, usize)],
        constants: &[&str],
        standpoints: &[&str],
    ) -> Result<Self, VocabError> {
        Self::new(
            predicates.iter().map(|(p, k)| (p.to_string(), *k)),
            constants.iter().map(|c| c.to_string()),
            standpoints.iter().map(|s| s.to_string()),
        )
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn constants(&self) -> &BTreeSet<String> {
        &self.constants
    }

    pub fn standpoints(&self) -> &BTreeSet<String> {
        &self.standpoints
    }

    pub fn from_json(text: &str) -> Result<Self, VocabFileError> {
        let raw: FoslVocabFile = serde_json::from_str(text)?;
        Ok(Self::new(raw.predicates, raw.constants, raw.standpoints)?)
    }

    pub fn to_json(&self) -> String {
        let raw = FoslVocabFile {
            predicates: self.predicates.clone(),
            constants: self.constants.iter().cloned().collect(),
            standpoints: self
                .standpoints
                .iter()
                .filter(|s| *s != UNIVERSAL)
                .cloned()
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("vocabulary serialises")
    }
}

impl Signature for FoslVocabulary {
    fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }
    fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }
    fn is_standpoint(&self, name: &str) -> bool {
        self.standpoints.contains(name)
    }
    fn predicate_list(&self) -> Vec<(String, usize)> {
        self.predicates
            .iter()
            .map(|(p, k)| (p.clone(), *k))
            .collect()
    }
}

/// The three kinds of predicate in variable reference logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateKind {
    Sortal,
    Indefinite,
    Precise,
}

impl std::fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PredicateKind::Sortal => "sortal",
            PredicateKind::Indefinite => "indefinite",
            PredicateKind::Precise => "precise",
        })
    }
}

/// Vocabulary of variable reference logic. Sortals are unary; indefinite and
/// precise predicates carry an arity of at least one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct V1Vocabulary {
    sortals: BTreeSet<String>,
    indefinite: BTreeMap<String, usize>,
    precise: BTreeMap<String, usize>,
    names: BTreeSet<String>,
    standpoints: BTreeSet<String>,
}

impl V1Vocabulary {
    pub fn new<K, A, Q, N, S>(
        sortals: K,
        indefinite: A,
        precise: Q,
        names: N,
        standpoints: S,
    ) -> Result<Self, VocabError>
    where
        K: IntoIterator<Item = String>,
        A: IntoIterator<Item = (String, usize)>,
        Q: IntoIterator<Item = (String, usize)>,
        N: IntoIterator<Item = String>,
        S: IntoIterator<Item = String>,
    {
        let mut registry = NameRegistry::default();
        let mut ks = BTreeSet::new();
        for name in sortals {
            check_predicate(&name, 1)?;
            registry.claim_unreserved(&name)?;
            ks.insert(name);
        }
        let indefinite = registry.claim_arities(indefinite, PredicateKind::Indefinite)?;
        let precise = registry.claim_arities(precise, PredicateKind::Precise)?;
        let mut ns = BTreeSet::new();
        for name in names {
            if !is_constant_name(&name) {
                return Err(VocabError::BadConstant(name));
            }
            registry.claim_unreserved(&name)?;
            ns.insert(name);
        }
        let mut sps = BTreeSet::new();
        sps.insert(UNIVERSAL.to_string());
        for name in standpoints {
            check_standpoint(&name)?;
            if name == UNIVERSAL {
                continue;
            }
            registry.claim_unreserved(&name)?;
            sps.insert(name);
        }
        Ok(V1Vocabulary {
            sortals: ks,
            indefinite,
            precise,
            names: ns,
            standpoints: sps,
        })
    }

    pub fn from_parts(
        sortals: &[&str],
        indefinite: &[(&str, usize)],
        precise: &[(&str, usize)],
        names: &[&str],
        standpoints: &[&str],
    ) -> Result<Self, VocabError> {
        Self::new(
            sortals.iter().map(|s| s.to_string()),
            indefinite.iter().map(|(p, k)| (p.to_string(), *k)),
            precise.iter().map(|(p, k)| (p.to_string(), *k)),
            names.iter().map(|s| s.to_string()),
            standpoints.iter().map(|s| s.to_string()),
        )
    }

    pub fn sortals(&self) -> &BTreeSet<String> {
        &self.sortals
    }

    pub fn indefinite(&self) -> &BTreeMap<String, usize> {
        &self.indefinite
    }

    pub fn precise(&self) -> &BTreeMap<String, usize> {
        &self.precise
    }

    pub fn names(&self) -> &BTreeSet<String> {
        &self.names
    }

    pub fn standpoints(&self) -> &BTreeSet<String> {
        &self.standpoints
    }

    pub fn kind_of(&self, predicate: &str) -> Option<PredicateKind> {
        if self.sortals.contains(predicate) {
            Some(PredicateKind::Sortal)
        } else if self.indefinite.contains_key(predicate) {
            Some(PredicateKind::Indefinite)
        } else if self.precise.contains_key(predicate) {
            Some(PredicateKind::Precise)
        } else {
            None
        }
    }

    /// Largest arity among the precise predicates, 0 when there are none.
    pub fn max_precise_arity(&self) -> usize {
        self.precise.values().copied().max().unwrap_or(0)
    }

    pub fn from_json(text: &str) -> Result<Self, VocabFileError> {
        let raw: V1VocabFile = serde_json::from_str(text)?;
        Ok(Self::new(
            raw.sortals,
            raw.indefinite,
            raw.precise,
            raw.names,
            raw.standpoints,
        )?)
    }

    pub fn to_json(&self) -> String {
        let raw = V1VocabFile {
            sortals: self.sortals.iter().cloned().collect(),
            indefinite: self.indefinite.clone(),
            precise: self.precise.clone(),
            names: self.names.iter().cloned().collect(),
            standpoints: self
                .standpoints
                .iter()
                .filter(|s| *s != UNIVERSAL)
                .cloned()
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("vocabulary serialises")
    }
}

impl Signature for V1Vocabulary {
    fn predicate_arity(&self, name: &str) -> Option<usize> {
        if self.sortals.contains(name) {
            Some(1)
        } else {
            self.indefinite
                .get(name)
                .or_else(|| self.precise.get(name))
                .copied()
        }
    }
    fn is_constant(&self, name: &str) -> bool {
        self.names.contains(name)
    }
    fn is_standpoint(&self, name: &str) -> bool {
        self.standpoints.contains(name)
    }
    fn predicate_list(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = self
            .sortals
            .iter()
            .map(|k| (k.clone(), 1))
            .chain(self.indefinite.iter().map(|(p, k)| (p.clone(), *k)))
            .chain(self.precise.iter().map(|(p, k)| (p.clone(), *k)))
            .collect();
        out.sort();
        out
    }
}

/// Accepts any syntactically valid symbol. Used to infer a vocabulary from
/// formula text.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpenSignature;

impl Signature for OpenSignature {
    fn predicate_arity(&self, _name: &str) -> Option<usize> {
        None
    }
    fn is_constant(&self, name: &str) -> bool {
        is_constant_name(name)
    }
    fn is_standpoint(&self, name: &str) -> bool {
        name == UNIVERSAL || is_constant_name(name)
    }
    fn predicate_list(&self) -> Vec<(String, usize)> {
        Vec::new()
    }
    fn is_open(&self) -> bool {
        true
    }
}

#[derive(Debug, Error)]
pub enum VocabFileError {
    #[error("malformed vocabulary file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid vocabulary: {0}")]
    Invalid(#[from] VocabError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FoslVocabFile {
    #[serde(default)]
    predicates: BTreeMap<String, usize>,
    #[serde(default)]
    constants: Vec<String>,
    #[serde(default)]
    standpoints: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct V1VocabFile {
    #[serde(default)]
    sortals: Vec<String>,
    #[serde(default)]
    indefinite: BTreeMap<String, usize>,
    #[serde(default)]
    precise: BTreeMap<String, usize>,
    #[serde(default)]
    names: Vec<String>,
    #[serde(default)]
    standpoints: Vec<String>,
}
