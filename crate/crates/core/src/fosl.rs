//! Finite first-order standpoint structures and their satisfaction relation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{FoslVocabulary, Formula, Term, Var, UNIVERSAL};

/// Index of a domain element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub usize);

/// Index of a precisification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prec(pub usize);

/// Variable assignment. Evaluation only reads the free variables of the
/// formula at hand.
pub type Assignment = BTreeMap<Var, Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(Var),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown standpoint `{0}`")]
    UnknownStandpoint(String),
    #[error("precisification index {0} out of range")]
    UnknownPrecisification(usize),
    #[error("variable {var} is bound to element {index}, which is not in the structure")]
    UnknownValue { var: Var, index: usize },
    #[error("predicate `{predicate}` applied to {found} argument(s), expected {expected}")]
    Arity {
        predicate: String,
        expected: usize,
        found: usize,
    },
}

/// Violations reported when building or loading a structure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0} must be non-empty")]
    Empty(&'static str),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("identifier `{0}` is used both as an entity and as an individual")]
    IdCollision(String),
    #[error("unknown {kind} `{id}` in {context}")]
    UnknownId {
        kind: &'static str,
        id: String,
        context: String,
    },
    #[error("sigma(*) must equal the full set of precisifications, got {0:?}")]
    UniversalStandpoint(Vec<String>),
    #[error("{context}: tuple {tuple:?} has arity {found}, expected {expected}")]
    TupleArity {
        context: String,
        tuple: Vec<String>,
        expected: usize,
        found: usize,
    },
    #[error("constant `{constant}` has no denotation at precisification `{prec}`")]
    MissingConstant { constant: String, prec: String },
    #[error("precisification `{0}` has no interpretation")]
    MissingInterpretation(String),
    #[error("individual `{individual}` has no extension at precisification `{prec}`")]
    IncompleteExtension { individual: String, prec: String },
    #[error("name `{name}` denotes `{individual}` at `{prec}`, which is not in the individual domain I_{prec}")]
    NameOutsideDomain {
        name: String,
        individual: String,
        prec: String,
    },
    #[error("indefinite predicate `{predicate}` at `{prec}` holds of `{individual}`, which is not in I_{prec}")]
    IndefiniteOutsideDomain {
        predicate: String,
        individual: String,
        prec: String,
    },
    #[error("malformed model file: {0}")]
    Json(String),
}

pub(crate) fn index_ids(
    ids: &[String],
    what: &'static str,
) -> Result<BTreeMap<String, usize>, StructureError> {
    if ids.is_empty() {
        return Err(StructureError::Empty(what));
    }
    let mut out = BTreeMap::new();
    for (i, id) in ids.iter().enumerate() {
        if out.insert(id.clone(), i).is_some() {
            return Err(StructureError::DuplicateId(id.clone()));
        }
    }
    Ok(out)
}

pub(crate) fn lookup(
    index: &BTreeMap<String, usize>,
    kind: &'static str,
    id: &str,
    context: impl FnOnce() -> String,
) -> Result<usize, StructureError> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| StructureError::UnknownId {
            kind,
            id: id.to_string(),
            context: context(),
        })
}

/// Resolves the standpoint map, defaulting `*` to Π and absent standpoints to ∅.
pub(crate) fn resolve_sigma(
    standpoints: &BTreeSet<String>,
    prec_ids: &[String],
    prec_index: &BTreeMap<String, usize>,
    raw: &BTreeMap<String, Vec<String>>,
) -> Result<BTreeMap<String, BTreeSet<Prec>>, StructureError> {
    for s in raw.keys() {
        if !standpoints.contains(s) {
            return Err(StructureError::UnknownId {
                kind: "standpoint",
                id: s.clone(),
                context: "sigma".into(),
            });
        }
    }
    let mut sigma = BTreeMap::new();
    for s in standpoints {
        let set: BTreeSet<Prec> = match raw.get(s) {
            Some(list) => list
                .iter()
                .map(|p| lookup(prec_index, "precisification", p, || format!("sigma({s})")).map(Prec))
                .collect::<Result<_, _>>()?,
            None if s == UNIVERSAL => (0..prec_ids.len()).map(Prec).collect(),
            None => BTreeSet::new(),
        };
        if s == UNIVERSAL && set.len() != prec_ids.len() {
            return Err(StructureError::UniversalStandpoint(
                set.iter().map(|p| prec_ids[p.0].clone()).collect(),
            ));
        }
        sigma.insert(s.clone(), set);
    }
    Ok(sigma)
}

/// The interpretation δ(π) at one precisification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interpretation {
    pub predicates: BTreeMap<String, BTreeSet<Vec<Elem>>>,
    pub constants: BTreeMap<String, Elem>,
}

/// A finite first-order standpoint structure ⟨Δ, Π, σ, δ⟩ over a fixed
/// vocabulary. Constants may denote different elements at different
/// precisifications; the domain is shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoslStructure {
    vocab: FoslVocabulary,
    domain: Vec<String>,
    precisifications: Vec<String>,
    sigma: BTreeMap<String, BTreeSet<Prec>>,
    interpretations: Vec<Interpretation>,
}

impl FoslStructure {
    /// Validates and assembles a structure from index-based parts. Predicates
    /// missing from an interpretation are read as empty; `*` may be omitted
    /// from `sigma`.
    pub fn new(
        vocab: FoslVocabulary,
        domain: Vec<String>,
        precisifications: Vec<String>,
        sigma: BTreeMap<String, BTreeSet<Prec>>,
        mut interpretations: Vec<Interpretation>,
    ) -> Result<Self, StructureError> {
        let raw_sigma = sigma
            .iter()
            .map(|(s, ps)| {
                let ids = ps
                    .iter()
                    .map(|p| {
                        precisifications.get(p.0).cloned().ok_or_else(|| {
                            StructureError::UnknownId {
                                kind: "precisification",
                                id: p.0.to_string(),
                                context: format!("sigma({s})"),
                            }
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((s.clone(), ids))
            })
            .collect::<Result<BTreeMap<_, _>, StructureError>>()?;
        index_ids(&domain, "domain")?;
        let prec_index = index_ids(&precisifications, "precisifications")?;
        let sigma = resolve_sigma(vocab.standpoints(), &precisifications, &prec_index, &raw_sigma)?;
        if interpretations.len() != precisifications.len() {
            let missing = precisifications
                .get(interpretations.len())
                .cloned()
                .unwrap_or_default();
            return Err(StructureError::MissingInterpretation(missing));
        }
        for (pi, interp) in interpretations.iter_mut().enumerate() {
            let pname = &precisifications[pi];
            for p in interp.predicates.keys() {
                if !vocab.predicates().contains_key(p) {
                    return Err(StructureError::UnknownId {
                        kind: "predicate",
                        id: p.clone(),
                        context: format!("interpretation of `{pname}`"),
                    });
                }
            }
            for (p, &arity) in vocab.predicates() {
                let rel = interp.predicates.entry(p.clone()).or_default();
                for t in rel.iter() {
                    if t.len() != arity {
                        return Err(StructureError::TupleArity {
                            context: format!("predicate `{p}` at `{pname}`"),
                            tuple: t.iter().map(|e| e.0.to_string()).collect(),
                            expected: arity,
                            found: t.len(),
                        });
                    }
                    if let Some(e) = t.iter().find(|e| e.0 >= domain.len()) {
                        return Err(StructureError::UnknownId {
                            kind: "element",
                            id: e.0.to_string(),
                            context: format!("predicate `{p}` at `{pname}`"),
                        });
                    }
                }
            }
            for c in interp.constants.keys() {
                if !vocab.constants().contains(c) {
                    return Err(StructureError::UnknownId {
                        kind: "constant",
                        id: c.clone(),
                        context: format!("interpretation of `{pname}`"),
                    });
                }
            }
            for c in vocab.constants() {
                match interp.constants.get(c) {
                    None => {
                        return Err(StructureError::MissingConstant {
                            constant: c.clone(),
                            prec: pname.clone(),
                        })
                    }
                    Some(e) if e.0 >= domain.len() => {
                        return Err(StructureError::UnknownId {
                            kind: "element",
                            id: e.0.to_string(),
                            context: format!("constant `{c}` at `{pname}`"),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(FoslStructure {
            vocab,
            domain,
            precisifications,
            sigma,
            interpretations,
        })
    }

    pub fn builder(vocab: &FoslVocabulary) -> FoslBuilder {
        FoslBuilder {
            vocab: vocab.clone(),
            file: FoslModelFile::default(),
        }
    }

    pub fn vocabulary(&self) -> &FoslVocabulary {
        &self.vocab
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn precisifications(&self) -> &[String] {
        &self.precisifications
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.domain.len()).map(Elem)
    }

    pub fn precs(&self) -> impl Iterator<Item = Prec> {
        (0..self.precisifications.len()).map(Prec)
    }

    pub fn element(&self, id: &str) -> Option<Elem> {
        self.domain.iter().position(|d| d == id).map(Elem)
    }

    pub fn prec(&self, id: &str) -> Option<Prec> {
        self.precisifications.iter().position(|p| p == id).map(Prec)
    }

    pub fn element_id(&self, e: Elem) -> &str {
        &self.domain[e.0]
    }

    pub fn prec_id(&self, p: Prec) -> &str {
        &self.precisifications[p.0]
    }

    pub fn sigma(&self, standpoint: &str) -> Option<&BTreeSet<Prec>> {
        self.sigma.get(standpoint)
    }

    pub fn interpretation(&self, p: Prec) -> &Interpretation {
        &self.interpretations[p.0]
    }

    /// Extension of `predicate` at `p`.
    pub fn extension(&self, p: Prec, predicate: &str) -> Option<&BTreeSet<Vec<Elem>>> {
        self.interpretations.get(p.0)?.predicates.get(predicate)
    }

    pub fn constant_at(&self, p: Prec, constant: &str) -> Option<Elem> {
        self.interpretations.get(p.0)?.constants.get(constant).copied()
    }

    fn check_prec(&self, p: Prec) -> Result<(), EvalError> {
        if p.0 < self.precisifications.len() {
            Ok(())
        } else {
            Err(EvalError::UnknownPrecisification(p.0))
        }
    }

    /// Denotation of `t` at `p` under `v`.
    pub fn eval_term(&self, p: Prec, v: &Assignment, t: &Term) -> Result<Elem, EvalError> {
        self.check_prec(p)?;
        match t {
            Term::Var(x) => {
                let e = *v.get(x).ok_or_else(|| EvalError::UnboundVariable(x.clone()))?;
                if e.0 >= self.domain.len() {
                    return Err(EvalError::UnknownValue {
                        var: x.clone(),
                        index: e.0,
                    });
                }
                Ok(e)
            }
            Term::Const(c) => self
                .constant_at(p, c)
                .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        }
    }

    /// `M, π, v ⊨ φ`.
    pub fn satisfies(&self, p: Prec, v: &Assignment, f: &Formula) -> Result<bool, EvalError> {
        self.check_prec(p)?;
        for x in f.free_variables() {
            match v.get(&x) {
                None => return Err(EvalError::UnboundVariable(x)),
                Some(e) if e.0 >= self.domain.len() => {
                    return Err(EvalError::UnknownValue { var: x, index: e.0 })
                }
                Some(_) => {}
            }
        }
        let mut env = Env::new(v);
        self.eval(p, &mut env, f)
    }

    fn term_value(&self, p: Prec, env: &Env<'_>, t: &Term) -> Result<Elem, EvalError> {
        match t {
            Term::Var(x) => env.get(x),
            Term::Const(c) => self
                .constant_at(p, c)
                .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        }
    }

    fn eval<'f>(&self, p: Prec, env: &mut Env<'f>, f: &'f Formula) -> Result<bool, EvalError> {
        match f {
            Formula::Atom(pred, args) => {
                let rel = self
                    .extension(p, pred)
                    .ok_or_else(|| EvalError::UnknownPredicate(pred.clone()))?;
                let expected = self.vocab.predicates()[pred];
                if expected != args.len() {
                    return Err(EvalError::Arity {
                        predicate: pred.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                let tuple = args
                    .iter()
                    .map(|t| self.term_value(p, env, t))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(rel.contains(&tuple))
            }
            Formula::Equal(a, b) => Ok(self.term_value(p, env, a)? == self.term_value(p, env, b)?),
            Formula::Not(g) => Ok(!self.eval(p, env, g)?),
            Formula::And(a, b) => Ok(self.eval(p, env, a)? && self.eval(p, env, b)?),
            Formula::Forall(x, g) => {
                for e in self.elements() {
                    env.push(x, e);
                    let holds = self.eval(p, env, g);
                    env.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Box(s, g) => {
                let admitted = self
                    .sigma
                    .get(s)
                    .ok_or_else(|| EvalError::UnknownStandpoint(s.clone()))?;
                for &q in admitted {
                    if !self.eval(q, env, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// `M, π ⊨ φ`: truth under every assignment of the free variables.
    pub fn satisfies_at(&self, p: Prec, f: &Formula) -> Result<bool, EvalError> {
        let free: Vec<Var> = f.free_variables().into_iter().collect();
        let n = self.domain.len();
        let mut digits = vec![0usize; free.len()];
        loop {
            let v: Assignment = free
                .iter()
                .cloned()
                .zip(digits.iter().map(|&d| Elem(d)))
                .collect();
            if !self.satisfies(p, &v, f)? {
                return Ok(false);
            }
            if !advance(&mut digits, n) {
                return Ok(true);
            }
        }
    }

    /// `M ⊨ φ`: truth at every precisification.
    pub fn is_model(&self, f: &Formula) -> Result<bool, EvalError> {
        for p in self.precs() {
            if !self.satisfies_at(p, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_model_file(&self) -> FoslModelFile {
        let ids = |t: &Vec<Elem>| t.iter().map(|e| self.domain[e.0].clone()).collect();
        FoslModelFile {
            domain: self.domain.clone(),
            precisifications: self.precisifications.clone(),
            sigma: self
                .sigma
                .iter()
                .map(|(s, ps)| {
                    (
                        s.clone(),
                        ps.iter().map(|p| self.precisifications[p.0].clone()).collect(),
                    )
                })
                .collect(),
            interpretation: self
                .interpretations
                .iter()
                .enumerate()
                .map(|(i, interp)| {
                    (
                        self.precisifications[i].clone(),
                        InterpretationFile {
                            predicates: interp
                                .predicates
                                .iter()
                                .map(|(p, rel)| (p.clone(), rel.iter().map(ids).collect()))
                                .collect(),
                            constants: interp
                                .constants
                                .iter()
                                .map(|(c, e)| (c.clone(), self.domain[e.0].clone()))
                                .collect(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_model_file()).expect("model serialises")
    }

    pub fn from_model_file(
        vocab: &FoslVocabulary,
        file: &FoslModelFile,
    ) -> Result<Self, StructureError> {
        let dom_index = index_ids(&file.domain, "domain")?;
        let prec_index = index_ids(&file.precisifications, "precisifications")?;
        let sigma = resolve_sigma(
            vocab.standpoints(),
            &file.precisifications,
            &prec_index,
            &file.sigma,
        )?;
        for p in file.interpretation.keys() {
            lookup(&prec_index, "precisification", p, || "interpretation".into())?;
        }
        let mut interps = Vec::with_capacity(file.precisifications.len());
        for pname in &file.precisifications {
            let raw = file
                .interpretation
                .get(pname)
                .ok_or_else(|| StructureError::MissingInterpretation(pname.clone()))?;
            let mut interp = Interpretation::default();
            for (pred, tuples) in &raw.predicates {
                let arity = *vocab.predicates().get(pred).ok_or_else(|| {
                    StructureError::UnknownId {
                        kind: "predicate",
                        id: pred.clone(),
                        context: format!("interpretation of `{pname}`"),
                    }
                })?;
                let mut rel = BTreeSet::new();
                for t in tuples {
                    if t.len() != arity {
                        return Err(StructureError::TupleArity {
                            context: format!("predicate `{pred}` at `{pname}`"),
                            tuple: t.clone(),
                            expected: arity,
                            found: t.len(),
                        });
                    }
                    let tuple = t
                        .iter()
                        .map(|id| {
                            lookup(&dom_index, "element", id, || {
                                format!("predicate `{pred}` at `{pname}`")
                            })
                            .map(Elem)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    rel.insert(tuple);
                }
                interp.predicates.insert(pred.clone(), rel);
            }
            for (c, id) in &raw.constants {
                if !vocab.constants().contains(c) {
                    return Err(StructureError::UnknownId {
                        kind: "constant",
                        id: c.clone(),
                        context: format!("interpretation of `{pname}`"),
                    });
                }
                let e = lookup(&dom_index, "element", id, || format!("constant `{c}` at `{pname}`"))?;
                interp.constants.insert(c.clone(), Elem(e));
            }
            interps.push(interp);
        }
        let sigma_idx = sigma.clone();
        FoslStructure::new(
            vocab.clone(),
            file.domain.clone(),
            file.precisifications.clone(),
            sigma_idx,
            interps,
        )
    }

    pub fn from_json(vocab: &FoslVocabulary, text: &str) -> Result<Self, StructureError> {
        let file: FoslModelFile =
            serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        Self::from_model_file(vocab, &file)
    }
}

/// Odometer step over `digits` in base `base`; false once it wraps around.
pub(crate) fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Variable environment: the caller's assignment plus a stack of quantifier
/// bindings.
struct Env<'f> {
    base: &'f Assignment,
    stack: Vec<(&'f Var, Elem)>,
}

impl<'f> Env<'f> {
    fn new(base: &'f Assignment) -> Self {
        Env {
            base,
            stack: Vec::new(),
        }
    }

    fn push(&mut self, x: &'f Var, e: Elem) {
        self.stack.push((x, e));
    }

    fn pop(&mut self) {
        self.stack.pop();
    }

    fn get(&self, x: &Var) -> Result<Elem, EvalError> {
        self.stack
            .iter()
            .rev()
            .find(|(y, _)| *y == x)
            .map(|(_, e)| *e)
            .or_else(|| self.base.get(x).copied())
            .ok_or_else(|| EvalError::UnboundVariable(x.clone()))
    }
}

/// JSON model format.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoslModelFile {
    pub domain: Vec<String>,
    pub precisifications: Vec<String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub interpretation: BTreeMap<String, InterpretationFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretationFile {
    #[serde(default)]
    pub predicates: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
}

impl FoslModelFile {
    /// Vocabulary read off the model itself. Arities come from the first
    /// tuple seen; predicates without any tuple take their arity from `hints`.
    pub fn infer_vocabulary(
        &self,
        hints: &BTreeMap<String, usize>,
    ) -> Result<FoslVocabulary, StructureError> {
        let mut preds: BTreeMap<String, usize> = BTreeMap::new();
        let mut consts = BTreeSet::new();
        for (pname, interp) in &self.interpretation {
            for (p, tuples) in &interp.predicates {
                let arity = tuples.first().map(|t| t.len()).or_else(|| hints.get(p).copied());
                match (preds.get(p), arity) {
                    (Some(&k), Some(a)) if k != a => {
                        return Err(StructureError::TupleArity {
                            context: format!("predicate `{p}` at `{pname}`"),
                            tuple: tuples.first().cloned().unwrap_or_default(),
                            expected: k,
                            found: a,
                        })
                    }
                    (None, Some(a)) => {
                        preds.insert(p.clone(), a);
                    }
                    _ => {}
                }
            }
            consts.extend(interp.constants.keys().cloned());
        }
        for (p, k) in hints {
            preds.entry(p.clone()).or_insert(*k);
        }
        FoslVocabulary::new(preds, consts, self.sigma.keys().cloned())
            .map_err(|e| StructureError::Json(format!("cannot infer vocabulary: {e}")))
    }
}

impl fmt::Display for FoslStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Name-based construction, mainly for fixtures and tests.
#[derive(Debug, Clone)]
pub struct FoslBuilder {
    vocab: FoslVocabulary,
    file: FoslModelFile,
}

impl FoslBuilder {
    pub fn domain(mut self, ids: &[&str]) -> Self {
        self.file.domain = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn precisifications(mut self, ids: &[&str]) -> Self {
        self.file.precisifications = ids.iter().map(|s| s.to_string()).collect();
        for p in ids {
            self.file.interpretation.entry(p.to_string()).or_default();
        }
        self
    }

    pub fn sigma(mut self, standpoint: &str, precs: &[&str]) -> Self {
        self.file
            .sigma
            .insert(standpoint.to_string(), precs.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Adds `predicate(tuple)` at precisification `prec`.
    pub fn fact(mut self, prec: &str, predicate: &str, tuple: &[&str]) -> Self {
        self.file
            .interpretation
            .entry(prec.to_string())
            .or_default()
            .predicates
            .entry(predicate.to_string())
            .or_default()
            .push(tuple.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn constant(mut self, prec: &str, constant: &str, element: &str) -> Self {
        self.file
            .interpretation
            .entry(prec.to_string())
            .or_default()
            .constants
            .insert(constant.to_string(), element.to_string());
        self
    }

    pub fn build(self) -> Result<FoslStructure, StructureError> {
        FoslStructure::from_model_file(&self.vocab, &self.file)
    }
}
