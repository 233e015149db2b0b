//! Finite variable reference logic structures. Names and variables denote
//! indefinite individuals (maps from precisifications to precise entities);
//! precise predicates are evaluated on the entities an individual picks out at
//! the current precisification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fosl::{advance, index_ids, lookup, resolve_sigma, EvalError, Prec, StructureError};
use crate::syntax::{Formula, PredicateKind, Term, V1Vocabulary, Var};

type NamedTuples = BTreeMap<String, Vec<Vec<String>>>;

/// Index of a precise entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entity(pub usize);

/// Index of a registry individual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Individual(pub usize);

pub type V1Assignment = BTreeMap<Var, Individual>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndefiniteIndividual {
    pub id: String,
    /// Entity picked out at each precisification, indexed by `Prec`.
    pub extension: Vec<Entity>,
}

impl IndefiniteIndividual {
    pub fn at(&self, p: Prec) -> Entity {
        self.extension[p.0]
    }
}

/// δ_𝒦, δ_𝒜 and δ_𝒩 at one precisification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct V1Interpretation {
    pub sortals: BTreeMap<String, BTreeSet<Individual>>,
    pub indefinite: BTreeMap<String, BTreeSet<Vec<Individual>>>,
    pub names: BTreeMap<String, Individual>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct V1Structure {
    vocab: V1Vocabulary,
    entities: Vec<String>,
    precisifications: Vec<String>,
    sigma: BTreeMap<String, BTreeSet<Prec>>,
    registry: Vec<IndefiniteIndividual>,
    interpretations: Vec<V1Interpretation>,
    precise: BTreeMap<String, BTreeSet<Vec<Entity>>>,
    domains: Vec<BTreeSet<Individual>>,
    warnings: Vec<String>,
}

impl V1Structure {
    /// Validates and assembles a structure from index-based parts. Missing
    /// predicate entries are read as empty.
    pub fn new(
        vocab: V1Vocabulary,
        entities: Vec<String>,
        precisifications: Vec<String>,
        sigma: BTreeMap<String, BTreeSet<Prec>>,
        registry: Vec<IndefiniteIndividual>,
        mut interpretations: Vec<V1Interpretation>,
        mut precise: BTreeMap<String, BTreeSet<Vec<Entity>>>,
    ) -> Result<Self, StructureError> {
        let entity_index = index_ids(&entities, "entities")?;
        let prec_index = index_ids(&precisifications, "precisifications")?;
        let mut ind_ids = BTreeSet::new();
        for i in &registry {
            if !ind_ids.insert(i.id.clone()) {
                return Err(StructureError::DuplicateId(i.id.clone()));
            }
            if entity_index.contains_key(&i.id) {
                return Err(StructureError::IdCollision(i.id.clone()));
            }
            if i.extension.len() != precisifications.len() {
                let missing = precisifications
                    .get(i.extension.len().min(precisifications.len() - 1))
                    .cloned()
                    .unwrap_or_default();
                return Err(StructureError::IncompleteExtension {
                    individual: i.id.clone(),
                    prec: missing,
                });
            }
            if let Some(e) = i.extension.iter().find(|e| e.0 >= entities.len()) {
                return Err(StructureError::UnknownId {
                    kind: "entity",
                    id: e.0.to_string(),
                    context: format!("extension of `{}`", i.id),
                });
            }
        }
        let raw_sigma: BTreeMap<String, Vec<String>> = sigma
            .iter()
            .map(|(s, ps)| {
                (
                    s.clone(),
                    ps.iter()
                        .map(|p| precisifications.get(p.0).cloned().unwrap_or_else(|| p.0.to_string()))
                        .collect(),
                )
            })
            .collect();
        let sigma = resolve_sigma(vocab.standpoints(), &precisifications, &prec_index, &raw_sigma)?;
        if interpretations.len() != precisifications.len() {
            let missing = precisifications
                .get(interpretations.len())
                .cloned()
                .unwrap_or_default();
            return Err(StructureError::MissingInterpretation(missing));
        }

        let ind_name = |i: &Individual| {
            registry
                .get(i.0)
                .map(|r| r.id.clone())
                .unwrap_or_else(|| format!("#{}", i.0))
        };
        let check_ind = |i: &Individual, context: &dyn Fn() -> String| {
            if i.0 >= registry.len() {
                Err(StructureError::UnknownId {
                    kind: "individual",
                    id: i.0.to_string(),
                    context: context(),
                })
            } else {
                Ok(())
            }
        };
        let mut domains = Vec::with_capacity(precisifications.len());
        for (pi, interp) in interpretations.iter_mut().enumerate() {
            let pname = &precisifications[pi];
            for (p, kind) in interp
                .sortals
                .keys()
                .map(|k| (k, PredicateKind::Sortal))
                .chain(interp.indefinite.keys().map(|a| (a, PredicateKind::Indefinite)))
            {
                if vocab.kind_of(p) != Some(kind) {
                    return Err(StructureError::UnknownId {
                        kind: if kind == PredicateKind::Sortal {
                            "sortal"
                        } else {
                            "indefinite predicate"
                        },
                        id: p.clone(),
                        context: format!("interpretation of `{pname}`"),
                    });
                }
            }
            let mut domain = BTreeSet::new();
            for k in vocab.sortals() {
                let ext = interp.sortals.entry(k.clone()).or_default();
                for i in ext.iter() {
                    check_ind(i, &|| format!("sortal `{k}` at `{pname}`"))?;
                }
                domain.extend(ext.iter().copied());
            }
            for (a, &arity) in vocab.indefinite() {
                let rel = interp.indefinite.entry(a.clone()).or_default();
                for t in rel.iter() {
                    if t.len() != arity {
                        return Err(StructureError::TupleArity {
                            context: format!("indefinite predicate `{a}` at `{pname}`"),
                            tuple: t.iter().map(ind_name).collect(),
                            expected: arity,
                            found: t.len(),
                        });
                    }
                    for i in t {
                        check_ind(i, &|| format!("indefinite predicate `{a}` at `{pname}`"))?;
                        if !domain.contains(i) {
                            return Err(StructureError::IndefiniteOutsideDomain {
                                predicate: a.clone(),
                                individual: ind_name(i),
                                prec: pname.clone(),
                            });
                        }
                    }
                }
            }
            for n in interp.names.keys() {
                if !vocab.names().contains(n) {
                    return Err(StructureError::UnknownId {
                        kind: "name",
                        id: n.clone(),
                        context: format!("interpretation of `{pname}`"),
                    });
                }
            }
            for n in vocab.names() {
                let i = interp.names.get(n).ok_or_else(|| StructureError::MissingConstant {
                    constant: n.clone(),
                    prec: pname.clone(),
                })?;
                check_ind(i, &|| format!("name `{n}` at `{pname}`"))?;
                if !domain.contains(i) {
                    return Err(StructureError::NameOutsideDomain {
                        name: n.clone(),
                        individual: ind_name(i),
                        prec: pname.clone(),
                    });
                }
            }
            domains.push(domain);
        }
        for q in precise.keys() {
            if vocab.kind_of(q) != Some(PredicateKind::Precise) {
                return Err(StructureError::UnknownId {
                    kind: "precise predicate",
                    id: q.clone(),
                    context: "precise".into(),
                });
            }
        }
        for (q, &arity) in vocab.precise() {
            for t in precise.entry(q.clone()).or_default().iter() {
                if t.len() != arity {
                    return Err(StructureError::TupleArity {
                        context: format!("precise predicate `{q}`"),
                        tuple: t
                            .iter()
                            .map(|e| entities.get(e.0).cloned().unwrap_or_else(|| e.0.to_string()))
                            .collect(),
                        expected: arity,
                        found: t.len(),
                    });
                }
                if let Some(e) = t.iter().find(|e| e.0 >= entities.len()) {
                    return Err(StructureError::UnknownId {
                        kind: "entity",
                        id: e.0.to_string(),
                        context: format!("precise predicate `{q}`"),
                    });
                }
            }
        }
        let mut warnings = Vec::new();
        let mut seen: BTreeMap<&[Entity], &str> = BTreeMap::new();
        for i in &registry {
            if let Some(first) = seen.insert(&i.extension, &i.id) {
                warnings.push(format!(
                    "individuals `{first}` and `{}` have identical extensions; they are kept distinct",
                    i.id
                ));
            }
        }
        Ok(V1Structure {
            vocab,
            entities,
            precisifications,
            sigma,
            registry,
            interpretations,
            precise,
            domains,
            warnings,
        })
    }

    pub fn builder(vocab: &V1Vocabulary) -> V1Builder {
        V1Builder {
            vocab: vocab.clone(),
            file: V1ModelFile::default(),
        }
    }

    pub fn vocabulary(&self) -> &V1Vocabulary {
        &self.vocab
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn precisifications(&self) -> &[String] {
        &self.precisifications
    }

    pub fn registry(&self) -> &[IndefiniteIndividual] {
        &self.registry
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn precs(&self) -> impl Iterator<Item = Prec> {
        (0..self.precisifications.len()).map(Prec)
    }

    pub fn individuals(&self) -> impl Iterator<Item = Individual> {
        (0..self.registry.len()).map(Individual)
    }

    pub fn prec(&self, id: &str) -> Option<Prec> {
        self.precisifications.iter().position(|p| p == id).map(Prec)
    }

    pub fn individual(&self, id: &str) -> Option<Individual> {
        self.registry.iter().position(|i| i.id == id).map(Individual)
    }

    pub fn entity(&self, id: &str) -> Option<Entity> {
        self.entities.iter().position(|e| e == id).map(Entity)
    }

    pub fn individual_id(&self, i: Individual) -> &str {
        &self.registry[i.0].id
    }

    pub fn entity_id(&self, e: Entity) -> &str {
        &self.entities[e.0]
    }

    pub fn prec_id(&self, p: Prec) -> &str {
        &self.precisifications[p.0]
    }

    pub fn sigma(&self, standpoint: &str) -> Option<&BTreeSet<Prec>> {
        self.sigma.get(standpoint)
    }

    pub fn interpretation(&self, p: Prec) -> &V1Interpretation {
        &self.interpretations[p.0]
    }

    pub fn precise_extension(&self, q: &str) -> Option<&BTreeSet<Vec<Entity>>> {
        self.precise.get(q)
    }

    /// I_π: the union of all sortal extensions at `p`.
    pub fn individuals_at(&self, p: Prec) -> &BTreeSet<Individual> {
        &self.domains[p.0]
    }

    fn check_prec(&self, p: Prec) -> Result<(), EvalError> {
        if p.0 < self.precisifications.len() {
            Ok(())
        } else {
            Err(EvalError::UnknownPrecisification(p.0))
        }
    }

    pub fn eval_term_v1(
        &self,
        p: Prec,
        v: &V1Assignment,
        t: &Term,
    ) -> Result<Individual, EvalError> {
        self.check_prec(p)?;
        match t {
            Term::Var(x) => {
                let i = *v.get(x).ok_or_else(|| EvalError::UnboundVariable(x.clone()))?;
                if i.0 >= self.registry.len() {
                    return Err(EvalError::UnknownValue {
                        var: x.clone(),
                        index: i.0,
                    });
                }
                Ok(i)
            }
            Term::Const(n) => self.interpretations[p.0]
                .names
                .get(n)
                .copied()
                .ok_or_else(|| EvalError::UnknownConstant(n.clone())),
        }
    }

    pub fn satisfies_v1(
        &self,
        p: Prec,
        v: &V1Assignment,
        f: &Formula,
    ) -> Result<bool, EvalError> {
        self.check_prec(p)?;
        for x in f.free_variables() {
            match v.get(&x) {
                None => return Err(EvalError::UnboundVariable(x)),
                Some(i) if i.0 >= self.registry.len() => {
                    return Err(EvalError::UnknownValue { var: x, index: i.0 })
                }
                Some(_) => {}
            }
        }
        let mut stack = Vec::new();
        self.eval(p, v, &mut stack, f)
    }

    fn term_value(
        &self,
        p: Prec,
        v: &V1Assignment,
        stack: &[(&Var, Individual)],
        t: &Term,
    ) -> Result<Individual, EvalError> {
        match t {
            Term::Var(x) => stack
                .iter()
                .rev()
                .find(|(y, _)| *y == x)
                .map(|(_, i)| *i)
                .or_else(|| v.get(x).copied())
                .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
            Term::Const(n) => self.interpretations[p.0]
                .names
                .get(n)
                .copied()
                .ok_or_else(|| EvalError::UnknownConstant(n.clone())),
        }
    }

    fn eval<'f>(
        &self,
        p: Prec,
        v: &V1Assignment,
        stack: &mut Vec<(&'f Var, Individual)>,
        f: &'f Formula,
    ) -> Result<bool, EvalError> {
        match f {
            Formula::Atom(pred, args) => {
                let kind = self
                    .vocab
                    .kind_of(pred)
                    .ok_or_else(|| EvalError::UnknownPredicate(pred.clone()))?;
                let expected = match kind {
                    PredicateKind::Sortal => 1,
                    PredicateKind::Indefinite => self.vocab.indefinite()[pred],
                    PredicateKind::Precise => self.vocab.precise()[pred],
                };
                if expected != args.len() {
                    return Err(EvalError::Arity {
                        predicate: pred.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                let tuple = args
                    .iter()
                    .map(|t| self.term_value(p, v, stack, t))
                    .collect::<Result<Vec<_>, _>>()?;
                let interp = &self.interpretations[p.0];
                Ok(match kind {
                    PredicateKind::Sortal => interp.sortals[pred].contains(&tuple[0]),
                    PredicateKind::Indefinite => interp.indefinite[pred].contains(&tuple),
                    PredicateKind::Precise => {
                        let entities: Vec<Entity> =
                            tuple.iter().map(|i| self.registry[i.0].at(p)).collect();
                        self.precise[pred].contains(&entities)
                    }
                })
            }
            Formula::Equal(a, b) => {
                Ok(self.term_value(p, v, stack, a)? == self.term_value(p, v, stack, b)?)
            }
            Formula::Not(g) => Ok(!self.eval(p, v, stack, g)?),
            Formula::And(a, b) => Ok(self.eval(p, v, stack, a)? && self.eval(p, v, stack, b)?),
            Formula::Forall(x, g) => {
                for &i in &self.domains[p.0] {
                    stack.push((x, i));
                    let holds = self.eval(p, v, stack, g);
                    stack.pop();
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
                    if !self.eval(q, v, stack, g)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Truth at `p` under every assignment of the free variables into the
    /// registry.
    pub fn satisfies_at_v1(&self, p: Prec, f: &Formula) -> Result<bool, EvalError> {
        let free: Vec<Var> = f.free_variables().into_iter().collect();
        if !free.is_empty() && self.registry.is_empty() {
            return Ok(true);
        }
        let mut digits = vec![0usize; free.len()];
        loop {
            let v: V1Assignment = free
                .iter()
                .cloned()
                .zip(digits.iter().map(|&d| Individual(d)))
                .collect();
            if !self.satisfies_v1(p, &v, f)? {
                return Ok(false);
            }
            if !advance(&mut digits, self.registry.len()) {
                return Ok(true);
            }
        }
    }

    pub fn is_model_v1(&self, f: &Formula) -> Result<bool, EvalError> {
        for p in self.precs() {
            if !self.satisfies_at_v1(p, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_model_file(&self) -> V1ModelFile {
        let pid = |p: usize| self.precisifications[p].clone();
        let iid = |i: &Individual| self.registry[i.0].id.clone();
        let per_prec = |f: &dyn Fn(&V1Interpretation) -> NamedTuples| {
            self.interpretations
                .iter()
                .enumerate()
                .map(|(p, interp)| (pid(p), f(interp)))
                .collect::<BTreeMap<_, _>>()
        };
        V1ModelFile {
            entities: self.entities.clone(),
            precisifications: self.precisifications.clone(),
            sigma: self
                .sigma
                .iter()
                .map(|(s, ps)| (s.clone(), ps.iter().map(|p| pid(p.0)).collect()))
                .collect(),
            individuals: self
                .registry
                .iter()
                .map(|i| {
                    (
                        i.id.clone(),
                        i.extension
                            .iter()
                            .enumerate()
                            .map(|(p, e)| (pid(p), self.entities[e.0].clone()))
                            .collect(),
                    )
                })
                .collect(),
            sortals: self
                .interpretations
                .iter()
                .enumerate()
                .map(|(p, interp)| {
                    (
                        pid(p),
                        interp
                            .sortals
                            .iter()
                            .map(|(k, ext)| (k.clone(), ext.iter().map(iid).collect()))
                            .collect(),
                    )
                })
                .collect(),
            indefinite: per_prec(&|interp| {
                interp
                    .indefinite
                    .iter()
                    .map(|(a, rel)| {
                        (
                            a.clone(),
                            rel.iter().map(|t| t.iter().map(iid).collect()).collect(),
                        )
                    })
                    .collect()
            }),
            precise: self
                .precise
                .iter()
                .map(|(q, rel)| {
                    (
                        q.clone(),
                        rel.iter()
                            .map(|t| t.iter().map(|e| self.entities[e.0].clone()).collect())
                            .collect(),
                    )
                })
                .collect(),
            names: self
                .interpretations
                .iter()
                .enumerate()
                .map(|(p, interp)| {
                    (
                        pid(p),
                        interp.names.iter().map(|(n, i)| (n.clone(), iid(i))).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_model_file()).expect("model serialises")
    }

    pub fn from_model_file(vocab: &V1Vocabulary, file: &V1ModelFile) -> Result<Self, StructureError> {
        let entity_index = index_ids(&file.entities, "entities")?;
        let prec_index = index_ids(&file.precisifications, "precisifications")?;
        let sigma = resolve_sigma(
            vocab.standpoints(),
            &file.precisifications,
            &prec_index,
            &file.sigma,
        )?;
        let mut registry = Vec::new();
        let mut ind_index = BTreeMap::new();
        for (id, ext) in &file.individuals {
            for p in ext.keys() {
                lookup(&prec_index, "precisification", p, || format!("extension of `{id}`"))?;
            }
            let mut extension = Vec::new();
            for p in &file.precisifications {
                let e = ext.get(p).ok_or_else(|| StructureError::IncompleteExtension {
                    individual: id.clone(),
                    prec: p.clone(),
                })?;
                let e = lookup(&entity_index, "entity", e, || format!("extension of `{id}`"))?;
                extension.push(Entity(e));
            }
            ind_index.insert(id.clone(), registry.len());
            registry.push(IndefiniteIndividual {
                id: id.clone(),
                extension,
            });
        }
        let keyed = file
            .sortals
            .keys()
            .chain(file.indefinite.keys())
            .chain(file.names.keys());
        for p in keyed {
            lookup(&prec_index, "precisification", p, || "model file".into())?;
        }
        let ind = |id: &str, context: &dyn Fn() -> String| {
            lookup(&ind_index, "individual", id, context).map(Individual)
        };
        let mut interps = Vec::new();
        for pname in &file.precisifications {
            let mut interp = V1Interpretation::default();
            if let Some(sortals) = file.sortals.get(pname) {
                for (k, ids) in sortals {
                    let set = ids
                        .iter()
                        .map(|i| ind(i, &|| format!("sortal `{k}` at `{pname}`")))
                        .collect::<Result<_, _>>()?;
                    interp.sortals.insert(k.clone(), set);
                }
            }
            if let Some(indef) = file.indefinite.get(pname) {
                for (a, tuples) in indef {
                    let rel = tuples
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|i| ind(i, &|| format!("indefinite predicate `{a}` at `{pname}`")))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<_, _>>()?;
                    interp.indefinite.insert(a.clone(), rel);
                }
            }
            if let Some(names) = file.names.get(pname) {
                for (n, i) in names {
                    interp
                        .names
                        .insert(n.clone(), ind(i, &|| format!("name `{n}` at `{pname}`"))?);
                }
            }
            interps.push(interp);
        }
        let mut precise = BTreeMap::new();
        for (q, tuples) in &file.precise {
            let rel = tuples
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|e| {
                            lookup(&entity_index, "entity", e, || format!("precise predicate `{q}`"))
                                .map(Entity)
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            precise.insert(q.clone(), rel);
        }
        V1Structure::new(
            vocab.clone(),
            file.entities.clone(),
            file.precisifications.clone(),
            sigma,
            registry,
            interps,
            precise,
        )
    }

    pub fn from_json(vocab: &V1Vocabulary, text: &str) -> Result<Self, StructureError> {
        let file: V1ModelFile =
            serde_json::from_str(text).map_err(|e| StructureError::Json(e.to_string()))?;
        Self::from_model_file(vocab, &file)
    }
}

impl fmt::Display for V1Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// JSON model format.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct V1ModelFile {
    pub entities: Vec<String>,
    pub precisifications: Vec<String>,
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub individuals: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub sortals: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub indefinite: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default)]
    pub precise: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub names: BTreeMap<String, BTreeMap<String, String>>,
}

/// Name-based construction, mainly for fixtures and tests.
#[derive(Debug, Clone)]
pub struct V1Builder {
    vocab: V1Vocabulary,
    file: V1ModelFile,
}

impl V1Builder {
    pub fn entities(mut self, ids: &[&str]) -> Self {
        self.file.entities = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn precisifications(mut self, ids: &[&str]) -> Self {
        self.file.precisifications = ids.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn sigma(mut self, standpoint: &str, precs: &[&str]) -> Self {
        self.file
            .sigma
            .insert(standpoint.to_string(), precs.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Adds an individual given as `(precisification, entity)` pairs.
    pub fn individual(mut self, id: &str, extension: &[(&str, &str)]) -> Self {
        self.file.individuals.insert(
            id.to_string(),
            extension
                .iter()
                .map(|(p, e)| (p.to_string(), e.to_string()))
                .collect(),
        );
        self
    }

    pub fn sortal(mut self, prec: &str, sortal: &str, individual: &str) -> Self {
        self.file
            .sortals
            .entry(prec.to_string())
            .or_default()
            .entry(sortal.to_string())
            .or_default()
            .push(individual.to_string());
        self
    }

    pub fn indefinite(mut self, prec: &str, predicate: &str, tuple: &[&str]) -> Self {
        self.file
            .indefinite
            .entry(prec.to_string())
            .or_default()
            .entry(predicate.to_string())
            .or_default()
            .push(tuple.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn precise(mut self, predicate: &str, tuple: &[&str]) -> Self {
        self.file
            .precise
            .entry(predicate.to_string())
            .or_default()
            .push(tuple.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn name(mut self, prec: &str, name: &str, individual: &str) -> Self {
        self.file
            .names
            .entry(prec.to_string())
            .or_default()
            .insert(name.to_string(), individual.to_string());
        self
    }

    pub fn build(self) -> Result<V1Structure, StructureError> {
        V1Structure::from_model_file(&self.vocab, &self.file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn vocab() -> V1Vocabulary {
        V1Vocabulary::from_parts(
            &["Building", "Desert"],
            &[("AridArea", 1), ("Near", 2)],
            &[("PartOf", 2)],
            &["house", "a"],
            &[],
        )
        .unwrap()
    }

    fn v0() -> V1Structure {
        let mut b = V1Structure::builder(&vocab())
            .entities(&["e_h", "e1", "e2"])
            .precisifications(&["p1", "p2"])
            .individual("i_h", &[("p1", "e_h"), ("p2", "e_h")])
            .individual("i_d", &[("p1", "e1"), ("p2", "e2")])
            .precise("PartOf", &["e_h", "e1"]);
        for p in ["p1", "p2"] {
            b = b
                .sortal(p, "Building", "i_h")
                .sortal(p, "Desert", "i_d")
                .indefinite(p, "AridArea", &["i_d"])
                .name(p, "house", "i_h")
                .name(p, "a", "i_d");
        }
        b.build().unwrap()
    }

    fn parse(text: &str) -> Formula {
        parse_formula(text, &vocab()).unwrap()
    }

    #[test]
    fn individual_domain_is_union_of_sortals() {
        let m = v0();
        let ids: Vec<&str> = m
            .individuals_at(Prec(0))
            .iter()
            .map(|&i| m.individual_id(i))
            .collect();
        assert_eq!(ids, ["i_d", "i_h"]);
    }

    #[test]
    fn empty_sortals_give_empty_domain() {
        let v = V1Vocabulary::from_parts(&["K"], &[], &[], &[], &[]).unwrap();
        let m = V1Structure::builder(&v)
            .entities(&["e"])
            .precisifications(&["p"])
            .individual("i", &[("p", "e")])
            .build()
            .unwrap();
        assert!(m.individuals_at(Prec(0)).is_empty());
        let f = parse_formula("exists ?x K(?x)", &v).unwrap();
        assert!(!m.is_model_v1(&f).unwrap());
    }

    #[test]
    fn names_denote_individuals() {
        let m = v0();
        let none = V1Assignment::new();
        let i_h = m.individual("i_h").unwrap();
        let i_d = m.individual("i_d").unwrap();
        assert_eq!(m.eval_term_v1(Prec(0), &none, &Term::constant("house")), Ok(i_h));
        assert_eq!(m.eval_term_v1(Prec(1), &none, &Term::constant("a")), Ok(i_d));
        let v: V1Assignment = [(Var::new("x"), i_d)].into();
        assert_eq!(m.eval_term_v1(Prec(0), &v, &Term::var("x")), Ok(i_d));
    }

    #[test]
    fn precise_atoms_dereference_per_precisification() {
        let m = v0();
        let f = parse("PartOf(house, a)");
        let none = V1Assignment::new();
        assert!(m.satisfies_v1(Prec(0), &none, &f).unwrap());
        assert!(!m.satisfies_v1(Prec(1), &none, &f).unwrap());
    }

    #[test]
    fn formula_c_holds_in_v0() {
        let m = v0();
        let f = parse(
            "exists ?a ([*] (AridArea(?a) & Desert(?a)) & <*> PartOf(house, ?a) & ![*] PartOf(house, ?a))",
        );
        assert!(m.satisfies_v1(Prec(0), &V1Assignment::new(), &f).unwrap());
        assert!(m.is_model_v1(&f).unwrap());
    }

    #[test]
    fn quantifiers_range_over_sortal_domain() {
        let m = v0();
        assert!(m
            .is_model_v1(&parse("forall ?x (Building(?x) | Desert(?x))"))
            .unwrap());
    }

    #[test]
    fn free_variable_may_leave_the_domain() {
        let v = V1Vocabulary::from_parts(&["K"], &[("A", 1)], &[], &[], &[]).unwrap();
        let m = V1Structure::builder(&v)
            .entities(&["e"])
            .precisifications(&["p"])
            .individual("i", &[("p", "e")])
            .build()
            .unwrap();
        let f = parse_formula("A(?x)", &v).unwrap();
        let assign: V1Assignment = [(Var::new("x"), Individual(0))].into();
        assert_eq!(m.satisfies_v1(Prec(0), &assign, &f), Ok(false));
        let bad: V1Assignment = [(Var::new("x"), Individual(3))].into();
        assert!(matches!(
            m.satisfies_v1(Prec(0), &bad, &f),
            Err(EvalError::UnknownValue { .. })
        ));
    }

    #[test]
    fn loader_enforces_domain_constraints() {
        let v = V1Vocabulary::from_parts(&["K"], &[("A", 1)], &[], &["n"], &[]).unwrap();
        let base = || {
            V1Structure::builder(&v)
                .entities(&["e"])
                .precisifications(&["p"])
                .individual("i", &[("p", "e")])
                .individual("j", &[("p", "e")])
                .sortal("p", "K", "i")
        };
        assert!(base().name("p", "n", "i").build().is_ok());
        let err = base().name("p", "n", "j").build().unwrap_err();
        assert!(matches!(err, StructureError::NameOutsideDomain { .. }));
        assert!(err.to_string().contains("not in the individual domain"));
        let err = base()
            .name("p", "n", "i")
            .indefinite("p", "A", &["j"])
            .build()
            .unwrap_err();
        assert!(matches!(err, StructureError::IndefiniteOutsideDomain { .. }));
        assert!(matches!(
            base().build(),
            Err(StructureError::MissingConstant { .. })
        ));
        let m = base().name("p", "n", "i").build().unwrap();
        assert_eq!(m.warnings().len(), 1);
    }

    #[test]
    fn loader_rejects_bad_extensions_and_collisions() {
        let v = V1Vocabulary::from_parts(&["K"], &[], &[("Q", 1)], &[], &[]).unwrap();
        let base = || {
            V1Structure::builder(&v)
                .entities(&["e"])
                .precisifications(&["p", "q"])
        };
        assert!(matches!(
            base().individual("i", &[("p", "e")]).build(),
            Err(StructureError::IncompleteExtension { .. })
        ));
        assert!(matches!(
            base().individual("e", &[("p", "e"), ("q", "e")]).build(),
            Err(StructureError::IdCollision(_))
        ));
        assert!(matches!(
            base().precise("Q", &["e", "e"]).build(),
            Err(StructureError::TupleArity { .. })
        ));
        assert!(matches!(
            base().precise("Q", &["x"]).build(),
            Err(StructureError::UnknownId { kind: "entity", .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let m = v0();
        assert_eq!(V1Structure::from_json(&vocab(), &m.to_json()).unwrap(), m);
    }
}
