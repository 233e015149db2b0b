//! Translation of variable reference logic into first-order standpoint logic,
//! the accompanying axiom set, and the model correspondence in both
//! directions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::fosl::{Elem, EvalError, FoslStructure, Interpretation, Prec, StructureError};
use crate::syntax::{
    FoslVocabulary, Formula, PredicateKind, Term, V1Vocabulary, ValidationError, Var, VocabError,
    UNIVERSAL,
};
use crate::v1::{Entity, IndefiniteIndividual, Individual, V1Interpretation, V1Structure};

pub const IND: &str = "ind";
pub const EXT: &str = "ext";
pub const INK: &str = "ink";
pub const PREC: &str = "prec";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslationError {
    #[error("the axiom set needs at least one sortal")]
    NoSortals,
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Vocabulary(#[from] VocabError),
    #[error("structure lacks predicate `{predicate}`/{arity} of the translated vocabulary")]
    MissingPredicate { predicate: String, arity: usize },
    #[error("structure violates axiom {label}: {formula}")]
    AxiomViolated { label: String, formula: String },
    #[error("name `{name}` cannot denote an individual at `{prec}`: the individual domain is empty")]
    NoIndividualForName { name: String, prec: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// The standpoint vocabulary a V1 vocabulary translates into: all user
/// predicates plus `ind`, `ext`, `ink` and `prec`; names become constants.
pub fn translated_vocabulary(v: &V1Vocabulary) -> FoslVocabulary {
    let mut preds: BTreeMap<String, usize> = v.sortals().iter().map(|k| (k.clone(), 1)).collect();
    preds.extend(v.indefinite().iter().map(|(a, k)| (a.clone(), *k)));
    preds.extend(v.precise().iter().map(|(q, k)| (q.clone(), *k)));
    for p in [IND, EXT, INK] {
        preds.insert(p.to_string(), 1);
    }
    preds.insert(PREC.to_string(), 2);
    FoslVocabulary::new(
        preds,
        v.names().iter().cloned(),
        v.standpoints().iter().cloned(),
    )
    .expect("V1 vocabulary invariants keep the translated symbols disjoint")
}

fn unary(p: &str, t: Term) -> Formula {
    Formula::atom(p, vec![t])
}

fn prec_atom(a: Term, b: Term) -> Formula {
    Formula::atom(PREC, vec![a, b])
}

struct Fresh {
    taken: BTreeSet<Var>,
    next: usize,
}

impl Fresh {
    fn var(&mut self) -> Var {
        loop {
            self.next += 1;
            let v = Var::new(format!("e{}", self.next));
            if !self.taken.contains(&v) {
                return v;
            }
        }
    }
}

/// The structural translation. Precise atoms are rewritten to quantify over
/// the entities their arguments pick out; quantifiers are relativised to
/// `ink`. Fresh variables `?e1, ?e2, …` are numbered across the whole formula
/// and skip names already used in `f`.
pub fn trans(vocab: &V1Vocabulary, f: &Formula) -> Result<Formula, TranslationError> {
    f.validate(vocab)?;
    let mut fresh = Fresh {
        taken: f.variables(),
        next: 0,
    };
    Ok(trans_rec(vocab, f, &mut fresh))
}

fn trans_rec(vocab: &V1Vocabulary, f: &Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Atom(p, args) if vocab.kind_of(p) == Some(PredicateKind::Precise) => {
            let es: Vec<Var> = args.iter().map(|_| fresh.var()).collect();
            let q = Formula::atom(p, es.iter().cloned().map(Term::Var).collect());
            let links = args
                .iter()
                .zip(&es)
                .map(|(t, e)| prec_atom(t.clone(), Term::Var(e.clone())));
            let body = Formula::conjunction(std::iter::once(q).chain(links))
                .expect("conjunction has at least one part");
            Formula::exists_all(es, body)
        }
        Formula::Atom(..) | Formula::Equal(..) => f.clone(),
        Formula::Not(g) => Formula::not(trans_rec(vocab, g, fresh)),
        Formula::And(a, b) => {
            let a = trans_rec(vocab, a, fresh);
            Formula::and(a, trans_rec(vocab, b, fresh))
        }
        Formula::Forall(x, g) => Formula::forall(
            x.clone(),
            Formula::implies(unary(INK, Term::Var(x.clone())), trans_rec(vocab, g, fresh)),
        ),
        Formula::Box(s, g) => Formula::boxed(s, trans_rec(vocab, g, fresh)),
    }
}

/// One instance of an axiom schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    /// Schema number 1–8; strict-name axioms carry `None`.
    pub schema: Option<u8>,
    pub label: String,
    pub formula: Formula,
}

fn schema_vars(k: usize) -> Vec<Var> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|n| Var::new(*n)).collect()
    } else {
        (1..=k).map(|i| Var::new(format!("x{i}"))).collect()
    }
}

fn terms(vars: &[Var]) -> Vec<Term> {
    vars.iter().cloned().map(Term::Var).collect()
}

/// The axiom set in schema order 1–8, one formula per schema instance.
/// With `strict_names`, `ink(n)` is appended for every name.
pub fn axiom_set(vocab: &V1Vocabulary, strict_names: bool) -> Result<Vec<Axiom>, TranslationError> {
    if vocab.sortals().is_empty() {
        return Err(TranslationError::NoSortals);
    }
    let x = Var::new("x");
    let y = Var::new("y");
    let z = Var::new("z");
    let tx = || Term::Var(x.clone());
    let ty = || Term::Var(y.clone());
    let tz = || Term::Var(z.clone());
    let rigid = |p: &str, args: Vec<Term>| {
        let a = Formula::atom(p, args);
        Formula::iff(a.clone(), Formula::boxed(UNIVERSAL, a))
    };
    let mut out = Vec::new();
    let mut push = |schema: u8, label: String, formula: Formula| {
        out.push(Axiom {
            schema: Some(schema),
            label,
            formula,
        })
    };

    push(
        1,
        "1".into(),
        Formula::forall(
            x.clone(),
            Formula::iff(unary(IND, tx()), Formula::not(unary(EXT, tx()))),
        ),
    );
    push(
        2,
        "2".into(),
        Formula::forall(
            x.clone(),
            Formula::and(rigid(IND, vec![tx()]), rigid(EXT, vec![tx()])),
        ),
    );
    for (q, &k) in vocab.precise() {
        let vs = schema_vars(k);
        push(
            3,
            format!("3 ({q})"),
            Formula::forall_all(vs.clone(), rigid(q, terms(&vs))),
        );
    }
    push(
        4,
        "4".into(),
        Formula::forall_all(
            [x.clone(), y.clone()],
            Formula::implies(
                prec_atom(tx(), ty()),
                Formula::and(unary(IND, tx()), unary(EXT, ty())),
            ),
        ),
    );
    push(
        5,
        "5".into(),
        Formula::forall(
            x.clone(),
            Formula::implies(
                unary(IND, tx()),
                Formula::exists(y.clone(), prec_atom(tx(), ty())),
            ),
        ),
    );
    push(
        6,
        "6".into(),
        Formula::forall_all(
            [x.clone(), y.clone(), z.clone()],
            Formula::implies(
                Formula::and(prec_atom(tx(), ty()), prec_atom(tx(), tz())),
                Formula::equal(ty(), tz()),
            ),
        ),
    );
    for (a, &k) in vocab.indefinite() {
        let vs = schema_vars(k);
        let inks = Formula::conjunction(vs.iter().map(|v| unary(INK, Term::Var(v.clone()))))
            .expect("indefinite arity is at least one");
        push(
            7,
            format!("7 ({a})"),
            Formula::forall_all(
                vs.clone(),
                Formula::implies(Formula::atom(a, terms(&vs)), inks),
            ),
        );
    }
    let sorts = Formula::disjunction(vocab.sortals().iter().map(|k| unary(k, tx())))
        .expect("sortals are non-empty");
    push(
        8,
        "8".into(),
        Formula::forall(
            x.clone(),
            Formula::and(
                Formula::implies(unary(INK, tx()), unary(IND, tx())),
                Formula::iff(unary(INK, tx()), sorts),
            ),
        ),
    );
    if strict_names {
        for n in vocab.names() {
            out.push(Axiom {
                schema: None,
                label: format!("names ({n})"),
                formula: unary(INK, Term::constant(n)),
            });
        }
    }
    Ok(out)
}

/// `trans(f)` conjoined with `[*] φ` for every axiom, right-associated and in
/// axiom order.
pub fn full_translation(
    vocab: &V1Vocabulary,
    f: &Formula,
    strict_names: bool,
) -> Result<Formula, TranslationError> {
    f.validate_sentence(vocab)?;
    let head = trans(vocab, f)?;
    let axioms = axiom_set(vocab, strict_names)?;
    Ok(Formula::conjunction(
        std::iter::once(head).chain(axioms.into_iter().map(|a| Formula::boxed(UNIVERSAL, a.formula))),
    )
    .expect("non-empty conjunction"))
}

/// Size and monodicity summary written next to a translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub source_size: usize,
    pub trans_size: usize,
    pub full_size: usize,
    pub axiom_count: usize,
    pub strict_names: bool,
    pub source_monodic: bool,
    pub trans_monodic: bool,
    pub full_monodic: bool,
    pub non_monodic_axioms: Vec<String>,
}

pub fn translation_report(
    vocab: &V1Vocabulary,
    f: &Formula,
    strict_names: bool,
) -> Result<TranslationReport, TranslationError> {
    let t = trans(vocab, f)?;
    let full = full_translation(vocab, f, strict_names)?;
    let axioms = axiom_set(vocab, strict_names)?;
    Ok(TranslationReport {
        source_size: f.size(),
        trans_size: t.size(),
        full_size: full.size(),
        axiom_count: axioms.len(),
        strict_names,
        source_monodic: f.is_monodic(),
        trans_monodic: t.is_monodic(),
        full_monodic: full.is_monodic(),
        non_monodic_axioms: axioms
            .iter()
            .filter(|a| !Formula::boxed(UNIVERSAL, a.formula.clone()).is_monodic())
            .map(|a| a.label.clone())
            .collect(),
    })
}

/// Standpoint structure corresponding to a V1 structure. The domain is the
/// entities followed by the registry individuals.
pub fn lift_model(m: &V1Structure) -> FoslStructure {
    let vocab = translated_vocabulary(m.vocabulary());
    let n_ent = m.entities().len();
    let ent = |e: Entity| Elem(e.0);
    let ind = |i: Individual| Elem(n_ent + i.0);
    let mut domain = m.entities().to_vec();
    domain.extend(m.registry().iter().map(|i| i.id.clone()));
    let sigma = m
        .vocabulary()
        .standpoints()
        .iter()
        .map(|s| (s.clone(), m.sigma(s).cloned().unwrap_or_default()))
        .collect();
    let singletons =
        |it: &mut dyn Iterator<Item = Elem>| it.map(|e| vec![e]).collect::<BTreeSet<_>>();
    let interps = m
        .precs()
        .map(|p| {
            let src = m.interpretation(p);
            let mut out = Interpretation::default();
            for (k, ext) in &src.sortals {
                out.predicates
                    .insert(k.clone(), singletons(&mut ext.iter().map(|&i| ind(i))));
            }
            for (a, rel) in &src.indefinite {
                out.predicates.insert(
                    a.clone(),
                    rel.iter().map(|t| t.iter().map(|&i| ind(i)).collect()).collect(),
                );
            }
            for q in m.vocabulary().precise().keys() {
                let rel = m.precise_extension(q).expect("precise predicate interpreted");
                out.predicates.insert(
                    q.clone(),
                    rel.iter().map(|t| t.iter().map(|&e| ent(e)).collect()).collect(),
                );
            }
            out.predicates
                .insert(IND.into(), singletons(&mut m.individuals().map(ind)));
            out.predicates
                .insert(EXT.into(), singletons(&mut (0..n_ent).map(|e| ent(Entity(e)))));
            out.predicates.insert(
                INK.into(),
                singletons(&mut m.individuals_at(p).iter().map(|&i| ind(i))),
            );
            out.predicates.insert(
                PREC.into(),
                m.individuals()
                    .map(|i| vec![ind(i), ent(m.registry()[i.0].at(p))])
                    .collect(),
            );
            out.constants = src.names.iter().map(|(n, &i)| (n.clone(), ind(i))).collect();
            out
        })
        .collect();
    FoslStructure::new(vocab, domain, m.precisifications().to_vec(), sigma, interps)
        .expect("lifted structure satisfies the standpoint invariants")
}

/// A lowered structure plus the name remappings made on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lowered {
    pub structure: V1Structure,
    pub warnings: Vec<String>,
}

/// V1 structure corresponding to a standpoint structure that satisfies every
/// boxed axiom. Names that do not denote an individual in the sortal domain
/// at some precisification are mapped to the smallest such individual and a
/// warning is recorded.
pub fn lower_model(
    m: &FoslStructure,
    vocab: &V1Vocabulary,
    strict_names: bool,
) -> Result<Lowered, TranslationError> {
    let target = translated_vocabulary(vocab);
    for (p, &k) in target.predicates() {
        if m.vocabulary().predicates().get(p) != Some(&k) {
            return Err(TranslationError::MissingPredicate {
                predicate: p.clone(),
                arity: k,
            });
        }
    }
    for ax in axiom_set(vocab, strict_names)? {
        if !m.is_model(&ax.formula)? {
            return Err(TranslationError::AxiomViolated {
                label: ax.label,
                formula: ax.formula.to_string(),
            });
        }
    }
    let p0 = Prec(0);
    let holds = |p: Prec, pred: &str, e: Elem| {
        m.extension(p, pred)
            .is_some_and(|rel| rel.contains(&vec![e]))
    };
    let ext_elems: Vec<Elem> = m.elements().filter(|&e| holds(p0, EXT, e)).collect();
    let ind_elems: Vec<Elem> = m.elements().filter(|&e| holds(p0, IND, e)).collect();
    let entity_of: BTreeMap<Elem, Entity> = ext_elems
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, Entity(i)))
        .collect();
    let individual_of: BTreeMap<Elem, Individual> = ind_elems
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, Individual(i)))
        .collect();
    let registry = ind_elems
        .iter()
        .map(|&x| IndefiniteIndividual {
            id: m.element_id(x).to_string(),
            extension: m
                .precs()
                .map(|p| {
                    let partner = m.extension(p, PREC).and_then(|rel| {
                        rel.iter().find(|t| t[0] == x).map(|t| t[1])
                    });
                    entity_of[&partner.expect("axiom 5 gives every individual a partner")]
                })
                .collect(),
        })
        .collect();
    let mut warnings = Vec::new();
    let mut interps = Vec::new();
    for p in m.precs() {
        let mut out = V1Interpretation::default();
        for k in vocab.sortals() {
            let ext = m.extension(p, k).expect("sortal interpreted");
            out.sortals.insert(
                k.clone(),
                ext.iter().filter_map(|t| individual_of.get(&t[0]).copied()).collect(),
            );
        }
        let domain: BTreeSet<Individual> = out.sortals.values().flatten().copied().collect();
        for a in vocab.indefinite().keys() {
            let rel = m.extension(p, a).expect("indefinite predicate interpreted");
            out.indefinite.insert(
                a.clone(),
                rel.iter()
                    .filter_map(|t| t.iter().map(|e| individual_of.get(e).copied()).collect())
                    .collect(),
            );
        }
        for n in vocab.names() {
            let e = m.constant_at(p, n).expect("constant interpreted");
            let chosen = match individual_of.get(&e) {
                Some(i) if domain.contains(i) => *i,
                _ => {
                    let first = *domain.first().ok_or_else(|| {
                        TranslationError::NoIndividualForName {
                            name: n.clone(),
                            prec: m.prec_id(p).to_string(),
                        }
                    })?;
                    warnings.push(format!(
                        "name `{n}` denotes `{}` at `{}`, outside the sortal domain; mapped to `{}`",
                        m.element_id(e),
                        m.prec_id(p),
                        m.element_id(ind_elems[first.0]),
                    ));
                    first
                }
            };
            out.names.insert(n.clone(), chosen);
        }
        interps.push(out);
    }
    let precise = vocab
        .precise()
        .keys()
        .map(|q| {
            let rel = m.extension(p0, q).expect("precise predicate interpreted");
            let tuples = rel
                .iter()
                .filter_map(|t| t.iter().map(|e| entity_of.get(e).copied()).collect())
                .collect();
            (q.clone(), tuples)
        })
        .collect();
    let sigma = vocab
        .standpoints()
        .iter()
        .map(|s| (s.clone(), m.sigma(s).cloned().unwrap_or_default()))
        .collect();
    let structure = V1Structure::new(
        vocab.clone(),
        ext_elems.iter().map(|&e| m.element_id(e).to_string()).collect(),
        m.precisifications().to_vec(),
        sigma,
        registry,
        interps,
        precise,
    )?;
    Ok(Lowered { structure, warnings })
}
