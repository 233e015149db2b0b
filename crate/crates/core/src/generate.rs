//! Seeded random formulas and structures for property tests and batch runs.
//! Output depends only on the seed and the arguments.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finder::Bounds;
use crate::fosl::{Elem, FoslStructure, Interpretation, Prec, StructureError};
use crate::syntax::{FoslVocabulary, Formula, Term, V1Vocabulary, Var};
use crate::v1::{Entity, IndefiniteIndividual, Individual, V1Interpretation, V1Structure};

/// The symbols a formula generator may use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSignature {
    pub predicates: Vec<(String, usize)>,
    pub constants: Vec<String>,
    pub standpoints: Vec<String>,
}

impl From<&FoslVocabulary> for GenSignature {
    fn from(v: &FoslVocabulary) -> Self {
        GenSignature {
            predicates: v.predicates().iter().map(|(p, k)| (p.clone(), *k)).collect(),
            constants: v.constants().iter().cloned().collect(),
            standpoints: v.standpoints().iter().cloned().collect(),
        }
    }
}

impl From<&V1Vocabulary> for GenSignature {
    fn from(v: &V1Vocabulary) -> Self {
        let mut predicates: Vec<(String, usize)> =
            v.sortals().iter().map(|k| (k.clone(), 1)).collect();
        predicates.extend(v.indefinite().iter().map(|(a, k)| (a.clone(), *k)));
        predicates.extend(v.precise().iter().map(|(q, k)| (q.clone(), *k)));
        GenSignature {
            predicates,
            constants: v.names().iter().cloned().collect(),
            standpoints: v.standpoints().iter().cloned().collect(),
        }
    }
}

struct FormulaGen<'a> {
    sig: &'a GenSignature,
    rng: ChaCha8Rng,
    scope: Vec<Var>,
    fresh: usize,
}

#[derive(Clone, Copy)]
enum Shape {
    Atom,
    Equal,
    Not,
    And,
    Forall,
    Box,
}

const SHAPES: [(Shape, u32); 6] = [
    (Shape::Atom, 2),
    (Shape::Equal, 1),
    (Shape::Not, 2),
    (Shape::And, 2),
    (Shape::Forall, 2),
    (Shape::Box, 2),
];

impl FormulaGen<'_> {
    fn term(&mut self) -> Option<Term> {
        let n = self.scope.len() + self.sig.constants.len();
        if n == 0 {
            return None;
        }
        let i = self.rng.gen_range(0..n);
        Some(if i < self.scope.len() {
            Term::Var(self.scope[i].clone())
        } else {
            Term::constant(&self.sig.constants[i - self.scope.len()])
        })
    }

    fn atom(&mut self) -> Option<Formula> {
        let candidates: Vec<&(String, usize)> = self
            .sig
            .predicates
            .iter()
            .filter(|(_, k)| *k == 0 || !self.scope.is_empty() || !self.sig.constants.is_empty())
            .collect();
        let (p, k) = (*candidates.choose(&mut self.rng)?).clone();
        let args = (0..k).map(|_| self.term()).collect::<Option<Vec<_>>>()?;
        Some(Formula::atom(&p, args))
    }

    fn equal(&mut self) -> Option<Formula> {
        Some(Formula::equal(self.term()?, self.term()?))
    }

    fn quantified(&mut self, depth: usize) -> Formula {
        self.fresh += 1;
        let x = Var::new(format!("x{}", self.fresh));
        self.scope.push(x.clone());
        let body = self.formula(depth);
        self.scope.pop();
        Formula::forall(x, body)
    }

    fn leaf(&mut self) -> Formula {
        let first = if self.rng.gen_bool(0.75) {
            self.atom().or_else(|| self.equal())
        } else {
            self.equal().or_else(|| self.atom())
        };
        // With no terms in scope and no nullary predicate, bind a variable.
        first.unwrap_or_else(|| self.quantified(0))
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 {
            return self.leaf();
        }
        let total: u32 = SHAPES.iter().map(|(_, w)| w).sum();
        let mut pick = self.rng.gen_range(0..total);
        let mut shape = Shape::Atom;
        for (s, w) in SHAPES {
            if pick < w {
                shape = s;
                break;
            }
            pick -= w;
        }
        match shape {
            Shape::Atom => self.atom().unwrap_or_else(|| self.leaf()),
            Shape::Equal => self.equal().unwrap_or_else(|| self.leaf()),
            Shape::Not => Formula::not(self.formula(depth - 1)),
            Shape::And => {
                let a = self.formula(depth - 1);
                Formula::and(a, self.formula(depth - 1))
            }
            Shape::Forall => self.quantified(depth - 1),
            Shape::Box => {
                let s = self
                    .sig
                    .standpoints
                    .choose(&mut self.rng)
                    .cloned()
                    .unwrap_or_else(|| crate::syntax::UNIVERSAL.to_string());
                Formula::boxed(&s, self.formula(depth - 1))
            }
        }
    }
}

/// A random sentence of nesting depth at most `depth`. Bound variables are
/// named `?x1, ?x2, …` and never shadow each other.
pub fn generate_formula(sig: &GenSignature, seed: u64, depth: usize) -> Formula {
    generate_open_formula(sig, seed, depth, &[])
}

/// Like [`generate_formula`], but `free` may occur free.
pub fn generate_open_formula(sig: &GenSignature, seed: u64, depth: usize, free: &[Var]) -> Formula {
    // Keep bound names clear of the free ones.
    let fresh = free
        .iter()
        .filter_map(|v| v.name().strip_prefix('x')?.parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    let mut g = FormulaGen {
        sig,
        rng: ChaCha8Rng::seed_from_u64(seed),
        scope: free.to_vec(),
        fresh,
    };
    g.formula(depth)
}

fn random_subset<T: Clone>(rng: &mut ChaCha8Rng, items: impl IntoIterator<Item = T>) -> Vec<T> {
    items.into_iter().filter(|_| rng.gen_bool(0.5)).collect()
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// A random standpoint structure with |Δ| ≤ `max_domain` and
/// |Π| ≤ `max_precisifications`.
pub fn generate_fosl_structure(vocab: &FoslVocabulary, seed: u64, b: &Bounds) -> FoslStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.gen_range(1..=b.max_domain);
    let p = rng.gen_range(1..=b.max_precisifications);
    let sigma: BTreeMap<String, BTreeSet<Prec>> = vocab
        .standpoints()
        .iter()
        .map(|s| {
            let set = if s == crate::syntax::UNIVERSAL {
                (0..p).map(Prec).collect()
            } else {
                random_subset(&mut rng, (0..p).map(Prec)).into_iter().collect()
            };
            (s.clone(), set)
        })
        .collect();
    let interps = (0..p)
        .map(|_| {
            let mut out = Interpretation::default();
            for (q, &k) in vocab.predicates() {
                let rel = random_subset(&mut rng, all_tuples(d, k))
                    .into_iter()
                    .map(|t| t.into_iter().map(Elem).collect())
                    .collect();
                out.predicates.insert(q.clone(), rel);
            }
            for c in vocab.constants() {
                out.constants.insert(c.clone(), Elem(rng.gen_range(0..d)));
            }
            out
        })
        .collect();
    FoslStructure::new(
        vocab.clone(),
        (1..=d).map(|i| format!("d{i}")).collect(),
        (1..=p).map(|i| format!("p{i}")).collect(),
        sigma,
        interps,
    )
    .expect("generated structure is well formed")
}

/// A random V1 structure with |E| ≤ `max_entities`, registry size ≤
/// `max_individuals` and |Π| ≤ `max_precisifications`. Names are placed in
/// the sortal domain, adding a sortal membership when needed; this fails
/// only when the vocabulary has names but no sortals.
pub fn generate_v1_structure(
    vocab: &V1Vocabulary,
    seed: u64,
    b: &Bounds,
) -> Result<V1Structure, StructureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = rng.gen_range(1..=b.max_entities);
    let r = rng.gen_range(1..=b.max_individuals);
    let p = rng.gen_range(1..=b.max_precisifications);
    let registry: Vec<IndefiniteIndividual> = (0..r)
        .map(|i| IndefiniteIndividual {
            id: format!("i{}", i + 1),
            extension: (0..p).map(|_| Entity(rng.gen_range(0..e))).collect(),
        })
        .collect();
    let sigma: BTreeMap<String, BTreeSet<Prec>> = vocab
        .standpoints()
        .iter()
        .map(|s| {
            let set = if s == crate::syntax::UNIVERSAL {
                (0..p).map(Prec).collect()
            } else {
                random_subset(&mut rng, (0..p).map(Prec)).into_iter().collect()
            };
            (s.clone(), set)
        })
        .collect();
    let sortals: Vec<String> = vocab.sortals().iter().cloned().collect();
    let mut interps = Vec::new();
    for _ in 0..p {
        let mut out = V1Interpretation::default();
        for k in &sortals {
            out.sortals.insert(
                k.clone(),
                random_subset(&mut rng, (0..r).map(Individual)).into_iter().collect(),
            );
        }
        if !vocab.names().is_empty() && !sortals.is_empty() {
            let empty = out.sortals.values().all(|s| s.is_empty());
            if empty {
                let k = sortals.choose(&mut rng).expect("non-empty").clone();
                let i = Individual(rng.gen_range(0..r));
                out.sortals.get_mut(&k).expect("present").insert(i);
            }
        }
        let domain: Vec<Individual> = out
            .sortals
            .values()
            .flatten()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for (a, &k) in vocab.indefinite() {
            let rel = random_subset(&mut rng, all_tuples(domain.len(), k))
                .into_iter()
                .map(|t| t.into_iter().map(|x| domain[x]).collect())
                .collect();
            out.indefinite.insert(a.clone(), rel);
        }
        for n in vocab.names() {
            if let Some(&i) = domain.choose(&mut rng) {
                out.names.insert(n.clone(), i);
            }
        }
        interps.push(out);
    }
    let precise = vocab
        .precise()
        .iter()
        .map(|(q, &k)| {
            let rel = random_subset(&mut rng, all_tuples(e, k))
                .into_iter()
                .map(|t| t.into_iter().map(Entity).collect())
                .collect();
            (q.clone(), rel)
        })
        .collect();
    V1Structure::new(
        vocab.clone(),
        (1..=e).map(|i| format!("e{i}")).collect(),
        (1..=p).map(|i| format!("p{i}")).collect(),
        sigma,
        registry,
        interps,
        precise,
    )
}
