//! Propositional encoding of "some standpoint structure with |Δ| = d and
//! |Π| = p satisfies φ".

use std::collections::{BTreeMap, BTreeSet};

use super::circuit::Circuit;
use super::ground::{Grounder, Theory};
use super::sat::Lit;
use super::symmetry::{swap, tuples, Primaries};
use crate::fosl::{Elem, FoslStructure, Interpretation, Prec};
use crate::syntax::{FoslVocabulary, Formula, UNIVERSAL};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Desc {
    Sigma(String, usize),
    Const(usize, String, usize),
    Pred(usize, String, Vec<usize>),
}

pub(crate) struct FoslEncoding {
    d: usize,
    p: usize,
    standpoints: Vec<String>,
    constants: Vec<String>,
    predicates: Vec<(String, usize)>,
    prim: Primaries<Desc>,
}

impl Theory for FoslEncoding {
    fn num_precs(&self) -> usize {
        self.p
    }

    fn range(&mut self, c: &mut Circuit, _pi: usize) -> Vec<(Lit, usize)> {
        (0..self.d).map(|e| (c.truth(), e)).collect()
    }

    fn denotation(&mut self, _c: &mut Circuit, pi: usize, constant: &str) -> Vec<(Lit, usize)> {
        (0..self.d)
            .map(|e| (self.prim.get(&Desc::Const(pi, constant.to_string(), e)), e))
            .collect()
    }

    fn atom(&mut self, _c: &mut Circuit, pi: usize, predicate: &str, args: &[usize]) -> Lit {
        self.prim
            .get(&Desc::Pred(pi, predicate.to_string(), args.to_vec()))
    }

    fn admits(&mut self, c: &mut Circuit, standpoint: &str, pi: usize) -> Lit {
        if standpoint == UNIVERSAL {
            c.truth()
        } else {
            self.prim.get(&Desc::Sigma(standpoint.to_string(), pi))
        }
    }
}

impl FoslEncoding {
    /// Builds the circuit for `f` at size (d, p) and asserts it.
    pub fn build(f: &Formula, d: usize, p: usize, symmetry: bool) -> (Circuit, FoslEncoding) {
        let mut c = Circuit::new();
        let standpoints: Vec<String> = f
            .standpoints()
            .into_iter()
            .filter(|s| s != UNIVERSAL)
            .collect();
        let constants: Vec<String> = f.constants().into_iter().collect();
        let predicates: Vec<(String, usize)> = f.predicates().into_iter().collect();
        let mut prim = Primaries::new();
        for s in &standpoints {
            for pi in 0..p {
                prim.alloc(&mut c, Desc::Sigma(s.clone(), pi));
            }
        }
        for pi in 0..p {
            for k in &constants {
                let lits: Vec<Lit> = (0..d)
                    .map(|e| prim.alloc(&mut c, Desc::Const(pi, k.clone(), e)))
                    .collect();
                c.exactly_one(&lits);
            }
            for (q, arity) in &predicates {
                for t in tuples(d, *arity) {
                    prim.alloc(&mut c, Desc::Pred(pi, q.clone(), t));
                }
            }
        }
        let mut enc = FoslEncoding {
            d,
            p,
            standpoints,
            constants,
            predicates,
            prim,
        };
        let root = {
            let mut g = Grounder::new(&mut enc);
            g.sentence(&mut c, f)
        };
        c.assert(root);
        if symmetry {
            for a in 0..d.saturating_sub(1) {
                enc.prim.lex_leader(&mut c, |desc| match desc {
                    Desc::Sigma(..) => desc.clone(),
                    Desc::Const(pi, k, e) => Desc::Const(*pi, k.clone(), swap(*e, a)),
                    Desc::Pred(pi, q, t) => {
                        Desc::Pred(*pi, q.clone(), t.iter().map(|&e| swap(e, a)).collect())
                    }
                });
            }
            for b in 0..p.saturating_sub(1) {
                enc.prim.lex_leader(&mut c, |desc| match desc {
                    Desc::Sigma(s, pi) => Desc::Sigma(s.clone(), swap(*pi, b)),
                    Desc::Const(pi, k, e) => Desc::Const(swap(*pi, b), k.clone(), *e),
                    Desc::Pred(pi, q, t) => Desc::Pred(swap(*pi, b), q.clone(), t.clone()),
                });
            }
        }
        (c, enc)
    }

    pub fn primaries(&self) -> Vec<Lit> {
        self.prim.lits()
    }

    /// Reads a structure over `vocab` off a solver model. Symbols absent from
    /// the formula get default interpretations: empty predicates, constants
    /// denoting the first element, empty standpoints.
    pub fn decode(&self, vocab: &FoslVocabulary, model: &[bool]) -> FoslStructure {
        let domain: Vec<String> = (1..=self.d).map(|i| format!("d{i}")).collect();
        let precs: Vec<String> = (1..=self.p).map(|i| format!("p{i}")).collect();
        let mut sigma: BTreeMap<String, BTreeSet<Prec>> = BTreeMap::new();
        for s in vocab.standpoints() {
            let set = if s == UNIVERSAL {
                (0..self.p).map(Prec).collect()
            } else if self.standpoints.contains(s) {
                (0..self.p)
                    .filter(|&pi| self.prim.value(model, &Desc::Sigma(s.clone(), pi)))
                    .map(Prec)
                    .collect()
            } else {
                BTreeSet::new()
            };
            sigma.insert(s.clone(), set);
        }
        let interps = (0..self.p)
            .map(|pi| {
                let mut out = Interpretation::default();
                for k in vocab.constants() {
                    let e = if self.constants.contains(k) {
                        (0..self.d)
                            .find(|&e| self.prim.value(model, &Desc::Const(pi, k.clone(), e)))
                            .expect("exactly one denotation")
                    } else {
                        0
                    };
                    out.constants.insert(k.clone(), Elem(e));
                }
                for (q, arity) in &self.predicates {
                    let rel = tuples(self.d, *arity)
                        .into_iter()
                        .filter(|t| self.prim.value(model, &Desc::Pred(pi, q.clone(), t.clone())))
                        .map(|t| t.into_iter().map(Elem).collect())
                        .collect();
                    out.predicates.insert(q.clone(), rel);
                }
                out
            })
            .collect();
        FoslStructure::new(vocab.clone(), domain, precs, sigma, interps)
            .expect("decoded structure is well formed")
    }
}
