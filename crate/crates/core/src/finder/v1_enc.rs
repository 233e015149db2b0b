//! Propositional encoding of "some V1 structure with |E| = e, a registry of
//! r individuals with pairwise distinct extensions, and |Π| = p satisfies φ".

use std::collections::{BTreeMap, BTreeSet};

use super::circuit::Circuit;
use super::ground::{Grounder, Theory};
use super::sat::Lit;
use super::symmetry::{swap, tuples, Primaries};
use crate::fosl::Prec;
use crate::syntax::{Formula, PredicateKind, V1Vocabulary, UNIVERSAL};
use crate::v1::{Entity, IndefiniteIndividual, Individual, V1Interpretation, V1Structure};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Desc {
    Sigma(String, usize),
    Ext(usize, usize, usize),
    Sort(usize, String, usize),
    Indef(usize, String, Vec<usize>),
    Precise(String, Vec<usize>),
    Name(usize, String, usize),
}

pub(crate) struct V1Encoding {
    vocab: V1Vocabulary,
    e: usize,
    r: usize,
    p: usize,
    standpoints: Vec<String>,
    indefinite: Vec<(String, usize)>,
    precise: Vec<(String, usize)>,
    prim: Primaries<Desc>,
}

impl V1Encoding {
    fn in_domain(&self, c: &mut Circuit, pi: usize, i: usize) -> Lit {
        let sorts: Vec<Lit> = self
            .vocab
            .sortals()
            .iter()
            .map(|k| self.prim.get(&Desc::Sort(pi, k.clone(), i)))
            .collect();
        c.or_all(sorts)
    }
}

impl Theory for V1Encoding {
    fn num_precs(&self) -> usize {
        self.p
    }

    fn range(&mut self, c: &mut Circuit, pi: usize) -> Vec<(Lit, usize)> {
        (0..self.r).map(|i| (self.in_domain(c, pi, i), i)).collect()
    }

    fn denotation(&mut self, _c: &mut Circuit, pi: usize, name: &str) -> Vec<(Lit, usize)> {
        (0..self.r)
            .map(|i| (self.prim.get(&Desc::Name(pi, name.to_string(), i)), i))
            .collect()
    }

    fn atom(&mut self, c: &mut Circuit, pi: usize, predicate: &str, args: &[usize]) -> Lit {
        match self.vocab.kind_of(predicate) {
            Some(PredicateKind::Sortal) => self.prim.get(&Desc::Sort(pi, predicate.to_string(), args[0])),
            Some(PredicateKind::Indefinite) => {
                self.prim
                    .get(&Desc::Indef(pi, predicate.to_string(), args.to_vec()))
            }
            Some(PredicateKind::Precise) => {
                let mut disjuncts = Vec::new();
                for es in tuples(self.e, args.len()) {
                    let mut conj: Vec<Lit> = args
                        .iter()
                        .zip(&es)
                        .map(|(&i, &e)| self.prim.get(&Desc::Ext(i, pi, e)))
                        .collect();
                    conj.push(self.prim.get(&Desc::Precise(predicate.to_string(), es)));
                    disjuncts.push(c.and_all(conj));
                }
                c.or_all(disjuncts)
            }
            None => unreachable!("formula validated against the vocabulary"),
        }
    }

    fn admits(&mut self, c: &mut Circuit, standpoint: &str, pi: usize) -> Lit {
        if standpoint == UNIVERSAL {
            c.truth()
        } else {
            self.prim.get(&Desc::Sigma(standpoint.to_string(), pi))
        }
    }
}

impl V1Encoding {
    pub fn build(
        vocab: &V1Vocabulary,
        f: &Formula,
        e: usize,
        r: usize,
        p: usize,
        symmetry: bool,
    ) -> (Circuit, V1Encoding) {
        let mut c = Circuit::new();
        let standpoints: Vec<String> = f
            .standpoints()
            .into_iter()
            .filter(|s| s != UNIVERSAL)
            .collect();
        let used = f.predicates();
        let indefinite: Vec<(String, usize)> = vocab
            .indefinite()
            .iter()
            .filter(|(a, k)| used.contains(&((*a).clone(), **k)))
            .map(|(a, k)| (a.clone(), *k))
            .collect();
        let precise: Vec<(String, usize)> = vocab
            .precise()
            .iter()
            .filter(|(q, k)| used.contains(&((*q).clone(), **k)))
            .map(|(q, k)| (q.clone(), *k))
            .collect();
        let mut prim = Primaries::new();
        for s in &standpoints {
            for pi in 0..p {
                prim.alloc(&mut c, Desc::Sigma(s.clone(), pi));
            }
        }
        let mut one_hot = Vec::new();
        for i in 0..r {
            for pi in 0..p {
                one_hot.push(
                    (0..e)
                        .map(|x| prim.alloc(&mut c, Desc::Ext(i, pi, x)))
                        .collect::<Vec<_>>(),
                );
            }
        }
        for pi in 0..p {
            for k in vocab.sortals() {
                for i in 0..r {
                    prim.alloc(&mut c, Desc::Sort(pi, k.clone(), i));
                }
            }
            for n in vocab.names() {
                one_hot.push(
                    (0..r)
                        .map(|i| prim.alloc(&mut c, Desc::Name(pi, n.clone(), i)))
                        .collect(),
                );
            }
            for (a, k) in &indefinite {
                for t in tuples(r, *k) {
                    prim.alloc(&mut c, Desc::Indef(pi, a.clone(), t));
                }
            }
        }
        for (q, k) in &precise {
            for t in tuples(e, *k) {
                prim.alloc(&mut c, Desc::Precise(q.clone(), t));
            }
        }
        for group in &one_hot {
            c.exactly_one(group);
        }
        let mut enc = V1Encoding {
            vocab: vocab.clone(),
            e,
            r,
            p,
            standpoints,
            indefinite,
            precise,
            prim,
        };
        for pi in 0..p {
            for n in vocab.names() {
                for i in 0..r {
                    let named = enc.prim.get(&Desc::Name(pi, n.clone(), i));
                    let dom = enc.in_domain(&mut c, pi, i);
                    let l = c.implies(named, dom);
                    c.assert(l);
                }
            }
            for (a, k) in enc.indefinite.clone() {
                for t in tuples(r, k) {
                    let holds = enc.prim.get(&Desc::Indef(pi, a.clone(), t.clone()));
                    let members: Vec<Lit> = t.iter().map(|&i| enc.in_domain(&mut c, pi, i)).collect();
                    let all = c.and_all(members);
                    let l = c.implies(holds, all);
                    c.assert(l);
                }
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                let mut differ = Vec::new();
                for pi in 0..p {
                    for x in 0..e {
                        let a = enc.prim.get(&Desc::Ext(i, pi, x));
                        let b = enc.prim.get(&Desc::Ext(j, pi, x));
                        differ.push(c.and(a, !b));
                    }
                }
                let l = c.or_all(differ);
                c.assert(l);
            }
        }
        let root = {
            let mut g = Grounder::new(&mut enc);
            g.sentence(&mut c, f)
        };
        c.assert(root);
        if symmetry {
            for a in 0..e.saturating_sub(1) {
                enc.prim.lex_leader(&mut c, |d| match d {
                    Desc::Ext(i, pi, x) => Desc::Ext(*i, *pi, swap(*x, a)),
                    Desc::Precise(q, t) => {
                        Desc::Precise(q.clone(), t.iter().map(|&x| swap(x, a)).collect())
                    }
                    _ => d.clone(),
                });
            }
            for a in 0..r.saturating_sub(1) {
                enc.prim.lex_leader(&mut c, |d| match d {
                    Desc::Ext(i, pi, x) => Desc::Ext(swap(*i, a), *pi, *x),
                    Desc::Sort(pi, k, i) => Desc::Sort(*pi, k.clone(), swap(*i, a)),
                    Desc::Indef(pi, q, t) => {
                        Desc::Indef(*pi, q.clone(), t.iter().map(|&i| swap(i, a)).collect())
                    }
                    Desc::Name(pi, n, i) => Desc::Name(*pi, n.clone(), swap(*i, a)),
                    _ => d.clone(),
                });
            }
            for b in 0..p.saturating_sub(1) {
                enc.prim.lex_leader(&mut c, |d| match d {
                    Desc::Sigma(s, pi) => Desc::Sigma(s.clone(), swap(*pi, b)),
                    Desc::Ext(i, pi, x) => Desc::Ext(*i, swap(*pi, b), *x),
                    Desc::Sort(pi, k, i) => Desc::Sort(swap(*pi, b), k.clone(), *i),
                    Desc::Indef(pi, q, t) => Desc::Indef(swap(*pi, b), q.clone(), t.clone()),
                    Desc::Name(pi, n, i) => Desc::Name(swap(*pi, b), n.clone(), *i),
                    Desc::Precise(..) => d.clone(),
                });
            }
        }
        (c, enc)
    }

    pub fn primaries(&self) -> Vec<Lit> {
        self.prim.lits()
    }

    pub fn decode(&self, model: &[bool]) -> V1Structure {
        let entities: Vec<String> = (1..=self.e).map(|i| format!("e{i}")).collect();
        let precs: Vec<String> = (1..=self.p).map(|i| format!("p{i}")).collect();
        let value = |d: Desc| self.prim.value(model, &d);
        let registry = (0..self.r)
            .map(|i| IndefiniteIndividual {
                id: format!("i{}", i + 1),
                extension: (0..self.p)
                    .map(|pi| {
                        Entity(
                            (0..self.e)
                                .find(|&x| value(Desc::Ext(i, pi, x)))
                                .expect("exactly one entity"),
                        )
                    })
                    .collect(),
            })
            .collect();
        let mut sigma: BTreeMap<String, BTreeSet<Prec>> = BTreeMap::new();
        for s in self.vocab.standpoints() {
            let set = if s == UNIVERSAL {
                (0..self.p).map(Prec).collect()
            } else if self.standpoints.contains(s) {
                (0..self.p)
                    .filter(|&pi| value(Desc::Sigma(s.clone(), pi)))
                    .map(Prec)
                    .collect()
            } else {
                BTreeSet::new()
            };
            sigma.insert(s.clone(), set);
        }
        let interps = (0..self.p)
            .map(|pi| {
                let mut out = V1Interpretation::default();
                for k in self.vocab.sortals() {
                    out.sortals.insert(
                        k.clone(),
                        (0..self.r)
                            .filter(|&i| value(Desc::Sort(pi, k.clone(), i)))
                            .map(Individual)
                            .collect(),
                    );
                }
                for (a, k) in &self.indefinite {
                    out.indefinite.insert(
                        a.clone(),
                        tuples(self.r, *k)
                            .into_iter()
                            .filter(|t| value(Desc::Indef(pi, a.clone(), t.clone())))
                            .map(|t| t.into_iter().map(Individual).collect())
                            .collect(),
                    );
                }
                for n in self.vocab.names() {
                    let i = (0..self.r)
                        .find(|&i| value(Desc::Name(pi, n.clone(), i)))
                        .expect("exactly one individual");
                    out.names.insert(n.clone(), Individual(i));
                }
                out
            })
            .collect();
        let precise = self
            .precise
            .iter()
            .map(|(q, k)| {
                let rel = tuples(self.e, *k)
                    .into_iter()
                    .filter(|t| value(Desc::Precise(q.clone(), t.clone())))
                    .map(|t| t.into_iter().map(Entity).collect())
                    .collect();
                (q.clone(), rel)
            })
            .collect();
        V1Structure::new(
            self.vocab.clone(),
            entities,
            precs,
            sigma,
            registry,
            interps,
            precise,
        )
        .expect("decoded structure is well formed")
    }
}
