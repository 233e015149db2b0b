//! Grounding of formulas over a fixed finite size into circuit literals.
//! The logic-specific parts (quantifier ranges, constant denotations, atoms,
//! standpoint membership) come from a [`Theory`].

use std::collections::HashMap;

use super::circuit::Circuit;
use super::sat::Lit;
use crate::syntax::{Formula, Term, Var};

pub(crate) trait Theory {
    fn num_precs(&self) -> usize;
    /// Quantifier range at `pi`: candidate values with their membership guard.
    fn range(&mut self, c: &mut Circuit, pi: usize) -> Vec<(Lit, usize)>;
    /// Possible denotations of `constant` at `pi`, each with its condition.
    fn denotation(&mut self, c: &mut Circuit, pi: usize, constant: &str) -> Vec<(Lit, usize)>;
    fn atom(&mut self, c: &mut Circuit, pi: usize, predicate: &str, args: &[usize]) -> Lit;
    /// Whether `pi` belongs to σ(standpoint).
    fn admits(&mut self, c: &mut Circuit, standpoint: &str, pi: usize) -> Lit;
}

pub(crate) struct Grounder<'t, T: Theory> {
    theory: &'t mut T,
    memo: HashMap<(usize, usize, Vec<usize>), Lit>,
    free: HashMap<usize, Vec<Var>>,
}

fn key(f: &Formula) -> usize {
    f as *const Formula as usize
}

fn product(options: &[Vec<(Lit, usize)>]) -> Vec<(Vec<Lit>, Vec<usize>)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for (conds, vals) in &out {
            for &(l, v) in opts {
                let mut c = conds.clone();
                c.push(l);
                let mut vs = vals.clone();
                vs.push(v);
                next.push((c, vs));
            }
        }
        out = next;
    }
    out
}

impl<'t, T: Theory> Grounder<'t, T> {
    pub fn new(theory: &'t mut T) -> Self {
        Grounder {
            theory,
            memo: HashMap::new(),
            free: HashMap::new(),
        }
    }

    /// Literal for the sentence `f` holding at every precisification.
    pub fn sentence(&mut self, c: &mut Circuit, f: &Formula) -> Lit {
        let parts: Vec<Lit> = (0..self.theory.num_precs())
            .map(|pi| self.ground(c, f, pi, &mut Vec::new()))
            .collect();
        c.and_all(parts)
    }

    fn options(
        &mut self,
        c: &mut Circuit,
        pi: usize,
        env: &[(&Var, usize)],
        t: &Term,
    ) -> Vec<(Lit, usize)> {
        match t {
            Term::Var(x) => {
                let v = env
                    .iter()
                    .rev()
                    .find(|(y, _)| *y == x)
                    .map(|(_, v)| *v)
                    .expect("grounded formulas are sentences");
                vec![(c.truth(), v)]
            }
            Term::Const(n) => self.theory.denotation(c, pi, n),
        }
    }

    pub fn ground<'f>(
        &mut self,
        c: &mut Circuit,
        f: &'f Formula,
        pi: usize,
        env: &mut Vec<(&'f Var, usize)>,
    ) -> Lit {
        let free = self
            .free
            .entry(key(f))
            .or_insert_with(|| f.free_variables().into_iter().collect())
            .clone();
        let values: Vec<usize> = free
            .iter()
            .map(|x| {
                env.iter()
                    .rev()
                    .find(|(y, _)| *y == x)
                    .map(|(_, v)| *v)
                    .expect("grounded formulas are sentences")
            })
            .collect();
        let memo_key = (key(f), pi, values);
        if let Some(&l) = self.memo.get(&memo_key) {
            return l;
        }
        let lit = match f {
            Formula::Atom(p, args) => {
                let opts: Vec<Vec<(Lit, usize)>> =
                    args.iter().map(|t| self.options(c, pi, env, t)).collect();
                let mut disjuncts = Vec::new();
                for (conds, vals) in product(&opts) {
                    let a = self.theory.atom(c, pi, p, &vals);
                    let mut all = conds;
                    all.push(a);
                    disjuncts.push(c.and_all(all));
                }
                c.or_all(disjuncts)
            }
            Formula::Equal(a, b) => {
                let opts = [self.options(c, pi, env, a), self.options(c, pi, env, b)];
                let disjuncts: Vec<Lit> = product(&opts)
                    .into_iter()
                    .filter(|(_, vals)| vals[0] == vals[1])
                    .map(|(conds, _)| c.and_all(conds))
                    .collect();
                c.or_all(disjuncts)
            }
            Formula::Not(g) => !self.ground(c, g, pi, env),
            Formula::And(a, b) => {
                let la = self.ground(c, a, pi, env);
                if la == c.falsity() {
                    la
                } else {
                    let lb = self.ground(c, b, pi, env);
                    c.and(la, lb)
                }
            }
            Formula::Forall(x, g) => {
                let mut parts = Vec::new();
                for (guard, v) in self.theory.range(c, pi) {
                    env.push((x, v));
                    let body = self.ground(c, g, pi, env);
                    env.pop();
                    let part = c.implies(guard, body);
                    if part == c.falsity() {
                        parts = vec![part];
                        break;
                    }
                    parts.push(part);
                }
                c.and_all(parts)
            }
            Formula::Box(s, g) => {
                let mut parts = Vec::new();
                for q in 0..self.theory.num_precs() {
                    let admitted = self.theory.admits(c, s, q);
                    if admitted == c.falsity() {
                        continue;
                    }
                    let body = self.ground(c, g, q, env);
                    parts.push(c.implies(admitted, body));
                }
                c.and_all(parts)
            }
        };
        self.memo.insert(memo_key, lit);
        lit
    }
}
