//! Primary (decision) variables of an encoding, and lex-leader constraints
//! that keep only the lexicographically least member of each isomorphism
//! class under a set of generating permutations.

use std::collections::HashMap;
use std::hash::Hash;

use super::circuit::Circuit;
use super::sat::Lit;

pub(crate) struct Primaries<D> {
    order: Vec<D>,
    lits: HashMap<D, Lit>,
}

impl<D: Clone + Eq + Hash> Primaries<D> {
    pub fn new() -> Self {
        Primaries {
            order: Vec::new(),
            lits: HashMap::new(),
        }
    }

    /// Allocates the next primary variable. Allocation order is the decision
    /// order of the solver.
    pub fn alloc(&mut self, c: &mut Circuit, d: D) -> Lit {
        let l = c.input();
        self.order.push(d.clone());
        self.lits.insert(d, l);
        l
    }

    pub fn get(&self, d: &D) -> Lit {
        self.lits[d]
    }

    pub fn lits(&self) -> Vec<Lit> {
        self.order.iter().map(|d| self.lits[d]).collect()
    }

    /// Requires the assignment to be lexicographically no greater than its
    /// image under the permutation `g` of descriptors. `g` must map the set
    /// of allocated descriptors onto itself and be a symmetry of the encoded
    /// problem.
    pub fn lex_leader(&self, c: &mut Circuit, g: impl Fn(&D) -> D) {
        let pairs: Vec<(Lit, Lit)> = self
            .order
            .iter()
            .map(|d| (self.lits[d], self.lits[&g(d)]))
            .collect();
        let l = c.lex_leq(&pairs);
        c.assert(l);
    }

    /// Value of a descriptor in a solver model.
    pub fn value(&self, model: &[bool], d: &D) -> bool {
        lit_value(model, self.lits[d])
    }
}

pub(crate) fn lit_value(model: &[bool], l: Lit) -> bool {
    model[l.var() as usize] != l.is_negated()
}

pub(crate) fn swap(x: usize, a: usize) -> usize {
    if x == a {
        a + 1
    } else if x == a + 1 {
        a
    } else {
        x
    }
}

/// Tuple index in base `n`, first position most significant.
pub(crate) fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
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
