//! Gate-level builder over the solver's literals. AND gates are hashed and
//! simplified on construction and encoded with full Tseitin equivalences,
//! so unit propagation fixes every gate once its inputs are fixed.

use std::collections::HashMap;

use super::sat::{Cnf, Lit};

pub struct Circuit {
    pub cnf: Cnf,
    ands: HashMap<Vec<Lit>, Lit>,
    truth: Lit,
}

impl Default for Circuit {
    fn default() -> Self {
        Self::new()
    }
}

impl Circuit {
    pub fn new() -> Circuit {
        let mut cnf = Cnf::default();
        let t = cnf.new_var();
        let truth = Lit::new(t, false);
        cnf.add(vec![truth]);
        Circuit {
            cnf,
            ands: HashMap::new(),
            truth,
        }
    }

    pub fn truth(&self) -> Lit {
        self.truth
    }

    pub fn falsity(&self) -> Lit {
        !self.truth
    }

    pub fn constant(&self, b: bool) -> Lit {
        if b {
            self.truth
        } else {
            !self.truth
        }
    }

    /// A fresh unconstrained input.
    pub fn input(&mut self) -> Lit {
        Lit::new(self.cnf.new_var(), false)
    }

    pub fn and_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut v: Vec<Lit> = Vec::new();
        for l in lits {
            if l == self.falsity() {
                return self.falsity();
            }
            if l != self.truth {
                v.push(l);
            }
        }
        v.sort_unstable();
        v.dedup();
        if v.windows(2).any(|w| w[0] == !w[1]) {
            return self.falsity();
        }
        match v.len() {
            0 => return self.truth,
            1 => return v[0],
            _ => {}
        }
        if let Some(&g) = self.ands.get(&v) {
            return g;
        }
        let g = self.input();
        let mut long = Vec::with_capacity(v.len() + 1);
        long.push(g);
        for &l in &v {
            self.cnf.add(vec![!g, l]);
            long.push(!l);
        }
        self.cnf.add(long);
        self.ands.insert(v, g);
        g
    }

    pub fn or_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let negated: Vec<Lit> = lits.into_iter().map(|l| !l).collect();
        !self.and_all(negated)
    }

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        self.and_all([a, b])
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        self.or_all([a, b])
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or(!a, b)
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        let ab = self.implies(a, b);
        let ba = self.implies(b, a);
        self.and(ab, ba)
    }

    /// Forces `l` to hold in every model.
    pub fn assert(&mut self, l: Lit) {
        self.cnf.add(vec![l]);
    }

    /// Exactly one of `lits` holds.
    pub fn exactly_one(&mut self, lits: &[Lit]) {
        self.cnf.add(lits.to_vec());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.cnf.add(vec![!lits[i], !lits[j]]);
            }
        }
    }

    /// `xs ≤ ys` lexicographically with `false < true`. Pairs whose mirror
    /// image already appeared are implied by the prefix equalities and
    /// skipped.
    pub fn lex_leq(&mut self, pairs: &[(Lit, Lit)]) -> Lit {
        let mut seen = std::collections::HashSet::new();
        let mut prefix_equal = self.truth;
        let mut parts = Vec::new();
        for &(a, b) in pairs {
            if a == b || seen.contains(&(b, a)) {
                continue;
            }
            seen.insert((a, b));
            let le = self.implies(a, b);
            let step = self.implies(prefix_equal, le);
            parts.push(step);
            let eq = self.iff(a, b);
            prefix_equal = self.and(prefix_equal, eq);
            if prefix_equal == self.falsity() {
                break;
            }
        }
        self.and_all(parts)
    }
}
