//! Conflict-driven clause learning solver used by the model finder.
//!
//! Decisions follow variable index order and always try `false` first, and
//! the solver never restarts. Learned clauses are consequences of the input,
//! so the first model found is the lexicographically least one (variables in
//! index order, `false < true`). Search results are therefore independent of
//! how a problem is split into cubes.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            write!(f, "-{}", self.var())
        } else {
            write!(f, "{}", self.var())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Value of every variable, indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    Interrupted,
}

/// A clause set. Cheap to clone so that cubes can be solved independently.
#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new_var(&mut self) -> u32 {
        self.num_vars += 1;
        self.num_vars - 1
    }

    pub fn add(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }
}

const UNDEF: i8 = 0;

pub struct Solver {
    values: Vec<i8>,
    levels: Vec<u32>,
    reasons: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    seen: Vec<bool>,
    next_decision: usize,
    inconsistent: bool,
}

impl Solver {
    pub fn new(cnf: &Cnf) -> Solver {
        let n = cnf.num_vars as usize;
        let mut s = Solver {
            values: vec![UNDEF; n],
            levels: vec![0; n],
            reasons: vec![None; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::with_capacity(cnf.clauses.len()),
            watches: vec![Vec::new(); 2 * n],
            seen: vec![false; n],
            next_decision: 0,
            inconsistent: false,
        };
        for c in &cnf.clauses {
            s.add_clause(c);
        }
        s
    }

    fn value(&self, l: Lit) -> i8 {
        let v = self.values[l.var() as usize];
        if l.is_negated() {
            -v
        } else {
            v
        }
    }

    fn level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause at decision level 0.
    pub fn add_clause(&mut self, clause: &[Lit]) {
        if self.inconsistent {
            return;
        }
        let mut c: Vec<Lit> = Vec::with_capacity(clause.len());
        for &l in clause {
            match self.value(l) {
                1 => return,
                -1 => {}
                _ => {
                    if c.contains(&!l) {
                        return;
                    }
                    if !c.contains(&l) {
                        c.push(l);
                    }
                }
            }
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => {
                self.assign(c[0], None);
                if self.propagate().is_some() {
                    self.inconsistent = true;
                }
            }
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> usize {
        let idx = self.clauses.len();
        self.watches[(!c[0]).index()].push(idx);
        self.watches[(!c[1]).index()].push(idx);
        self.clauses.push(c);
        idx
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var() as usize;
        self.values[v] = if l.is_negated() { -1 } else { 1 };
        self.levels[v] = self.level();
        self.reasons[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            // Clauses watching !p (stored under index of p).
            let mut ws = std::mem::take(&mut self.watches[p.index()]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                let false_lit = !p;
                {
                    let c = &mut self.clauses[ci];
                    if c[0] == false_lit {
                        c.swap(0, 1);
                    }
                }
                let first = self.clauses[ci][0];
                if self.value(first) == 1 {
                    i += 1;
                    continue;
                }
                let len = self.clauses[ci].len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[ci][k];
                    if self.value(l) != -1 {
                        self.clauses[ci].swap(1, k);
                        self.watches[(!l).index()].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == -1 {
                    conflict = Some(ci);
                    self.qhead = self.trail.len();
                    break;
                }
                self.assign(first, Some(ci));
                i += 1;
            }
            let rest = std::mem::replace(&mut self.watches[p.index()], ws);
            self.watches[p.index()].extend(rest);
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learned clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut counter = 0;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            for k in start..self.clauses[confl].len() {
                let q = self.clauses[confl][k];
                let v = q.var() as usize;
                if !self.seen[v] && self.levels[v] > 0 {
                    self.seen[v] = true;
                    if self.levels[v] >= self.level() {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = !lit;
                break;
            }
            confl = self.reasons[lit.var() as usize].expect("implied literal has a reason");
            // Reason clauses keep the implied literal in position 0.
            debug_assert_eq!(self.clauses[confl][0], lit);
        }
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.levels[learnt[k].var() as usize] > self.levels[learnt[max_i].var() as usize]
                {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            back = self.levels[learnt[1].var() as usize];
        }
        (learnt, back)
    }

    fn backtrack(&mut self, level: u32) {
        if self.level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let v = self.trail[k].var() as usize;
            self.values[v] = UNDEF;
            self.reasons[v] = None;
            if v < self.next_decision {
                self.next_decision = v;
            }
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    /// Solves under the given assumption units. `stop` is polled periodically;
    /// when it returns true the search is abandoned.
    pub fn solve(&mut self, stop: &dyn Fn() -> bool) -> SolveResult {
        if self.inconsistent {
            return SolveResult::Unsat;
        }
        if self.propagate().is_some() {
            return SolveResult::Unsat;
        }
        let mut ticks: u32 = 0;
        loop {
            if let Some(confl) = self.propagate() {
                if self.level() == 0 {
                    return SolveResult::Unsat;
                }
                let (learnt, back) = self.analyze(confl);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.assign(learnt[0], None);
                } else {
                    let asserting = learnt[0];
                    let ci = self.attach(learnt);
                    self.assign(asserting, Some(ci));
                }
            } else {
                while self.next_decision < self.values.len()
                    && self.values[self.next_decision] != UNDEF
                {
                    self.next_decision += 1;
                }
                if self.next_decision == self.values.len() {
                    return SolveResult::Sat(self.values.iter().map(|&v| v == 1).collect());
                }
                let v = self.next_decision as u32;
                self.trail_lim.push(self.trail.len());
                self.assign(Lit::new(v, true), None);
            }
            ticks = ticks.wrapping_add(1);
            if ticks.is_multiple_of(1024) && stop() {
                return SolveResult::Interrupted;
            }
        }
    }
}
