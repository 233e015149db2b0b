//! Bounded model search for both logics.
//!
//! Each candidate size is encoded propositionally (see [`circuit`]) and
//! solved by the in-crate CDCL solver. Because the solver returns the
//! lexicographically least model, splitting the problem into cubes over the
//! leading decision variables and keeping the lowest satisfiable cube gives
//! the same answer for any number of workers.

pub mod circuit;
pub mod equisat;
mod fosl_enc;
mod ground;
pub mod sat;
mod symmetry;
mod v1_enc;

pub use equisat::{equisat_check, DirectionReport, EquisatError, EquisatReport, Verdict};

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fosl::{EvalError, FoslStructure};
use crate::syntax::{FoslVocabulary, Formula, V1Vocabulary, ValidationError};
use crate::v1::V1Structure;
use fosl_enc::FoslEncoding;
use sat::{Cnf, Lit, SolveResult, Solver};
use v1_enc::V1Encoding;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bound `{0}` must be at least 1")]
    Zero(&'static str),
    #[error("timeout must be positive")]
    Timeout,
}

fn secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

/// Search limits. FOSL searches use `max_domain`; V1 searches use
/// `max_entities` and `max_individuals`. Both use `max_precisifications`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_domain: usize,
    pub max_precisifications: usize,
    pub max_entities: usize,
    pub max_individuals: usize,
    #[serde(serialize_with = "secs")]
    pub timeout: Duration,
    pub symmetry_reduction: bool,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_domain: 3,
            max_precisifications: 2,
            max_entities: 3,
            max_individuals: 2,
            timeout: DEFAULT_TIMEOUT,
            symmetry_reduction: true,
        }
    }
}

impl Bounds {
    pub fn new(
        max_domain: usize,
        max_precisifications: usize,
        max_entities: usize,
        max_individuals: usize,
        timeout: Duration,
    ) -> Result<Self, BoundsError> {
        let b = Bounds {
            max_domain,
            max_precisifications,
            max_entities,
            max_individuals,
            timeout,
            symmetry_reduction: true,
        };
        b.validate()?;
        Ok(b)
    }

    /// FOSL bounds; the V1 fields are set to the same sizes.
    pub fn fosl(max_domain: usize, max_precisifications: usize) -> Result<Self, BoundsError> {
        Self::new(
            max_domain,
            max_precisifications,
            max_domain,
            max_domain,
            DEFAULT_TIMEOUT,
        )
    }

    /// V1 bounds; the FOSL domain bound is set to `entities + individuals`.
    pub fn v1(
        max_entities: usize,
        max_individuals: usize,
        max_precisifications: usize,
    ) -> Result<Self, BoundsError> {
        Self::new(
            max_entities + max_individuals,
            max_precisifications,
            max_entities,
            max_individuals,
            DEFAULT_TIMEOUT,
        )
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Result<Self, BoundsError> {
        self.timeout = timeout;
        self.validate()?;
        Ok(self)
    }

    pub fn with_symmetry_reduction(mut self, on: bool) -> Self {
        self.symmetry_reduction = on;
        self
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        for (name, v) in [
            ("max_domain", self.max_domain),
            ("max_precisifications", self.max_precisifications),
            ("max_entities", self.max_entities),
            ("max_individuals", self.max_individuals),
        ] {
            if v == 0 {
                return Err(BoundsError::Zero(name));
            }
        }
        if self.timeout.is_zero() {
            return Err(BoundsError::Timeout);
        }
        Ok(())
    }

    /// Componentwise `self ≤ other` on the size bounds.
    pub fn within(&self, other: &Bounds) -> bool {
        self.max_domain <= other.max_domain
            && self.max_precisifications <= other.max_precisifications
            && self.max_entities <= other.max_entities
            && self.max_individuals <= other.max_individuals
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<M> {
    Model(M),
    ExhaustedUnsat(Bounds),
    Timeout(Duration),
}

impl<M> SearchOutcome<M> {
    pub fn model(&self) -> Option<&M> {
        match self {
            SearchOutcome::Model(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SearchOutcome::Model(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Model(_) => "sat",
            SearchOutcome::ExhaustedUnsat(_) => "unsat",
            SearchOutcome::Timeout(_) => "timeout",
        }
    }
}

impl<M> fmt::Display for SearchOutcome<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Model(_) => f.write_str("model found"),
            SearchOutcome::ExhaustedUnsat(b) => write!(
                f,
                "no model within bounds (domain {}, precisifications {}, entities {}, individuals {})",
                b.max_domain, b.max_precisifications, b.max_entities, b.max_individuals
            ),
            SearchOutcome::Timeout(d) => write!(f, "timed out after {:.3}s", d.as_secs_f64()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinderError {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("found structure does not satisfy the formula: {0}")]
    Unsound(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Worker count: `SPL_THREADS` if set, else the available parallelism.
pub fn default_workers() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("SPL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n >= 1 => n.min(available),
        _ => available,
    }
}

enum CnfOutcome {
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

enum CubeResult {
    Sat(Vec<bool>),
    Unsat,
    Interrupted,
}

/// Solves `cnf`, splitting on the leading `split` literals when more than
/// one worker is available. Returns the least model overall.
fn solve_cnf(cnf: &Cnf, split: &[Lit], workers: usize, deadline: Instant) -> CnfOutcome {
    let m = if workers <= 1 {
        0
    } else {
        let wanted = (4 * workers).next_power_of_two().trailing_zeros() as usize;
        wanted.min(split.len()).min(10)
    };
    let cubes = 1usize << m;
    let next = AtomicUsize::new(0);
    let best = AtomicUsize::new(usize::MAX);
    let results: Mutex<Vec<Option<CubeResult>>> =
        Mutex::new((0..cubes).map(|_| None).collect());
    let work = || loop {
        let idx = next.fetch_add(1, Ordering::SeqCst);
        if idx >= cubes {
            break;
        }
        if idx > best.load(Ordering::SeqCst) {
            continue;
        }
        let mut solver = Solver::new(cnf);
        for (bit, &l) in split[..m].iter().enumerate() {
            let set = idx >> (m - 1 - bit) & 1 == 1;
            solver.add_clause(&[if set { l } else { !l }]);
        }
        let stop = || Instant::now() >= deadline || best.load(Ordering::SeqCst) < idx;
        let r = match solver.solve(&stop) {
            SolveResult::Sat(model) => {
                best.fetch_min(idx, Ordering::SeqCst);
                CubeResult::Sat(model)
            }
            SolveResult::Unsat => CubeResult::Unsat,
            SolveResult::Interrupted => CubeResult::Interrupted,
        };
        results.lock().expect("no worker panicked")[idx] = Some(r);
    };
    let threads = workers.clamp(1, cubes);
    if threads == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(work);
            }
        });
    }
    for r in results.into_inner().expect("no worker panicked") {
        match r {
            Some(CubeResult::Unsat) => continue,
            Some(CubeResult::Sat(model)) => return CnfOutcome::Sat(model),
            Some(CubeResult::Interrupted) | None => return CnfOutcome::Timeout,
        }
    }
    CnfOutcome::Unsat
}

#[derive(Debug, Clone)]
pub struct ModelFinder {
    pub bounds: Bounds,
    pub workers: usize,
}

impl ModelFinder {
    pub fn new(bounds: Bounds) -> Self {
        ModelFinder {
            bounds,
            workers: default_workers(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// Searches |Δ| = 1.. and, within each, |Π| = 1.. up to the bounds.
    pub fn find_fosl(
        &self,
        vocab: &FoslVocabulary,
        f: &Formula,
    ) -> Result<SearchOutcome<FoslStructure>, FinderError> {
        self.bounds.validate()?;
        f.validate_sentence(vocab)?;
        let start = Instant::now();
        let deadline = start + self.bounds.timeout;
        for d in 1..=self.bounds.max_domain {
            for p in 1..=self.bounds.max_precisifications {
                if Instant::now() >= deadline {
                    return Ok(SearchOutcome::Timeout(start.elapsed()));
                }
                let (c, enc) = FoslEncoding::build(f, d, p, self.bounds.symmetry_reduction);
                match solve_cnf(&c.cnf, &enc.primaries(), self.workers, deadline) {
                    CnfOutcome::Sat(model) => {
                        let m = enc.decode(vocab, &model);
                        if !m.is_model(f)? {
                            return Err(FinderError::Unsound(m.to_json()));
                        }
                        return Ok(SearchOutcome::Model(m));
                    }
                    CnfOutcome::Unsat => {}
                    CnfOutcome::Timeout => return Ok(SearchOutcome::Timeout(start.elapsed())),
                }
            }
        }
        Ok(SearchOutcome::ExhaustedUnsat(self.bounds))
    }

    /// Searches |E| = 1.., then registry sizes 1.., then |Π| = 1.. up to the
    /// bounds. Registries whose individuals share an extension map are not
    /// searched, so a size is skipped when it exceeds |E|^|Π|.
    pub fn find_v1(
        &self,
        vocab: &V1Vocabulary,
        f: &Formula,
    ) -> Result<SearchOutcome<V1Structure>, FinderError> {
        self.bounds.validate()?;
        f.validate_sentence(vocab)?;
        let start = Instant::now();
        let deadline = start + self.bounds.timeout;
        for e in 1..=self.bounds.max_entities {
            for r in 1..=self.bounds.max_individuals {
                for p in 1..=self.bounds.max_precisifications {
                    if (e as f64).powi(p as i32) < r as f64 {
                        continue;
                    }
                    if Instant::now() >= deadline {
                        return Ok(SearchOutcome::Timeout(start.elapsed()));
                    }
                    let (c, enc) =
                        V1Encoding::build(vocab, f, e, r, p, self.bounds.symmetry_reduction);
                    match solve_cnf(&c.cnf, &enc.primaries(), self.workers, deadline) {
                        CnfOutcome::Sat(model) => {
                            let m = enc.decode(&model);
                            if !m.is_model_v1(f)? {
                                return Err(FinderError::Unsound(m.to_json()));
                            }
                            return Ok(SearchOutcome::Model(m));
                        }
                        CnfOutcome::Unsat => {}
                        CnfOutcome::Timeout => {
                            return Ok(SearchOutcome::Timeout(start.elapsed()))
                        }
                    }
                }
            }
        }
        Ok(SearchOutcome::ExhaustedUnsat(self.bounds))
    }
}

pub fn find_fosl_model(
    vocab: &FoslVocabulary,
    f: &Formula,
    bounds: Bounds,
) -> Result<SearchOutcome<FoslStructure>, FinderError> {
    ModelFinder::new(bounds).find_fosl(vocab, f)
}

pub fn find_v1_model(
    vocab: &V1Vocabulary,
    f: &Formula,
    bounds: Bounds,
) -> Result<SearchOutcome<V1Structure>, FinderError> {
    ModelFinder::new(bounds).find_v1(vocab, f)
}
