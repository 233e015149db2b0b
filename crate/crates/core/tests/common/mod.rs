//! Test oracles written against the raw model-file types, sharing no code
//! with the library evaluators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use spl_core::fosl::{FoslModelFile, InterpretationFile};
use spl_core::syntax::{
    parse_formula, strip_comments, Formula, PredicateKind, Signature, Term, V1Vocabulary,
};
use spl_core::v1::V1ModelFile;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_formula(name: &str, sig: &dyn Signature) -> Formula {
    parse_formula(&strip_comments(&fixture(name)), sig).unwrap_or_else(|e| panic!("{name}: {e}"))
}

type Env = BTreeMap<String, String>;

fn all_precs(precs: &[String], sigma: &BTreeMap<String, Vec<String>>, s: &str) -> Vec<String> {
    if s == "*" {
        precs.to_vec()
    } else {
        sigma.get(s).cloned().unwrap_or_default()
    }
}

/// Naive recursive standpoint-logic evaluator over a model file.
pub fn ref_fosl(m: &FoslModelFile, pi: &str, env: &Env, f: &Formula) -> bool {
    let empty = InterpretationFile::default();
    let interp = m.interpretation.get(pi).unwrap_or(&empty);
    let term = |t: &Term| -> String {
        match t {
            Term::Var(v) => env[v.name()].clone(),
            Term::Const(c) => interp.constants[c].clone(),
        }
    };
    match f {
        Formula::Atom(p, args) => {
            let tuple: Vec<String> = args.iter().map(term).collect();
            interp
                .predicates
                .get(p)
                .is_some_and(|ts| ts.contains(&tuple))
        }
        Formula::Equal(a, b) => term(a) == term(b),
        Formula::Not(g) => !ref_fosl(m, pi, env, g),
        Formula::And(a, b) => ref_fosl(m, pi, env, a) && ref_fosl(m, pi, env, b),
        Formula::Forall(x, g) => m.domain.iter().all(|d| {
            let mut env = env.clone();
            env.insert(x.name().to_string(), d.clone());
            ref_fosl(m, pi, &env, g)
        }),
        Formula::Box(s, g) => all_precs(&m.precisifications, &m.sigma, s)
            .iter()
            .all(|q| ref_fosl(m, q, env, g)),
    }
}

fn assignments(vars: &[String], range: &[String]) -> Vec<Env> {
    let mut out = vec![Env::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|env| {
                range.iter().map(move |d| {
                    let mut env = env.clone();
                    env.insert(v.clone(), d.clone());
                    env
                })
            })
            .collect();
    }
    out
}

pub fn ref_fosl_model(m: &FoslModelFile, f: &Formula) -> bool {
    let vars: Vec<String> = f.free_variables().iter().map(|v| v.name().to_string()).collect();
    let envs = assignments(&vars, &m.domain);
    m.precisifications
        .iter()
        .all(|pi| envs.iter().all(|env| ref_fosl(m, pi, env, f)))
}

pub fn ref_individuals_at(m: &V1ModelFile, pi: &str) -> BTreeSet<String> {
    m.sortals
        .get(pi)
        .map(|by| by.values().flatten().cloned().collect())
        .unwrap_or_default()
}

/// Naive recursive V1 evaluator over a model file.
pub fn ref_v1(m: &V1ModelFile, vocab: &V1Vocabulary, pi: &str, env: &Env, f: &Formula) -> bool {
    let term = |t: &Term| -> String {
        match t {
            Term::Var(v) => env[v.name()].clone(),
            Term::Const(n) => m.names[pi][n].clone(),
        }
    };
    match f {
        Formula::Atom(p, args) => {
            let ids: Vec<String> = args.iter().map(term).collect();
            match vocab.kind_of(p).expect("declared predicate") {
                PredicateKind::Sortal => m
                    .sortals
                    .get(pi)
                    .and_then(|by| by.get(p))
                    .is_some_and(|s| s.contains(&ids[0])),
                PredicateKind::Indefinite => m
                    .indefinite
                    .get(pi)
                    .and_then(|by| by.get(p))
                    .is_some_and(|s| s.contains(&ids)),
                PredicateKind::Precise => {
                    let ents: Vec<String> =
                        ids.iter().map(|i| m.individuals[i][pi].clone()).collect();
                    m.precise.get(p).is_some_and(|s| s.contains(&ents))
                }
            }
        }
        Formula::Equal(a, b) => term(a) == term(b),
        Formula::Not(g) => !ref_v1(m, vocab, pi, env, g),
        Formula::And(a, b) => ref_v1(m, vocab, pi, env, a) && ref_v1(m, vocab, pi, env, b),
        Formula::Forall(x, g) => ref_individuals_at(m, pi).into_iter().all(|i| {
            let mut env = env.clone();
            env.insert(x.name().to_string(), i);
            ref_v1(m, vocab, pi, &env, g)
        }),
        Formula::Box(s, g) => all_precs(&m.precisifications, &m.sigma, s)
            .iter()
            .all(|q| ref_v1(m, vocab, q, env, g)),
    }
}

/// Free variables range over the whole registry.
pub fn ref_v1_model(m: &V1ModelFile, vocab: &V1Vocabulary, f: &Formula) -> bool {
    let vars: Vec<String> = f.free_variables().iter().map(|v| v.name().to_string()).collect();
    let ids: Vec<String> = m.individuals.keys().cloned().collect();
    let envs = assignments(&vars, &ids);
    m.precisifications
        .iter()
        .all(|pi| envs.iter().all(|env| ref_v1(m, vocab, pi, env, f)))
}

/// Mixed-radix counter over a list of slot sizes.
struct Odometer {
    radix: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    fn new(radix: Vec<usize>) -> Self {
        let done = radix.contains(&0);
        Odometer {
            digits: vec![0; radix.len()],
            radix,
            done,
        }
    }

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

fn tuples(items: &[String], k: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Every standpoint structure with exactly `d` elements and `p`
/// precisifications over the symbols of `f`, without any pruning.
pub fn naive_fosl_structures(f: &Formula, d: usize, p: usize) -> impl Iterator<Item = FoslModelFile> {
    let dom = names("d", d);
    let precs = names("p", p);
    let standpoints: Vec<String> = f.standpoints().into_iter().filter(|s| s != "*").collect();
    let constants: Vec<String> = f.constants().into_iter().collect();
    let mut slots: Vec<(usize, Vec<String>)> = Vec::new();
    let mut pred_slots = Vec::new();
    for (q, k) in f.predicates() {
        for pi in &precs {
            for t in tuples(&dom, k) {
                pred_slots.push((pi.clone(), q.clone(), t));
            }
        }
    }
    slots.extend(standpoints.iter().flat_map(|_| precs.iter().map(|_| (2, vec![]))));
    slots.extend(constants.iter().flat_map(|_| precs.iter().map(|_| (d, vec![]))));
    slots.extend(pred_slots.iter().map(|_| (2, vec![])));
    let preds: BTreeSet<(String, usize)> = f.predicates();
    let mut odo = Odometer::new(slots.iter().map(|s| s.0).collect());
    std::iter::from_fn(move || {
        let digits = odo.next()?;
        let mut it = digits.into_iter();
        let mut sigma = BTreeMap::new();
        for s in &standpoints {
            let set = precs.iter().filter(|_| it.next() == Some(1)).cloned().collect();
            sigma.insert(s.clone(), set);
        }
        let mut interpretation: BTreeMap<String, InterpretationFile> = precs
            .iter()
            .map(|pi| {
                let mut i = InterpretationFile::default();
                for (q, _) in &preds {
                    i.predicates.insert(q.clone(), Vec::new());
                }
                (pi.clone(), i)
            })
            .collect();
        for c in &constants {
            for pi in &precs {
                let e = it.next().expect("slot");
                interpretation.get_mut(pi).unwrap().constants.insert(c.clone(), dom[e].clone());
            }
        }
        for (pi, q, t) in &pred_slots {
            if it.next() == Some(1) {
                interpretation
                    .get_mut(pi)
                    .unwrap()
                    .predicates
                    .get_mut(q)
                    .unwrap()
                    .push(t.clone());
            }
        }
        Some(FoslModelFile {
            domain: dom.clone(),
            precisifications: precs.clone(),
            sigma,
            interpretation,
        })
    })
}

/// First naive model of `f` within the bounds, sizes tried in the same
/// order as the finder (domain outer, precisifications inner).
pub fn naive_fosl_sat(f: &Formula, dmax: usize, pmax: usize) -> bool {
    (1..=dmax).any(|d| (1..=pmax).any(|p| naive_fosl_structures(f, d, p).any(|m| ref_fosl_model(&m, f))))
}

/// Every V1 structure with `e` entities, `r` individuals with pairwise
/// distinct extensions and `p` precisifications, restricted to the symbols
/// of `f` plus every sortal and name. Structures violating the name and
/// indefinite-domain constraints are skipped.
pub fn naive_v1_structures(
    vocab: &V1Vocabulary,
    f: &Formula,
    e: usize,
    r: usize,
    p: usize,
) -> impl Iterator<Item = V1ModelFile> {
    let ents = names("e", e);
    let inds = names("i", r);
    let precs = names("p", p);
    let standpoints: Vec<String> = f.standpoints().into_iter().filter(|s| s != "*").collect();
    let used = f.predicates();
    let sortals: Vec<String> = vocab.sortals().iter().cloned().collect();
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
    let name_syms: Vec<String> = vocab.names().iter().cloned().collect();
    let mut radix = Vec::new();
    radix.extend(std::iter::repeat_n(2, standpoints.len() * p));
    radix.extend(std::iter::repeat_n(e, r * p));
    radix.extend(std::iter::repeat_n(2, sortals.len() * r * p));
    radix.extend(std::iter::repeat_n(r, name_syms.len() * p));
    let indef_slots: Vec<(String, String, Vec<String>)> = precs
        .iter()
        .flat_map(|pi| {
            indefinite
                .iter()
                .flat_map(|(a, k)| tuples(&inds, *k).into_iter().map(|t| (pi.clone(), a.clone(), t)))
                .collect::<Vec<_>>()
        })
        .collect();
    radix.extend(std::iter::repeat_n(2, indef_slots.len()));
    let precise_slots: Vec<(String, Vec<String>)> = precise
        .iter()
        .flat_map(|(q, k)| tuples(&ents, *k).into_iter().map(|t| (q.clone(), t)))
        .collect();
    radix.extend(std::iter::repeat_n(2, precise_slots.len()));
    let mut odo = Odometer::new(radix);
    std::iter::from_fn(move || loop {
        let digits = odo.next()?;
        let mut it = digits.into_iter();
        let mut m = V1ModelFile {
            entities: ents.clone(),
            precisifications: precs.clone(),
            sigma: BTreeMap::new(),
            individuals: BTreeMap::new(),
            sortals: BTreeMap::new(),
            indefinite: BTreeMap::new(),
            precise: BTreeMap::new(),
            names: BTreeMap::new(),
        };
        for s in &standpoints {
            let set = precs.iter().filter(|_| it.next() == Some(1)).cloned().collect();
            m.sigma.insert(s.clone(), set);
        }
        for i in &inds {
            let ext = precs
                .iter()
                .map(|pi| (pi.clone(), ents[it.next().unwrap()].clone()))
                .collect();
            m.individuals.insert(i.clone(), ext);
        }
        for pi in &precs {
            let by = m.sortals.entry(pi.clone()).or_default();
            for k in &sortals {
                let set = inds.iter().filter(|_| it.next() == Some(1)).cloned().collect();
                by.insert(k.clone(), set);
            }
        }
        for pi in &precs {
            let by = m.names.entry(pi.clone()).or_default();
            for n in &name_syms {
                by.insert(n.clone(), inds[it.next().unwrap()].clone());
            }
        }
        for pi in &precs {
            let by = m.indefinite.entry(pi.clone()).or_default();
            for (a, _) in &indefinite {
                by.insert(a.clone(), Vec::new());
            }
        }
        for (pi, a, t) in &indef_slots {
            if it.next() == Some(1) {
                m.indefinite.get_mut(pi).unwrap().get_mut(a).unwrap().push(t.clone());
            }
        }
        for (q, _) in &precise {
            m.precise.insert(q.clone(), Vec::new());
        }
        for (q, t) in &precise_slots {
            if it.next() == Some(1) {
                m.precise.get_mut(q).unwrap().push(t.clone());
            }
        }
        let exts: BTreeSet<&BTreeMap<String, String>> = m.individuals.values().collect();
        if exts.len() < r {
            continue;
        }
        let valid = precs.iter().all(|pi| {
            let dom = ref_individuals_at(&m, pi);
            m.names[pi].values().all(|i| dom.contains(i))
                && m.indefinite[pi]
                    .values()
                    .flatten()
                    .flatten()
                    .all(|i| dom.contains(i))
        });
        if valid {
            return Some(m);
        }
    })
}

pub fn naive_v1_sat(vocab: &V1Vocabulary, f: &Formula, emax: usize, rmax: usize, pmax: usize) -> bool {
    (1..=emax).any(|e| {
        (1..=rmax).any(|r| {
            (1..=pmax).any(|p| {
                naive_v1_structures(vocab, f, e, r, p).any(|m| ref_v1_model(&m, vocab, f))
            })
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn relabel(m: &V1ModelFile, ents: &BTreeMap<&str, String>, inds: &BTreeMap<&str, String>) -> String {
    let e = |x: &String| ents[x.as_str()].clone();
    let i = |x: &String| inds[x.as_str()].clone();
    let sorted = |mut v: Vec<Vec<String>>| {
        v.sort();
        v
    };
    let sorted1 = |mut v: Vec<String>| {
        v.sort();
        v
    };
    let out = V1ModelFile {
        entities: sorted1(m.entities.iter().map(e).collect()),
        precisifications: m.precisifications.clone(),
        sigma: m.sigma.clone(),
        individuals: m
            .individuals
            .iter()
            .map(|(id, ext)| (i(id), ext.iter().map(|(p, x)| (p.clone(), e(x))).collect()))
            .collect(),
        sortals: m
            .sortals
            .iter()
            .map(|(p, by)| {
                (
                    p.clone(),
                    by.iter()
                        .map(|(k, ids)| (k.clone(), sorted1(ids.iter().map(i).collect())))
                        .collect(),
                )
            })
            .collect(),
        indefinite: m
            .indefinite
            .iter()
            .map(|(p, by)| {
                (
                    p.clone(),
                    by.iter()
                        .map(|(a, ts)| {
                            (a.clone(), sorted(ts.iter().map(|t| t.iter().map(i).collect()).collect()))
                        })
                        .collect(),
                )
            })
            .collect(),
        precise: m
            .precise
            .iter()
            .map(|(q, ts)| (q.clone(), sorted(ts.iter().map(|t| t.iter().map(e).collect()).collect())))
            .collect(),
        names: m
            .names
            .iter()
            .map(|(p, by)| (p.clone(), by.iter().map(|(n, x)| (n.clone(), i(x))).collect()))
            .collect(),
    };
    serde_json::to_string(&out).expect("serializable")
}

/// Canonical form under renaming of entities and individuals: the least
/// serialization over all relabelings. Precisification names are kept.
pub fn v1_canonical(m: &V1ModelFile) -> String {
    let ents: Vec<&str> = m.entities.iter().map(String::as_str).collect();
    let inds: Vec<&str> = m.individuals.keys().map(String::as_str).collect();
    let mut best: Option<String> = None;
    for pe in permutations(ents.len()) {
        let emap: BTreeMap<&str, String> =
            ents.iter().zip(&pe).map(|(x, &k)| (*x, format!("E{k}"))).collect();
        for pi in permutations(inds.len()) {
            let imap: BTreeMap<&str, String> =
                inds.iter().zip(&pi).map(|(x, &k)| (*x, format!("I{k}"))).collect();
            let s = relabel(m, &emap, &imap);
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    best.expect("at least one labeling")
}

pub fn v1_isomorphic(a: &V1ModelFile, b: &V1ModelFile) -> bool {
    a.entities.len() == b.entities.len()
        && a.individuals.len() == b.individuals.len()
        && v1_canonical(a) == v1_canonical(b)
}
