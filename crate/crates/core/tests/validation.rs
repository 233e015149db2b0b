//! Acceptance criteria 1–7. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails. The target sorts after the other
//! suites so a failing criterion does not stop them from running.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    fixture, fixture_formula, naive_fosl_sat, naive_v1_sat, ref_fosl, ref_fosl_model, ref_v1,
    ref_v1_model, v1_isomorphic,
};
use spl_core::finder::{Bounds, ModelFinder, SearchOutcome};
use spl_core::fosl::{Elem, FoslStructure, Prec};
use spl_core::generate::{
    generate_formula, generate_fosl_structure, generate_open_formula, generate_v1_structure,
    GenSignature,
};
use spl_core::syntax::{parse_formula, FoslVocabulary, Formula, Term, V1Vocabulary, Var};
use spl_core::translation::{axiom_set, full_translation, lift_model, lower_model, trans};
use spl_core::v1::{Individual, V1Structure};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<Duration, String> {
    let el = t.elapsed();
    ensure(el < limit, || format!("took {el:?}, limit {limit:?}"))?;
    Ok(el)
}

fn desert_fosl() -> FoslVocabulary {
    FoslVocabulary::from_json(&fixture("desert.fosl.vocab.json")).unwrap()
}

fn desert_v1() -> V1Vocabulary {
    V1Vocabulary::from_json(&fixture("desert.v1.vocab.json")).unwrap()
}

fn random_fosl_vocab() -> FoslVocabulary {
    FoslVocabulary::from_parts(&[("P", 1), ("R", 2), ("A", 0)], &["c", "d"], &["s", "t"]).unwrap()
}

fn random_v1_vocab() -> V1Vocabulary {
    V1Vocabulary::from_parts(&["K", "L"], &[("A", 1), ("B", 2)], &[("Q", 1), ("R", 2)], &["n", "m"], &["s"])
        .unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let m0_vocab = FoslVocabulary::from_json(&fixture("m0.vocab.json")).unwrap();
    let m0 = FoslStructure::from_json(&m0_vocab, &fixture("m0.json")).unwrap();
    let f = |s: &str| parse_formula(s, &m0_vocab).unwrap();
    let none = BTreeMap::new();
    let (p1, p2) = (Prec(0), Prec(1));
    let c = Term::constant("c");
    let x: BTreeMap<Var, Elem> = [(Var::new("x"), Elem(1))].into_iter().collect();
    let checks = [
        ("eval c at p1", m0.element_id(m0.eval_term(p1, &none, &c).unwrap()) == "d1"),
        ("eval c at p2", m0.element_id(m0.eval_term(p2, &none, &c).unwrap()) == "d2"),
        ("eval ?x", m0.eval_term(p1, &x, &Term::var("x")).unwrap() == Elem(1)),
        ("[s] P(c) at p1", m0.satisfies(p1, &none, &f("[s] P(c)")).unwrap()),
        ("[*] P(c) at p1", !m0.satisfies(p1, &none, &f("[*] P(c)")).unwrap()),
        ("P(?x) at p1", !m0.satisfies_at(p1, &f("P(?x)")).unwrap()),
        ("P(c) at p1", m0.satisfies_at(p1, &f("P(c)")).unwrap()),
        ("?x = ?x at p2", m0.satisfies_at(p2, &f("?x = ?x")).unwrap()),
        ("model of [*] P(c) -> P(c)", m0.is_model(&f("[*] P(c) -> P(c)")).unwrap()),
        ("model of P(c)", !m0.is_model(&f("P(c)")).unwrap()),
        ("model of <*> P(c)", m0.is_model(&f("<*> P(c)")).unwrap()),
    ];
    for (name, ok) in checks {
        ensure(ok, || format!("M0: {name}"))?;
    }
    let file = m0.to_model_file();
    for s in ["[s] P(c)", "[*] P(c)", "P(c)", "<*> P(c)"] {
        ensure(ref_fosl(&file, "p1", &BTreeMap::new(), &f(s)) == m0.satisfies(p1, &none, &f(s)).unwrap(), || {
            format!("M0 reference disagreement on {s}")
        })?;
    }

    let v = desert_v1();
    let v0 = V1Structure::from_json(&v, &fixture("v0.json")).unwrap();
    let g = |s: &str| parse_formula(s, &v).unwrap();
    let none = BTreeMap::new();
    let dom: Vec<&str> = v0.individuals_at(p1).iter().map(|&i| v0.individual_id(i)).collect();
    let id = |i: Individual| v0.individual_id(i).to_string();
    let formula_c = fixture_formula("formula_c.spl", &v);
    let checks = [
        ("I at p1", dom == ["i_d", "i_h"]),
        ("house at p1", id(v0.eval_term_v1(p1, &none, &Term::constant("house")).unwrap()) == "i_h"),
        ("a at p2", id(v0.eval_term_v1(p2, &none, &Term::constant("a")).unwrap()) == "i_d"),
        ("PartOf(house, a) at p1", v0.satisfies_v1(p1, &none, &g("PartOf(house, a)")).unwrap()),
        ("PartOf(house, a) at p2", !v0.satisfies_v1(p2, &none, &g("PartOf(house, a)")).unwrap()),
        ("sortal cover at p1", v0.satisfies_v1(p1, &none, &g("forall ?x (Building(?x) | Desert(?x))")).unwrap()),
        ("formula (c) at p1", v0.satisfies_v1(p1, &none, &formula_c).unwrap()),
        ("V0 is a model of (c)", v0.is_model_v1(&formula_c).unwrap()),
        ("reference agrees on (c)", ref_v1_model(&v0.to_model_file(), &v, &formula_c)),
    ];
    for (name, ok) in checks {
        ensure(ok, || format!("V0: {name}"))?;
    }
    let el = within(t, Duration::from_secs(1))?;
    Ok(format!("M0 and V0 fixture examples reproduced in {el:?}"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let v = desert_fosl();
    let b = Bounds::fosl(3, 2).unwrap();
    let finder = ModelFinder::new(b);
    let mut sizes = Vec::new();
    for name in ["formula_a.spl", "formula_b.spl"] {
        let f = fixture_formula(name, &v);
        match finder.find_fosl(&v, &f).map_err(|e| e.to_string())? {
            SearchOutcome::Model(m) => {
                ensure(ref_fosl_model(&m.to_model_file(), &f), || format!("{name}: model fails re-validation"))?;
                sizes.push(format!("{name} |D|={} |P|={}", m.domain().len(), m.precisifications().len()));
            }
            other => return Err(format!("{name}: {other}")),
        }
    }
    let c = fixture_formula("formula_c_precise.spl", &v);
    let out = finder.find_fosl(&v, &c).map_err(|e| e.to_string())?;
    ensure(matches!(out, SearchOutcome::ExhaustedUnsat(_)), || format!("formula (c) with side conditions: {out}"))?;
    let el = within(t, Duration::from_secs(60))?;
    Ok(format!("{}; (c) with rigidity side conditions exhausted; {el:?}", sizes.join(", ")))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let v = random_v1_vocab();
    let sig = GenSignature::from(&v);
    let b = Bounds::v1(2, 2, 2).unwrap();
    let sentences: Vec<Formula> = (0..200).map(|s| generate_formula(&sig, 1000 + s, (s % 5) as usize)).collect();
    let fulls: Vec<Formula> = sentences.iter().map(|f| full_translation(&v, f, false).unwrap()).collect();
    let mut pairs = 0;
    for k in 0..200u64 {
        let mv = generate_v1_structure(&v, 5000 + k, &b).unwrap();
        let mf = lift_model(&mv);
        for j in 0..20 {
            let i = ((k * 20 + j) % 200) as usize;
            let lhs = mv.is_model_v1(&sentences[i]).unwrap();
            let rhs = mf.is_model(&fulls[i]).unwrap();
            ensure(lhs == rhs, || format!("structure {k}, sentence {}: V1 {lhs}, lifted {rhs}", sentences[i]))?;
            pairs += 1;
        }
        let low = lower_model(&mf, &v, false).map_err(|e| e.to_string())?;
        ensure(low.warnings.is_empty(), || format!("structure {k}: {:?}", low.warnings))?;
        ensure(v1_isomorphic(&low.structure.to_model_file(), &mv.to_model_file()), || {
            format!("structure {k}: lower(lift) not isomorphic")
        })?;
        let env: BTreeMap<Var, Individual> =
            (0..mv.registry().len()).map(|i| (Var::new(format!("v{i}")), Individual(i))).collect();
        let vars: Vec<Var> = env.keys().cloned().collect();
        for (p, k_ar) in v
            .sortals()
            .iter()
            .map(|s| (s.clone(), 1))
            .chain(v.indefinite().iter().map(|(a, &k)| (a.clone(), k)))
            .chain(v.precise().iter().map(|(q, &k)| (q.clone(), k)))
        {
            for args in tuples(&vars, k_ar) {
                let atom = Formula::atom(&p, args.into_iter().map(Term::Var).collect());
                for pi in mv.precs() {
                    ensure(
                        mv.satisfies_v1(pi, &env, &atom).unwrap()
                            == low.structure.satisfies_v1(pi, &env, &atom).unwrap(),
                        || format!("structure {k}: atom {atom} changed by lower(lift)"),
                    )?;
                }
            }
        }
    }
    let el = within(t, Duration::from_secs(120))?;
    Ok(format!("{pairs} pairs over 200 sentences and 200 structures agree; lower(lift) preserves atoms; {el:?}"))
}

fn tuples(vars: &[Var], k: usize) -> Vec<Vec<Var>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Var>| {
                vars.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn criterion_4() -> Outcome {
    let v = desert_v1();
    let k = v.max_precise_arity();
    let c = 3 * k + 2;
    let sig = GenSignature::from(&v);
    let overhead: BTreeSet<usize> = (0..500)
        .map(|s| {
            let f = generate_formula(&sig, 60_000 + s, 1 + (s % 4) as usize);
            full_translation(&v, &f, false).unwrap().size() - trans(&v, &f).unwrap().size()
        })
        .collect();
    let mut worst: Option<(f64, String, usize, usize)> = None;
    let mut violations = 0;
    for s in 0..500 {
        let f = generate_formula(&sig, 60_000 + s, 1 + (s % 4) as usize);
        let (n, m) = (f.size(), trans(&v, &f).unwrap().size());
        if m > c * n {
            violations += 1;
        }
        let ratio = m as f64 / n as f64;
        if worst.as_ref().is_none_or(|w| ratio > w.0) {
            worst = Some((ratio, f.to_string(), n, m));
        }
    }
    let (ratio, wf, n, m) = worst.expect("samples");
    let corrected = (5 * k + 1).max(5);
    let detail = format!(
        "C = 3*{k}+2 = {c}; {violations}/500 exceed it; worst ratio {ratio:.2} ({m}/{n}) on `{wf}`; \
         all within {corrected}*size (5k+1); full-translation overhead values {overhead:?}"
    );
    ensure(overhead.len() == 1, || format!("overhead not constant; {detail}"))?;
    ensure(violations == 0, || detail.clone())?;
    Ok(detail)
}

fn criterion_5() -> Outcome {
    let v = desert_v1();
    let sig = GenSignature::from(&v);
    let non_monodic: Vec<String> = axiom_set(&v, false)
        .unwrap()
        .into_iter()
        .filter(|a| !Formula::boxed("*", a.formula.clone()).is_monodic())
        .map(|a| a.label)
        .collect();
    let (mut monodic, mut violations, mut trans_violations) = (0, 0, 0);
    for s in 0..20_000 {
        if monodic == 500 {
            break;
        }
        let f = generate_formula(&sig, 70_000 + s, 1 + (s % 4) as usize);
        if !f.is_monodic() {
            continue;
        }
        monodic += 1;
        if !full_translation(&v, &f, false).unwrap().is_monodic() {
            violations += 1;
        }
        if !trans(&v, &f).unwrap().is_monodic() {
            trans_violations += 1;
        }
    }
    let detail = format!(
        "{violations}/{monodic} monodic samples have a non-monodic full translation \
         ({trans_violations} for the structural part alone); non-monodic axioms: {non_monodic:?}"
    );
    ensure(monodic == 500, || format!("too few monodic samples; {detail}"))?;
    ensure(violations == 0 && non_monodic.is_empty(), || detail.clone())?;
    Ok(detail)
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let fv = random_fosl_vocab();
    let vv = random_v1_vocab();
    let (fsig, vsig) = (GenSignature::from(&fv), GenSignature::from(&vv));
    let free = [Var::new("y"), Var::new("z")];
    for s in 0..1000u64 {
        let sp = ["s", "t", "*"][(s % 3) as usize];
        let f = generate_open_formula(&fsig, 80_000 + s, (s % 5) as usize, &free);
        let m = generate_fosl_structure(&fv, 90_000 + s, &Bounds::fosl(3, 3).unwrap());
        let pi = Prec((s as usize) % m.precisifications().len());
        let a: BTreeMap<Var, Elem> = free
            .iter()
            .enumerate()
            .map(|(k, x)| (x.clone(), Elem((s as usize / (k + 1)) % m.domain().len())))
            .collect();
        let sat = |g: &Formula| m.satisfies(pi, &a, g).unwrap();
        ensure(sat(&Formula::implies(Formula::boxed("*", f.clone()), f.clone())), || format!("T fails: {f}"))?;
        ensure(sat(&Formula::implies(f.clone(), Formula::diamond("*", f.clone()))), || format!("D fails: {f}"))?;
        let dual = Formula::iff(
            Formula::diamond(sp, f.clone()),
            Formula::not(Formula::boxed(sp, Formula::not(f.clone()))),
        );
        ensure(sat(&dual), || format!("duality fails: {f}"))?;
        let env = a.iter().map(|(x, &e)| (x.name().to_string(), m.element_id(e).to_string())).collect();
        ensure(sat(&f) == ref_fosl(&m.to_model_file(), m.prec_id(pi), &env, &f), || {
            format!("FOSL evaluator disagrees with the reference on {f}")
        })?;

        let g = generate_open_formula(&vsig, 100_000 + s, (s % 5) as usize, &free);
        let mv = generate_v1_structure(&vv, 110_000 + s, &Bounds::v1(3, 3, 3).unwrap()).unwrap();
        let pi = Prec((s as usize) % mv.precisifications().len());
        let r = mv.registry().len();
        let a: BTreeMap<Var, Individual> = free
            .iter()
            .enumerate()
            .map(|(k, x)| (x.clone(), Individual((s as usize / (k + 1)) % r)))
            .collect();
        let sat = |h: &Formula| mv.satisfies_v1(pi, &a, h).unwrap();
        ensure(sat(&Formula::implies(Formula::boxed("*", g.clone()), g.clone())), || format!("V1 T fails: {g}"))?;
        ensure(sat(&Formula::implies(g.clone(), Formula::diamond("*", g.clone()))), || format!("V1 D fails: {g}"))?;
        let dual = Formula::iff(
            Formula::diamond("s", g.clone()),
            Formula::not(Formula::boxed("s", Formula::not(g.clone()))),
        );
        ensure(sat(&dual), || format!("V1 duality fails: {g}"))?;
        let env = a.iter().map(|(x, &i)| (x.name().to_string(), mv.individual_id(i).to_string())).collect();
        ensure(sat(&g) == ref_v1(&mv.to_model_file(), &vv, mv.prec_id(pi), &env, &g), || {
            format!("V1 evaluator disagrees with the reference on {g}")
        })?;
    }
    let el = within(t, Duration::from_secs(60))?;
    Ok(format!("1000 triples per logic satisfy the validities and match the reference evaluators; {el:?}"))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let fv = random_fosl_vocab();
    let vv = random_v1_vocab();
    let (fsig, vsig) = (GenSignature::from(&fv), GenSignature::from(&vv));
    let mut models = 0;
    for s in 0..200u64 {
        let f = generate_formula(&fsig, 120_000 + s, 1 + (s % 4) as usize);
        let fb = Bounds::fosl(3, 2).unwrap();
        let one = ModelFinder::new(fb).with_workers(1).find_fosl(&fv, &f).unwrap();
        if let SearchOutcome::Model(m) = &one {
            models += 1;
            ensure(ref_fosl_model(&m.to_model_file(), &f), || format!("unsound FOSL model for {f}"))?;
        }
        if s < 50 {
            for w in [2, 4] {
                let other = ModelFinder::new(fb).with_workers(w).find_fosl(&fv, &f).unwrap();
                ensure(one.model() == other.model() && one.is_sat() == other.is_sat(), || {
                    format!("FOSL outcome differs with {w} workers on {f}")
                })?;
            }
        }
        if one.is_sat() {
            let bigger = ModelFinder::new(Bounds::fosl(4, 3).unwrap()).find_fosl(&fv, &f).unwrap();
            ensure(bigger.is_sat(), || format!("FOSL monotonicity fails on {f}"))?;
        }

        let g = generate_formula(&vsig, 130_000 + s, 1 + (s % 4) as usize);
        let vb = Bounds::v1(2, 2, 2).unwrap();
        let one = ModelFinder::new(vb).with_workers(1).find_v1(&vv, &g).unwrap();
        if let SearchOutcome::Model(m) = &one {
            models += 1;
            ensure(ref_v1_model(&m.to_model_file(), &vv, &g), || format!("unsound V1 model for {g}"))?;
        }
        if s < 50 {
            for w in [2, 4] {
                let other = ModelFinder::new(vb).with_workers(w).find_v1(&vv, &g).unwrap();
                ensure(one.model() == other.model() && one.is_sat() == other.is_sat(), || {
                    format!("V1 outcome differs with {w} workers on {g}")
                })?;
            }
        }
        if one.is_sat() {
            let bigger = ModelFinder::new(Bounds::v1(3, 3, 2).unwrap()).find_v1(&vv, &g).unwrap();
            ensure(bigger.is_sat(), || format!("V1 monotonicity fails on {g}"))?;
        }
    }

    let micro = FoslVocabulary::from_parts(&[("P", 1), ("Q", 1)], &["c"], &["s"]).unwrap();
    let msig = GenSignature::from(&micro);
    for s in 0..300u64 {
        let f = generate_formula(&msig, 140_000 + s, 1 + (s % 3) as usize);
        let found = ModelFinder::new(Bounds::fosl(2, 2).unwrap()).find_fosl(&micro, &f).unwrap().is_sat();
        ensure(found == naive_fosl_sat(&f, 2, 2), || format!("FOSL micro completeness fails on {f}"))?;
    }
    let micro_v1 = V1Vocabulary::from_parts(&["K"], &[], &[("Q", 1)], &["n"], &["s"]).unwrap();
    let msig = GenSignature::from(&micro_v1);
    for s in 0..60u64 {
        let f = generate_formula(&msig, 150_000 + s, 1 + (s % 3) as usize);
        let found = ModelFinder::new(Bounds::v1(2, 2, 2).unwrap()).find_v1(&micro_v1, &f).unwrap().is_sat();
        ensure(found == naive_v1_sat(&micro_v1, &f, 2, 2, 2), || format!("V1 micro completeness fails on {f}"))?;
    }
    Ok(format!(
        "{models} models re-validated; micro completeness, 1/2/4-worker determinism and monotonicity hold; {:?}",
        t.elapsed()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 7] = [
        ("fixture semantics", criterion_1),
        ("desert formulas (a), (b), (c)", criterion_2),
        ("translation correspondence", criterion_3),
        ("linearity", criterion_4),
        ("monodicity preservation", criterion_5),
        ("logical validities and reference agreement", criterion_6),
        ("finder integrity", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 7 acceptance criteria failed");
        std::process::exit(1);
    }
}
