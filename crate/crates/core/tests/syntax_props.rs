use std::collections::BTreeSet;

use proptest::prelude::*;
use spl_core::generate::{generate_formula, generate_open_formula, GenSignature};
use spl_core::syntax::{parse_formula, print_formula, FoslVocabulary, Formula, V1Vocabulary, Var};

fn fosl_vocab() -> FoslVocabulary {
    FoslVocabulary::from_parts(&[("P", 1), ("R", 2), ("A", 0)], &["c", "d"], &["s", "t"]).unwrap()
}

fn v1_vocab() -> V1Vocabulary {
    V1Vocabulary::from_parts(&["K", "L"], &[("A", 1), ("B", 2)], &[("Q", 1), ("R", 2)], &["n", "m"], &["s"])
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), depth in 0usize..6) {
        let v = fosl_vocab();
        let free = [Var::new("y"), Var::new("z")];
        let f = generate_open_formula(&GenSignature::from(&v), seed, depth, &free);
        let text = print_formula(&f);
        let back = parse_formula(&text, &v).unwrap();
        prop_assert_eq!(&back, &f, "printed as {}", text);
    }

    #[test]
    fn print_parse_round_trip_v1(seed in any::<u64>(), depth in 0usize..6) {
        let v = v1_vocab();
        let f = generate_formula(&GenSignature::from(&v), seed, depth);
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text, &v).unwrap(), f);
    }

    #[test]
    fn free_variable_laws(seed in any::<u64>(), depth in 0usize..5) {
        let v = fosl_vocab();
        let free = [Var::new("y")];
        let f = generate_open_formula(&GenSignature::from(&v), seed, depth, &free);
        let x = Var::new("y");
        let mut expected = f.free_variables();
        expected.remove(&x);
        prop_assert_eq!(Formula::forall(x, f.clone()).free_variables(), expected);
        prop_assert_eq!(Formula::boxed("s", f.clone()).free_variables(), f.free_variables());
    }
}

#[test]
fn generator_covers_every_constructor_and_both_polarities() {
    let sig = GenSignature::from(&fosl_vocab());
    let mut seen = BTreeSet::new();
    let (mut positive, mut negative) = (0, 0);
    fn polarity(f: &Formula, neg: bool, pos: &mut usize, negs: &mut usize) {
        match f {
            Formula::Not(g) => polarity(g, !neg, pos, negs),
            Formula::And(a, b) => {
                polarity(a, neg, pos, negs);
                polarity(b, neg, pos, negs);
            }
            Formula::Forall(_, g) => {
                if neg {
                    *negs += 1
                } else {
                    *pos += 1
                }
                polarity(g, neg, pos, negs);
            }
            Formula::Box(_, g) => polarity(g, neg, pos, negs),
            _ => {}
        }
    }
    for seed in 0..1000 {
        let f = generate_formula(&sig, seed, 4);
        f.walk(&mut |g| {
            seen.insert(match g {
                Formula::Atom(..) => "atom",
                Formula::Equal(..) => "equal",
                Formula::Not(..) => "not",
                Formula::And(..) => "and",
                Formula::Forall(..) => "forall",
                Formula::Box(..) => "box",
            });
        });
        polarity(&f, false, &mut positive, &mut negative);
    }
    assert_eq!(seen.len(), 6, "{seen:?}");
    assert!(positive > 0 && negative > 0);
}

#[test]
fn generated_sentences_validate() {
    let v = v1_vocab();
    let sig = GenSignature::from(&v);
    for seed in 0..500 {
        generate_formula(&sig, seed, 4).validate_sentence(&v).unwrap();
    }
}
