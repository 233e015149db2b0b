//! Pretty printer. Re-sugars the derived connectives the parser expands, and
//! inserts only the parentheses the grammar needs.

use std::fmt;

use super::formula::{Formula, Term, Var};

const IFF: u8 = 1;
const IMPL: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

enum View<'a> {
    Iff(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    And(&'a Formula, &'a Formula),
    Not(&'a Formula),
    Forall(&'a Var, &'a Formula),
    Exists(&'a Var, &'a Formula),
    Box(&'a str, &'a Formula),
    Diamond(&'a str, &'a Formula),
    Atom(&'a str, &'a [Term]),
    Equal(&'a Term, &'a Term),
    NotEqual(&'a Term, &'a Term),
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(inner) => Some(inner),
        _ => None,
    }
}

/// Matches `!(a & !b)` and returns `(a, b)`.
fn implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match negated(f)? {
        Formula::And(a, nb) => Some((a, negated(nb)?)),
        _ => None,
    }
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::Atom(p, args) => View::Atom(p, args),
        Formula::Equal(a, b) => View::Equal(a, b),
        Formula::Forall(v, body) => View::Forall(v, body),
        Formula::Box(s, body) => View::Box(s, body),
        Formula::And(l, r) => match (implication(l), implication(r)) {
            (Some((a, b)), Some((b2, a2))) if a == a2 && b == b2 => View::Iff(a, b),
            _ => View::And(l, r),
        },
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Equal(a, b) => View::NotEqual(a, b),
            Formula::Box(s, body) => match negated(body) {
                Some(b) => View::Diamond(s, b),
                None => View::Not(inner),
            },
            Formula::Forall(v, body) => match negated(body) {
                Some(b) => View::Exists(v, b),
                None => View::Not(inner),
            },
            Formula::And(l, r) => match (negated(l), negated(r)) {
                (Some(a), Some(b)) if implication(l).is_none() => View::Or(a, b),
                (_, Some(b)) => View::Implies(l, b),
                _ => View::Not(inner),
            },
            _ => View::Not(inner),
        },
    }
}

fn level(v: &View<'_>) -> u8 {
    match v {
        View::Iff(..) => IFF,
        View::Implies(..) => IMPL,
        View::Or(..) => OR,
        View::And(..) => AND,
        View::Not(_)
        | View::Forall(..)
        | View::Exists(..)
        | View::Box(..)
        | View::Diamond(..) => UNARY,
        View::Atom(..) | View::Equal(..) | View::NotEqual(..) => ATOM,
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let v = view(f);
    let paren = level(&v) < min;
    if paren {
        out.write_str("(")?;
    }
    let binary = |out: &mut fmt::Formatter<'_>, l, op: &str, r, lvl: u8| {
        write_at(l, lvl + 1, out)?;
        write!(out, " {op} ")?;
        write_at(r, lvl, out)
    };
    match v {
        View::Iff(a, b) => binary(out, a, "<->", b, IFF)?,
        View::Implies(a, b) => binary(out, a, "->", b, IMPL)?,
        View::Or(a, b) => binary(out, a, "|", b, OR)?,
        View::And(a, b) => binary(out, a, "&", b, AND)?,
        View::Not(a) => {
            out.write_str("!")?;
            write_at(a, UNARY, out)?;
        }
        View::Forall(x, a) => {
            write!(out, "forall {x} ")?;
            write_at(a, UNARY, out)?;
        }
        View::Exists(x, a) => {
            write!(out, "exists {x} ")?;
            write_at(a, UNARY, out)?;
        }
        View::Box(s, a) => {
            write!(out, "[{s}] ")?;
            write_at(a, UNARY, out)?;
        }
        View::Diamond(s, a) => {
            write!(out, "<{s}> ")?;
            write_at(a, UNARY, out)?;
        }
        View::Atom(p, args) => {
            out.write_str(p)?;
            if !args.is_empty() {
                out.write_str("(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_str(",")?;
                    }
                    write!(out, "{t}")?;
                }
                out.write_str(")")?;
            }
        }
        View::Equal(a, b) => write!(out, "{a} = {b}")?,
        View::NotEqual(a, b) => write!(out, "{a} != {b}")?,
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, IFF, f)
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}
