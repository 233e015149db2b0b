//! Terms and the core formula AST.
//!
//! Only six constructors exist. Disjunction, implication, the existential
//! quantifier, the diamond and the truth constants are built from them by the
//! smart constructors below and by the parser.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::vocab::{is_variable_name, Signature, UNIVERSAL};

/// A variable, stored without its `?` sigil.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    /// # Panics
    /// If `name` is not a lowercase identifier.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_variable_name(&name), "invalid variable name `{name}`");
        Var(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(name.to_string())
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    /// `[s] φ`: φ holds at every precisification admitted by standpoint `s`.
    Box(String, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("undeclared predicate `{0}`")]
    UndeclaredPredicate(String),
    #[error("undeclared constant `{0}`")]
    UndeclaredConstant(String),
    #[error("undeclared standpoint `{0}`")]
    UndeclaredStandpoint(String),
    #[error("predicate `{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("formula is not a sentence: free variable(s) {0}")]
    NotASentence(String),
}

impl Formula {
    pub fn atom(predicate: &str, args: Vec<Term>) -> Self {
        Formula::Atom(predicate.to_string(), args)
    }

    pub fn equal(lhs: Term, rhs: Term) -> Self {
        Formula::Equal(lhs, rhs)
    }

    pub fn not_equal(lhs: Term, rhs: Term) -> Self {
        Formula::not(Formula::Equal(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    /// `a | b` as `!(!a & !b)`.
    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(lhs), Formula::not(rhs)))
    }

    /// `a -> b` as `!(a & !b)`.
    pub fn implies(lhs: Formula, rhs: Formula) -> Self {
        Formula::not(Formula::and(lhs, Formula::not(rhs)))
    }

    /// `a <-> b` as `(a -> b) & (b -> a)`.
    pub fn iff(lhs: Formula, rhs: Formula) -> Self {
        Formula::and(
            Formula::implies(lhs.clone(), rhs.clone()),
            Formula::implies(rhs, lhs),
        )
    }

    pub fn forall(var: Var, body: Formula) -> Self {
        Formula::Forall(var, Box::new(body))
    }

    /// `exists x φ` as `!forall x !φ`.
    pub fn exists(var: Var, body: Formula) -> Self {
        Formula::not(Formula::forall(var, Formula::not(body)))
    }

    /// `forall x1 ... forall xn φ`, innermost binder last.
    pub fn forall_all(vars: impl IntoIterator<Item = Var>, body: Formula) -> Self {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn exists_all(vars: impl IntoIterator<Item = Var>, body: Formula) -> Self {
        let vars: Vec<Var> = vars.into_iter().collect();
        vars.into_iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v, acc))
    }

    pub fn boxed(standpoint: &str, body: Formula) -> Self {
        Formula::Box(standpoint.to_string(), Box::new(body))
    }

    /// `<s> φ` as `![s] !φ`.
    pub fn diamond(standpoint: &str, body: Formula) -> Self {
        Formula::not(Formula::boxed(standpoint, Formula::not(body)))
    }

    /// Right-associated conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        let parts: Vec<Formula> = parts.into_iter().collect();
        parts.into_iter().rev().reduce(|acc, f| Formula::and(f, acc))
    }

    /// Right-associated disjunction; `None` for an empty iterator.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        let parts: Vec<Formula> = parts.into_iter().collect();
        parts.into_iter().rev().reduce(|acc, f| Formula::or(f, acc))
    }

    /// The tautology `P -> P` built from the first declared predicate, with
    /// its argument places closed by a universal quantifier.
    pub fn verum(sig: &dyn Signature) -> Option<Self> {
        let (pred, arity) = sig.predicate_list().into_iter().next()?;
        let t = Var::new("t");
        let atom = Formula::Atom(pred, vec![Term::Var(t.clone()); arity]);
        let taut = Formula::implies(atom.clone(), atom);
        Some(if arity == 0 {
            taut
        } else {
            Formula::forall(t, taut)
        })
    }

    pub fn falsum(sig: &dyn Signature) -> Option<Self> {
        Formula::verum(sig).map(Formula::not)
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        let mut visit_term = |t: &Term, bound: &Vec<&Var>| {
            if let Term::Var(v) = t {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| visit_term(t, bound)),
            Formula::Equal(a, b) => {
                visit_term(a, bound);
                visit_term(b, bound);
            }
            Formula::Not(f) | Formula::Box(_, f) => f.collect_free(bound, out),
            Formula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable occurring anywhere, free or bound.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => out.extend(args.iter().filter_map(Term::as_var).cloned()),
            Formula::Equal(a, b) => {
                out.extend([a, b].into_iter().filter_map(Term::as_var).cloned())
            }
            Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut add = |t: &Term| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        };
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(&mut add),
            Formula::Equal(a, b) => {
                add(a);
                add(b);
            }
            _ => {}
        });
        out
    }

    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(p, args) = f {
                out.insert((p.clone(), args.len()));
            }
        });
        out
    }

    pub fn standpoints(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Box(s, _) = f {
                out.insert(s.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, visit: &mut dyn FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Atom(..) | Formula::Equal(..) => {}
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Box(_, f) => f.walk(visit),
            Formula::And(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }

    /// Number of formula nodes; terms are not counted.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// True iff every `[s] φ` subformula has at most one free variable in φ.
    pub fn is_monodic(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |f| {
            if let Formula::Box(_, body) = f {
                ok &= body.free_variables().len() <= 1;
            }
        });
        ok
    }

    /// Checks declared symbols and arities against `sig`.
    pub fn validate(&self, sig: &dyn Signature) -> Result<(), ValidationError> {
        let check_term = |t: &Term| match t {
            Term::Const(c) if !sig.is_constant(c) => {
                Err(ValidationError::UndeclaredConstant(c.clone()))
            }
            _ => Ok(()),
        };
        match self {
            Formula::Atom(p, args) => {
                if !sig.is_open() {
                    let expected = sig
                        .predicate_arity(p)
                        .ok_or_else(|| ValidationError::UndeclaredPredicate(p.clone()))?;
                    if expected != args.len() {
                        return Err(ValidationError::Arity {
                            name: p.clone(),
                            expected,
                            found: args.len(),
                        });
                    }
                }
                args.iter().try_for_each(check_term)
            }
            Formula::Equal(a, b) => {
                check_term(a)?;
                check_term(b)
            }
            Formula::Not(f) | Formula::Forall(_, f) => f.validate(sig),
            Formula::And(a, b) => {
                a.validate(sig)?;
                b.validate(sig)
            }
            Formula::Box(s, f) => {
                if s != UNIVERSAL && !sig.is_standpoint(s) {
                    return Err(ValidationError::UndeclaredStandpoint(s.clone()));
                }
                f.validate(sig)
            }
        }
    }

    /// Validates and additionally requires the formula to be closed.
    pub fn validate_sentence(&self, sig: &dyn Signature) -> Result<(), ValidationError> {
        self.validate(sig)?;
        let free = self.free_variables();
        if free.is_empty() {
            Ok(())
        } else {
            let names: Vec<String> = free.iter().map(|v| v.to_string()).collect();
            Err(ValidationError::NotASentence(names.join(", ")))
        }
    }
}
