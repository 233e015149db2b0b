//! Vocabularies, the formula AST, and its concrete syntax.

mod formula;
mod parser;
mod printer;
mod vocab;

pub use formula::{Formula, Term, ValidationError, Var};
pub use parser::{parse_formula, ParseError, Position, SymbolKind};
pub use printer::print_formula;
pub use vocab::{
    FoslVocabulary, OpenSignature, PredicateKind, Signature, V1Vocabulary, VocabError,
    VocabFileError, RESERVED_PREDICATES, UNIVERSAL,
};

/// Strips `#` comment lines from a formula file and returns the formula text.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Builds the smallest vocabulary under which `f` is well formed.
pub fn infer_fosl_vocabulary(f: &Formula) -> Result<FoslVocabulary, InferError> {
    let mut arities = std::collections::BTreeMap::new();
    for (p, k) in f.predicates() {
        if let Some(prev) = arities.insert(p.clone(), k) {
            if prev != k {
                return Err(InferError::InconsistentArity(p));
            }
        }
    }
    Ok(FoslVocabulary::new(arities, f.constants(), f.standpoints())?)
}

#[derive(Debug, thiserror::Error)]
pub enum InferError {
    #[error("predicate `{0}` is used with different arities")]
    InconsistentArity(String),
    #[error(transparent)]
    Vocab(#[from] VocabError),
}
