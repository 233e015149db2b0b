//! Bounded equisatisfiability check between a V1 sentence and its
//! standpoint-logic translation.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use super::{Bounds, FinderError, ModelFinder, SearchOutcome};
use crate::fosl::FoslStructure;
use crate::syntax::{Formula, V1Vocabulary};
use crate::translation::{full_translation, lift_model, lower_model, translated_vocabulary, TranslationError};
use crate::v1::V1Structure;

#[derive(Debug, Error)]
pub enum EquisatError {
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error(transparent)]
    Translation(#[from] TranslationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Both searches found a model and both correspondence witnesses hold.
    AgreeSat,
    /// Neither search found a model.
    AgreeUnsat,
    /// Only the standpoint search succeeded, and its lowered model lies
    /// outside the V1 bounds.
    BoundMismatch,
    Discrepancy,
    /// A search timed out.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct DirectionReport {
    pub direction: &'static str,
    pub outcome: &'static str,
    pub elapsed_ms: u128,
    pub bounds: Bounds,
    /// For V1: the lifted model satisfies the translation. For FOSL: the
    /// lowered model satisfies the source sentence.
    pub witness: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_path: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquisatReport {
    pub formula: String,
    pub strict_names: bool,
    pub verdict: Verdict,
    pub v1: DirectionReport,
    pub fosl: DirectionReport,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub v1_model: Option<V1Structure>,
    #[serde(skip)]
    pub fosl_model: Option<FoslStructure>,
    #[serde(skip)]
    pub lowered_model: Option<V1Structure>,
}

fn ms(d: Duration) -> u128 {
    d.as_millis()
}

impl ModelFinder {
    /// Runs the V1 search at the V1 bounds and the standpoint search on the
    /// full translation with |Δ| up to entities + individuals, then checks
    /// each found model through the model correspondence.
    pub fn equisat(
        &self,
        vocab: &V1Vocabulary,
        f: &Formula,
        strict_names: bool,
    ) -> Result<EquisatReport, EquisatError> {
        let b = self.bounds;
        let full = full_translation(vocab, f, strict_names)?;
        let fvocab = translated_vocabulary(vocab);
        let mut notes = Vec::new();

        let t0 = Instant::now();
        let v1_out = self.find_v1(vocab, f)?;
        let v1_elapsed = t0.elapsed();
        let forward = match &v1_out {
            SearchOutcome::Model(mv) => {
                let ok = lift_model(mv).is_model(&full).map_err(FinderError::from)?;
                if !ok {
                    notes.push("lifted V1 model does not satisfy the translation".into());
                }
                Some(ok)
            }
            _ => None,
        };

        let fosl_bounds = Bounds {
            max_domain: b.max_entities + b.max_individuals,
            ..b
        };
        let fosl_finder = ModelFinder {
            bounds: fosl_bounds,
            workers: self.workers,
        };
        let t1 = Instant::now();
        let fosl_out = fosl_finder.find_fosl(&fvocab, &full)?;
        let fosl_elapsed = t1.elapsed();
        let mut lowered_model = None;
        let mut names_remapped = false;
        let backward = match &fosl_out {
            SearchOutcome::Model(mf) => match lower_model(mf, vocab, strict_names) {
                Ok(low) => {
                    names_remapped = !low.warnings.is_empty();
                    notes.extend(low.warnings.iter().cloned());
                    let ok = low
                        .structure
                        .is_model_v1(f)
                        .map_err(FinderError::from)?;
                    if !ok {
                        notes.push("lowered standpoint model does not satisfy the V1 sentence".into());
                    }
                    lowered_model = Some(low.structure);
                    Some(ok)
                }
                Err(e) => {
                    names_remapped = matches!(e, TranslationError::NoIndividualForName { .. });
                    notes.push(format!("standpoint model cannot be lowered: {e}"));
                    Some(false)
                }
            },
            _ => None,
        };

        let timed_out = matches!(v1_out, SearchOutcome::Timeout(_))
            || matches!(fosl_out, SearchOutcome::Timeout(_));
        // The lowering guarantee covers only models whose names denote
        // individuals; a failed backward witness after remapping names is
        // a gap in the translation, not in the correspondence.
        let verdict = if forward == Some(false) || (backward == Some(false) && !names_remapped) {
            Verdict::Discrepancy
        } else if timed_out {
            Verdict::Inconclusive
        } else {
            match (v1_out.is_sat(), fosl_out.is_sat()) {
                (true, true) => {
                    if backward == Some(false) {
                        notes.push(
                            "backward witness not applicable: the standpoint model has names outside the sortal domain"
                                .into(),
                        );
                    }
                    Verdict::AgreeSat
                }
                (false, false) => Verdict::AgreeUnsat,
                (true, false) => {
                    notes.push(
                        "V1 model found but no standpoint model within entities + individuals".into(),
                    );
                    Verdict::Discrepancy
                }
                (false, true) if backward == Some(false) => {
                    notes.push(
                        "the standpoint model satisfies the translation only through names outside the sortal domain"
                            .into(),
                    );
                    Verdict::Discrepancy
                }
                (false, true) => {
                    let low = lowered_model.as_ref().expect("lowered when witness holds");
                    let inside = low.entities().len() <= b.max_entities
                        && low.registry().len() <= b.max_individuals
                        && low.warnings().is_empty();
                    if inside {
                        notes.push("lowered model lies within the V1 bounds the V1 search exhausted".into());
                        Verdict::Discrepancy
                    } else {
                        notes.push(format!(
                            "lowered model has {} entities and {} individuals{}",
                            low.entities().len(),
                            low.registry().len(),
                            if low.warnings().is_empty() {
                                ""
                            } else {
                                " with shared extensions"
                            }
                        ));
                        Verdict::BoundMismatch
                    }
                }
            }
        };

        Ok(EquisatReport {
            formula: f.to_string(),
            strict_names,
            verdict,
            v1: DirectionReport {
                direction: "v1",
                outcome: v1_out.label(),
                elapsed_ms: ms(v1_elapsed),
                bounds: b,
                witness: forward,
                model_path: None,
            },
            fosl: DirectionReport {
                direction: "fosl",
                outcome: fosl_out.label(),
                elapsed_ms: ms(fosl_elapsed),
                bounds: fosl_bounds,
                witness: backward,
                model_path: None,
            },
            notes,
            v1_model: v1_out.model().cloned(),
            fosl_model: fosl_out.model().cloned(),
            lowered_model,
        })
    }
}

pub fn equisat_check(
    vocab: &V1Vocabulary,
    f: &Formula,
    bounds: Bounds,
    strict_names: bool,
) -> Result<EquisatReport, EquisatError> {
    ModelFinder::new(bounds).equisat(vocab, f, strict_names)
}
