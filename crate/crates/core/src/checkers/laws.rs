use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord};

/// A state on which two composite actions disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawViolation {
    pub state: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawResult {
    pub holds: bool,
    pub counterexample: Option<LawViolation>,
}

pub(crate) fn compare(model: &ActionModel, left: &TotalMap, right: &TotalMap) -> LawResult {
    match left.first_difference(right) {
        None => LawResult {
            holds: true,
            counterexample: None,
        },
        Some(x) => {
            let s = model.states();
            LawResult {
                holds: false,
                counterexample: Some(LawViolation {
                    state: s.label(x).to_string(),
                    left: s.label(left.apply(x)).to_string(),
                    right: s.label(right.apply(x)).to_string(),
                }),
            }
        }
    }
}

/// `do(a) ∘ do(b) = do(b) ∘ do(a)`.
pub fn check_commute(model: &ActionModel, a: &str, b: &str) -> Result<LawResult> {
    let ab = model.compose(&ActionWord::new([a, b]))?;
    let ba = model.compose(&ActionWord::new([b, a]))?;
    Ok(compare(model, &ab, &ba))
}

/// `do(a) ∘ do(b) = do(a)`: `a` overwrites whatever `b` did.
pub fn check_overwrite(model: &ActionModel, a: &str, b: &str) -> Result<LawResult> {
    let ab = model.compose(&ActionWord::new([a, b]))?;
    let only_a = model.generator(a)?.clone();
    Ok(compare(model, &ab, &only_a))
}
