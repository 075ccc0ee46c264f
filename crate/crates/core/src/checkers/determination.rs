use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::factored::VarSet;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord};

/// Two states, named by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePair {
    pub first: String,
    pub second: String,
}

/// Outcome of asking whether `outcome_J^w = f ∘ outcome_I^w` for some `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminationResult {
    pub holds: bool,
    /// `f : Y_I → Y_J`; entries for `Y_I` values never reached hold the
    /// first element of `Y_J`.
    pub witness: Option<TotalMap>,
    /// `Some(true)` iff the witness is the only one. `None` when the
    /// determination fails.
    pub unique: Option<bool>,
    /// States with equal `outcome_I` but different `outcome_J`.
    pub counterexample: Option<StatePair>,
}

impl DeterminationResult {
    /// Independently re-check the result against the two outcome maps.
    pub fn verify(&self, outcome_i: &TotalMap, outcome_j: &TotalMap) -> bool {
        let states = outcome_i.domain();
        if self.holds {
            let Some(f) = &self.witness else { return false };
            let Ok(fi) = f.after(outcome_i) else { return false };
            fi == *outcome_j
                && self.unique == Some(outcome_i.is_surjective())
                && self.counterexample.is_none()
        } else {
            let Some(pair) = &self.counterexample else { return false };
            let (Some(a), Some(b)) = (states.index_of(&pair.first), states.index_of(&pair.second))
            else {
                return false;
            };
            self.witness.is_none()
                && outcome_i.apply(a) == outcome_i.apply(b)
                && outcome_j.apply(a) != outcome_j.apply(b)
        }
    }
}

/// Decide determination of `outcome_j` by `outcome_i` (maps with a common
/// domain) by binding the witness one state at a time.
pub fn determine(outcome_i: &TotalMap, outcome_j: &TotalMap) -> DeterminationResult {
    debug_assert!(outcome_i.domain().same_elements(outcome_j.domain()));
    let states = outcome_i.domain();
    let mut bound: Vec<Option<(usize, usize)>> = vec![None; outcome_i.codomain().len()];
    for x in 0..states.len() {
        let yi = outcome_i.apply(x);
        let yj = outcome_j.apply(x);
        match bound[yi] {
            None => bound[yi] = Some((yj, x)),
            Some((v, first)) if v != yj => {
                return DeterminationResult {
                    holds: false,
                    witness: None,
                    unique: None,
                    counterexample: Some(StatePair {
                        first: states.label(first).to_string(),
                        second: states.label(x).to_string(),
                    }),
                };
            }
            Some(_) => {}
        }
    }
    let unique = bound.iter().all(Option::is_some);
    let table = bound.iter().map(|b| b.map_or(0, |(v, _)| v)).collect();
    DeterminationResult {
        holds: true,
        witness: Some(TotalMap::from_table(
            outcome_i.codomain().clone(),
            outcome_j.codomain().clone(),
            table,
        )),
        unique: Some(unique),
        counterexample: None,
    }
}

/// First state where `outcome_j ≠ f ∘ outcome_i`.
pub fn first_violation(f: &TotalMap, outcome_i: &TotalMap, outcome_j: &TotalMap) -> Option<usize> {
    (0..outcome_i.domain().len()).find(|&x| f.apply(outcome_i.apply(x)) != outcome_j.apply(x))
}

pub fn check_determination(
    model: &ActionModel,
    w: &ActionWord,
    vars_i: &VarSet,
    vars_j: &VarSet,
) -> Result<DeterminationResult> {
    let act = model.compose(w)?;
    let oi = model.outcome_of(&act, vars_i);
    let oj = model.outcome_of(&act, vars_j);
    let result = determine(&oi, &oj);
    debug_assert!(result.verify(&oi, &oj));
    Ok(result)
}
