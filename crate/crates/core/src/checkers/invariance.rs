use serde::{Deserialize, Serialize};

use crate::checkers::determination::first_violation;
use crate::error::{Error, Result};
use crate::factored::VarSet;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord};

/// A state where `f` stops predicting `Y_J` from `Y_I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceViolation {
    /// Starting state.
    pub state: String,
    /// State reached after the full word, just before the process runs.
    pub reached: String,
    pub observed_i: String,
    pub predicted_j: String,
    pub observed_j: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceResult {
    pub holds: bool,
    pub counterexample: Option<InvarianceViolation>,
}

/// Does `b` leave the determination `outcome_J^{w_a} = f ∘ outcome_I^{w_a}`
/// invariant, i.e. does `outcome_J^{b·w_a} = f ∘ outcome_I^{b·w_a}` hold?
/// `b` acts after `w_a` and before the process.
pub fn check_invariance(
    model: &ActionModel,
    w_a: &ActionWord,
    f: &TotalMap,
    vars_i: &VarSet,
    vars_j: &VarSet,
    b: &ActionWord,
) -> Result<InvarianceResult> {
    check_witness_sets(model, f, vars_i, vars_j)?;
    let base = model.compose(w_a)?;
    if let Some(x) = violation_at(model, &base, f, vars_i, vars_j) {
        return Err(Error::BaseDeterminationFails(format!(
            "state '{}'",
            model.states().label(x)
        )));
    }
    let after = model.compose(b)?.after(&base)?;
    Ok(invariance_of(model, &after, f, vars_i, vars_j))
}

/// Invariance test on an already composed state map.
pub(crate) fn invariance_of(
    model: &ActionModel,
    act: &TotalMap,
    f: &TotalMap,
    vars_i: &VarSet,
    vars_j: &VarSet,
) -> InvarianceResult {
    match violation_at(model, act, f, vars_i, vars_j) {
        None => InvarianceResult {
            holds: true,
            counterexample: None,
        },
        Some(x) => {
            let oi = model.outcome_of(act, vars_i);
            let oj = model.outcome_of(act, vars_j);
            InvarianceResult {
                holds: false,
                counterexample: Some(InvarianceViolation {
                    state: model.states().label(x).to_string(),
                    reached: model.states().label(act.apply(x)).to_string(),
                    observed_i: oi.codomain().label(oi.apply(x)).to_string(),
                    predicted_j: f.codomain().label(f.apply(oi.apply(x))).to_string(),
                    observed_j: oj.codomain().label(oj.apply(x)).to_string(),
                }),
            }
        }
    }
}

pub(crate) fn violation_at(
    model: &ActionModel,
    act: &TotalMap,
    f: &TotalMap,
    vars_i: &VarSet,
    vars_j: &VarSet,
) -> Option<usize> {
    let oi = model.outcome_of(act, vars_i);
    let oj = model.outcome_of(act, vars_j);
    first_violation(f, &oi, &oj)
}

pub(crate) fn check_witness_sets(
    model: &ActionModel,
    f: &TotalMap,
    vars_i: &VarSet,
    vars_j: &VarSet,
) -> Result<()> {
    let (yi, yj) = (
        model.outcomes().subspace(vars_i),
        model.outcomes().subspace(vars_j),
    );
    for (ctx, want, got) in [("witness domain", &yi, f.domain()), ("witness codomain", &yj, f.codomain())] {
        if !want.same_elements(got) {
            return Err(Error::SetMismatch {
                context: ctx.into(),
                expected: want.id().into(),
                found: got.id().into(),
            });
        }
    }
    Ok(())
}
