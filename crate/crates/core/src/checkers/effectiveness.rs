use crate::checkers::determination::{determine, StatePair};
use crate::error::Result;
use crate::factored::VarSet;
use crate::model::{ActionModel, ActionWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectivenessResult {
    pub effective: bool,
    /// The constant `ā_J`, as a `Y_J` label.
    pub value: Option<String>,
    pub counterexample: Option<StatePair>,
}

/// Is `w` effective at setting `Y_J` in context `context`? That is, is
/// `outcome_J^{w·context}` determined by the empty variable set?
pub fn check_effectiveness(
    model: &ActionModel,
    w: &ActionWord,
    vars_j: &VarSet,
    context: &ActionWord,
) -> Result<EffectivenessResult> {
    let act = model.compose(&w.concat(context))?;
    let unit = model.outcome_of(&act, &VarSet::empty());
    let oj = model.outcome_of(&act, vars_j);
    let d = determine(&unit, &oj);
    Ok(EffectivenessResult {
        effective: d.holds,
        value: d
            .witness
            .map(|f| f.codomain().label(f.apply(0)).to_string()),
        counterexample: d.counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::tiny;

    #[test]
    fn constant_action_is_effective_everywhere() {
        let m = tiny();
        for vars in [vec!["1"], vec!["2"], vec!["1", "2"]] {
            let j = m.var_set(&vars).unwrap();
            let r = check_effectiveness(&m, &ActionWord::single("c"), &j, &ActionWord::empty()).unwrap();
            assert!(r.effective);
        }
        let j = m.var_set(&["1", "2"]).unwrap();
        let r = check_effectiveness(&m, &ActionWord::new(["b"]), &j, &ActionWord::single("c")).unwrap();
        assert_eq!(r.value.as_deref(), Some("1|1"));
    }

    #[test]
    fn swap_alone_is_not_effective() {
        let m = tiny();
        let j = m.var_set(&["2"]).unwrap();
        let r = check_effectiveness(&m, &ActionWord::single("b"), &j, &ActionWord::empty()).unwrap();
        assert!(!r.effective);
        assert!(r.value.is_none());
        assert!(r.counterexample.is_some());
    }

    #[test]
    fn empty_variable_set_is_always_effective() {
        let m = tiny();
        let r = check_effectiveness(&m, &ActionWord::empty(), &VarSet::empty(), &ActionWord::empty())
            .unwrap();
        assert!(r.effective);
        assert_eq!(r.value.as_deref(), Some(crate::set::UNIT_ELEMENT));
    }
}
