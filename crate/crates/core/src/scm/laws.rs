use serde::{Deserialize, Serialize};

use crate::checkers::determination::first_violation;
use crate::checkers::invariance::invariance_of;
use crate::checkers::laws::{check_commute, check_overwrite};
use crate::error::{Error, Result};
use crate::factored::VarSet;
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord, IDENTITY};
use crate::scm::encode::{set_label, EncodedLayout, INIT};
use crate::scm::Scm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    /// Interventions on different variables commute.
    Commute,
    /// Interventions on the same variable overwrite.
    Overwrite,
    /// No generator changes the exogenous outcome coordinates.
    ExogenousInvariance,
    /// `V_i` is determined by `(Pa_i, U_i)` via the active mechanism.
    Determination,
    /// That determination survives every generator not targeting `i`.
    DeterminationInvariance,
}

impl LawKind {
    pub const ALL: [LawKind; 5] = [
        LawKind::Commute,
        LawKind::Overwrite,
        LawKind::ExogenousInvariance,
        LawKind::Determination,
        LawKind::DeterminationInvariance,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScmLawViolation {
    pub law: LawKind,
    /// Which instance failed, e.g. the generator pair or variable.
    pub instance: String,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScmLawReport {
    /// Number of instances checked, per law, in [`LawKind::ALL`] order.
    pub checked: [usize; 5],
    pub violations: Vec<ScmLawViolation>,
}

impl ScmLawReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, law: LawKind) -> impl Iterator<Item = &ScmLawViolation> {
        self.violations.iter().filter(move |v| v.law == law)
    }
}

/// The map `Y_{Pa_i ∪ U_i} → V_i` of mechanism `slot` (`None` = default).
fn active_mechanism(
    model: &ActionModel,
    scm: &Scm,
    i: usize,
    inputs: &VarSet,
    slot: Option<usize>,
) -> TotalMap {
    let space = model.outcomes();
    let n_exo = scm.exogenous().len();
    let v = &scm.endogenous()[i];
    let domain = space.subspace(inputs);
    let codomain = v.values.clone();
    match slot {
        Some(k) => TotalMap::constant(domain, codomain, k),
        None => {
            let sizes: Vec<usize> = inputs
                .indices()
                .iter()
                .map(|&k| space.variables()[k].values.len())
                .collect();
            TotalMap::from_fn(domain, codomain, |t| {
                // decode the sub-tuple, last variable fastest
                let mut coords = vec![0; sizes.len()];
                let mut rest = t;
                for k in (0..sizes.len()).rev() {
                    coords[k] = rest % sizes[k];
                    rest /= sizes[k];
                }
                let mut values = vec![0; scm.endogenous().len()];
                let mut u = vec![0; n_exo];
                for (&var, &c) in inputs.indices().iter().zip(&coords) {
                    if var < n_exo {
                        u[var] = c;
                    } else {
                        values[var - n_exo] = c;
                    }
                }
                scm.eval(i, &values, &u)
            })
        }
    }
}

fn check_shape(model: &ActionModel, scm: &Scm) -> Result<()> {
    let layout = EncodedLayout::new(scm, &Limits::new(usize::MAX))?;
    if !model.states().same_elements(layout.states.total()) {
        return Err(Error::ModelMismatch("state sets differ".into()));
    }
    let ids: Vec<&str> = model.outcomes().variables().iter().map(|v| v.id.as_str()).collect();
    let want: Vec<&str> = layout.outcomes.variables().iter().map(|v| v.id.as_str()).collect();
    if ids != want || !model.outcomes().total().same_elements(layout.outcomes.total()) {
        return Err(Error::ModelMismatch("outcome variables differ".into()));
    }
    model
        .generator(INIT)
        .map_err(|_| Error::ModelMismatch("no 'init' generator".into()))?;
    for v in scm.endogenous() {
        for value in v.values.elements() {
            let l = set_label(&v.id, value);
            model
                .generator(&l)
                .map_err(|_| Error::ModelMismatch(format!("no '{l}' generator")))?;
        }
    }
    Ok(())
}

/// Exhaustively check the five intervention laws of an encoded SCM.
pub fn verify_scm_laws(model: &ActionModel, scm: &Scm) -> Result<ScmLawReport> {
    check_shape(model, scm)?;
    let mut report = ScmLawReport {
        checked: [0; 5],
        violations: Vec::new(),
    };
    let endo = scm.endogenous();
    let n_exo = scm.exogenous().len();
    let sets: Vec<Vec<String>> = endo
        .iter()
        .map(|v| v.values.elements().iter().map(|x| set_label(&v.id, x)).collect())
        .collect();

    for i in 0..endo.len() {
        for j in i + 1..endo.len() {
            for a in &sets[i] {
                for b in &sets[j] {
                    report.checked[0] += 1;
                    if let Some(cx) = check_commute(model, a, b)?.counterexample {
                        report.violations.push(ScmLawViolation {
                            law: LawKind::Commute,
                            instance: format!("{a} / {b}"),
                            state: cx.state,
                        });
                    }
                }
            }
        }
        for a in &sets[i] {
            for b in &sets[i] {
                report.checked[1] += 1;
                if let Some(cx) = check_overwrite(model, a, b)?.counterexample {
                    report.violations.push(ScmLawViolation {
                        law: LawKind::Overwrite,
                        instance: format!("{a} after {b}"),
                        state: cx.state,
                    });
                }
            }
        }
    }

    let u_vars = VarSet::from_indices((0..n_exo).collect());
    let u_before = model.outcome_map(&ActionWord::empty(), &u_vars)?;
    for label in model.generator_labels() {
        report.checked[2] += 1;
        let after = model.outcome_map(&ActionWord::single(label), &u_vars)?;
        if let Some(x) = after.first_difference(&u_before) {
            report.violations.push(ScmLawViolation {
                law: LawKind::ExogenousInvariance,
                instance: label.to_string(),
                state: model.states().label(x).to_string(),
            });
        }
    }

    for (i, v) in endo.iter().enumerate() {
        let target = VarSet::from_indices(vec![n_exo + i]);
        let mut inputs: Vec<usize> = v.parents.iter().map(|&p| n_exo + p).collect();
        inputs.push(v.exogenous);
        let inputs = VarSet::from_indices(inputs);

        let mut setters: Vec<(String, Option<usize>)> = vec![(INIT.to_string(), None)];
        setters.extend(sets[i].iter().cloned().enumerate().map(|(k, l)| (l, Some(k))));
        let others: Vec<&str> = std::iter::once(IDENTITY)
            .chain(
                sets.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .flat_map(|(_, s)| s.iter().map(String::as_str)),
            )
            .collect();

        for (g, slot) in &setters {
            let f = active_mechanism(model, scm, i, &inputs, *slot);
            let act = model.compose(&ActionWord::single(g.as_str()))?;
            report.checked[3] += 1;
            let oi = model.outcome_of(&act, &inputs);
            let oj = model.outcome_of(&act, &target);
            if let Some(x) = first_violation(&f, &oi, &oj) {
                report.violations.push(ScmLawViolation {
                    law: LawKind::Determination,
                    instance: format!("{} via {g}", v.id),
                    state: model.states().label(x).to_string(),
                });
                continue;
            }
            for h in &others {
                report.checked[4] += 1;
                let after = model.generator(h)?.after(&act)?;
                if let Some(cx) = invariance_of(model, &after, &f, &inputs, &target).counterexample {
                    report.violations.push(ScmLawViolation {
                        law: LawKind::DeterminationInvariance,
                        instance: format!("{} via {g} under {h}", v.id),
                        state: cx.state,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scm::encode::encode_scm;
    use crate::scm::tests::xor_scm;
    use crate::scm::{EndoSpec, Slot};

    #[test]
    fn xor_scm_satisfies_all_laws() {
        let scm = xor_scm();
        let m = encode_scm(&scm).unwrap();
        let r = verify_scm_laws(&m, &scm).unwrap();
        assert!(r.holds(), "{:?}", r.violations);
        assert!(r.checked.iter().all(|&c| c > 0));
    }

    #[test]
    fn one_variable_has_vacuous_commute_law() {
        let scm = Scm::new(
            vec![],
            vec![EndoSpec {
                id: "V".into(),
                values: vec!["a".into(), "b".into()],
                parents: vec![],
                exogenous: None,
                function_table: [("()".to_string(), "b".to_string())].into_iter().collect(),
            }],
        )
        .unwrap();
        let m = encode_scm(&scm).unwrap();
        let r = verify_scm_laws(&m, &scm).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked[0], 0);
        assert!(r.checked[1..4].iter().all(|&c| c > 0));
    }

    #[test]
    fn leaking_setter_breaks_invariance() {
        let scm = xor_scm();
        let honest = encode_scm(&scm).unwrap();
        let layout = EncodedLayout::new(&scm, &Limits::default()).unwrap();
        // set-V1=0 also forces M_2 to the value 0
        let leaky = TotalMap::from_fn(honest.states().clone(), honest.states().clone(), |x| {
            let (mut m, u) = layout.decode(x);
            m[0] = Slot::Value(0);
            m[1] = Slot::Value(0);
            layout.encode(&m, &u)
        });
        let model = honest.with_generator("set-V1=0", leaky).unwrap();
        let r = verify_scm_laws(&model, &scm).unwrap();
        let inv: Vec<_> = r.violations_of(LawKind::DeterminationInvariance).collect();
        assert!(inv.iter().any(|v| v.instance == "V2 via init under set-V1=0"), "{inv:?}");
        assert!(r.violations_of(LawKind::Commute).count() > 0);
    }

    #[test]
    fn mismatched_model_is_rejected() {
        let scm = xor_scm();
        let other = crate::model::tests::tiny();
        assert!(matches!(
            verify_scm_laws(&other, &scm),
            Err(Error::ModelMismatch(_))
        ));
    }
}
