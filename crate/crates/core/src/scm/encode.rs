use crate::error::Result;
use crate::factored::{FactoredSpace, Variable};
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::model::ActionModel;
use crate::scm::{Scm, Slot};
use crate::set::FiniteSet;

/// Label of the default mechanism `f_i` inside each `M_i`.
pub const DEFAULT_MECHANISM: &str = "<f>";
/// Label of the initialization generator.
pub const INIT: &str = "init";

pub fn set_label(var: &str, value: &str) -> String {
    format!("set-{var}={value}")
}

/// The state and outcome spaces of an encoded SCM.
///
/// States are tuples `(M_1, …, M_n, U_1, …, U_k)`; each `M_i` lists the
/// default mechanism first, then the values of `V_i`. Outcomes are tuples
/// `(U_1, …, U_k, V_1, …, V_n)`.
#[derive(Debug, Clone)]
pub struct EncodedLayout {
    pub states: FactoredSpace,
    pub outcomes: FactoredSpace,
    n_endo: usize,
}

impl EncodedLayout {
    pub fn new(scm: &Scm, limits: &Limits) -> Result<Self> {
        let mut state_vars = Vec::new();
        for v in scm.endogenous() {
            let labels = std::iter::once(DEFAULT_MECHANISM.to_string())
                .chain(v.values.elements().iter().cloned());
            state_vars.push(Variable {
                id: format!("M_{}", v.id),
                values: FiniteSet::new(format!("M_{}", v.id), labels)?.shared(),
            });
        }
        let exo_vars = scm.exogenous().iter().map(|u| Variable {
            id: u.id.clone(),
            values: u.values.clone(),
        });
        state_vars.extend(exo_vars.clone());
        let mut outcome_vars: Vec<Variable> = exo_vars.collect();
        outcome_vars.extend(scm.endogenous().iter().map(|v| Variable {
            id: v.id.clone(),
            values: v.values.clone(),
        }));
        Ok(Self {
            states: FactoredSpace::with_limits(state_vars, limits)?,
            outcomes: FactoredSpace::with_limits(outcome_vars, limits)?,
            n_endo: scm.endogenous().len(),
        })
    }

    pub fn decode(&self, x: usize) -> (Vec<Slot>, Vec<usize>) {
        let n_vars = self.states.variables().len();
        let slots = (0..self.n_endo)
            .map(|i| match self.states.coordinate(x, i) {
                0 => Slot::Default,
                k => Slot::Value(k - 1),
            })
            .collect();
        let u = (self.n_endo..n_vars)
            .map(|k| self.states.coordinate(x, k))
            .collect();
        (slots, u)
    }

    pub fn encode(&self, slots: &[Slot], u: &[usize]) -> usize {
        let coords: Vec<usize> = slots
            .iter()
            .map(|s| match s {
                Slot::Default => 0,
                Slot::Value(v) => v + 1,
            })
            .chain(u.iter().copied())
            .collect();
        self.states.encode(&coords)
    }

    pub fn outcome(&self, u: &[usize], values: &[usize]) -> usize {
        let coords: Vec<usize> = u.iter().chain(values).copied().collect();
        self.outcomes.encode(&coords)
    }
}

pub fn encode_scm(scm: &Scm) -> Result<ActionModel> {
    encode_scm_with(scm, &Limits::default())
}

/// Encode `scm` as the action model with `X = ∏M_i × ∏U_i`,
/// `Y = ∏U_i × ∏V_i`, `proc(m, u) = (u, V_m(u))`, and generators `init`
/// (all mechanisms to default, `U` kept) and `set-V=v` (one slot replaced).
pub fn encode_scm_with(scm: &Scm, limits: &Limits) -> Result<ActionModel> {
    let layout = EncodedLayout::new(scm, limits)?;
    let states = layout.states.total().clone();
    let n = states.len();

    let process = TotalMap::from_fn(states.clone(), layout.outcomes.total().clone(), |x| {
        let (m, u) = layout.decode(x);
        layout.outcome(&u, &scm.potential_response(&m, &u))
    });

    let mut generators = Vec::new();
    let defaults = vec![Slot::Default; scm.endogenous().len()];
    generators.push((
        INIT.to_string(),
        TotalMap::from_fn(states.clone(), states.clone(), |x| {
            let (_, u) = layout.decode(x);
            layout.encode(&defaults, &u)
        }),
    ));
    for (i, v) in scm.endogenous().iter().enumerate() {
        for (k, value) in v.values.elements().iter().enumerate() {
            let table = (0..n)
                .map(|x| {
                    let (mut m, u) = layout.decode(x);
                    m[i] = Slot::Value(k);
                    layout.encode(&m, &u)
                })
                .collect();
            generators.push((
                set_label(&v.id, value),
                TotalMap::from_table(states.clone(), states.clone(), table),
            ));
        }
    }
    ActionModel::with_limits(states, layout.outcomes, generators, process, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ActionWord;
    use crate::scm::tests::xor_scm;
    use crate::scm::EndoSpec;

    fn copy_scm() -> Scm {
        let bin = vec!["0".to_string(), "1".to_string()];
        Scm::new(
            vec![("U".into(), bin.clone())],
            vec![EndoSpec {
                id: "V".into(),
                values: bin,
                parents: vec![],
                exogenous: Some("U".into()),
                function_table: [("0", "0"), ("1", "1")]
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect(),
            }],
        )
        .unwrap()
    }

    #[test]
    fn single_copy_variable_sizes() {
        let m = encode_scm(&copy_scm()).unwrap();
        // |M_V| = 3, |U| = 2
        assert_eq!(m.states().len(), 6);
        let labels: Vec<&str> = m.generator_labels().collect();
        assert_eq!(labels, vec!["id", "init", "set-V=0", "set-V=1"]);
    }

    #[test]
    fn init_is_idempotent_and_keeps_u() {
        let scm = xor_scm();
        let m = encode_scm(&scm).unwrap();
        let once = m.compose(&ActionWord::single(INIT)).unwrap();
        let twice = m.compose(&ActionWord::new([INIT, INIT])).unwrap();
        assert_eq!(once, twice);
        let layout = EncodedLayout::new(&scm, &Limits::default()).unwrap();
        for x in 0..m.states().len() {
            let (m0, u) = layout.decode(once.apply(x));
            assert_eq!(m0, vec![Slot::Default; 2]);
            assert_eq!(u, layout.decode(x).1);
        }
    }

    #[test]
    fn generators_act_on_slots_as_described() {
        let scm = xor_scm();
        let m = encode_scm(&scm).unwrap();
        let layout = EncodedLayout::new(&scm, &Limits::default()).unwrap();
        let set = m.generator("set-V2=1").unwrap();
        for x in 0..m.states().len() {
            let (mut slots, u) = layout.decode(x);
            slots[1] = Slot::Value(1);
            assert_eq!(set.apply(x), layout.encode(&slots, &u));
        }
    }

    #[test]
    fn xor_outcome_after_set_and_init() {
        let scm = xor_scm();
        let m = encode_scm(&scm).unwrap();
        let w = ActionWord::new(["set-V1=0", INIT]);
        let out = m.outcome_map(&w, &m.outcomes().all()).unwrap();
        let layout = EncodedLayout::new(&scm, &Limits::default()).unwrap();
        for x in 0..m.states().len() {
            let (_, u) = layout.decode(x);
            if u == [1, 1] {
                assert_eq!(m.outcomes().total().label(out.apply(x)), "1|1|0|1");
            }
        }
    }

    #[test]
    fn guardrail_applies() {
        assert!(encode_scm_with(&xor_scm(), &Limits::new(10)).is_err());
    }
}
