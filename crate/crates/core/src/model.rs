//! Action models `(X, Y, A, proc_Y)` and the action algebra.
//!
//! Words follow the composition convention: the RIGHTMOST label acts first.
//! The word `[a, b]` denotes `do(a) ∘ do(b)`, i.e. do `b`, then `a`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factored::{FactoredSpace, VarSet};
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::set::FiniteSet;

pub const IDENTITY: &str = "id";

/// A finite sequence of generator labels, rightmost acting first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionWord(Vec<String>);

impl ActionWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self(labels.into_iter().map(Into::into).collect())
    }

    pub fn single(label: impl Into<String>) -> Self {
        Self(vec![label.into()])
    }

    /// Parse a comma-separated list; blank input is the empty word.
    pub fn parse(s: &str) -> Self {
        Self(
            s.split(',')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect(),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`: `other` acts first, then `self`.
    pub fn concat(&self, other: &ActionWord) -> ActionWord {
        let mut labels = self.0.clone();
        labels.extend(other.0.iter().cloned());
        Self(labels)
    }
}

impl fmt::Display for ActionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.0.join(","))
        }
    }
}

impl<S: Into<String>> FromIterator<S> for ActionWord {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        Self::new(iter)
    }
}

#[derive(Debug, Clone)]
pub struct ActionModel {
    states: Arc<FiniteSet>,
    outcomes: FactoredSpace,
    generators: Vec<(String, TotalMap)>,
    by_label: HashMap<String, usize>,
    process: TotalMap,
}

impl ActionModel {
    pub fn new(
        states: Arc<FiniteSet>,
        outcomes: FactoredSpace,
        generators: Vec<(String, TotalMap)>,
        process: TotalMap,
    ) -> Result<Self> {
        Self::with_limits(states, outcomes, generators, process, &Limits::default())
    }

    /// Validates every map against `X` and `Y`, and synthesizes `id` when
    /// it is missing.
    pub fn with_limits(
        states: Arc<FiniteSet>,
        outcomes: FactoredSpace,
        generators: Vec<(String, TotalMap)>,
        process: TotalMap,
        limits: &Limits,
    ) -> Result<Self> {
        limits.check("state set", states.len() as u128)?;
        limits.check("outcome set", outcomes.total().len() as u128)?;
        check_sets("process domain", &states, process.domain())?;
        check_sets("process codomain", outcomes.total(), process.codomain())?;

        let mut gens = Vec::with_capacity(generators.len() + 1);
        let mut by_label = HashMap::new();
        if !generators.iter().any(|(l, _)| l == IDENTITY) {
            by_label.insert(IDENTITY.to_string(), 0);
            gens.push((IDENTITY.to_string(), TotalMap::identity(states.clone())));
        }
        for (label, map) in generators {
            check_sets(&format!("generator '{label}' domain"), &states, map.domain())?;
            check_sets(&format!("generator '{label}' codomain"), &states, map.codomain())?;
            if label == IDENTITY && map.table().iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::BadIdentity);
            }
            if by_label.insert(label.clone(), gens.len()).is_some() {
                return Err(Error::DuplicateElement {
                    set: "generators".into(),
                    element: label,
                });
            }
            gens.push((label, map));
        }
        Ok(Self {
            states,
            outcomes,
            generators: gens,
            by_label,
            process,
        })
    }

    pub fn states(&self) -> &Arc<FiniteSet> {
        &self.states
    }

    pub fn outcomes(&self) -> &FactoredSpace {
        &self.outcomes
    }

    pub fn process(&self) -> &TotalMap {
        &self.process
    }

    pub fn generators(&self) -> &[(String, TotalMap)] {
        &self.generators
    }

    pub fn generator_labels(&self) -> impl Iterator<Item = &str> {
        self.generators.iter().map(|(l, _)| l.as_str())
    }

    pub fn generator(&self, label: &str) -> Result<&TotalMap> {
        self.by_label
            .get(label)
            .map(|&i| &self.generators[i].1)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// A copy of this model with `label` added, or replaced if present.
    pub fn with_generator(&self, label: &str, map: TotalMap) -> Result<Self> {
        let mut gens: Vec<_> = self.generators.clone();
        match gens.iter_mut().find(|(l, _)| l == label) {
            Some(slot) => slot.1 = map,
            None => gens.push((label.to_string(), map)),
        }
        Self::new(self.states.clone(), self.outcomes.clone(), gens, self.process.clone())
    }

    pub fn check_word(&self, w: &ActionWord) -> Result<()> {
        for l in w.labels() {
            self.generator(l)?;
        }
        Ok(())
    }

    /// `do_X(a_1 ⋯ a_n) = do_X(a_1) ∘ ⋯ ∘ do_X(a_n)`; the empty word is the
    /// identity.
    pub fn compose(&self, w: &ActionWord) -> Result<TotalMap> {
        self.check_word(w)?;
        let mut table: Vec<usize> = (0..self.states.len()).collect();
        for label in w.labels().iter().rev() {
            let g = self.generator(label)?;
            for v in table.iter_mut() {
                *v = g.apply(*v);
            }
        }
        Ok(TotalMap::from_table(
            self.states.clone(),
            self.states.clone(),
            table,
        ))
    }

    /// `outcome_I^w = π_I ∘ proc_Y ∘ do_X(w) : X → Y_I`.
    pub fn outcome_map(&self, w: &ActionWord, vars: &VarSet) -> Result<TotalMap> {
        let act = self.compose(w)?;
        Ok(self.outcome_of(&act, vars))
    }

    /// `π_I ∘ proc_Y ∘ act` for an already composed state map.
    pub fn outcome_of(&self, act: &TotalMap, vars: &VarSet) -> TotalMap {
        if let Some(&v) = vars.indices().last() {
            assert!(v < self.outcomes.variables().len(), "variable out of range");
        }
        let full = vars.len() == self.outcomes.variables().len();
        TotalMap::from_fn(self.states.clone(), self.outcomes.subspace(vars), |x| {
            let y = self.process.apply(act.apply(x));
            if full {
                y
            } else {
                self.outcomes.project_index(y, vars)
            }
        })
    }

    pub fn outcome_map_named<S: AsRef<str>>(&self, w: &ActionWord, vars: &[S]) -> Result<TotalMap> {
        let vars = self.outcomes.var_set(vars)?;
        self.outcome_map(w, &vars)
    }

    /// The context `X_s = im do_X(s)`, in state order.
    pub fn context_of(&self, s: &ActionWord) -> Result<Vec<String>> {
        Ok(self.compose(s)?.image())
    }

    pub fn var_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<VarSet> {
        self.outcomes.var_set(ids)
    }
}

fn check_sets(context: &str, expected: &FiniteSet, found: &FiniteSet) -> Result<()> {
    if expected.same_elements(found) {
        Ok(())
    } else {
        Err(Error::SetMismatch {
            context: context.to_string(),
            expected: expected.id().to_string(),
            found: found.id().to_string(),
        })
    }
}
