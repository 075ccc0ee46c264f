//! Morphisms between action models and naturality checking.
//!
//! A morphism from a micro model `(X̄, Ȳ)` to an abstract model `(X, Y)` is
//! a pair of maps `x : X̄ → X`, `y : Ȳ → Y` plus a relabelling of
//! generators. It is natural when, for every generator `a`,
//! `x ∘ do_X̄(a) = do_X(α(a)) ∘ x`, and `y ∘ proc_Ȳ = proc_Y ∘ x`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord, IDENTITY};

/// Default number of failing squares reported per square kind.
pub const DEFAULT_FAILURE_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct ModelMorphism {
    source: Arc<ActionModel>,
    target: Arc<ActionModel>,
    state_map: TotalMap,
    outcome_map: TotalMap,
    /// `(source label, target label)` in source generator order.
    alphabet: Vec<(String, String)>,
}

impl ModelMorphism {
    /// `alphabet` overrides the default, which sends each source label to
    /// the target generator of the same name.
    pub fn new(
        source: Arc<ActionModel>,
        target: Arc<ActionModel>,
        state_map: TotalMap,
        outcome_map: TotalMap,
        alphabet: &[(String, String)],
    ) -> Result<Self> {
        let bad = |what: &str| Error::InvalidMorphism(what.to_string());
        if !state_map.domain().same_elements(source.states()) {
            return Err(bad("state map domain is not the source state set"));
        }
        if !state_map.codomain().same_elements(target.states()) {
            return Err(bad("state map codomain is not the target state set"));
        }
        if !outcome_map.domain().same_elements(source.outcomes().total()) {
            return Err(bad("outcome map domain is not the source outcome set"));
        }
        if !outcome_map.codomain().same_elements(target.outcomes().total()) {
            return Err(bad("outcome map codomain is not the target outcome set"));
        }
        for (from, to) in alphabet {
            source.generator(from)?;
            target.generator(to)?;
        }
        let mut pairs = Vec::new();
        for label in source.generator_labels() {
            let to = match alphabet.iter().find(|(f, _)| f == label) {
                Some((_, t)) => t.clone(),
                None if target.generator(label).is_ok() => label.to_string(),
                None => {
                    return Err(Error::InvalidMorphism(format!(
                        "alphabet map does not cover source generator '{label}'"
                    )))
                }
            };
            pairs.push((label.to_string(), to));
        }
        Ok(Self {
            source,
            target,
            state_map,
            outcome_map,
            alphabet: pairs,
        })
    }

    pub fn identity(model: Arc<ActionModel>) -> Self {
        let x = TotalMap::identity(model.states().clone());
        let y = TotalMap::identity(model.outcomes().total().clone());
        Self::new(model.clone(), model, x, y, &[]).expect("identity morphism is well formed")
    }

    pub fn source(&self) -> &Arc<ActionModel> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ActionModel> {
        &self.target
    }

    pub fn state_map(&self) -> &TotalMap {
        &self.state_map
    }

    pub fn outcome_map(&self) -> &TotalMap {
        &self.outcome_map
    }

    pub fn alphabet(&self) -> &[(String, String)] {
        &self.alphabet
    }

    pub fn translate(&self, label: &str) -> Result<&str> {
        self.alphabet
            .iter()
            .find(|(f, _)| f == label)
            .map(|(_, t)| t.as_str())
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn translate_word(&self, w: &ActionWord) -> Result<ActionWord> {
        w.labels()
            .iter()
            .map(|l| self.translate(l).map(String::from))
            .collect::<Result<Vec<_>>>()
            .map(ActionWord::new)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModelMorphism) -> Result<ModelMorphism> {
        if !self.target.states().same_elements(next.source.states())
            || !self.target.outcomes().total().same_elements(next.source.outcomes().total())
        {
            return Err(Error::InvalidMorphism(
                "morphisms do not share the middle model".into(),
            ));
        }
        let alphabet = self
            .alphabet
            .iter()
            .map(|(f, t)| next.translate(t).map(|u| (f.clone(), u.to_string())))
            .collect::<Result<Vec<_>>>()?;
        ModelMorphism::new(
            self.source.clone(),
            next.target.clone(),
            next.state_map.after(&self.state_map)?,
            next.outcome_map.after(&self.outcome_map)?,
            &alphabet,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareKind {
    /// `x ∘ do_X̄(a) = do_X(a) ∘ x`
    Action,
    /// `y ∘ proc_Ȳ = proc_Y ∘ x`
    Process,
    /// `y ∘ outcome_Ȳ^a = outcome_Y^a ∘ x`, implied by the other two.
    Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFailure {
    pub square: SquareKind,
    pub generator: Option<String>,
    /// Micro state where the two paths disagree.
    pub state: String,
    /// Result along the path through the micro model.
    pub micro_path: String,
    /// Result along the path through the abstract model.
    pub abstract_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityVerdict {
    pub natural: bool,
    pub action_failures: usize,
    pub process_failures: usize,
    pub outcome_failures: usize,
    /// Up to `cap` failures of each kind.
    pub failures: Vec<SquareFailure>,
}

pub fn check_naturality(m: &ModelMorphism) -> Result<NaturalityVerdict> {
    check_naturality_capped(m, DEFAULT_FAILURE_CAP)
}

pub fn check_naturality_capped(m: &ModelMorphism, cap: usize) -> Result<NaturalityVerdict> {
    let (src, tgt) = (&m.source, &m.target);
    let (x, y) = (&m.state_map, &m.outcome_map);
    let mut failures = Vec::new();
    let mut counts = [0usize; 3];

    let mut record = |kind: SquareKind, gen: Option<&str>, s: usize, l: String, r: String| {
        let slot = kind as usize;
        counts[slot] += 1;
        if counts[slot] <= cap {
            failures.push(SquareFailure {
                square: kind,
                generator: gen.map(String::from),
                state: src.states().label(s).to_string(),
                micro_path: l,
                abstract_path: r,
            });
        }
    };

    for (label, micro) in src.generators() {
        let abs = tgt.generator(m.translate(label)?)?;
        for s in 0..src.states().len() {
            let l = x.apply(micro.apply(s));
            let r = abs.apply(x.apply(s));
            if l != r {
                let st = tgt.states();
                record(
                    SquareKind::Action,
                    Some(label),
                    s,
                    st.label(l).into(),
                    st.label(r).into(),
                );
            }
        }
    }
    let yt = tgt.outcomes().total();
    for s in 0..src.states().len() {
        let l = y.apply(src.process().apply(s));
        let r = tgt.process().apply(x.apply(s));
        if l != r {
            record(SquareKind::Process, None, s, yt.label(l).into(), yt.label(r).into());
        }
    }
    for (label, micro) in src.generators() {
        let abs = tgt.generator(m.translate(label)?)?;
        for s in 0..src.states().len() {
            let l = y.apply(src.process().apply(micro.apply(s)));
            let r = tgt.process().apply(abs.apply(x.apply(s)));
            if l != r {
                record(
                    SquareKind::Outcome,
                    Some(label),
                    s,
                    yt.label(l).into(),
                    yt.label(r).into(),
                );
            }
        }
    }
    Ok(NaturalityVerdict {
        natural: counts[0] == 0 && counts[1] == 0,
        action_failures: counts[0],
        process_failures: counts[1],
        outcome_failures: counts[2],
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub process_surjective: bool,
    pub state_map_surjective: bool,
    pub outcome_map_surjective: bool,
    /// `|im(y ∘ proc_Ȳ)|`
    pub possible_outcomes: usize,
    /// `|Y|`
    pub outcome_space: usize,
    /// `Y \ im(y ∘ proc_Ȳ)`, in outcome order.
    pub impossible_outcomes: Vec<String>,
}

pub fn check_surjectivity_assumptions(m: &ModelMorphism) -> Result<SurjectivityReport> {
    let observed = m.outcome_map.after(m.source.process())?;
    let possible = observed.image_indices();
    let total = m.target.outcomes().total();
    let mut hit = vec![false; total.len()];
    for &i in &possible {
        hit[i] = true;
    }
    Ok(SurjectivityReport {
        process_surjective: m.source.process().is_surjective(),
        state_map_surjective: m.state_map.is_surjective(),
        outcome_map_surjective: m.outcome_map.is_surjective(),
        possible_outcomes: possible.len(),
        outcome_space: total.len(),
        impossible_outcomes: hit
            .iter()
            .enumerate()
            .filter(|(_, &h)| !h)
            .map(|(i, _)| total.label(i).to_string())
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureVerdict {
    pub holds: bool,
    pub words_checked: usize,
    pub first_failure: Option<(ActionWord, SquareFailure)>,
}

/// Check the state square for every non-identity word of length
/// `1..=depth`, shortest first. Words of length `k+1` are `g·w` for `w` of
/// length `k`, in generator order.
pub fn naturality_closure_check(m: &ModelMorphism, depth: usize) -> Result<ClosureVerdict> {
    let gens: Vec<&str> = m
        .source
        .generator_labels()
        .filter(|l| *l != IDENTITY)
        .collect();
    let x = &m.state_map;
    let mut layer: Vec<(ActionWord, TotalMap, TotalMap)> = vec![(
        ActionWord::empty(),
        TotalMap::identity(m.source.states().clone()),
        TotalMap::identity(m.target.states().clone()),
    )];
    let mut checked = 0;
    for _ in 0..depth.max(1) {
        let mut next = Vec::with_capacity(layer.len() * gens.len());
        for (w, micro, abs) in &layer {
            for g in &gens {
                let word = ActionWord::single(*g).concat(w);
                let micro = m.source.generator(g)?.after(micro)?;
                let abs = m.target.generator(m.translate(g)?)?.after(abs)?;
                checked += 1;
                let s = (0..m.source.states().len())
                    .find(|&s| x.apply(micro.apply(s)) != abs.apply(x.apply(s)));
                if let Some(s) = s {
                    let st = m.target.states();
                    let failure = SquareFailure {
                        square: SquareKind::Action,
                        generator: None,
                        state: m.source.states().label(s).to_string(),
                        micro_path: st.label(x.apply(micro.apply(s))).to_string(),
                        abstract_path: st.label(abs.apply(x.apply(s))).to_string(),
                    };
                    return Ok(ClosureVerdict {
                        holds: false,
                        words_checked: checked,
                        first_failure: Some((word, failure)),
                    });
                }
                next.push((word, micro, abs));
            }
        }
        layer = next;
    }
    Ok(ClosureVerdict {
        holds: true,
        words_checked: checked,
        first_failure: None,
    })
}
