//! Mechanism discovery and surgicality.
//!
//! A mechanism is a determination `Y_j = f(Y_I)` that holds in a context
//! `s` together with the record of which later actions leave it intact.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::checkers::determination::determine;
use crate::checkers::invariance::{check_witness_sets, invariance_of, violation_at};
use crate::error::{Error, Result};
use crate::factored::VarSet;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord, IDENTITY};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MechanismViolation {
    pub action: ActionWord,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismRecord {
    pub target: String,
    pub parents: Vec<String>,
    /// `Y_parents → Y_target`.
    pub map: TotalMap,
    pub context: ActionWord,
    pub unique: bool,
    pub invariant_under: Vec<ActionWord>,
    pub violated_by: Vec<MechanismViolation>,
}

impl MechanismRecord {
    pub fn describe(&self) -> String {
        format!("{} <- {{{}}}", self.target, self.parents.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscoverOptions {
    pub max_parents: usize,
    /// Invariance is probed with every word of length `1..=probe_depth`
    /// over the non-identity generators.
    pub probe_depth: usize,
}

impl Default for DiscoverOptions {
    fn default() -> Self {
        Self {
            max_parents: 2,
            probe_depth: 1,
        }
    }
}

pub(crate) fn probe_words(model: &ActionModel, depth: usize) -> Vec<ActionWord> {
    let gens: Vec<&str> = model.generator_labels().filter(|l| *l != IDENTITY).collect();
    let mut words = Vec::new();
    let mut layer = vec![ActionWord::empty()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| gens.iter().map(move |g| ActionWord::single(*g).concat(w)))
            .collect();
        words.extend(layer.iter().cloned());
    }
    words
}

/// Candidate parent sets for `target`: all subsets of the other variables
/// with at most `max` members, smallest first, lexicographic by variable
/// order within a size.
pub(crate) fn parent_candidates(n_vars: usize, target: usize, max: usize) -> Vec<VarSet> {
    let others: Vec<usize> = (0..n_vars).filter(|&v| v != target).collect();
    (0..=max.min(others.len()))
        .flat_map(|k| {
            others
                .iter()
                .copied()
                .combinations(k)
                .map(VarSet::from_indices)
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Probe `f : Y_I → Y_j` (valid in context `ctx`) against every probe word.
fn probe(
    model: &ActionModel,
    ctx: &TotalMap,
    f: &TotalMap,
    parents: &VarSet,
    target: &VarSet,
    words: &[ActionWord],
) -> Result<(Vec<ActionWord>, Vec<MechanismViolation>)> {
    let mut invariant = Vec::new();
    let mut violated = Vec::new();
    for b in words {
        let act = model.compose(b)?.after(ctx)?;
        let r = invariance_of(model, &act, f, parents, target);
        match r.counterexample {
            None => invariant.push(b.clone()),
            Some(cx) => violated.push(MechanismViolation {
                action: b.clone(),
                state: cx.state,
            }),
        }
    }
    Ok((invariant, violated))
}

/// Build the record for `target <- parents` in `context`, or `None` when the
/// determination does not hold there.
pub fn mechanism_record<S: AsRef<str>>(
    model: &ActionModel,
    context: &ActionWord,
    target: &str,
    parents: &[S],
    probe_depth: usize,
) -> Result<Option<MechanismRecord>> {
    let j = model.var_set(&[target])?;
    let i = model.var_set(parents)?;
    let ctx = model.compose(context)?;
    let d = determine(&model.outcome_of(&ctx, &i), &model.outcome_of(&ctx, &j));
    let Some(map) = d.witness else {
        return Ok(None);
    };
    let words = probe_words(model, probe_depth);
    let (invariant_under, violated_by) = probe(model, &ctx, &map, &i, &j, &words)?;
    Ok(Some(MechanismRecord {
        target: target.to_string(),
        parents: model.outcomes().var_ids(&i),
        map,
        context: context.clone(),
        unique: d.unique == Some(true),
        invariant_under,
        violated_by,
    }))
}

/// For every variable, the first parent set (smallest, then lexicographic)
/// that determines it in `context`, with its invariance profile.
pub fn discover_mechanisms(
    model: &ActionModel,
    context: &ActionWord,
    max_parents: usize,
) -> Result<Vec<MechanismRecord>> {
    discover_mechanisms_with(
        model,
        context,
        &DiscoverOptions {
            max_parents,
            ..DiscoverOptions::default()
        },
    )
}

pub fn discover_mechanisms_with(
    model: &ActionModel,
    context: &ActionWord,
    opts: &DiscoverOptions,
) -> Result<Vec<MechanismRecord>> {
    let ctx = model.compose(context)?;
    let space = model.outcomes();
    let n = space.variables().len();
    let words = probe_words(model, opts.probe_depth);
    let mut records = Vec::new();
    for target in 0..n {
        let j = VarSet::from_indices(vec![target]);
        let oj = model.outcome_of(&ctx, &j);
        for i in parent_candidates(n, target, opts.max_parents) {
            let d = determine(&model.outcome_of(&ctx, &i), &oj);
            let Some(map) = d.witness else { continue };
            let (invariant_under, violated_by) = probe(model, &ctx, &map, &i, &j, &words)?;
            records.push(MechanismRecord {
                target: space.variables()[target].id.clone(),
                parents: space.var_ids(&i),
                map,
                context: context.clone(),
                unique: d.unique == Some(true),
                invariant_under,
                violated_by,
            });
            break;
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewMechanism {
    pub parents: Vec<String>,
    pub map: TotalMap,
    /// Generator words the new mechanism had to survive.
    pub required_invariance: Vec<ActionWord>,
    /// Every probe word the new mechanism survives, reported for reference.
    pub fresh_invariance: Vec<ActionWord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgicalVerdict {
    pub surgical: bool,
    pub action: String,
    pub target: Option<String>,
    /// Indices into the reference records.
    pub broken: Vec<usize>,
    pub survived: Vec<usize>,
    pub new_mechanism: Option<NewMechanism>,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurgicalOptions {
    /// Largest parent set tried for the replacement mechanism; `None` tries
    /// every subset of the other variables.
    pub max_parents: Option<usize>,
    pub probe_depth: usize,
}

impl Default for SurgicalOptions {
    fn default() -> Self {
        Self {
            max_parents: None,
            probe_depth: 1,
        }
    }
}

pub fn check_surgical(
    model: &ActionModel,
    a: &str,
    mechanisms: &[MechanismRecord],
    context: &ActionWord,
) -> Result<SurgicalVerdict> {
    check_surgical_with(model, a, mechanisms, context, &SurgicalOptions::default())
}

/// Is `a` a surgical intervention relative to `mechanisms` in `context`?
///
/// Surgical means: in context `a·context` exactly one record stops holding,
/// and its target gets a new unique determination that is invariant under
/// every word in the broken record's `invariant_under` list, except words
/// `g` that undo `a` (where `g·a·context` and `g·context` agree as maps).
pub fn check_surgical_with(
    model: &ActionModel,
    a: &str,
    mechanisms: &[MechanismRecord],
    context: &ActionWord,
    opts: &SurgicalOptions,
) -> Result<SurgicalVerdict> {
    if mechanisms.is_empty() {
        return Err(Error::InvalidMechanism("empty mechanism list".into()));
    }
    model.generator(a)?;
    let ctx = model.compose(context)?;
    let after = model.generator(a)?.after(&ctx)?;

    let mut resolved = Vec::with_capacity(mechanisms.len());
    for rec in mechanisms {
        let i = model.var_set(&rec.parents)?;
        let j = model.var_set(&[rec.target.as_str()])?;
        check_witness_sets(model, &rec.map, &i, &j)
            .map_err(|e| Error::InvalidMechanism(format!("{}: {e}", rec.describe())))?;
        if violation_at(model, &ctx, &rec.map, &i, &j).is_some() {
            return Err(Error::InvalidMechanism(format!(
                "{} does not hold in context {}",
                rec.describe(),
                context
            )));
        }
        resolved.push((i, j));
    }

    let (mut broken, mut survived) = (Vec::new(), Vec::new());
    for (k, (rec, (i, j))) in mechanisms.iter().zip(&resolved).enumerate() {
        if violation_at(model, &after, &rec.map, i, j).is_some() {
            broken.push(k);
        } else {
            survived.push(k);
        }
    }
    let mut verdict = SurgicalVerdict {
        surgical: false,
        action: a.to_string(),
        target: None,
        broken,
        survived,
        new_mechanism: None,
        reasons: Vec::new(),
    };
    if verdict.broken.len() != 1 {
        verdict.reasons.push(format!(
            "{} mechanisms invalidated; exactly one is required",
            verdict.broken.len()
        ));
        return Ok(verdict);
    }

    let old = &mechanisms[verdict.broken[0]];
    let target = model.outcomes().var_index(&old.target)?;
    verdict.target = Some(old.target.clone());
    let j = VarSet::from_indices(vec![target]);

    let mut required = Vec::new();
    for g in &old.invariant_under {
        let g_map = model.compose(g)?;
        let undoes = g_map.after(&after)? == g_map.after(&ctx)?;
        if !undoes {
            required.push(g.clone());
        }
    }

    let n = model.outcomes().variables().len();
    let max = opts.max_parents.unwrap_or(n.saturating_sub(1));
    let oj = model.outcome_of(&after, &j);
    let mut tried_unique = false;
    for i in parent_candidates(n, target, max) {
        let d = determine(&model.outcome_of(&after, &i), &oj);
        if d.unique != Some(true) {
            continue;
        }
        tried_unique = true;
        let f = d.witness.expect("holding determination has a witness");
        let (passed, _) = probe(model, &after, &f, &i, &j, &required)?;
        if passed.len() == required.len() {
            let words = probe_words(model, opts.probe_depth);
            let (fresh, _) = probe(model, &after, &f, &i, &j, &words)?;
            verdict.new_mechanism = Some(NewMechanism {
                parents: model.outcomes().var_ids(&i),
                map: f,
                required_invariance: required,
                fresh_invariance: fresh,
            });
            verdict.surgical = true;
            return Ok(verdict);
        }
    }
    verdict.reasons.push(if tried_unique {
        format!(
            "no unique determination of {} in the new context survives the required invariances",
            old.target
        )
    } else {
        format!("{} has no unique determination in the new context", old.target)
    });
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::tiny;

    #[test]
    fn candidates_are_ordered_by_size_then_lexicographically() {
        let c: Vec<Vec<usize>> = parent_candidates(4, 1, 2)
            .iter()
            .map(|v| v.indices().to_vec())
            .collect();
        assert_eq!(
            c,
            vec![
                vec![],
                vec![0],
                vec![2],
                vec![3],
                vec![0, 2],
                vec![0, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn probe_words_skip_identity() {
        let m = tiny();
        let w: Vec<String> = probe_words(&m, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(w, vec!["b", "c", "b,b", "c,b", "b,c", "c,c"]);
    }

    #[test]
    fn constant_context_makes_every_variable_effective() {
        let m = tiny();
        let recs = discover_mechanisms(&m, &ActionWord::single("c"), 1).unwrap();
        assert_eq!(recs.len(), 2);
        for r in &recs {
            assert!(r.parents.is_empty(), "{}", r.describe());
            assert!(r.unique);
        }
    }

    #[test]
    fn identity_is_never_surgical() {
        let m = tiny();
        let ctx = ActionWord::empty();
        let recs = discover_mechanisms(&m, &ctx, 1).unwrap();
        let v = check_surgical(&m, IDENTITY, &recs, &ctx).unwrap();
        assert!(!v.surgical);
        assert!(v.broken.is_empty());
    }

    #[test]
    fn records_must_hold_in_context() {
        let m = tiny();
        let recs = discover_mechanisms(&m, &ActionWord::single("c"), 0).unwrap();
        // constants valid after c are not valid in the empty context
        let err = check_surgical(&m, "b", &recs, &ActionWord::empty()).unwrap_err();
        assert!(matches!(err, Error::InvalidMechanism(_)));
        assert!(matches!(
            check_surgical(&m, "b", &[], &ActionWord::empty()),
            Err(Error::InvalidMechanism(_))
        ));
    }
}
