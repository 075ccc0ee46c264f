//! JSON file formats for models, morphisms, SCMs, mechanism lists and
//! domino scenarios.
//!
//! Maps are objects keyed by element labels. Outcome tuples are arrays of
//! per-variable values in declaration order; where a tuple must be an
//! object key it is written as its `|`-joined label. Action words are
//! arrays of labels, rightmost applied first.

use std::fmt::Display;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::abstraction::ModelMorphism;
use crate::checkers::{MechanismRecord, MechanismViolation};
use crate::domino::Scenario;
use crate::error::{Error, Result};
use crate::factored::{FactoredSpace, Variable};
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord, IDENTITY};
use crate::scm::{function_key, Combos, EndoSpec, Scm};
use crate::set::FiniteSet;

/// Value of the `word_order` field in mechanism files.
pub const WORD_ORDER: &str = "rightmost-first";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableFile {
    pub id: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub variables: Vec<VariableFile>,
    /// State label to outcome tuple.
    pub process: IndexMap<String, Vec<String>>,
    /// Generator label to state map. `id` may be left out.
    pub generators: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    /// An inline model object, or a path relative to the morphism file.
    pub source_model: Value,
    pub target_model: Value,
    pub state_map: IndexMap<String, String>,
    /// Source outcome label to target outcome tuple.
    pub outcome_map: IndexMap<String, Vec<String>>,
    /// Source generator to target generator; unlisted labels map to the
    /// target generator of the same name.
    #[serde(default)]
    pub alphabet_map: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExoFile {
    pub id: String,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndoFile {
    pub id: String,
    pub values: Vec<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exogenous: Option<String>,
    /// Keys are parent values then the exogenous value, joined by `|`; a
    /// unit exogenous value is left out and the empty key is `()`.
    pub function_table: IndexMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScmFile {
    #[serde(default)]
    pub exogenous: Vec<ExoFile>,
    pub endogenous: Vec<EndoFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismEntry {
    pub target: String,
    /// In model variable order.
    pub parents: Vec<String>,
    /// Parent tuple label to target value.
    pub map: IndexMap<String, String>,
    pub context: ActionWord,
    #[serde(default)]
    pub unique: bool,
    #[serde(default)]
    pub invariant_under: Vec<ActionWord>,
    #[serde(default)]
    pub violated_by: Vec<MechanismViolation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanismsFile {
    pub word_order: String,
    pub mechanisms: Vec<MechanismEntry>,
}

fn schema(file: &str, path: impl Into<String>, reason: impl Display) -> Error {
    Error::Schema {
        file: file.to_string(),
        path: path.into(),
        reason: reason.to_string(),
    }
}

/// Guardrail errors pass through unchanged; anything else becomes a schema
/// error at `path`.
fn located(file: &str, path: impl Into<String>) -> impl FnOnce(Error) -> Error + '_ {
    let path = path.into();
    move |e| match e {
        Error::TooLarge { .. } => e,
        e => schema(file, path, e),
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Parse `text`, reporting the JSON path of the first problem.
pub fn parse_json<T: DeserializeOwned>(file: &str, text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema(file, if path == "." { String::new() } else { path }, e.into_inner())
    })
}

fn from_value<T: DeserializeOwned>(file: &str, prefix: &str, value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let full = if path == "." {
            prefix.to_string()
        } else {
            format!("{prefix}.{path}")
        };
        schema(file, full, e.into_inner())
    })
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_pretty_json(value))
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub fn model_from_file(file: &str, m: &ModelFile, limits: &Limits) -> Result<ActionModel> {
    let states = FiniteSet::new("X", m.states.iter().cloned())
        .map_err(located(file, "states"))?
        .shared();
    limits.check("state set", states.len() as u128)?;
    let mut vars = Vec::with_capacity(m.variables.len());
    for (k, v) in m.variables.iter().enumerate() {
        vars.push(Variable {
            id: v.id.clone(),
            values: FiniteSet::new(v.id.clone(), v.values.iter().cloned())
                .map_err(located(file, format!("variables[{k}].values")))?
                .shared(),
        });
    }
    let outcomes = FactoredSpace::with_limits(vars, limits).map_err(located(file, "variables"))?;

    for key in m.process.keys() {
        if !states.contains(key) {
            return Err(schema(file, format!("process.{key}"), "not a declared state"));
        }
    }
    let mut table = Vec::with_capacity(states.len());
    for s in states.elements() {
        let tuple = m
            .process
            .get(s)
            .ok_or_else(|| schema(file, "process", format!("no entry for state '{s}'")))?;
        table.push(
            outcomes
                .tuple_index(tuple)
                .map_err(located(file, format!("process.{s}")))?,
        );
    }
    let process = TotalMap::from_table(states.clone(), outcomes.total().clone(), table);

    let mut generators = Vec::with_capacity(m.generators.len());
    for (label, entries) in &m.generators {
        let map = TotalMap::from_labels(
            label,
            states.clone(),
            states.clone(),
            entries.iter().map(|(k, v)| (k.as_str(), v.as_str())),
        )
        .map_err(located(file, format!("generators.{label}")))?;
        generators.push((label.clone(), map));
    }
    ActionModel::with_limits(states, outcomes, generators, process, limits)
        .map_err(located(file, "generators"))
}

/// The file form of `model`; the identity generator is left out.
pub fn model_to_file(model: &ActionModel) -> ModelFile {
    let space = model.outcomes();
    ModelFile {
        states: model.states().elements().to_vec(),
        variables: space
            .variables()
            .iter()
            .map(|v| VariableFile {
                id: v.id.clone(),
                values: v.values.elements().to_vec(),
            })
            .collect(),
        process: (0..model.states().len())
            .map(|x| {
                (
                    model.states().label(x).to_string(),
                    space.tuple_values(model.process().apply(x)),
                )
            })
            .collect(),
        generators: model
            .generators()
            .iter()
            .filter(|(l, _)| l != IDENTITY)
            .map(|(l, g)| {
                (
                    l.clone(),
                    g.entries().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                )
            })
            .collect(),
    }
}

pub fn load_model(path: &Path, limits: &Limits) -> Result<ActionModel> {
    let file = display(path);
    let m: ModelFile = parse_json(&file, &read_text(path)?)?;
    model_from_file(&file, &m, limits)
}

fn resolve_model(
    file: &str,
    base: &Path,
    field: &str,
    value: &Value,
    limits: &Limits,
) -> Result<Arc<ActionModel>> {
    match value {
        Value::String(rel) => Ok(Arc::new(load_model(&base.join(rel), limits)?)),
        Value::Object(_) => {
            let m: ModelFile = from_value(file, field, value.clone())?;
            Ok(Arc::new(model_from_file(file, &m, limits)?))
        }
        _ => Err(schema(file, field, "expected a model object or a path")),
    }
}

/// Build a morphism; relative model paths resolve against `base`.
pub fn morphism_from_file(
    file: &str,
    base: &Path,
    m: &MorphismFile,
    limits: &Limits,
) -> Result<ModelMorphism> {
    let source = resolve_model(file, base, "source_model", &m.source_model, limits)?;
    let target = resolve_model(file, base, "target_model", &m.target_model, limits)?;
    let state_map = TotalMap::from_labels(
        "state_map",
        source.states().clone(),
        target.states().clone(),
        m.state_map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )
    .map_err(located(file, "state_map"))?;
    let src_out = source.outcomes().total();
    for key in m.outcome_map.keys() {
        if !src_out.contains(key) {
            return Err(schema(file, format!("outcome_map.{key}"), "not a source outcome"));
        }
    }
    let mut table = Vec::with_capacity(src_out.len());
    for y in src_out.elements() {
        let tuple = m
            .outcome_map
            .get(y)
            .ok_or_else(|| schema(file, "outcome_map", format!("no entry for outcome '{y}'")))?;
        table.push(
            target
                .outcomes()
                .tuple_index(tuple)
                .map_err(located(file, format!("outcome_map.{y}")))?,
        );
    }
    let outcome_map = TotalMap::from_table(src_out.clone(), target.outcomes().total().clone(), table);
    let alphabet: Vec<(String, String)> = m
        .alphabet_map
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    ModelMorphism::new(source, target, state_map, outcome_map, &alphabet)
        .map_err(located(file, "alphabet_map"))
}

pub fn load_morphism(path: &Path, limits: &Limits) -> Result<ModelMorphism> {
    let file = display(path);
    let m: MorphismFile = parse_json(&file, &read_text(path)?)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    morphism_from_file(&file, &base, &m, limits)
}

/// The file form of `m`, with the given model references (paths or inline
/// objects). Only non-identical alphabet entries are written.
pub fn morphism_to_file(m: &ModelMorphism, source_model: Value, target_model: Value) -> MorphismFile {
    let target_space = m.target().outcomes();
    MorphismFile {
        source_model,
        target_model,
        state_map: m
            .state_map()
            .entries()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        outcome_map: (0..m.outcome_map().domain().len())
            .map(|y| {
                (
                    m.outcome_map().domain().label(y).to_string(),
                    target_space.tuple_values(m.outcome_map().apply(y)),
                )
            })
            .collect(),
        alphabet_map: m
            .alphabet()
            .iter()
            .filter(|(from, to)| from != to)
            .cloned()
            .collect(),
    }
}

pub fn scm_from_file(file: &str, s: &ScmFile) -> Result<Scm> {
    let exo = s
        .exogenous
        .iter()
        .map(|u| (u.id.clone(), u.values.clone()))
        .collect();
    let endo = s
        .endogenous
        .iter()
        .map(|v| EndoSpec {
            id: v.id.clone(),
            values: v.values.clone(),
            parents: v.parents.clone(),
            exogenous: v.exogenous.clone(),
            function_table: v
                .function_table
                .iter()
                .map(|(k, val)| (k.clone(), val.clone()))
                .collect(),
        })
        .collect();
    Scm::new(exo, endo).map_err(located(file, "endogenous"))
}

pub fn scm_to_file(scm: &Scm) -> ScmFile {
    let exo = scm.exogenous();
    let endo = scm.endogenous();
    ScmFile {
        exogenous: exo
            .iter()
            .map(|u| ExoFile {
                id: u.id.clone(),
                values: u.values.elements().to_vec(),
            })
            .collect(),
        endogenous: endo
            .iter()
            .map(|v| {
                let u = &exo[v.exogenous];
                let mut sizes: Vec<usize> = v.parents.iter().map(|&p| endo[p].values.len()).collect();
                sizes.push(u.values.len());
                let function_table = Combos::new(&sizes)
                    .zip(&v.table)
                    .map(|(row, &out)| {
                        let (u_idx, parents) = row.split_last().expect("row holds u");
                        let labels: Vec<&str> = parents
                            .iter()
                            .zip(&v.parents)
                            .map(|(&c, &p)| endo[p].values.label(c))
                            .collect();
                        let key = function_key(&labels, u.values.label(*u_idx), u.values.is_unit());
                        (key, v.values.label(out).to_string())
                    })
                    .collect();
                EndoFile {
                    id: v.id.clone(),
                    values: v.values.elements().to_vec(),
                    parents: v.parents.iter().map(|&p| endo[p].id.clone()).collect(),
                    exogenous: Some(u.id.clone()),
                    function_table,
                }
            })
            .collect(),
    }
}

pub fn load_scm(path: &Path) -> Result<Scm> {
    let file = display(path);
    let s: ScmFile = parse_json(&file, &read_text(path)?)?;
    scm_from_file(&file, &s)
}

pub fn mechanisms_to_file(records: &[MechanismRecord]) -> MechanismsFile {
    MechanismsFile {
        word_order: WORD_ORDER.to_string(),
        mechanisms: records
            .iter()
            .map(|r| MechanismEntry {
                target: r.target.clone(),
                parents: r.parents.clone(),
                map: r.map.entries().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                context: r.context.clone(),
                unique: r.unique,
                invariant_under: r.invariant_under.clone(),
                violated_by: r.violated_by.clone(),
            })
            .collect(),
    }
}

/// Resolve mechanism entries against `model`'s outcome variables.
pub fn mechanisms_from_file(
    file: &str,
    model: &ActionModel,
    f: &MechanismsFile,
) -> Result<Vec<MechanismRecord>> {
    if f.word_order != WORD_ORDER {
        return Err(schema(
            file,
            "word_order",
            format!("expected '{WORD_ORDER}', found '{}'", f.word_order),
        ));
    }
    let space = model.outcomes();
    f.mechanisms
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let at = |field: &str| format!("mechanisms[{k}].{field}");
            let i = model.var_set(&e.parents).map_err(located(file, at("parents")))?;
            let j = model
                .var_set(&[e.target.as_str()])
                .map_err(located(file, at("target")))?;
            let map = TotalMap::from_labels(
                &format!("{} mechanism", e.target),
                space.subspace(&i),
                space.subspace(&j),
                e.map.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            )
            .map_err(located(file, at("map")))?;
            Ok(MechanismRecord {
                target: e.target.clone(),
                parents: space.var_ids(&i),
                map,
                context: e.context.clone(),
                unique: e.unique,
                invariant_under: e.invariant_under.clone(),
                violated_by: e.violated_by.clone(),
            })
        })
        .collect()
}

pub fn load_mechanisms(path: &Path, model: &ActionModel) -> Result<Vec<MechanismRecord>> {
    let file = display(path);
    let f: MechanismsFile = parse_json(&file, &read_text(path)?)?;
    mechanisms_from_file(&file, model, &f)
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    parse_json(&display(path), &read_text(path)?)
}
