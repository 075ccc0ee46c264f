//! Product outcome spaces `Y = ∏ Y_i` and their projections.
//!
//! Tuples are indexed in mixed radix with the first variable most
//! significant, so the total set lists tuples lexicographically by variable
//! order. Tuple labels are the component labels joined by [`TUPLE_SEP`]; a
//! single-variable tuple is just the value label, and the empty tuple is the
//! element of the unit set.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::set::FiniteSet;

/// Reserved separator inside tuple labels; variable values may not contain it.
pub const TUPLE_SEP: &str = "|";

#[derive(Debug, Clone)]
pub struct Variable {
    pub id: String,
    pub values: Arc<FiniteSet>,
}

/// A set of variables, held as sorted, deduplicated variable indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarSet(Vec<usize>);

impl VarSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }
}

pub fn join_tuple<S: AsRef<str>>(parts: &[S]) -> String {
    match parts.len() {
        0 => crate::set::UNIT_ELEMENT.to_string(),
        _ => parts
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(TUPLE_SEP),
    }
}

#[derive(Debug, Clone)]
pub struct FactoredSpace {
    variables: Vec<Variable>,
    strides: Vec<usize>,
    total: Arc<FiniteSet>,
}

impl FactoredSpace {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        Self::with_limits(variables, &Limits::default())
    }

    pub fn with_limits(variables: Vec<Variable>, limits: &Limits) -> Result<Self> {
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].iter().any(|w| w.id == v.id) {
                return Err(Error::DuplicateElement {
                    set: "variables".into(),
                    element: v.id.clone(),
                });
            }
            if variables.len() > 1 {
                if let Some(bad) = v.values.elements().iter().find(|e| e.contains(TUPLE_SEP)) {
                    return Err(Error::ReservedSeparator {
                        set: v.id.clone(),
                        element: bad.clone(),
                        separator: TUPLE_SEP,
                    });
                }
            }
        }
        let size: u128 = variables.iter().map(|v| v.values.len() as u128).product();
        limits.check("outcome space", size)?;

        let mut strides = vec![1; variables.len()];
        for i in (0..variables.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * variables[i + 1].values.len();
        }
        let total = match variables.len() {
            0 => Arc::new(FiniteSet::unit()),
            1 => variables[0].values.clone(),
            _ => {
                let id = format!(
                    "Y_{{{}}}",
                    variables
                        .iter()
                        .map(|v| v.id.as_str())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                let all = VarSet::from_indices((0..variables.len()).collect());
                let labels = (0..size as usize).map(|t| tuple_label(&variables, &strides, &all, t));
                Arc::new(FiniteSet::new(id, labels)?)
            }
        };
        Ok(Self {
            variables,
            strides,
            total,
        })
    }

    /// A space with one variable whose values are `set`.
    pub fn single(id: impl Into<String>, set: Arc<FiniteSet>) -> Self {
        Self::new(vec![Variable {
            id: id.into(),
            values: set,
        }])
        .expect("single-variable space is well formed")
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn total(&self) -> &Arc<FiniteSet> {
        &self.total
    }

    pub fn all(&self) -> VarSet {
        VarSet::from_indices((0..self.variables.len()).collect())
    }

    pub fn var_index(&self, id: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVariable(id.to_string()))
    }

    pub fn var_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<VarSet> {
        ids.iter()
            .map(|s| self.var_index(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(VarSet::from_indices)
    }

    pub fn var_ids(&self, vars: &VarSet) -> Vec<String> {
        vars.indices()
            .iter()
            .map(|&i| self.variables[i].id.clone())
            .collect()
    }

    pub fn coordinate(&self, tuple: usize, var: usize) -> usize {
        (tuple / self.strides[var]) % self.variables[var].values.len()
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| c * s)
            .sum()
    }

    /// Index in `Y_I` of the projection of `tuple`.
    pub fn project_index(&self, tuple: usize, vars: &VarSet) -> usize {
        vars.indices().iter().fold(0, |acc, &v| {
            acc * self.variables[v].values.len() + self.coordinate(tuple, v)
        })
    }

    /// The carrier `Y_I`. The empty subset gives the unit set `1`; a single
    /// variable gives that variable's value set.
    pub fn subspace(&self, vars: &VarSet) -> Arc<FiniteSet> {
        match vars.len() {
            0 => Arc::new(FiniteSet::unit()),
            1 => self.variables[vars.indices()[0]].values.clone(),
            _ if vars.len() == self.variables.len() => self.total.clone(),
            _ => {
                let sub: Vec<Variable> = vars
                    .indices()
                    .iter()
                    .map(|&i| self.variables[i].clone())
                    .collect();
                FactoredSpace::with_limits(sub, &Limits::new(usize::MAX))
                    .expect("subspace of a valid space is valid")
                    .total
                    .clone()
            }
        }
    }

    /// `π_I : Y → Y_I`.
    pub fn projection(&self, vars: &VarSet) -> TotalMap {
        TotalMap::from_fn(self.total.clone(), self.subspace(vars), |t| {
            self.project_index(t, vars)
        })
    }

    /// `π^J_I : Y_J → Y_I` for `I ⊆ J`.
    pub fn projection_between(&self, from: &VarSet, to: &VarSet) -> Result<TotalMap> {
        if !to.is_subset(from) {
            return Err(Error::SetMismatch {
                context: "projection between variable sets".into(),
                expected: "a subset".into(),
                found: format!("{:?} ⊄ {:?}", to.indices(), from.indices()),
            });
        }
        let sub: Vec<Variable> = from
            .indices()
            .iter()
            .map(|&i| self.variables[i].clone())
            .collect();
        let inner = FactoredSpace::with_limits(sub, &Limits::new(usize::MAX))?;
        let positions: Vec<usize> = to
            .indices()
            .iter()
            .map(|v| from.indices().iter().position(|w| w == v).unwrap())
            .collect();
        let inner_to = VarSet::from_indices(positions);
        Ok(TotalMap::from_fn(
            self.subspace(from),
            self.subspace(to),
            |t| inner.project_index(t, &inner_to),
        ))
    }

    /// Index of the tuple whose component labels are `values`, in variable order.
    pub fn tuple_index<S: AsRef<str>>(&self, values: &[S]) -> Result<usize> {
        if values.len() != self.variables.len() {
            return Err(Error::SetMismatch {
                context: "outcome tuple".into(),
                expected: format!("{} components", self.variables.len()),
                found: format!("{} components", values.len()),
            });
        }
        let coords = values
            .iter()
            .zip(&self.variables)
            .map(|(val, var)| {
                var.values
                    .index_of(val.as_ref())
                    .ok_or_else(|| Error::NotInCodomain {
                        map: "outcome tuple".into(),
                        key: var.id.clone(),
                        value: val.as_ref().to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&coords))
    }

    /// Component labels of a tuple, in variable order.
    pub fn tuple_values(&self, tuple: usize) -> Vec<String> {
        (0..self.variables.len())
            .map(|v| {
                self.variables[v]
                    .values
                    .label(self.coordinate(tuple, v))
                    .to_string()
            })
            .collect()
    }
}

fn tuple_label(variables: &[Variable], strides: &[usize], vars: &VarSet, tuple: usize) -> String {
    let parts: Vec<&str> = vars
        .indices()
        .iter()
        .map(|&v| {
            let n = variables[v].values.len();
            variables[v].values.label((tuple / strides[v]) % n)
        })
        .collect();
    join_tuple(&parts)
}
