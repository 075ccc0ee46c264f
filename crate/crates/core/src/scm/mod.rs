//! Acyclic structural causal models over finite domains.
//!
//! Every endogenous variable `V_i` has its own exogenous input `U_i`
//! (a unit set when the model gives it none) and a structural function
//! `f_i : Y_{Pa_i} × U_i → V_i` stored as a table.

mod encode;
mod laws;
mod random;

use std::collections::HashMap;
use std::sync::Arc;

pub use encode::{encode_scm, encode_scm_with, EncodedLayout, DEFAULT_MECHANISM, INIT};
pub use laws::{verify_scm_laws, LawKind, ScmLawReport, ScmLawViolation};
pub use random::random_scm;

use crate::error::{Error, Result};
use crate::factored::join_tuple;
use crate::set::FiniteSet;

#[derive(Debug, Clone)]
pub struct ExoVar {
    pub id: String,
    pub values: Arc<FiniteSet>,
}

#[derive(Debug, Clone)]
pub struct EndoVar {
    pub id: String,
    pub values: Arc<FiniteSet>,
    /// Indices of endogenous parents, in the order they key the table.
    pub parents: Vec<usize>,
    /// Index of the paired exogenous variable.
    pub exogenous: usize,
    /// Value indices, mixed radix over (parent values..., u), last fastest.
    pub table: Vec<usize>,
}

/// A mechanism slot `M_i = V_i ∪ {f_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// The structural function `f_i`.
    Default,
    /// Intervened to a fixed value index.
    Value(usize),
}

/// Declarative form of an endogenous variable, keyed by labels.
#[derive(Debug, Clone)]
pub struct EndoSpec {
    pub id: String,
    pub values: Vec<String>,
    pub parents: Vec<String>,
    /// `None` pads with a unit-set exogenous variable `U_<id>`.
    pub exogenous: Option<String>,
    /// Keys are [`function_key`] labels.
    pub function_table: HashMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct Scm {
    exogenous: Vec<ExoVar>,
    endogenous: Vec<EndoVar>,
    order: Vec<usize>,
}

/// Table key for parent values and an exogenous value: the labels joined by
/// `|`, parents first. A unit exogenous value is left out; an empty key is
/// `()`.
pub fn function_key<S: AsRef<str>>(parent_values: &[S], u: &str, u_is_unit: bool) -> String {
    let mut parts: Vec<&str> = parent_values.iter().map(AsRef::as_ref).collect();
    if !u_is_unit {
        parts.push(u);
    }
    join_tuple(&parts)
}

impl Scm {
    /// Assemble from index-level parts, checking pairing, table sizes and
    /// acyclicity.
    pub fn from_parts(exogenous: Vec<ExoVar>, endogenous: Vec<EndoVar>) -> Result<Self> {
        let bad = |m: String| Error::InvalidScm(m);
        let mut used = vec![false; exogenous.len()];
        for (i, v) in endogenous.iter().enumerate() {
            if endogenous[..i].iter().any(|w| w.id == v.id)
                || exogenous.iter().any(|u| u.id == v.id)
            {
                return Err(bad(format!("duplicate variable id '{}'", v.id)));
            }
            let u = exogenous
                .get(v.exogenous)
                .ok_or_else(|| bad(format!("'{}' names a missing exogenous variable", v.id)))?;
            if std::mem::replace(&mut used[v.exogenous], true) {
                return Err(bad(format!("exogenous '{}' feeds more than one variable", u.id)));
            }
            if let Some(&p) = v.parents.iter().find(|&&p| p >= endogenous.len()) {
                return Err(bad(format!("'{}' has out-of-range parent {p}", v.id)));
            }
            let expected: usize = v
                .parents
                .iter()
                .map(|&p| endogenous[p].values.len())
                .product::<usize>()
                * u.values.len();
            if v.table.len() != expected || v.table.iter().any(|&x| x >= v.values.len()) {
                return Err(bad(format!("function table of '{}' is not total", v.id)));
            }
        }
        if let Some(k) = used.iter().position(|u| !u) {
            return Err(bad(format!(
                "exogenous '{}' feeds no endogenous variable",
                exogenous[k].id
            )));
        }
        let order = topological_order(&endogenous)?;
        Ok(Self {
            exogenous,
            endogenous,
            order,
        })
    }

    /// Assemble from label-keyed declarations.
    pub fn new(exogenous: Vec<(String, Vec<String>)>, endogenous: Vec<EndoSpec>) -> Result<Self> {
        let mut exo: Vec<ExoVar> = exogenous
            .into_iter()
            .map(|(id, values)| {
                Ok(ExoVar {
                    values: FiniteSet::new(id.clone(), values)?.shared(),
                    id,
                })
            })
            .collect::<Result<_>>()?;
        let value_sets: Vec<Arc<FiniteSet>> = endogenous
            .iter()
            .map(|e| FiniteSet::new(e.id.clone(), e.values.clone()).map(FiniteSet::shared))
            .collect::<Result<_>>()?;
        let index_of = |id: &str| endogenous.iter().position(|e| e.id == id);

        let mut vars = Vec::with_capacity(endogenous.len());
        for (spec, values) in endogenous.iter().zip(&value_sets) {
            let parents = spec
                .parents
                .iter()
                .map(|p| {
                    index_of(p).ok_or_else(|| {
                        Error::InvalidScm(format!("'{}' has unknown parent '{p}'", spec.id))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let u = match &spec.exogenous {
                Some(name) => exo.iter().position(|u| &u.id == name).ok_or_else(|| {
                    Error::InvalidScm(format!("'{}' names unknown exogenous '{name}'", spec.id))
                })?,
                None => {
                    exo.push(ExoVar {
                        id: format!("U_{}", spec.id),
                        values: FiniteSet::unit().shared(),
                    });
                    exo.len() - 1
                }
            };
            let u_set = exo[u].values.clone();
            let parent_sets: Vec<&Arc<FiniteSet>> = parents.iter().map(|&p| &value_sets[p]).collect();
            let mut table = Vec::new();
            for combo in Combos::new(&parent_sets.iter().map(|s| s.len()).collect::<Vec<_>>()) {
                let labels: Vec<&str> = combo
                    .iter()
                    .zip(&parent_sets)
                    .map(|(&c, s)| s.label(c))
                    .collect();
                for k in 0..u_set.len() {
                    let key = function_key(&labels, u_set.label(k), u_set.is_unit());
                    let value = spec.function_table.get(&key).ok_or_else(|| Error::NonTotal {
                        map: format!("function_table of '{}'", spec.id),
                        missing: key.clone(),
                    })?;
                    table.push(values.index_of(value).ok_or_else(|| Error::NotInCodomain {
                        map: format!("function_table of '{}'", spec.id),
                        key: key.clone(),
                        value: value.clone(),
                    })?);
                }
            }
            if spec.function_table.len() != table.len() {
                return Err(Error::InvalidScm(format!(
                    "function_table of '{}' has keys outside Pa × U",
                    spec.id
                )));
            }
            vars.push(EndoVar {
                id: spec.id.clone(),
                values: values.clone(),
                parents,
                exogenous: u,
                table,
            });
        }
        Self::from_parts(exo, vars)
    }

    pub fn exogenous(&self) -> &[ExoVar] {
        &self.exogenous
    }

    pub fn endogenous(&self) -> &[EndoVar] {
        &self.endogenous
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.order
    }

    /// `f_i(parent values, u_i)`, with `values` indexed by endogenous variable.
    pub fn eval(&self, i: usize, values: &[usize], u: &[usize]) -> usize {
        let v = &self.endogenous[i];
        let mut idx = 0;
        for &p in &v.parents {
            idx = idx * self.endogenous[p].values.len() + values[p];
        }
        idx = idx * self.exogenous[v.exogenous].values.len() + u[v.exogenous];
        v.table[idx]
    }

    /// The potential response `V_m(u)`: evaluate in topological order,
    /// taking intervened slots verbatim.
    pub fn potential_response(&self, m: &[Slot], u: &[usize]) -> Vec<usize> {
        assert_eq!(m.len(), self.endogenous.len());
        assert_eq!(u.len(), self.exogenous.len());
        let mut values = vec![0; self.endogenous.len()];
        for &i in &self.order {
            values[i] = match m[i] {
                Slot::Value(v) => v,
                Slot::Default => self.eval(i, &values, u),
            };
        }
        values
    }

    /// Every endogenous assignment satisfying all equations indicated by `m`,
    /// found by exhaustive enumeration.
    pub fn brute_force_response(&self, m: &[Slot], u: &[usize]) -> Vec<Vec<usize>> {
        let sizes: Vec<usize> = self.endogenous.iter().map(|v| v.values.len()).collect();
        Combos::new(&sizes)
            .filter(|vals| {
                (0..self.endogenous.len()).all(|i| match m[i] {
                    Slot::Value(v) => vals[i] == v,
                    Slot::Default => vals[i] == self.eval(i, vals, u),
                })
            })
            .collect()
    }

    /// All exogenous assignments, first variable slowest.
    pub fn exogenous_assignments(&self) -> Combos {
        Combos::new(&self.exogenous.iter().map(|u| u.values.len()).collect::<Vec<_>>())
    }

    /// All slot assignments, first variable slowest, `Default` first.
    pub fn slot_assignments(&self) -> impl Iterator<Item = Vec<Slot>> + '_ {
        let sizes: Vec<usize> = self.endogenous.iter().map(|v| v.values.len() + 1).collect();
        Combos::new(&sizes).map(|c| {
            c.into_iter()
                .map(|k| if k == 0 { Slot::Default } else { Slot::Value(k - 1) })
                .collect()
        })
    }
}

fn topological_order(vars: &[EndoVar]) -> Result<Vec<usize>> {
    let n = vars.len();
    let mut indegree: Vec<usize> = vars.iter().map(|v| v.parents.len()).collect();
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    ready.reverse();
    while let Some(i) = ready.pop() {
        order.push(i);
        for (k, v) in vars.iter().enumerate() {
            for _ in v.parents.iter().filter(|&&p| p == i) {
                indegree[k] -= 1;
                if indegree[k] == 0 {
                    ready.insert(0, k);
                }
            }
        }
    }
    match (0..n).find(|&i| indegree[i] > 0) {
        Some(i) => Err(Error::Cyclic(vars[i].id.clone())),
        None => Ok(order),
    }
}

/// Mixed-radix counter over `sizes`, last position fastest.
#[derive(Debug, Clone)]
pub struct Combos {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Combos {
    pub fn new(sizes: &[usize]) -> Self {
        let next = if sizes.contains(&0) {
            None
        } else {
            Some(vec![0; sizes.len()])
        };
        Self {
            sizes: sizes.to_vec(),
            next,
        }
    }
}

impl Iterator for Combos {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        while k > 0 {
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.sizes[k] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[k] = 0;
        }
        Some(current)
    }
}
