use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// A total function between finite sets, stored as an explicit table of
/// codomain indices. Two maps are equal exactly when their tables are.
#[derive(Clone)]
pub struct TotalMap {
    domain: Arc<FiniteSet>,
    codomain: Arc<FiniteSet>,
    table: Vec<usize>,
}

impl TotalMap {
    /// Build from a raw index table. Panics if the table is malformed; use
    /// [`TotalMap::from_labels`] for untrusted input.
    pub fn from_table(domain: Arc<FiniteSet>, codomain: Arc<FiniteSet>, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), domain.len(), "table must cover the domain");
        assert!(
            table.iter().all(|&v| v < codomain.len()),
            "table value out of codomain range"
        );
        Self {
            domain,
            codomain,
            table,
        }
    }

    pub fn from_fn(
        domain: Arc<FiniteSet>,
        codomain: Arc<FiniteSet>,
        f: impl FnMut(usize) -> usize,
    ) -> Self {
        let table = (0..domain.len()).map(f).collect();
        Self::from_table(domain, codomain, table)
    }

    pub fn identity(set: Arc<FiniteSet>) -> Self {
        let table = (0..set.len()).collect();
        Self {
            domain: set.clone(),
            codomain: set,
            table,
        }
    }

    pub fn constant(domain: Arc<FiniteSet>, codomain: Arc<FiniteSet>, value: usize) -> Self {
        assert!(value < codomain.len());
        let table = vec![value; domain.len()];
        Self {
            domain,
            codomain,
            table,
        }
    }

    /// Build from `(key, value)` label pairs, rejecting unknown keys, values
    /// outside the codomain, and missing keys.
    pub fn from_labels<'a, I>(
        name: &str,
        domain: Arc<FiniteSet>,
        codomain: Arc<FiniteSet>,
        entries: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = vec![usize::MAX; domain.len()];
        for (key, value) in entries {
            let k = domain.index_of(key).ok_or_else(|| Error::NotInDomain {
                map: name.to_string(),
                key: key.to_string(),
            })?;
            let v = codomain.index_of(value).ok_or_else(|| Error::NotInCodomain {
                map: name.to_string(),
                key: key.to_string(),
                value: value.to_string(),
            })?;
            table[k] = v;
        }
        if let Some(missing) = table.iter().position(|&v| v == usize::MAX) {
            return Err(Error::NonTotal {
                map: name.to_string(),
                missing: domain.label(missing).to_string(),
            });
        }
        Ok(Self {
            domain,
            codomain,
            table,
        })
    }

    pub fn domain(&self) -> &Arc<FiniteSet> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteSet> {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply_label(&self, x: &str) -> Option<&str> {
        self.domain
            .index_of(x)
            .map(|i| self.codomain.label(self.table[i]))
    }

    /// `self ∘ inner`: apply `inner` first, then `self`.
    pub fn after(&self, inner: &TotalMap) -> Result<TotalMap> {
        if !inner.codomain.same_elements(&self.domain) {
            return Err(Error::SetMismatch {
                context: "composition".into(),
                expected: self.domain.id().into(),
                found: inner.codomain.id().into(),
            });
        }
        Ok(TotalMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            table: inner.table.iter().map(|&i| self.table[i]).collect(),
        })
    }

    /// Indices of the image, in codomain order.
    pub fn image_indices(&self) -> Vec<usize> {
        let mut hit = vec![false; self.codomain.len()];
        for &v in &self.table {
            hit[v] = true;
        }
        hit.iter()
            .enumerate()
            .filter_map(|(i, &h)| h.then_some(i))
            .collect()
    }

    /// The exact image `{f(x)}`, deduplicated and listed in codomain order.
    pub fn image(&self) -> Vec<String> {
        self.image_indices()
            .into_iter()
            .map(|i| self.codomain.label(i).to_string())
            .collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_indices().len() == self.codomain.len()
    }

    /// The constant value, if the map is constant.
    pub fn constant_value(&self) -> Option<usize> {
        let first = *self.table.first()?;
        self.table.iter().all(|&v| v == first).then_some(first)
    }

    /// First domain index where the two tables disagree.
    pub fn first_difference(&self, other: &TotalMap) -> Option<usize> {
        self.table
            .iter()
            .zip(&other.table)
            .position(|(a, b)| a != b)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.domain.label(i), self.codomain.label(v)))
    }
}

impl PartialEq for TotalMap {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.codomain == other.codomain && self.table == other.table
    }
}

impl Eq for TotalMap {}

impl fmt::Debug for TotalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.domain.id(), self.codomain.id())?;
        for (i, (k, v)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}
