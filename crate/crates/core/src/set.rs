use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Label of the single element of the unit set `1`.
pub const UNIT_ELEMENT: &str = "()";

/// An explicit finite carrier: an ordered list of distinct string labels.
///
/// Element order is significant. It fixes the index of every element, and
/// every table, image and report is produced in that order.
#[derive(Clone)]
pub struct FiniteSet {
    id: String,
    elements: Vec<String>,
    index: HashMap<String, usize>,
}

impl FiniteSet {
    pub fn new<I, S>(id: impl Into<String>, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let id = id.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::EmptySet { set: id });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement {
                    set: id,
                    element: e.clone(),
                });
            }
        }
        Ok(Self {
            id,
            elements,
            index,
        })
    }

    /// The one-element set `1`.
    pub fn unit() -> Self {
        Self::new("1", [UNIT_ELEMENT]).expect("unit set is well formed")
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn label(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, element: &str) -> Option<usize> {
        self.index.get(element).copied()
    }

    pub fn contains(&self, element: &str) -> bool {
        self.index.contains_key(element)
    }

    /// Same elements in the same order; the id is ignored.
    pub fn same_elements(&self, other: &FiniteSet) -> bool {
        std::ptr::eq(self, other) || self.elements == other.elements
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_elements(other)
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.id, self.elements.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(matches!(
            FiniteSet::new("X", ["a", "b", "a"]),
            Err(Error::DuplicateElement { .. })
        ));
        assert!(matches!(
            FiniteSet::new("X", Vec::<String>::new()),
            Err(Error::EmptySet { .. })
        ));
    }

    #[test]
    fn unit_has_one_element() {
        let one = FiniteSet::unit();
        assert_eq!(one.len(), 1);
        assert!(one.is_unit());
        assert_eq!(one.index_of(UNIT_ELEMENT), Some(0));
    }

    #[test]
    fn equality_ignores_id() {
        let a = FiniteSet::new("A", ["x", "y"]).unwrap();
        let b = FiniteSet::new("B", ["x", "y"]).unwrap();
        let c = FiniteSet::new("A", ["y", "x"]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
