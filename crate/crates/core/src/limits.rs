use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::max_table`].
pub const MAX_TABLE_ENV: &str = "CAUSAL_GROUND_MAX_TABLE";

/// Enumeration guardrail. Every algorithm here is exhaustive, so sets and
/// tables above `max_table` entries are refused up front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_table: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_table: 1_000_000,
        }
    }
}

impl Limits {
    pub fn new(max_table: usize) -> Self {
        Self { max_table }
    }

    /// Defaults, overridden by `CAUSAL_GROUND_MAX_TABLE` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_TABLE_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub fn check(&self, what: impl Into<String>, size: u128) -> Result<()> {
        if size > self.max_table as u128 {
            return Err(Error::TooLarge {
                what: what.into(),
                size,
                limit: self.max_table,
            });
        }
        Ok(())
    }
}
