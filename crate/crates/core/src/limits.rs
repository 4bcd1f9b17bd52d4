//! Work limits shared by the enumerating algorithms.

use crate::error::{Error, Result};

/// Default cap on enumeration states for a single operation.
pub const DEFAULT_MAX_STATES: u64 = 10_000_000;

/// Largest prime accepted by default.
pub const DEFAULT_MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on branch/candidate states visited by one operation.
    pub max_states: u64,
    pub max_prime: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_MAX_STATES,
            max_prime: DEFAULT_MAX_PRIME,
        }
    }
}

impl Limits {
    pub fn with_max_states(mut self, max_states: u64) -> Self {
        self.max_states = max_states;
        self
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            used: 0,
            limit: self.max_states,
        }
    }
}

/// Counts states visited by one operation and fails once the limit is hit.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    #[inline]
    pub(crate) fn tick(&mut self, n: u64) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}
