use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default number of branch nodes any single exhaustive query may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Shared node counter for exhaustive searches.
///
/// Workers tick the same counter; once the limit is crossed every further
/// tick fails, so a search can only ever answer "found", "exhaustively not
/// found", or [`Error::BudgetExceeded`].
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    #[inline]
    pub fn tick(&self) -> Result<()> {
        self.charge(1)
    }

    #[inline]
    pub fn charge(&self, nodes: u64) -> Result<()> {
        let before = self.used.fetch_add(nodes, Ordering::Relaxed);
        if before.saturating_add(nodes) > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}
