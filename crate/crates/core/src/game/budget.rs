use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Node-count and wall-clock limits for one computation.
///
/// The clock starts when the budget is created. Exceeding either limit is an
/// error, never a truncated answer.
#[derive(Clone, Debug)]
pub struct Budget {
    max_nodes: usize,
    max_time: Option<Duration>,
    started: Instant,
}

impl Budget {
    pub const DEFAULT_NODES: usize = 250_000;

    pub fn nodes(max_nodes: usize) -> Self {
        Budget {
            max_nodes,
            max_time: None,
            started: Instant::now(),
        }
    }

    pub fn unlimited() -> Self {
        Budget::nodes(usize::MAX)
    }

    pub fn with_seconds(mut self, seconds: f64) -> Self {
        self.max_time = Some(Duration::from_secs_f64(seconds.max(0.0)));
        self
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    /// Fails once `count` exceeds the node limit; polls the clock every 1024 units.
    pub fn check(&self, count: usize, what: &str) -> Result<()> {
        if count > self.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "more than {} {what}",
                self.max_nodes
            )));
        }
        if count.is_multiple_of(1024) {
            self.check_time(what)?;
        }
        Ok(())
    }

    pub fn check_time(&self, what: &str) -> Result<()> {
        match self.max_time {
            Some(limit) if self.started.elapsed() > limit => Err(Error::BudgetExceeded(format!(
                "time limit of {:.3}s reached while counting {what}",
                limit.as_secs_f64()
            ))),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::nodes(Budget::DEFAULT_NODES)
    }
}
