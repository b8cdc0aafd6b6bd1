use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wall-time and memory allowance for one measure on one graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Seconds.
    pub wall_time: f64,
    /// Bytes.
    pub memory: u64,
}

impl Budget {
    pub fn new(wall_time: f64, memory: u64) -> Result<Self> {
        let b = Budget { wall_time, memory };
        b.validate()?;
        Ok(b)
    }

    /// Budgets loaded from configuration must be strictly positive. A zero
    /// budget can still be handed to the engine directly; it yields missing
    /// values.
    pub fn validate(&self) -> Result<()> {
        if !(self.wall_time.is_finite() && self.wall_time > 0.0) || self.memory == 0 {
            return Err(Error::InvalidArgument(format!(
                "budget must be strictly positive, got {}s / {} bytes",
                self.wall_time, self.memory
            )));
        }
        Ok(())
    }

    pub fn generous() -> Self {
        Budget {
            wall_time: 3600.0,
            memory: 8 << 30,
        }
    }
}

/// Per cost-class budgets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetPlan {
    pub cheap: Budget,
    pub polynomial: Budget,
    pub expensive: Budget,
}

impl BudgetPlan {
    pub fn uniform(budget: Budget) -> Self {
        BudgetPlan {
            cheap: budget,
            polynomial: budget,
            expensive: budget,
        }
    }

    pub fn for_class(&self, class: super::CostClass) -> Budget {
        match class {
            super::CostClass::Cheap => self.cheap,
            super::CostClass::Polynomial => self.polynomial,
            super::CostClass::Expensive => self.expensive,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.cheap.validate()?;
        self.polynomial.validate()?;
        self.expensive.validate()
    }
}

impl Default for BudgetPlan {
    fn default() -> Self {
        BudgetPlan::uniform(Budget {
            wall_time: 60.0,
            memory: 2 << 30,
        })
    }
}

/// Why a measure stopped without a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Halt {
    Timeout,
    Memory,
    UndefinedOnGraph,
}

impl std::fmt::Display for Halt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Halt::Timeout => "timeout",
            Halt::Memory => "memory",
            Halt::UndefinedOnGraph => "undefined-on-graph",
        })
    }
}

/// Cooperative wall-clock limit, polled by the algorithms at loop granularity.
#[derive(Clone, Copy, Debug)]
pub struct Deadline {
    start: Instant,
    limit: Duration,
}

impl Deadline {
    pub fn new(wall_time: f64) -> Self {
        let limit = if wall_time.is_finite() && wall_time > 0.0 {
            Duration::from_secs_f64(wall_time)
        } else {
            Duration::ZERO
        };
        Deadline {
            start: Instant::now(),
            limit,
        }
    }

    pub fn unlimited() -> Self {
        Deadline {
            start: Instant::now(),
            limit: Duration::MAX,
        }
    }

    #[inline]
    pub fn check(&self) -> std::result::Result<(), Halt> {
        if self.start.elapsed() >= self.limit {
            Err(Halt::Timeout)
        } else {
            Ok(())
        }
    }
}
