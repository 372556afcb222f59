//! Resource guards for the operations whose cost grows factorially.

use crate::error::{Error, Result};

/// Environment variable prefix for budget overrides.
pub const ENV_PREFIX: &str = "TANGENOCCHI_BUDGET_";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of shapes `enumerate_shapes` may materialise.
    pub max_shapes: u64,
    /// Largest `m` for which `m!` may be formed directly.
    pub max_factorial: u64,
    /// Largest number of compositions the `L` recurrence may visit for a
    /// single entry.
    pub max_compositions: u64,
    /// Brute-force labelling oracle vertex caps.
    pub oracle_vertices_binary: u64,
    pub oracle_vertices_ternary: u64,
    pub oracle_vertices_wide: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_shapes: 2_000_000,
            max_factorial: 5_000_000,
            max_compositions: 250_000,
            oracle_vertices_binary: 13,
            oracle_vertices_ternary: 10,
            oracle_vertices_wide: 9,
        }
    }
}

impl Budget {
    /// Default budget with any `TANGENOCCHI_BUDGET_*` overrides applied.
    pub fn from_env() -> Result<Self> {
        let mut budget = Budget::default();
        for (suffix, slot) in budget.slots_mut() {
            let var = format!("{ENV_PREFIX}{suffix}");
            if let Ok(raw) = std::env::var(&var) {
                *slot = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("{var}={raw:?} is not a non-negative integer")))?;
            }
        }
        Ok(budget)
    }

    fn slots_mut(&mut self) -> [(&'static str, &mut u64); 6] {
        [
            ("SHAPES", &mut self.max_shapes),
            ("FACTORIAL", &mut self.max_factorial),
            ("COMPOSITIONS", &mut self.max_compositions),
            ("ORACLE_BINARY", &mut self.oracle_vertices_binary),
            ("ORACLE_TERNARY", &mut self.oracle_vertices_ternary),
            ("ORACLE_WIDE", &mut self.oracle_vertices_wide),
        ]
    }

    /// Vertex cap of the brute-force labelling oracle for arity `k`.
    pub fn oracle_vertices(&self, k: usize) -> u64 {
        match k {
            0..=2 => self.oracle_vertices_binary,
            3 => self.oracle_vertices_ternary,
            _ => self.oracle_vertices_wide,
        }
    }

    pub fn check_shapes(&self, what: impl FnOnce() -> String, requested: u128) -> Result<()> {
        check(what, requested, self.max_shapes, "--budget-shapes")
    }

    pub fn check_factorial(&self, what: impl FnOnce() -> String, requested: u128) -> Result<()> {
        check(what, requested, self.max_factorial, "--budget-factorial")
    }

    pub fn check_compositions(&self, what: impl FnOnce() -> String, requested: u128) -> Result<()> {
        check(what, requested, self.max_compositions, "--budget-compositions")
    }

    pub fn check_oracle(&self, k: usize, vertices: u128) -> Result<()> {
        let knob = match k {
            0..=2 => "--budget-oracle-binary",
            3 => "--budget-oracle-ternary",
            _ => "--budget-oracle-wide",
        };
        check(
            || format!("brute-force labelling of a {k}-ary shape"),
            vertices,
            self.oracle_vertices(k),
            knob,
        )
    }
}

fn check(what: impl FnOnce() -> String, requested: u128, limit: u64, knob: &'static str) -> Result<()> {
    if requested > u128::from(limit) {
        Err(Error::Budget {
            what: what(),
            requested,
            limit: u128::from(limit),
            knob,
        })
    } else {
        Ok(())
    }
}
