//! Aggregated verdicts of one build: named identity residuals and signed
//! inequality margins.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ansatz::Model;
use crate::numerics::{RadialGrid, Tolerances};

/// One inequality `lhs ≤ rhs` (or `<` when `strict`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative means violated
    pub margin: f64,
    pub strict: bool,
    pub passed: bool,
    /// vacuously satisfied (vacuum state or inapplicable branch)
    pub trivial: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            strict: false,
            passed: margin >= 0.0,
            trivial: false,
        }
    }

    pub fn lt(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            margin,
            strict: true,
            passed: margin > 0.0,
            trivial: false,
        }
    }

    pub fn trivial(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            lhs: 0.0,
            rhs: 0.0,
            margin: 0.0,
            strict: false,
            passed: true,
            trivial: true,
        }
    }

    /// Margin relative to the size of the compared quantities.
    pub fn relative_margin(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.margin / scale
        }
    }
}

/// An identity that should vanish, with the acceptance limit on its relative size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    /// normalisation used for `relative`
    pub scale: f64,
    pub relative: f64,
    pub limit: f64,
    pub within_limit: bool,
}

impl Residual {
    pub fn new(name: impl Into<String>, value: f64, scale: f64, limit: f64) -> Self {
        let relative = if scale == 0.0 {
            value.abs()
        } else {
            value.abs() / scale.abs()
        };
        Self {
            name: name.into(),
            value,
            scale,
            relative,
            limit,
            within_limit: relative <= limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub nodes: usize,
    pub r_eps: f64,
    pub r_max: f64,
}

impl From<&RadialGrid> for GridMeta {
    fn from(g: &RadialGrid) -> Self {
        Self {
            nodes: g.len(),
            r_eps: g.r_eps(),
            r_max: g.r_max(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VirialReport {
    pub model: Model,
    /// invariants and diagnostics by name
    pub quantities: BTreeMap<String, f64>,
    pub residuals: Vec<Residual>,
    pub checks: Vec<Check>,
    /// free-form classification, e.g. which redshift branch applies
    pub flags: BTreeMap<String, String>,
    pub tolerances: Tolerances,
    pub grid: GridMeta,
}

impl VirialReport {
    pub fn new(model: Model, tolerances: Tolerances, grid: GridMeta) -> Self {
        Self {
            model,
            quantities: BTreeMap::new(),
            residuals: Vec::new(),
            checks: Vec::new(),
            flags: BTreeMap::new(),
            tolerances,
            grid,
        }
    }

    pub fn quantity(&mut self, name: &str, value: f64) {
        self.quantities.insert(name.to_string(), value);
    }

    pub fn flag(&mut self, name: &str, value: impl Into<String>) {
        self.flags.insert(name.to_string(), value.into());
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.quantities.get(name).copied()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn residuals_within_limits(&self) -> bool {
        self.residuals.iter().all(|r| r.within_limit)
    }

    /// Smallest relative margin over the non-trivial checks.
    pub fn min_relative_margin(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| !c.trivial)
            .map(Check::relative_margin)
            .reduce(f64::min)
    }

    pub fn is_trivial(&self) -> bool {
        self.checks.iter().all(|c| c.trivial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_are_signed() {
        let ok = Check::le("a", 1.0, 2.0);
        assert!(ok.passed && ok.margin == 1.0);
        let bad = Check::le("b", 3.0, 2.0);
        assert!(!bad.passed && bad.margin == -1.0);
        assert!(Check::le("eq", 2.0, 2.0).passed);
        assert!(!Check::lt("eq", 2.0, 2.0).passed);
    }

    #[test]
    fn residual_normalisation() {
        let r = Residual::new("x", -2e-4, 2.0, 1e-3);
        assert_eq!(r.relative, 1e-4);
        assert!(r.within_limit);
        assert!(!Residual::new("y", 1.0, 0.0, 1e-3).within_limit);
    }
}
