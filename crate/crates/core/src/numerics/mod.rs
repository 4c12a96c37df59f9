//! Generic numerical kernels: adaptive ODE integration with stop events,
//! adaptive quadrature, bracketed root finding and radial grids.

mod dense;
mod grid;
mod ode;
mod quad;
mod roots;

use serde::{Deserialize, Serialize};

pub use dense::quad_dense;
pub use grid::{RadialGrid, DEFAULT_R_EPS};
pub use ode::{
    integrate_ode, integrate_ode_with, DenseSolution, EventFn, GuardFn, OdeOptions, OdeSolution,
};
pub use quad::{
    gauss_legendre, quad, quad_endpoints, quad_to_infinity, quad_with, Endpoint, QuadOptions,
    SplitPoint,
};
pub use roots::{find_root_bracketed, scan_bracket};

/// Settings shared by the radial builders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildOptions {
    pub tol: Tolerances,
    /// inner start radius of every radial integration
    pub r_eps: f64,
    /// number of uniform grid intervals across the matter support
    pub grid_nodes: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            r_eps: DEFAULT_R_EPS,
            grid_nodes: 2000,
        }
    }
}

impl BuildOptions {
    pub fn with_tol(tol: Tolerances) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Solver tolerances shared by every build.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub ode_rel: f64,
    pub ode_abs: f64,
    pub quad_tol: f64,
    pub root_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ode_rel: 1e-9,
            ode_abs: 1e-11,
            quad_tol: 1e-12,
            root_tol: 1e-12,
        }
    }
}

/// Smallest relative tolerance reachable in double precision with margin.
pub const MIN_RELATIVE_TOL: f64 = 1e-14;

impl Tolerances {
    /// All tolerances divided by `factor`; relative ones stop at [`MIN_RELATIVE_TOL`].
    pub fn tightened(&self, factor: f64) -> Self {
        let rel = |t: f64| (t / factor).max(MIN_RELATIVE_TOL.min(t));
        Self {
            ode_rel: rel(self.ode_rel),
            ode_abs: self.ode_abs / factor,
            quad_tol: rel(self.quad_tol),
            root_tol: rel(self.root_tol),
        }
    }

    pub fn validate(&self) -> Result<(), crate::error::NumericsError> {
        let all = [self.ode_rel, self.ode_abs, self.quad_tol, self.root_tol];
        if all.iter().all(|t| *t > 0.0 && t.is_finite()) {
            Ok(())
        } else {
            Err(crate::error::NumericsError::InvalidInput(format!(
                "tolerances must be positive: {self:?}"
            )))
        }
    }
}
