//! Static polytropes of the gravitational Vlasov-Poisson system in units with
//! `4πG = 1`, so the potential solves `ΔU = ρ` and vanishes at infinity.
//!
//! The build integrates the depth `W = E0 - U`, which obeys
//! `W'' + 2W'/r = -ρ(W)` independently of the (yet unknown) cutoff. The
//! surface is the first zero of `W`; matching the exterior `U = -M/(4πr)`
//! there fixes `E0 = R W'(R)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ansatz::{vp_density_of_depth, vp_kinetic_of_depth, AnsatzProfile, Model};
use crate::error::{Error, NumericsError, Result};
use crate::numerics::{
    integrate_ode_with, quad_dense, BuildOptions, DenseSolution, Endpoint, OdeOptions, QuadOptions,
    RadialGrid, Tolerances,
};
use crate::report::{Check, GridMeta, Residual, VirialReport};

/// Acceptance limit on `|H + E_kin| / |H|`.
pub const VIRIAL_LIMIT: f64 = 1e-3;

/// Radial record of a static VP polytrope.
#[derive(Debug, Clone)]
pub struct VPSolution {
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub rho: Vec<f64>,
    pub r_support: f64,
    /// ansatz with the cutoff realised by the exterior matching
    pub ansatz: AnsatzProfile,
    pub central_depth: f64,
    pub tol: Tolerances,
    interior: Option<DenseSolution>,
}

impl VPSolution {
    pub fn is_vacuum(&self) -> bool {
        self.interior.is_none()
    }

    /// `M / 4π`, read off from Gauss's law at the surface.
    pub fn gauss_mass(&self) -> f64 {
        match &self.interior {
            Some(sol) => -self.r_support * self.r_support * sol.y_end()[1],
            None => 0.0,
        }
    }

    /// Depth `W = E0 - U` and `W'` at `r` from the dense interior solution.
    pub fn depth_at(&self, r: f64) -> (f64, f64) {
        match &self.interior {
            Some(sol) if r <= self.r_support => {
                let y = sol.eval(r);
                (y[0], y[1])
            }
            _ => {
                let m4 = self.gauss_mass();
                (self.ansatz.e0 + m4 / r, -m4 / (r * r))
            }
        }
    }
}

/// Conserved quantities of the Vlasov-Poisson system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GalileanInvariants {
    pub m: f64,
    pub h: f64,
    pub e_kin: f64,
    /// `½∫|∇U|²`
    pub e_pot: f64,
    pub q: [f64; 3],
}

impl GalileanInvariants {
    pub const ZERO: Self = Self {
        m: 0.0,
        h: 0.0,
        e_kin: 0.0,
        e_pot: 0.0,
        q: [0.0; 3],
    };

    /// `H - |Q|²/(2M)`, unchanged by Galilean boosts.
    pub fn internal_energy(&self) -> f64 {
        if self.m == 0.0 {
            self.h
        } else {
            self.h - dot(self.q, self.q) / (2.0 * self.m)
        }
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Builds the polytrope with central depth `E0 - U(0)`; the cutoff stored in
/// `a` is ignored and replaced by the matched value.
pub fn build_vp_polytrope(
    a: &AnsatzProfile,
    central_depth: f64,
    tol: &Tolerances,
) -> Result<VPSolution> {
    build_vp_polytrope_with(a, central_depth, &BuildOptions::with_tol(*tol))
}

pub fn build_vp_polytrope_with(
    a: &AnsatzProfile,
    central_depth: f64,
    opts: &BuildOptions,
) -> Result<VPSolution> {
    opts.tol.validate()?;
    a.with_e0(-1.0).validate(Model::Vp)?;
    if a.k >= 3.5 {
        return Err(Error::InvalidAnsatz(format!(
            "k = {} gives polytropic index n = k + 3/2 >= 5, which has no compact support",
            a.k
        )));
    }
    if a.c == 0.0 {
        return vacuum(a, central_depth, opts);
    }
    if !(central_depth > 0.0) || !central_depth.is_finite() {
        return Err(Error::InvalidAnsatz(format!(
            "central depth must be positive, got {central_depth}"
        )));
    }

    let rho_c = vp_density_of_depth(a, central_depth);
    // Lane-Emden length unit; surfaces sit at a few units for n < 5
    let unit = (central_depth / rho_c).sqrt();
    let r0 = opts.r_eps;
    let y0 = [central_depth - rho_c * r0 * r0 / 6.0, -rho_c * r0 / 3.0];
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -vp_density_of_depth(a, y[0]) - 2.0 * y[1] / r;
    };
    let stop = |_: f64, y: &[f64]| y[0];
    let r_limit = 1e4 * unit;
    let mut ode = OdeOptions::new(opts.tol);
    ode.stop = Some(&stop);
    ode.require_event = true;
    let sol = integrate_ode_with(rhs, &y0, (r0, r_limit), &ode).map_err(|e| match e {
        NumericsError::EventNotBracketed { .. } => Error::NoSupport { r_max: r_limit },
        other => Error::Numerics(other),
    })?;
    let r_support = sol
        .event_radius()
        .ok_or(Error::NoSupport { r_max: r_limit })?;
    let dw_surface = sol.y_end()[1];
    let e0 = r_support * dw_surface;
    let m4 = -r_support * r_support * dw_surface;

    let grid = RadialGrid::uniform(r0, r_support / opts.grid_nodes as f64, 2.0 * r_support)?;
    let n = grid.len();
    let (mut u, mut du, mut rho) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for &r in grid.nodes() {
        if r < r_support {
            let y = sol.eval(r);
            u.push(e0 - y[0]);
            du.push(-y[1]);
            rho.push(vp_density_of_depth(a, y[0]));
        } else {
            u.push(-m4 / r);
            du.push(m4 / (r * r));
            rho.push(0.0);
        }
    }
    Ok(VPSolution {
        grid,
        u,
        du,
        rho,
        r_support,
        ansatz: a.with_e0(e0),
        central_depth,
        tol: opts.tol,
        interior: Some(sol),
    })
}

fn vacuum(a: &AnsatzProfile, central_depth: f64, opts: &BuildOptions) -> Result<VPSolution> {
    let grid = RadialGrid::uniform(opts.r_eps, 1.0 / opts.grid_nodes as f64, 1.0)?;
    let n = grid.len();
    Ok(VPSolution {
        grid,
        u: vec![0.0; n],
        du: vec![0.0; n],
        rho: vec![0.0; n],
        r_support: 0.0,
        ansatz: *a,
        central_depth,
        tol: opts.tol,
        interior: None,
    })
}

/// `M`, `E_kin`, `E_pot` and `H = E_kin - E_pot` by quadrature along the
/// dense interior solution plus the closed-form exterior field energy.
pub fn vp_invariants(s: &VPSolution) -> Result<GalileanInvariants> {
    let Some(sol) = &s.interior else {
        return Ok(GalileanInvariants::ZERO);
    };
    let a = &s.ansatz;
    let n = a.k + 1.5;
    let opts = QuadOptions::relative(s.tol.quad_tol);
    let (r0, rs) = (sol.start(), s.r_support);
    let m = 4.0
        * PI
        * quad_dense(
            sol,
            |r, y| vp_density_of_depth(a, y[0]) * r * r,
            r0,
            rs,
            (Endpoint::Regular, Endpoint::Power(n)),
            &opts,
        )?;
    let e_kin = 4.0
        * PI
        * quad_dense(
            sol,
            |r, y| vp_kinetic_of_depth(a, y[0]) * r * r,
            r0,
            rs,
            (Endpoint::Regular, Endpoint::Power(n + 1.0)),
            &opts,
        )?;
    let field_in = 2.0
        * PI
        * quad_dense(
            sol,
            |r, y| y[1] * y[1] * r * r,
            r0,
            rs,
            (Endpoint::Regular, Endpoint::Regular),
            &opts,
        )?;
    let dw = sol.y_end()[1];
    let field_out = 2.0 * PI * rs.powi(3) * dw * dw;
    let e_pot = field_in + field_out;
    Ok(GalileanInvariants {
        m,
        h: e_kin - e_pot,
        e_kin,
        e_pot,
        q: [0.0; 3],
    })
}

/// Invariants seen from the frame `x' = x - ut`, `p' = p - u`.
pub fn galilean_boost(inv: &GalileanInvariants, u: [f64; 3]) -> GalileanInvariants {
    let uq = dot(u, inv.q);
    let shift = 0.5 * inv.m * dot(u, u) - uq;
    GalileanInvariants {
        m: inv.m,
        h: inv.h + shift,
        e_kin: inv.e_kin + shift,
        e_pot: inv.e_pot,
        q: [
            inv.q[0] - inv.m * u[0],
            inv.q[1] - inv.m * u[1],
            inv.q[2] - inv.m * u[2],
        ],
    }
}

pub fn vp_report(s: &VPSolution, boosts: &[[f64; 3]]) -> Result<VirialReport> {
    let inv = vp_invariants(s)?;
    let mut rep = VirialReport::new(Model::Vp, s.tol, GridMeta::from(&s.grid));
    rep.quantity("M", inv.m);
    rep.quantity("H", inv.h);
    rep.quantity("E_kin", inv.e_kin);
    rep.quantity("E_pot", inv.e_pot);
    rep.quantity("R", s.r_support);
    rep.quantity("E0", s.ansatz.e0);
    rep.quantity("central_depth", s.central_depth);
    rep.residuals.push(Residual::new(
        "virial H + E_kin",
        inv.h + inv.e_kin,
        inv.h,
        VIRIAL_LIMIT,
    ));
    if s.is_vacuum() {
        rep.checks.push(Check::trivial("H < 0"));
        for i in 0..boosts.len() {
            rep.checks
                .push(Check::trivial(format!("boost[{i}] H' < |Q'|^2/(2M)")));
        }
        return Ok(rep);
    }
    rep.checks.push(Check::lt("H < 0", inv.h, 0.0));
    for (i, &u) in boosts.iter().enumerate() {
        let b = galilean_boost(&inv, u);
        rep.checks.push(Check::lt(
            format!("boost[{i}] H' < |Q'|^2/(2M)"),
            b.h,
            dot(b.q, b.q) / (2.0 * b.m),
        ));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum_build() {
        let a = AnsatzProfile::isotropic(0.0, 1.0, -1.0);
        let s = build_vp_polytrope(&a, 1.0, &Tolerances::default()).unwrap();
        assert!(s.u.iter().all(|&u| u == 0.0));
        assert_eq!(vp_invariants(&s).unwrap(), GalileanInvariants::ZERO);
        let rep = vp_report(&s, &[[1.0, 0.0, 0.0]]).unwrap();
        assert!(rep.is_trivial() && rep.checks_passed());
    }

    #[test]
    fn rejects_non_compact_index() {
        let a = AnsatzProfile::isotropic(1.0, 3.5, -1.0);
        assert!(matches!(
            build_vp_polytrope(&a, 1.0, &Tolerances::default()),
            Err(Error::InvalidAnsatz(_))
        ));
    }

    #[test]
    fn potential_matches_exterior_and_gauss() {
        let a = AnsatzProfile::isotropic(1.0, 1.0, -1.0);
        let s = build_vp_polytrope(&a, 0.5, &Tolerances::default()).unwrap();
        let inv = vp_invariants(&s).unwrap();
        assert_relative_eq!(inv.m / (4.0 * PI), s.gauss_mass(), max_relative = 1e-9);
        assert!(s.ansatz.e0 < 0.0);
        assert!(s.u.windows(2).all(|w| w[1] > w[0]));
        let last = s.grid.len() - 1;
        let r = s.grid.nodes()[last];
        assert_relative_eq!(s.u[last], -inv.m / (4.0 * PI * r), max_relative = 1e-9);
    }

    #[test]
    fn boost_round_trip() {
        let inv = GalileanInvariants {
            m: 2.0,
            h: -1.0,
            e_kin: 1.0,
            e_pot: 2.0,
            q: [0.0; 3],
        };
        let b = galilean_boost(&inv, [1.0, 0.0, 0.0]);
        assert_eq!(b.q, [-2.0, 0.0, 0.0]);
        assert_eq!(b.h, 0.0);
        assert!(b.h < dot(b.q, b.q) / (2.0 * b.m));
        let back = galilean_boost(&b, [-1.0, 0.0, 0.0]);
        assert_eq!(back, inv);
    }

    #[test]
    fn center_of_mass_frame() {
        let inv = GalileanInvariants {
            m: 3.0,
            h: -0.4,
            e_kin: 0.6,
            e_pot: 1.0,
            q: [0.3, -0.6, 1.2],
        };
        let u = [inv.q[0] / inv.m, inv.q[1] / inv.m, inv.q[2] / inv.m];
        let b = galilean_boost(&inv, u);
        assert!(b.q.iter().all(|q| q.abs() < 1e-15));
        assert_relative_eq!(
            b.internal_energy(),
            inv.internal_energy(),
            max_relative = 1e-14
        );
    }
}
