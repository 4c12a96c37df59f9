//! Static spherically symmetric Einstein-Vlasov states (`G = c = 1`) in
//! Schwarzschild coordinates `ds² = -e^{2μ}dt² + e^{2λ}dr² + r²dω²`.
//!
//! With `m(r)` the quasi-local mass and `z = μ - ln E0`,
//!
//! ```text
//! m' = 4πr² h,    z' = (m/r² + 4πr p_rad) / (1 - 2m/r),    e^{-2λ} = 1 - 2m/r
//! ```
//!
//! The moments depend on `μ` and `E0` only through `z` and the combination
//! `c E0^k`. The system is invariant under `r → γr, m → γm, c → c/γ²` (with
//! `F0 → γ²F0`), so for isotropic states the cutoff realised by the
//! Schwarzschild matching does not depend on the amplitude. Shells break the
//! scaling and the cutoff is found by a fixed-point iteration.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ansatz::{ev_moments, ev_moments_masked, AnsatzProfile, EvMomentMask, Model, MomentSet};
use crate::error::{Error, NumericsError, Result};
use crate::numerics::{
    find_root_bracketed, integrate_ode_with, quad_dense, scan_bracket, BuildOptions, DenseSolution,
    Endpoint, OdeOptions, QuadOptions, RadialGrid, Tolerances,
};
use crate::report::{Check, GridMeta, Residual, VirialReport};

/// Builds are rejected once `1 - 2m/r` drops below this.
pub const HORIZON_GUARD: f64 = 1e-3;
/// Limit on `|H - ∫e^{λ+μ}(h + p_rad + p_tan)| / H`.
pub const VIRIAL_LIMIT: f64 = 1e-3;
/// Limit on the scaled tangential-pressure field-equation residual.
pub const CONSISTENCY_LIMIT: f64 = 1e-3;
/// Tolerance on `E0 = √(1 - 2H/R2)` for isotropic states.
pub const JEANS_TOL: f64 = 1e-6;
pub const BUCHDAHL: f64 = 8.0 / 9.0;

#[derive(Debug, Clone)]
pub struct EVSolution {
    pub grid: RadialGrid,
    pub mu: Vec<f64>,
    pub lam: Vec<f64>,
    pub m: Vec<f64>,
    pub moments: Vec<MomentSet>,
    /// inner support radius, 0 for stars
    pub r1: f64,
    pub r2: f64,
    /// ansatz with the realised cutoff
    pub ansatz: AnsatzProfile,
    pub e0: f64,
    pub z_central: f64,
    pub tol: Tolerances,
    interior: Option<DenseSolution>,
}

/// Metric and mass at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPoint {
    pub m: f64,
    pub mu: f64,
    pub lam: f64,
}

impl EVSolution {
    pub fn is_vacuum(&self) -> bool {
        self.interior.is_none()
    }

    /// ADM mass `m(R2)`.
    pub fn adm_mass(&self) -> f64 {
        self.interior.as_ref().map_or(0.0, |s| s.y_end()[0])
    }

    pub fn mu_center(&self) -> f64 {
        if self.is_vacuum() {
            0.0
        } else {
            self.z_central + self.e0.ln()
        }
    }

    pub fn metric_at(&self, r: f64) -> MetricPoint {
        let Some(sol) = &self.interior else {
            return MetricPoint {
                m: 0.0,
                mu: 0.0,
                lam: 0.0,
            };
        };
        let ln_e0 = self.e0.ln();
        if r <= sol.start() {
            return MetricPoint {
                m: 0.0,
                mu: self.z_central + ln_e0,
                lam: 0.0,
            };
        }
        if r >= self.r2 {
            let h = self.adm_mass();
            let mu = 0.5 * (1.0 - 2.0 * h / r).ln();
            return MetricPoint { m: h, mu, lam: -mu };
        }
        let y = sol.eval(r);
        MetricPoint {
            m: y[0],
            mu: y[1] + ln_e0,
            lam: -0.5 * (1.0 - 2.0 * y[0] / r).ln(),
        }
    }

    /// `sup 2m/r` over the grid and the step boundaries of the interior solution.
    pub fn buchdahl_sup(&self) -> f64 {
        let Some(sol) = &self.interior else {
            return 0.0;
        };
        let mut sup = 0.0f64;
        for &r in self.grid.nodes().iter().chain(sol.breakpoints().iter()) {
            if r > 0.0 {
                sup = sup.max(2.0 * self.metric_at(r).m / r);
            }
        }
        sup
    }
}

/// Global quantities of a static state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EVInvariants {
    /// ADM mass
    pub h: f64,
    /// rest mass `∫∫ e^λ f dv dx`
    pub m: f64,
    pub zc: f64,
    pub e0: f64,
    pub r1: f64,
    pub r2: f64,
    /// `1 - H/M`
    pub binding: f64,
}

/// Vacuum-interior radius of a shell, where `e^{-z_c} = √(1 + F0/r²)`.
fn shell_inner_radius(a: &AnsatzProfile, z_central: f64) -> f64 {
    if a.f0 > 0.0 {
        (a.f0 / ((-2.0 * z_central).exp() - 1.0)).sqrt()
    } else {
        0.0
    }
}

struct Interior {
    sol: DenseSolution,
    r2: f64,
}

/// Outward integration of `(m, z)` for an ansatz whose cutoff has been
/// absorbed into the amplitude (`a.e0 = 1`).
fn integrate_interior(a: &AnsatzProfile, z_central: f64, opts: &BuildOptions) -> Result<Interior> {
    let tol = opts.tol;
    let qt = tol.quad_tol;
    let r1 = shell_inner_radius(a, z_central);
    let (r_start, y0, unit) = if r1 > 0.0 {
        // the density grows from zero at R1; its scale sets the search range
        let probe = ev_moments_masked(a, z_central, 2.0 * r1, qt, EvMomentMask::Source)?;
        let unit = if probe.h > 0.0 {
            1.0 / (4.0 * PI * probe.h).sqrt()
        } else {
            r1
        };
        (r1, [0.0, z_central], unit.max(r1))
    } else {
        let r0 = opts.r_eps;
        let c = ev_moments_masked(a, z_central, r0, qt, EvMomentMask::Source)?;
        if !(c.h > 0.0) {
            return Err(Error::InvalidAnsatz(format!(
                "no matter at the centre for z_c = {z_central}"
            )));
        }
        let y0 = [
            4.0 * PI / 3.0 * c.h * r0.powi(3),
            z_central + 2.0 * PI / 3.0 * (c.h + 3.0 * c.p_rad) * r0 * r0,
        ];
        (r0, y0, 1.0 / (4.0 * PI * c.h).sqrt())
    };
    let f0 = a.f0;
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        let mo = ev_moments_masked(a, y[1], r, qt, EvMomentMask::Source).unwrap_or(MomentSet {
            h: f64::NAN,
            ..MomentSet::default()
        });
        let g = 1.0 - 2.0 * y[0] / r;
        dy[0] = 4.0 * PI * r * r * mo.h;
        dy[1] = (y[0] / (r * r) + 4.0 * PI * r * mo.p_rad) / g;
    };
    // positive while the cutoff still admits particles at radius r
    let stop = |r: f64, y: &[f64]| (-2.0 * y[1]).exp() - 1.0 - f0 / (r * r);
    let guard = |r: f64, y: &[f64]| 1.0 - 2.0 * y[0] / r >= HORIZON_GUARD;
    let r_limit = r_start + 1e4 * unit;
    let mut ode = OdeOptions::new(tol);
    ode.stop = Some(&stop);
    ode.guard = Some(&guard);
    ode.require_event = true;
    let sol = integrate_ode_with(rhs, &y0, (r_start, r_limit), &ode).map_err(|e| match e {
        NumericsError::EventNotBracketed { .. } => Error::NoSupport { r_max: r_limit },
        NumericsError::GuardTripped { r } => Error::Horizon {
            r,
            margin: HORIZON_GUARD,
        },
        other => Error::Numerics(other),
    })?;
    let r2 = sol
        .event_radius()
        .ok_or(Error::NoSupport { r_max: r_limit })?;
    Ok(Interior { sol, r2 })
}

/// Cutoff implied by matching `μ(R2)` to the Schwarzschild exterior.
fn matched_cutoff(int: &Interior) -> f64 {
    let y = int.sol.y_end();
    (1.0 - 2.0 * y[0] / int.r2).sqrt() * (-y[1]).exp()
}

fn absorbed(a: &AnsatzProfile, e0: f64) -> AnsatzProfile {
    AnsatzProfile {
        c: a.c * e0.powf(a.k),
        e0: 1.0,
        ..*a
    }
}

/// Builds the static state with shifted central potential `z_c = μ(0) - ln E0 < 0`.
/// The cutoff of `a` seeds the fixed-point iteration for shells.
pub fn build_ev_static(a: &AnsatzProfile, z_central: f64, tol: &Tolerances) -> Result<EVSolution> {
    build_ev_static_with(a, z_central, &BuildOptions::with_tol(*tol))
}

pub fn build_ev_static_with(
    a: &AnsatzProfile,
    z_central: f64,
    opts: &BuildOptions,
) -> Result<EVSolution> {
    opts.tol.validate()?;
    let seed = if a.e0 > 0.0 && a.e0 < 1.0 { a.e0 } else { 0.5 };
    a.with_e0(seed).validate(Model::Ev)?;
    if a.c == 0.0 {
        return Ok(vacuum(a, z_central, opts));
    }
    if !(z_central < 0.0) || !z_central.is_finite() {
        return Err(Error::InvalidAnsatz(format!(
            "central shifted potential must be negative, got {z_central}"
        )));
    }
    let root_tol = opts.tol.root_tol;
    let mut e0 = seed;
    let mut converged = false;
    for _ in 0..60 {
        let next = matched_cutoff(&integrate_interior(&absorbed(a, e0), z_central, opts)?);
        if !next.is_finite() {
            return Err(Error::ShootingBracket(format!(
                "matched cutoff is not finite for z_c = {z_central}"
            )));
        }
        let done = (next - e0).abs() <= root_tol * e0;
        e0 = next;
        if done || a.k == 0.0 {
            converged = true;
            break;
        }
    }
    if !converged {
        let residual = |e: f64| {
            integrate_interior(&absorbed(a, e), z_central, opts)
                .ok()
                .map(|i| matched_cutoff(&i) - e)
        };
        let lattice: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
        let ((lo, hi), _) = scan_bracket(residual, &lattice).ok_or_else(|| {
            Error::ShootingBracket(format!("no self-consistent cutoff for z_c = {z_central}"))
        })?;
        e0 = if lo == hi {
            lo
        } else {
            find_root_bracketed(|e| residual(e).unwrap_or(f64::NAN), lo, hi, root_tol)?
        };
    }
    let int = integrate_interior(&absorbed(a, e0), z_central, opts)?;
    if !(e0 > 0.0 && e0 < 1.0) {
        return Err(Error::ShootingBracket(format!(
            "matched cutoff {e0} outside (0, 1)"
        )));
    }
    assemble(a.with_e0(e0), z_central, int, opts)
}

fn assemble(
    a: AnsatzProfile,
    z_central: f64,
    int: Interior,
    opts: &BuildOptions,
) -> Result<EVSolution> {
    let r1 = if a.f0 > 0.0 { int.sol.start() } else { 0.0 };
    let r2 = int.r2;
    let grid = RadialGrid::uniform(opts.r_eps, r2 / opts.grid_nodes as f64, 2.0 * r2)?;
    let mut s = EVSolution {
        grid,
        mu: Vec::new(),
        lam: Vec::new(),
        m: Vec::new(),
        moments: Vec::new(),
        r1,
        r2,
        ansatz: a,
        e0: a.e0,
        z_central,
        tol: opts.tol,
        interior: Some(int.sol),
    };
    let nodes = s.grid.nodes().to_vec();
    for r in nodes {
        let p = s.metric_at(r);
        let mo = if r > r1 && r < r2 {
            ev_moments(&a, p.mu, r, opts.tol.quad_tol)?
        } else {
            MomentSet::default()
        };
        s.mu.push(p.mu);
        s.lam.push(p.lam);
        s.m.push(p.m);
        s.moments.push(mo);
    }
    Ok(s)
}

fn vacuum(a: &AnsatzProfile, z_central: f64, opts: &BuildOptions) -> EVSolution {
    let grid = RadialGrid::uniform(opts.r_eps, 1.0 / opts.grid_nodes as f64, 1.0)
        .expect("valid vacuum grid");
    let n = grid.len();
    EVSolution {
        grid,
        mu: vec![0.0; n],
        lam: vec![0.0; n],
        m: vec![0.0; n],
        moments: vec![MomentSet::default(); n],
        r1: 0.0,
        r2: 0.0,
        ansatz: *a,
        e0: a.e0,
        z_central,
        tol: opts.tol,
        interior: None,
    }
}

/// `∫_{R1}^{R2} g(r, moments, μ, λ) 4πr² dr` along the dense interior.
fn support_integral<G: Fn(f64, &MomentSet, f64, f64) -> f64>(s: &EVSolution, g: G) -> Result<f64> {
    let Some(sol) = &s.interior else {
        return Ok(0.0);
    };
    let a = s.ansatz;
    let qt = s.tol.quad_tol;
    let ln_e0 = s.e0.ln();
    // moments vanish like a power of the distance to each support edge
    let edge = Endpoint::Power(a.k + a.l + 1.5);
    let left = if s.r1 > 0.0 { edge } else { Endpoint::Regular };
    let opts = QuadOptions::relative(qt);
    let v = quad_dense(
        sol,
        |r, y| {
            let mu = y[1] + ln_e0;
            let lam = -0.5 * (1.0 - 2.0 * y[0] / r).ln();
            match ev_moments(&a, mu, r, qt) {
                Ok(mo) => 4.0 * PI * r * r * g(r, &mo, mu, lam),
                Err(_) => f64::NAN,
            }
        },
        sol.start(),
        s.r2,
        (left, edge),
        &opts,
    )?;
    if !v.is_finite() {
        return Err(NumericsError::QuadNonConvergence {
            a: sol.start(),
            b: s.r2,
            err: f64::INFINITY,
        }
        .into());
    }
    Ok(v)
}

pub fn ev_invariants(s: &EVSolution) -> Result<EVInvariants> {
    if s.is_vacuum() {
        return Ok(EVInvariants {
            h: 0.0,
            m: 0.0,
            zc: 0.0,
            e0: s.e0,
            r1: 0.0,
            r2: 0.0,
            binding: 0.0,
        });
    }
    let h = s.adm_mass();
    let m = support_integral(s, |_, mo, _, lam| lam.exp() * mo.rho)?;
    Ok(EVInvariants {
        h,
        m,
        zc: (-s.mu_center()).exp() - 1.0,
        e0: s.e0,
        r1: s.r1,
        r2: s.r2,
        binding: 1.0 - h / m,
    })
}

/// `H - ∫e^{λ+μ}(h + p_rad + p_tan) dx`.
pub fn ev_virial_residual(s: &EVSolution) -> Result<f64> {
    if s.is_vacuum() {
        return Ok(0.0);
    }
    let integral = support_integral(s, |_, mo, mu, lam| {
        (lam + mu).exp() * (mo.h + mo.p_rad + mo.p_tan)
    })?;
    Ok(s.adm_mass() - integral)
}

/// `sup |e^{-2λ}(μ'' + (μ' - λ')(μ' + 1/r)) - 4π p_tan|` over interior grid
/// nodes, with derivatives from central differences of the stored metric,
/// divided by `sup 8πh` (1 for vacuum).
pub fn ev_consistency_residual(s: &EVSolution) -> f64 {
    let r = s.grid.nodes();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 2..r.len().saturating_sub(1) {
        let h = r[i + 1] - r[i];
        let dmu = (s.mu[i + 1] - s.mu[i - 1]) / (2.0 * h);
        let ddmu = (s.mu[i + 1] - 2.0 * s.mu[i] + s.mu[i - 1]) / (h * h);
        let dlam = (s.lam[i + 1] - s.lam[i - 1]) / (2.0 * h);
        let lhs = (-2.0 * s.lam[i]).exp() * (ddmu + (dmu - dlam) * (dmu + 1.0 / r[i]));
        worst = worst.max((lhs - 4.0 * PI * s.moments[i].p_tan).abs());
        scale = scale.max(8.0 * PI * s.moments[i].h);
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Every inequality of the static theory, with signed margins.
pub fn ev_bounds_report(s: &EVSolution) -> Result<VirialReport> {
    let mut rep = VirialReport::new(Model::Ev, s.tol, GridMeta::from(&s.grid));
    let inv = ev_invariants(s)?;
    let names = [
        "Zc >= |M/H-1|",
        "buchdahl 2m/r <= 8/9",
        "redshift branch e^mu(0) <= H/M or H/(2H-M)",
        "e^mu(0) <= sqrt(1-2H/R2)",
        "e^mu(0) <= E0 M/H",
        "e^mu(0) <= min(1,M/H) sqrt(1-2H/R2)",
        "shell R1 <= 18H/ln(|M/H-1|+1)",
        "lambda+mu <= 0",
        "mu(0) <= lambda+mu",
    ];
    for (k, v) in [
        ("H", inv.h),
        ("M", inv.m),
        ("Zc", inv.zc),
        ("E0", inv.e0),
        ("R1", inv.r1),
        ("R2", inv.r2),
        ("binding", inv.binding),
        ("z_central", s.z_central),
        ("mu0", s.mu_center()),
    ] {
        rep.quantity(k, v);
    }
    if s.is_vacuum() {
        rep.residuals.push(Residual::new(
            "virial H - int e^{lambda+mu}(h+p_rad+p_tan)",
            0.0,
            0.0,
            VIRIAL_LIMIT,
        ));
        rep.quantity("buchdahl_sup", 0.0);
        for n in names {
            rep.checks.push(Check::trivial(n));
        }
        return Ok(rep);
    }
    let (h, m) = (inv.h, inv.m);
    let e_mu0 = s.mu_center().exp();
    let surface = (1.0 - 2.0 * h / s.r2).sqrt();
    let buch = s.buchdahl_sup();
    rep.quantity("buchdahl_sup", buch);

    let virial = ev_virial_residual(s)?;
    rep.residuals.push(Residual::new(
        "virial H - int e^{lambda+mu}(h+p_rad+p_tan)",
        virial,
        h,
        VIRIAL_LIMIT,
    ));
    let consistency = ev_consistency_residual(s);
    rep.quantity("consistency_residual", consistency);
    rep.residuals.push(Residual::new(
        "tangential field equation (scaled)",
        consistency,
        1.0,
        CONSISTENCY_LIMIT,
    ));

    rep.checks
        .push(Check::le(names[0], (m / h - 1.0).abs(), inv.zc));
    rep.checks.push(Check::le(names[1], buch, BUCHDAHL));
    if h <= m {
        rep.flag("redshift_branch", "H <= M: e^mu(0) <= H/M");
        rep.checks.push(Check::le(names[2], e_mu0, h / m));
    } else {
        rep.flag("redshift_branch", "H > M: e^mu(0) <= H/(2H-M)");
        rep.checks
            .push(Check::le(names[2], e_mu0, h / (2.0 * h - m)));
    }
    rep.flag(
        "h_over_m_le_half",
        if h / m <= 0.5 { "true" } else { "false" },
    );
    rep.checks.push(Check::le(names[3], e_mu0, surface));
    rep.checks.push(Check::le(names[4], e_mu0, inv.e0 * m / h));
    if s.ansatz.is_isotropic() {
        rep.checks
            .push(Check::le(names[5], e_mu0, (m / h).min(1.0) * surface));
        rep.residuals.push(Residual::new(
            "jeans E0 - sqrt(1-2H/R2)",
            inv.e0 - surface,
            1.0,
            JEANS_TOL,
        ));
    } else {
        rep.checks.push(Check::trivial(names[5]));
    }
    if s.r1 > 0.0 {
        rep.checks.push(Check::le(
            names[6],
            s.r1,
            18.0 * h / ((m / h - 1.0).abs() + 1.0).ln(),
        ));
    } else {
        rep.checks.push(Check::trivial(names[6]));
    }
    // both orderings hold up to the accuracy of the integration
    let slack = 10.0 * (s.tol.ode_abs + s.tol.ode_rel * s.mu_center().abs());
    let sums: Vec<f64> = s.lam.iter().zip(&s.mu).map(|(l, u)| l + u).collect();
    let sup_sum = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inf_sum = sums.iter().copied().fold(f64::INFINITY, f64::min);
    rep.quantity("sup_lambda_plus_mu", sup_sum);
    rep.checks.push(Check::le(names[7], sup_sum, slack));
    rep.checks
        .push(Check::le(names[8], s.mu_center(), inf_sum + slack));
    Ok(rep)
}
