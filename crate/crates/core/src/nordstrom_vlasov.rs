//! Static Nordström-Vlasov states (`4πG = c = 1`).
//!
//! Particles move in the static field with conserved energy
//! `ε = √(e^{2φ} + |p|²)`, so `f = ψ(ε)` is a steady state once
//! `(1/r²)(r²φ')' = e^{2φ} μ_N(φ)`. Outside the support `φ = -A/r`; the
//! shooting condition is that the interior solution continues into that tail,
//! i.e. `D = φ(R) + R φ'(R) = 0`. `D` is unchanged by `r → γr, c → c/γ²`, so
//! the amplitude only sets the length scale.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ansatz::{nv_moments, nv_source_density, AnsatzProfile, Model, MomentSet};
use crate::error::{Error, NumericsError, Result};
use crate::numerics::{
    find_root_bracketed, integrate_ode_with, quad_dense, quad_to_infinity, quad_with, scan_bracket,
    BuildOptions, DenseSolution, Endpoint, OdeOptions, QuadOptions, RadialGrid, Tolerances,
};
use crate::report::{Check, GridMeta, Residual, VirialReport};

/// Limit on `|H + ∫e^{2φ}(φ-1)μ_N| / H`.
pub const VIRIAL_LIMIT: f64 = 1e-3;
/// Limit on the relative mismatch between the `χ_R` functional at large `R` and `H - M`.
pub const CHI_LIMIT_TOL: f64 = 1e-3;
/// Radii of the `χ_R` sweep, in units of the support radius.
pub const CHI_SWEEP: [f64; 10] = [0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 10.0, 100.0, 1e4];

/// Which of `(φ(0), E0)` is prescribed; the other is found by shooting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NvShooting {
    /// prescribe `φ(0) < 0`, solve for the cutoff
    CentralField(f64),
    /// keep the cutoff of the ansatz, solve for `φ(0)`
    Cutoff,
}

#[derive(Debug, Clone)]
pub struct NVSolution {
    pub grid: RadialGrid,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub rho: Vec<f64>,
    pub h_kin: Vec<f64>,
    pub mu_n: Vec<f64>,
    pub r_support: f64,
    /// `A` in the exterior tail `φ = -A/r`
    pub tail: f64,
    /// ansatz with the realised cutoff
    pub ansatz: AnsatzProfile,
    pub tol: Tolerances,
    interior: Option<DenseSolution>,
}

impl NVSolution {
    pub fn is_vacuum(&self) -> bool {
        self.interior.is_none()
    }

    pub fn central_field(&self) -> f64 {
        self.interior.as_ref().map_or(0.0, |s| s.y_start()[0])
    }

    /// `φ(R) + Rφ'(R)`, zero for a matched solution.
    pub fn mismatch(&self) -> f64 {
        match &self.interior {
            Some(sol) => sol.y_end()[0] + self.r_support * sol.y_end()[1],
            None => 0.0,
        }
    }

    fn moments_at(&self, phi: f64) -> f64 {
        nv_source_density(&self.ansatz, phi, self.tol.quad_tol).unwrap_or(f64::NAN)
    }
}

/// Mass, energy and momentum; `(H, Q)` is a four-vector under boosts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzInvariants {
    pub m: f64,
    pub h: f64,
    pub q: [f64; 3],
}

impl LorentzInvariants {
    pub const ZERO: Self = Self {
        m: 0.0,
        h: 0.0,
        q: [0.0; 3],
    };

    /// `√(H² - |Q|²)`, the energy in the centre-of-momentum frame.
    pub fn rest_energy(&self) -> f64 {
        (self.h * self.h - dot(self.q, self.q)).max(0.0).sqrt()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Single outward integration at a given cutoff and central field.
fn shoot(a: &AnsatzProfile, phi0: f64, opts: &BuildOptions) -> Result<(DenseSolution, f64)> {
    let tol = opts.tol;
    let ln_e0 = a.e0.ln();
    let src_c = (2.0 * phi0).exp() * nv_source_density(a, phi0, tol.quad_tol)?;
    if !(src_c > 0.0) {
        return Err(Error::InvalidAnsatz(format!(
            "no matter at the centre (φ0 = {phi0}, E0 = {})",
            a.e0
        )));
    }
    let r0 = opts.r_eps;
    let y0 = [phi0 + src_c * r0 * r0 / 6.0, src_c * r0 / 3.0];
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        let mu = nv_source_density(a, y[0], tol.quad_tol).unwrap_or(f64::NAN);
        dy[1] = (2.0 * y[0]).exp() * mu - 2.0 * y[1] / r;
    };
    let stop = |_: f64, y: &[f64]| ln_e0 - y[0];
    let unit = ((ln_e0 - phi0) / src_c).sqrt();
    let r_limit = 1e4 * unit;
    let mut ode = OdeOptions::new(tol);
    ode.stop = Some(&stop);
    ode.require_event = true;
    let sol = integrate_ode_with(rhs, &y0, (r0, r_limit), &ode).map_err(|e| match e {
        NumericsError::EventNotBracketed { .. } => Error::NoSupport { r_max: r_limit },
        other => Error::Numerics(other),
    })?;
    let r = sol
        .event_radius()
        .ok_or(Error::NoSupport { r_max: r_limit })?;
    let d = sol.y_end()[0] + r * sol.y_end()[1];
    Ok((sol, d))
}

/// Static state with prescribed central field `φ(0)`; the cutoff is found by shooting.
pub fn build_nv_static(
    a: &AnsatzProfile,
    central_field: f64,
    tol: &Tolerances,
) -> Result<NVSolution> {
    build_nv_static_with(
        a,
        NvShooting::CentralField(central_field),
        &BuildOptions::with_tol(*tol),
    )
}

pub fn build_nv_static_with(
    a: &AnsatzProfile,
    mode: NvShooting,
    opts: &BuildOptions,
) -> Result<NVSolution> {
    opts.tol.validate()?;
    let probe = match mode {
        NvShooting::CentralField(_) => a.with_e0(0.5),
        NvShooting::Cutoff => *a,
    };
    probe.validate(Model::Nv)?;
    if a.c == 0.0 {
        return Ok(vacuum(a, opts));
    }
    let root_tol = opts.tol.root_tol;
    let e0 = match mode {
        NvShooting::CentralField(phi0) => {
            if !(phi0 < 0.0) || !phi0.is_finite() {
                return Err(Error::InvalidAnsatz(format!(
                    "central field must be negative, got {phi0}"
                )));
            }
            let lo = phi0.exp();
            let mismatch = |e0: f64| shoot(&a.with_e0(e0), phi0, opts).ok().map(|(_, d)| d);
            let lattice: Vec<f64> = [
                1e-3, 0.01, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 0.97, 0.99, 0.999,
            ]
            .iter()
            .map(|t| lo + (1.0 - lo) * t)
            .collect();
            let ((ea, eb), _) = scan_bracket(mismatch, &lattice).ok_or_else(|| {
                Error::ShootingBracket(format!(
                    "no cutoff in ({lo}, 1) matches the exterior for φ0 = {phi0}"
                ))
            })?;
            if ea == eb {
                ea
            } else {
                find_root_bracketed(|e0| mismatch(e0).unwrap_or(f64::NAN), ea, eb, root_tol * lo)?
            }
        }
        NvShooting::Cutoff => a.e0,
    };
    let a = a.with_e0(e0);
    let phi0 = match mode {
        NvShooting::CentralField(phi0) => phi0,
        NvShooting::Cutoff => {
            let ln_e0 = e0.ln();
            let mismatch = |w: f64| shoot(&a, ln_e0 - w, opts).ok().map(|(_, d)| d);
            let depths = [
                1e-3, 3e-3, 0.01, 0.03, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0,
            ];
            let ((wa, wb), _) = scan_bracket(mismatch, &depths).ok_or_else(|| {
                Error::ShootingBracket(format!(
                    "no central field below ln E0 = {ln_e0} matches the exterior"
                ))
            })?;
            let w = if wa == wb {
                wa
            } else {
                find_root_bracketed(|w| mismatch(w).unwrap_or(f64::NAN), wa, wb, root_tol)?
            };
            ln_e0 - w
        }
    };
    let (sol, _) = shoot(&a, phi0, opts)?;
    assemble(a, sol, opts)
}

fn assemble(a: AnsatzProfile, sol: DenseSolution, opts: &BuildOptions) -> Result<NVSolution> {
    let r_support = sol.event_radius().unwrap_or(sol.end());
    let tail = r_support * r_support * sol.y_end()[1];
    let grid = RadialGrid::uniform(
        sol.start(),
        r_support / opts.grid_nodes as f64,
        2.0 * r_support,
    )?;
    let n = grid.len();
    let mut s = NVSolution {
        phi: Vec::with_capacity(n),
        dphi: Vec::with_capacity(n),
        rho: Vec::with_capacity(n),
        h_kin: Vec::with_capacity(n),
        mu_n: Vec::with_capacity(n),
        grid,
        r_support,
        tail,
        ansatz: a,
        tol: opts.tol,
        interior: None,
    };
    for &r in s.grid.nodes() {
        let (phi, dphi, m) = if r < r_support {
            let y = sol.eval(r);
            (y[0], y[1], nv_moments(&a, y[0], opts.tol.quad_tol)?)
        } else {
            (-tail / r, tail / (r * r), MomentSet::default())
        };
        s.phi.push(phi);
        s.dphi.push(dphi);
        s.rho.push(m.rho);
        s.h_kin.push(m.h);
        s.mu_n.push(m.n_aux);
    }
    s.interior = Some(sol);
    Ok(s)
}

fn vacuum(a: &AnsatzProfile, opts: &BuildOptions) -> NVSolution {
    let grid = RadialGrid::uniform(opts.r_eps, 1.0 / opts.grid_nodes as f64, 1.0)
        .expect("valid vacuum grid");
    let n = grid.len();
    NVSolution {
        grid,
        phi: vec![0.0; n],
        dphi: vec![0.0; n],
        rho: vec![0.0; n],
        h_kin: vec![0.0; n],
        mu_n: vec![0.0; n],
        r_support: 0.0,
        tail: 0.0,
        ansatz: *a,
        tol: opts.tol,
        interior: None,
    }
}

/// `∫_{r0}^{R} g(r, φ, φ') 4πr² dr`; `n_right` is the power law of `g` at the surface.
fn interior_integral<G: Fn(f64, f64, f64) -> f64>(
    s: &NVSolution,
    g: G,
    a: f64,
    b: f64,
    n_right: Option<f64>,
) -> Result<f64> {
    let Some(sol) = &s.interior else {
        return Ok(0.0);
    };
    let right = match n_right {
        Some(n) if b >= s.r_support => Endpoint::Power(n),
        _ => Endpoint::Regular,
    };
    let opts = QuadOptions::relative(s.tol.quad_tol);
    let v = quad_dense(
        sol,
        |r, y| 4.0 * PI * r * r * g(r, y[0], y[1]),
        a,
        b.min(s.r_support),
        (Endpoint::Regular, right),
        &opts,
    )?;
    if !v.is_finite() {
        return Err(NumericsError::QuadNonConvergence {
            a,
            b,
            err: f64::INFINITY,
        }
        .into());
    }
    Ok(v)
}

fn surface_power(s: &NVSolution) -> f64 {
    s.ansatz.k + 1.5
}

/// `M = ∫ρ`, `H = ∫(h_kin + ½|∇φ|²)`, `Q = 0`.
pub fn nv_invariants(s: &NVSolution) -> Result<LorentzInvariants> {
    let Some(sol) = &s.interior else {
        return Ok(LorentzInvariants::ZERO);
    };
    let a = s.ansatz;
    let qt = s.tol.quad_tol;
    let (r0, rs) = (sol.start(), s.r_support);
    let n = surface_power(s);
    let m = interior_integral(
        s,
        |_, phi, _| nv_moments(&a, phi, qt).map_or(f64::NAN, |m| m.rho),
        r0,
        rs,
        Some(n),
    )?;
    let e_matter = interior_integral(
        s,
        |_, phi, _| nv_moments(&a, phi, qt).map_or(f64::NAN, |m| m.h),
        r0,
        rs,
        Some(n),
    )?;
    let e_field = interior_integral(s, |_, _, dphi| 0.5 * dphi * dphi, r0, rs, None)?;
    let e_tail = 2.0 * PI * s.tail * s.tail / rs;
    Ok(LorentzInvariants {
        m,
        h: e_matter + e_field + e_tail,
        q: [0.0; 3],
    })
}

/// Energy and momentum seen by an observer moving with velocity `u/√(1+|u|²)`.
pub fn lorentz_boost_invariants(inv: &LorentzInvariants, u: [f64; 3]) -> LorentzInvariants {
    let u2 = dot(u, u);
    let u0 = (1.0 + u2).sqrt();
    let uq = dot(u, inv.q);
    // (u0 - 1)/|u|² written without cancellation
    let c = uq / (u0 + 1.0);
    LorentzInvariants {
        m: inv.m,
        h: u0 * inv.h - uq,
        q: [
            inv.q[0] - inv.h * u[0] + c * u[0],
            inv.q[1] - inv.h * u[1] + c * u[1],
            inv.q[2] - inv.h * u[2] + c * u[2],
        ],
    }
}

/// Boost parameter `Q/√(H² - |Q|²)` of the centre-of-momentum frame.
pub fn center_of_momentum_boost(inv: &LorentzInvariants) -> [f64; 3] {
    let e = inv.rest_energy();
    if e == 0.0 {
        return [0.0; 3];
    }
    [inv.q[0] / e, inv.q[1] / e, inv.q[2] / e]
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Radial multiplier `χ(r)` with its first two derivatives.
#[derive(Clone)]
pub struct MultiplierChi {
    pub chi: RadialFn,
    pub dchi: RadialFn,
    pub ddchi: RadialFn,
    /// radius where `χ''` may jump
    pub kink: Option<f64>,
}

impl std::fmt::Debug for MultiplierChi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplierChi")
            .field("kink", &self.kink)
            .finish_non_exhaustive()
    }
}

/// Admissibility of a multiplier, checked on a radial lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiAdmissibility {
    pub finite: bool,
    pub bounded_dchi: bool,
    pub bounded_chi_over_r: bool,
    /// `χ/r - χ' ≥ 0`
    pub monotone: bool,
    /// `χ'' ≤ 0`
    pub concave: bool,
}

impl ChiAdmissibility {
    pub fn all(&self) -> bool {
        self.finite && self.bounded_dchi && self.bounded_chi_over_r && self.monotone && self.concave
    }
}

impl MultiplierChi {
    pub fn new(
        chi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dchi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddchi: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            chi: Arc::new(chi),
            dchi: Arc::new(dchi),
            ddchi: Arc::new(ddchi),
            kink: None,
        }
    }

    pub fn admissibility(&self, lattice: &[f64]) -> ChiAdmissibility {
        let slack = 1e-12;
        let mut out = ChiAdmissibility {
            finite: true,
            bounded_dchi: true,
            bounded_chi_over_r: true,
            monotone: true,
            concave: true,
        };
        let mut max_d = 0.0f64;
        let mut max_q = 0.0f64;
        for &r in lattice {
            let (c, d, dd) = ((self.chi)(r), (self.dchi)(r), (self.ddchi)(r));
            if !(c.is_finite() && d.is_finite() && dd.is_finite()) {
                out.finite = false;
                continue;
            }
            max_d = max_d.max(d.abs());
            max_q = max_q.max((c / r).abs());
            if c / r - d < -slack * d.abs().max(1.0) {
                out.monotone = false;
            }
            if dd > slack * d.abs().max(1.0) / r {
                out.concave = false;
            }
        }
        // a lattice spanning many decades exposes growth
        out.bounded_dchi = max_d < 1e6;
        out.bounded_chi_over_r = max_q < 1e6;
        out
    }

    /// Geometric lattice over `[scale·1e-3, scale·1e3]`.
    pub fn default_lattice(scale: f64) -> Vec<f64> {
        (0..=240)
            .map(|i| scale * 10f64.powf(-3.0 + i as f64 / 40.0))
            .collect()
    }
}

/// `χ_R(r) = r` for `r ≤ R` and `3R - 3R²/r + R³/r²` beyond.
pub fn make_chi_r(radius: f64) -> MultiplierChi {
    assert!(radius > 0.0, "χ_R needs R > 0");
    let rr = radius;
    let mut m = MultiplierChi::new(
        move |r| {
            if r <= rr {
                r
            } else {
                3.0 * rr - 3.0 * rr * rr / r + rr.powi(3) / (r * r)
            }
        },
        move |r| {
            if r <= rr {
                1.0
            } else {
                3.0 * rr * rr / (r * r) - 2.0 * rr.powi(3) / r.powi(3)
            }
        },
        move |r| {
            if r <= rr {
                0.0
            } else {
                6.0 * rr * rr * (rr - r) / r.powi(4)
            }
        },
    );
    m.kink = Some(radius);
    m
}

/// `∫(χ' h - (χ/r) ρ) dx` with `h` the full static energy density.
pub fn nv_chi_functional(s: &NVSolution, m: &MultiplierChi) -> Result<f64> {
    let Some(sol) = &s.interior else {
        return Ok(0.0);
    };
    let a = s.ansatz;
    let qt = s.tol.quad_tol;
    let (r0, rs) = (sol.start(), s.r_support);
    let integrand = |r: f64, phi: f64, dphi: f64| {
        let mo = nv_moments(&a, phi, qt).unwrap_or(MomentSet {
            h: f64::NAN,
            ..MomentSet::default()
        });
        (m.dchi)(r) * (mo.h + 0.5 * dphi * dphi) - (m.chi)(r) / r * mo.rho
    };
    let n = surface_power(s);
    let interior = match m.kink {
        Some(k) if k > r0 && k < rs => {
            interior_integral(s, integrand, r0, k, None)?
                + interior_integral(s, integrand, k, rs, Some(n))?
        }
        _ => interior_integral(s, integrand, r0, rs, Some(n))?,
    };
    // exterior: ½|φ'|² 4πr² = 2πA²/r²
    let a2 = s.tail * s.tail;
    let ext = |r: f64| 2.0 * PI * a2 * (m.dchi)(r) / (r * r);
    let opts = QuadOptions::relative(qt);
    let exterior = match m.kink {
        Some(k) if k > rs => quad_with(ext, rs, k, &opts)? + quad_to_infinity(ext, k, &opts)?,
        _ => quad_to_infinity(ext, rs, &opts)?,
    };
    Ok(interior + exterior)
}

/// `H + ∫e^{2φ}(φ - 1) μ_N dx`, zero for exact statics.
pub fn nv_static_virial_residual(s: &NVSolution) -> Result<f64> {
    let Some(sol) = &s.interior else {
        return Ok(0.0);
    };
    let inv = nv_invariants(s)?;
    let (r0, rs) = (sol.start(), s.r_support);
    let term = interior_integral(
        s,
        |_, phi, _| (2.0 * phi).exp() * (phi - 1.0) * s.moments_at(phi),
        r0,
        rs,
        Some(surface_power(s)),
    )?;
    Ok(inv.h + term)
}

/// `sup |(1/r²)(r²φ')' - e^{2φ}μ_N|` over interior nodes by central differences
/// of the stored field, and the largest source value for scale.
pub fn nv_field_residual(s: &NVSolution) -> (f64, f64) {
    let r = s.grid.nodes();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 2..r.len().saturating_sub(1) {
        let h = r[i + 1] - r[i];
        let d2 = (s.phi[i + 1] - 2.0 * s.phi[i] + s.phi[i - 1]) / (h * h);
        let d1 = (s.phi[i + 1] - s.phi[i - 1]) / (2.0 * h);
        let src = (2.0 * s.phi[i]).exp() * s.mu_n[i];
        worst = worst.max((d2 + 2.0 * d1 / r[i] - src).abs());
        scale = scale.max(src.abs());
    }
    (worst, scale)
}

/// `χ_R` functional at every radius of [`CHI_SWEEP`].
pub fn nv_chi_sweep(s: &NVSolution) -> Result<Vec<(f64, f64)>> {
    if s.is_vacuum() {
        return Ok(CHI_SWEEP.iter().map(|&f| (f, 0.0)).collect());
    }
    CHI_SWEEP
        .iter()
        .map(|&f| {
            let radius = f * s.r_support;
            Ok((radius, nv_chi_functional(s, &make_chi_r(radius))?))
        })
        .collect()
}

pub fn nv_report(s: &NVSolution, boosts: &[[f64; 3]]) -> Result<VirialReport> {
    let mut rep = VirialReport::new(Model::Nv, s.tol, GridMeta::from(&s.grid));
    let inv = nv_invariants(s)?;
    rep.quantity("M", inv.m);
    rep.quantity("H", inv.h);
    rep.quantity("R", s.r_support);
    rep.quantity("A", s.tail);
    rep.quantity("E0", s.ansatz.e0);
    rep.quantity("phi0", s.central_field());
    rep.quantity("shooting_mismatch", s.mismatch());
    let virial = nv_static_virial_residual(s)?;
    rep.residuals.push(Residual::new(
        "virial H + int e^{2phi}(phi-1)mu_N",
        virial,
        inv.h,
        VIRIAL_LIMIT,
    ));
    let sweep = nv_chi_sweep(s)?;
    let boost_name = |i: usize| format!("boost[{i}] sqrt(H'^2-|Q'|^2) <= M");
    if s.is_vacuum() {
        rep.checks.push(Check::trivial("H < M"));
        for (i, _) in CHI_SWEEP.iter().enumerate() {
            rep.checks
                .push(Check::trivial(format!("chi_R[{i}] functional <= 0")));
        }
        for i in 0..boosts.len() {
            rep.checks.push(Check::trivial(boost_name(i)));
        }
        return Ok(rep);
    }
    let (field_res, field_scale) = nv_field_residual(s);
    rep.quantity("field_residual", field_res);
    rep.checks.push(Check::lt("H < M", inv.h, inv.m));
    for (i, &(radius, value)) in sweep.iter().enumerate() {
        rep.quantity(&format!("chi_R[{i}].R"), radius);
        rep.quantity(&format!("chi_R[{i}].value"), value);
        rep.checks
            .push(Check::le(format!("chi_R[{i}] functional <= 0"), value, 0.0));
    }
    let limit = sweep.last().map_or(0.0, |&(_, v)| v);
    let target = inv.h - inv.m;
    rep.residuals.push(Residual::new(
        "chi_R limit - (H - M)",
        limit - target,
        target,
        CHI_LIMIT_TOL,
    ));
    rep.residuals.push(Residual::new(
        "field equation",
        field_res,
        field_scale,
        1e-5,
    ));
    for (i, &u) in boosts.iter().enumerate() {
        let b = lorentz_boost_invariants(&inv, u);
        let norm = b.rest_energy();
        rep.checks.push(Check::le(boost_name(i), norm, b.m));
        rep.residuals.push(Residual::new(
            format!("boost[{i}] minkowski norm - H"),
            norm - inv.h,
            inv.h,
            1e-12,
        ));
    }
    Ok(rep)
}
