//! Polytropic distribution-function ansatz `ψ(E, F) = c (E0 - E)₊^k (F - F0)₊^l`
//! and its momentum-space moments, reduced to one-dimensional integrals for
//! each model, together with a brute-force 3-D quadrature oracle.
//!
//! Particle energies per model:
//! * Vlasov-Poisson: `E = |p|²/2 + U`
//! * Nordström-Vlasov (static): `E = √(e^{2φ} + |p|²)`
//! * Einstein-Vlasov (static): `E = e^μ √(1 + |v|²)`, `F = |x ∧ v|²`

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::beta::beta;

use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, quad_endpoints, Endpoint, QuadOptions, SplitPoint};

/// Which kinetic model an ansatz or moment refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Vp,
    Nv,
    Ev,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::Vp => "vp",
            Model::Nv => "nv",
            Model::Ev => "ev",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "vp" => Ok(Model::Vp),
            "nv" => Ok(Model::Nv),
            "ev" => Ok(Model::Ev),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected vp, nv or ev)"
            ))),
        }
    }
}

/// Parameters of `ψ(E, F) = c (E0 - E)₊^k (F - F0)₊^l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzProfile {
    /// amplitude
    pub c: f64,
    /// energy exponent
    pub k: f64,
    /// particle-energy cutoff
    pub e0: f64,
    /// angular-momentum exponent
    #[serde(default)]
    pub l: f64,
    /// angular-momentum cutoff; positive values produce shells
    #[serde(default)]
    pub f0: f64,
}

impl AnsatzProfile {
    pub fn isotropic(c: f64, k: f64, e0: f64) -> Self {
        Self {
            c,
            k,
            e0,
            l: 0.0,
            f0: 0.0,
        }
    }

    pub fn shell(c: f64, k: f64, e0: f64, l: f64, f0: f64) -> Self {
        Self { c, k, e0, l, f0 }
    }

    pub fn is_isotropic(&self) -> bool {
        self.l == 0.0 && self.f0 == 0.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.c == 0.0
    }

    pub fn with_e0(self, e0: f64) -> Self {
        Self { e0, ..self }
    }

    /// Checks the parameter ranges required by `model`.
    pub fn validate(&self, model: Model) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidAnsatz(m));
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return bad(format!("amplitude must be nonnegative, got {}", self.c));
        }
        if !(self.k > -1.0) || !self.k.is_finite() {
            return bad(format!("energy exponent must exceed -1, got {}", self.k));
        }
        if !(self.l >= 0.0) || !(self.f0 >= 0.0) {
            return bad(format!(
                "angular parameters must be nonnegative (l={}, F0={})",
                self.l, self.f0
            ));
        }
        match model {
            Model::Vp | Model::Nv if !self.is_isotropic() => bad(format!(
                "{} model supports only the isotropic ansatz (l = F0 = 0)",
                model.tag()
            )),
            Model::Vp if !(self.e0 < 0.0) => {
                bad(format!("VP cutoff must be negative, got {}", self.e0))
            }
            Model::Nv | Model::Ev if !(self.e0 > 0.0 && self.e0 < 1.0) => bad(format!(
                "{} cutoff must lie in (0, 1), got {}",
                model.tag(),
                self.e0
            )),
            _ => Ok(()),
        }
    }
}

/// `ψ(E, F)`; zero whenever `E ≥ E0` or `F ≤ F0`.
pub fn eval_profile(a: &AnsatzProfile, e: f64, f: f64) -> f64 {
    if a.c == 0.0 || e >= a.e0 || f <= a.f0 {
        return 0.0;
    }
    let angular = if a.l == 0.0 {
        1.0
    } else {
        (f - a.f0).powf(a.l)
    };
    a.c * (a.e0 - e).powf(a.k) * angular
}

/// Local moments of the distribution at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MomentSet {
    /// energy density (kinetic part only for VP and NV)
    pub h: f64,
    /// radial pressure
    pub p_rad: f64,
    /// tangential pressure, summed over both tangential directions
    pub p_tan: f64,
    /// `∫ f / (particle energy)`: `∫ f dv/√(1+|v|²)` (EV), `∫ f dp/√(e^{2φ}+|p|²)` (NV); equals `rho` for VP
    pub n_aux: f64,
    /// `∫ f` over momentum space
    pub rho: f64,
}

impl MomentSet {
    pub fn scaled(self, s: f64) -> Self {
        Self {
            h: self.h * s,
            p_rad: self.p_rad * s,
            p_tan: self.p_tan * s,
            n_aux: self.n_aux * s,
            rho: self.rho * s,
        }
    }
}

/// Selector for [`brute_force_moment`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Moment {
    Energy,
    RadialPressure,
    TangentialPressure,
    Aux,
    Rho,
}

impl Moment {
    pub const ALL: [Moment; 5] = [
        Moment::Energy,
        Moment::RadialPressure,
        Moment::TangentialPressure,
        Moment::Aux,
        Moment::Rho,
    ];

    pub fn pick(self, m: &MomentSet) -> f64 {
        match self {
            Moment::Energy => m.h,
            Moment::RadialPressure => m.p_rad,
            Moment::TangentialPressure => m.p_tan,
            Moment::Aux => m.n_aux,
            Moment::Rho => m.rho,
        }
    }
}

fn check_exponent(a: &AnsatzProfile) -> Result<()> {
    if a.k > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAnsatz(format!(
            "energy exponent must exceed -1, got {}",
            a.k
        )))
    }
}

// ∫ f dp = 4π√2 c B(3/2, k+1) W^{k+3/2} with W = E0 - U (substituting s = |p|²/2).
fn vp_density_coefficient(k: f64) -> f64 {
    4.0 * PI * 2f64.sqrt() * beta(1.5, k + 1.0)
}

fn vp_kinetic_coefficient(k: f64) -> f64 {
    4.0 * PI * 2f64.sqrt() * beta(2.5, k + 1.0)
}

/// Mass density `ρ(U) = ∫ ψ(|p|²/2 + U) dp` for the isotropic VP polytrope.
pub fn vp_density(a: &AnsatzProfile, u: f64) -> Result<f64> {
    check_exponent(a)?;
    Ok(vp_density_of_depth(a, a.e0 - u))
}

/// Kinetic energy density `∫ |p|²/2 ψ dp`.
pub fn vp_kinetic_density(a: &AnsatzProfile, u: f64) -> Result<f64> {
    check_exponent(a)?;
    Ok(vp_kinetic_of_depth(a, a.e0 - u))
}

/// `ρ` as a function of the local depth `W = E0 - U`.
pub fn vp_density_of_depth(a: &AnsatzProfile, w: f64) -> f64 {
    if w <= 0.0 || a.c == 0.0 {
        return 0.0;
    }
    a.c * vp_density_coefficient(a.k) * w.powf(a.k + 1.5)
}

pub fn vp_kinetic_of_depth(a: &AnsatzProfile, w: f64) -> f64 {
    if w <= 0.0 || a.c == 0.0 {
        return 0.0;
    }
    a.c * vp_kinetic_coefficient(a.k) * w.powf(a.k + 2.5)
}

/// All VP moments; pressures follow from isotropy (`p_rad = 2 e_kin / 3`).
pub fn vp_moments(a: &AnsatzProfile, u: f64) -> Result<MomentSet> {
    let rho = vp_density(a, u)?;
    let h = vp_kinetic_density(a, u)?;
    let p_rad = 2.0 * h / 3.0;
    Ok(MomentSet {
        h,
        p_rad,
        p_tan: 2.0 * p_rad,
        n_aux: rho,
        rho,
    })
}

/// NV moments at field value `phi`, reduced to integrals over the particle
/// energy `ε = √(e^{2φ} + |p|²) ∈ [e^φ, E0]`.
pub fn nv_moments(a: &AnsatzProfile, phi: f64, quad_tol: f64) -> Result<MomentSet> {
    check_exponent(a)?;
    let lo = phi.exp();
    let hi = a.e0;
    if a.c == 0.0 || lo >= hi {
        return Ok(MomentSet::default());
    }
    let opts = QuadOptions::relative(quad_tol);
    let k = a.k;
    // (E0 - ε)^k and s = √(ε² - e^{2φ}) from cancellation-free endpoint distances
    let weight = |p: SplitPoint| p.from_b.max(0.0).powf(k);
    let s = |p: SplitPoint| (p.from_a * (p.x + lo)).max(0.0).sqrt();
    let integrate = |g: &dyn Fn(SplitPoint) -> f64, left: f64| -> Result<f64> {
        Ok(quad_endpoints(
            g,
            lo,
            hi,
            Endpoint::Power(left),
            Endpoint::Power(k),
            &opts,
        )?)
    };
    let pref = 4.0 * PI * a.c;
    let rho = pref * integrate(&|p| weight(p) * p.x * s(p), 0.5)?;
    let h = pref * integrate(&|p| weight(p) * p.x * p.x * s(p), 0.5)?;
    let n_aux = pref * integrate(&|p| weight(p) * s(p), 0.5)?;
    let p_rad = pref / 3.0 * integrate(&|p| weight(p) * s(p).powi(3), 1.5)?;
    Ok(MomentSet {
        h,
        p_rad,
        p_tan: 2.0 * p_rad,
        n_aux,
        rho,
    })
}

/// Source density `μ_N = ∫ ψ dp / √(e^{2φ} + |p|²)` alone, as needed by the
/// field equation.
pub(crate) fn nv_source_density(a: &AnsatzProfile, phi: f64, quad_tol: f64) -> Result<f64> {
    let lo = phi.exp();
    let hi = a.e0;
    if a.c == 0.0 || lo >= hi {
        return Ok(0.0);
    }
    let k = a.k;
    let g = |p: SplitPoint| p.from_b.max(0.0).powf(k) * (p.from_a * (p.x + lo)).max(0.0).sqrt();
    let opts = QuadOptions::relative(quad_tol);
    Ok(
        4.0 * PI
            * a.c
            * quad_endpoints(g, lo, hi, Endpoint::Power(0.5), Endpoint::Power(k), &opts)?,
    )
}

/// Which EV moments to evaluate; the structure equations only need `h` and `p_rad`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EvMomentMask {
    Source,
    All,
}

/// EV moments at metric value `mu` and radius `r`.
///
/// With `ε = √(1+|v|²)`, `s = |x∧v|²/r²` and `s0 = F0/r²`, the angular
/// integral is a Beta function, leaving one integral over
/// `ε ∈ [√(1+s0), E0 e^{-μ}]` with `D = ε² - 1 - s0`:
///
/// ```text
/// h     = 2π r^{2l} B(l+1, 1/2) ∫ Φ ε² D^{l+1/2}
/// ρ     = 2π r^{2l} B(l+1, 1/2) ∫ Φ ε  D^{l+1/2}
/// n_aux = 2π r^{2l} B(l+1, 1/2) ∫ Φ    D^{l+1/2}
/// p_rad = 2π r^{2l} B(l+1, 3/2) ∫ Φ    D^{l+3/2}
/// p_tan = 2π r^{2l} ∫ Φ [s0 B(l+1, 1/2) D^{l+1/2} + B(l+2, 1/2) D^{l+3/2}]
/// ```
/// where `Φ(ε) = c (E0 - e^μ ε)^k`.
pub fn ev_moments(a: &AnsatzProfile, mu: f64, r: f64, quad_tol: f64) -> Result<MomentSet> {
    ev_moments_masked(a, mu, r, quad_tol, EvMomentMask::All)
}

pub(crate) fn ev_moments_masked(
    a: &AnsatzProfile,
    mu: f64,
    r: f64,
    quad_tol: f64,
    mask: EvMomentMask,
) -> Result<MomentSet> {
    check_exponent(a)?;
    if !(r > 0.0) {
        return Err(Error::InvalidAnsatz(format!(
            "EV moments need r > 0, got {r}"
        )));
    }
    let eps_max = a.e0 * (-mu).exp();
    let s0 = a.f0 / (r * r);
    let eps_min = (1.0 + s0).sqrt();
    if a.c == 0.0 || eps_max <= eps_min {
        return Ok(MomentSet::default());
    }
    let l = a.l;
    let k = a.k;
    let emu = mu.exp();
    let amp = a.c * emu.powf(k);
    let phi = |p: SplitPoint| p.from_b.max(0.0).powf(k);
    let d = |p: SplitPoint| (p.from_a * (p.x + eps_min)).max(0.0);
    let opts = QuadOptions::relative(quad_tol);
    let integrate = |g: &dyn Fn(SplitPoint) -> f64, left: f64| -> Result<f64> {
        Ok(quad_endpoints(
            g,
            eps_min,
            eps_max,
            Endpoint::Power(left),
            Endpoint::Power(k),
            &opts,
        )?)
    };
    let pref = 2.0 * PI * r.powf(2.0 * l) * amp;
    let b_half = beta(l + 1.0, 0.5);
    let b_three_half = beta(l + 1.0, 1.5);
    let lo_half = l + 0.5;
    let lo_3half = l + 1.5;

    let h = pref * b_half * integrate(&|e| phi(e) * e.x * e.x * d(e).powf(lo_half), lo_half)?;
    let p_rad = pref * b_three_half * integrate(&|e| phi(e) * d(e).powf(lo_3half), lo_3half)?;
    if mask == EvMomentMask::Source {
        return Ok(MomentSet {
            h,
            p_rad,
            ..MomentSet::default()
        });
    }
    let n_aux_int = integrate(&|e| phi(e) * d(e).powf(lo_half), lo_half)?;
    let n_aux = pref * b_half * n_aux_int;
    let rho = pref * b_half * integrate(&|e| phi(e) * e.x * d(e).powf(lo_half), lo_half)?;
    let p_tan = if a.is_isotropic() {
        2.0 * p_rad
    } else {
        let b_tan = beta(l + 2.0, 0.5);
        pref * (s0 * b_half * n_aux_int
            + b_tan * integrate(&|e| phi(e) * d(e).powf(lo_3half), lo_3half)?)
    };
    Ok(MomentSet {
        h,
        p_rad,
        p_tan,
        n_aux,
        rho,
    })
}

/// Fixed composite Gauss-Legendre rule on `[lo, hi]`: split at the midpoint,
/// each half mapped by a power substitution matched to the endpoint exponent.
fn mapped_rule(lo: f64, hi: f64, left: f64, right: f64, n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let q_for = |alpha: f64| {
        if alpha < 0.0 {
            1.0 / (1.0 + alpha)
        } else if alpha.fract() == 0.0 {
            1.0
        } else {
            2.0
        }
    };
    let mid = 0.5 * (lo + hi);
    let mut nodes = Vec::with_capacity(2 * n);
    for (anchor, half, q, sign) in [
        (lo, mid - lo, q_for(left), 1.0),
        (hi, hi - mid, q_for(right), -1.0),
    ] {
        for (xi, wi) in x.iter().zip(&w) {
            let t = 0.5 * (xi + 1.0);
            let node = anchor + sign * half * t.powf(q);
            let jac = half * q * t.powf(q - 1.0) * 0.5;
            nodes.push((node, wi * jac));
        }
    }
    nodes
}

const BRUTE_RADIAL_NODES: usize = 96;
const BRUTE_POLAR_NODES: usize = 64;
const BRUTE_AZIMUTH_NODES: usize = 4;

/// Direct 3-D momentum-space quadrature of one moment (spherical coordinates
/// about `x̂`, Gauss-Legendre in `|p|` and `cos θ`, trapezoid in azimuth).
/// `field` is `U` (VP), `φ` (NV) or `μ` (EV). Slow; used as an oracle.
pub fn brute_force_moment(
    a: &AnsatzProfile,
    field: f64,
    r: f64,
    which: Moment,
    model: Model,
) -> f64 {
    if a.c == 0.0 {
        return 0.0;
    }
    // generic spatial direction so no alignment with the coordinate axes is assumed
    let xhat = [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
    let e1 = normalize(cross(xhat, [0.0, 0.0, 1.0]));
    let e2 = cross(xhat, e1);
    let x = [r * xhat[0], r * xhat[1], r * xhat[2]];

    let (p_lo, p_hi) = match model {
        Model::Vp => (0.0, (2.0 * (a.e0 - field)).max(0.0).sqrt()),
        Model::Nv => (0.0, (a.e0 * a.e0 - (2.0 * field).exp()).max(0.0).sqrt()),
        Model::Ev => {
            let eps_max = a.e0 * (-field).exp();
            ((a.f0).sqrt() / r, (eps_max * eps_max - 1.0).max(0.0).sqrt())
        }
    };
    if p_hi <= p_lo {
        return 0.0;
    }
    let p_left = if p_lo > 0.0 { a.l + 0.5 } else { 0.0 };
    let p_rule = mapped_rule(p_lo, p_hi, p_left, a.k, BRUTE_RADIAL_NODES);
    let d_az = 2.0 * PI / BRUTE_AZIMUTH_NODES as f64;

    let mut total = 0.0;
    for &(p, wp) in &p_rule {
        let w_max = if a.f0 > 0.0 {
            (1.0 - a.f0 / (r * r * p * p)).max(0.0).sqrt()
        } else {
            1.0
        };
        if w_max == 0.0 {
            continue;
        }
        let ang_alpha = if a.f0 > 0.0 || a.l > 0.0 {
            a.l.max(0.5)
        } else {
            0.0
        };
        let w_rule = mapped_rule(-w_max, w_max, ang_alpha, ang_alpha, BRUTE_POLAR_NODES);
        let mut shell = 0.0;
        for &(cos_t, ww) in &w_rule {
            let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
            for j in 0..BRUTE_AZIMUTH_NODES {
                let az = j as f64 * d_az;
                let (sa, ca) = az.sin_cos();
                let mut v = [0.0; 3];
                for d in 0..3 {
                    v[d] = p * (sin_t * (ca * e1[d] + sa * e2[d]) + cos_t * xhat[d]);
                }
                let v2 = dot(v, v);
                let xv = dot(x, v) / r;
                let xw = cross(x, v);
                let ang = dot(xw, xw);
                let tan = ang / (r * r);
                let (energy, weight) = match model {
                    Model::Vp => {
                        let e = 0.5 * v2 + field;
                        let w = match which {
                            Moment::Energy => 0.5 * v2,
                            Moment::RadialPressure => xv * xv,
                            Moment::TangentialPressure => tan,
                            Moment::Aux | Moment::Rho => 1.0,
                        };
                        (e, w)
                    }
                    Model::Nv => {
                        let eps = ((2.0 * field).exp() + v2).sqrt();
                        let w = match which {
                            Moment::Energy => eps,
                            Moment::RadialPressure => xv * xv / eps,
                            Moment::TangentialPressure => tan / eps,
                            Moment::Aux => 1.0 / eps,
                            Moment::Rho => 1.0,
                        };
                        (eps, w)
                    }
                    Model::Ev => {
                        let eps = (1.0 + v2).sqrt();
                        let w = match which {
                            Moment::Energy => eps,
                            Moment::RadialPressure => xv * xv / eps,
                            Moment::TangentialPressure => tan / eps,
                            Moment::Aux => 1.0 / eps,
                            Moment::Rho => 1.0,
                        };
                        (field.exp() * eps, w)
                    }
                };
                let f_angular = if model == Model::Ev {
                    ang
                } else {
                    f64::INFINITY
                };
                let f = eval_profile(a, energy, f_angular);
                shell += ww * d_az * weight * f;
            }
        }
        total += wp * p * p * shell;
    }
    total
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn profile_cutoffs() {
        let a = AnsatzProfile::isotropic(1.0, 1.0, 0.9);
        assert_eq!(eval_profile(&a, 0.95, 1.0), 0.0);
        assert_eq!(eval_profile(&a, 0.9, 1.0), 0.0);
        assert!((eval_profile(&a, 0.8, 1.0) - 0.1).abs() < 1e-15);
        let vac = AnsatzProfile::isotropic(0.0, 1.0, 0.9);
        assert_eq!(eval_profile(&vac, 0.1, 1.0), 0.0);
        let sh = AnsatzProfile::shell(1.0, 1.0, 0.9, 1.0, 0.5);
        assert_eq!(eval_profile(&sh, 0.5, 0.4), 0.0);
        assert!((eval_profile(&sh, 0.5, 1.5) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn vp_ball_volume() {
        // k = 0, c = 1, E0 - U = 1/2: f = 1 on the unit momentum ball
        let a = AnsatzProfile::isotropic(1.0, 0.0, -0.5);
        let rho = vp_density(&a, -1.0).unwrap();
        assert!(rel(rho, 4.0 * PI / 3.0) < 1e-14, "{rho}");
        let bf = brute_force_moment(&a, -1.0, 1.0, Moment::Rho, Model::Vp);
        assert!(rel(bf, 4.0 * PI / 3.0) < 1e-10, "{bf}");
        assert_eq!(vp_density(&a, -0.4).unwrap(), 0.0);
    }

    #[test]
    fn vp_rejects_bad_exponent() {
        let a = AnsatzProfile::isotropic(1.0, -1.0, -0.5);
        assert!(vp_density(&a, -1.0).is_err());
    }

    #[test]
    fn nv_empty_range() {
        let a = AnsatzProfile::isotropic(1.0, 1.0, 0.9);
        let m = nv_moments(&a, 0.9f64.ln() + 1e-3, 1e-12).unwrap();
        assert_eq!(m, MomentSet::default());
        let vac = AnsatzProfile::isotropic(0.0, 1.0, 0.9);
        assert_eq!(nv_moments(&vac, -0.2, 1e-12).unwrap(), MomentSet::default());
    }

    #[test]
    fn ev_identities() {
        let a = AnsatzProfile::isotropic(1.0, 1.0, 0.9);
        let m = ev_moments(&a, -0.3, 1.7, 1e-13).unwrap();
        assert!(rel(m.p_tan, 2.0 * m.p_rad) < 1e-14);
        assert!(rel(m.p_rad + m.p_tan, m.h - m.n_aux) < 1e-10);
        let sh = AnsatzProfile::shell(1.0, 0.5, 0.9, 1.0, 0.2);
        let m = ev_moments(&sh, -0.4, 1.3, 1e-13).unwrap();
        assert!(m.h > 0.0);
        assert!(rel(m.p_rad + m.p_tan, m.h - m.n_aux) < 1e-10);
        assert!(m.p_rad <= m.h && m.p_tan <= 2.0 * m.h);
        // no matter where e^μ ≥ E0
        assert_eq!(
            ev_moments(&a, 0.0, 1.0, 1e-12).unwrap(),
            MomentSet::default()
        );
    }

    #[test]
    fn nv_matches_brute_force() {
        let a = AnsatzProfile::isotropic(1.0, 1.0, 0.9);
        let m = nv_moments(&a, -0.2, 1e-13).unwrap();
        for which in Moment::ALL {
            let bf = brute_force_moment(&a, -0.2, 0.7, which, Model::Nv);
            assert!(
                rel(which.pick(&m), bf) < 1e-6,
                "{which:?}: {} vs {bf}",
                which.pick(&m)
            );
        }
    }

    #[test]
    fn ev_shell_matches_brute_force() {
        let a = AnsatzProfile::shell(1.0, 1.0, 0.95, 0.5, 0.3);
        let m = ev_moments(&a, -0.5, 1.2, 1e-13).unwrap();
        for which in Moment::ALL {
            let bf = brute_force_moment(&a, -0.5, 1.2, which, Model::Ev);
            assert!(
                rel(which.pick(&m), bf) < 1e-6,
                "{which:?}: {} vs {bf}",
                which.pick(&m)
            );
        }
    }

    #[test]
    fn validation_ranges() {
        assert!(AnsatzProfile::isotropic(1.0, 1.0, -0.1)
            .validate(Model::Vp)
            .is_ok());
        assert!(AnsatzProfile::isotropic(1.0, 1.0, 0.1)
            .validate(Model::Vp)
            .is_err());
        assert!(AnsatzProfile::isotropic(1.0, 1.0, 1.1)
            .validate(Model::Ev)
            .is_err());
        assert!(AnsatzProfile::shell(1.0, 1.0, 0.9, 0.0, 0.1)
            .validate(Model::Nv)
            .is_err());
        assert!(AnsatzProfile::shell(1.0, 1.0, 0.9, 0.0, 0.1)
            .validate(Model::Ev)
            .is_ok());
        assert!(AnsatzProfile::isotropic(-1.0, 1.0, 0.9)
            .validate(Model::Ev)
            .is_err());
    }
}
