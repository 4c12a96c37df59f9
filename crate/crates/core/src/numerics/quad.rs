//! Adaptive Gauss-Kronrod quadrature (21-point Kronrod extension of the
//! 10-point Gauss rule) with optional power-law endpoint substitutions, and
//! Gauss-Legendre rules for fixed tensor-product quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::NumericsError;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_236_710,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Convergence controls for [`quad_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadOptions {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol,
            max_subdivisions: 2000,
        }
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

/// Declared integrable endpoint behaviour `(x - a)^alpha` or `(b - x)^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    Power(f64),
}

impl Endpoint {
    /// Exponent `q` of the substitution `x - a = L t^q` that smooths the endpoint.
    fn substitution_power(self) -> f64 {
        match self {
            Endpoint::Regular => 1.0,
            Endpoint::Power(alpha) if alpha < 0.0 => 1.0 / (1.0 + alpha),
            Endpoint::Power(alpha) if alpha.fract() == 0.0 => 1.0,
            Endpoint::Power(_) => 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    result: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = 0.0;
    let mut resk = WGK[10] * fc;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let eps = f64::EPSILON;
    if resabs > f64::MIN_POSITIVE / (50.0 * eps) {
        error = error.max(50.0 * eps * resabs);
    }
    Panel {
        a,
        b,
        result,
        error,
    }
}

/// Adaptive quadrature of `f` on `[a, b]` with explicit controls.
pub fn quad_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<f64, NumericsError> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "non-finite limits [{a}, {b}]"
        )));
    }
    let rel = opts.rel_tol.max(50.0 * f64::EPSILON);
    let first = gk21(&f, a, b);
    let mut total = first.result;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut n = 1;
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(NumericsError::QuadNonConvergence {
                a,
                b,
                err: total_err,
            });
        }
        if total_err <= opts.abs_tol.max(rel * total.abs()) {
            // re-sum to avoid drift from repeated subtraction
            return Ok(heap.iter().map(|p| p.result).sum());
        }
        if n >= opts.max_subdivisions {
            return Err(NumericsError::QuadNonConvergence {
                a,
                b,
                err: total_err,
            });
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be bisected; accept what we have
            heap.push(worst);
            let sum: f64 = heap.iter().map(|p| p.result).sum();
            let err: f64 = heap.iter().map(|p| p.error).sum();
            if err <= 1e3 * opts.abs_tol.max(rel * sum.abs()) {
                return Ok(sum);
            }
            return Err(NumericsError::QuadNonConvergence { a, b, err });
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        total += left.result + right.result - worst.result;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        n += 1;
    }
}

/// Adaptive estimate of `∫_a^b f` within `tol` (absolute or relative, whichever is looser).
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError> {
    quad_with(
        f,
        a,
        b,
        &QuadOptions {
            abs_tol: tol,
            rel_tol: tol,
            ..QuadOptions::default()
        },
    )
}

/// Evaluation point handed to [`quad_endpoints`] integrands: the abscissa and
/// its distances to both interval ends, the near one computed without
/// cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
}

/// Quadrature with declared endpoint behaviour. The interval is split at its
/// midpoint and each half is mapped by `x = a + (m - a) t^q` (resp. from `b`)
/// so that the declared power law becomes smooth in `t`.
pub fn quad_endpoints<F: Fn(SplitPoint) -> f64>(
    f: F,
    a: f64,
    b: f64,
    left: Endpoint,
    right: Endpoint,
    opts: &QuadOptions,
) -> Result<f64, NumericsError> {
    if a == b {
        return Ok(0.0);
    }
    let width = b - a;
    let m = 0.5 * (a + b);
    let ql = left.substitution_power();
    let qr = right.substitution_power();
    let lw = m - a;
    let rw = b - m;
    let lhs = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let d = lw * t.powf(ql);
        let p = SplitPoint {
            x: a + d,
            from_a: d,
            from_b: width - d,
        };
        f(p) * lw * ql * t.powf(ql - 1.0)
    };
    let rhs = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let d = rw * t.powf(qr);
        let p = SplitPoint {
            x: b - d,
            from_a: width - d,
            from_b: d,
        };
        f(p) * rw * qr * t.powf(qr - 1.0)
    };
    let half_opts = QuadOptions {
        abs_tol: 0.5 * opts.abs_tol,
        ..*opts
    };
    let il = quad_with(lhs, 0.0, 1.0, &half_opts)?;
    let ir = quad_with(rhs, 0.0, 1.0, &half_opts)?;
    Ok(il + ir)
}

/// `∫_a^∞ f` via `r = a / t`, for integrands decaying at least like `r^{-2}`.
pub fn quad_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    opts: &QuadOptions,
) -> Result<f64, NumericsError> {
    if !(a > 0.0) {
        return Err(NumericsError::InvalidInput(format!(
            "semi-infinite start must be positive, got {a}"
        )));
    }
    quad_with(
        |t| {
            if t <= 0.0 {
                0.0
            } else {
                f(a / t) * a / (t * t)
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = z;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
