//! Dormand-Prince 5(4) integrator with continuous extension and stop events.

use super::grid::RadialGrid;
use super::roots::find_root_bracketed;
use super::Tolerances;
use crate::error::NumericsError;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Continuous extension: y(r0 + θh) = y0 + h Σ_i K_i Σ_j P[i][j] θ^{j+1}.
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

/// Event function: the integration stops where it changes from positive to non-positive.
pub type EventFn<'a> = &'a dyn Fn(f64, &[f64]) -> f64;
/// Guard predicate: returning `false` aborts the integration.
pub type GuardFn<'a> = &'a dyn Fn(f64, &[f64]) -> bool;

#[derive(Clone, Copy)]
pub struct OdeOptions<'a> {
    pub tol: Tolerances,
    pub max_step: Option<f64>,
    pub stop: Option<EventFn<'a>>,
    pub guard: Option<GuardFn<'a>>,
    /// Fail with [`NumericsError::EventNotBracketed`] if `stop` never fires.
    pub require_event: bool,
}

impl<'a> OdeOptions<'a> {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            max_step: None,
            stop: None,
            guard: None,
            require_event: false,
        }
    }
}

#[derive(Debug, Clone)]
struct Step {
    r0: f64,
    h: f64,
    y0: Vec<f64>,
    k: [Vec<f64>; 7],
}

impl Step {
    fn eval(&self, r: f64, out: &mut [f64]) {
        let theta = ((r - self.r0) / self.h).clamp(0.0, 1.0);
        let powers = [theta, theta * theta, theta.powi(3), theta.powi(4)];
        let mut q = [0.0; 7];
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = P[i].iter().zip(&powers).map(|(p, t)| p * t).sum();
        }
        for (d, o) in out.iter_mut().enumerate() {
            let acc: f64 = self.k.iter().zip(&q).map(|(k, qi)| k[d] * qi).sum();
            *o = self.y0[d] + self.h * acc;
        }
    }

    fn r1(&self) -> f64 {
        self.r0 + self.h
    }
}

/// Piecewise-polynomial solution covering `[start, end]` of one integration.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    steps: Vec<Step>,
    start: f64,
    end: f64,
    y_start: Vec<f64>,
    y_end: Vec<f64>,
    event_radius: Option<f64>,
    rhs_evals: usize,
}

impl DenseSolution {
    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        self.end
    }

    pub fn y_end(&self) -> &[f64] {
        &self.y_end
    }

    pub fn y_start(&self) -> &[f64] {
        &self.y_start
    }

    pub fn event_radius(&self) -> Option<f64> {
        self.event_radius
    }

    pub fn rhs_evals(&self) -> usize {
        self.rhs_evals
    }

    pub fn dim(&self) -> usize {
        self.y_start.len()
    }

    /// Accepted step boundaries, including start and end.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.steps.len() + 1);
        v.push(self.start);
        v.extend(self.steps.iter().map(Step::r1));
        v
    }

    /// State at `r`, clamped to the covered interval.
    pub fn eval(&self, r: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(r, &mut out);
        out
    }

    pub fn eval_into(&self, r: f64, out: &mut [f64]) {
        if self.steps.is_empty() || r <= self.start {
            out.copy_from_slice(&self.y_start);
            return;
        }
        if r >= self.end {
            out.copy_from_slice(&self.y_end);
            return;
        }
        let idx = self.steps.partition_point(|s| s.r1() < r);
        self.steps[idx.min(self.steps.len() - 1)].eval(r, out);
    }

    /// Samples the dense solution at every grid node inside the covered interval.
    pub fn sample(&self, grid: &RadialGrid) -> OdeSolution {
        let states = grid
            .nodes()
            .iter()
            .take_while(|&&r| r <= self.end * (1.0 + 1e-14))
            .map(|&r| self.eval(r))
            .collect();
        OdeSolution {
            grid: grid.clone(),
            states,
            event_radius: self.event_radius,
        }
    }
}

/// Solution values at the nodes of a radial grid.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub grid: RadialGrid,
    /// One state per node up to the event radius (or domain end).
    pub states: Vec<Vec<f64>>,
    pub event_radius: Option<f64>,
}

fn error_norm(y0: &[f64], y1: &[f64], err: &[f64], tol: &Tolerances) -> f64 {
    let mut acc = 0.0;
    for i in 0..y0.len() {
        let sc = tol.ode_abs + tol.ode_rel * y0[i].abs().max(y1[i].abs());
        let e = err[i] / sc;
        acc += e * e;
    }
    (acc / y0.len() as f64).sqrt()
}

struct Stepper<'f, F> {
    rhs: &'f F,
    dim: usize,
    evals: usize,
}

impl<F: Fn(f64, &[f64], &mut [f64])> Stepper<'_, F> {
    /// One Dormand-Prince step; `k0` is the derivative at `(r, y)`.
    fn step(
        &mut self,
        r: f64,
        y: &[f64],
        k0: &[f64],
        h: f64,
    ) -> ([Vec<f64>; 7], Vec<f64>, Vec<f64>) {
        let n = self.dim;
        let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
        k[0].copy_from_slice(k0);
        let mut tmp = vec![0.0; n];
        for s in 1..7 {
            for d in 0..n {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][d];
                }
                tmp[d] = y[d] + h * acc;
            }
            let (done, rest) = k.split_at_mut(s);
            let _ = done;
            (self.rhs)(r + C[s] * h, &tmp, &mut rest[0]);
            self.evals += 1;
        }
        let mut y1 = vec![0.0; n];
        let mut err = vec![0.0; n];
        for d in 0..n {
            let mut acc = 0.0;
            let mut eacc = 0.0;
            for s in 0..7 {
                acc += B[s] * k[s][d];
                eacc += E[s] * k[s][d];
            }
            y1[d] = y[d] + h * acc;
            err[d] = h * eacc;
        }
        (k, y1, err)
    }
}

/// Adaptive integration of `y' = rhs(r, y)` over `domain` with an optional stop event.
pub fn integrate_ode<F>(
    rhs: F,
    y0: &[f64],
    domain: (f64, f64),
    tol: &Tolerances,
    stop: Option<EventFn<'_>>,
) -> Result<DenseSolution, NumericsError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let mut opts = OdeOptions::new(*tol);
    opts.stop = stop;
    integrate_ode_with(rhs, y0, domain, &opts)
}

pub fn integrate_ode_with<F>(
    rhs: F,
    y0: &[f64],
    domain: (f64, f64),
    opts: &OdeOptions<'_>,
) -> Result<DenseSolution, NumericsError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let (a, b) = domain;
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidInput(format!(
            "degenerate domain [{a}, {b}]"
        )));
    }
    if y0.is_empty() {
        return Err(NumericsError::InvalidInput("empty state".into()));
    }
    let tol = opts.tol;
    let n = y0.len();
    let max_step = opts.max_step.unwrap_or(b - a).min(b - a);
    let mut stepper = Stepper {
        rhs: &rhs,
        dim: n,
        evals: 0,
    };

    let mut r = a;
    let mut y = y0.to_vec();
    let mut f0 = vec![0.0; n];
    rhs(r, &y, &mut f0);
    stepper.evals += 1;
    if f0.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "non-finite derivative at r = {a}"
        )));
    }

    // initial step (Hairer, Norsett & Wanner II.4)
    let scale: Vec<f64> = y
        .iter()
        .map(|v| tol.ode_abs + tol.ode_rel * v.abs())
        .collect();
    let rms = |v: &[f64]| {
        (v.iter()
            .zip(&scale)
            .map(|(x, s)| (x / s).powi(2))
            .sum::<f64>()
            / n as f64)
            .sqrt()
    };
    let d0 = rms(&y);
    let d1 = rms(&f0);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h = h.min(max_step);
    {
        let y1: Vec<f64> = y.iter().zip(&f0).map(|(y, f)| y + h * f).collect();
        let mut f1 = vec![0.0; n];
        rhs(r + h, &y1, &mut f1);
        stepper.evals += 1;
        let diff: Vec<f64> = f1.iter().zip(&f0).map(|(a, b)| (a - b) / h).collect();
        let d2 = rms(&diff);
        let h1 = if d1.max(d2) <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        if h1.is_finite() {
            h = (100.0 * h).min(h1).min(max_step);
        }
    }

    let mut steps: Vec<Step> = Vec::new();
    let mut g_prev = opts.stop.map(|g| g(r, &y));
    let mut event_radius = None;
    let h_min_rel = 16.0 * f64::EPSILON;

    while r < b {
        if r + h > b {
            h = b - r;
        }
        if h <= h_min_rel * r.abs().max(1e-300) {
            return Err(NumericsError::StepUnderflow { r, h });
        }
        let (k, y1, err) = stepper.step(r, &y, &f0, h);
        let en = error_norm(&y, &y1, &err, &tol);
        let finite = en.is_finite()
            && y1.iter().all(|v| v.is_finite())
            && k[6].iter().all(|v| v.is_finite());
        if !finite {
            h *= 0.25;
            continue;
        }
        if en > 1.0 {
            let fac = (0.9 * en.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
            continue;
        }
        let r1 = if b - (r + h) <= h_min_rel * b.abs() {
            b
        } else {
            r + h
        };
        let step = Step {
            r0: r,
            h: r1 - r,
            y0: y.clone(),
            k,
        };
        if let Some(guard) = opts.guard {
            if !guard(r1, &y1) {
                return Err(NumericsError::GuardTripped { r: r1 });
            }
        }
        if let (Some(g), Some(gp)) = (opts.stop, g_prev) {
            let g1 = g(r1, &y1);
            if gp > 0.0 && g1 <= 0.0 {
                let mut buf = vec![0.0; n];
                let re = find_root_bracketed(
                    |x| {
                        step.eval(x, &mut buf);
                        g(x, &buf)
                    },
                    r,
                    r1,
                    tol.root_tol,
                )?;
                // redo the truncated step exactly so the final state is a full RK step
                let he = re - r;
                let (ye, ke) = if he > 0.0 {
                    let (k, ye, _) = stepper.step(r, &y, &f0, he);
                    (ye, Some(k))
                } else {
                    (y.clone(), None)
                };
                let ye = match ke {
                    Some(k)
                        if ye.iter().all(|v| v.is_finite())
                            && k[6].iter().all(|v| v.is_finite()) =>
                    {
                        steps.push(Step {
                            r0: r,
                            h: he,
                            y0: y.clone(),
                            k,
                        });
                        ye
                    }
                    // a stage of the truncated step failed; interpolate the accepted one
                    Some(_) => {
                        step.eval(re, &mut buf);
                        steps.push(step);
                        buf
                    }
                    None => ye,
                };
                event_radius = Some(re);
                r = re;
                y = ye;
                break;
            }
            g_prev = Some(g1);
        }
        let f_new = step.k[6].clone();
        steps.push(step);
        r = r1;
        y = y1;
        f0 = f_new;
        let fac = if en == 0.0 {
            5.0
        } else {
            (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * fac).min(max_step);
    }

    if opts.require_event && event_radius.is_none() {
        return Err(NumericsError::EventNotBracketed { a, b });
    }
    Ok(DenseSolution {
        steps,
        start: a,
        end: r,
        y_start: y0.to_vec(),
        y_end: y,
        event_radius,
        rhs_evals: stepper.evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(rel: f64) -> Tolerances {
        Tolerances {
            ode_rel: rel,
            ode_abs: rel * 1e-2,
            quad_tol: 1e-12,
            root_tol: 1e-13,
        }
    }

    #[test]
    fn exponential() {
        let sol =
            integrate_ode(|_, y, f| f[0] = y[0], &[1.0], (0.0, 1.0), &tol(1e-10), None).unwrap();
        assert!((sol.y_end()[0] - std::f64::consts::E).abs() < 1e-8);
        // dense output accuracy between steps
        for i in 0..=20 {
            let r = i as f64 / 20.0;
            assert!((sol.eval(r)[0] - r.exp()).abs() < 1e-8, "r={r}");
        }
    }

    #[test]
    fn constant_solution() {
        let sol =
            integrate_ode(|_, _, f| f[0] = 0.0, &[3.5], (0.0, 10.0), &tol(1e-8), None).unwrap();
        assert_eq!(sol.y_end()[0], 3.5);
        assert_eq!(sol.eval(4.2)[0], 3.5);
    }

    #[test]
    fn event_on_cosine() {
        // y'' = -y, y(0)=1, y'(0)=0 -> first zero of cos at π/2
        let stop = |_: f64, y: &[f64]| y[0];
        let sol = integrate_ode(
            |_, y, f| {
                f[0] = y[1];
                f[1] = -y[0];
            },
            &[1.0, 0.0],
            (0.0, 10.0),
            &tol(1e-10),
            Some(&stop),
        )
        .unwrap();
        let re = sol.event_radius().unwrap();
        assert!((re - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(sol.y_end()[0].abs() < 1e-9);
    }

    #[test]
    fn required_event_missing() {
        let stop = |_: f64, y: &[f64]| y[0];
        let mut o = OdeOptions::new(tol(1e-8));
        o.stop = Some(&stop);
        o.require_event = true;
        let r = integrate_ode_with(|_, _, f| f[0] = 1.0, &[1.0], (0.0, 1.0), &o);
        assert!(matches!(r, Err(NumericsError::EventNotBracketed { .. })));
    }

    #[test]
    fn guard_aborts() {
        let guard = |r: f64, _: &[f64]| r < 0.5;
        let mut o = OdeOptions::new(tol(1e-8));
        o.guard = Some(&guard);
        o.max_step = Some(0.1);
        let r = integrate_ode_with(|_, _, f| f[0] = 1.0, &[0.0], (0.0, 1.0), &o);
        assert!(matches!(r, Err(NumericsError::GuardTripped { .. })));
    }

    #[test]
    fn blowup_underflows() {
        // y' = y^2, y(0) = 1 blows up at r = 1
        let r = integrate_ode(
            |_, y, f| f[0] = y[0] * y[0],
            &[1.0],
            (0.0, 2.0),
            &tol(1e-8),
            None,
        );
        assert!(
            matches!(r, Err(NumericsError::StepUnderflow { .. })),
            "{r:?}"
        );
    }

    #[test]
    fn sampling_stops_at_event() {
        let stop = |r: f64, _: &[f64]| 0.55 - r;
        let sol = integrate_ode(
            |_, _, f| f[0] = 1.0,
            &[0.0],
            (0.0, 1.0),
            &tol(1e-8),
            Some(&stop),
        )
        .unwrap();
        let grid = RadialGrid::uniform(1e-3, 0.1, 1.0).unwrap();
        let s = sol.sample(&grid);
        assert_eq!(s.states.len(), 6);
        assert!((s.event_radius.unwrap() - 0.55).abs() < 1e-12);
    }
}
