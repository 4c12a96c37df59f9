use crate::error::NumericsError;

use super::ode::DenseSolution;
use super::quad::{gauss_legendre, quad_endpoints, quad_with, Endpoint, QuadOptions};

/// `∫_a^b g(r, y(r)) dr` along a dense solution, one adaptive rule per
/// accepted step so the piecewise interpolant never straddles a panel.
/// `ends` declares the behaviour of `g` at `a` and `b` (typically a vanishing
/// matter density `(b - r)^n` at a surface).
pub fn quad_dense<G: Fn(f64, &[f64]) -> f64>(
    sol: &DenseSolution,
    g: G,
    a: f64,
    b: f64,
    ends: (Endpoint, Endpoint),
    opts: &QuadOptions,
) -> Result<f64, NumericsError> {
    if !(b > a) {
        return Ok(0.0);
    }
    let mut cuts: Vec<f64> = sol
        .breakpoints()
        .into_iter()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.insert(0, a);
    cuts.push(b);
    // drop slivers that would only produce round-off
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * b.abs());
    // a crude 8-point estimate of the whole integral turns the relative target
    // into an absolute floor per piece, so pieces that contribute nothing
    // (e.g. next to a vanishing density) are not refined to their own relative
    // accuracy
    let (x, w) = gauss_legendre(8);
    let mut scale = 0.0;
    for seg in cuts.windows(2) {
        let (c, h) = (0.5 * (seg[0] + seg[1]), 0.5 * (seg[1] - seg[0]));
        for (xi, wi) in x.iter().zip(&w) {
            let r = c + h * xi;
            scale += (wi * h * g(r, &sol.eval(r))).abs();
        }
    }
    let pieces = (cuts.len() - 1) as f64;
    let opts = &QuadOptions {
        abs_tol: opts.abs_tol.max(opts.rel_tol * scale / pieces),
        ..*opts
    };
    let mut total = 0.0;
    let last = cuts.len() - 2;
    for (i, w) in cuts.windows(2).enumerate() {
        let left = if i == 0 { ends.0 } else { Endpoint::Regular };
        let right = if i == last { ends.1 } else { Endpoint::Regular };
        let piece = if left != Endpoint::Regular || right != Endpoint::Regular {
            quad_endpoints(
                |p| {
                    let y = sol.eval(p.x);
                    g(p.x, &y)
                },
                w[0],
                w[1],
                left,
                right,
                opts,
            )?
        } else {
            quad_with(
                |r| {
                    let y = sol.eval(r);
                    g(r, &y)
                },
                w[0],
                w[1],
                opts,
            )?
        };
        total += piece;
    }
    Ok(total)
}
