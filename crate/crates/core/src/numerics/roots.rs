use crate::error::NumericsError;

/// Brent's method on a sign-changing bracket. Returns `x` with bracket width
/// at most `tol` (plus a few ulps of `|x|`).
pub fn find_root_bracketed<G: FnMut(f64) -> f64>(
    mut g: G,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    let (mut a, mut b) = (a, b);
    let mut fa = g(a);
    let mut fb = g(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(NumericsError::NoSignChange {
            a,
            b,
            ga: fa,
            gb: fb,
        });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b);
        if !fb.is_finite() {
            return Err(NumericsError::InvalidInput(format!(
                "root function not finite at {b}"
            )));
        }
    }
    Ok(b)
}

/// Evaluates `g` on `points` (in order) and returns the first adjacent pair
/// with a sign change, together with the function values there.
pub fn scan_bracket<G: FnMut(f64) -> Option<f64>>(
    mut g: G,
    points: &[f64],
) -> Option<((f64, f64), (f64, f64))> {
    let mut prev: Option<(f64, f64)> = None;
    for &x in points {
        let Some(v) = g(x) else { continue };
        if let Some((px, pv)) = prev {
            if pv == 0.0 {
                return Some(((px, px), (pv, pv)));
            }
            if pv.signum() != v.signum() || v == 0.0 {
                return Some(((px, x), (pv, v)));
            }
        }
        prev = Some((x, v));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_root() {
        let x = find_root_bracketed(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((x - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cosine_root() {
        let x = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-13).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-10),
            Err(NumericsError::NoSignChange { .. })
        ));
    }

    #[test]
    fn bracket_scan_finds_first_change() {
        let pts: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ((a, b), _) = scan_bracket(|x| Some(x - 4.5), &pts).unwrap();
        assert_eq!((a, b), (4.0, 5.0));
    }
}
