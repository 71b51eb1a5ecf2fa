//! Bracketed scalar root finding: a secant step when it helps, bisection
//! when it does not. The bracket never widens, so convergence is guaranteed.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error(
        "no sign change over [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
    )]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root not bracketed to tolerance after {max_iterations} iterations (best |f| = {best_residual})")]
    MaxIterations {
        max_iterations: usize,
        best_residual: f64,
    },
}

/// Finds `x` in `[lo, hi]` with `|f(x)| <= f_tol`, given a sign change over
/// the bracket. Tries the secant through the bracket endpoints and falls
/// back to the midpoint whenever the secant point leaves the bracket
/// interior; either way the bracket shrinks every iteration.
pub fn find_root_bracketed(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    f_tol: f64,
    max_iterations: usize,
) -> Result<f64, RootError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..max_iterations {
        if best.1.abs() <= f_tol {
            return Ok(best.0);
        }
        // Secant proposal, replaced by the midpoint if it falls outside the
        // open bracket (or is not finite, e.g. fa == fb after rounding).
        let mid = 0.5 * (a + b);
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if secant.is_finite() && secant > a.min(b) && secant < a.max(b) {
            secant
        } else {
            mid
        };
        if x == a || x == b {
            // Bracket has collapsed to adjacent floats; nothing better exists.
            return Ok(best.0);
        }
        let fx = f(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    if best.1.abs() <= f_tol {
        Ok(best.0)
    } else {
        Err(RootError::MaxIterations {
            max_iterations,
            best_residual: best.1.abs(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let x = find_root_bracketed(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() < 1e-12);
        let x = find_root_bracketed(|x| x.cos() - x, 0.0, 1.0, 1e-14, 200).unwrap();
        assert!((x - 0.7390851332151607).abs() < 1e-12);
    }

    #[test]
    fn endpoint_roots_are_returned_directly() {
        let x = find_root_bracketed(|x| x, 0.0, 1.0, 1e-14, 10).unwrap();
        assert_eq!(x, 0.0);
    }

    #[test]
    fn missing_sign_change_reports_endpoint_values() {
        match find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 50) {
            Err(RootError::NoSignChange { f_lo, f_hi, .. }) => {
                assert_eq!(f_lo, 2.0);
                assert_eq!(f_hi, 2.0);
            }
            other => panic!("expected NoSignChange, got {other:?}"),
        }
    }

    #[test]
    fn survives_flat_then_steep_functions() {
        // Nearly flat left of the root, steep right of it; secant steps
        // would overshoot without the bracket guard.
        let f = |x: f64| if x < 1.0 { -1e-8 * (1.0 - x) } else { (x - 1.0).powi(3) + 0.0 };
        let x = find_root_bracketed(f, 0.0, 2.0, 1e-13, 500).unwrap();
        assert!((x - 1.0).abs() < 1e-3);
        assert!(f(x).abs() <= 1e-13);
    }
}
