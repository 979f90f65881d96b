//! Shared oracles for the integration suites. These stay independent of
//! the library's closed forms: quadrature instead of integral formulas.

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn quad<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, tol / 2.0, depth - 1) + rec(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    let whole = simpson(&f, a, b);
    rec(&f, a, b, whole, tol, 40)
}

pub fn rel_err(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}
