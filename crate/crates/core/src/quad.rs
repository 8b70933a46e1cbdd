//! Numerical quadrature: adaptive Simpson integration, semi-infinite
//! integrals of decaying functions, and oscillatory sine integrals handled by
//! splitting at the sine zeros with alternating-series acceleration.

use alloc::vec::Vec;

use crate::fmath;

/// Adaptive Simpson integration of `f` over [a, b] to absolute tolerance
/// `tol`, with a depth cap that keeps the recursion bounded.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || fmath::abs(delta) <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 48)
}

/// Integral of a decaying function over [a, inf): extends the interval in
/// doubling windows until a window contributes less than `tol`.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: &F, a: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut left = a;
    let mut width = 1.0f64.max(fmath::abs(a));
    for _ in 0..64 {
        let part = adaptive_simpson(f, left, left + width, tol * 0.1);
        total += part;
        left += width;
        width *= 2.0;
        if fmath::abs(part) < tol {
            break;
        }
    }
    total
}

/// Euler transformation of a sequence of partial sums: repeated pairwise
/// averaging, returning the deepest diagonal entry. Accelerates convergence
/// of alternating series.
fn euler_accelerate(partials: &[f64]) -> f64 {
    let mut row: Vec<f64> = partials.to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}

/// Oscillatory integral over [0, inf) of f(q) sin(q r), r > 0, computed by
/// integrating between consecutive zeros q_k = k pi / r and accelerating the
/// alternating segment series.
pub fn oscillatory_sine<F: Fn(f64) -> f64>(f: &F, r: f64, tol: f64) -> f64 {
    assert!(r > 0.0, "oscillatory_sine requires r > 0");
    let period = fmath::PI / r;
    let max_segments = 256usize;
    let mut partials: Vec<f64> = Vec::new();
    let mut sum = 0.0;
    let window = 24usize;
    for k in 0..max_segments {
        let a = k as f64 * period;
        let b = a + period;
        let seg = adaptive_simpson(&|q: f64| f(q) * fmath::sin(q * r), a, b, tol * 0.01);
        sum += seg;
        partials.push(sum);
        if partials.len() >= window {
            let tail = &partials[partials.len() - window..];
            let acc = euler_accelerate(tail);
            let prev = euler_accelerate(&tail[..window - 1]);
            if fmath::abs(acc - prev) < tol {
                return acc;
            }
        }
    }
    euler_accelerate(&partials[partials.len() - window.min(partials.len())..])
}
