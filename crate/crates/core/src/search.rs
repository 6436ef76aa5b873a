//! One-dimensional maximization: dense grid scan plus golden-section
//! refinement of the bracketing interval.

use crate::scalar::{lit, Real};

/// Location and value of a maximum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum<T> {
    pub x: T,
    pub value: T,
}

/// Golden-section search for the maximum of `f` on [a, b].
///
/// Shrinks the interval until its width drops below `tol` (or `max_iter`
/// evaluations); returns the better of the two interior probes.
pub fn golden_section_max<T: Real>(
    f: impl Fn(T) -> T,
    mut a: T,
    mut b: T,
    tol: T,
    max_iter: usize,
) -> Maximum<T> {
    // 2 - φ = (3 - √5)/2
    let resp = (lit::<T>(3.0) - lit::<T>(5.0).sqrt()) / lit(2.0);
    let mut x1 = a + resp * (b - a);
    let mut x2 = b - resp * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;

    while evals < max_iter && (b - a).abs() > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + resp * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - resp * (b - a);
            f2 = f(x2);
        }
        evals += 1;
    }

    if f1 > f2 {
        Maximum { x: x1, value: f1 }
    } else {
        Maximum { x: x2, value: f2 }
    }
}

/// Dense scan of `n_grid` uniform points on [a, b], then golden-section
/// refinement inside the bracket around the best grid point. The returned
/// maximum is never below the best scanned value.
pub fn grid_then_golden_max<T: Real>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    n_grid: usize,
    tol: T,
) -> Maximum<T> {
    assert!(n_grid >= 2, "grid scan needs at least two points");
    let n = T::from_usize(n_grid - 1).expect("grid size fits the scalar");
    let mut best = Maximum { x: a, value: f(a) };
    let mut best_idx = 0usize;
    for i in 1..n_grid {
        let x = a + (b - a) * T::from_usize(i).expect("index fits the scalar") / n;
        let v = f(x);
        if v > best.value {
            best = Maximum { x, value: v };
            best_idx = i;
        }
    }
    let h = (b - a) / n;
    let lo = if best_idx == 0 { a } else { best.x - h };
    let hi = if best_idx == n_grid - 1 {
        b
    } else {
        best.x + h
    };
    let refined = golden_section_max(f, lo, hi, tol, 200);
    if refined.value > best.value {
        refined
    } else {
        best
    }
}
