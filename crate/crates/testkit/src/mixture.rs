//! Dense grid-search oracle for one-dimensional maximization on [0, 1].

/// Argmax of `f` over a uniform grid of `points` values spanning [0, 1].
///
/// Deliberately exhaustive: used to cross-check iterative optimizers.
pub fn grid_argmax<F: Fn(f64) -> f64>(f: F, points: usize) -> f64 {
    assert!(points >= 2);
    let mut best_x = 0.0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..points {
        let x = i as f64 / (points - 1) as f64;
        let v = f(x);
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    best_x
}
