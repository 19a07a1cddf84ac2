//! Minimum-norm point of an intersection of half-spaces `⟨g_t, a⟩ ≥ 1`,
//! by cyclic coordinate ascent on the dual (Hildreth's method): maintain
//! `a = Σ_t λ_t g_t` with `λ ≥ 0` and sweep single-constraint updates.
//! Converges to the projection of the origin whenever the system is
//! feasible, which is the only regime callers use it in.

/// Returns `(a, min_margin)` where `a ≈ argmin ‖a‖ : ⟨g_t, a⟩ ≥ 1` and
/// `min_margin = min_t ⟨g_t, a⟩`. `tol` is the relative stopping tolerance
/// on the margins; `max_sweeps` caps the work.
pub fn min_norm_point(gs: &[Vec<f64>], tol: f64, max_sweeps: usize) -> (Vec<f64>, f64) {
    assert!(!gs.is_empty(), "need at least one half-space");
    let dim = gs[0].len();
    let norms_sq: Vec<f64> = gs.iter().map(|g| g.iter().map(|v| v * v).sum()).collect();
    let mut lambda = vec![0.0f64; gs.len()];
    let mut a = vec![0.0f64; dim];

    for _sweep in 0..max_sweeps {
        let mut moved = 0.0f64;
        for (t, g) in gs.iter().enumerate() {
            if norms_sq[t] == 0.0 {
                continue;
            }
            let margin: f64 = g.iter().zip(a.iter()).map(|(x, y)| x * y).sum();
            let mut delta = (1.0 - margin) / norms_sq[t];
            if delta < -lambda[t] {
                delta = -lambda[t];
            }
            if delta != 0.0 {
                lambda[t] += delta;
                for (ai, gi) in a.iter_mut().zip(g.iter()) {
                    *ai += delta * gi;
                }
                moved = moved.max(delta.abs() * norms_sq[t].sqrt());
            }
        }
        let min_margin = gs
            .iter()
            .map(|g| g.iter().zip(a.iter()).map(|(x, y)| x * y).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if min_margin >= 1.0 - tol && moved <= tol {
            return (a, min_margin);
        }
    }
    let min_margin = gs
        .iter()
        .map(|g| g.iter().zip(a.iter()).map(|(x, y)| x * y).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (a, min_margin)
}
