//! One-dimensional maximization: uniform grid scan refined by golden-section
//! search.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `tol`.
///
/// Returns `(x_max, f(x_max))`.
pub fn golden_section_maximize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 iterations shrink any bracket by 0.618^200 ~ 1e-42
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    [(x1, f1), (x2, f2), (mid, fm)]
        .into_iter()
        .fold((mid, fm), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Maximizes a `period`-periodic function: `points`-point grid on
/// `[0, period)`, then golden-section refinement in the two cells around
/// the best grid point. The returned abscissa is reduced to `[0, period)`.
pub fn maximize_periodic(f: impl Fn(f64) -> f64, period: f64, points: usize, tol: f64) -> (f64, f64) {
    let step = period / points as f64;
    let (best_i, _) = (0..points)
        .map(|i| (i, f(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best });
    let center = best_i as f64 * step;
    let (x, fx) = golden_section_maximize(&f, center - step, center + step, tol);
    (x.rem_euclid(period), fx)
}
