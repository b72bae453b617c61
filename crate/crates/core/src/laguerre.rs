//! Generalized Laguerre polynomials `L_n^a(x)` with integer upper index.

/// Largest degree accepted by [`laguerre`].
pub const MAX_DEGREE: usize = 4096;

/// Forward three-term recurrence in the degree,
/// `(k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}`,
/// started from `L_0 = 1`, `L_1 = 1 + a - x`.
///
/// Valid for any integer `a`, but for negative `a` the intermediate values
/// cancel catastrophically once `n > -a`; see [`laguerre`].
pub fn laguerre_recurrence(n: usize, a: i64, x: f64) -> f64 {
    let a = a as f64;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^a(x)` for integer `a`.
///
/// Non-negative `a`, and negative `a` with `n < -a`, go straight through the
/// recurrence. For `-n <= a < 0` the polynomial identity
/// `L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^{k}(x)` moves the evaluation to a
/// non-negative upper index first.
pub fn laguerre(n: usize, a: i64, x: f64) -> f64 {
    assert!(n <= MAX_DEGREE, "Laguerre degree {n} exceeds {MAX_DEGREE}");
    if a >= 0 || (-a) as usize > n {
        return laguerre_recurrence(n, a, x);
    }
    let k = (-a) as usize;
    let m = n - k;
    // (-x)^k * m! / n!  accumulated as a product of k ratios
    let scale: f64 = (m + 1..=n).map(|j| -x / j as f64).product();
    scale * laguerre_recurrence(m, k as i64, x)
}
