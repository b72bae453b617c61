#![allow(dead_code)]

use fockgauge::{FockVector, C64};

/// `‖(n - i r x_θ - Ω) ψ‖` for the crescent state of amplitude `alpha`
/// and order `m`, with `r = √2|α|`, `θ = π/2 - arg α`, `Ω = m + |α|²`.
pub fn crescent_residual(psi: &FockVector, alpha: C64, m: u32) -> f64 {
    let r = std::f64::consts::SQRT_2 * alpha.norm();
    let theta = std::f64::consts::FRAC_PI_2 - alpha.arg();
    let omega = m as f64 + alpha.norm_sqr();
    let c = psi.amplitudes();
    let len = c.len() + 1;
    let get = |k: usize| c.get(k).copied().unwrap_or_default();
    let rot = C64::from_polar(1.0, theta);
    let i = C64::new(0.0, 1.0);
    (0..len)
        .map(|k| {
            let lowered = (k as f64 + 1.0).sqrt() * get(k + 1);
            let raised = if k > 0 { (k as f64).sqrt() * get(k - 1) } else { C64::default() };
            let x = (rot * lowered + rot.conj() * raised) / std::f64::consts::SQRT_2;
            (k as f64 * get(k) - i * r * x - omega * get(k)).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

pub fn pure_fidelity(a: &FockVector, b: &FockVector) -> f64 {
    a.inner(b).norm_sqr()
}
