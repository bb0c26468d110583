//! Special functions: integer-order Bessel sequences and log-gamma.

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// `J_0(x), …, J_kmax(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 Σ J_{2k} = 1`. Accepts negative `x` via `J_k(−x) = (−1)^k J_k(x)`.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let mut start = kmax.max(ax.ceil() as usize) + 40 + (10.0 * ax.cbrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / ax * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{k-1}, jp1 holds J_k.
        if k <= kmax {
            out[k] = jp1;
        }
        if k % 2 == 0 {
            norm += 2.0 * jp1;
        }
        if j.abs() > 1e250 {
            let s = 1e-250;
            j *= s;
            jp1 *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = j;
    norm += j;
    for (k, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && k % 2 == 1 {
            *v = -*v;
        }
    }
    out
}
