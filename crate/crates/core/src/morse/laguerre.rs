//! Generalized Laguerre polynomials `L_n^s(ξ)` for real order `s`.

/// Three-term recurrence `(k+1)L_{k+1} = (2k+1+s−ξ)L_k − (k+s)L_{k−1}`.
pub fn laguerre(n: usize, s: f64, xi: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + s - xi;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + s - xi) * cur - (kf + s) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
