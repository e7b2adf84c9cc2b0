//! Orthonormal probabilists' Hermite polynomials under N(0, 1).

use std::sync::OnceLock;

const LN_FACT_LEN: usize = 512;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; LN_FACT_LEN];
        for k in 1..LN_FACT_LEN {
            t[k] = t[k - 1] + (k as f64).ln();
        }
        t
    })
}

/// ln(k!)
pub fn ln_factorial(k: u32) -> f64 {
    let table = ln_factorial_table();
    table
        .get(k as usize)
        .copied()
        .unwrap_or_else(|| panic!("ln_factorial: {k} exceeds table size {LN_FACT_LEN}"))
}

/// Fills `out[n] = He_n(y) / sqrt(n!)` for `n < out.len()` using the
/// normalized three-term recurrence.
pub fn normalized_values(y: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = y;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = (y * out[n] - nf.sqrt() * out[n - 1]) / (nf + 1.0).sqrt();
    }
}

/// He_n(y) / sqrt(n!) for a single order.
pub fn normalized(n: u32, y: f64) -> f64 {
    let mut buf = vec![0.0; n as usize + 1];
    normalized_values(y, &mut buf);
    buf[n as usize]
}

/// E[h_a h_b h_c] for orthonormal Hermite polynomials h under N(0, 1).
///
/// Nonzero only when a + b + c is even and each order is at most half the
/// sum; then it equals sqrt(a! b! c!) / ((s-a)! (s-b)! (s-c)!) with s the
/// half sum.
pub fn triple(a: u32, b: u32, c: u32) -> f64 {
    // Fixed argument order keeps the result exactly symmetric.
    let mut o = [a, b, c];
    o.sort_unstable();
    let [a, b, c] = o;
    let total = a + b + c;
    if total % 2 == 1 {
        return 0.0;
    }
    let s = total / 2;
    if s < a || s < b || s < c {
        return 0.0;
    }
    let ln = 0.5 * (ln_factorial(a) + ln_factorial(b) + ln_factorial(c))
        - ln_factorial(s - a)
        - ln_factorial(s - b)
        - ln_factorial(s - c);
    ln.exp()
}
