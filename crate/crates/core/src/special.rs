//! Small numerical helpers shared across modules.

use std::f64::consts::LN_2;

/// Table of ln(n!) for n = 0..len.
pub(crate) fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for n in 1..=len {
        acc += (n as f64).ln();
        out.push(acc);
    }
    out
}

/// Amplitude sqrt(C(n, j)) / 2^{n/2} of |j, n-j> in the normalized
/// expansion of ((a* + b*)/sqrt 2)^n / sqrt(n!) |0,0>.
pub(crate) fn binomial_amplitude(lf: &[f64], n: usize, j: usize) -> f64 {
    (0.5 * (lf[n] - lf[j] - lf[n - j]) - 0.5 * n as f64 * LN_2).exp()
}

/// Pascal triangle in exact 128-bit integers, rows 0..=max_row.
/// Every entry stays below 2^126 for max_row <= 126.
pub(crate) fn pascal_i128(max_row: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(max_row + 1);
    for n in 0..=max_row {
        let mut row = vec![1i128; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Largest truncation dimension any single mode may use. Read from the
/// `HD_MAX_DIM` environment variable, default 4096.
pub fn max_dim() -> usize {
    std::env::var("HD_MAX_DIM")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 2)
        .unwrap_or(4096)
}
