//! Exact integer q-series helpers.

use crate::arith::{divisor_sigma, BigInt};

/// Truncated product: coefficients `0..=n`.
pub(crate) fn mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::new(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += BigInt::from(x * y);
        }
    }
    out
}

pub(crate) fn pow(a: &[BigInt], mut e: u32, n: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::new(); n + 1];
    result[0] = BigInt::from(1);
    let mut base: Vec<BigInt> = a.iter().take(n + 1).cloned().collect();
    base.resize(n + 1, BigInt::new());
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base, n);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, n);
        }
    }
    result
}

/// `prod_{m>=1} (1 - q^m)` by Euler's pentagonal number theorem.
pub(crate) fn euler_product(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::new(); n + 1];
    out[0] = BigInt::from(1);
    for m in 1i64.. {
        let g1 = (m * (3 * m - 1) / 2) as usize;
        let g2 = (m * (3 * m + 1) / 2) as usize;
        if g1 > n {
            break;
        }
        let sign = if m % 2 == 1 { -1 } else { 1 };
        out[g1] += sign;
        if g2 <= n {
            out[g2] += sign;
        }
    }
    out
}

/// `Delta = q prod (1 - q^m)^24`.
pub(crate) fn delta(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::new()];
    }
    let p = pow(&euler_product(n - 1), 24, n - 1);
    let mut out = vec![BigInt::new()];
    out.extend(p);
    out
}

/// Normalized `E_k = 1 + c_k sum sigma_{k-1}(n) q^n` scaled to integers for
/// k = 4, 6: `1 + 240 ...`, `1 - 504 ...`.
pub(crate) fn e4(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(1)];
    out.extend((1..=n).map(|m| divisor_sigma(3, m as u64) * 240u32));
    out
}

pub(crate) fn e6(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(1)];
    out.extend((1..=n).map(|m| divisor_sigma(5, m as u64) * -504i32));
    out
}
