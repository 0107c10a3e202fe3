//! Independent evaluations of `Lambda^{(m)}` used to cross-check the Mellin
//! route: the closed Eisenstein product and central finite differences.

use rug::ops::Pow;
use rug::Float;

use crate::arith::{factorial, pow2, two_pi, zeta_even_coefficient, zeta_neg_int, zeta_real, BigReal, PrecisionContext, Rat};
use crate::error::{Error, Result};

/// `Lambda_{E_k}(s)` for integer `1 <= s <= k-1` in exact form where the
/// zeta factors are rational multiples of powers of pi.
pub fn eisenstein_lambda_exact(k: u32, s: u32) -> Option<Rat> {
    if s < 2 || s + 2 > k {
        return None;
    }
    if s % 2 == 1 {
        return Some(Rat::new());
    }
    // (2 pi)^{-s} (s-1)! r pi^s zeta(1 - (k - s))
    let r = zeta_even_coefficient(s / 2);
    let v = r * Rat::from(factorial(s - 1)) * zeta_neg_int(k - 1 - s);
    Some(v / Rat::from(rug::Integer::u_pow_u(2, s)))
}

/// `Lambda_{E_k}(s) = (2 pi)^{-s} Gamma(s) zeta(s) zeta(s-k+1)` at real `s`,
/// with `prec` bits and a relative-rounding error bound.
pub(crate) fn eisenstein_lambda_real(k: u32, s: &BigReal, prec: u32) -> Result<(BigReal, BigReal)> {
    let p = prec + 32;
    let fuzz = |v: &BigReal| -> BigReal { Float::with_val(p, v.clone().abs() * pow2(-(prec as i64) + 16, p)) + pow2(-(p as i64), p) };
    if s.is_integer() {
        let si = s.to_f64() as i64;
        if si == 0 || si == k as i64 {
            return Err(Error::Pole(format!("{si} (Eisenstein series of weight {k})")));
        }
        if si < 0 {
            // functional equation into the half plane of convergence
            let (v, e) = eisenstein_lambda_real(k, &Float::with_val(p, k as i64 - si), prec)?;
            return Ok(if (k / 2) % 2 == 0 { (v, e) } else { (-v, e) });
        }
        if si < k as i64 {
            let su = si as u32;
            if let Some(r) = eisenstein_lambda_exact(k, su) {
                let v = Float::with_val(p, &r);
                let e = fuzz(&v);
                return Ok((v, e));
            }
            let tp = two_pi(p);
            let v = if su == 1 {
                // (2 pi)^{-1} zeta'(2-k), zeta'(-2n) = (-1)^n (2n)! zeta(2n+1) / (2 (2 pi)^{2n})
                let n = (k - 2) / 2;
                let z = zeta_real(&Float::with_val(p, k - 1), p)?;
                let mut v = z * Float::with_val(p, &factorial(2 * n)) / 2u32 / tp.clone().pow(2 * n + 1);
                if n % 2 == 1 {
                    v = -v;
                }
                v
            } else {
                // s = k - 1: zeta(0) = -1/2
                let z = zeta_real(&Float::with_val(p, k - 1), p)?;
                -(z * Float::with_val(p, &factorial(k - 2)) / tp.clone().pow(k - 1)) / 2u32
            };
            let e = fuzz(&v);
            return Ok((v, e));
        }
    }
    let s = Float::with_val(p, s);
    let tp = two_pi(p);
    let shifted = Float::with_val(p, &s - (k - 1));
    let z1 = zeta_real(&s, p)?;
    let z2 = zeta_real(&shifted, p)?;
    let gamma = Float::with_val(p, s.gamma_ref());
    let scale = Float::with_val(p, -Float::with_val(p, &s * tp.ln())).exp();
    let v = scale * gamma * z1 * z2;
    if !v.is_finite() {
        return Err(Error::Pole(format!("{}", s.to_f64())));
    }
    let e = fuzz(&v);
    Ok((v, e))
}

/// Central-difference weights for the `m`-th derivative on the nodes
/// `-p..=p`: `sum_j w_j j^r = m! [r = m]` for `r <= 2p`.
pub(crate) fn stencil(m: u32, p: u32) -> Vec<Rat> {
    let n = (2 * p + 1) as usize;
    let nodes: Vec<i64> = (-(p as i64)..=p as i64).collect();
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = nodes.iter().map(|&j| Rat::from(rug::Integer::from(j).pow(r as u32))).collect();
            row.push(if r as u32 == m { Rat::from(factorial(m)) } else { Rat::new() });
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0).expect("Vandermonde system is regular");
        a.swap(col, piv);
        let inv = Rat::from(1) / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col].clone();
                for c in 0..=n {
                    let t = Rat::from(&f * &a[col][c]);
                    a[r][c] -= t;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

/// Bits at which the samples of an `m`-th finite difference are taken.
pub(crate) fn fd_bits(ctx: &PrecisionContext, m: u32) -> u32 {
    ctx.bits() + ctx.bits() * m / 3 + 64
}

/// `m`-th derivative at `s` from samples `f(s + j h)`, `h = 2^{-bits/3}`.
/// `sample(x)` returns a value and its error bound. The error estimate
/// compares two stencil orders and adds propagated sample error.
pub(crate) fn central_difference<F>(s: &BigReal, m: u32, ctx: &PrecisionContext, mut sample: F) -> Result<(BigReal, BigReal)>
where
    F: FnMut(&BigReal) -> Result<(BigReal, BigReal)>,
{
    let bits = fd_bits(ctx, m);
    let half = m / 2 + 3;
    let h_exp = -(ctx.bits() as i64 / 3);
    let h = pow2(h_exp, bits);
    let mut values = Vec::with_capacity((2 * half + 1) as usize);
    let mut sample_err = Float::new(bits);
    for j in -(half as i64)..=half as i64 {
        let x = Float::with_val(bits, s + Float::with_val(bits, &h * j));
        let (v, e) = sample(&x)?;
        sample_err = sample_err.max(&e);
        values.push(v);
    }
    let apply = |p: u32| -> (BigReal, BigReal) {
        let w = stencil(m, p);
        let off = (half - p) as usize;
        let mut acc = Float::new(bits);
        let mut wsum = Float::new(bits);
        for (wj, v) in w.iter().zip(&values[off..]) {
            acc += Float::with_val(bits, wj) * v;
            wsum += Float::with_val(bits, wj).abs();
        }
        let scale = pow2(-h_exp * m as i64, bits);
        (acc * &scale, wsum * scale)
    };
    let (hi, wsum) = apply(half);
    let (lo, _) = apply(half - 1);
    let err = Float::with_val(bits, &hi - &lo).abs() + sample_err * wsum;
    Ok((hi, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values() {
        assert_eq!(eisenstein_lambda_exact(12, 2), Some(Rat::from((-1, 3168))));
        assert_eq!(eisenstein_lambda_exact(12, 3), Some(Rat::new()));
        assert_eq!(eisenstein_lambda_exact(12, 1), None);
        assert_eq!(eisenstein_lambda_exact(12, 11), None);
    }

    #[test]
    fn stencil_first_derivative() {
        assert_eq!(stencil(1, 1), vec![Rat::from((-1, 2)), Rat::new(), Rat::from((1, 2))]);
        assert_eq!(stencil(2, 1), vec![Rat::from(1), Rat::from(-2), Rat::from(1)]);
    }

    #[test]
    fn difference_of_exponential() {
        let ctx = PrecisionContext::new(160).unwrap();
        let s = Float::with_val(200, 0.25);
        for m in 1..=3 {
            let (d, e) = central_difference(&s, m, &ctx, |x| {
                Ok((x.clone().exp(), pow2(-(fd_bits(&ctx, m) as i64), fd_bits(&ctx, m))))
            })
            .unwrap();
            let err = Float::with_val(300, &d - s.clone().exp()).abs();
            assert!(err < 1e-40 && err <= e * 2u32 + 1e-45, "m = {m} err {err}");
        }
    }

    #[test]
    fn boundary_values_against_generic_route() {
        // s = 1 and s = k-1 through the closed forms vs the product formula
        // at a nearby point
        let p = 200;
        for (k, s) in [(12u32, 11i64), (16, 15)] {
            let (v, _) = eisenstein_lambda_real(k, &Float::with_val(p, s), p).unwrap();
            let near = Float::with_val(p, s) + pow2(-80, p);
            let (w, _) = eisenstein_lambda_real(k, &near, p).unwrap();
            assert!(Float::with_val(p, &v - &w).abs() < 1e-20);
        }
        let (v, _) = eisenstein_lambda_real(12, &Float::with_val(p, 1), p).unwrap();
        let near = Float::with_val(p, 1) + pow2(-80, p);
        let (w, _) = eisenstein_lambda_real(12, &near, p).unwrap();
        assert!(Float::with_val(p, &v - &w).abs() < 1e-20, "{v} vs {w}");
    }
}
