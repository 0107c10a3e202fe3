//! Simultaneous root iteration (Aberth–Ehrlich) on a dense coefficient vector
//! `c_0 + c_1 z + ... + c_d z^d`, followed by Newton polishing.

use rug::Float;

use crate::arith::{exponent, BigComplex, BigReal};
use crate::error::{Error, Result};

pub(crate) const MAX_ITERATIONS: usize = 600;

/// `(p(z), p'(z))` by Horner's rule.
pub(crate) fn eval_with_derivative(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let p = z.prec();
    let mut val = BigComplex::zero(p);
    let mut der = BigComplex::zero(p);
    for c in coeffs.iter().rev() {
        der = &(&der * z) + &val;
        val = &(&val * z) + c;
    }
    (val, der)
}

/// `sum |c_j| |z|^j`, the scale against which a residual is judged.
pub(crate) fn eval_abs(coeffs: &[BigComplex], r: &BigReal) -> BigReal {
    let mut val = Float::new(r.prec());
    for c in coeffs.iter().rev() {
        val *= r;
        val += c.abs();
    }
    val
}

/// Taylor coefficients `p^{(j)}(c) / j!` by repeated synthetic division.
pub(crate) fn taylor_shift(coeffs: &[BigComplex], c: &BigComplex) -> Vec<BigComplex> {
    let mut a: Vec<BigComplex> = coeffs.iter().map(|x| x.with_prec(c.prec())).collect();
    let n = a.len();
    for j in 0..n {
        for i in (j..n - 1).rev() {
            let t = &a[i + 1] * c;
            a[i] += &t;
        }
    }
    a
}

/// Coefficients of the `order`-th derivative.
pub(crate) fn derivative(coeffs: &[BigComplex], order: usize) -> Vec<BigComplex> {
    coeffs
        .iter()
        .enumerate()
        .skip(order)
        .map(|(i, c)| {
            let f = (i - order + 1..=i).fold(rug::Integer::from(1), |acc, x| acc * x as u64);
            c.scale_int(&f)
        })
        .collect()
}

fn initial_guesses(coeffs: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let d = coeffs.len() - 1;
    // geometric mean of the root moduli; 1 for self-inversive input
    let lead = coeffs[d].abs();
    let tail = coeffs
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.abs())
        .unwrap_or_else(|| Float::with_val(prec, 1));
    let ratio = Float::with_val(prec, &tail / &lead).ln() / d as u32;
    let radius = ratio.exp();
    let tau = crate::arith::two_pi(prec);
    (0..d)
        .map(|j| {
            let angle = Float::with_val(prec, &tau * j as u32) / d as u32 + Float::with_val(prec, 1) / 7u32;
            let (s, c) = angle.sin_cos(Float::new(prec));
            BigComplex::new(c * &radius, s * &radius)
        })
        .collect()
}

/// All roots of `coeffs` (leading coefficient nonzero, degree >= 1).
pub(crate) fn aberth(coeffs: &[BigComplex], prec: u32) -> Result<Vec<BigComplex>> {
    let d = coeffs.len() - 1;
    assert!(d >= 1 && !coeffs[d].is_zero());
    let coeffs: Vec<BigComplex> = coeffs.iter().map(|c| c.with_prec(prec)).collect();
    if d == 1 {
        return Ok(vec![-&(&coeffs[0] / &coeffs[1])]);
    }
    let mut z = initial_guesses(&coeffs, prec);
    let mut done = vec![false; d];
    let tol_exp = -(prec as i64) + 24;
    let noise = crate::arith::pow2(-(prec as i64) + 8, prec);
    for _iter in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (val, der) = eval_with_derivative(&coeffs, &z[i]);
            // residual at rounding level; also stops multiple roots, which
            // converge only linearly
            if val.is_zero() || val.abs() <= eval_abs(&coeffs, &z[i].abs()) * &noise {
                done[i] = true;
                continue;
            }
            let ratio = &val / &der;
            let mut sum = BigComplex::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += &(&z[i] - zj).recip();
                }
            }
            let denom = &BigComplex::one(prec) - &(&ratio * &sum);
            let step = &ratio / &denom;
            if !step.is_finite() {
                return Err(Error::NonConvergence { degree: d, iterations: _iter });
            }
            let scale = exponent(&z[i].abs()).max(-(prec as i64) / 2);
            if exponent(&step.abs()) - scale < tol_exp {
                done[i] = true;
            } else {
                all_done = false;
            }
            z[i] -= &step;
        }
        if all_done {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence {
        degree: d,
        iterations: MAX_ITERATIONS,
    })
}

/// Newton steps at `prec` until the update stops shrinking.
pub(crate) fn newton_polish(coeffs: &[BigComplex], root: &BigComplex, prec: u32) -> BigComplex {
    let mut z = root.with_prec(prec);
    let mut last = None::<i64>;
    for _ in 0..40 {
        let (val, der) = eval_with_derivative(coeffs, &z);
        if val.is_zero() || der.is_zero() {
            break;
        }
        let step = &val / &der;
        let e = exponent(&step.abs());
        z -= &step;
        let scale = exponent(&z.abs()).max(-(prec as i64));
        if e - scale < -(prec as i64) + 4 {
            break;
        }
        if let Some(prev) = last {
            if e >= prev {
                break;
            }
        }
        last = Some(e);
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_and_cubic() {
        let c = vec![BigComplex::from_f64(1.0, 0.0, 128), BigComplex::zero(128), BigComplex::from_f64(1.0, 0.0, 128)];
        let mut r = aberth(&c, 128).unwrap();
        r.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!(r[0].dist(&BigComplex::from_f64(0.0, -1.0, 128)) < 1e-30);
        assert!(r[1].dist(&BigComplex::from_f64(0.0, 1.0, 128)) < 1e-30);

        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let c: Vec<_> = [-6.0, 11.0, -6.0, 1.0].iter().map(|&x| BigComplex::from_f64(x, 0.0, 128)).collect();
        let mut r: Vec<f64> = aberth(&c, 128).unwrap().iter().map(|z| z.re.to_f64()).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-25);
        }
    }
}
