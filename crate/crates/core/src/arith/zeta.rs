//! Riemann zeta and its derivatives on the real line by Euler–Maclaurin
//! summation. Derivatives are carried as truncated Taylor series ("jets") in
//! `s`, so the same summation yields `zeta^(m)` for every `m` up to the jet
//! order.

use rug::ops::Pow;
use rug::Float;

use super::rat::{bernoulli, factorial, zeta_even_coefficient};
use super::real::{exponent, pi, pow2, BigReal, PrecisionContext};
use crate::error::{Error, Result};

/// A value together with an estimate of its absolute error.
#[derive(Clone, Debug)]
pub struct RealEstimate {
    pub value: BigReal,
    pub est_error: BigReal,
}

/// Truncated Taylor series `c_0 + c_1 e + ... + c_order e^order`.
#[derive(Clone, Debug)]
pub(crate) struct Jet(pub Vec<Float>);

impl Jet {
    pub fn constant(c: Float, order: usize) -> Jet {
        let p = c.prec();
        let mut v = vec![Float::new(p); order + 1];
        v[0] = c;
        Jet(v)
    }

    /// The jet of `a + e`.
    pub fn linear(a: Float, order: usize) -> Jet {
        let p = a.prec();
        let mut j = Jet::constant(a, order);
        if order >= 1 {
            j.0[1] = Float::with_val(p, 1);
        }
        j
    }

    /// The jet of `x^(-s)` at `s = s0`: `x^(-s0) * exp(-e ln x)`.
    pub fn inv_pow(ln_x: &Float, s0: &Float, order: usize) -> Jet {
        let p = s0.prec();
        let base = Float::with_val(p, -(Float::with_val(p, ln_x * s0))).exp();
        let mut out = Vec::with_capacity(order + 1);
        let mut term = base;
        out.push(term.clone());
        for j in 1..=order {
            term = Float::with_val(p, &term * ln_x);
            term = -term / j as u32;
            out.push(term.clone());
        }
        Jet(out)
    }

    /// The jet of `1/(a + e)`.
    pub fn reciprocal_linear(a: &Float, order: usize) -> Jet {
        let p = a.prec();
        let inv = Float::with_val(p, a.recip_ref());
        let mut out = Vec::with_capacity(order + 1);
        let mut term = inv.clone();
        for _ in 0..=order {
            out.push(term.clone());
            term = -(term * &inv);
        }
        Jet(out)
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let order = self.0.len() - 1;
        let p = self.0[0].prec();
        let mut out = vec![Float::new(p); order + 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(order + 1 - i) {
                out[i + j] += Float::with_val(p, a * b);
            }
        }
        Jet(out)
    }

    pub fn add_assign(&mut self, o: &Jet) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }

    pub fn scale(&mut self, c: &Float) {
        for a in self.0.iter_mut() {
            *a *= c;
        }
    }

    /// `d^m/ds^m` at the expansion point.
    pub fn derivative(&self, m: usize) -> Float {
        let p = self.0[0].prec();
        Float::with_val(p, &self.0[m] * factorial(m as u32))
    }

    pub fn max_abs(&self, upto: usize) -> Float {
        let p = self.0[0].prec();
        let mut best = Float::new(p);
        for (j, c) in self.0.iter().enumerate().take(upto + 1) {
            let v = Float::with_val(p, c.abs_ref()) * factorial(j as u32);
            if v > best {
                best = v;
            }
        }
        best
    }
}

/// Euler–Maclaurin evaluation of the zeta jet at real `s0 != 1`, valid for
/// `s0 >= 1/2`. Returns the jet and a remainder estimate bounding every
/// derivative up to `order`.
pub(crate) fn zeta_jet(s0: &Float, order: usize, bits: u32) -> Result<(Jet, Float)> {
    if *s0 == 1 {
        return Err(Error::Pole("1".into()));
    }
    let s_f = s0.to_f64();
    let mut terms = (0.31 * bits as f64).ceil() as usize + 8 + 2 * order;
    for _attempt in 0..4 {
        let p_terms = terms;
        let n_cut = p_terms + s_f.abs().ceil() as usize + 2;
        let prec = bits + 32 + 4 * (order as u32) + (usize::BITS - n_cut.leading_zeros());
        let s = Float::with_val(prec, s0);
        let mut acc = Jet::constant(Float::new(prec), order);
        for n in 1..n_cut {
            let ln_n = Float::with_val(prec, n).ln();
            acc.add_assign(&Jet::inv_pow(&ln_n, &s, order));
        }
        let big_n = Float::with_val(prec, n_cut);
        let ln_big_n = Float::with_val(prec, big_n.ln_ref());
        let n_pow = Jet::inv_pow(&ln_big_n, &s, order);

        // N^(1-s)/(s-1)
        let mut head = n_pow.mul(&Jet::reciprocal_linear(&Float::with_val(prec, &s - 1u32), order));
        head.scale(&big_n);
        acc.add_assign(&head);
        // N^(-s)/2
        let mut half = n_pow.clone();
        half.scale(&Float::with_val(prec, 0.5));
        acc.add_assign(&half);

        // sum_j B_2j/(2j)! (s)_{2j-1} N^(-s-2j+1)
        let mut rising = Jet::linear(s.clone(), order); // (s)_1
        let inv_n2 = Float::with_val(prec, big_n.square_ref()).recip();
        let mut n_factor = Float::with_val(prec, big_n.recip_ref()); // N^(-2j+1)
        let mut last = Float::new(prec);
        for j in 1..=p_terms + 1 {
            let coef = Float::with_val(prec, &bernoulli(2 * j as u32)) / factorial(2 * j as u32);
            let mut term = rising.mul(&n_pow);
            term.scale(&Float::with_val(prec, &coef * &n_factor));
            if j == p_terms + 1 {
                last = term.max_abs(order);
                break;
            }
            acc.add_assign(&term);
            // (s)_{2j+1} = (s)_{2j-1} (s + 2j - 1)(s + 2j)
            let a = Jet::linear(Float::with_val(prec, &s + (2 * j - 1) as u32), order);
            let b = Jet::linear(Float::with_val(prec, &s + (2 * j) as u32), order);
            rising = rising.mul(&a).mul(&b);
            n_factor *= &inv_n2;
        }
        // first omitted term, doubled, plus rounding at working precision
        let mut err = last * 2u32;
        let scale = acc.max_abs(order);
        err += Float::with_val(prec, &scale * pow2(-(prec as i64) + 8, prec));
        if exponent(&err) < -(bits as i64) - 4 || _attempt == 3 {
            return Ok((acc, err));
        }
        terms = terms * 3 / 2;
    }
    unreachable!()
}

/// `zeta^(m)(s)` for real `s > 1`.
pub fn zeta_numeric(s: &BigReal, m: u32, ctx: &PrecisionContext) -> Result<RealEstimate> {
    if *s <= 1 {
        return Err(Error::invalid(format!("zeta_numeric requires s > 1, got {}", s.to_f64())));
    }
    let bits = ctx.bits().max((-ctx.target_log2()) as u32 + 8);
    let (jet, err) = zeta_jet(s, m as usize, bits)?;
    let value = Float::with_val(ctx.bits() + 32, jet.derivative(m as usize));
    if err > *ctx.target() {
        return Err(Error::PrecisionInfeasible(format!(
            "zeta^({m})({}) error {:.3e} above target",
            s.to_f64(),
            err.to_f64()
        )));
    }
    Ok(RealEstimate {
        value,
        est_error: Float::with_val(ctx.bits(), err),
    })
}

/// `zeta(x)` for any real `x != 1` at the given precision: Euler–Maclaurin for
/// `x >= 1/2`, the reflection formula below.
pub(crate) fn zeta_real(x: &Float, bits: u32) -> Result<Float> {
    let prec = bits + 32;
    if x.is_zero() {
        return Ok(Float::with_val(prec, -0.5));
    }
    if *x >= 0.5 {
        let (jet, _) = zeta_jet(x, 0, bits)?;
        return Ok(Float::with_val(prec, &jet.0[0]));
    }
    // zeta(x) = 2^x pi^(x-1) sin(pi x / 2) Gamma(1-x) zeta(1-x)
    let x = Float::with_val(prec, x);
    let one_minus = Float::with_val(prec, 1 - &x);
    let (jet, _) = zeta_jet(&one_minus, 0, bits + 16)?;
    let pi_p = pi(prec);
    let two_x = Float::with_val(prec, Float::with_val(prec, 2).ln() * &x).exp();
    let pi_pow = Float::with_val(prec, Float::with_val(prec, pi_p.ln_ref()) * Float::with_val(prec, &x - 1u32)).exp();
    let sin = (Float::with_val(prec, &pi_p * &x) / 2u32).sin();
    let gamma = Float::with_val(prec, one_minus.gamma_ref());
    Ok(two_x * pi_pow * sin * gamma * &jet.0[0])
}

/// `zeta(2n)` computed from the exact Bernoulli value.
pub fn zeta_even(n: u32, prec: u32) -> Float {
    let r = zeta_even_coefficient(n);
    Float::with_val(prec, &r) * pi(prec).pow(2 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::new(bits).unwrap()
    }

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let c = ctx(200);
        let z = zeta_numeric(&c.real(2.0), 0, &c).unwrap();
        let exact = Float::with_val(300, pi(300).square_ref()) / 6u32;
        let diff = Float::with_val(300, &z.value - &exact).abs();
        assert!(diff < *c.target(), "diff {diff}");
        assert!(z.est_error <= *c.target());
    }

    #[test]
    fn even_values_match_bernoulli_closed_form() {
        let c = ctx(200);
        for n in 1..=20u32 {
            let z = zeta_numeric(&c.real(2.0 * n as f64), 0, &c).unwrap();
            let exact = zeta_even(n, 300);
            let diff = Float::with_val(300, &z.value - &exact).abs();
            assert!(diff < *c.target(), "n = {n}");
        }
    }

    /// Direct-sum oracle for zeta(11): 10^6 terms plus the integral tail bound.
    #[test]
    fn zeta_eleven_direct_sum() {
        let c = ctx(128);
        let z = zeta_numeric(&c.real(11.0), 0, &c).unwrap();
        let mut direct = 0.0f64;
        for n in (1..=1_000_000u64).rev() {
            direct += (n as f64).powi(-11);
        }
        assert!((z.value.to_f64() - direct).abs() < 1e-15);
    }

    /// zeta'(3) against -sum log(n)/n^3 with an integral tail correction.
    #[test]
    fn zeta_prime_three_direct_sum() {
        let c = ctx(128);
        let z = zeta_numeric(&c.real(3.0), 1, &c).unwrap();
        let n_max = 2_000_000u64;
        let mut direct = 0.0f64;
        for n in (2..=n_max).rev() {
            let x = n as f64;
            direct -= x.ln() / (x * x * x);
        }
        // tail: -int_N^inf ln x / x^3 dx = -(2 ln N + 1)/(4 N^2)
        let nf = n_max as f64 + 0.5;
        direct -= (2.0 * nf.ln() + 1.0) / (4.0 * nf * nf);
        assert!((z.value.to_f64() - direct).abs() < 1e-12, "{} vs {direct}", z.value.to_f64());
    }

    #[test]
    fn agrees_with_mpfr_zeta_off_integers() {
        for &x in &[0.75f64, 1.5, 3.25, -2.5, -7.75, 0.0] {
            let v = zeta_real(&Float::with_val(150, x), 150).unwrap();
            let mpfr = Float::with_val(180, x).zeta();
            let diff = Float::with_val(150, &v - &mpfr).abs();
            assert!(diff < 1e-40, "x = {x}: {v} vs {mpfr}");
        }
    }

    #[test]
    fn derivative_jets_match_finite_differences() {
        // zeta''(2.5) by a 5-point stencil on MPFR zeta at 300 bits
        let h = Float::with_val(300, Float::i_exp(1, -30));
        let at = |d: i32| Float::with_val(300, Float::with_val(300, 2.5) + Float::with_val(300, &h * d)).zeta();
        let second = Float::with_val(
            300,
            -at(2) + Float::with_val(300, at(1) * 16u32) - Float::with_val(300, at(0) * 30u32)
                + Float::with_val(300, at(-1) * 16u32)
                - at(-2),
        ) / (Float::with_val(300, h.square_ref()) * 12u32);
        let c = ctx(128);
        let z = zeta_numeric(&c.real(2.5), 2, &c).unwrap();
        assert!((z.value.to_f64() - second.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn rejects_s_at_most_one() {
        let c = ctx(128);
        assert!(zeta_numeric(&c.real(1.0), 0, &c).is_err());
    }
}
