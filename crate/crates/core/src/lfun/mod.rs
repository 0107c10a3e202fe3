//! Completed L-functions `Lambda_f(s) = (2 pi)^{-s} Gamma(s) L_f(s)` and their
//! derivatives in `s`.
//!
//! The main route integrates `f(iv) - a_0` against `v^{s-1}` and `v^{k-s-1}`
//! over `[1, inf)`, corrected by the two `a_0` terms; it holds for every `s`
//! away from the poles `0` and `k` of non-cusp forms.

mod mellin;
mod oracle;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::{BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::forms::FourierExpansion;

pub use mellin::{incomplete_log_mellin, required_truncation, MAX_DERIVATIVE};
pub use oracle::eisenstein_lambda_exact;
pub(crate) use oracle::{central_difference, fd_bits};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Mellin,
    EisensteinOracle,
    FiniteDifferenceOracle,
}

#[derive(Clone, Debug)]
pub struct LDerivativeValue {
    pub s: BigComplex,
    pub m: u32,
    pub value: BigComplex,
    pub est_error: BigReal,
    pub source: Source,
}

fn check_order(m: u32) -> Result<()> {
    if m > MAX_DERIVATIVE {
        return Err(Error::invalid(format!("derivative order {m} above cap {MAX_DERIVATIVE}")));
    }
    Ok(())
}

fn finish(s: &BigComplex, m: u32, mut value: BigComplex, est_error: BigReal, source: Source) -> LDerivativeValue {
    if s.im.is_zero() && value.im.clone().abs() <= est_error {
        value.im = Float::new(value.im.prec());
    }
    LDerivativeValue {
        s: s.clone(),
        m,
        value,
        est_error,
        source,
    }
}

fn is_pole(f: &FourierExpansion, s: &BigComplex) -> bool {
    !f.is_cusp() && s.im.is_zero() && (s.re.is_zero() || s.re == f.weight)
}

/// `Lambda_f^{(m)}(s)` by the termwise Mellin representation.
pub fn completed_l_derivative(f: &FourierExpansion, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<LDerivativeValue> {
    check_order(m)?;
    if is_pole(f, s) {
        return Err(Error::Pole(format!("{}", s.re.to_f64())));
    }
    let (value, err) = mellin::mellin_value(f, s, m, ctx)?;
    Ok(finish(s, m, value, err, Source::Mellin))
}

fn real_point(s: &BigComplex) -> Result<&BigReal> {
    if !s.im.is_zero() {
        return Err(Error::invalid("oracle evaluations are limited to real s"));
    }
    Ok(&s.re)
}

/// `Lambda_{E_k}^{(m)}(s)` from `(2 pi)^{-s} Gamma(s) zeta(s) zeta(s-k+1)`,
/// derivatives by central differences at step `2^{-bits/3}`.
pub fn eisenstein_lambda_oracle(k: u32, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<LDerivativeValue> {
    check_order(m)?;
    if k < 4 || k % 2 == 1 {
        return Err(Error::invalid(format!("Eisenstein weight must be even and at least 4, got {k}")));
    }
    let x = real_point(s)?;
    if x.is_integer() && (x.is_zero() || *x == k) {
        return Err(Error::Pole(format!("{}", x.to_f64())));
    }
    let (value, err) = if m == 0 {
        oracle::eisenstein_lambda_real(k, x, ctx.bits() + 64)?
    } else {
        let bits = fd_bits(ctx, m);
        central_difference(x, m, ctx, |y| oracle::eisenstein_lambda_real(k, y, bits))?
    };
    Ok(finish(s, m, BigComplex::from_real(value), err, Source::EisensteinOracle))
}

/// Coefficients [`finite_difference_derivative`] needs for order `m`.
pub fn finite_difference_truncation(k: u32, m: u32, ctx: &PrecisionContext) -> usize {
    let sample_log2 = ctx.target_log2() - (ctx.bits() * m / 3 + 8) as i64;
    mellin::terms_for(k, mellin::growth(k, 0.0, MAX_DERIVATIVE), sample_log2)
}

/// `Lambda_f^{(m)}(s)` from central differences of Mellin values of order 0.
pub fn finite_difference_derivative(f: &FourierExpansion, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<LDerivativeValue> {
    check_order(m)?;
    let x = real_point(s)?;
    if m == 0 {
        let v = completed_l_derivative(f, s, 0, ctx)?;
        return Ok(LDerivativeValue {
            source: Source::FiniteDifferenceOracle,
            ..v
        });
    }
    let bits = fd_bits(ctx, m);
    let sample_target = Float::with_val(bits, ctx.target() >> (ctx.bits() * m / 3 + 8));
    let inner = PrecisionContext::with_target(bits, sample_target)?;
    let (value, err) = central_difference(x, m, ctx, |y| {
        let v = completed_l_derivative(f, &BigComplex::from_real(y.clone()), 0, &inner)?;
        Ok((v.value.re, v.est_error))
    })?;
    Ok(finish(s, m, BigComplex::from_real(value), err, Source::FiniteDifferenceOracle))
}

/// Defect of the differentiated functional equation
/// `Lambda^{(m)}(s) = (-1)^m i^k Lambda^{(m)}(k - s)`.
#[derive(Clone, Debug)]
pub struct FeDefect {
    pub defect: BigReal,
    pub est_error: BigReal,
}

pub fn fe_defect(f: &FourierExpansion, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<FeDefect> {
    let lhs = completed_l_derivative(f, s, m, ctx)?;
    let p = lhs.value.prec();
    let mirror = &BigComplex::from_f64(f.weight as f64, 0.0, p) - s;
    let rhs = completed_l_derivative(f, &mirror, m, ctx)?;
    let sign = if (f.weight / 2 + m) % 2 == 0 { 1 } else { -1 };
    let diff = &lhs.value - &rhs.value.scale(&Float::with_val(p, sign));
    Ok(FeDefect {
        defect: diff.abs(),
        est_error: lhs.est_error + rhs.est_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{pow2, two_pi, Rat};
    use crate::forms::{delta_expansion, eisenstein_expansion};

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::new(bits).unwrap()
    }

    fn real(x: f64, p: u32) -> BigComplex {
        BigComplex::from_f64(x, 0.0, p)
    }

    #[test]
    fn incomplete_mellin_closed_form() {
        let c = ctx(200);
        let v = incomplete_log_mellin(1, &real(1.0, 264), 0, &c).unwrap();
        let tp = two_pi(300);
        let exact = Float::with_val(300, -tp.clone()).exp() / &tp;
        assert!(Float::with_val(300, &v.re - &exact).abs() < *c.target());
        assert!(v.im.is_zero());
    }

    #[test]
    fn incomplete_mellin_against_trapezoid() {
        // 10^6 panels of the trapezoid rule on [1, 30]
        let c = ctx(128);
        let v = incomplete_log_mellin(1, &real(1.0, 192), 1, &c).unwrap().re.to_f64();
        let panels = 1_000_000;
        let h = 29.0 / panels as f64;
        let g = |x: f64| (-2.0 * std::f64::consts::PI * x).exp() * x.ln();
        let mut acc = 0.5 * (g(1.0) + g(30.0));
        for i in 1..panels {
            acc += g(1.0 + i as f64 * h);
        }
        let trap = acc * h;
        assert!(v > 0.0);
        // trapezoid error ~ h^2 |f'(1)| / 12 ~ 1e-13
        assert!((v - trap).abs() < 1e-12, "{v} vs {trap}");
    }

    #[test]
    fn incomplete_mellin_decreases_in_n() {
        let c = ctx(128);
        let a = incomplete_log_mellin(1, &real(3.0, 192), 0, &c).unwrap();
        let b = incomplete_log_mellin(2, &real(3.0, 192), 0, &c).unwrap();
        assert!(b.re < a.re);
    }

    #[test]
    fn eisenstein_twelve_at_two() {
        let c = ctx(200);
        let n = required_truncation(12, &c);
        let e12 = eisenstein_expansion(12, n).unwrap();
        let v = completed_l_derivative(&e12, &real(2.0, 200), 0, &c).unwrap();
        let want = Float::with_val(300, &Rat::from((-1, 3168)));
        let err = Float::with_val(300, &v.value.re - &want).abs();
        assert!(err <= v.est_error, "err {err} est {}", v.est_error);
        assert!(v.value.im.is_zero());
        let zero = completed_l_derivative(&e12, &real(3.0, 200), 0, &c).unwrap();
        assert!(zero.value.abs() <= zero.est_error);
    }

    #[test]
    fn delta_symmetry_and_fe() {
        let c = ctx(200);
        let d = delta_expansion(required_truncation(12, &c)).unwrap();
        for t in [1.0, 2.0] {
            let a = completed_l_derivative(&d, &real(6.0 + t, 200), 0, &c).unwrap();
            let b = completed_l_derivative(&d, &real(6.0 - t, 200), 0, &c).unwrap();
            let diff = a.value.dist(&b.value);
            assert!(diff <= Float::with_val(64, &a.est_error + &b.est_error));
        }
        let fe = fe_defect(&d, &real(4.0, 200), 0, &c).unwrap();
        assert!(fe.defect <= fe.est_error * 10u32);
    }

    #[test]
    fn poles_are_rejected() {
        let c = ctx(128);
        let e = eisenstein_expansion(12, required_truncation(12, &c)).unwrap();
        assert!(matches!(completed_l_derivative(&e, &real(0.0, 128), 0, &c), Err(Error::Pole(_))));
        assert!(matches!(completed_l_derivative(&e, &real(12.0, 128), 1, &c), Err(Error::Pole(_))));
        assert!(matches!(eisenstein_lambda_oracle(12, &real(12.0, 128), 0, &c), Err(Error::Pole(_))));
        assert!(completed_l_derivative(&e, &real(1.0, 128), 9, &c).is_err());
    }

    #[test]
    fn short_expansion_is_rejected() {
        let c = ctx(200);
        let d = delta_expansion(5).unwrap();
        assert!(matches!(
            completed_l_derivative(&d, &real(3.0, 200), 0, &c),
            Err(Error::TruncationInsufficient(_))
        ));
    }

    #[test]
    fn complex_argument_matches_conjugate_symmetry() {
        let c = ctx(128);
        let d = delta_expansion(required_truncation(12, &c)).unwrap();
        let s = BigComplex::from_f64(6.0, 3.5, 192);
        let a = completed_l_derivative(&d, &s, 1, &c).unwrap();
        let b = completed_l_derivative(&d, &s.conj(), 1, &c).unwrap();
        assert!(a.value.dist(&b.value.conj()) <= Float::with_val(64, &a.est_error + &b.est_error));
        // on the critical line Lambda_Delta is real
        let v = completed_l_derivative(&d, &s, 0, &c).unwrap();
        assert!(v.value.im.clone().abs() <= v.est_error);
    }

    #[test]
    fn oracle_cross_validation_at_six() {
        let c = ctx(200);
        let e = eisenstein_expansion(12, required_truncation(12, &c)).unwrap();
        let a = completed_l_derivative(&e, &real(6.0, 200), 0, &c).unwrap();
        let b = eisenstein_lambda_oracle(12, &real(6.0, 200), 0, &c).unwrap();
        assert!(a.value.dist(&b.value) < 1e-30);
    }

    #[test]
    fn derivative_against_differences_for_delta() {
        let c = ctx(128);
        let d = delta_expansion(required_truncation(12, &c) + 10).unwrap();
        for s in [2.0, 5.0, 10.0] {
            let a = completed_l_derivative(&d, &real(s, 192), 1, &c).unwrap();
            let b = finite_difference_derivative(&d, &real(s, 192), 1, &c).unwrap();
            let tol = Float::with_val(192, &a.est_error + &b.est_error) * 10u32;
            assert!(a.value.dist(&b.value) <= tol, "s = {s}");
        }
        let _ = pow2(0, 64);
    }
}
