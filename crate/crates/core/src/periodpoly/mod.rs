//! Period polynomials, their Eisenstein variants, and the polynomials built
//! from derivatives of completed L-functions.

mod poly;

use rug::ops::Pow;
use rug::Float;

use crate::arith::{bernoulli, binomial, factorial, pow2, two_pi, zeta_real, BigComplex, PrecisionContext, Rat};
use crate::eichler::{act_weight, GroupElement};
use crate::error::{Error, Result};
use crate::forms::FourierExpansion;
use crate::lfun::completed_l_derivative;

pub use poly::{parity_part, LaurentPoly, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisensteinFamily {
    /// Zagier's extended period polynomial of `E_k`.
    ZagierTilde,
    /// Brown's period polynomial of `E_k` in closed Bernoulli form.
    BrownClosed,
    Ramanujan,
    LalinSmyth,
    /// `p_m`; the parameter is `m` rather than `k`.
    PM,
}

impl EisensteinFamily {
    pub fn name(self) -> &'static str {
        match self {
            EisensteinFamily::ZagierTilde => "zagier-tilde",
            EisensteinFamily::BrownClosed => "brown-closed",
            EisensteinFamily::Ramanujan => "ramanujan",
            EisensteinFamily::LalinSmyth => "lalin-smyth",
            EisensteinFamily::PM => "p-m",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.replace('_', "-").as_str() {
            "zagier-tilde" => EisensteinFamily::ZagierTilde,
            "brown-closed" => EisensteinFamily::BrownClosed,
            "ramanujan" => EisensteinFamily::Ramanujan,
            "lalin-smyth" => EisensteinFamily::LalinSmyth,
            "p-m" => EisensteinFamily::PM,
            other => return Err(Error::invalid(format!("unknown polynomial family `{other}`"))),
        })
    }
}

fn poly_prec(ctx: &PrecisionContext) -> u32 {
    ctx.bits() + 64
}

/// Polynomial whose coefficients carry only rounding error at `prec` bits.
fn closed_form(min_exp: i64, coeffs: Vec<BigComplex>, k: u32, family: impl Into<String>, prec: u32) -> LaurentPoly {
    let mut p = LaurentPoly::new(min_exp, coeffs, k, family, Float::new(prec));
    p.error_bound = p.sup_norm() * pow2(-(prec as i64) + 16, prec);
    p
}

/// `i^e r` as a complex number.
fn i_pow_rat(e: i64, r: &Rat, prec: u32) -> BigComplex {
    BigComplex::from_rat(r, prec).mul_i_pow(e)
}

/// `(2 pi i)^{-e}` with the power of `i` exact.
fn two_pi_i_pow_neg(e: u32, prec: u32) -> BigComplex {
    let tp = Float::with_val(prec, two_pi(prec).pow(e)).recip();
    BigComplex::from_real(tp).mul_i_pow(-(e as i64))
}

/// Build `sum C(k-2, n) i^{1-n} Lambda^{(m)}(n+1) z^{k-2-n}`; a coefficient
/// whose modulus does not exceed its error bound is set to zero.
fn l_value_poly(f: &FourierExpansion, m: u32, ctx: &PrecisionContext, family: String) -> Result<LaurentPoly> {
    let k = f.weight;
    let w = (k - 2) as usize;
    let mut coeffs = vec![BigComplex::zero(poly_prec(ctx)); w + 1];
    let mut err = Float::new(poly_prec(ctx));
    for n in 0..=w {
        let s = BigComplex::from_f64((n + 1) as f64, 0.0, poly_prec(ctx));
        let v = completed_l_derivative(f, &s, m, ctx)?;
        let c = binomial(k - 2, n as i64);
        let e = Float::with_val(v.est_error.prec(), &v.est_error * &c);
        let mut coeff = v.value.scale_int(&c).mul_i_pow(1 - n as i64);
        if coeff.abs() <= e {
            coeff = BigComplex::zero(coeff.prec());
        }
        if e > err {
            err = e;
        }
        coeffs[w - n] = coeff;
    }
    Ok(LaurentPoly::new(0, coeffs, k, family, err))
}

/// `r_f(z) = -i sum_j C(k-2, j) (iz)^j Lambda_f(j+1)`.
pub fn build_r(f: &FourierExpansion, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    Ok(l_value_poly(f, 0, ctx, "q-m0".into())?.with_family("r"))
}

/// `Q_f(z) = sum_n C(k-2, n) i^{1-n} Lambda_f^{(m)}(n+1) z^{k-2-n}`.
pub fn build_q(f: &FourierExpansion, m: u32, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    l_value_poly(f, m, ctx, format!("q-m{m}"))
}

/// `B_a B_b / (a! b!)`.
fn bernoulli_pair(a: u32, b: u32) -> Rat {
    bernoulli(a) * bernoulli(b) / Rat::from(factorial(a) * factorial(b))
}

/// `zeta(k-1) / (2 pi i)^{k-1}`.
fn zeta_term(k: u32, prec: u32) -> Result<BigComplex> {
    let z = zeta_real(&Float::with_val(prec, k - 1), prec)?;
    Ok(two_pi_i_pow_neg(k - 1, prec).scale(&z))
}

fn check_weight(k: u32) -> Result<()> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::invalid(format!("weight must be even and at least 4, got {k}")));
    }
    Ok(())
}

/// Bernoulli part `-(k-2)!/2 sum_{j=lo}^{hi} B_{2j+2} B_{k-2j-2}/(...) z^{2j+1}`
/// plus the zeta part `(k-2)!/2 zeta(k-1)/(2 pi i)^{k-1} (1 - z^{k-2})`.
fn eisenstein_period(k: u32, lo: i64, hi: i64, prec: u32, family: &str) -> Result<LaurentPoly> {
    let half_fact = Rat::from(factorial(k - 2)) / 2u32;
    let min_exp = (2 * lo + 1).min(0);
    let max_exp = (2 * hi + 1).max(k as i64 - 2);
    let mut coeffs = vec![BigComplex::zero(prec); (max_exp - min_exp + 1) as usize];
    for j in lo..=hi {
        let a = (2 * j + 2) as u32;
        let r = -Rat::from(&half_fact * &bernoulli_pair(a, k - a));
        coeffs[(2 * j + 1 - min_exp) as usize] = BigComplex::from_rat(&r, prec);
    }
    let zt = zeta_term(k, prec)?.scale(&Float::with_val(prec, &half_fact));
    coeffs[(0 - min_exp) as usize] += &zt;
    coeffs[(k as i64 - 2 - min_exp) as usize] -= &zt;
    Ok(closed_form(min_exp, coeffs, k, family, prec))
}

fn ramanujan(k: u32, prec: u32) -> LaurentPoly {
    let coeffs = (0..=k)
        .map(|e| {
            if e % 2 == 0 {
                BigComplex::from_rat(&bernoulli_pair(e, k - e), prec)
            } else {
                BigComplex::zero(prec)
            }
        })
        .collect();
    closed_form(0, coeffs, k, "ramanujan", prec)
}

/// `p_m(z) = zeta(2m+1)/2 (1 - z^{2m}) - (2 pi i)^{2m+1}/2 sum_n B_{2n} B_{2m-2n+2}/(...) z^{2n-1}`.
fn p_m(m: u32, prec: u32) -> Result<LaurentPoly> {
    let z = zeta_real(&Float::with_val(prec, 2 * m + 1), prec)? / 2u32;
    let scale = BigComplex::from_real(Float::with_val(prec, two_pi(prec).pow(2 * m + 1)) / 2u32)
        .mul_i_pow(2 * m as i64 + 1);
    let mut coeffs = vec![BigComplex::zero(prec); 2 * m as usize + 1];
    coeffs[0] = BigComplex::from_real(z.clone());
    coeffs[2 * m as usize] -= &BigComplex::from_real(z);
    for n in 1..=m {
        let r = bernoulli_pair(2 * n, 2 * m - 2 * n + 2);
        let term = &scale * &BigComplex::from_rat(&r, prec);
        coeffs[(2 * n - 1) as usize] -= &term;
    }
    Ok(closed_form(0, coeffs, 2 * m + 2, format!("p-m{m}"), prec))
}

/// The closed-form Eisenstein polynomials. `k_or_m` is the weight, except for
/// `PM` where it is `m`.
pub fn build_eisenstein_family(family: EisensteinFamily, k_or_m: u32, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    let prec = poly_prec(ctx);
    match family {
        EisensteinFamily::PM => {
            if k_or_m == 0 {
                return Err(Error::invalid("p_m needs m >= 1"));
            }
            p_m(k_or_m, prec)
        }
        EisensteinFamily::BrownClosed => {
            check_weight(k_or_m)?;
            eisenstein_period(k_or_m, 0, k_or_m as i64 / 2 - 2, prec, family.name())
        }
        EisensteinFamily::ZagierTilde => {
            check_weight(k_or_m)?;
            eisenstein_period(k_or_m, -1, k_or_m as i64 / 2 - 1, prec, family.name())
        }
        EisensteinFamily::Ramanujan => {
            check_weight(k_or_m)?;
            Ok(ramanujan(k_or_m, prec))
        }
        EisensteinFamily::LalinSmyth => {
            check_weight(k_or_m)?;
            let k = k_or_m;
            let zt = zeta_term(k, prec)?;
            let mut coeffs = vec![BigComplex::zero(prec); k as usize];
            coeffs[k as usize - 1] = zt.clone();
            coeffs[1] = -zt;
            let extra = closed_form(0, coeffs, k, "", prec);
            Ok(ramanujan(k, prec).add(&extra).with_family(family.name()))
        }
    }
}

/// `a_0 ((z+1)^{k-1} - z^{k-1}) / (k-1)` with `a_0 = -B_k/(2k)`: the value at
/// `T` of the cocycle whose value at `S` is Brown's polynomial.
pub fn eisenstein_t_value(k: u32, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    check_weight(k)?;
    let prec = poly_prec(ctx);
    let c = -bernoulli(k) / (2 * k) / (k - 1);
    let coeffs = (0..=k - 2)
        .map(|j| BigComplex::from_rat(&(Rat::from(binomial(k - 1, j as i64)) * &c), prec))
        .collect();
    Ok(closed_form(0, coeffs, k, "brown-t", prec))
}

/// `P(z) = sum_n C(k-2, n) i^{1-n} (-n-1)^{-(m+1)} z^{k-2-n}`.
pub fn build_correction_p(k: u32, m: u32, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    check_weight(k)?;
    let prec = poly_prec(ctx);
    let w = (k - 2) as usize;
    let mut coeffs = vec![BigComplex::zero(prec); w + 1];
    for n in 0..=w {
        let mut den = rug::Integer::from(n as u32 + 1);
        den = den.pow(m + 1);
        if (m + 1) % 2 == 1 {
            den = -den;
        }
        let r = Rat::from((binomial(k - 2, n as i64), den));
        coeffs[w - n] = i_pow_rat(1 - n as i64, &r, prec);
    }
    Ok(closed_form(0, coeffs, k, format!("correction-p-m{m}"), prec))
}

/// `Q_f - a_0 m! (P|_{2-k}(1 + (-1)^{m+1} S))`, which equals
/// `(-1)^m sigma_f(S, ..., S)` with `m + 1` arguments.
pub fn sigma_ss_formula(f: &FourierExpansion, m: u32, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    if m == 0 {
        return Err(Error::invalid("the S..S cocycle formula needs m >= 1"));
    }
    let k = f.weight;
    let q = build_q(f, m, ctx)?;
    if f.is_cusp() {
        return Ok(q.with_family(format!("sigma-ss-m{m}")));
    }
    let p = build_correction_p(k, m, ctx)?;
    let ps = act_weight(&p, &GroupElement::s(), k)?;
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    let combo = p.add(&ps.scale_shift(&BigComplex::from_f64(sign, 0.0, p.prec()), 0));
    let prec = q.prec();
    let a0 = f.coeff(0, prec) * Float::with_val(prec, &factorial(m));
    let corr = combo.scale_shift(&BigComplex::from_real(a0), 0);
    Ok(q.sub(&corr).with_family(format!("sigma-ss-m{m}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{eisenstein_expansion, hecke_eigenforms};
    use crate::lfun::required_truncation;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(200).unwrap()
    }

    fn close(a: &LaurentPoly, b: &LaurentPoly, tol: f64) -> bool {
        let d = a.distance(b);
        d < tol
    }

    #[test]
    fn correction_polynomial_weight_four() {
        let p = build_correction_p(4, 1, &ctx()).unwrap();
        let want = [(0, 0.0, -1.0 / 9.0), (1, 0.5, 0.0), (2, 0.0, 1.0)];
        for (e, re, im) in want {
            let c = p.coeff(e);
            assert!(c.dist(&BigComplex::from_f64(re, im, 128)) < 1e-15, "z^{e}");
        }
        let exact_ninth = Float::with_val(300, &Rat::from((-1, 9)));
        assert!(Float::with_val(300, &p.coeff(0).im - &exact_ninth).abs() < 1e-60);
    }

    #[test]
    fn ramanujan_constant_term() {
        let r = build_eisenstein_family(EisensteinFamily::Ramanujan, 12, &ctx()).unwrap();
        let want = Rat::from((-691, 2730)) / Rat::from(factorial(12));
        let got = r.coeff(0);
        assert!(Float::with_val(300, &got.re - Float::with_val(300, &want)).abs() < 1e-70);
        assert_eq!(want, Rat::from((-691, 2730u64 * 479001600)));
    }

    #[test]
    fn zagier_minus_brown_lives_on_the_ends() {
        let c = ctx();
        for k in (4..=50).step_by(2) {
            let z = build_eisenstein_family(EisensteinFamily::ZagierTilde, k, &c).unwrap();
            let b = build_eisenstein_family(EisensteinFamily::BrownClosed, k, &c).unwrap();
            let d = z.sub(&b);
            let support: Vec<i64> = d.support();
            assert!(support.iter().all(|e| [-1, 1, k as i64 - 3, k as i64 - 1].contains(e)), "k={k}: {support:?}");
            // a_0 / (k-1) on z^{-1} and z^{k-1}
            let a0 = -bernoulli(k) / (2 * k) / (k - 1);
            let want = BigComplex::from_rat(&a0, 300);
            let tol = want.abs() * 1e-60;
            assert!(d.coeff(-1).dist(&want) < tol, "k={k}");
            assert!(d.coeff(k as i64 - 1).dist(&want) < tol, "k={k}");
        }
    }

    #[test]
    fn brown_pair_is_a_cocycle() {
        use crate::eichler::{relation_defects, CocycleAssignment};
        let c = ctx();
        for k in [4u32, 12, 30] {
            let b = build_eisenstein_family(EisensteinFamily::BrownClosed, k, &c).unwrap();
            let a = CocycleAssignment::new(k, b, eisenstein_t_value(k, &c).unwrap()).unwrap();
            let (s2, st3) = relation_defects(&a).unwrap();
            assert!(s2.sup_norm() < 1e-40 && st3.sup_norm() < 1e-40, "k = {k}");
        }
    }

    #[test]
    fn brown_from_l_values() {
        let c = ctx();
        for k in [4u32, 12, 26] {
            let e = eisenstein_expansion(k, required_truncation(k, &c)).unwrap();
            let r = build_r(&e, &c).unwrap();
            let b = build_eisenstein_family(EisensteinFamily::BrownClosed, k, &c).unwrap();
            assert!(close(&r, &b, 1e-30), "k = {k}: {}", r.distance(&b));
        }
    }

    #[test]
    fn p_m_matches_scaled_brown() {
        let c = ctx();
        for k in (4..=30).step_by(2) {
            let p = build_eisenstein_family(EisensteinFamily::PM, k / 2 - 1, &c).unwrap();
            let b = build_eisenstein_family(EisensteinFamily::BrownClosed, k, &c).unwrap();
            let prec = b.prec();
            let scale = two_pi_i_pow_neg(k - 1, prec).recip().scale(&Float::with_val(prec, &factorial(k - 2)).recip());
            let scaled = b.scale_shift(&scale, 0);
            let rel = p.distance(&scaled) / p.sup_norm();
            assert!(rel < 1e-30, "k = {k}");
        }
    }

    #[test]
    fn ramanujan_is_odd_part_times_minus_two_z() {
        let c = ctx();
        for k in (4..=50).step_by(2) {
            let rt = build_eisenstein_family(EisensteinFamily::ZagierTilde, k, &c).unwrap();
            let prec = rt.prec();
            let s = BigComplex::from_real(Float::with_val(prec, &factorial(k - 2)).recip() * -2i32);
            let lhs = parity_part(&rt, Parity::Odd).scale_shift(&s, 1);
            let ram = build_eisenstein_family(EisensteinFamily::Ramanujan, k, &c).unwrap();
            assert!(close(&lhs, &ram, 1e-30), "k = {k}");
            let full = rt.scale_shift(&s, 1);
            let ls = build_eisenstein_family(EisensteinFamily::LalinSmyth, k, &c).unwrap();
            assert!(close(&full, &ls, 1e-30), "k = {k}");
        }
    }

    #[test]
    fn q_at_order_zero_is_r_and_symmetric() {
        let c = ctx();
        let pkg = hecke_eigenforms(24, required_truncation(24, &c), &c).unwrap();
        for f in &pkg.forms {
            let r = build_r(f, &c).unwrap();
            for m in 0..=2u32 {
                let q = build_q(f, m, &c).unwrap();
                if m == 0 {
                    assert!(q.distance(&r) <= Float::with_val(64, &q.error_bound * 2u32) + 1e-60);
                }
                let eps = BigComplex::from_f64(if m % 2 == 0 { 1.0 } else { -1.0 }, 0.0, 64);
                assert!(q.self_inversive_defect(22, &eps) < 1e-25, "m = {m}");
            }
        }
    }

    #[test]
    fn cusp_formula_reduces_to_q() {
        let c = ctx();
        let pkg = hecke_eigenforms(12, required_truncation(12, &c), &c).unwrap();
        let q = build_q(&pkg.forms[0], 1, &c).unwrap();
        let s = sigma_ss_formula(&pkg.forms[0], 1, &c).unwrap();
        assert!(q.distance(&s).is_zero());
    }
}
