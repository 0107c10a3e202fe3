//! Eichler integrals, the eta multiplier, and the numerical 2-cocycle
//! `sigma_f = d^1 v_f`.

use std::cell::Cell;
use std::f64::consts::{LN_2, PI};

use rug::ops::Pow;
use rug::Float;

use crate::arith::{binomial, pi, pow2, two_pi, BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::forms::FourierExpansion;
use crate::periodpoly::LaurentPoly;
use crate::quad::DeRule;

use super::group::GroupElement;

const MAX_LEVEL: u32 = 12;

/// Longest word accepted by [`c_gamma`].
pub const MAX_MULTIPLIER_WORD: usize = 12;
/// Longest word accepted by [`sigma2`].
pub const MAX_SIGMA2_WORD: usize = 4;

fn internal_prec(ctx: &PrecisionContext) -> u32 {
    ctx.bits() + 64
}

/// Smallest `N` with `sum_{n>N} 2 n^k e^{-2 pi n y} < 2^{target_log2 - 8}`.
fn terms_needed(k: u32, y: f64, target_log2: i64) -> usize {
    let goal = (target_log2 - 8) as f64 * LN_2 + (1.0 - (-PI * y).exp()).ln();
    let turn = (k as f64 / (PI * y)).ceil() as usize;
    let term = |n: usize| 2f64.ln() + k as f64 * (n as f64).ln() - 2.0 * PI * n as f64 * y;
    (1..).find(|&n| n >= turn && term(n + 1) < goal).unwrap()
}

/// `e^{2 pi i w}`.
fn q_of(w: &BigComplex) -> BigComplex {
    let p = w.prec();
    w.scale(&two_pi(p)).mul_i().exp()
}

/// `sum_{n=1}^{N} a_n q^n`.
fn q_series(a: &[BigReal], q: &BigComplex, n: usize) -> BigComplex {
    let mut acc = BigComplex::zero(q.prec());
    for c in a[..n].iter().rev() {
        acc.re += c;
        acc = &acc * q;
    }
    acc
}

/// `a_1, ..., a_N` at `prec` bits.
fn coefficients(f: &FourierExpansion, prec: u32) -> Vec<BigReal> {
    (1..f.truncation()).map(|n| f.coeff(n, prec)).collect()
}

fn check_terms(f: &FourierExpansion, n: usize) -> Result<()> {
    if n + 1 > f.truncation() {
        return Err(Error::TruncationInsufficient(format!(
            "weight {} needs {} coefficients here, form has {}",
            f.weight,
            n + 1,
            f.truncation()
        )));
    }
    Ok(())
}

fn require_upper(z: &BigComplex) -> Result<()> {
    if z.im <= 0 {
        return Err(Error::invalid("point must lie in the upper half-plane"));
    }
    Ok(())
}

/// `v` beyond which `e^{-2 pi v} v^a < 2^{-bits}`.
fn cutoff(a: f64, bits: u32) -> f64 {
    let mut v = 2.0f64;
    for _ in 0..50 {
        v = (((bits as f64 + 8.0) * LN_2 + a * v.ln()) / (2.0 * PI)).max(2.0);
    }
    v + 1.0
}

/// `F(z) = int_inf^z f(tau) (tau - z)^{k-2} dtau` for cuspidal `f`, termwise:
/// `F(z) = c_k sum a_n n^{1-k} e^{2 pi i n z}`, `c_k = -i^{k-1} (k-2)! / (2 pi)^{k-1}`.
pub fn eichler_f(f: &FourierExpansion, z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    if !f.is_cusp() {
        return Err(Error::invalid("Eichler integral needs a cusp form"));
    }
    require_upper(z)?;
    let k = f.weight;
    let prec = internal_prec(ctx) + k;
    let z = z.with_prec(prec);
    let n = terms_needed(k, z.im.to_f64(), ctx.target_log2() - k as i64);
    check_terms(f, n)?;
    let a: Vec<BigReal> = (1..=n)
        .map(|j| f.coeff(j, prec) / Float::with_val(prec, j as u32).pow(k - 1))
        .collect();
    let sum = q_series(&a, &q_of(&z), n);
    let ck = Float::with_val(prec, &crate::arith::factorial(k - 2)) / two_pi(prec).pow(k - 1);
    Ok(sum.scale(&ck).mul_i_pow(k as i64 - 1).scale(&Float::with_val(prec, -1)))
}

/// Integrand factor along the ray `w = z + it`.
struct Ray<'a> {
    a: &'a [BigReal],
    k: u32,
    z: BigComplex,
    target_log2: i64,
}

impl Ray<'_> {
    /// `-i int_0^inf g(z+it) (it)^{k-2} h(z+it) dt` with `g = f - a_0`.
    fn integrate<H>(&self, prec: u32, target: &BigReal, start: u32, mut h: H) -> Result<(BigComplex, BigReal, u32)>
    where
        H: FnMut(&BigComplex) -> Result<BigComplex>,
    {
        let k = self.k;
        let y0 = self.z.im.to_f64();
        let x_max = cutoff(k as f64, prec);
        let zero = Float::new(prec);
        for level in start.max(3)..=MAX_LEVEL {
            let rule = DeRule::half_line(&zero, x_max, level, prec);
            let mut fine = BigComplex::zero(prec);
            let mut coarse = BigComplex::zero(prec);
            let mut mass = Float::new(prec);
            for node in &rule.nodes {
                let t = &node.x;
                let y = y0 + t.to_f64();
                // the tail is weighted by t^{k-2}
                let t_log2 = (k - 2) as f64 * t.to_f64().max(1.0).log2();
                let n = terms_needed(k, y, self.target_log2 - t_log2.ceil() as i64).min(self.a.len());
                let w = &self.z + &BigComplex::new(Float::new(prec), t.clone());
                let g = q_series(self.a, &q_of(&w), n);
                if g.is_zero() {
                    continue;
                }
                let tk = BigComplex::from_real(t.clone().pow(k - 2)).mul_i_pow(k as i64 - 2);
                let v = (&(&g * &tk) * &h(&w)?).scale(&node.w);
                mass += v.abs();
                if node.coarse {
                    coarse += &v;
                }
                fine += &v;
            }
            let coarse = coarse.scale(&Float::with_val(prec, 2));
            let err = (&fine - &coarse).abs() + mass * pow2(-(prec as i64) + 8, prec);
            if err <= *target {
                return Ok((fine.mul_i_pow(-1), err, level));
            }
        }
        Err(Error::PrecisionInfeasible(format!("ray quadrature did not resolve at level {MAX_LEVEL}")))
    }
}

/// `F(z)` by exp-sinh quadrature of the defining integral along the vertical
/// ray from `z`, with an error estimate.
pub fn eichler_f_quadrature(f: &FourierExpansion, z: &BigComplex, ctx: &PrecisionContext) -> Result<(BigComplex, BigReal)> {
    if !f.is_cusp() {
        return Err(Error::invalid("Eichler integral needs a cusp form"));
    }
    require_upper(z)?;
    let prec = internal_prec(ctx);
    let a = coefficients(f, prec);
    check_terms(f, terms_needed(f.weight, z.im.to_f64(), ctx.target_log2()))?;
    let ray = Ray {
        a: &a,
        k: f.weight,
        z: z.with_prec(prec),
        target_log2: ctx.target_log2(),
    };
    let (v, e, _) = ray.integrate(prec, ctx.target(), 3, |_| Ok(BigComplex::one(prec)))?;
    Ok((v, e))
}

/// `log eta(tau) = pi i tau / 12 + sum_{n>=1} log(1 - q^n)`.
pub fn log_eta(tau: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    require_upper(tau)?;
    let prec = internal_prec(ctx);
    let tau = tau.with_prec(prec);
    let q = q_of(&tau);
    let y = tau.im.to_f64();
    // |log(1 - x)| <= 2|x| for |x| <= 1/2
    let goal = (ctx.target_log2() - 8) as f64 * LN_2 + (1.0 - (-2.0 * PI * y).exp()).ln();
    let n_max = (1..)
        .find(|&n: &usize| {
            let x = 2.0 * PI * y * n as f64;
            2f64.ln() - x < goal && (-x).exp() < 0.5
        })
        .unwrap();
    let mut acc = tau.scale(&pi(prec)).mul_i().scale(&Float::with_val(prec, 12).recip());
    let mut qn = BigComplex::one(prec);
    let one = BigComplex::one(prec);
    for _ in 0..n_max {
        qn = &qn * &q;
        acc += &(&one - &qn).ln();
    }
    Ok(acc)
}

/// `c_gamma` in `u(gamma tau) = u(tau) + log j(gamma, tau) + c_gamma`,
/// `u = 2 log eta`, principal logarithms.
#[derive(Clone, Debug)]
pub struct EtaMultiplier {
    pub gamma: GroupElement,
    pub c_gamma: BigComplex,
}

fn multiplier_at(g: &GroupElement, tau: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let u0 = log_eta(tau, ctx)?;
    let u1 = log_eta(&g.apply(tau), ctx)?;
    let two = Float::with_val(u0.prec(), 2);
    Ok(&(&u1 - &u0).scale(&two) - &g.j(tau).ln())
}

pub fn c_gamma(g: &GroupElement, ctx: &PrecisionContext) -> Result<EtaMultiplier> {
    if g.word.len() > MAX_MULTIPLIER_WORD {
        return Err(Error::invalid(format!("word `{}` longer than {MAX_MULTIPLIER_WORD}", g.word)));
    }
    let prec = internal_prec(ctx);
    let c0 = multiplier_at(g, &BigComplex::from_f64(0.0, 2.0, prec), ctx)?;
    let c1 = multiplier_at(g, &BigComplex::from_f64(-0.3, 1.25, prec), ctx)?;
    let diff = c0.dist(&c1);
    if diff > 1e-3 {
        let turns = Float::with_val(prec, &c0.im - &c1.im) / two_pi(prec);
        return Err(Error::BranchAmbiguity(format!(
            "c for {} differs by {:.6} turns of 2 pi i between base points",
            g.word,
            turns.to_f64()
        )));
    }
    if diff > Float::with_val(prec, ctx.target() * 1024u32) {
        return Err(Error::PrecisionInfeasible(format!(
            "eta multiplier for {} agrees only to {:.3e} between base points",
            g.word,
            diff.to_f64()
        )));
    }
    Ok(EtaMultiplier {
        gamma: g.clone(),
        c_gamma: c0,
    })
}

/// Evaluates `v_f(gamma)(z)`.
struct Cochain<'a> {
    f: &'a FourierExpansion,
    a: Vec<BigReal>,
    a0: BigReal,
    prec: u32,
    ctx: &'a PrecisionContext,
    /// Level that resolved the previous ray; neighbouring points need about the same.
    level_hint: Cell<u32>,
}

impl Cochain<'_> {
    fn h(g: &GroupElement, c: &BigComplex, w: &BigComplex) -> BigComplex {
        &g.j(w).ln() + c
    }

    fn value(&self, m: &EtaMultiplier, z: &BigComplex) -> Result<(BigComplex, BigReal)> {
        let g = &m.gamma;
        let prec = self.prec;
        if g.b == 0 && g.c == 0 {
            // +-I acts trivially on u
            return Ok((BigComplex::zero(prec), Float::new(prec)));
        }
        let k = self.f.weight;
        let z = z.with_prec(prec);
        check_terms(self.f, terms_needed(k, z.im.to_f64(), self.ctx.target_log2()))?;
        let ray = Ray {
            a: &self.a,
            k,
            z: z.clone(),
            target_log2: self.ctx.target_log2(),
        };
        let sign = g.c.cmp0();
        let upper = |w: &BigComplex| g.j(w).im.cmp0() == Some(sign);
        let (mut val, mut err, level) = ray.integrate(prec, self.ctx.target(), self.level_hint.get() - 1, |w| {
            // Im(cw + d) = c Im(w) keeps one sign, so the principal log is continuous
            if !upper(w) {
                return Err(Error::BranchAmbiguity(format!("j({}, w) left its half-plane", g.word)));
            }
            Ok(Self::h(g, &m.c_gamma, w))
        })?;
        self.level_hint.set(level);
        if !self.a0.is_zero() {
            let (seg, e) = self.segment(m, &z)?;
            val += &seg.scale(&self.a0);
            err += e * Float::with_val(prec, self.a0.abs_ref());
        }
        Ok((val, err))
    }

    /// `int_i^z (w - z)^{k-2} h(w) dw` on the straight segment.
    fn segment(&self, m: &EtaMultiplier, z: &BigComplex) -> Result<(BigComplex, BigReal)> {
        let prec = self.prec;
        let k = self.f.weight;
        let i = BigComplex::from_f64(0.0, 1.0, prec);
        let dz = z - &i;
        if dz.is_zero() {
            return Ok((BigComplex::zero(prec), Float::new(prec)));
        }
        let scale = dz.powi(k - 1);
        let target = Float::with_val(prec, self.ctx.target() / scale.abs());
        for level in 3..=MAX_LEVEL {
            let rule = DeRule::unit_interval(level, prec);
            let est = rule.integrate_complex(|node| {
                let s1 = Float::with_val(prec, &node.x - 1u32).pow(k - 2);
                let w = &i + &dz.scale(&node.x);
                Self::h(&m.gamma, &m.c_gamma, &w).scale(&s1)
            });
            let err = est.error() + pow2(-(prec as i64) + 16, prec);
            if err <= target {
                let e = err * scale.abs();
                return Ok((&est.fine * &scale, e));
            }
        }
        Err(Error::PrecisionInfeasible(format!("segment quadrature did not resolve at level {MAX_LEVEL}")))
    }
}

/// `(d^1 v_f)(g1, g2)` as a polynomial, with the quadrature error of the
/// samples and the residual of the fit at the check points.
#[derive(Clone, Debug)]
pub struct Sigma2Fit {
    pub poly: LaurentPoly,
    pub quad_error: BigReal,
    pub fit_residual: BigReal,
}

/// Points off the interpolation nodes at which the fit is checked.
pub const CHECK_POINTS: usize = 6;

/// Coefficients needed by [`sigma2`] with first argument `g1`.
pub fn sigma2_truncation(k: u32, g1: &GroupElement, ctx: &PrecisionContext) -> usize {
    let y_min = (0..256)
        .map(|j| {
            let (s, c) = (j as f64 * PI / 128.0).sin_cos();
            let z = BigComplex::from_f64(c, 2.0 + s, 64);
            g1.apply(&z).im.to_f64().min(z.im.to_f64())
        })
        .fold(f64::INFINITY, f64::min);
    terms_needed(k, 0.95 * y_min, ctx.target_log2()) + 1
}

/// Coefficients needed by [`log_weighted_integral`], which samples `f` down
/// to `Im z = 1`.
pub fn log_integral_truncation(k: u32, ctx: &PrecisionContext) -> usize {
    terms_needed(k, 0.9, ctx.target_log2()) + 1
}

/// `sigma_f(g1, g2) = v(g2)|g1 - v(g2 g1) + v(g1)` sampled at `k - 1 + 6`
/// points of `|z - 2i| = 1`, interpolated at the first `k - 1` (roots of
/// unity about `2i`) and checked at the rest.
pub fn sigma2(f: &FourierExpansion, g1: &GroupElement, g2: &GroupElement, ctx: &PrecisionContext) -> Result<Sigma2Fit> {
    for g in [g1, g2] {
        if g.word.len() > MAX_SIGMA2_WORD {
            return Err(Error::invalid(format!("word `{}` longer than {MAX_SIGMA2_WORD}", g.word)));
        }
    }
    let k = f.weight;
    let prec = internal_prec(ctx) + 2 * k;
    let g21 = g2.mul(g1);
    let m1 = c_gamma(g1, ctx)?;
    let m2 = c_gamma(g2, ctx)?;
    let m21 = c_gamma(&g21, ctx)?;
    let cochain = Cochain {
        f,
        a: coefficients(f, prec),
        a0: f.coeff(0, prec),
        prec,
        ctx,
        level_hint: Cell::new(4),
    };
    let sample = |z: &BigComplex| -> Result<(BigComplex, BigReal)> {
        let gz = g1.apply(z);
        let j = g1.j(z).powi(k - 2);
        let (a, ea) = cochain.value(&m2, &gz)?;
        let (b, eb) = cochain.value(&m21, z)?;
        let (c, ec) = cochain.value(&m1, z)?;
        let val = &(&(&a * &j) - &b) + &c;
        Ok((val, ea * j.abs() + eb + ec))
    };
    let n = (k - 1) as usize;
    let center = BigComplex::from_f64(0.0, 2.0, prec);
    let tau = two_pi(prec);
    let unit = |theta: &BigReal| {
        let (s, c) = theta.clone().sin_cos(Float::new(prec));
        BigComplex::new(c, s)
    };
    let mut values = Vec::with_capacity(n);
    let mut quad_error = Float::new(prec);
    for j in 0..n {
        let zeta = unit(&(Float::with_val(prec, &tau * j as u32) / n as u32));
        let (v, e) = sample(&(&center + &zeta))?;
        quad_error = quad_error.max(&e);
        values.push(v);
    }
    // b_m = (1/n) sum_j V_j zeta_j^{-m}
    let mut b = vec![BigComplex::zero(prec); n];
    for (m, bm) in b.iter_mut().enumerate() {
        for (j, v) in values.iter().enumerate() {
            let ang = Float::with_val(prec, &tau * ((j * m) % n) as u32) / n as u32;
            *bm += &(v * &unit(&ang).conj());
        }
        *bm = bm.scale(&Float::with_val(prec, n as u32).recip());
    }
    let eval_local = |zeta: &BigComplex| {
        let mut acc = BigComplex::zero(prec);
        for c in b.iter().rev() {
            acc = &(&acc * zeta) + c;
        }
        acc
    };
    let mut fit_residual = Float::new(prec);
    for c in 0..CHECK_POINTS {
        let theta = Float::with_val(prec, &tau * (2 * c as u32 + 1)) / (2 * CHECK_POINTS as u32) + Float::with_val(prec, 0.1);
        let zeta = unit(&theta);
        let (v, e) = sample(&(&center + &zeta))?;
        quad_error = quad_error.max(&e);
        fit_residual = fit_residual.max(&v.dist(&eval_local(&zeta)));
    }
    let allowed = Float::with_val(prec, &quad_error * 1000u32) + pow2(-(prec as i64) / 2, prec);
    if fit_residual > allowed {
        return Err(Error::FitResidualExceeded(format!(
            "residual {:.3e} against quadrature error {:.3e} for sigma({}, {})",
            fit_residual.to_f64(),
            quad_error.to_f64(),
            g1.word,
            g2.word
        )));
    }
    // P(z) = sum_m b_m (z - 2i)^m
    let minus_2i = BigComplex::from_f64(0.0, -2.0, prec);
    let mut coeffs = vec![BigComplex::zero(prec); n];
    for (m, bm) in b.iter().enumerate() {
        let mut shift = BigComplex::one(prec);
        for e in (0..=m).rev() {
            coeffs[e] += &(bm * &shift).scale_int(&binomial(m as u32, e as i64));
            shift = &shift * &minus_2i;
        }
    }
    let amplification = Float::with_val(prec, 3u32).pow(k - 2);
    let err = Float::with_val(prec, &quad_error + &fit_residual) * amplification;
    let poly = LaurentPoly::new(0, coeffs, k, format!("sigma2({},{})", g1.word, g2.word), err);
    Ok(Sigma2Fit {
        poly,
        quad_error,
        fit_residual,
    })
}

/// `int_0^inf f(w) (w - z)^{k-2} (log w - pi i / 2) dw` for cuspidal `f`,
/// integrated along `w = iv` over `(0, inf)` with `f(i/v) = i^k v^k f(iv)`
/// for `v < 1`.
pub fn log_weighted_integral(f: &FourierExpansion, ctx: &PrecisionContext) -> Result<LaurentPoly> {
    if !f.is_cusp() {
        return Err(Error::invalid("the log-weighted integral converges for cusp forms only"));
    }
    let k = f.weight;
    let prec = internal_prec(ctx) + 2 * k;
    let a = coefficients(f, prec);
    let n = terms_needed(k, 1.0, ctx.target_log2() - 2 * k as i64);
    check_terms(f, n)?;
    let w = (k - 2) as usize;
    let x_max = cutoff(k as f64, prec);
    let zero = Float::new(prec);
    let tp = two_pi(prec);
    let f_iv = |v: &BigReal| -> BigReal {
        // f(iv) for v >= 1 from the q-series
        let q = Float::with_val(prec, -Float::with_val(prec, &tp * v)).exp();
        let mut acc = Float::new(prec);
        for c in a[..n].iter().rev() {
            acc += c;
            acc *= &q;
        }
        acc
    };
    let sign_k = if (k / 2) % 2 == 0 { 1 } else { -1 };
    for level in 3..=MAX_LEVEL {
        let rule = DeRule::half_line(&zero, x_max, level, prec);
        let mut fine = vec![Float::new(prec); w + 1];
        let mut coarse = vec![Float::new(prec); w + 1];
        for node in &rule.nodes {
            let v = &node.x;
            let fv = if *v >= 1 {
                f_iv(v)
            } else {
                let inv = Float::with_val(prec, v.recip_ref());
                let big = f_iv(&inv);
                if big.is_zero() {
                    continue;
                }
                big * inv.pow(k) * sign_k
            };
            if fv.is_zero() {
                continue;
            }
            let base = Float::with_val(prec, &fv * v.clone().ln()) * &node.w;
            let mut vp = Float::with_val(prec, 1);
            for s in 0..=w {
                let t = Float::with_val(prec, &base * &vp);
                if node.coarse {
                    coarse[s] += &t;
                }
                fine[s] += t;
                vp *= v;
            }
        }
        let mut err = Float::new(prec);
        for s in 0..=w {
            let e = Float::with_val(prec, &fine[s] - Float::with_val(prec, &coarse[s] * 2u32)).abs();
            err = err.max(&e);
        }
        if err <= *ctx.target() {
            // z^j coefficient: i^{k-1-j} (-1)^j C(k-2, j) M_{k-2-j}
            let coeffs = (0..=w)
                .map(|j| {
                    let c = Float::with_val(prec, &fine[w - j] * binomial(k - 2, j as i64));
                    let c = if j % 2 == 1 { -c } else { c };
                    BigComplex::from_real(c).mul_i_pow(k as i64 - 1 - j as i64)
                })
                .collect();
            let bound = err * binomial(k - 2, (k as i64 - 2) / 2);
            return Ok(LaurentPoly::new(0, coeffs, k, "log-weighted", bound));
        }
    }
    Err(Error::PrecisionInfeasible(format!("log-weighted quadrature did not resolve at level {MAX_LEVEL}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_expansion;
    use crate::lfun::required_truncation;
    use crate::periodpoly::build_r;

    fn ctx(bits: u32) -> PrecisionContext {
        PrecisionContext::new(bits).unwrap()
    }

    #[test]
    fn multipliers_of_generators() {
        let c = ctx(160);
        let s = c_gamma(&GroupElement::s(), &c).unwrap().c_gamma;
        let want = BigComplex::new(Float::new(224), -pi(224) / 2u32);
        assert!(s.dist(&want) < 1e-40, "{s}");
        let t = c_gamma(&GroupElement::t(), &c).unwrap().c_gamma;
        let want = BigComplex::new(Float::new(224), pi(224) / 6u32);
        assert!(t.dist(&want) < 1e-40, "{t}");
        let id = c_gamma(&GroupElement::identity(), &c).unwrap().c_gamma;
        assert!(id.abs() < 1e-40);
    }

    #[test]
    fn eichler_integral_is_periodic_and_matches_quadrature() {
        let c = ctx(160);
        let d = delta_expansion(required_truncation(12, &c) + 40).unwrap();
        let z = BigComplex::from_f64(0.2, 0.9, 224);
        let f0 = eichler_f(&d, &z, &c).unwrap();
        let f1 = eichler_f(&d, &(&z + &BigComplex::one(224)), &c).unwrap();
        assert!(f0.dist(&f1) < 1e-40);
        let (q, e) = eichler_f_quadrature(&d, &z, &c).unwrap();
        assert!(f0.dist(&q) <= Float::with_val(64, &e * 10u32) + 1e-44, "{f0} {q}");
    }

    #[test]
    fn eichler_integral_gives_the_period_polynomial() {
        let c = ctx(160);
        let d = delta_expansion(required_truncation(12, &c) + 40).unwrap();
        let r = build_r(&d, &c).unwrap();
        for (x, y) in [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)] {
            let z = BigComplex::from_f64(x, y, 224);
            let sz = GroupElement::s().apply(&z);
            let lhs = &(&eichler_f(&d, &sz, &c).unwrap() * &z.powi(10)) - &eichler_f(&d, &z, &c).unwrap();
            assert!(lhs.dist(&r.eval(&z)) < 1e-35, "z = ({x}, {y})");
        }
    }

    #[test]
    fn sigma2_of_delta_at_s_s() {
        let c = ctx(100);
        let s = GroupElement::s();
        let d = delta_expansion(sigma2_truncation(12, &s, &c)).unwrap();
        let fit = sigma2(&d, &s, &s, &c).unwrap();
        assert!(fit.fit_residual <= Float::with_val(64, &fit.quad_error * 1000u32) + 1e-25);
        let q = crate::periodpoly::build_q(&d, 1, &c).unwrap();
        assert!(fit.poly.add(&q).sup_norm() < 1e-20, "{}", fit.poly.add(&q).sup_norm());
    }

    #[test]
    fn sigma2_with_identity_vanishes() {
        let c = ctx(100);
        let id = GroupElement::identity();
        let e = crate::forms::eisenstein_expansion(12, sigma2_truncation(12, &id, &c)).unwrap();
        let fit = sigma2(&e, &id, &GroupElement::from_word("ST").unwrap(), &c).unwrap();
        assert!(fit.poly.sup_norm() < 1e-20);
    }

    #[test]
    fn log_weighted_integral_is_first_order_q() {
        let c = ctx(160);
        let d = delta_expansion(required_truncation(12, &c) + 40).unwrap();
        let l = log_weighted_integral(&d, &c).unwrap();
        let q = crate::periodpoly::build_q(&d, 1, &c).unwrap();
        assert!(l.distance(&q) < 1e-40, "{}", l.distance(&q));
    }
}
