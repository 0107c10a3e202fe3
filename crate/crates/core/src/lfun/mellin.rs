//! Termwise Mellin evaluation of `Lambda_f^{(m)}(s)`.
//!
//! For each form an evaluator caches the exp-sinh nodes `v_j` on `[1, inf)`
//! together with `g_j = sum_{n<=N} a_n e^{-2 pi n v_j}`, so every further
//! `(s, m)` costs one pass over the nodes.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock, RwLock};

use rug::ops::Pow;
use rug::Float;

use crate::arith::{exponent, pow2, to_hex_literal, two_pi, BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::forms::{Coefficients, FourierExpansion};
use crate::quad::DeRule;

pub const MAX_DERIVATIVE: u32 = 8;
const MAX_LEVEL: u32 = 14;

/// Bits carried internally above the working precision.
pub(crate) fn internal_bits(ctx: &PrecisionContext, k: u32) -> u32 {
    ctx.bits() + 64 + 2 * k
}

/// Exponent growth `A` with `v^{Re s - 1}, v^{k - Re s - 1} (log v)^m <= e^{A (v-1)}`.
pub(crate) fn growth(k: u32, sigma: f64, m: u32) -> f64 {
    (sigma - 1.0).max(k as f64 - sigma - 1.0).max(0.0) + m as f64
}

/// `log2` of the truncation bound `sum_{n>N} 2 n^k * 2 e^{-2 pi n} / (2 pi n - A)`.
pub(crate) fn tail_log2(k: u32, a: f64, n: usize) -> f64 {
    let mut start = n + 1;
    while 2.0 * PI * start as f64 <= a + 1.0 {
        start += 1;
    }
    if start > n + 1 {
        return f64::INFINITY;
    }
    let term = |m: usize| {
        let x = m as f64;
        4f64.ln() + k as f64 * x.ln() - 2.0 * PI * x - (2.0 * PI * x - a).ln()
    };
    let mut peak = f64::NEG_INFINITY;
    let mut acc = 0.0f64;
    let mut m = start;
    loop {
        let t = term(m);
        if t > peak {
            acc = acc * (peak - t).exp() + 1.0;
            peak = t;
        } else {
            acc += (t - peak).exp();
        }
        if t < peak - 60.0 && m as f64 > k as f64 / (2.0 * PI) + 1.0 {
            break;
        }
        m += 1;
    }
    (peak + acc.ln()) / LN_2
}

/// Smallest `N` whose tail bound stays below `2^{target_log2} / 10` for the
/// growth `a`.
pub(crate) fn terms_for(k: u32, a: f64, target_log2: i64) -> usize {
    let goal = target_log2 as f64 - 10f64.log2();
    (1..).find(|&n| tail_log2(k, a, n) < goal).unwrap()
}

/// Truncation that serves every `s` in the closed critical strip and every
/// derivative order up to the cap.
pub fn required_truncation(k: u32, ctx: &PrecisionContext) -> usize {
    terms_for(k, growth(k, 0.0, MAX_DERIVATIVE), ctx.target_log2())
}

/// `v` beyond which `e^{-2 pi v} v^a < 2^{-bits}`.
fn cutoff(a: f64, bits: u32) -> f64 {
    let mut v = 2.0f64;
    for _ in 0..50 {
        v = ((bits as f64 + 8.0) * LN_2 + a * v.ln()) / (2.0 * PI);
        v = v.max(2.0);
    }
    v + 1.0
}

/// Smallest level at which the probes `n^k int e^{-2 pi n v} v^a` resolve,
/// to the target or to working precision.
fn choose_level(k: u32, a: f64, x_max: f64, prec: u32, target_log2: i64) -> Result<u32> {
    let one = Float::with_val(prec, 1);
    let tp = two_pi(prec);
    let mid = ((k as f64) / (2.0 * PI)).round().max(1.0) as u32;
    let probes = [1u32, mid, 2 * mid];
    let ai = a.ceil() as u32;
    for level in 3..=MAX_LEVEL {
        let rule = DeRule::half_line(&one, x_max, level, prec);
        let ok = probes.iter().all(|&n| {
            let est = rule.integrate_real(|node| {
                let e = Float::with_val(prec, &tp * &node.x) * n;
                (-e).exp() * node.x.clone().pow(ai)
            });
            let scale = (k as f64) * (n as f64).log2() + 1.0;
            let err = est.error();
            // either below target or already at the rounding floor
            err.is_zero()
                || (exponent(&err) as f64 + scale) < (target_log2 - 8) as f64
                || exponent(&err) < exponent(&est.fine) - prec as i64 + 24
        });
        if ok {
            return Ok(level);
        }
    }
    Err(Error::PrecisionInfeasible(format!(
        "quadrature did not resolve at level {MAX_LEVEL}"
    )))
}

pub(crate) struct Node {
    v: BigReal,
    ln_v: BigReal,
    /// `w_j g_j`.
    wg: BigReal,
    coarse: bool,
}

pub(crate) struct Evaluator {
    k: u32,
    prec: u32,
    reach: f64,
    level: u32,
    terms: usize,
    a0: BigReal,
    nodes: Vec<Node>,
}

fn fingerprint(f: &FourierExpansion) -> u64 {
    let mut h = DefaultHasher::new();
    f.weight.hash(&mut h);
    f.kind.hash(&mut h);
    match &f.coeffs {
        Coefficients::Exact(v) => v.iter().for_each(|a| a.to_string().hash(&mut h)),
        Coefficients::Real(v) => v.iter().for_each(|a| to_hex_literal(a).hash(&mut h)),
    }
    h.finish()
}

impl Evaluator {
    fn build(f: &FourierExpansion, ctx: &PrecisionContext, reach: f64, level: Option<u32>) -> Result<Evaluator> {
        let k = f.weight;
        let prec = internal_bits(ctx, k);
        let terms = terms_for(k, reach, ctx.target_log2());
        if f.truncation() < terms {
            return Err(Error::TruncationInsufficient(format!(
                "weight {k} needs {terms} coefficients, form has {}",
                f.truncation()
            )));
        }
        // crude coefficient bound the tail estimate relies on
        for n in 1..=f.truncation() {
            let a = f.coeff(n, 64).abs();
            let bound = Float::with_val(64, n as u32).pow(k) * 2u32;
            if a > bound {
                return Err(Error::CoefficientBound(n));
            }
        }
        let x_max = cutoff(reach + k as f64, prec);
        let level = match level {
            Some(l) => l,
            None => choose_level(k, reach, x_max, prec, ctx.target_log2() - 2 * k as i64)?,
        };
        let one = Float::with_val(prec, 1);
        let rule = DeRule::half_line(&one, x_max, level, prec);
        let coeffs: Vec<BigReal> = (1..=terms).map(|n| f.coeff(n, prec)).collect();
        let tp = two_pi(prec);
        let nodes = rule
            .nodes
            .into_iter()
            .map(|node| {
                let q = Float::with_val(prec, -Float::with_val(prec, &tp * &node.x)).exp();
                let mut g = Float::new(prec);
                for a in coeffs.iter().rev() {
                    g += a;
                    g *= &q;
                }
                let ln_v = Float::with_val(prec, node.x.ln_ref());
                Node {
                    wg: g * &node.w,
                    v: node.x,
                    ln_v,
                    coarse: node.coarse,
                }
            })
            .collect();
        Ok(Evaluator {
            k,
            prec,
            reach,
            level,
            terms,
            a0: f.coeff(0, prec),
            nodes,
        })
    }

    /// `(value, quadrature + rounding error)` without the `a_0` terms.
    fn integral(&self, s: &BigComplex, m: u32) -> (BigComplex, BigReal) {
        let p = self.prec;
        let k = self.k as i64;
        // i^k (-1)^m is real for even k
        let eps = if (self.k / 2 + m) % 2 == 0 { 1 } else { -1 };
        let s_int = if s.im.is_zero() && s.re.is_integer() {
            s.re.to_integer().and_then(|z| z.to_i64())
        } else {
            None
        };
        let mut fine = BigComplex::zero(p);
        let mut coarse = BigComplex::zero(p);
        let mut mass = Float::new(p);
        for node in &self.nodes {
            let lm = Float::with_val(p, node.ln_v.clone().pow(m));
            let weight = Float::with_val(p, &node.wg * &lm);
            if weight.is_zero() {
                continue;
            }
            let kernel = match s_int {
                Some(si) => {
                    let a = node.v.clone().pow((si - 1) as i32);
                    let b = node.v.clone().pow((k - si - 1) as i32);
                    BigComplex::from_real(a + b * eps)
                }
                None => {
                    let ln_v = BigComplex::from_real(node.ln_v.clone());
                    let s1 = &(s - &BigComplex::one(p)) * &ln_v;
                    let s2 = &(&BigComplex::from_f64((k - 1) as f64, 0.0, p) - s) * &ln_v;
                    let b = s2.exp();
                    &s1.exp() + &b.scale(&Float::with_val(p, eps))
                }
            };
            let term = kernel.scale(&weight);
            mass += term.abs();
            if node.coarse {
                coarse += &term;
            }
            fine += &term;
        }
        let coarse = coarse.scale(&Float::with_val(p, 2));
        let quad_err = (&fine - &coarse).abs();
        let rounding = mass * pow2(-(p as i64) + 8, p);
        (fine, quad_err + rounding)
    }

    /// `Lambda^{(m)}(s)` and its error bound.
    pub(crate) fn evaluate(&self, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<(BigComplex, BigReal)> {
        let p = self.prec;
        let s = &s.with_prec(p.max(s.prec()));
        let (mut value, err) = self.integral(s, m);
        let tail = tail_log2(self.k, growth(self.k, s.re.to_f64(), m), self.terms);
        let tail = Float::with_val(p, Float::i_exp(1, tail.ceil() as i32));
        if !self.a0.is_zero() {
            let k = BigComplex::from_f64(self.k as f64, 0.0, p);
            let fact = Float::with_val(p, &crate::arith::factorial(m));
            let inv_s = s.recip().powi(m + 1).scale(&fact);
            let inv_s = if m % 2 == 1 { -inv_s } else { inv_s };
            let inv_ks = (&k - s).recip().powi(m + 1).scale(&fact);
            let ik = if (self.k / 2) % 2 == 0 { 1 } else { -1 };
            let corr = &inv_s + &inv_ks.scale(&Float::with_val(p, ik));
            value -= &corr.scale(&self.a0);
        }
        let total = err + tail;
        if total > *ctx.target() {
            return Err(Error::PrecisionInfeasible(format!(
                "error bound {} exceeds target {}",
                total.to_f64(),
                ctx.target().to_f64()
            )));
        }
        Ok((value, total))
    }
}

type Key = (u64, u32, i64);

fn evaluators() -> &'static RwLock<HashMap<Key, Arc<Evaluator>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<Evaluator>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Evaluate through the process-wide evaluator cache, refining the
/// quadrature or widening the reach when a request needs it.
pub(crate) fn mellin_value(f: &FourierExpansion, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<(BigComplex, BigReal)> {
    let k = f.weight;
    let key = (fingerprint(f), ctx.bits(), ctx.target_log2());
    let need = growth(k, s.re.to_f64(), m).max(growth(k, 0.0, MAX_DERIVATIVE));
    let cached = evaluators().read().expect("evaluator cache poisoned").get(&key).cloned();
    let mut ev = match cached {
        Some(ev) if ev.reach >= need => ev,
        _ => {
            let ev = Arc::new(Evaluator::build(f, ctx, need, None)?);
            evaluators().write().expect("evaluator cache poisoned").insert(key, ev.clone());
            ev
        }
    };
    loop {
        match ev.evaluate(s, m, ctx) {
            Err(Error::PrecisionInfeasible(_)) if ev.level < MAX_LEVEL => {
                let next = Arc::new(Evaluator::build(f, ctx, ev.reach, Some(ev.level + 1))?);
                evaluators().write().expect("evaluator cache poisoned").insert(key, next.clone());
                ev = next;
            }
            other => return other,
        }
    }
}

/// `I_m(n, s) = int_1^inf e^{-2 pi n v} v^{s-1} (log v)^m dv`.
pub fn incomplete_log_mellin(n: u64, s: &BigComplex, m: u32, ctx: &PrecisionContext) -> Result<BigComplex> {
    if n == 0 {
        return Err(Error::invalid("incomplete Mellin transform needs n >= 1"));
    }
    let prec = ctx.bits() + 64;
    let a = (s.re.to_f64() - 1.0).max(0.0) + m as f64;
    let x_max = cutoff(a, prec) / n as f64 + 1.0;
    let one = Float::with_val(prec, 1);
    let tpn = two_pi(prec) * n as f64;
    let s1 = s - &BigComplex::one(prec);
    for level in 3..=MAX_LEVEL {
        let rule = DeRule::half_line(&one, x_max, level, prec);
        let est = rule.integrate_complex(|node| {
            let ln_v = Float::with_val(prec, node.x.ln_ref());
            let decay = Float::with_val(prec, -Float::with_val(prec, &tpn * &node.x)).exp();
            let lm = ln_v.clone().pow(m);
            (&s1 * &BigComplex::from_real(ln_v)).exp().scale(&(decay * lm))
        });
        if est.error() * 4u32 < *ctx.target() {
            return Ok(est.fine);
        }
    }
    Err(Error::PrecisionInfeasible(format!("I_{m}({n}, s) did not converge")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bound_is_decreasing_and_finite() {
        let a = growth(50, 0.0, 8);
        let mut last = f64::INFINITY;
        for n in 20..60 {
            let t = tail_log2(50, a, n);
            assert!(t.is_finite() && t < last);
            last = t;
        }
        assert!(tail_log2(50, 100.0, 5).is_infinite());
    }

    #[test]
    fn truncation_grows_with_precision() {
        let lo = required_truncation(12, &PrecisionContext::new(100).unwrap());
        let hi = required_truncation(12, &PrecisionContext::new(400).unwrap());
        assert!(lo < hi);
        // e^{-2 pi N} alone must beat the target
        assert!(-2.0 * PI * hi as f64 / LN_2 < -384.0);
    }
}
