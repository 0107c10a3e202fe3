//! Polynomial roots and unimodularity verdicts.

pub(crate) mod aberth;

use std::cmp::Ordering;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::{pow2, to_decimal, BigComplex, BigReal, PrecisionContext};
use crate::error::{Error, Result};
use crate::periodpoly::LaurentPoly;

/// A root with its residual `|p(z)|` and the radius of a disc around `z`
/// that contains exactly `multiplicity` roots of every polynomial within the
/// coefficient error.
#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub z: BigComplex,
    pub multiplicity: usize,
    pub residual: BigReal,
    pub radius: BigReal,
}

impl CertifiedRoot {
    pub fn deviation(&self) -> BigReal {
        Float::with_val(self.z.prec(), self.z.abs() - 1u32).abs()
    }

    pub fn is_real(&self) -> bool {
        self.z.im.clone().abs() <= self.radius
    }
}

#[derive(Clone, Debug)]
pub struct RootSet {
    /// Distinct nonzero roots, sorted by argument and then modulus.
    pub roots: Vec<CertifiedRoot>,
    /// Roots at `0`, found exactly from the vanishing low coefficients.
    pub zero_multiplicity: usize,
    pub degree: usize,
}

impl RootSet {
    /// Nonzero roots counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Largest cluster the certification will accept as one multiple root.
pub const MAX_CLUSTER: usize = 8;

/// `ln sum exp(x_i)`.
fn log_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.filter(|x| x.is_finite()).collect();
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn ln_abs(x: &BigReal) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().ln() + e as f64 * std::f64::consts::LN_2
}

/// Smallest `r` (up to a factor `2^(1/16)`) such that on `|z - c| = r` the
/// term `t_mu (z-c)^mu` dominates the rest of the Taylor expansion plus the
/// coefficient error `delta sum |z|^i`; by Rouche the disc then holds exactly
/// `mu` roots of every admissible polynomial.
fn rouche_radius(t: &[BigComplex], mu: usize, delta: &BigReal, c: &BigComplex, r_max: f64) -> Option<f64> {
    let lt: Vec<f64> = t.iter().map(|x| ln_abs(&x.abs())).collect();
    let ld = ln_abs(delta);
    let lc = c.abs().to_f64();
    let d = t.len() - 1;
    // excess(x) < 0 iff the dominant term wins at r = e^x; convex in x
    let excess = |x: f64| -> f64 {
        let rest = log_sum(lt.iter().enumerate().filter(|(j, _)| *j != mu).map(|(j, a)| a + j as f64 * x));
        let err = ld + log_sum((0..=d).map(|i| i as f64 * (lc + x.exp()).ln()));
        log_sum([rest, err].into_iter()) - (lt[mu] + mu as f64 * x) + 1e-6
    };
    let (mut lo, mut hi) = ((1e-300f64).ln(), r_max.ln());
    for _ in 0..200 {
        let a = lo + (hi - lo) / 3.0;
        let b = hi - (hi - lo) / 3.0;
        if excess(a) < excess(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let best = 0.5 * (lo + hi);
    if excess(best) >= 0.0 {
        return None;
    }
    let (mut a, mut b) = ((1e-300f64).ln(), best);
    if excess(a) < 0.0 {
        return Some(1e-300);
    }
    while b - a > std::f64::consts::LN_2 / 16.0 {
        let mid = 0.5 * (a + b);
        if excess(mid) < 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some(b.exp())
}

struct Cluster {
    members: Vec<usize>,
    center: BigComplex,
    radius: Option<f64>,
}

/// Roots of `p` as a polynomial in `z` (after clearing `z^min_exp`).
pub fn find_roots(p: &LaurentPoly, ctx: &PrecisionContext) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::invalid("the zero polynomial has no finite root set"));
    }
    let coeffs = p.coeffs();
    let d = coeffs.len() - 1;
    let zero_multiplicity = p.min_exp().max(0) as usize;
    if d == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            zero_multiplicity,
            degree: zero_multiplicity,
        });
    }
    let prec = p.prec().max(ctx.bits() + 32);
    let polish = 4 * ctx.bits();
    let approx = aberth::aberth(coeffs, prec)?;
    let hi: Vec<BigComplex> = coeffs.iter().map(|c| c.with_prec(polish)).collect();
    let z: Vec<BigComplex> = approx.iter().map(|z0| aberth::newton_polish(&hi, z0, polish)).collect();
    let delta = Float::with_val(polish, &p.error_bound + p.sup_norm() * pow2(-(p.prec() as i64) + 2, polish));
    let r_max = 2.0 + z.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max) * 2.0;

    let certify = |members: &[usize]| -> Cluster {
        let mu = members.len();
        let mut center = BigComplex::zero(polish);
        for &i in members {
            center += &z[i];
        }
        center = center.scale(&Float::with_val(polish, mu).recip());
        if mu > 1 {
            // a mu-fold root is a simple root of p^{(mu-1)}
            center = aberth::newton_polish(&aberth::derivative(&hi, mu - 1), &center, polish);
        }
        let t = aberth::taylor_shift(&hi, &center);
        let radius = rouche_radius(&t, mu, &delta, &center, r_max);
        Cluster {
            members: members.to_vec(),
            center,
            radius,
        }
    };
    let mut clusters: Vec<Cluster> = (0..d).map(|i| certify(&[i])).collect();
    loop {
        let mut merge = None;
        if let Some(a) = clusters.iter().position(|c| c.radius.is_none()) {
            let b = (0..clusters.len())
                .filter(|&b| b != a)
                .min_by(|&x, &y| {
                    let dx = clusters[a].center.dist(&clusters[x].center);
                    let dy = clusters[a].center.dist(&clusters[y].center);
                    dx.partial_cmp(&dy).unwrap_or(Ordering::Equal)
                });
            match b {
                Some(b) => merge = Some((a, b)),
                None => break,
            }
        } else {
            'pairs: for a in 0..clusters.len() {
                for b in a + 1..clusters.len() {
                    let sep = clusters[a].center.dist(&clusters[b].center).to_f64();
                    let r = clusters[a].radius.unwrap().max(clusters[b].radius.unwrap());
                    if sep <= 2.0 * r {
                        merge = Some((a, b));
                        break 'pairs;
                    }
                }
            }
        }
        let Some((a, b)) = merge else { break };
        let (a, b) = (a.min(b), a.max(b));
        let mut members = clusters[a].members.clone();
        members.extend(clusters.remove(b).members);
        if members.len() > MAX_CLUSTER {
            return Err(Error::ClusterUnresolved(format!(
                "{} roots of {} (k = {}) near {} cannot be separated at {} bits",
                members.len(),
                p.family,
                p.weight,
                clusters[a].center,
                ctx.bits()
            )));
        }
        members.sort_unstable();
        clusters[a] = certify(&members);
    }
    if let Some(c) = clusters.iter().find(|c| c.radius.is_none()) {
        return Err(Error::ClusterUnresolved(format!(
            "no inclusion disc for the root {} of {} (k = {})",
            c.center, p.family, p.weight
        )));
    }
    let mut roots: Vec<CertifiedRoot> = clusters
        .into_iter()
        .map(|c| {
            let residual = aberth::eval_with_derivative(&hi, &c.center).0.abs();
            CertifiedRoot {
                multiplicity: c.members.len(),
                radius: Float::with_val(polish, c.radius.unwrap()),
                residual,
                z: c.center,
            }
        })
        .collect();
    roots.sort_by(|a, b| order_key(&a.z).partial_cmp(&order_key(&b.z)).unwrap_or(Ordering::Equal));
    Ok(RootSet {
        roots,
        zero_multiplicity,
        degree: d + zero_multiplicity,
    })
}

fn order_key(z: &BigComplex) -> (f64, f64) {
    (z.arg().to_f64(), z.abs().to_f64())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionPolicy {
    None,
    ExcludeReals,
    ExcludeQuadrupleAndZero,
}

impl ExclusionPolicy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(ExclusionPolicy::None),
            "exclude-reals" => Ok(ExclusionPolicy::ExcludeReals),
            "exclude-quadruple-and-zero" => Ok(ExclusionPolicy::ExcludeQuadrupleAndZero),
            other => Err(Error::invalid(format!("unknown exclusion policy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Pass only if both pass; any inconclusive part makes the whole inconclusive.
    pub fn and(self, o: Verdict) -> Verdict {
        match (self, o) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub pass: f64,
    pub fail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { pass: 1e-10, fail: 1e-3 }
    }
}

/// Three-way decision on `value`, known to within `radius`, against
/// `value < pass` and `value > fail`.
pub fn classify(value: &BigReal, radius: &BigReal, tol: &Tolerances) -> Verdict {
    let p = value.prec();
    if Float::with_val(p, value + radius) < tol.pass {
        Verdict::Pass
    } else if Float::with_val(p, value - radius) > tol.fail {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootRecord {
    pub re: String,
    pub im: String,
    pub modulus: String,
    pub deviation: String,
    pub residual: String,
    pub radius: String,
    pub multiplicity: usize,
    pub excluded: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealQuadruple {
    pub a: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub family: String,
    pub k: u32,
    pub m: Option<u32>,
    pub policy: ExclusionPolicy,
    pub degree: usize,
    pub roots: Vec<RootRecord>,
    pub zero_root_multiplicity: usize,
    pub real_root_count: usize,
    pub max_unimodular_deviation: String,
    pub max_radius: String,
    pub real_quadruple: Option<RealQuadruple>,
    pub epsilon: Option<[String; 2]>,
    pub pass_tol: f64,
    pub fail_tol: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub deviation_value: BigReal,
    #[serde(skip)]
    pub quadruple_value: Option<BigReal>,
}

impl ZeroReport {
    pub fn with_order(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }
}

/// Roots of `p` with the unimodular deviation of those not excluded by
/// `policy`, and a verdict against `tol`.
pub fn unimodularity_report(p: &LaurentPoly, policy: ExclusionPolicy, tol: &Tolerances, ctx: &PrecisionContext) -> Result<ZeroReport> {
    let set = find_roots(p, ctx)?;
    let prec = 4 * ctx.bits();
    let mut note = None;
    let quad = match detect_real_quadruple(&set.roots, ctx) {
        Ok(q) => q,
        Err(e) => {
            note = Some(e.to_string());
            None
        }
    };
    let excluded: Vec<bool> = set
        .roots
        .iter()
        .map(|r| match policy {
            ExclusionPolicy::None => false,
            ExclusionPolicy::ExcludeReals => r.is_real(),
            ExclusionPolicy::ExcludeQuadrupleAndZero => quad.as_ref().is_some_and(|a| in_quadruple(r, a)),
        })
        .collect();
    let mut max_dev = Float::new(prec);
    let mut max_rad = Float::new(prec);
    let mut verdict = Verdict::Pass;
    for (r, &ex) in set.roots.iter().zip(&excluded) {
        if ex {
            continue;
        }
        let dev = r.deviation();
        verdict = verdict.and(classify(&dev, &r.radius, tol));
        if dev > max_dev {
            max_dev = dev;
        }
        if r.radius > max_rad {
            max_rad = r.radius.clone();
        }
    }
    let shifted = p.scale_shift(&BigComplex::one(p.prec()), -p.min_exp());
    let epsilon = self_inversive_epsilon(&shifted, ctx);
    let roots = set
        .roots
        .iter()
        .zip(&excluded)
        .map(|(r, &ex)| RootRecord {
            re: to_decimal(&r.z.re),
            im: to_decimal(&r.z.im),
            modulus: to_decimal(&r.z.abs()),
            deviation: to_decimal(&r.deviation()),
            residual: to_decimal(&r.residual),
            radius: to_decimal(&r.radius),
            multiplicity: r.multiplicity,
            excluded: ex,
        })
        .collect();
    Ok(ZeroReport {
        family: p.family.clone(),
        k: p.weight,
        m: None,
        policy,
        degree: set.degree,
        roots,
        zero_root_multiplicity: set.zero_multiplicity,
        real_root_count: set.roots.iter().filter(|r| r.is_real()).map(|r| r.multiplicity).sum(),
        max_unimodular_deviation: to_decimal(&max_dev),
        max_radius: to_decimal(&max_rad),
        real_quadruple: quad.as_ref().map(|a| RealQuadruple { a: to_decimal(a) }),
        epsilon: epsilon.map(|e| [to_decimal(&e.re), to_decimal(&e.im)]),
        pass_tol: tol.pass,
        fail_tol: tol.fail,
        verdict,
        note,
        deviation_value: max_dev,
        quadruple_value: quad,
    })
}

fn quadruple_tolerance(r: &CertifiedRoot, ctx: &PrecisionContext) -> BigReal {
    let p = r.z.prec();
    Float::with_val(p, &r.radius * 4u32) + pow2(-(ctx.bits() as i64) / 2, p)
}

fn in_quadruple(r: &CertifiedRoot, a: &BigReal) -> bool {
    if !r.is_real() {
        return false;
    }
    let p = r.z.prec();
    let x = Float::with_val(p, r.z.re.abs_ref());
    let tol = Float::with_val(p, &r.radius * 4u32) + 1e-12;
    let inv = Float::with_val(p, a.recip_ref());
    Float::with_val(p, &x - a).abs() <= tol || Float::with_val(p, &x - &inv).abs() <= tol
}

/// The real roots off the unit circle, if any, as `{±a, ±1/a}` with `a > 1`.
pub fn detect_real_quadruple(roots: &[CertifiedRoot], ctx: &PrecisionContext) -> Result<Option<BigReal>> {
    let off: Vec<&CertifiedRoot> = roots.iter().filter(|r| r.is_real() && r.deviation() > r.radius).collect();
    if off.is_empty() {
        return Ok(None);
    }
    let show = || off.iter().map(|r| to_decimal(&r.z.re)).collect::<Vec<_>>().join(", ");
    if off.len() != 4 {
        return Err(Error::MalformedRealSet(format!("{} real roots off the circle: {}", off.len(), show())));
    }
    let big = off
        .iter()
        .max_by(|a, b| a.z.re.clone().abs().partial_cmp(&b.z.re.clone().abs()).unwrap_or(Ordering::Equal))
        .unwrap();
    let p = big.z.prec();
    let a = Float::with_val(p, big.z.re.abs_ref());
    let inv = Float::with_val(p, a.recip_ref());
    let targets = [a.clone(), -a.clone(), inv.clone(), -inv];
    let mut used = [false; 4];
    for t in &targets {
        let hit = off.iter().enumerate().find(|(i, r)| !used[*i] && Float::with_val(p, &r.z.re - t).abs() <= quadruple_tolerance(r, ctx));
        match hit {
            Some((i, _)) => used[i] = true,
            None => return Err(Error::MalformedRealSet(format!("not of the form ±a, ±1/a: {}", show()))),
        }
    }
    Ok(Some(a))
}

/// `eps` with `|eps| = 1` and `c_j = eps conj(c_{d-j})` for all `j`, if one
/// exists within the coefficient error; `d` is the top exponent of `p`.
pub fn self_inversive_epsilon(p: &LaurentPoly, ctx: &PrecisionContext) -> Option<BigComplex> {
    let d = p.max_exp()?;
    if p.min_exp() < 0 {
        return None;
    }
    let prec = p.prec();
    let (j, _) = (0..=d).map(|j| (j, p.coeff(j).abs())).max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))?;
    let mirror = p.coeff(d - j).conj();
    if mirror.is_zero() {
        return None;
    }
    let mut eps = &p.coeff(j) / &mirror;
    let m = eps.abs();
    let tol = Float::with_val(prec, &p.error_bound * 8u32) + p.sup_norm() * pow2(-(ctx.bits() as i64) / 2, prec);
    let rel = Float::with_val(prec, &tol / p.coeff(j).abs());
    if Float::with_val(prec, &m - 1u32).abs() > rel * 4u32 {
        return None;
    }
    eps = eps.scale(&m.recip());
    (p.self_inversive_defect(d, &eps) <= tol).then_some(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(f64, f64)]) -> LaurentPoly {
        LaurentPoly::new(0, c.iter().map(|&(a, b)| BigComplex::from_f64(a, b, 192)).collect(), 4, "t", Float::new(192))
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn i_and_minus_i() {
        let set = find_roots(&poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), &ctx()).unwrap();
        assert_eq!(set.roots.len(), 2);
        assert!(set.roots[0].z.dist(&BigComplex::from_f64(0.0, -1.0, 64)) < 1e-60);
        assert!(set.roots[1].z.dist(&BigComplex::from_f64(0.0, 1.0, 64)) < 1e-60);
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = LaurentPoly::new(2, vec![BigComplex::from_f64(-1.0, 0.0, 192), BigComplex::from_f64(1.0, 0.0, 192)], 6, "t", Float::new(192));
        let set = find_roots(&p, &ctx()).unwrap();
        assert_eq!(set.zero_multiplicity, 2);
        assert_eq!(set.degree, 3);
        assert!(set.roots[0].z.dist(&BigComplex::from_f64(1.0, 0.0, 64)) < 1e-60);
    }

    #[test]
    fn double_roots_are_clustered() {
        // (z^2 - 1)^2 (z - 3)
        let p = poly(&[(-3.0, 0.0), (1.0, 0.0), (6.0, 0.0), (-2.0, 0.0), (-3.0, 0.0), (1.0, 0.0)]);
        let set = find_roots(&p, &ctx()).unwrap();
        assert_eq!(set.roots.len(), 3);
        assert_eq!(set.count(), 5);
        let double: Vec<_> = set.roots.iter().filter(|r| r.multiplicity == 2).collect();
        assert_eq!(double.len(), 2);
        for r in double {
            assert!(Float::with_val(64, r.z.abs() - 1u32).abs() < 1e-30);
            assert!(r.radius < 1e-25);
        }
    }

    #[test]
    fn near_collision_beyond_cap_is_unresolved() {
        // (z - 1)^9 with a tiny perturbation of the constant term
        let mut c: Vec<(f64, f64)> = (0..=9).map(|j| {
            let b = [1.0, 9.0, 36.0, 84.0, 126.0, 126.0, 84.0, 36.0, 9.0, 1.0][j];
            (if (9 - j) % 2 == 0 { b } else { -b }, 0.0)
        }).collect();
        c[0].0 += 1e-30;
        let p = LaurentPoly::new(0, c.iter().map(|&(a, b)| BigComplex::from_f64(a, b, 192)).collect(), 4, "t", Float::with_val(192, 1e-20));
        let r = find_roots(&p, &ctx());
        assert!(matches!(r, Err(Error::ClusterUnresolved(_))), "{r:?}");
    }

    #[test]
    fn quadruple_detection() {
        // (z^2 - 9)(z^2 - 1/9)(z^2 + 1)
        let p = poly(&[(1.0, 0.0), (0.0, 0.0), (-73.0 / 9.0, 0.0), (0.0, 0.0), (-73.0 / 9.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let set = find_roots(&p, &ctx()).unwrap();
        let a = detect_real_quadruple(&set.roots, &ctx()).unwrap().unwrap();
        assert!(Float::with_val(64, a - 3u32).abs() < 1e-14);
        let rep = unimodularity_report(&p, ExclusionPolicy::ExcludeQuadrupleAndZero, &Tolerances::default(), &ctx()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        let none = unimodularity_report(&p, ExclusionPolicy::None, &Tolerances::default(), &ctx()).unwrap();
        assert_eq!(none.verdict, Verdict::Fail);
        let plain = find_roots(&poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), &ctx()).unwrap();
        assert!(detect_real_quadruple(&plain.roots, &ctx()).unwrap().is_none());
    }

    #[test]
    fn malformed_real_set() {
        // (z - 3)(z^2 + 1)
        let p = poly(&[(-3.0, 0.0), (1.0, 0.0), (-3.0, 0.0), (1.0, 0.0)]);
        let set = find_roots(&p, &ctx()).unwrap();
        assert!(matches!(detect_real_quadruple(&set.roots, &ctx()), Err(Error::MalformedRealSet(_))));
    }

    #[test]
    fn epsilon() {
        let e = self_inversive_epsilon(&poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), &ctx()).unwrap();
        assert!(e.dist(&BigComplex::one(64)) < 1e-30);
        assert!(self_inversive_epsilon(&poly(&[(2.0, 0.0), (1.0, 0.0)]), &ctx()).is_none());
        // i z^2 + (1+i) z + 1 is self-inversive with eps = i
        let e = self_inversive_epsilon(&poly(&[(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]), &ctx()).unwrap();
        assert!(e.dist(&BigComplex::from_f64(0.0, 1.0, 64)) < 1e-30);
    }

    #[test]
    fn inconclusive_band() {
        let t = Tolerances::default();
        let v = |x: f64, r: f64| classify(&Float::with_val(64, x), &Float::with_val(64, r), &t);
        assert_eq!(v(1e-12, 1e-14), Verdict::Pass);
        assert_eq!(v(1e-12, 1e-9), Verdict::Inconclusive);
        assert_eq!(v(1e-5, 0.0), Verdict::Inconclusive);
        assert_eq!(v(1e-2, 1e-3), Verdict::Fail);
        assert_eq!(v(1.1e-3, 1e-3), Verdict::Inconclusive);
    }
}
