use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::arith::{factorial, parse_real, to_decimal, two_pi, BigComplex, BigReal, PrecisionContext, Rat};
use crate::eichler::{
    eichler_f_quadrature, relation_defects, sigma2, sigma2_truncation, log_integral_truncation, log_weighted_integral, CocycleAssignment, GroupElement,
};
use crate::error::{Error, Result};
use crate::forms::{dim_cusp_forms, eigenforms_cached, eisenstein_expansion, EigenformPackage, FourierExpansion};
use crate::lfun::{
    completed_l_derivative, eisenstein_lambda_exact, eisenstein_lambda_oracle, fe_defect, finite_difference_derivative,
    finite_difference_truncation,
    required_truncation,
};
use crate::periodpoly::{
    build_eisenstein_family, build_q, build_r, eisenstein_t_value, parity_part, sigma_ss_formula, EisensteinFamily,
    LaurentPoly, Parity,
};
use crate::roots::{unimodularity_report, ExclusionPolicy, Tolerances, ZeroReport};

use super::{abs, recognize_rational, IdentityCheck, Suite, SuiteConfig, SuiteItem};

/// Weights at which `S_k` is one-dimensional with rational coefficients.
pub const MANIN_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Height bound for rational recognition of critical-value ratios.
pub const MANIN_HEIGHT: u64 = 1_000_000_000_000_000;

struct Env<'a> {
    cfg: &'a SuiteConfig,
    ctx: PrecisionContext,
    tol: Tolerances,
    items: Vec<SuiteItem>,
}

impl Env<'_> {
    fn eigenforms(&self, k: u32, n: usize) -> Result<Arc<EigenformPackage>> {
        eigenforms_cached(k, n, &self.ctx, self.cfg.cache.as_deref())
    }

    /// Eigenforms of weight `k` with enough coefficients for the Mellin route.
    fn cusp_forms(&self, k: u32) -> Result<Vec<(String, FourierExpansion)>> {
        if dim_cusp_forms(k) == 0 {
            return Ok(Vec::new());
        }
        let pkg = self.eigenforms(k, required_truncation(k, &self.ctx))?;
        Ok(pkg.forms.iter().enumerate().map(|(i, f)| (format!("f{i}"), f.clone())).collect())
    }

    fn eisenstein(&self, k: u32) -> Result<FourierExpansion> {
        eisenstein_expansion(k, required_truncation(k, &self.ctx))
    }

    fn zeros(&mut self, label: String, k: u32, m: Option<u32>, run: impl FnOnce(&Self) -> Result<ZeroReport>) {
        let item = match run(self) {
            Ok(z) => SuiteItem::Zeros(z),
            Err(e) => SuiteItem::error(label, k, m, &e),
        };
        self.items.push(item);
    }

    fn check(&mut self, label: String, k: u32, m: Option<u32>, run: impl FnOnce(&Self) -> Result<Vec<IdentityCheck>>) {
        match run(self) {
            Ok(v) => self.items.extend(v.into_iter().map(SuiteItem::Identity)),
            Err(e) => self.items.push(SuiteItem::error(label, k, m, &e)),
        }
    }

    fn poly_check(&self, label: &str, k: u32, m: Option<u32>, lhs: &LaurentPoly, rhs: &LaurentPoly) -> IdentityCheck {
        let err = Float::with_val(64, &lhs.error_bound + &rhs.error_bound);
        IdentityCheck::new(
            label,
            k,
            m,
            to_decimal(&lhs.sup_norm()),
            to_decimal(&rhs.sup_norm()),
            &lhs.distance(rhs),
            &err,
            &self.tol,
        )
    }
}

pub(super) fn run(suite: Suite, cfg: &SuiteConfig, notes: &mut Vec<String>) -> Result<Vec<SuiteItem>> {
    let mut env = Env {
        cfg,
        ctx: PrecisionContext::new(cfg.precision_bits)?,
        tol: cfg.tolerances(),
        items: Vec::new(),
    };
    match suite {
        Suite::Msw => eisenstein_roots(&mut env, EisensteinFamily::Ramanujan, ExclusionPolicy::ExcludeReals),
        Suite::LalinSmyth => eisenstein_roots(&mut env, EisensteinFamily::LalinSmyth, ExclusionPolicy::None),
        Suite::FullLevel1 => period_roots(&mut env, false)?,
        Suite::CfiOdd => period_roots(&mut env, true)?,
        Suite::DrEisensteinOdd => dr_eisenstein_odd(&mut env, notes),
        Suite::ConjDerivatives => conj_derivatives(&mut env)?,
        Suite::Cocycle => cocycle(&mut env)?,
        Suite::Fe => fe(&mut env)?,
        Suite::BernoulliIdentities => bernoulli_identities(&mut env),
        Suite::Sigma2Crosscheck => sigma2_crosscheck(&mut env),
        Suite::LogIntegral => log_integral(&mut env, notes)?,
        Suite::DerivativeOracle => derivative_oracle(&mut env)?,
        Suite::ManinRatios => manin_ratios(&mut env, notes)?,
        Suite::EisensteinOracle => eisenstein_oracle(&mut env),
    }
    Ok(env.items)
}

fn eisenstein_roots(env: &mut Env, family: EisensteinFamily, policy: ExclusionPolicy) {
    for k in env.cfg.weights(4) {
        env.zeros(family.name().into(), k, None, |e| {
            let p = build_eisenstein_family(family, k, &e.ctx)?;
            unimodularity_report(&p, policy, &e.tol, &e.ctx)
        });
    }
}

/// `r_f`, or its odd part with the roots `0, ±1/2, ±2` checked separately.
fn period_roots(env: &mut Env, odd: bool) -> Result<()> {
    for k in env.cfg.weights(12) {
        for (name, f) in env.cusp_forms(k)? {
            let family = if odd { format!("r-odd-{name}") } else { format!("r-{name}") };
            let mut report = None;
            env.zeros(family.clone(), k, None, |e| {
                let r = build_r(&f, &e.ctx)?;
                let z = if odd {
                    let p = parity_part(&r, Parity::Odd).with_family(family.as_str());
                    unimodularity_report(&p, ExclusionPolicy::ExcludeQuadrupleAndZero, &e.tol, &e.ctx)?
                } else {
                    unimodularity_report(&r.with_family(family.as_str()), ExclusionPolicy::None, &e.tol, &e.ctx)?
                };
                report = Some(z.clone());
                Ok(z)
            });
            if let (true, Some(z)) = (odd, report) {
                env.items.push(SuiteItem::Identity(IdentityCheck::exact(
                    format!("{family} simple root at 0"),
                    k,
                    None,
                    z.zero_root_multiplicity == 1,
                    z.zero_root_multiplicity.to_string(),
                    "1".into(),
                )));
                let item = match &z.quadruple_value {
                    Some(a) => {
                        let radius = excluded_radius(&z, a.prec())?;
                        let diff = abs(&Float::with_val(a.prec(), a - 2u32));
                        SuiteItem::Identity(IdentityCheck::new(
                            format!("{family} real roots ±a, ±1/a with a = 2"),
                            k,
                            None,
                            to_decimal(a),
                            "2".into(),
                            &diff,
                            &radius,
                            &env.tol,
                        ))
                    }
                    None => SuiteItem::Identity(IdentityCheck::exact(
                        format!("{family} real roots ±a, ±1/a with a = 2"),
                        k,
                        None,
                        false,
                        z.note.clone().unwrap_or_else(|| "no quadruple".into()),
                        "2".into(),
                    )),
                };
                env.items.push(item);
            }
        }
    }
    Ok(())
}

/// Largest certification radius among the excluded roots.
fn excluded_radius(z: &ZeroReport, prec: u32) -> Result<BigReal> {
    let mut m = Float::new(prec);
    for r in z.roots.iter().filter(|r| r.excluded) {
        let v = parse_real(&r.radius, prec)?;
        if v > m {
            m = v;
        }
    }
    Ok(m)
}

fn dr_eisenstein_odd(env: &mut Env, notes: &mut Vec<String>) {
    for k in env.cfg.weights(8).filter(|k| k % 4 == 0) {
        let mut quad = None;
        env.zeros("q-odd-eisenstein".into(), k, Some(1), |e| {
            let f = e.eisenstein(k)?;
            let q = build_q(&f, 1, &e.ctx)?;
            let p = parity_part(&q, Parity::Odd).with_family("q-odd-eisenstein");
            let z = unimodularity_report(&p, ExclusionPolicy::ExcludeQuadrupleAndZero, &e.tol, &e.ctx)?.with_order(1);
            quad = Some(z.real_quadruple.as_ref().map(|q| q.a.clone()));
            Ok(z)
        });
        if let Some(q) = quad {
            notes.push(match q {
                Some(a) => format!("k = {k}: real quadruple with a = {}", &a[..a.len().min(24)]),
                None => format!("k = {k}: no real quadruple"),
            });
        }
    }
}

fn conj_derivatives(env: &mut Env) -> Result<()> {
    for k in env.cfg.weights(12) {
        for (name, f) in env.cusp_forms(k)? {
            for m in 0..=env.cfg.m_max {
                let family = format!("q-m{m}-{name}");
                env.zeros(family.clone(), k, Some(m), |e| {
                    let q = build_q(&f, m, &e.ctx)?.with_family(family.as_str());
                    Ok(unimodularity_report(&q, ExclusionPolicy::None, &e.tol, &e.ctx)?.with_order(m))
                });
            }
        }
    }
    Ok(())
}

fn defect_checks(env: &Env, label: &str, k: u32, a: &CocycleAssignment) -> Result<Vec<IdentityCheck>> {
    let (s2, st3) = relation_defects(a)?;
    let zero = Float::new(64);
    Ok([("S^2", s2), ("(ST)^3", st3)]
        .into_iter()
        .map(|(w, d)| {
            IdentityCheck::new(
                format!("{label} phi({w}) = 0"),
                k,
                None,
                to_decimal(&d.sup_norm()),
                "0".into(),
                &d.sup_norm(),
                &Float::with_val(64, &d.error_bound + &zero),
                &env.tol,
            )
        })
        .collect())
}

fn cocycle(env: &mut Env) -> Result<()> {
    for k in env.cfg.weights(4) {
        for (name, f) in env.cusp_forms(k)? {
            let label = format!("r-{name}");
            env.check(label.clone(), k, None, |e| {
                let a = CocycleAssignment::from_s_value(build_r(&f, &e.ctx)?)?;
                defect_checks(e, &label, k, &a)
            });
        }
        env.check("brown-closed".into(), k, None, |e| {
            let b = build_eisenstein_family(EisensteinFamily::BrownClosed, k, &e.ctx)?;
            let a = CocycleAssignment::new(k, b, eisenstein_t_value(k, &e.ctx)?)?;
            defect_checks(e, "brown-closed", k, &a)
        });
    }
    if env.cfg.weights(12).any(|k| k == 12) {
        env.check("eichler integral".into(), 12, None, cobound_checks);
    }
    Ok(())
}

/// `F(Sz) z^{k-2} - F(z) = r_f(z)` for `Delta` with `F` from the defining
/// integral.
fn cobound_checks(env: &Env) -> Result<Vec<IdentityCheck>> {
    let ctx = &env.ctx;
    let pkg = env.eigenforms(12, sigma2_truncation(12, &GroupElement::s(), ctx))?;
    let f = &pkg.forms[0];
    let r = build_r(f, ctx)?;
    let prec = r.prec();
    let mut out = Vec::new();
    for (x, y) in [(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)] {
        let z = BigComplex::from_f64(x, y, prec);
        let sz = GroupElement::s().apply(&z);
        let (f1, e1) = eichler_f_quadrature(f, &sz, ctx)?;
        let (f0, e0) = eichler_f_quadrature(f, &z, ctx)?;
        let zk = z.powi(10);
        let lhs = &(&f1 * &zk) - &f0;
        let rhs = r.eval(&z);
        let zn = z.abs();
        let mut reach = Float::new(prec);
        for j in 0..=10u32 {
            reach += zn.clone().pow(j);
        }
        let err = e1 * zk.abs() + e0 + Float::with_val(prec, &r.error_bound * &reach);
        out.push(IdentityCheck::new(
            format!("F|S - F = r at z = {x}+{y}i"),
            12,
            None,
            format!("{}", lhs.abs().to_f64()),
            format!("{}", rhs.abs().to_f64()),
            &lhs.dist(&rhs),
            &err,
            &env.tol,
        ));
    }
    Ok(out)
}

fn fe(env: &mut Env) -> Result<()> {
    for k in env.cfg.weights(4) {
        let mut forms = env.cusp_forms(k)?;
        forms.push(("eisenstein".into(), env.eisenstein(k)?));
        for (name, f) in forms {
            for m in 0..=env.cfg.m_max {
                env.check(format!("fe-{name}"), k, Some(m), |e| {
                    let mut worst = Float::new(64);
                    let mut err = Float::new(64);
                    for s in 1..=k / 2 {
                        let d = fe_defect(&f, &BigComplex::from_f64(s as f64, 0.0, e.ctx.bits() + 64), m, &e.ctx)?;
                        if d.defect > worst {
                            worst = Float::with_val(64, &d.defect);
                        }
                        if d.est_error > err {
                            err = Float::with_val(64, &d.est_error);
                        }
                    }
                    let fe = IdentityCheck::new(
                        format!("fe-{name} functional equation"),
                        k,
                        Some(m),
                        "Lambda^(m)(s)".into(),
                        "(-1)^m i^k Lambda^(m)(k-s)".into(),
                        &worst,
                        &err,
                        &e.tol,
                    );
                    let q = build_q(&f, m, &e.ctx)?;
                    let eps = BigComplex::from_f64(if m % 2 == 0 { 1.0 } else { -1.0 }, 0.0, q.prec());
                    let sym = IdentityCheck::new(
                        format!("fe-{name} Q coefficient symmetry"),
                        k,
                        Some(m),
                        "c_j".into(),
                        "(-1)^m conj(c_{k-2-j})".into(),
                        &q.self_inversive_defect(k as i64 - 2, &eps),
                        &Float::with_val(64, &q.error_bound * 2u32),
                        &e.tol,
                    );
                    Ok(vec![fe, sym])
                });
            }
        }
    }
    Ok(())
}

fn bernoulli_identities(env: &mut Env) {
    for k in env.cfg.weights(4) {
        env.check("bernoulli".into(), k, None, |e| {
            let ctx = &e.ctx;
            let family = |fam| build_eisenstein_family(fam, k, ctx);
            let r = build_r(&e.eisenstein(k)?, ctx)?;
            let brown = family(EisensteinFamily::BrownClosed)?;
            let zagier = family(EisensteinFamily::ZagierTilde)?;
            let mut out = vec![e.poly_check("r_E = brown-closed", k, None, &r, &brown)];

            let d = zagier.sub(&brown);
            let ends = [-1, 1, k as i64 - 3, k as i64 - 1];
            let mut off = Float::new(d.prec());
            for ex in d.support().into_iter().filter(|ex| !ends.contains(ex)) {
                off = off.max(&d.coeff(ex).abs());
            }
            out.push(IdentityCheck::new(
                "zagier-tilde - brown-closed off {-1, 1, k-3, k-1}",
                k,
                None,
                to_decimal(&off),
                "0".into(),
                &off,
                &d.error_bound,
                &e.tol,
            ));

            let p = build_eisenstein_family(EisensteinFamily::PM, k / 2 - 1, ctx)?;
            let prec = r.prec();
            let scale = BigComplex::from_real(Float::with_val(prec, two_pi(prec).pow(k - 1)) / Float::with_val(prec, &factorial(k - 2)))
                .mul_i_pow(k as i64 - 1);
            out.push(e.poly_check("p_{k/2-1} = (2 pi i)^{k-1} r_E / (k-2)!", k, None, &p, &r.scale_shift(&scale, 0)));

            let s = BigComplex::from_real(Float::with_val(prec, &factorial(k - 2)).recip() * -2i32);
            let ram = family(EisensteinFamily::Ramanujan)?;
            let odd = parity_part(&zagier, Parity::Odd).scale_shift(&s, 1);
            out.push(e.poly_check("ramanujan = odd(-2z r~_E)/(k-2)!", k, None, &ram, &odd));
            let ls = family(EisensteinFamily::LalinSmyth)?;
            out.push(e.poly_check("lalin-smyth = -2z r~_E/(k-2)!", k, None, &ls, &zagier.scale_shift(&s, 1)));
            Ok(out)
        });
    }
}

fn sigma2_crosscheck(env: &mut Env) {
    if !env.cfg.weights(12).any(|k| k == 12) {
        return;
    }
    let s = GroupElement::s();
    for name in ["delta", "eisenstein"] {
        env.check(format!("sigma2-{name}"), 12, Some(1), |e| {
            let ctx = &e.ctx;
            let n = sigma2_truncation(12, &s, ctx).max(required_truncation(12, ctx));
            let f = match name {
                "delta" => e.eigenforms(12, n)?.forms[0].clone(),
                _ => eisenstein_expansion(12, n)?,
            };
            let fit = sigma2(&f, &s, &s, ctx)?;
            // (-1)^m sigma(S, S) is the formula at m = 1
            let formula = sigma_ss_formula(&f, 1, ctx)?;
            let rhs = formula.scale_shift(&BigComplex::from_f64(-1.0, 0.0, formula.prec()), 0);
            let mut out = vec![e.poly_check(&format!("sigma2({name}; S, S) = -formula"), 12, Some(1), &fit.poly, &rhs)];
            let allowed = Float::with_val(64, &fit.quad_error * 1000u32);
            out.push(IdentityCheck::exact(
                format!("sigma2({name}; S, S) fit residual below 1e3 x quadrature error"),
                12,
                Some(1),
                fit.fit_residual <= allowed,
                to_decimal(&fit.fit_residual),
                to_decimal(&allowed),
            ));
            if name == "eisenstein" {
                let id = GroupElement::identity();
                let st = GroupElement::from_word("ST")?;
                let z = sigma2(&f, &id, &st, ctx)?;
                let zero = LaurentPoly::zero(12, "0", z.poly.prec());
                out.push(e.poly_check("sigma2(eisenstein; I, ST) = 0", 12, Some(1), &z.poly, &zero));
            }
            Ok(out)
        });
    }
}

fn log_integral(env: &mut Env, notes: &mut Vec<String>) -> Result<()> {
    notes.push("the first item of each pair compares against -Q_f (m = 1), the second against +Q_f".into());
    for k in env.cfg.weights(12) {
        let pkg = env.eigenforms(k, log_integral_truncation(k, &env.ctx))?;
        for (i, f) in pkg.forms.iter().enumerate() {
            let name = format!("f{i}");
            env.check(format!("log-integral-{name}"), k, Some(1), |e| {
                let l = log_weighted_integral(f, &e.ctx)?;
                let q = build_q(f, 1, &e.ctx)?;
                let minus = q.scale_shift(&BigComplex::from_f64(-1.0, 0.0, q.prec()), 0);
                Ok(vec![
                    e.poly_check(&format!("log-integral-{name} = -Q"), k, Some(1), &l, &minus),
                    e.poly_check(&format!("log-integral-{name} = +Q"), k, Some(1), &l, &q),
                ])
            });
        }
    }
    Ok(())
}

fn derivative_oracle(env: &mut Env) -> Result<()> {
    for k in env.cfg.weights(4) {
        let n = finite_difference_truncation(k, env.cfg.m_max, &env.ctx);
        let mut forms = Vec::new();
        if dim_cusp_forms(k) > 0 {
            let pkg = env.eigenforms(k, n)?;
            forms.extend(pkg.forms.iter().enumerate().map(|(i, f)| (format!("f{i}"), f.clone())));
        }
        forms.push(("eisenstein".into(), eisenstein_expansion(k, n)?));
        for (name, f) in forms {
            for m in 1..=env.cfg.m_max {
                env.check(format!("fd-{name}"), k, Some(m), |e| {
                    let mut out = Vec::new();
                    for s in 1..k {
                        let x = BigComplex::from_f64(s as f64, 0.0, e.ctx.bits() + 64);
                        let a = completed_l_derivative(&f, &x, m, &e.ctx)?;
                        let b = finite_difference_derivative(&f, &x, m, &e.ctx)?;
                        let combined = Float::with_val(64, &a.est_error + &b.est_error);
                        let bound = 10.0 * combined.to_f64();
                        let tol = Tolerances { pass: bound, fail: bound };
                        out.push(IdentityCheck::new(
                            format!("fd-{name} Lambda^({m})({s}) mellin = finite difference"),
                            k,
                            Some(m),
                            to_decimal(&a.value.re),
                            to_decimal(&b.value.re),
                            &a.value.dist(&b.value),
                            &Float::new(64),
                            &tol,
                        ));
                    }
                    Ok(out)
                });
            }
        }
    }
    Ok(())
}

fn critical_values(f: &FourierExpansion, ctx: &PrecisionContext) -> Result<Vec<(BigReal, BigReal)>> {
    (1..f.weight)
        .map(|s| {
            let v = completed_l_derivative(f, &BigComplex::from_f64(s as f64, 0.0, ctx.bits() + 64), 0, ctx)?;
            Ok((v.value.re, v.est_error))
        })
        .collect()
}

fn manin_ratios(env: &mut Env, notes: &mut Vec<String>) -> Result<()> {
    let fine = PrecisionContext::new(2 * env.cfg.precision_bits)?;
    let height = Integer::from(MANIN_HEIGHT);
    for k in env.cfg.weights(12).filter(|k| MANIN_WEIGHTS.contains(k)) {
        env.check(format!("manin-k{k}"), k, None, |e| {
            let coarse_pkg = e.eigenforms(k, required_truncation(k, &e.ctx))?;
            let fine_pkg = eigenforms_cached(k, required_truncation(k, &fine), &fine, e.cfg.cache.as_deref())?;
            let coarse = critical_values(&coarse_pkg.forms[0], &e.ctx)?;
            let precise = critical_values(&fine_pkg.forms[0], &fine)?;
            let mut out = Vec::new();
            for parity in [1u32, 0] {
                let class: Vec<u32> = (1..k).filter(|s| s % 2 == parity).collect();
                let s0 = class[0];
                let (b, _) = &coarse[s0 as usize - 1];
                let (bf, ebf) = &precise[s0 as usize - 1];
                for &s in &class[1..] {
                    let (v, ev) = &coarse[s as usize - 1];
                    let label = format!("Lambda({s})/Lambda({s0}) rational");
                    let x = Float::with_val(e.ctx.bits(), v / b);
                    let r = if abs(v) <= *ev { Some(Rat::new()) } else { recognize_rational(&x, &height) };
                    let Some(r) = r else {
                        return Err(Error::PrecisionInfeasible(format!("{label}: no rational of height <= {MANIN_HEIGHT}")));
                    };
                    let (vf, evf) = &precise[s as usize - 1];
                    let p = fine.bits() + 64;
                    let xf = Float::with_val(p, vf / bf);
                    let diff = abs(&Float::with_val(p, &xf - &r));
                    let err = (Float::with_val(p, evf + Float::with_val(p, abs(&xf) * ebf))) / abs(bf);
                    out.push(IdentityCheck::new(label, k, None, to_decimal(&x), r.to_string(), &diff, &err, &e.tol));
                }
            }
            Ok(out)
        });
    }
    notes.push(format!(
        "ratios recognized at {} bits with height <= {MANIN_HEIGHT}, re-verified at {} bits",
        env.cfg.precision_bits,
        fine.bits()
    ));
    Ok(())
}

fn eisenstein_oracle(env: &mut Env) {
    for k in env.cfg.weights(4) {
        env.check("eisenstein-oracle".into(), k, None, |e| {
            let f = e.eisenstein(k)?;
            let mut out = Vec::new();
            for s in 1..k {
                let x = BigComplex::from_f64(s as f64, 0.0, e.ctx.bits() + 64);
                let a = completed_l_derivative(&f, &x, 0, &e.ctx)?;
                let b = eisenstein_lambda_oracle(k, &x, 0, &e.ctx)?;
                let prec = a.value.prec();
                let exact = eisenstein_lambda_exact(k, s);
                if exact.as_ref().is_some_and(|r| *r == 0) {
                    // trivial zero: |Lambda| within its error estimate
                    let bound = a.est_error.to_f64().max(f64::MIN_POSITIVE);
                    let v = a.value.abs();
                    out.push(IdentityCheck::new(
                        format!("Lambda_E({s}) = 0"),
                        k,
                        Some(0),
                        to_decimal(&v),
                        "0".into(),
                        &v,
                        &Float::new(64),
                        &Tolerances { pass: bound * (1.0 + 1e-9), fail: bound * (1.0 + 1e-9) },
                    ));
                    continue;
                }
                let scale = b.value.abs();
                let rel = Float::with_val(prec, a.value.dist(&b.value) / &scale);
                let err = Float::with_val(prec, &a.est_error + &b.est_error) / &scale;
                out.push(IdentityCheck::new(
                    format!("Lambda_E({s}) mellin = zeta product"),
                    k,
                    Some(0),
                    to_decimal(&a.value.re),
                    to_decimal(&b.value.re),
                    &rel,
                    &err,
                    &e.tol,
                ));
                if let Some(r) = exact {
                    let want = BigComplex::from_rat(&r, prec);
                    let d = a.value.dist(&want);
                    out.push(IdentityCheck::new(
                        format!("Lambda_E({s}) = {r}"),
                        k,
                        Some(0),
                        to_decimal(&a.value.re),
                        r.to_string(),
                        &d,
                        &Float::new(64),
                        &Tolerances { pass: a.est_error.to_f64().max(f64::MIN_POSITIVE) * (1.0 + 1e-9), fail: a.est_error.to_f64().max(f64::MIN_POSITIVE) * 2.0 },
                    ));
                }
            }
            Ok(out)
        });
    }
}
