//! Double-exponential quadrature rules.
//!
//! Every rule is built on the grid `t_j = j h`, `h = 2^-level`. Nodes with even
//! `j` form the rule of the previous level, so one pass over the nodes yields
//! two estimates whose difference bounds the error of the coarser one (and a
//! fortiori of the finer one, since DE rules converge faster than
//! geometrically in `1/h`).

use std::f64::consts::{FRAC_PI_2, LN_2};

use rug::Float;

use crate::arith::{BigComplex, BigReal};

#[derive(Clone, Debug)]
pub struct DeNode {
    pub x: BigReal,
    /// Weight including the step `h`.
    pub w: BigReal,
    pub coarse: bool,
}

#[derive(Clone, Debug)]
pub struct DeRule {
    pub nodes: Vec<DeNode>,
    pub level: u32,
}

/// Fine and coarse estimates of one integral.
#[derive(Clone, Debug)]
pub struct QuadEstimate<T> {
    pub fine: T,
    pub coarse: T,
}

impl QuadEstimate<BigComplex> {
    pub fn error(&self) -> BigReal {
        (&self.fine - &self.coarse).abs()
    }
}

impl QuadEstimate<BigReal> {
    pub fn error(&self) -> BigReal {
        let p = self.fine.prec();
        Float::with_val(p, &self.fine - &self.coarse).abs()
    }
}

impl DeRule {
    /// exp-sinh rule on `[a, x_max]` for integrands decaying past `x_max`:
    /// `x = a + exp(pi/2 sinh t)`.
    pub fn half_line(a: &BigReal, x_max: f64, level: u32, prec: u32) -> DeRule {
        let h = 2f64.powi(-(level as i32));
        let span = (x_max - a.to_f64()).max(1.0);
        let t_lo = (-(prec as f64 * LN_2 + 16.0) / FRAC_PI_2).asinh();
        let t_hi = (span.ln() / FRAC_PI_2).asinh();
        let j_lo = (t_lo / h).floor() as i64;
        let j_hi = (t_hi / h).ceil() as i64;
        let hp = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
        let half_pi = Float::with_val(prec, rug::float::Constant::Pi) / 2u32;
        let mut nodes = Vec::with_capacity((j_hi - j_lo + 1) as usize);
        for j in j_lo..=j_hi {
            let t = Float::with_val(prec, &hp * j);
            let sinh = Float::with_val(prec, t.sinh_ref());
            let cosh = Float::with_val(prec, t.cosh_ref());
            let e = Float::with_val(prec, &half_pi * &sinh).exp();
            let w = Float::with_val(prec, &half_pi * &cosh) * &e * &hp;
            let x = Float::with_val(prec, a + &e);
            nodes.push(DeNode {
                x,
                w,
                coarse: j.rem_euclid(2) == 0,
            });
        }
        DeRule { nodes, level }
    }

    /// tanh-sinh rule on `[0, 1]`.
    pub fn unit_interval(level: u32, prec: u32) -> DeRule {
        let h = 2f64.powi(-(level as i32));
        let t_max = ((prec as f64 * LN_2 + 16.0) / std::f64::consts::PI).asinh() + 0.5;
        let j_max = (t_max / h).ceil() as i64;
        let hp = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
        let half_pi = Float::with_val(prec, rug::float::Constant::Pi) / 2u32;
        let mut nodes = Vec::with_capacity((2 * j_max + 1) as usize);
        for j in -j_max..=j_max {
            let t = Float::with_val(prec, &hp * j);
            let u = Float::with_val(prec, &half_pi * Float::with_val(prec, t.sinh_ref()));
            let ch = Float::with_val(prec, u.cosh_ref());
            let th = Float::with_val(prec, u.tanh_ref());
            let x = (th + 1u32) / 2u32;
            let w = Float::with_val(prec, &half_pi * Float::with_val(prec, t.cosh_ref())) / 2u32
                / Float::with_val(prec, ch.square_ref())
                * &hp;
            nodes.push(DeNode {
                x,
                w,
                coarse: j.rem_euclid(2) == 0,
            });
        }
        DeRule { nodes, level }
    }

    pub fn integrate_complex<F>(&self, mut f: F) -> QuadEstimate<BigComplex>
    where
        F: FnMut(&DeNode) -> BigComplex,
    {
        let p = self.nodes.first().map(|n| n.x.prec()).unwrap_or(64);
        let mut fine = BigComplex::zero(p);
        let mut coarse = BigComplex::zero(p);
        for n in &self.nodes {
            let v = f(n).scale(&n.w);
            if n.coarse {
                coarse += &v;
            }
            fine += &v;
        }
        coarse = coarse.scale(&Float::with_val(p, 2));
        QuadEstimate { fine, coarse }
    }

    pub fn integrate_real<F>(&self, mut f: F) -> QuadEstimate<BigReal>
    where
        F: FnMut(&DeNode) -> BigReal,
    {
        let p = self.nodes.first().map(|n| n.x.prec()).unwrap_or(64);
        let mut fine = Float::new(p);
        let mut coarse = Float::new(p);
        for n in &self.nodes {
            let v = f(n) * &n.w;
            if n.coarse {
                coarse += &v;
            }
            fine += &v;
        }
        coarse *= 2u32;
        QuadEstimate { fine, coarse }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn exponential_on_half_line() {
        // int_1^inf e^{-2 pi v} dv = e^{-2 pi} / (2 pi)
        let prec = 200;
        let one = Float::with_val(prec, 1);
        let tp = crate::arith::two_pi(prec);
        let rule = DeRule::half_line(&one, 40.0, 7, prec);
        let est = rule.integrate_real(|n| Float::with_val(prec, -(Float::with_val(prec, &n.x * &tp))).exp());
        let exact = Float::with_val(prec, -(tp.clone())).exp() / &tp;
        let err = Float::with_val(prec, &est.fine - &exact).abs();
        assert!(err < 1e-55, "err {err}");
        assert!(est.error() >= err);
    }

    #[test]
    fn polynomial_on_unit_interval() {
        let prec = 160;
        let rule = DeRule::unit_interval(6, prec);
        let est = rule.integrate_real(|n| n.x.clone().pow(7u32));
        let err = Float::with_val(prec, &est.fine - Float::with_val(prec, 0.125)).abs();
        assert!(err < 1e-40, "err {err}");
    }
}
