//! Working-precision real and complex numbers.
//!
//! `BigReal` is an MPFR float. `BigComplex` is a plain pair of them; the
//! result of a binary operation carries the larger of the two operand
//! precisions, so guard bits added by a caller are never silently dropped.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::{Float, Integer};

use super::rat::Rat;
use crate::error::{Error, Result};

pub type BigReal = Float;

/// Precision contract handed to every approximate operation.
#[derive(Clone, Debug)]
pub struct PrecisionContext {
    working_bits: u32,
    target_abs_error: BigReal,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    /// Context with the default target `2^(16 - bits)`.
    pub fn new(working_bits: u32) -> Result<Self> {
        let target = Float::with_val(working_bits, Float::i_exp(1, 16 - working_bits as i32));
        Self::with_target(working_bits, target)
    }

    pub fn with_target(working_bits: u32, target_abs_error: BigReal) -> Result<Self> {
        if working_bits < Self::MIN_BITS {
            return Err(Error::ConfigInvalid(format!(
                "working precision {working_bits} below {} bits",
                Self::MIN_BITS
            )));
        }
        let floor = Float::with_val(working_bits, Float::i_exp(1, 8 - working_bits as i32));
        if target_abs_error < floor {
            return Err(Error::PrecisionInfeasible(format!(
                "target {:.3e} below 2^(8-{working_bits})",
                target_abs_error.to_f64()
            )));
        }
        Ok(PrecisionContext {
            working_bits,
            target_abs_error: Float::with_val(working_bits, target_abs_error),
        })
    }

    pub fn bits(&self) -> u32 {
        self.working_bits
    }

    pub fn target(&self) -> &BigReal {
        &self.target_abs_error
    }

    /// `log2` of the target, rounded down.
    pub fn target_log2(&self) -> i64 {
        self.target_abs_error.get_exp().map(|e| e as i64 - 1).unwrap_or(i64::MIN / 4)
    }

    /// Same target, more bits: used for internal guard precision.
    pub fn widened(&self, extra_bits: u32) -> PrecisionContext {
        PrecisionContext {
            working_bits: self.working_bits + extra_bits,
            target_abs_error: self.target_abs_error.clone(),
        }
    }

    pub fn real(&self, v: f64) -> BigReal {
        Float::with_val(self.working_bits, v)
    }

    pub fn zero(&self) -> BigReal {
        Float::new(self.working_bits)
    }
}

pub fn pi(prec: u32) -> BigReal {
    Float::with_val(prec, Constant::Pi)
}

pub fn two_pi(prec: u32) -> BigReal {
    Float::with_val(prec, Constant::Pi) * 2u32
}

pub fn rat_to_real(r: &Rat, prec: u32) -> BigReal {
    Float::with_val(prec, r)
}

/// `2^e` as a float of the given precision.
pub fn pow2(e: i64, prec: u32) -> BigReal {
    Float::with_val(prec, Float::i_exp(1, e as i32))
}

/// Exponent `e` with `2^(e-1) <= |x| < 2^e`; very negative for zero.
pub fn exponent(x: &BigReal) -> i64 {
    x.get_exp().map(|e| e as i64).unwrap_or(i64::MIN / 4)
}

/// Decimal rendering carrying every bit of `x`.
pub fn to_decimal(x: &BigReal) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

pub fn parse_real(s: &str, prec: u32) -> Result<BigReal> {
    let p = Float::parse(s.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    Ok(Float::with_val(prec, p))
}

/// Exact hexadecimal-significand literal `0x<mantissa>p<exp>` (value = m * 2^exp).
pub fn to_hex_literal(x: &BigReal) -> String {
    match x.to_integer_exp() {
        Some((m, e)) => {
            if m < 0 {
                format!("-0x{}p{}", (-m).to_string_radix(16), e)
            } else {
                format!("0x{}p{}", m.to_string_radix(16), e)
            }
        }
        None => "0x0p0".to_string(),
    }
}

pub fn parse_hex_literal(s: &str, prec: u32) -> Result<BigReal> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let body = body
        .strip_prefix("0x")
        .ok_or_else(|| Error::Parse(format!("`{s}` is not a hex literal")))?;
    let (mant, exp) = body
        .split_once('p')
        .ok_or_else(|| Error::Parse(format!("`{s}` lacks a binary exponent")))?;
    let m = Integer::from_str_radix(mant, 16).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
    let e: i32 = exp.parse().map_err(|_| Error::Parse(format!("`{s}`: bad exponent")))?;
    let mut v = Float::with_val(prec, m);
    v <<= e;
    if neg {
        v = -v;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, 1), Float::new(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex::new(re, Float::new(p))
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        BigComplex::from_real(Float::with_val(prec, r))
    }

    /// `i^n` exactly.
    pub fn i_pow(n: i64, prec: u32) -> Self {
        match n.rem_euclid(4) {
            0 => BigComplex::from_f64(1.0, 0.0, prec),
            1 => BigComplex::from_f64(0.0, 1.0, prec),
            2 => BigComplex::from_f64(-1.0, 0.0, prec),
            _ => BigComplex::from_f64(0.0, -1.0, prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn abs(&self) -> BigReal {
        let p = self.prec();
        Float::with_val(p, self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn norm_sqr(&self) -> BigReal {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn arg(&self) -> BigReal {
        let p = self.prec();
        Float::with_val(p, self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        let p = self.prec().max(r.prec());
        BigComplex::new(Float::with_val(p, &self.re * r), Float::with_val(p, &self.im * r))
    }

    pub fn scale_int(&self, n: &Integer) -> Self {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, &self.re * n), Float::with_val(p, &self.im * n))
    }

    pub fn mul_i(&self) -> Self {
        BigComplex::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone())
    }

    /// Multiplication by the exact unit `i^n`.
    pub fn mul_i_pow(&self, n: i64) -> Self {
        match n.rem_euclid(4) {
            0 => self.clone(),
            1 => self.mul_i(),
            2 => -self,
            _ => -&self.mul_i(),
        }
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        let p = self.prec();
        let im = Float::with_val(p, -&self.im);
        BigComplex::new(Float::with_val(p, &self.re / &d), im / &d)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = Float::with_val(p, &self.im).sin_cos(Float::new(p));
        BigComplex::new(m.clone() * c, m * s)
    }

    /// Principal branch, `arg` in `(-pi, pi]`.
    pub fn ln(&self) -> Self {
        BigComplex::new(self.abs().ln(), self.arg())
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut result = BigComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn dist(&self, other: &BigComplex) -> BigReal {
        (self - other).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn cmp_abs(&self, other: &BigComplex) -> Ordering {
        self.norm_sqr().partial_cmp(&other.norm_sqr()).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", to_decimal(&self.re), to_decimal(&self.im))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        BigComplex::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, &self.re * &o.re - &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im + &self.im * &o.re);
        BigComplex::new(re, im)
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().max(o.prec());
        let d = Float::with_val(p, o.re.square_ref()) + Float::with_val(p, o.im.square_ref());
        let re = Float::with_val(p, &self.re * &o.re + &self.im * &o.im) / &d;
        let im = Float::with_val(p, &self.im * &o.re - &self.re * &o.im) / &d;
        BigComplex::new(re, im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(Float::with_val(self.re.prec(), -&self.re), Float::with_val(self.im.prec(), -&self.im))
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, o: &BigComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, o: &BigComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&BigComplex> for BigComplex {
    fn mul_assign(&mut self, o: &BigComplex) {
        *self = &*self * o;
    }
}
