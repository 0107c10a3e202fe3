use rug::Float;
use serde::ser::{Serialize, Serializer};

use crate::arith::{to_decimal, BigComplex, BigReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `sum_e c_e z^e` for `min_exp <= e < min_exp + coeffs.len()`, with an
/// absolute error bound shared by all coefficients.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<BigComplex>,
    pub weight: u32,
    pub family: String,
    pub error_bound: BigReal,
}

impl LaurentPoly {
    /// Canonical form: exactly-zero coefficients at either end are dropped.
    pub fn new(min_exp: i64, coeffs: Vec<BigComplex>, weight: u32, family: impl Into<String>, error_bound: BigReal) -> Self {
        let mut p = LaurentPoly {
            min_exp,
            coeffs,
            weight,
            family: family.into(),
            error_bound,
        };
        p.trim();
        p
    }

    pub fn zero(weight: u32, family: impl Into<String>, prec: u32) -> Self {
        LaurentPoly::new(0, Vec::new(), weight, family, Float::new(prec))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(BigComplex::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
        } else {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    /// Largest exponent with a nonzero coefficient (`None` for zero).
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_exp + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.first().map(|c| c.prec()).unwrap_or(self.error_bound.prec())
    }

    pub fn coeff(&self, e: i64) -> BigComplex {
        let i = e - self.min_exp;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigComplex::zero(self.prec())
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Exponents carrying nonzero coefficients.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| self.min_exp + i as i64)
            .collect()
    }

    fn from_fn(lo: i64, hi: i64, weight: u32, family: String, error_bound: BigReal, f: impl Fn(i64) -> BigComplex) -> Self {
        let coeffs = (lo..=hi).map(f).collect();
        LaurentPoly::new(lo, coeffs, weight, family, error_bound)
    }

    fn span(&self, other: &LaurentPoly) -> (i64, i64) {
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_exp().unwrap_or(lo).max(other.max_exp().unwrap_or(lo));
        (lo, hi)
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let (lo, hi) = self.span(other);
        let err = Float::with_val(self.error_bound.prec(), &self.error_bound + &other.error_bound);
        LaurentPoly::from_fn(lo, hi, self.weight, self.family.clone(), err, |e| &self.coeff(e) + &other.coeff(e))
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let (lo, hi) = self.span(other);
        let err = Float::with_val(self.error_bound.prec(), &self.error_bound + &other.error_bound);
        LaurentPoly::from_fn(lo, hi, self.weight, format!("{}-{}", self.family, other.family), err, |e| {
            &self.coeff(e) - &other.coeff(e)
        })
    }

    /// `c z^shift p(z)`.
    pub fn scale_shift(&self, c: &BigComplex, shift: i64) -> LaurentPoly {
        let err = self.error_bound.clone() * c.abs();
        LaurentPoly::new(
            self.min_exp + shift,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.weight,
            self.family.clone(),
            err,
        )
    }

    pub fn with_family(mut self, family: impl Into<String>) -> LaurentPoly {
        self.family = family.into();
        self
    }

    /// Largest coefficient modulus.
    pub fn sup_norm(&self) -> BigReal {
        let mut m = Float::new(self.prec());
        for c in &self.coeffs {
            let a = c.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// `max_e |p_e - q_e|`.
    pub fn distance(&self, other: &LaurentPoly) -> BigReal {
        let (lo, hi) = self.span(other);
        let mut m = Float::new(self.prec().max(other.prec()));
        for e in lo..=hi {
            let d = self.coeff(e).dist(&other.coeff(e));
            if d > m {
                m = d;
            }
        }
        m
    }

    /// `max_e |c_e - eps conj(c_{d-e})|` over `0 <= e <= d`: zero for a
    /// self-inversive polynomial of formal degree `d`.
    pub fn self_inversive_defect(&self, d: i64, eps: &BigComplex) -> BigReal {
        let mut m = Float::new(self.prec());
        for e in 0..=d {
            let v = self.coeff(e).dist(&(eps * &self.coeff(d - e).conj()));
            if v > m {
                m = v;
            }
        }
        m
    }

    pub fn eval(&self, z: &BigComplex) -> BigComplex {
        let p = self.prec().max(z.prec());
        let mut acc = BigComplex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        if self.min_exp >= 0 {
            &acc * &z.powi(self.min_exp as u32)
        } else {
            &acc * &z.powi((-self.min_exp) as u32).recip()
        }
    }
}

/// Keep exactly the coefficients whose exponent has the given parity.
pub fn parity_part(p: &LaurentPoly, parity: Parity) -> LaurentPoly {
    let want = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let prec = p.prec();
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if (p.min_exp + i as i64).rem_euclid(2) == want {
                c.clone()
            } else {
                BigComplex::zero(prec)
            }
        })
        .collect();
    let tag = match parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    LaurentPoly::new(p.min_exp, coeffs, p.weight, format!("{tag}({})", p.family), p.error_bound.clone())
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Repr<'a> {
            min_exp: i64,
            weight: u32,
            family: &'a str,
            coeffs: Vec<[String; 2]>,
            precision_bits: u32,
            error_bound: String,
        }
        Repr {
            min_exp: self.min_exp,
            weight: self.weight,
            family: &self.family,
            coeffs: self.coeffs.iter().map(|c| [to_decimal(&c.re), to_decimal(&c.im)]).collect(),
            precision_bits: self.prec(),
            error_bound: to_decimal(&self.error_bound),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(re, im, 128)
    }

    #[test]
    fn canonical_zero_and_trim() {
        let p = LaurentPoly::new(-1, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 4, "t", Float::new(128));
        assert_eq!(p.min_exp(), 0);
        assert_eq!(p.max_exp(), Some(0));
        let z = LaurentPoly::new(3, vec![c(0.0, 0.0); 4], 4, "t", Float::new(128));
        assert!(z.is_zero());
        assert_eq!(z.min_exp(), 0);
    }

    #[test]
    fn parity_reassembles() {
        let p = LaurentPoly::new(-1, (0..6).map(|i| c(i as f64 + 1.0, -(i as f64))).collect(), 6, "t", Float::new(128));
        let even = parity_part(&p, Parity::Even);
        let odd = parity_part(&p, Parity::Odd);
        assert!(even.add(&odd).distance(&p).is_zero());
        assert!(even.support().iter().all(|e| e % 2 == 0));
        assert!(parity_part(&even, Parity::Odd).is_zero());
    }

    #[test]
    fn json_shape() {
        let p = LaurentPoly::new(0, vec![c(0.5, -1.0)], 4, "t", Float::new(128));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["min_exp"], 0);
        assert_eq!(v["family"], "t");
        assert_eq!(v["precision_bits"], 128);
        assert!(v["coeffs"][0][0].as_str().unwrap().starts_with("5.0"));
    }
}
