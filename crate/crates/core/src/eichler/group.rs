use std::fmt;

use rug::ops::Pow;
use rug::Float;

use crate::arith::{binomial, BigComplex, BigInt};
use crate::error::{Error, Result};
use crate::periodpoly::LaurentPoly;

/// An element of `SL_2(Z)` with the word that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub word: String,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl GroupElement {
    fn from_entries(word: &str, a: i64, b: i64, c: i64, d: i64) -> Self {
        GroupElement {
            word: word.to_string(),
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::from_entries("I", 1, 0, 0, 1)
    }

    /// `z -> -1/z`.
    pub fn s() -> Self {
        Self::from_entries("S", 0, -1, 1, 0)
    }

    /// `z -> z + 1`.
    pub fn t() -> Self {
        Self::from_entries("T", 1, 1, 0, 1)
    }

    pub fn t_inv() -> Self {
        Self::from_entries("t", 1, -1, 0, 1)
    }

    /// Parse a word over `S`, `T`, `t` (= `T^-1`) and `I`, read left to
    /// right as a matrix product.
    pub fn from_word(word: &str) -> Result<Self> {
        let mut g = Self::identity();
        for ch in word.chars().filter(|c| !c.is_whitespace()) {
            let h = match ch {
                'S' => Self::s(),
                'T' => Self::t(),
                't' => Self::t_inv(),
                'I' => Self::identity(),
                _ => return Err(Error::invalid(format!("unknown generator `{ch}` in `{word}`"))),
            };
            g = g.mul(&h);
        }
        g.word = word.to_string();
        Ok(g)
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let word = match (self.word.as_str(), o.word.as_str()) {
            ("I", w) | (w, "I") => w.to_string(),
            (x, y) => format!("{x}{y}"),
        };
        GroupElement {
            word,
            a: BigInt::from(&self.a * &o.a) + BigInt::from(&self.b * &o.c),
            b: BigInt::from(&self.a * &o.b) + BigInt::from(&self.b * &o.d),
            c: BigInt::from(&self.c * &o.a) + BigInt::from(&self.d * &o.c),
            d: BigInt::from(&self.c * &o.b) + BigInt::from(&self.d * &o.d),
        }
    }

    /// Exact inverse; the word is reversed with `T <-> t` (`S` is its own
    /// inverse in `PSL_2(Z)`).
    pub fn inverse(&self) -> GroupElement {
        let word: String = self
            .word
            .chars()
            .rev()
            .map(|c| match c {
                'T' => 't',
                't' => 'T',
                other => other,
            })
            .collect();
        GroupElement {
            word,
            a: self.d.clone(),
            b: BigInt::from(-&self.b),
            c: BigInt::from(-&self.c),
            d: self.a.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 0 && self.d == 1
    }

    /// `gamma z`.
    pub fn apply(&self, z: &BigComplex) -> BigComplex {
        let p = z.prec();
        let num = &z.scale_int(&self.a) + &BigComplex::from_real(Float::with_val(p, &self.b));
        let den = self.j(z);
        &num / &den
    }

    /// Automorphy factor `cz + d`.
    pub fn j(&self, z: &BigComplex) -> BigComplex {
        &z.scale_int(&self.c) + &BigComplex::from_real(Float::with_val(z.prec(), &self.d))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = [[{}, {}], [{}, {}]]", self.word, self.a, self.b, self.c, self.d)
    }
}

/// Integer matrix of `P -> P|_{2-k} gamma` on `P_{k-2}`: column `j` holds
/// the coefficients of `(az+b)^j (cz+d)^{k-2-j}`.
pub fn action_matrix(g: &GroupElement, k: u32) -> Vec<Vec<BigInt>> {
    let w = (k - 2) as usize;
    let pow_lin = |x: &BigInt, y: &BigInt, e: usize| -> Vec<BigInt> {
        // (x z + y)^e
        (0..=e)
            .map(|i| {
                binomial(e as u32, i as i64)
                    * x.clone().pow(i as u32)
                    * y.clone().pow((e - i) as u32)
            })
            .collect()
    };
    let mut m = vec![vec![BigInt::new(); w + 1]; w + 1];
    for j in 0..=w {
        let left = pow_lin(&g.a, &g.b, j);
        let right = pow_lin(&g.c, &g.d, w - j);
        for (i1, x) in left.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (i2, y) in right.iter().enumerate() {
                m[i1 + i2][j] += BigInt::from(x * y);
            }
        }
    }
    m
}

/// `(P|_{2-k} gamma)(z) = P(gamma z) (cz+d)^{k-2}` for `P` in `P_{k-2}`.
pub fn act_weight(p: &LaurentPoly, g: &GroupElement, k: u32) -> Result<LaurentPoly> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let w = (k - 2) as i64;
    if p.min_exp() < 0 || p.max_exp().unwrap() > w {
        return Err(Error::invalid(format!(
            "slash action needs a polynomial of degree <= {w}, got exponents {}..={}",
            p.min_exp(),
            p.max_exp().unwrap()
        )));
    }
    let m = action_matrix(g, k);
    let prec = p.prec();
    let src: Vec<BigComplex> = (0..=w).map(|e| p.coeff(e)).collect();
    let mut row_norm = BigInt::new();
    let coeffs = m
        .iter()
        .map(|row| {
            let mut acc = BigComplex::zero(prec);
            let mut norm = BigInt::new();
            for (x, c) in row.iter().zip(&src) {
                if *x != 0 {
                    acc += &c.scale_int(x);
                    norm += BigInt::from(x.abs_ref());
                }
            }
            if norm > row_norm {
                row_norm = norm;
            }
            acc
        })
        .collect();
    let err = Float::with_val(prec, &p.error_bound * &row_norm);
    Ok(LaurentPoly::new(0, coeffs, p.weight, p.family.clone(), err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold_as_matrices() {
        let s = GroupElement::s();
        let st = GroupElement::from_word("ST").unwrap();
        let s2 = s.mul(&s);
        assert!(s2.a == -1 && s2.d == -1 && s2.b == 0 && s2.c == 0);
        let st3 = st.mul(&st).mul(&st);
        assert!(st3.a == -1 && st3.d == -1);
        assert!(GroupElement::from_word("Tt").unwrap().is_identity());
    }

    #[test]
    fn action_is_a_right_action() {
        let k = 8;
        let g = GroupElement::from_word("STT").unwrap();
        let h = GroupElement::from_word("tS").unwrap();
        let mg = action_matrix(&g, k);
        let mh = action_matrix(&h, k);
        let mgh = action_matrix(&g.mul(&h), k);
        // P|(gh) = (P|g)|h  <=>  M_gh = M_h M_g
        let n = mg.len();
        for r in 0..n {
            for c in 0..n {
                let mut acc = BigInt::new();
                for t in 0..n {
                    acc += BigInt::from(&mh[r][t] * &mg[t][c]);
                }
                assert_eq!(acc, mgh[r][c]);
            }
        }
    }

    #[test]
    fn s_acts_by_reversal_with_signs() {
        // (z^j)|S = (-1/z)^j z^{k-2} = (-1)^j z^{k-2-j}
        let m = action_matrix(&GroupElement::s(), 6);
        for j in 0..=4usize {
            for i in 0..=4usize {
                let want = if i == 4 - j { if j % 2 == 0 { 1 } else { -1 } } else { 0 };
                assert_eq!(m[i][j], want);
            }
        }
    }
}
