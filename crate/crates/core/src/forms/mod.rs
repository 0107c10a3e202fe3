//! Truncated q-expansions of level-one modular forms: Eisenstein series, the
//! Miller basis of cusp forms, and normalized Hecke eigenforms.

mod cache;
mod hecke;
pub(crate) mod series;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli, divisor_sigma, rat_to_real, BigInt, BigReal, Rat};
use crate::error::{Error, Result};

pub use cache::{eigenforms_cached, read_package, write_expansion, read_expansion, write_package};
pub use hecke::{hecke_eigenforms, EigenformPackage, HeckeCertificate};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormKind {
    Eisenstein,
    Eigenform(usize),
    BasisElement(usize),
}

#[derive(Clone, Debug)]
pub enum Coefficients {
    Exact(Vec<Rat>),
    Real(Vec<BigReal>),
}

#[derive(Clone, Debug)]
pub struct FourierExpansion {
    pub weight: u32,
    pub kind: FormKind,
    pub coeffs: Coefficients,
}

impl FourierExpansion {
    pub fn truncation(&self) -> usize {
        self.len() - 1
    }

    fn len(&self) -> usize {
        match &self.coeffs {
            Coefficients::Exact(v) => v.len(),
            Coefficients::Real(v) => v.len(),
        }
    }

    /// `a_n` rounded to `prec` bits.
    pub fn coeff(&self, n: usize, prec: u32) -> BigReal {
        match &self.coeffs {
            Coefficients::Exact(v) => rat_to_real(&v[n], prec),
            Coefficients::Real(v) => Float::with_val(prec, &v[n]),
        }
    }

    pub fn exact(&self) -> Option<&[Rat]> {
        match &self.coeffs {
            Coefficients::Exact(v) => Some(v),
            Coefficients::Real(_) => None,
        }
    }

    pub fn is_cusp(&self) -> bool {
        match &self.coeffs {
            Coefficients::Exact(v) => v[0] == 0,
            Coefficients::Real(v) => v[0].is_zero(),
        }
    }

    /// Copy keeping `a_0 .. a_n`.
    pub fn truncated(&self, n: usize) -> FourierExpansion {
        let coeffs = match &self.coeffs {
            Coefficients::Exact(v) => Coefficients::Exact(v[..=n].to_vec()),
            Coefficients::Real(v) => Coefficients::Real(v[..=n].to_vec()),
        };
        FourierExpansion {
            weight: self.weight,
            kind: self.kind.clone(),
            coeffs,
        }
    }

    /// Largest `|a_n| / n^k` over `1 <= n <= N`.
    pub fn crude_bound_ratio(&self) -> f64 {
        (1..self.len())
            .map(|n| {
                let a = self.coeff(n, 64).abs();
                let nk = Float::with_val(64, n as u32).pow(self.weight);
                (a / nk).to_f64()
            })
            .fold(0.0, f64::max)
    }
}

pub fn dim_cusp_forms(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// `E_k = -B_k/(2k) + sum sigma_{k-1}(n) q^n`.
pub fn eisenstein_expansion(k: u32, n: usize) -> Result<FourierExpansion> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::invalid(format!("Eisenstein weight must be even and at least 4, got {k}")));
    }
    let mut a = Vec::with_capacity(n + 1);
    a.push(-bernoulli(k) / (2 * k));
    a.extend((1..=n).map(|m| Rat::from(divisor_sigma(k - 1, m as u64))));
    Ok(FourierExpansion {
        weight: k,
        kind: FormKind::Eisenstein,
        coeffs: Coefficients::Exact(a),
    })
}

/// `Delta = eta^24` from the pentagonal expansion of `eta`.
pub fn delta_expansion(n: usize) -> Result<FourierExpansion> {
    if n == 0 {
        return Err(Error::invalid("truncation must be at least 1"));
    }
    Ok(FourierExpansion {
        weight: 12,
        kind: FormKind::BasisElement(1),
        coeffs: Coefficients::Exact(series::delta(n).into_iter().map(Rat::from).collect()),
    })
}

/// Integer coefficients of the echelon basis `f_i = q^i + O(q^{d+1})`.
pub(crate) fn miller_integer_basis(k: u32, n: usize) -> Result<Vec<Vec<BigInt>>> {
    let d = dim_cusp_forms(k);
    if d == 0 {
        return Err(Error::DimensionZero(k));
    }
    if n < d {
        return Err(Error::invalid(format!("truncation {n} below dim S_{k} = {d}")));
    }
    let delta = series::delta(n);
    let e4 = series::e4(n);
    let e6 = series::e6(n);
    let mut gens: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    let mut delta_pow = delta.clone();
    for i in 1..=d {
        let rest = k - 12 * i as u32;
        let b = if rest % 4 == 0 { 0 } else { 1 };
        let a = (rest - 6 * b) / 4;
        let mut g = series::mul(&delta_pow, &series::pow(&e4, a, n), n);
        if b == 1 {
            g = series::mul(&g, &e6, n);
        }
        gens.push(g);
        delta_pow = series::mul(&delta_pow, &delta, n);
    }
    // gens[i] = q^{i+1} + ...; clear the entries above the diagonal
    for i in (0..d).rev() {
        for j in i + 1..d {
            let c = gens[i][j + 1].clone();
            if c != 0 {
                let (lo, hi) = gens.split_at_mut(j);
                for (x, y) in lo[i].iter_mut().zip(&hi[0]) {
                    *x -= BigInt::from(&c * y);
                }
            }
        }
    }
    Ok(gens)
}

pub fn miller_basis(k: u32, n: usize) -> Result<Vec<FourierExpansion>> {
    let d = dim_cusp_forms(k);
    if d > 0 && n < 2 * d {
        return Err(Error::invalid(format!("truncation {n} below 2 dim S_{k} = {}", 2 * d)));
    }
    Ok(miller_integer_basis(k, n)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| FourierExpansion {
            weight: k,
            kind: FormKind::BasisElement(i + 1),
            coeffs: Coefficients::Exact(g.into_iter().map(Rat::from).collect()),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_heads() {
        let e4 = eisenstein_expansion(4, 2).unwrap();
        let a = e4.exact().unwrap();
        assert_eq!(a[0], Rat::from((1, 240)));
        assert_eq!(a[1], 1);
        assert_eq!(a[2], 9);
        let e12 = eisenstein_expansion(12, 1).unwrap();
        assert_eq!(e12.exact().unwrap()[0], Rat::from((691, 65520)));
        assert!(eisenstein_expansion(5, 3).is_err());
        assert!(eisenstein_expansion(2, 3).is_err());
    }

    #[test]
    fn eisenstein_at_primes() {
        let e = eisenstein_expansion(18, 50).unwrap();
        let a = e.exact().unwrap();
        for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            assert_eq!(a[p as usize], BigInt::from(BigInt::u_pow_u(p, 17)) + 1u32);
        }
    }

    #[test]
    fn dimensions() {
        let want = [(12, 1), (14, 0), (16, 1), (22, 1), (24, 2), (26, 1), (36, 3), (38, 2), (48, 4), (50, 3)];
        for (k, d) in want {
            assert_eq!(dim_cusp_forms(k), d, "k = {k}");
        }
        assert!(matches!(miller_basis(14, 10), Err(Error::DimensionZero(14))));
    }

    #[test]
    fn miller_twelve_is_delta() {
        let b = miller_basis(12, 40).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].exact().unwrap(), delta_expansion(40).unwrap().exact().unwrap());
    }

    #[test]
    fn miller_echelon() {
        for k in [24u32, 36, 48, 50] {
            let b = miller_basis(k, 20).unwrap();
            let d = b.len();
            for (i, f) in b.iter().enumerate() {
                let a = f.exact().unwrap();
                assert_eq!(a[0], 0);
                for j in 1..=d {
                    assert_eq!(a[j], if i + 1 == j { 1 } else { 0 }, "k={k} i={i} j={j}");
                }
            }
        }
    }
}
