use rug::Float;

use super::{dim_cusp_forms, miller_integer_basis, Coefficients, FormKind, FourierExpansion};
use crate::arith::{exponent, BigComplex, BigInt, BigReal, PrecisionContext, Rat};
use crate::error::{Error, Result};
use crate::roots::aberth::{aberth, newton_polish};

/// Sup-norm residuals of the Hecke eigen-equations over `1 <= n <= N`.
#[derive(Clone, Debug)]
pub struct HeckeCertificate {
    pub t2_residual: BigReal,
    pub t3_residual: BigReal,
}

#[derive(Clone, Debug)]
pub struct EigenformPackage {
    pub weight: u32,
    pub forms: Vec<FourierExpansion>,
    pub certificates: Vec<HeckeCertificate>,
    /// Bits carried by the stored coefficients.
    pub precision: u32,
}

impl EigenformPackage {
    pub fn truncation(&self) -> usize {
        self.forms[0].truncation()
    }

    pub fn truncated(&self, n: usize) -> EigenformPackage {
        EigenformPackage {
            weight: self.weight,
            forms: self.forms.iter().map(|f| f.truncated(n)).collect(),
            certificates: self.certificates.clone(),
            precision: self.precision,
        }
    }
}

/// Exact matrix of `T_p` on the echelon basis: column `i` holds
/// `a_1 .. a_d` of `T_p f_i`.
fn hecke_matrix(basis: &[Vec<BigInt>], k: u32, p: u32) -> Vec<Vec<Rat>> {
    let d = basis.len();
    let pk = BigInt::from(BigInt::u_pow_u(p, k - 1));
    let mut m = vec![vec![Rat::new(); d]; d];
    for (i, f) in basis.iter().enumerate() {
        for j in 1..=d {
            let mut v = f[p as usize * j].clone();
            if j % p as usize == 0 {
                v += BigInt::from(&pk * &f[j / p as usize]);
            }
            m[j - 1][i] = Rat::from(v);
        }
    }
    m
}

/// Characteristic polynomial `det(x I - A)`, low degree first, by
/// Faddeev–LeVerrier.
pub(crate) fn char_poly(a: &[Vec<Rat>]) -> Vec<Rat> {
    let d = a.len();
    let mut c = vec![Rat::new(); d + 1];
    c[d] = Rat::from(1);
    let mut m = vec![vec![Rat::new(); d]; d];
    for i in 1..=d {
        // M_i = A M_{i-1} + c_{d-i+1} I
        let mut next = vec![vec![Rat::new(); d]; d];
        for r in 0..d {
            for s in 0..d {
                let mut acc = Rat::new();
                for t in 0..d {
                    acc += Rat::from(&a[r][t] * &m[t][s]);
                }
                if r == s {
                    acc += &c[d - i + 1];
                }
                next[r][s] = acc;
            }
        }
        m = next;
        let mut tr = Rat::new();
        for r in 0..d {
            for t in 0..d {
                tr += Rat::from(&a[r][t] * &m[t][r]);
            }
        }
        c[d - i] = -tr / i as u32;
    }
    c
}

/// Solve `(A - lambda I) c = 0` with `c_1 = 1` by elimination with partial
/// pivoting on the unknowns `c_2 .. c_d`.
fn eigenvector(a: &[Vec<Rat>], lambda: &BigReal, prec: u32) -> Vec<BigReal> {
    let d = a.len();
    let mut rows: Vec<Vec<BigReal>> = (0..d)
        .map(|r| {
            let mut row: Vec<BigReal> = (1..d)
                .map(|s| {
                    let mut v = Float::with_val(prec, &a[r][s]);
                    if r == s {
                        v -= lambda;
                    }
                    v
                })
                .collect();
            let mut rhs = Float::with_val(prec, &a[r][0]);
            if r == 0 {
                rhs -= lambda;
            }
            row.push(-rhs);
            row
        })
        .collect();
    let unknowns = d - 1;
    let mut pivot_rows = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let best = (col..d)
            .max_by(|&x, &y| rows[x][col].clone().abs().partial_cmp(&rows[y][col].clone().abs()).unwrap())
            .unwrap();
        rows.swap(col, best);
        pivot_rows.push(col);
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let factor = Float::with_val(prec, &rows[r][col] / &rows[col][col]);
                for s in col..=unknowns {
                    let t = Float::with_val(prec, &factor * &rows[col][s]);
                    rows[r][s] -= t;
                }
            }
        }
    }
    let mut c = vec![Float::with_val(prec, 1)];
    for col in 0..unknowns {
        c.push(Float::with_val(prec, &rows[col][unknowns] / &rows[col][col]));
    }
    c
}

/// Normalized Hecke eigenforms of weight `k` truncated at `N`, sorted by
/// ascending `a_2`.
pub fn hecke_eigenforms(k: u32, n: usize, ctx: &PrecisionContext) -> Result<EigenformPackage> {
    let d = dim_cusp_forms(k);
    if d == 0 {
        return Err(Error::DimensionZero(k));
    }
    let n = n.max(2 * d).max(6);
    let basis = miller_integer_basis(k, 3 * n)?;
    let coeff_bits = basis
        .iter()
        .flat_map(|f| f.iter())
        .map(|x| x.significant_bits())
        .max()
        .unwrap_or(1);
    let prec = ctx.bits() + 64 + 2 * k + coeff_bits;

    let t2 = hecke_matrix(&basis, k, 2);
    let poly = char_poly(&t2);
    let coeffs: Vec<BigComplex> = poly.iter().map(|r| BigComplex::from_rat(r, prec)).collect();
    let mut eigenvalues: Vec<BigReal> = if d == 1 {
        vec![Float::with_val(prec, &t2[0][0])]
    } else {
        aberth(&coeffs, prec)?
            .iter()
            .map(|z| newton_polish(&coeffs, z, prec).re)
            .collect()
    };
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for w in eigenvalues.windows(2) {
        let gap = Float::with_val(prec, &w[1] - &w[0]);
        let scale = exponent(&w[1].clone().abs()).max(0);
        if gap.is_zero() || exponent(&gap) - scale < -(prec as i64) / 3 {
            return Err(Error::NonSemisimpleNumerics(format!(
                "T_2 eigenvalues of weight {k} agree to {} bits",
                scale - exponent(&gap)
            )));
        }
    }

    let len = 3 * n + 1;
    let mut forms = Vec::with_capacity(d);
    let mut certificates = Vec::with_capacity(d);
    let target = ctx.target();
    for (idx, lambda) in eigenvalues.iter().enumerate() {
        let c = eigenvector(&t2, lambda, prec);
        let a: Vec<BigReal> = (0..len)
            .map(|m| {
                let mut acc = Float::new(prec);
                for (ci, f) in c.iter().zip(&basis) {
                    acc += Float::with_val(prec, ci * &f[m]);
                }
                acc
            })
            .collect();
        let t2_residual = hecke_residual(&a, k, 2, n, prec);
        let t3_residual = hecke_residual(&a, k, 3, n, prec);
        if t2_residual > *target || t3_residual > *target {
            return Err(Error::NonSemisimpleNumerics(format!(
                "weight {k} form {idx}: Hecke residuals {} / {} exceed target",
                t2_residual.to_f64(),
                t3_residual.to_f64()
            )));
        }
        certificates.push(HeckeCertificate { t2_residual, t3_residual });
        forms.push(FourierExpansion {
            weight: k,
            kind: FormKind::Eigenform(idx),
            coeffs: Coefficients::Real(a[..=n].to_vec()),
        });
    }
    Ok(EigenformPackage {
        weight: k,
        forms,
        certificates,
        precision: prec,
    })
}

/// `max_{1<=m<=N} |a(pm) + p^{k-1} a(m/p) - a_p a(m)|`.
fn hecke_residual(a: &[BigReal], k: u32, p: usize, n: usize, prec: u32) -> BigReal {
    let pk = Float::with_val(prec, BigInt::from(BigInt::u_pow_u(p as u32, k - 1)));
    let mut worst = Float::new(prec);
    for m in 1..=n {
        let mut v = a[p * m].clone();
        if m % p == 0 {
            v += Float::with_val(prec, &pk * &a[m / p]);
        }
        v -= Float::with_val(prec, &a[p] * &a[m]);
        let v = v.abs();
        if v > worst {
            worst = v;
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_expansion;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(200).unwrap()
    }

    #[test]
    fn weight_twelve_is_delta() {
        let pkg = hecke_eigenforms(12, 30, &ctx()).unwrap();
        assert_eq!(pkg.forms.len(), 1);
        let delta = delta_expansion(30).unwrap();
        for m in 0..=30 {
            let diff = Float::with_val(300, pkg.forms[0].coeff(m, 300) - delta.coeff(m, 300));
            assert!(diff.is_zero(), "a_{m}");
        }
    }

    #[test]
    fn weight_24_eigenvalues_by_radicals() {
        let pkg = hecke_eigenforms(24, 20, &ctx()).unwrap();
        assert_eq!(pkg.forms.len(), 2);
        let p = 400;
        let root = Float::with_val(p, 144169).sqrt() * 12u32;
        let lo = Float::with_val(p, 540) - &root;
        let hi = Float::with_val(p, 540) + &root;
        for (f, want) in pkg.forms.iter().zip([lo, hi]) {
            let err = Float::with_val(p, f.coeff(2, p) - &want).abs();
            assert!(err < 1e-50, "err {err}");
            assert_eq!(f.coeff(1, p), 1);
            assert!(f.coeff(0, p).is_zero());
        }
    }

    #[test]
    fn char_poly_of_small_matrix() {
        // [[1, 2], [3, 4]]: x^2 - 5x - 2
        let a = vec![vec![Rat::from(1), Rat::from(2)], vec![Rat::from(3), Rat::from(4)]];
        assert_eq!(char_poly(&a), vec![Rat::from(-2), Rat::from(-5), Rat::from(1)]);
    }

    #[test]
    fn multiplicativity_and_t3() {
        let c = ctx();
        let tol = Float::with_val(300, c.target() * 10u32);
        for k in [16u32, 24, 36, 48, 50] {
            let pkg = hecke_eigenforms(k, 12, &c).unwrap();
            assert_eq!(pkg.forms.len(), dim_cusp_forms(k));
            let p = pkg.precision;
            let pk = Float::with_val(p, BigInt::from(BigInt::u_pow_u(2, k - 1)));
            for (f, cert) in pkg.forms.iter().zip(&pkg.certificates) {
                let a = |m| f.coeff(m, p);
                let r6 = Float::with_val(p, a(6) - Float::with_val(p, a(2) * a(3))).abs();
                let r4 = Float::with_val(p, a(4) - Float::with_val(p, a(2) * a(2)) + &pk).abs();
                assert!(r6 < tol && r4 < tol, "k = {k}");
                assert!(cert.t3_residual < *c.target());
            }
            for w in pkg.forms.windows(2) {
                assert!(w[0].coeff(2, p) < w[1].coeff(2, p));
            }
        }
    }
}
