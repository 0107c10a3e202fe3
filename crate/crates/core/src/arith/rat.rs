//! Exact rational and integer arithmetic: Bernoulli numbers, binomials and
//! the values of the Riemann zeta function at non-positive integers.

use std::sync::{OnceLock, RwLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

pub type Rat = Rational;
pub type BigInt = Integer;

/// Append-only Bernoulli table, extended with the Akiyama–Tanigawa scheme.
///
/// `row` is the live Akiyama–Tanigawa row after producing `values.len()`
/// numbers, so extension resumes without recomputation. Values are stored
/// with the `B_1 = +1/2` convention the scheme naturally produces; the sign
/// of `B_1` is fixed on the way out.
struct BernoulliTable {
    values: Vec<Rat>,
    row: Vec<Rat>,
}

impl BernoulliTable {
    fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            self.row.push(Rat::from((1, m as u32 + 1)));
            for j in (1..=m).rev() {
                let diff = Rat::from(&self.row[j - 1] - &self.row[j]);
                self.row[j - 1] = diff * j as u32;
            }
            self.values.push(self.row[0].clone());
        }
    }
}

fn table() -> &'static RwLock<BernoulliTable> {
    static TABLE: OnceLock<RwLock<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| {
        RwLock::new(BernoulliTable {
            values: Vec::new(),
            row: Vec::new(),
        })
    })
}

/// The Bernoulli number `B_n`, with the convention `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rat {
    let idx = n as usize;
    if n == 1 {
        return Rat::from((-1, 2));
    }
    if n > 1 && n % 2 == 1 {
        return Rat::new();
    }
    {
        let t = table().read().expect("bernoulli table poisoned");
        if let Some(b) = t.values.get(idx) {
            return b.clone();
        }
    }
    let mut t = table().write().expect("bernoulli table poisoned");
    t.extend_to(idx);
    t.values[idx].clone()
}

/// `C(n, j)`, zero outside `0 <= j <= n`.
pub fn binomial(n: u32, j: i64) -> BigInt {
    if j < 0 || j > n as i64 {
        return BigInt::new();
    }
    BigInt::from(BigInt::binomial_u(n, j as u32))
}

pub fn factorial(n: u32) -> BigInt {
    BigInt::from(BigInt::factorial(n))
}

/// `zeta(-n) = (-1)^n B_{n+1} / (n+1)`.
pub fn zeta_neg_int(n: u32) -> Rat {
    let b = bernoulli(n + 1);
    let v = b / (n + 1);
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Rational `r` with `zeta(2n) = r * pi^(2n)`, for `n >= 1`.
pub fn zeta_even_coefficient(n: u32) -> Rat {
    assert!(n >= 1, "zeta(0) is not a rational multiple of a power of pi");
    let b = bernoulli(2 * n);
    let mut r = b * BigInt::from(BigInt::u_pow_u(2, 2 * n - 1)) / factorial(2 * n);
    if n % 2 == 0 {
        r = -r;
    }
    r
}

/// Sum of `d^e` over the positive divisors `d` of `n`.
pub fn divisor_sigma(e: u32, n: u64) -> BigInt {
    let mut total = BigInt::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += BigInt::from(d).pow(e);
            let other = n / d;
            if other != d {
                total += BigInt::from(other).pow(e);
            }
        }
        d += 1;
    }
    total
}
