//! Exact rationals, working-precision reals and complexes, and the zeta
//! values the rest of the crate is built on.

mod rat;
mod real;
mod zeta;

pub use rat::{bernoulli, binomial, divisor_sigma, factorial, zeta_even_coefficient, zeta_neg_int, BigInt, Rat};
pub use real::{
    exponent, parse_hex_literal, parse_real, pi, pow2, rat_to_real, to_decimal, to_hex_literal, two_pi, BigComplex,
    BigReal, PrecisionContext,
};
pub use zeta::{zeta_even, zeta_numeric, RealEstimate};

pub(crate) use zeta::zeta_real;
