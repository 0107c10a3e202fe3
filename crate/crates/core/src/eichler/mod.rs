//! The cohomology side: `SL_2(Z)` words, the weight `2-k` action on
//! polynomials, cocycles, Eichler integrals and the eta multiplier.

mod cocycle;
mod group;
mod integral;

pub use cocycle::{cocycle_extend, relation_defects, CocycleAssignment};
pub use group::{act_weight, action_matrix, GroupElement};
pub use integral::{
    c_gamma, eichler_f, sigma2_truncation, eichler_f_quadrature, log_eta, log_integral_truncation, log_weighted_integral, sigma2, EtaMultiplier, Sigma2Fit, CHECK_POINTS,
    MAX_MULTIPLIER_WORD, MAX_SIGMA2_WORD,
};
