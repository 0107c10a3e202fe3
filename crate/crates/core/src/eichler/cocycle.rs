use crate::error::{Error, Result};
use crate::periodpoly::LaurentPoly;

use super::group::{act_weight, GroupElement};

/// A 1-cochain given by its values on the generators `S` and `T`.
#[derive(Clone, Debug)]
pub struct CocycleAssignment {
    pub weight: u32,
    pub value_s: LaurentPoly,
    pub value_t: LaurentPoly,
}

impl CocycleAssignment {
    pub fn new(weight: u32, value_s: LaurentPoly, value_t: LaurentPoly) -> Result<Self> {
        for p in [&value_s, &value_t] {
            if !p.is_zero() && (p.min_exp() < 0 || p.max_exp().unwrap() > weight as i64 - 2) {
                return Err(Error::invalid(format!(
                    "cocycle values must lie in P_{}, got exponents {}..={}",
                    weight - 2,
                    p.min_exp(),
                    p.max_exp().unwrap()
                )));
            }
        }
        Ok(CocycleAssignment { weight, value_s, value_t })
    }

    /// `phi(S) = p`, `phi(T) = 0`.
    pub fn from_s_value(p: LaurentPoly) -> Result<Self> {
        let k = p.weight;
        let zero = LaurentPoly::zero(k, "0", p.prec());
        CocycleAssignment::new(k, p, zero)
    }

    fn generator(&self, c: char) -> Result<LaurentPoly> {
        let k = self.weight;
        Ok(match c {
            'S' => self.value_s.clone(),
            'T' => self.value_t.clone(),
            // 0 = phi(T T^-1) = phi(T)|T^-1 + phi(T^-1)
            't' => {
                let v = act_weight(&self.value_t, &GroupElement::t_inv(), k)?;
                v.scale_shift(&crate::arith::BigComplex::from_f64(-1.0, 0.0, v.prec()), 0)
            }
            'I' => LaurentPoly::zero(k, "0", self.value_s.prec()),
            other => return Err(Error::invalid(format!("unknown generator `{other}`"))),
        })
    }
}

/// `phi(g_1 ... g_n) = sum_i phi(g_i)|(g_{i+1} ... g_n)`, with each suffix
/// multiplied out exactly so rounding error is amplified once per term.
pub fn cocycle_extend(a: &CocycleAssignment, g: &GroupElement) -> Result<LaurentPoly> {
    let k = a.weight;
    let mut acc = LaurentPoly::zero(k, "0", a.value_s.prec());
    let mut suffix = GroupElement::identity();
    for c in g.word.chars().rev().filter(|c| !c.is_whitespace()) {
        let v = a.generator(c)?;
        acc = acc.add(&act_weight(&v, &suffix, k)?);
        suffix = GroupElement::from_word(&c.to_string())?.mul(&suffix);
    }
    Ok(acc.with_family(format!("phi({})", g.word)))
}

/// `(phi(S^2), phi((ST)^3))`; both vanish exactly when the assignment
/// extends to a cocycle.
pub fn relation_defects(a: &CocycleAssignment) -> Result<(LaurentPoly, LaurentPoly)> {
    let s2 = cocycle_extend(a, &GroupElement::from_word("SS")?)?;
    let st3 = cocycle_extend(a, &GroupElement::from_word("STSTST")?)?;
    Ok((s2, st3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BigComplex, PrecisionContext};
    use crate::forms::delta_expansion;
    use crate::lfun::required_truncation;
    use crate::periodpoly::build_r;
    use rug::Float;

    fn monomial(e: i64, k: u32) -> LaurentPoly {
        let mut c = vec![BigComplex::zero(128); e as usize + 1];
        c[e as usize] = BigComplex::one(128);
        LaurentPoly::new(0, c, k, "z^e", Float::new(128))
    }

    #[test]
    fn t_with_zero_value() {
        let a = CocycleAssignment::from_s_value(monomial(2, 12)).unwrap();
        assert!(cocycle_extend(&a, &GroupElement::t()).unwrap().is_zero());
        assert!(cocycle_extend(&a, &GroupElement::from_word("tT").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn generic_polynomial_is_not_a_cocycle() {
        let a = CocycleAssignment::from_s_value(monomial(2, 12)).unwrap();
        let (s2, st3) = relation_defects(&a).unwrap();
        assert!(!s2.is_zero() || !st3.is_zero());
        assert!(s2.sup_norm() > 0.5 || st3.sup_norm() > 0.5);
    }

    #[test]
    fn delta_relations_and_word_independence() {
        let ctx = PrecisionContext::new(200).unwrap();
        let d = delta_expansion(required_truncation(12, &ctx)).unwrap();
        let a = CocycleAssignment::from_s_value(build_r(&d, &ctx).unwrap()).unwrap();
        let (s2, st3) = relation_defects(&a).unwrap();
        assert!(s2.sup_norm() < 1e-25, "{}", s2.sup_norm());
        assert!(st3.sup_norm() < 1e-25, "{}", st3.sup_norm());
        // TST = (ST)^-1 S^-1 T^-1 ... two words for one matrix
        let w1 = GroupElement::from_word("TST").unwrap();
        let w2 = GroupElement::from_word("SSTST").unwrap();
        assert!(w1.a == w2.a.clone() * -1 || w1.a == w2.a);
        let v1 = cocycle_extend(&a, &w1).unwrap();
        let v2 = cocycle_extend(&a, &w2).unwrap();
        assert!(v1.distance(&v2) < 1e-25);
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(CocycleAssignment::from_s_value(monomial(11, 12)).is_err());
    }
}
