use rug::{Float, Integer};

use crate::arith::{pow2, BigReal, Rat};

/// `p/q` with `|p|, q <= max_height` and `|x - p/q| < 2^{-prec(x)/2}`, found
/// among the continued-fraction convergents of `x`.
pub fn recognize_rational(x: &BigReal, max_height: &Integer) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let prec = x.prec();
    let tol = pow2(-(prec as i64) / 2, prec);
    let (mut p0, mut q0) = (Integer::from(1), Integer::new());
    let (mut p1, mut q1) = (Integer::new(), Integer::from(1));
    let mut y = x.clone();
    loop {
        let a = y.clone().floor().to_integer()?;
        let p = Integer::from(&a * &p0) + &p1;
        let q = Integer::from(&a * &q0) + &q1;
        if p.clone().abs() > *max_height || q > *max_height {
            return None;
        }
        let r = Rat::from((p.clone(), q.clone()));
        if Float::with_val(prec, x - &r).abs() < tol {
            return Some(r);
        }
        let frac = Float::with_val(prec, &y - &a);
        if frac.is_zero() {
            return None;
        }
        y = frac.recip();
        (p1, q1) = (p0, q0);
        (p0, q0) = (p, q);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half() {
        let x = Float::with_val(200, 0.5);
        assert_eq!(recognize_rational(&x, &Integer::from(1_000_000)), Some(Rat::from((1, 2))));
    }

    #[test]
    fn negative_and_integer() {
        let x = Float::with_val(200, -7) / 3u32;
        assert_eq!(recognize_rational(&x, &Integer::from(100)), Some(Rat::from((-7, 3))));
        let x = Float::with_val(200, 12);
        assert_eq!(recognize_rational(&x, &Integer::from(100)), Some(Rat::from(12)));
    }

    #[test]
    fn sqrt_two_is_not_rational() {
        let x = Float::with_val(200, 2).sqrt();
        assert_eq!(recognize_rational(&x, &Integer::from(1_000_000)), None);
    }

    #[test]
    fn height_bound_is_respected() {
        let x = Float::with_val(200, &Rat::from((1_000_003, 999_983)));
        assert_eq!(recognize_rational(&x, &Integer::from(1_000_000)), None);
        assert!(recognize_rational(&x, &Integer::from(10_000_000)).is_some());
    }
}
