//! Exact complex numbers: a pair of regular reals.
//!
//! No decidable equality or inversion here — this type is the *analytic*
//! side of the crate (targets, metrics, certified bounds). The algebraic
//! side, where equality must be decidable, is `Cyclotomic`.

use crate::rational::Rational;
use crate::real::RegularReal;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct ExactComplex {
    re: RegularReal,
    im: RegularReal,
}

impl ExactComplex {
    pub fn new(re: RegularReal, im: RegularReal) -> ExactComplex {
        ExactComplex { re, im }
    }

    pub fn from_rationals(re: &Rational, im: &Rational) -> ExactComplex {
        ExactComplex {
            re: RegularReal::constant(re.clone()),
            im: RegularReal::constant(im.clone()),
        }
    }

    pub fn zero() -> ExactComplex {
        ExactComplex { re: RegularReal::zero(), im: RegularReal::zero() }
    }

    pub fn one() -> ExactComplex {
        Self::from_rationals(&Rational::from_integer(1.into()), &Rational::from_integer(0.into()))
    }

    pub fn re(&self) -> &RegularReal {
        &self.re
    }

    pub fn im(&self) -> &RegularReal {
        &self.im
    }

    pub fn add(&self, other: &ExactComplex) -> ExactComplex {
        ExactComplex { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    pub fn neg(&self) -> ExactComplex {
        ExactComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn sub(&self, other: &ExactComplex) -> ExactComplex {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExactComplex) -> ExactComplex {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        ExactComplex { re, im }
    }

    pub fn conj(&self) -> ExactComplex {
        ExactComplex { re: self.re.clone(), im: self.im.neg() }
    }

    /// `|z| = sqrt(re^2 + im^2)`.
    pub fn abs(&self) -> RegularReal {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).sqrt_nonneg()
    }

    /// Sums a list in a balanced tree so the precision index rescales by
    /// `2^ceil(log2 len)` instead of `2^len`.
    pub fn balanced_sum(mut parts: Vec<ExactComplex>) -> ExactComplex {
        if parts.is_empty() {
            return ExactComplex::zero();
        }
        while parts.len() > 1 {
            let mut next = Vec::with_capacity(parts.len().div_ceil(2));
            let mut it = parts.chunks(2);
            for chunk in &mut it {
                next.push(if chunk.len() == 2 { chunk[0].add(&chunk[1]) } else { chunk[0].clone() });
            }
            parts = next;
        }
        parts.pop().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Signed;

    #[test]
    fn complex_product_rule() {
        // (1 + 2i)(3 - i) = 5 + 5i
        let a = ExactComplex::from_rationals(&rat(1, 1), &rat(2, 1));
        let b = ExactComplex::from_rationals(&rat(3, 1), &rat(-1, 1));
        let p = a.mul(&b);
        let eps = rat(1, 1_000_000);
        assert_eq!(p.re().real_approx(&eps).unwrap(), rat(5, 1));
        assert_eq!(p.im().real_approx(&eps).unwrap(), rat(5, 1));
    }

    #[test]
    fn abs_of_three_four() {
        let z = ExactComplex::from_rationals(&rat(3, 1), &rat(4, 1));
        let eps = rat(1, 1_000_000);
        let a = z.abs().real_approx(&eps).unwrap();
        assert!((a - rat(5, 1)).abs() <= eps);
    }

    #[test]
    fn conjugate_times_self_is_abs_squared() {
        let z = ExactComplex::from_rationals(&rat(2, 3), &rat(-1, 7));
        let n = z.mul(&z.conj());
        let eps = rat(1, 1_000_000);
        let expect = rat(2, 3) * rat(2, 3) + rat(1, 7) * rat(1, 7);
        assert!((n.re().real_approx(&eps).unwrap() - expect).abs() <= eps);
        assert!(n.im().real_approx(&eps).unwrap().abs() <= eps);
    }
}
