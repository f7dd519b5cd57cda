//! Free groups, their rational group ring, and Fox's free differential
//! calculus.
//!
//! Words are kept freely reduced at all times, so a `FreeWord` is a
//! canonical representative and the group ring can use the letter vector as
//! a map key. The Fox derivative with respect to `x_k` is the unique
//! additive map with
//!
//! ```text
//! d(x_k)   = 1            d(x_j)   = 0        (j != k)
//! d(uv)    = d(u) + u d(v)
//! ```
//!
//! which forces `d(x_k^-1) = -x_k^-1`. Iterating over the letters of a word
//! with their prefixes implements exactly that recursion.

use crate::error::Error;
use crate::rational::Rational;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use num_traits::Zero;

/// A freely reduced word in the free group on `gens` generators. Letters
/// are signed 1-based generator indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct FreeWord {
    gens: usize,
    letters: Vec<i32>,
}

fn reduce_letters(letters: &[i32]) -> Vec<i32> {
    let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

impl FreeWord {
    pub fn new(gens: usize, letters: Vec<i32>) -> Result<FreeWord, Error> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize > gens {
                return Err(Error::BadLetter(format!(
                    "free-group letter {l} out of range for rank {gens}"
                )));
            }
        }
        Ok(FreeWord { gens, letters: reduce_letters(&letters) })
    }

    pub fn identity(gens: usize) -> FreeWord {
        FreeWord { gens, letters: Vec::new() }
    }

    pub fn generator(gens: usize, k: usize) -> FreeWord {
        assert!(k >= 1 && k <= gens);
        FreeWord { gens, letters: alloc::vec![k as i32] }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        debug_assert_eq!(self.gens, other.gens);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        FreeWord { gens: self.gens, letters: reduce_letters(&letters) }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            gens: self.gens,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Signed exponent sum of each generator (the abelianization).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = alloc::vec![0i64; self.gens];
        for &l in &self.letters {
            let idx = l.unsigned_abs() as usize - 1;
            sums[idx] += if l > 0 { 1 } else { -1 };
        }
        sums
    }

    /// Replaces generator `k` by `images[k-1]` throughout. The images fix
    /// the rank of the result.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        debug_assert_eq!(images.len(), self.gens);
        let target_gens = images.first().map(|w| w.gens).unwrap_or(0);
        let mut letters: Vec<i32> = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                letters.extend_from_slice(&img.letters);
            } else {
                letters.extend(img.letters.iter().rev().map(|x| -x));
            }
        }
        FreeWord { gens: target_gens, letters: reduce_letters(&letters) }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            if *l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

/// An element of the rational group ring of the free group: a finite formal
/// sum of reduced words with rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingElt {
    gens: usize,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl GroupRingElt {
    pub fn zero(gens: usize) -> GroupRingElt {
        GroupRingElt { gens, terms: BTreeMap::new() }
    }

    pub fn from_word(w: &FreeWord) -> GroupRingElt {
        let mut terms = BTreeMap::new();
        terms.insert(w.letters().to_vec(), Rational::from_integer(1.into()));
        GroupRingElt { gens: w.gens(), terms }
    }

    pub fn one(gens: usize) -> GroupRingElt {
        Self::from_word(&FreeWord::identity(gens))
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, letters: Vec<i32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(letters) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &GroupRingElt) -> GroupRingElt {
        debug_assert_eq!(self.gens, other.gens);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> GroupRingElt {
        GroupRingElt {
            gens: self.gens,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &GroupRingElt) -> GroupRingElt {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> GroupRingElt {
        if r.is_zero() {
            return Self::zero(self.gens);
        }
        GroupRingElt {
            gens: self.gens,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c * r)).collect(),
        }
    }

    /// Left multiplication by a group element.
    pub fn mul_word_left(&self, w: &FreeWord) -> GroupRingElt {
        let mut out = Self::zero(self.gens);
        for (t, c) in &self.terms {
            let prod = w.mul(&FreeWord { gens: self.gens, letters: t.clone() });
            out.insert(prod.letters().to_vec(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &GroupRingElt) -> GroupRingElt {
        debug_assert_eq!(self.gens, other.gens);
        let mut out = Self::zero(self.gens);
        for (u, cu) in &self.terms {
            let uw = FreeWord { gens: self.gens, letters: u.clone() };
            for (v, cv) in &other.terms {
                let prod = uw.mul(&FreeWord { gens: self.gens, letters: v.clone() });
                out.insert(prod.letters().to_vec(), cu * cv);
            }
        }
        out
    }
}

/// Fox derivative of `w` with respect to generator `k`: sum over the
/// letters of `w` of `prefix` (for `x_k`) or `-prefix x_k^-1` (for
/// `x_k^-1`).
pub fn fox_derivative(w: &FreeWord, k: usize) -> GroupRingElt {
    assert!(k >= 1 && k <= w.gens(), "derivative index out of range");
    let mut out = GroupRingElt::zero(w.gens());
    let one = Rational::from_integer(1.into());
    let mut prefix: Vec<i32> = Vec::new();
    for &l in w.letters() {
        if l == k as i32 {
            out.insert(prefix.clone(), one.clone());
        } else if l == -(k as i32) {
            let mut t = prefix.clone();
            t.push(l);
            out.insert(reduce_letters(&t), -&one);
        }
        prefix.push(l);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;

    fn fw(gens: usize, letters: &[i32]) -> FreeWord {
        FreeWord::new(gens, letters.to_vec()).unwrap()
    }

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(fw(2, &[1, 2, -2, -1]).letters(), &[] as &[i32]);
        assert_eq!(fw(2, &[1, -2, 2, 1]).letters(), &[1, 1]);
        let w = fw(2, &[1, 2, -1]);
        assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn basic_fox_rules() {
        let one = GroupRingElt::one(2);
        // d(x1)/dx1 = 1, d(x1)/dx2 = 0
        assert_eq!(fox_derivative(&fw(2, &[1]), 1), one);
        assert!(fox_derivative(&fw(2, &[1]), 2).is_zero());
        // d(x1^-1)/dx1 = -x1^-1
        let expect = GroupRingElt::from_word(&fw(2, &[-1])).neg();
        assert_eq!(fox_derivative(&fw(2, &[-1]), 1), expect);
        // product rule on x1 x2: d/dx2 = x1
        assert_eq!(
            fox_derivative(&fw(2, &[1, 2]), 2),
            GroupRingElt::from_word(&fw(2, &[1]))
        );
    }

    #[test]
    fn fundamental_identity_on_random_words() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let gens = 3usize;
        for _ in 0..100 {
            let len = rng.gen_range(0..12);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..=gens) as i32;
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            let w = FreeWord::new(gens, letters).unwrap();
            // sum_k d(w)/dx_k (x_k - 1) = w - 1
            let mut lhs = GroupRingElt::zero(gens);
            for k in 1..=gens {
                let dk = fox_derivative(&w, k);
                let xk = GroupRingElt::from_word(&FreeWord::generator(gens, k));
                lhs = lhs.add(&dk.mul(&xk.sub(&GroupRingElt::one(gens))));
            }
            let rhs = GroupRingElt::from_word(&w).sub(&GroupRingElt::one(gens));
            assert_eq!(lhs, rhs, "word {w}");
        }
    }

    #[test]
    fn substitution_composes() {
        // x1 -> x1 x2 x1^-1, x2 -> x1 applied to x1 x2
        let images = vec![fw(2, &[1, 2, -1]), fw(2, &[1])];
        let w = fw(2, &[1, 2]).substitute(&images);
        assert_eq!(w.letters(), &[1, 2]);
        // exponent sums are preserved by that substitution
        assert_eq!(fw(2, &[1, 2]).exponent_sums(), vec![1, 1]);
    }

    #[test]
    fn group_ring_coefficients_cancel() {
        let a = GroupRingElt::from_word(&fw(2, &[1])).scale(&rat(2, 3));
        let b = GroupRingElt::from_word(&fw(2, &[1])).scale(&rat(-2, 3));
        assert!(a.add(&b).is_zero());
    }
}
