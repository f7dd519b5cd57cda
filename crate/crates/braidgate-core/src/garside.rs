//! Left-greedy (Garside) normal form for braid words, giving a decidable
//! word problem.
//!
//! Every braid is `Delta^d A_1 ... A_s` where `Delta` is the half twist,
//! each `A_t` is a *permutation braid* (a positive braid in which any two
//! strands cross at most once — these biject with permutations), no `A_t`
//! is trivial or `Delta`, and each adjacent pair is left-weighted. That
//! form is unique, so two words are equal in the group iff their forms
//! match literally.
//!
//! With words acting left to right (`perm(uv) = perm(u) then perm(v)`), the
//! combinatorics of a permutation braid `A` with permutation `p` are:
//!
//! * `A` can start with `s_i`  iff `p(i) > p(i+1)`   (the *starting set* S);
//! * `A` can end with `s_i`    iff `p^-1(i) > p^-1(i+1)` (the *finishing set* F);
//! * `A s_i` is still a permutation braid iff `i` is not in `F(A)`.
//!
//! The pair `(A, B)` is left-weighted iff `S(B)` is contained in `F(A)`;
//! otherwise some `s_i` can migrate: `A <- A s_i`, `B <- s_i^-1 B`.
//!
//! Negative letters are folded in through
//! `s_i^-1 = Delta^-1 (Delta s_i^-1)`: pushing the `Delta^-1` to the far
//! left conjugates the accumulated factors by `Delta` (the "flip"
//! `s_i -> s_(n-i)`), and `Delta s_i^-1` is itself a permutation braid.

use crate::braid::{BraidWord, Permutation};
use crate::error::Error;
use alloc::vec::Vec;

/// The half-twist permutation `x -> n + 1 - x`.
pub fn half_twist(strands: usize) -> Permutation {
    let images: Vec<usize> = (0..strands).rev().map(|v| v + 1).collect();
    Permutation::from_images(&images).expect("reversal is a bijection")
}

/// Starting set: the `i` with `p(i) > p(i+1)` (1-based positions).
fn starting_set(p: &Permutation) -> Vec<usize> {
    (1..p.degree()).filter(|&i| p.apply(i) > p.apply(i + 1)).collect()
}

/// Finishing set: the starting set of the inverse.
fn finishing_set(p: &Permutation) -> Vec<usize> {
    starting_set(&p.inverse())
}

/// Conjugation by the half twist.
fn flip(p: &Permutation, omega: &Permutation) -> Permutation {
    omega.compose(&p.compose(omega))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GarsideNormalForm {
    strands: usize,
    delta_power: i64,
    factors: Vec<Permutation>,
}

impl GarsideNormalForm {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn delta_power(&self) -> i64 {
        self.delta_power
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.delta_power == 0 && self.factors.is_empty()
    }

    /// Canonical positive word for each factor: repeatedly peel the
    /// smallest admissible starting letter, giving the lexicographically
    /// least positive word of the permutation braid.
    pub fn factor_words(&self) -> Vec<BraidWord> {
        self.factors
            .iter()
            .map(|p| {
                let mut letters: Vec<i32> = Vec::new();
                let mut cur = p.clone();
                loop {
                    let s = starting_set(&cur);
                    let Some(&i) = s.first() else { break };
                    letters.push(i as i32);
                    cur = Permutation::adjacent_transposition(self.strands, i).compose(&cur);
                }
                BraidWord::new(self.strands, letters).expect("letters in range")
            })
            .collect()
    }
}

/// Left-greedy normal form of a braid word.
pub fn garside_normal_form(word: &BraidWord) -> GarsideNormalForm {
    let n = word.strands();
    let omega = half_twist(n);
    let mut delta_power: i64 = 0;
    let mut factors: Vec<Permutation> = Vec::new();

    // Fold letters into Delta^d * (positive permutation-braid factors).
    for &l in word.letters() {
        let i = l.unsigned_abs() as usize;
        let tau = Permutation::adjacent_transposition(n, i);
        if l > 0 {
            factors.push(tau);
        } else {
            delta_power -= 1;
            for f in factors.iter_mut() {
                *f = flip(f, &omega);
            }
            factors.push(omega.compose(&tau));
        }
    }

    // Normalize: drop identities, absorb half twists into the Delta power
    // (flipping everything to their left), and migrate letters until every
    // adjacent pair is left-weighted. Each migration moves a crossing
    // strictly leftward, so the sweep terminates.
    loop {
        let mut changed = false;

        factors.retain(|p| !p.is_identity());

        let mut j = 0;
        while j < factors.len() {
            if factors[j] == omega {
                delta_power += 1;
                for f in factors[..j].iter_mut() {
                    *f = flip(f, &omega);
                }
                factors.remove(j);
                changed = true;
            } else {
                j += 1;
            }
        }

        for j in 0..factors.len().saturating_sub(1) {
            loop {
                let fin = finishing_set(&factors[j]);
                let migrating: Vec<usize> = starting_set(&factors[j + 1])
                    .into_iter()
                    .filter(|i| !fin.contains(i))
                    .collect();
                let Some(&i) = migrating.first() else { break };
                let tau = Permutation::adjacent_transposition(n, i);
                factors[j] = factors[j].compose(&tau);
                factors[j + 1] = tau.compose(&factors[j + 1]);
                changed = true;
            }
        }

        if !changed {
            break;
        }
    }

    GarsideNormalForm { strands: n, delta_power, factors }
}

/// Decides equality in the braid group by comparing normal forms.
pub fn words_equal(u: &BraidWord, v: &BraidWord) -> Result<bool, Error> {
    if u.strands() != v.strands() {
        return Err(Error::StrandMismatch { left: u.strands(), right: v.strands() });
    }
    Ok(garside_normal_form(u) == garside_normal_form(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{pure_relators, relators};
    use alloc::vec;

    fn bw(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    #[test]
    fn half_twist_words_normalize_to_delta() {
        // both sides of the braid relation are Delta on 3 strands
        for letters in [[1, 2, 1], [2, 1, 2]] {
            let nf = garside_normal_form(&bw(3, &letters));
            assert_eq!(nf.delta_power(), 1);
            assert!(nf.factors().is_empty());
        }
    }

    #[test]
    fn single_letters_and_inverses() {
        let nf = garside_normal_form(&bw(3, &[1]));
        assert_eq!(nf.delta_power(), 0);
        assert_eq!(nf.factors().len(), 1);

        // s1^-1 = Delta^-1 (s1 s2)
        let nf = garside_normal_form(&bw(3, &[-1]));
        assert_eq!(nf.delta_power(), -1);
        assert_eq!(nf.factors().len(), 1);
        assert_eq!(nf.factor_words()[0].letters(), &[1, 2]);

        assert!(garside_normal_form(&bw(3, &[1, -1])).is_identity());
        assert!(garside_normal_form(&bw(3, &[-2, 2])).is_identity());
    }

    #[test]
    fn greedy_head_absorbs() {
        // s1 s2 is a single permutation braid, not two factors
        let nf = garside_normal_form(&bw(3, &[1, 2]));
        assert_eq!(nf.delta_power(), 0);
        assert_eq!(nf.factors().len(), 1);
        assert_eq!(nf.factors()[0].images(), vec![3, 1, 2]);
        // s1 s1: two factors (the strands may only cross once per factor)
        let nf = garside_normal_form(&bw(3, &[1, 1]));
        assert_eq!(nf.factors().len(), 2);
    }

    #[test]
    fn output_is_left_weighted_and_proper() {
        let words = [
            bw(4, &[1, 2, 3, -1, 2, -3, -3, 2, 1, 1]),
            bw(5, &[4, -3, 2, -1, 4, 4, -2, 3, 3, -4, 1]),
            bw(6, &[1, -2, 3, -4, 5, 5, -4, 3, -2, 1, 2, 2]),
        ];
        for w in &words {
            let nf = garside_normal_form(w);
            let omega = half_twist(w.strands());
            for f in nf.factors() {
                assert!(!f.is_identity());
                assert!(*f != omega);
            }
            for pair in nf.factors().windows(2) {
                let fin = finishing_set(&pair[0]);
                for i in starting_set(&pair[1]) {
                    assert!(fin.contains(&i), "pair not left-weighted in {w}");
                }
            }
        }
    }

    #[test]
    fn all_relators_normalize_to_identity() {
        for strands in 2..=6 {
            for r in relators(strands) {
                assert!(garside_normal_form(&r).is_identity(), "artin relator {r}");
            }
            for r in pure_relators(strands) {
                let w = r.embed();
                assert!(garside_normal_form(&w).is_identity(), "pure relator {r}");
            }
        }
    }

    #[test]
    fn full_twist_is_central() {
        // Delta^2 = (s1 s2 s1)^2 commutes with everything on 3 strands
        let delta2 = bw(3, &[1, 2, 1, 1, 2, 1]);
        for letters in [[1].as_slice(), [2].as_slice(), [1, -2].as_slice()] {
            let w = bw(3, letters);
            let lhs = delta2.concat(&w).unwrap();
            let rhs = w.concat(&delta2).unwrap();
            assert!(words_equal(&lhs, &rhs).unwrap());
        }
        // but Delta itself is not central: Delta s1 = s2 Delta
        let delta = bw(3, &[1, 2, 1]);
        let lhs = delta.concat(&bw(3, &[1])).unwrap();
        let rhs = bw(3, &[2]).concat(&delta).unwrap();
        assert!(words_equal(&lhs, &rhs).unwrap());
        let rhs_wrong = bw(3, &[1]).concat(&delta).unwrap();
        assert!(!words_equal(&lhs, &rhs_wrong).unwrap());
    }

    #[test]
    fn factor_words_recompose() {
        // normal form of a mixed word re-evaluates to an equal braid
        let w = bw(4, &[1, -2, 3, 1, -3, 2, 2, -1]);
        let nf = garside_normal_form(&w);
        let mut rebuilt = BraidWord::identity(4);
        let delta = bw(4, &[1, 2, 1, 3, 2, 1]); // positive half twist word
        let d = nf.delta_power();
        for _ in 0..d.unsigned_abs() {
            rebuilt = rebuilt.concat(&delta).unwrap();
        }
        if d < 0 {
            rebuilt = rebuilt.inverse();
        }
        for fw in nf.factor_words() {
            rebuilt = rebuilt.concat(&fw).unwrap();
        }
        assert!(words_equal(&w, &rebuilt).unwrap());
        // and the half twist word above really is Delta
        let nfd = garside_normal_form(&delta);
        assert_eq!(nfd.delta_power(), 1);
        assert!(nfd.factors().is_empty());
    }

    #[test]
    fn strand_mismatch_is_an_error() {
        let u = bw(3, &[1]);
        let v = bw(4, &[1]);
        assert!(words_equal(&u, &v).is_err());
    }
}
