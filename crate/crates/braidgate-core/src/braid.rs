//! Braid words, pure braid words, and the combinatorics connecting them.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * Strand positions are 1-based. An Artin letter `i > 0` crosses the
//!   strand at position `i` *over* position `i+1`; the letter `-i` is its
//!   inverse. Valid letters satisfy `1 <= |i| <= strands - 1`.
//! * Words read left to right; `perm(uv) = perm(u) then perm(v)`.
//! * A pure-braid letter is a signed pair `(a, b)` with `1 <= a < b`: the
//!   lasso in which strands `a` and `b` wrap once around each other,
//!   positively or negatively. Its Artin expansion is
//!   `s_(b-1) ... s_(a+1) s_a^(+-2) s_(a+1)^-1 ... s_(b-1)^-1`.
//! * Relator enumeration is lexicographic in the index tuples, so relator
//!   lists are stable across runs.

use crate::error::Error;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Permutation of `1..=n`, stored 0-based internally.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    /// The transposition of positions `i` and `i+1` (1-based `i`).
    pub fn adjacent_transposition(n: usize, i: usize) -> Permutation {
        assert!(i >= 1 && i < n, "transposition index out of range");
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// Builds from 1-based images; must be a bijection on `1..=n`.
    pub fn from_images(images_one_based: &[usize]) -> Result<Permutation, Error> {
        let n = images_one_based.len();
        let mut seen = vec![false; n];
        let mut images = Vec::with_capacity(n);
        for &v in images_one_based {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::BadLetter(format!("invalid permutation image {v}")));
            }
            seen[v - 1] = true;
            images.push(v - 1);
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of 1-based position `p`.
    pub fn apply(&self, p: usize) -> usize {
        self.images[p - 1] + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&v| other.images[v]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A word in the Artin generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<BraidWord, Error> {
        if strands < 1 {
            return Err(Error::BadLetter(String::from("braid needs at least one strand")));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::BadLetter(format!(
                    "letter {l} out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> BraidWord {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
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

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, Error> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Cancels adjacent inverse pairs until none remain (stack pass; the
    /// result is the unique freely reduced form).
    pub fn free_reduce(&self) -> BraidWord {
        let mut stack: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&-l) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        BraidWord { strands: self.strands, letters: stack }
    }

    /// The underlying permutation: position -> position, letters applied
    /// left to right.
    pub fn perm(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for &l in &self.letters {
            let t = Permutation::adjacent_transposition(self.strands, l.unsigned_abs() as usize);
            p = p.compose(&t);
        }
        p
    }

    pub fn is_pure(&self) -> bool {
        self.perm().is_identity()
    }
}

impl fmt::Display for BraidWord {
    /// Wire form: `strands=K;1,2,-1` (empty letter list for the identity).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={};", self.strands)?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// One signed pure-braid letter: the generator on strand pair `(a, b)`,
/// `a < b`, or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PureLetter {
    pub a: usize,
    pub b: usize,
    pub positive: bool,
}

impl PureLetter {
    pub fn inverse(&self) -> PureLetter {
        PureLetter { a: self.a, b: self.b, positive: !self.positive }
    }
}

impl fmt::Display for PureLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", if self.positive { '+' } else { '-' }, self.a, self.b)
    }
}

/// A word in the pure-braid generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PureBraidWord {
    strands: usize,
    letters: Vec<PureLetter>,
}

impl PureBraidWord {
    pub fn new(strands: usize, letters: Vec<PureLetter>) -> Result<PureBraidWord, Error> {
        if strands < 1 {
            return Err(Error::BadLetter(String::from("braid needs at least one strand")));
        }
        for l in &letters {
            if l.a < 1 || l.a >= l.b || l.b > strands {
                return Err(Error::BadLetter(format!(
                    "pure generator ({},{}) out of range for {strands} strands",
                    l.a, l.b
                )));
            }
        }
        Ok(PureBraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> PureBraidWord {
        PureBraidWord { strands, letters: Vec::new() }
    }

    /// Single-letter word.
    pub fn generator(strands: usize, a: usize, b: usize, positive: bool) -> Result<PureBraidWord, Error> {
        Self::new(strands, vec![PureLetter { a, b, positive }])
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[PureLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &PureBraidWord) -> Result<PureBraidWord, Error> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(PureBraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> PureBraidWord {
        PureBraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn free_reduce(&self) -> PureBraidWord {
        let mut stack: Vec<PureLetter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        PureBraidWord { strands: self.strands, letters: stack }
    }

    /// Artin expansion: each letter `(a, b)` becomes the conjugated square
    /// `s_(b-1) ... s_(a+1) s_a^(+-2) s_(a+1)^-1 ... s_(b-1)^-1`.
    pub fn embed(&self) -> BraidWord {
        let mut letters: Vec<i32> = Vec::new();
        for l in &self.letters {
            let (a, b) = (l.a as i32, l.b as i32);
            for i in (a + 1..b).rev() {
                letters.push(i);
            }
            let core = if l.positive { a } else { -a };
            letters.push(core);
            letters.push(core);
            for i in a + 1..b {
                letters.push(-i);
            }
        }
        BraidWord { strands: self.strands, letters }
    }

    /// Forgets the strands above `target`: letters touching a dropped
    /// strand (`b > target`) vanish, the rest survive unchanged.
    pub fn project(&self, target: usize) -> Result<PureBraidWord, Error> {
        if target < 1 || target > self.strands {
            return Err(Error::BadLetter(format!(
                "projection target {target} out of range for {} strands",
                self.strands
            )));
        }
        let letters = self.letters.iter().filter(|l| l.b <= target).copied().collect();
        PureBraidWord::new(target, letters)
    }
}

impl fmt::Display for PureBraidWord {
    /// Wire form: `strands=K;+(1,2);-(2,4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={}", self.strands)?;
        for l in &self.letters {
            write!(f, ";{l}")?;
        }
        Ok(())
    }
}

/// Defining relators of the braid group on `strands` strands, as words
/// equal to the identity:
///
/// * far commutation `s_i s_j s_i^-1 s_j^-1` for `j - i >= 2`;
/// * the braid relation `s_i s_(i+1) s_i s_(i+1)^-1 s_i^-1 s_(i+1)^-1`.
pub fn relators(strands: usize) -> Vec<BraidWord> {
    let n = strands as i32;
    let mut out = Vec::new();
    for i in 1..n {
        for j in i + 2..n {
            out.push(BraidWord { strands, letters: vec![i, j, -i, -j] });
        }
    }
    for i in 1..n - 1 {
        out.push(BraidWord { strands, letters: vec![i, i + 1, i, -(i + 1), -i, -(i + 1)] });
    }
    out
}

fn pl(a: usize, b: usize, positive: bool) -> PureLetter {
    debug_assert!(a < b);
    PureLetter { a, b, positive }
}

/// Defining relators of the pure braid group in the lasso generators, as
/// words equal to the identity. Writing `g(a,b)` for the generator on the
/// (sorted) pair, the families are, for strand indices `r < i < s < j`:
///
/// 1. disjoint or nested pairs commute:
///    `[g(i,j), g(r,s)]` for `r < s < i < j`, and `[g(a,j), g(i,s)]`-type
///    nesting `i < r < s < j` (relabeled below);
/// 2. triple cycling for `r < i < j`:
///    `g(i,j) g(r,i) g(r,j) = g(r,i) g(r,j) g(i,j) = g(r,j) g(i,j) g(r,i)`;
/// 3. interleaved pairs: `[g(r,s), g(r,j) g(i,j) g(s,j)]` for `r < i < s < j`.
pub fn pure_relators(strands: usize) -> Vec<PureBraidWord> {
    let mut out: Vec<Vec<PureLetter>> = Vec::new();
    let commutator = |x: Vec<PureLetter>, y: Vec<PureLetter>| {
        let mut w = Vec::new();
        w.extend(x.iter().copied());
        w.extend(y.iter().copied());
        w.extend(x.iter().rev().map(|l| l.inverse()));
        w.extend(y.iter().rev().map(|l| l.inverse()));
        w
    };
    // family 1, over quadruples a < b < c < d: (r,s,i,j) = (a,b,c,d) gives
    // the disjoint case, (i,r,s,j) = (a,b,c,d) the nested case
    for a in 1..=strands {
        for b in a + 1..=strands {
            for c in b + 1..=strands {
                for d in c + 1..=strands {
                    out.push(commutator(vec![pl(c, d, true)], vec![pl(a, b, true)]));
                    out.push(commutator(vec![pl(a, d, true)], vec![pl(b, c, true)]));
                }
            }
        }
    }
    // family 2, over triples r < i < j: two equalities of the cycled triple
    for r in 1..=strands {
        for i in r + 1..=strands {
            for j in i + 1..=strands {
                let w1 = [pl(i, j, true), pl(r, i, true), pl(r, j, true)];
                let w2 = [pl(r, i, true), pl(r, j, true), pl(i, j, true)];
                let w3 = [pl(r, j, true), pl(i, j, true), pl(r, i, true)];
                let eq = |x: &[PureLetter; 3], y: &[PureLetter; 3]| {
                    let mut w: Vec<PureLetter> = x.to_vec();
                    w.extend(y.iter().rev().map(|l| l.inverse()));
                    w
                };
                out.push(eq(&w1, &w2));
                out.push(eq(&w2, &w3));
            }
        }
    }
    // family 3, over r < i < s < j
    for r in 1..=strands {
        for i in r + 1..=strands {
            for s in i + 1..=strands {
                for j in s + 1..=strands {
                    out.push(commutator(
                        vec![pl(r, s, true)],
                        vec![pl(r, j, true), pl(i, j, true), pl(s, j, true)],
                    ));
                }
            }
        }
    }
    out.into_iter()
        .map(|letters| PureBraidWord { strands, letters })
        .collect()
}
