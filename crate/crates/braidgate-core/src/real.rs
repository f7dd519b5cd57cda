//! Regular real numbers: exact reals as rational approximants with an
//! explicit convergence modulus.
//!
//! A regular real is a function `n -> x(n)` from positive integer precision
//! indices to rationals satisfying
//!
//! ```text
//! |x(n) - x(m)| <= 1/n + 1/m        for all n, m >= 1.
//! ```
//!
//! The limit `x` then satisfies `|x(n) - x| <= 1/n`, so `x(n)` is a
//! self-certifying approximation. Arithmetic must *rescale the index* to
//! keep the modulus: the naive pointwise sum `x(n) + y(n)` drifts by
//! `2/n + 2/m`, which is not regular. The combinators below carry the
//! standard corrected indices (Bishop-style), each justified in a comment.
//!
//! Precision indices are `BigInt` because composite expressions (nested
//! products, square roots) rescale multiplicatively and quickly overflow any
//! machine word.

use crate::error::Error;
use crate::rational::{ceil_int, inverse_ceil, rat_int, unit_fraction, Rational};
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct RegularReal {
    approx: Arc<dyn Fn(&BigInt) -> Rational + Send + Sync>,
}

impl RegularReal {
    /// Wraps a raw approximant function. Caller is responsible for the
    /// regularity bound; every constructor in this module documents its
    /// justification, and the test suite samples the bound on random index
    /// pairs.
    fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&BigInt) -> Rational + Send + Sync + 'static,
    {
        RegularReal { approx: Arc::new(f) }
    }

    /// A sequence already known to satisfy `|f(n) - limit| <= 1/n` is
    /// regular: `|f(n) - f(m)| <= |f(n) - x| + |x - f(m)| <= 1/n + 1/m`.
    fn from_converging<F>(f: F) -> Self
    where
        F: Fn(&BigInt) -> Rational + Send + Sync + 'static,
    {
        Self::from_fn(f)
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_fn(move |_| r.clone())
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// The approximant at index `n >= 1`; `|approximant(n) - x| <= 1/n`.
    pub fn approximant(&self, n: &BigInt) -> Rational {
        debug_assert!(n.is_positive(), "precision index must be >= 1");
        (self.approx)(n)
    }

    fn approximant_u(&self, n: u64) -> Rational {
        self.approximant(&BigInt::from(n))
    }

    /// `(x + y)(n) = x(2n) + y(2n)`: the error halves on each summand, so
    /// the sum keeps the `1/n + 1/m` modulus.
    pub fn add(&self, other: &RegularReal) -> RegularReal {
        let (x, y) = (self.clone(), other.clone());
        Self::from_fn(move |n| {
            let m = n * 2;
            x.approximant(&m) + y.approximant(&m)
        })
    }

    pub fn neg(&self) -> RegularReal {
        let x = self.clone();
        Self::from_fn(move |n| -x.approximant(n))
    }

    pub fn sub(&self, other: &RegularReal) -> RegularReal {
        self.add(&other.neg())
    }

    /// Canonical integer bound on `|x|`: from regularity,
    /// `|x(n)| <= |x(1)| + 1 + 1/n`, so `ceil(|x(1)|) + 2` dominates every
    /// approximant and the limit. Always >= 2.
    fn canonical_bound(&self) -> BigInt {
        ceil_int(&self.approximant(&BigInt::one()).abs()) + 2
    }

    /// `(x * y)(n) = x(2Kn) * y(2Kn)` with `K = max(bound(x), bound(y))`:
    ///
    /// ```text
    /// |x(2Kn) y(2Kn) - x(2Km) y(2Km)|
    ///   <= |x(2Kn)| |y(2Kn) - y(2Km)| + |y(2Km)| |x(2Kn) - x(2Km)|
    ///   <= K (1/2Kn + 1/2Km) * 2  =  1/n + 1/m.
    /// ```
    pub fn mul(&self, other: &RegularReal) -> RegularReal {
        let k = self.canonical_bound().max(other.canonical_bound());
        let (x, y) = (self.clone(), other.clone());
        Self::from_fn(move |n| {
            let m = n * 2 * &k;
            x.approximant(&m) * y.approximant(&m)
        })
    }

    /// Scaling by an exact rational: `(r x)(n) = r * x(Rn)` with
    /// `R = max(ceil(|r|), 1)`, so `|r|(1/Rn + 1/Rm) <= 1/n + 1/m`.
    pub fn scale(&self, r: &Rational) -> RegularReal {
        if r.is_zero() {
            return Self::zero();
        }
        let big_r = ceil_int(&r.abs()).max(BigInt::one());
        let x = self.clone();
        let r = r.clone();
        Self::from_fn(move |n| &r * x.approximant(&(n * &big_r)))
    }

    /// A rational within `eps` of the true value: `x(n)` at the least `n`
    /// with `2/n <= eps` (so in fact within `eps/2`). Errors on `eps <= 0`.
    pub fn real_approx(&self, eps: &Rational) -> Result<Rational, Error> {
        let half = eps / rat_int(2);
        let n = inverse_ceil(&half)?;
        Ok(self.approximant(&n))
    }

    /// Deterministic `f64` snapshot (approximant at index 2^60), used only
    /// as a search heuristic; never feeds a certified bound.
    pub fn to_f64(&self) -> f64 {
        let n = BigInt::one() << 60u32;
        self.approximant(&n).to_f64().unwrap_or(f64::NAN)
    }

    /// `sqrt(max(x, 0))`.
    ///
    /// `s(n) = r(clamp(x(16 n^2)))` where `r(a)` is a rational within
    /// `1/(4n)` of `sqrt(a)`. Since `t -> sqrt(max(t,0))` is 1/2-Hölder,
    /// `|sqrt(clamp(x(16n^2))) - sqrt(max(x,0))| <= sqrt(1/(16n^2)) = 1/(4n)`,
    /// so `|s(n) - sqrt(max(x,0))| <= 1/(2n)`: converging, hence regular.
    pub fn sqrt_nonneg(&self) -> RegularReal {
        let x = self.clone();
        Self::from_converging(move |n| {
            let a = x.approximant(&(n * n * 16)).max(Rational::zero());
            rational_sqrt_floor(&a, &(n * 4))
        })
    }

    /// pi via the BBP series
    ///
    /// ```text
    /// pi = sum_k 16^-k ( 4/(8k+1) - 2/(8k+4) - 1/(8k+5) - 1/(8k+6) ).
    /// ```
    ///
    /// Each bracket lies in `[0, 4/(8k+1)]`, so the tail after the k = K
    /// term is at most `(4/9)(16/15) 16^-(K+1) < (8/3) 16^-(K+1)`. The
    /// approximant at index `n` takes the least `K` with
    /// `(8/3) 16^-(K+1) <= 1/n`, giving `|sum - pi| <= 1/n`.
    pub fn pi() -> RegularReal {
        Self::from_converging(|n| {
            // least K with 3 * 16^(K+1) >= 8n
            let mut pow = BigInt::from(16);
            let threshold = n * 8;
            let mut k = 0usize;
            while &pow * 3 < threshold {
                pow *= 16;
                k += 1;
            }
            bbp_partial_sum(k + 1)
        })
    }

    /// `cos(2 pi q)`, exact in `q`. Reduces `q` mod 1, then evaluates the
    /// Taylor series at rational approximants of `theta = 2 pi q` (so
    /// `0 <= theta < 2 pi < 7`); see `taylor_cos_bounded`.
    pub fn cos_two_pi(q: &Rational) -> RegularReal {
        let theta = Self::pi().scale(&(crate::rational::mod_one(q) * rat_int(2)));
        Self::from_converging(move |n| {
            let t = theta.approximant(&(n * 2));
            taylor_cos_bounded(&t, &(n * 2))
        })
    }

    /// `sin(2 pi q)`; same scheme as `cos_two_pi`.
    pub fn sin_two_pi(q: &Rational) -> RegularReal {
        let theta = Self::pi().scale(&(crate::rational::mod_one(q) * rat_int(2)));
        Self::from_converging(move |n| {
            let t = theta.approximant(&(n * 2));
            taylor_sin_bounded(&t, &(n * 2))
        })
    }
}

impl core::fmt::Debug for RegularReal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "RegularReal(~{})", self.approximant_u(1000))
    }
}

/// Partial BBP sum over `terms` leading terms (`terms = 1` is the k = 0
/// term, 47/15).
pub fn bbp_partial_sum(terms: usize) -> Rational {
    let mut sum = Rational::zero();
    let mut sixteen_pow = Rational::one();
    for k in 0..terms {
        let k8 = 8 * k as i64;
        let bracket = crate::rational::rat(4, k8 + 1)
            - crate::rational::rat(2, k8 + 4)
            - crate::rational::rat(1, k8 + 5)
            - crate::rational::rat(1, k8 + 6);
        sum += &sixteen_pow * bracket;
        sixteen_pow /= rat_int(16);
    }
    sum
}

/// Rational `r` with `sqrt(a) - 1/s < r <= sqrt(a)` for `a = p/q >= 0`:
/// `r = floor(sqrt(p q s^2)) / (q s)`, because
/// `sqrt(p q s^2) = q s sqrt(p/q)` and flooring loses less than 1.
fn rational_sqrt_floor(a: &Rational, s: &BigInt) -> Rational {
    debug_assert!(!a.is_negative() && s.is_positive());
    let scaled = a.numer() * a.denom() * s * s;
    Rational::new(scaled.sqrt(), a.denom() * s)
}

/// Degree cutoff for the sin/cos Taylor series: the least `K` such that the
/// Lagrange remainder `8^(2K+3) / (2K+3)!` is at most `1/bound`, valid for
/// all `|t| <= 8`. (The callers evaluate at `t = theta(2n)` with
/// `|theta| < 2 pi`, so `|t| < 2 pi + 1 < 8`.)
fn taylor_cutoff(bound: &BigInt) -> usize {
    let mut k = 0usize;
    // remainder numerator 8^(2k+3), denominator (2k+3)!
    let mut num = BigInt::from(512); // 8^3
    let mut den = BigInt::from(6); // 3!
    loop {
        // 8^(2k+3)/(2k+3)! <= 1/bound  <=>  num * bound <= den
        if &num * bound <= den {
            return k;
        }
        k += 1;
        num *= 64;
        let d = 2 * k as i64;
        den *= BigInt::from((d + 2) * (d + 3));
    }
}

/// `sin t` to within `1/bound`, for `|t| <= 8`.
fn taylor_sin_bounded(t: &Rational, bound: &BigInt) -> Rational {
    let cutoff = taylor_cutoff(bound);
    let t2 = t * t;
    let mut term = t.clone(); // t^(2k+1)/(2k+1)! , signed
    let mut sum = term.clone();
    for k in 1..=cutoff {
        let d = 2 * k as i64;
        term = -term * &t2 / rat_int(d * (d + 1));
        sum += &term;
    }
    sum
}

/// `cos t` to within `1/bound`, for `|t| <= 8`.
fn taylor_cos_bounded(t: &Rational, bound: &BigInt) -> Rational {
    let cutoff = taylor_cutoff(bound);
    let t2 = t * t;
    let mut term = Rational::one();
    let mut sum = term.clone();
    for k in 1..=cutoff {
        let d = 2 * k as i64;
        term = -term * &t2 / rat_int((d - 1) * d);
        sum += &term;
    }
    sum
}

/// Decides the sign of a regular real known to be nonzero, by refining until
/// the approximant clears its own error bar. Diverges on true zero, so the
/// caller must guarantee nonzeroness; `limit` caps refinement as a safety
/// net (returns `None` if still undecided).
pub fn sign_of_nonzero(x: &RegularReal, limit_doublings: u32) -> Option<i32> {
    let mut n = BigInt::from(4);
    for _ in 0..limit_doublings {
        let a = x.approximant(&n);
        if a.abs() > unit_fraction(&n) * rat_int(2) {
            return Some(if a.is_positive() { 1 } else { -1 });
        }
        n *= 4;
    }
    None
}

/// Sampled regularity check, used by tests and the acceptance suite:
/// `|x(n) - x(m)| <= 1/n + 1/m` over the given index pairs.
pub fn regularity_holds(x: &RegularReal, pairs: &[(u64, u64)]) -> bool {
    pairs.iter().all(|(n, m)| {
        let (bn, bm) = (BigInt::from(*n), BigInt::from(*m));
        let gap = (x.approximant(&bn) - x.approximant(&bm)).abs();
        gap <= unit_fraction(&bn) + unit_fraction(&bm)
    })
}

/// Index pairs used for sampled regularity checks.
pub fn regularity_probe_pairs() -> Vec<(u64, u64)> {
    let grid = [1u64, 2, 3, 7, 10, 64, 100, 1000, 10_000, 1_000_000];
    let mut pairs = Vec::new();
    for &n in &grid {
        for &m in &grid {
            pairs.push((n, m));
        }
    }
    pairs
}
