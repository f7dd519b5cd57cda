//! Exact cyclotomic numbers and unit phases.
//!
//! A `Cyclotomic` of order `L` is an element of `Q(zeta_L)` stored as its
//! coefficient vector in the power basis `1, zeta, ..., zeta^(phi(L)-1)`,
//! canonically reduced modulo the L-th cyclotomic polynomial `Phi_L`. Since
//! `Phi_L` is irreducible over `Q`, the reduced coefficient vector is
//! unique, so equality is literal coefficient comparison (after embedding
//! both operands into the lcm order when they differ).
//!
//! `Phi_L` itself is computed by the recursive identity
//! `x^L - 1 = prod_{d | L} Phi_d(x)`: divide `x^L - 1` by the `Phi_d` of all
//! proper divisors, in ascending order. The division is exact over the
//! integers because every `Phi_d` is monic.
//!
//! A `UnitPhase` is `exp(2 pi i q)` for rational `q`, stored as the exponent
//! reduced to `[0, 1)`; products add exponents mod 1, and `to_cyclotomic`
//! lands in the field of order = the exponent's denominator.

use crate::complex::ExactComplex;
use crate::error::Error;
use crate::rational::{mod_one, rat_int, Rational};
use crate::real::RegularReal;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Euler's totient by trial-division factorization (orders here are small).
pub fn euler_phi(mut l: u64) -> u64 {
    assert!(l >= 1);
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= l {
        if l % p == 0 {
            l /= p;
            phi *= p - 1;
            while l % p == 0 {
                l /= p;
                phi *= p;
            }
        }
        p += 1;
    }
    if l > 1 {
        phi *= l - 1;
    }
    phi
}

fn divisors(l: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=l).filter(|d| l % d == 0).collect();
    ds.sort_unstable();
    ds
}

/// Coefficients of `Phi_L`, low to high (integer, monic).
pub fn cyclotomic_polynomial(l: u64) -> Vec<BigInt> {
    assert!(l >= 1);
    // Phi_d for every divisor d of l, ascending, each obtained by dividing
    // x^d - 1 by the previously computed Phi_e (e | d, e < d).
    let mut table: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for d in divisors(l) {
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = -BigInt::one();
        f[d as usize] = BigInt::one();
        for (e, phi_e) in &table {
            if d % e == 0 {
                f = int_poly_div_exact(&f, phi_e);
            }
        }
        table.push((d, f));
    }
    table.pop().expect("l has at least one divisor").1
}

/// Exact division of integer polynomials, divisor monic. Panics if the
/// division leaves a remainder (internal use only, where exactness is a
/// theorem).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let dd = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let t = dc * &c;
            rem[i - dd + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

// ---- dense polynomial helpers over Q (low-to-high coefficient vectors) ----

fn poly_trim(p: &mut Vec<Rational>) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `num` modulo `den` (den nonzero, any leading coefficient).
fn poly_rem(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty(), "polynomial division by zero");
    let lead = den.last().unwrap().clone();
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    while rem.len() > dd {
        let c = rem.last().unwrap() / &lead;
        let shift = rem.len() - 1 - dd;
        for (j, dc) in den.iter().enumerate() {
            let t = dc * &c;
            rem[shift + j] -= t;
        }
        poly_trim(&mut rem);
        if rem.len() <= dd && rem.len() + 1 > 0 {
            break;
        }
    }
    poly_trim(&mut rem);
    rem
}

/// Extended gcd in Q[x]: returns `(g, u)` with `u*a + (something)*m = g`,
/// `g` the gcd (not normalized). Only `u` is needed (to invert `a` mod `m`).
fn poly_ext_gcd_mod(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    // Euclid on (r0, r1) = (m, a), tracking the coefficient of `a` only.
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut u0: Vec<Rational> = Vec::new(); // coeff of a in r0
    let mut u1: Vec<Rational> = vec![Rational::one()]; // coeff of a in r1
    while !r1.is_empty() {
        // quotient of r0 by r1
        let (q, r) = poly_divmod(&r0, &r1);
        let new_u = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = new_u;
    }
    (r0, u0)
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut den_t = den.to_vec();
    poly_trim(&mut den_t);
    assert!(!den_t.is_empty());
    let lead = den_t.last().unwrap().clone();
    let dd = den_t.len() - 1;
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd).max(1)];
    while rem.len() > dd {
        let c = rem.last().unwrap() / &lead;
        let shift = rem.len() - 1 - dd;
        quot[shift] = c.clone();
        for (j, dc) in den_t.iter().enumerate() {
            let t = dc * &c;
            rem[shift + j] -= t;
        }
        poly_trim(&mut rem);
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// An element of `Q(zeta_order)` in canonically reduced power-basis form.
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    /// Length phi(order), reduced mod Phi_order.
    coeffs: Vec<Rational>,
    /// Shared copy of Phi_order so arithmetic does not recompute it.
    modulus: Arc<Vec<BigInt>>,
}

impl Cyclotomic {
    fn modulus_for(order: u64) -> Arc<Vec<BigInt>> {
        Arc::new(cyclotomic_polynomial(order))
    }

    fn modulus_q(&self) -> Vec<Rational> {
        self.modulus.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Builds from an arbitrary polynomial in `zeta_order` (any length),
    /// reducing to the canonical basis.
    pub fn from_poly(order: u64, poly: Vec<Rational>) -> Cyclotomic {
        assert!(order >= 1, "cyclotomic order must be >= 1");
        let modulus = Self::modulus_for(order);
        let mut c = Cyclotomic { order, coeffs: Vec::new(), modulus };
        c.coeffs = c.reduce(poly);
        c
    }

    fn reduce(&self, poly: Vec<Rational>) -> Vec<Rational> {
        let phi = (self.modulus.len() - 1) as usize;
        let mut rem = poly_rem(&poly, &self.modulus_q());
        rem.resize(phi, Rational::zero());
        rem
    }

    fn with_coeffs(&self, poly: Vec<Rational>) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.reduce(poly),
            modulus: Arc::clone(&self.modulus),
        }
    }

    pub fn zero(order: u64) -> Cyclotomic {
        Self::from_poly(order, Vec::new())
    }

    pub fn one(order: u64) -> Cyclotomic {
        Self::from_poly(order, vec![Rational::one()])
    }

    pub fn from_rational(r: Rational) -> Cyclotomic {
        Self::from_poly(1, vec![r])
    }

    /// `zeta_order^k` (k may be negative; exponents live mod order).
    pub fn zeta_pow(order: u64, k: i64) -> Cyclotomic {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(order, poly)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.first().map(|c| c.is_one()).unwrap_or(false)
            && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The exact rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Reinterprets in `Q(zeta_target)` where `order | target`, via
    /// `zeta_order = zeta_target^(target/order)`.
    pub fn embed_to(&self, target: u64) -> Result<Cyclotomic, Error> {
        if target % self.order != 0 {
            return Err(Error::OrderMismatch { left: self.order, right: target });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1).max(0) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[k * step] = c.clone();
            }
        }
        Ok(Cyclotomic::from_poly(target, poly))
    }

    /// Embeds both operands into the lcm of their orders.
    pub fn unify(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = num_integer::lcm(a.order, b.order);
        (
            a.embed_to(l).expect("order divides its lcm"),
            b.embed_to(l).expect("order divides its lcm"),
        )
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Self::unify(self, other);
        let mut poly = a.coeffs.clone();
        for (i, c) in b.coeffs.iter().enumerate() {
            poly[i] += c;
        }
        a.with_coeffs(poly)
    }

    pub fn neg(&self) -> Cyclotomic {
        let poly = self.coeffs.iter().map(|c| -c).collect();
        self.with_coeffs(poly)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let (a, b) = Self::unify(self, other);
        let poly = poly_mul(&a.coeffs, &b.coeffs);
        a.with_coeffs(poly)
    }

    pub fn scale(&self, r: &Rational) -> Cyclotomic {
        let poly = self.coeffs.iter().map(|c| c * r).collect();
        self.with_coeffs(poly)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Phi_order`: since `Phi` is irreducible, any nonzero element is
    /// coprime to it, so `u*self + v*Phi = g` with `g` a nonzero constant
    /// and `u/g` the inverse.
    pub fn inv(&self) -> Result<Cyclotomic, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, u) = poly_ext_gcd_mod(&self.coeffs, &self.modulus_q());
        debug_assert!(g.len() == 1, "cyclotomic polynomial must be irreducible");
        let g0 = g.first().cloned().unwrap_or_else(Rational::zero);
        let poly = u.iter().map(|c| c / &g0).collect();
        Ok(self.with_coeffs(poly))
    }

    /// Complex conjugation: `zeta -> zeta^(order-1) = zeta^(-1)`. Exponent
    /// arithmetic may use `zeta^order = 1` freely; the result is reduced to
    /// canonical form afterwards.
    pub fn conj(&self) -> Cyclotomic {
        let l = self.order as usize;
        let mut poly = vec![Rational::zero(); l.max(1)];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[(l - k) % l.max(1)] += c;
            }
        }
        self.with_coeffs(poly)
    }

    pub fn pow(&self, e: i64) -> Result<Cyclotomic, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Cyclotomic::one(self.order);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact embedding into the complex numbers:
    /// `zeta^k -> (cos(2 pi k/L), sin(2 pi k/L))`, summed with the
    /// coefficients (balanced summation keeps the precision rescaling
    /// logarithmic in the basis size).
    pub fn to_complex(&self) -> ExactComplex {
        let l = self.order as i64;
        let mut parts: Vec<ExactComplex> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let q = Rational::new(BigInt::from(k as i64), BigInt::from(l));
            let re = RegularReal::cos_two_pi(&q).scale(c);
            let im = RegularReal::sin_two_pi(&q).scale(c);
            parts.push(ExactComplex::new(re, im));
        }
        ExactComplex::balanced_sum(parts)
    }

    /// `sum_k c_k * conj(c_k)`-free notion of "norm": here just
    /// `self * conj(self)`, which is real (fixed by conjugation).
    pub fn abs_sq(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Cyclotomic::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    /// Canonical text form `order;c0,c1,...` with `phi(order)` coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { ';' } else { ',' }, c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `exp(2 pi i q)` as a unit phase: the exponent reduced to `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct UnitPhase {
    exponent: Rational,
}

impl UnitPhase {
    pub fn new(exponent: &Rational) -> UnitPhase {
        UnitPhase { exponent: mod_one(exponent) }
    }

    pub fn one() -> UnitPhase {
        Self::new(&Rational::zero())
    }

    pub fn exponent(&self) -> &Rational {
        &self.exponent
    }

    pub fn mul(&self, other: &UnitPhase) -> UnitPhase {
        Self::new(&(&self.exponent + &other.exponent))
    }

    pub fn inv(&self) -> UnitPhase {
        Self::new(&(-&self.exponent))
    }

    pub fn pow(&self, e: i64) -> UnitPhase {
        Self::new(&(&self.exponent * rat_int(e)))
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }

    /// The same value as an exact cyclotomic: `p/q` in lowest terms maps to
    /// `zeta_q^p` in `Q(zeta_q)`.
    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let q: u64 = self
            .exponent
            .denom()
            .try_into()
            .expect("phase denominators stay small");
        let p: i64 = self.exponent.numer().try_into().expect("reduced exponent fits");
        Cyclotomic::zeta_pow(q, p)
    }
}

impl fmt::Display for UnitPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exponent)
    }
}

/// `exp(2 pi i q)` as an exact cyclotomic.
pub fn exp_two_pi_i(q: &Rational) -> Cyclotomic {
    UnitPhase::new(q).to_cyclotomic()
}
