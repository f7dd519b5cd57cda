//! Monodromy of rank-one twisted cohomology: the colored Gassner/Burau
//! representation computed by Fox calculus, plus its reduction and the
//! abelian-scalar factor.
//!
//! # Conventions (fixed once, everywhere)
//!
//! Words act left-to-right and matrices compose in the same order: for
//! pure words (or all-equal parameters) `magnus(uv) = magnus(u) * magnus(v)`.
//! Concretely, a braid word `w` induces an automorphism `phi_w` of the free
//! group on `x_1..x_N` (loops around the punctures) with
//!
//! ```text
//! sigma_i:  x_i |-> x_i x_{i+1} x_i^{-1},   x_{i+1} |-> x_i
//! ```
//!
//! composed so that `phi_{uv} = phi_v . phi_u`, and the matrix is the
//! Fox-derivative Jacobian of the *composite* automorphism,
//!
//! ```text
//! magnus(w)[i][j] = eval( d phi_w(x_i) / d x_j ),   eval: x_I |-> t_I.
//! ```
//!
//! For a single positive letter this gives the block `(1-t_{i+1}, t_i; 1, 0)`
//! in rows/columns `i, i+1`. For non-pure words with unequal parameters the
//! letter matrices only compose groupoid-style (the left factor is taken at
//! suffix-permuted colors); the tests carry that per-letter product as an
//! independent oracle.
//!
//! The column `v = (t_1 - 1, ..., t_N - 1)^T` is fixed by every pure-word
//! matrix — that is exactly the fundamental identity of Fox calculus
//! `sum_j (dw/dx_j)(x_j - 1) = w - 1` read at `w = phi(x_i)` — so the
//! quotient by `v` carries the reduced representation (`ReducedFiber`).

use crate::braid::{pure_relators, relators, BraidWord, PureBraidWord};
use crate::cyclotomic::{Cyclotomic, UnitPhase};
use crate::error::Error;
use crate::freegroup::{fox_derivative, FreeWord, GroupRingElt};
use crate::localsys::{phase_of_word, twist_table, TwistParams};
use crate::matrix::Matrix;
use crate::rational::Rational;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;

/// Automorphism of the free group on `strands` generators, stored by its
/// images of `x_1..x_N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidAutomorphism {
    strands: usize,
    images: Vec<FreeWord>,
}

impl BraidAutomorphism {
    pub fn identity(strands: usize) -> BraidAutomorphism {
        BraidAutomorphism {
            strands,
            images: (1..=strands).map(|k| FreeWord::generator(strands, k)).collect(),
        }
    }

    fn of_letter(strands: usize, letter: i32) -> BraidAutomorphism {
        let i = letter.unsigned_abs() as usize; // acts on x_i, x_{i+1}
        let xi = FreeWord::generator(strands, i);
        let xj = FreeWord::generator(strands, i + 1);
        let mut a = BraidAutomorphism::identity(strands);
        if letter > 0 {
            a.images[i - 1] = xi.mul(&xj).mul(&xi.inverse());
            a.images[i] = xi;
        } else {
            a.images[i - 1] = xj.clone();
            a.images[i] = xj.inverse().mul(&xi).mul(&xj);
        }
        a
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Image of `x_i` (1-based).
    pub fn image(&self, i: usize) -> &FreeWord {
        &self.images[i - 1]
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    /// `next . self` — first this automorphism, then `next`.
    pub fn then(&self, next: &BraidAutomorphism) -> BraidAutomorphism {
        BraidAutomorphism {
            strands: self.strands,
            images: self.images.iter().map(|w| w.substitute(&next.images)).collect(),
        }
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [(k + 1) as i32])
    }
}

/// The topological action of a braid word on the fiber's fundamental group.
pub fn braid_to_automorphism(w: &BraidWord) -> BraidAutomorphism {
    let mut a = BraidAutomorphism::identity(w.strands());
    for &l in w.letters() {
        a = a.then(&BraidAutomorphism::of_letter(w.strands(), l));
    }
    a
}

pub fn pure_to_automorphism(w: &PureBraidWord) -> BraidAutomorphism {
    braid_to_automorphism(&w.embed())
}

/// Rank-one local system: a root-of-unity parameter `t_I` for each puncture,
/// all embedded in the single field `Q(zeta_order)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalRank1System {
    phases: Vec<UnitPhase>,
    order: u64,
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

fn phase_denominator(p: &UnitPhase) -> u64 {
    use num_traits::ToPrimitive;
    p.exponent().denom().to_u64().expect("phase denominator fits u64")
}

impl LocalRank1System {
    pub fn new(phases: Vec<UnitPhase>) -> LocalRank1System {
        let order = phases.iter().map(phase_denominator).fold(1, lcm_u64);
        LocalRank1System { phases, order }
    }

    /// All punctures share one parameter (the Burau case).
    pub fn constant(strands: usize, t: &UnitPhase) -> LocalRank1System {
        Self::new(alloc::vec![t.clone(); strands])
    }

    /// `t_I = exp(2 pi i w_I / level)`.
    pub fn from_weights(level: u64, weights: &[u64]) -> LocalRank1System {
        Self::new(
            weights
                .iter()
                .map(|&w| UnitPhase::new(&Rational::new(BigInt::from(w), BigInt::from(level))))
                .collect(),
        )
    }

    pub fn from_params(p: &TwistParams) -> LocalRank1System {
        Self::from_weights(p.level(), p.weights())
    }

    pub fn strands(&self) -> usize {
        self.phases.len()
    }

    /// Common cyclotomic order of all the parameters.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Parameter of puncture `i` (1-based), as a phase.
    pub fn phase(&self, i: usize) -> &UnitPhase {
        &self.phases[i - 1]
    }

    pub fn phases(&self) -> &[UnitPhase] {
        &self.phases
    }

    /// Parameter of puncture `i` (1-based), as an element of `Q(zeta_order)`.
    pub fn color(&self, i: usize) -> Cyclotomic {
        self.phase_to_field(&self.phases[i - 1])
    }

    /// The total monodromy `prod t_I` (the weight at infinity is determined
    /// by this; we expose it and leave any constraint to callers).
    pub fn product_phase(&self) -> UnitPhase {
        self.phases.iter().fold(UnitPhase::one(), |acc, p| acc.mul(p))
    }

    pub fn all_trivial(&self) -> bool {
        self.phases.iter().all(|p| p.is_one())
    }

    fn phase_to_field(&self, p: &UnitPhase) -> Cyclotomic {
        // exponent = k/order with the denominator dividing `order`
        let scaled = p.exponent() * Rational::from(BigInt::from(self.order));
        debug_assert!(scaled.is_integer());
        use num_traits::ToPrimitive;
        let k = scaled.to_integer().to_i64().expect("phase numerator fits i64");
        Cyclotomic::zeta_pow(self.order, k)
    }

    /// Evaluates a free word under `x_I |-> t_I` (only exponent sums matter).
    pub fn eval_word(&self, letters: &[i32]) -> Cyclotomic {
        let mut exp = alloc::vec![0i64; self.strands()];
        for &l in letters {
            exp[l.unsigned_abs() as usize - 1] += if l > 0 { 1 } else { -1 };
        }
        let mut total = UnitPhase::one();
        for (k, e) in exp.iter().enumerate() {
            if *e != 0 {
                total = total.mul(&self.phases[k].pow(*e));
            }
        }
        self.phase_to_field(&total)
    }

    /// Evaluates a group-ring element under `x_I |-> t_I`.
    pub fn eval(&self, e: &GroupRingElt) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(self.order);
        for (letters, coeff) in e.terms() {
            acc = acc.add(&self.eval_word(letters).scale(coeff));
        }
        acc
    }
}

/// Fox-derivative matrix of the composite automorphism of `w`, evaluated in
/// the local system: the colored Gassner (unreduced Burau) matrix.
pub fn magnus_matrix(w: &BraidWord, sys: &LocalRank1System) -> Result<Matrix<Cyclotomic>, Error> {
    if w.strands() != sys.strands() {
        return Err(Error::StrandMismatch { left: w.strands(), right: sys.strands() });
    }
    let phi = braid_to_automorphism(w);
    let n = sys.strands();
    let mut data = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            data.push(sys.eval(&fox_derivative(phi.image(i), j)));
        }
    }
    Matrix::new(n, n, data)
}

pub fn magnus_matrix_pure(
    w: &PureBraidWord,
    sys: &LocalRank1System,
) -> Result<Matrix<Cyclotomic>, Error> {
    magnus_matrix(&w.embed(), sys)
}

/// Basis and projection data for the twisted degree-1 cohomology on which
/// the Magnus matrices act.
///
/// The twisted complex of the wedge-of-loops model has one boundary map,
/// the column `v = (t_I - 1)`; cohomology is the cokernel. When some
/// `t_I != 1` the change-of-basis matrix is `[e_1-e_2 | ... | e_{N-1}-e_N | v]`
/// (difference columns in index order, the fixed vector last) and the
/// reduced matrix is the upper-left block in that basis; when all `t_I = 1`
/// no reduction happens and the dimension stays `N`.
#[derive(Clone, Debug)]
pub struct ReducedFiber {
    system: LocalRank1System,
    dim: usize,
    change: Matrix<Cyclotomic>,
    change_inv: Matrix<Cyclotomic>,
}

pub fn reduced_fiber(sys: &LocalRank1System) -> ReducedFiber {
    let n = sys.strands();
    let order = sys.order();
    if sys.all_trivial() {
        // rank-0 boundary: full untwisted cohomology
        return ReducedFiber {
            system: sys.clone(),
            dim: n,
            change: Matrix::identity(n),
            change_inv: Matrix::identity(n),
        };
    }
    let mut change = Matrix::zero(n, n);
    for j in 0..n.saturating_sub(1) {
        change.set(j, j, Cyclotomic::one(order));
        change.set(j + 1, j, Cyclotomic::one(order).neg());
    }
    for i in 0..n {
        change.set(i, n - 1, sys.color(i + 1).sub(&Cyclotomic::one(order)));
    }
    // Invertible whenever some t_I != 1: the difference columns span the
    // zero-coordinate-sum hyperplane, and sum_I (t_I - 1) = 0 would force
    // every t_I = 1 (unit complex numbers averaging to 1).
    let change_inv = change.inverse().expect("difference basis plus fixed vector");
    ReducedFiber { system: sys.clone(), dim: n - 1, change, change_inv }
}

impl ReducedFiber {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient(&self) -> usize {
        self.system.strands()
    }

    pub fn system(&self) -> &LocalRank1System {
        &self.system
    }

    /// Columns: the reduced basis followed by the fixed vector (when twisted).
    pub fn change_of_basis(&self) -> &Matrix<Cyclotomic> {
        &self.change
    }

    pub fn projection(&self) -> &Matrix<Cyclotomic> {
        &self.change_inv
    }

    /// Conjugates into the fiber basis, checks that the fixed line really is
    /// fixed, and returns the action on the quotient.
    pub fn reduce(&self, m: &Matrix<Cyclotomic>) -> Result<Matrix<Cyclotomic>, Error> {
        let n = self.ambient();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { left: (m.rows(), m.cols()), right: (n, n) });
        }
        if self.dim == n {
            return Ok(m.clone());
        }
        let conj = self.change_inv.mul(&m.mul(&self.change)?)?;
        for i in 0..n {
            let e = conj.get(i, n - 1);
            let ok = if i == n - 1 { e.is_one() } else { e.is_zero() };
            if !ok {
                return Err(Error::RelationFailure(String::from(
                    "matrix does not preserve the twisted fiber",
                )));
            }
        }
        let mut data = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                data.push(conj.get(i, j).clone());
            }
        }
        Matrix::new(self.dim, self.dim, data)
    }
}

/// Monodromy at one probe: the defect–defect scalar phase times the reduced
/// Gassner matrix at `t_I = exp(2 pi i w_I / level)`. A homomorphism on the
/// pure braid group of the `N` defect strands.
pub fn kz_monodromy(p: &TwistParams, w: &PureBraidWord) -> Result<Matrix<Cyclotomic>, Error> {
    if p.probes() != 1 {
        // multi-probe blocks need the hypergeometric construction; only the
        // one-probe fiber is implemented
        return Err(Error::ProbeCountUnsupported { probes: p.probes() });
    }
    let n = p.defects();
    if w.strands() != n {
        return Err(Error::StrandMismatch { left: w.strands(), right: n });
    }
    let sys = LocalRank1System::from_params(p);
    let fiber = reduced_fiber(&sys);
    let reduced = fiber.reduce(&magnus_matrix_pure(w, &sys)?)?;
    let scalar = phase_of_word(&twist_table(p).restrict(n), w)?;
    Ok(reduced.scale(&scalar.to_cyclotomic()))
}

/// Which generating set a representation is indexed by.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RepKind {
    /// Artin letters `sigma_i` (needs all-equal parameters to be a rep).
    Artin,
    /// Pure-braid generators `b_{a,b}`.
    Pure,
}

/// Key for one generator image.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum GenKey {
    Artin(usize),
    Pure(usize, usize),
}

impl fmt::Display for GenKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenKey::Artin(i) => write!(f, "s{i}"),
            GenKey::Pure(a, b) => write!(f, "b{a}_{b}"),
        }
    }
}

/// A map from braid generators to invertible exact matrices, with the
/// relator certificate it has earned.
#[derive(Clone, Debug)]
pub struct MonodromyRep {
    kind: RepKind,
    strands: usize,
    system: LocalRank1System,
    dim: usize,
    images: BTreeMap<GenKey, Matrix<Cyclotomic>>,
    inverses: BTreeMap<GenKey, Matrix<Cyclotomic>>,
    certificate: Option<RelationCertificate>,
}

impl MonodromyRep {
    /// Any generator assignment; inverses are computed eagerly, so every
    /// image must be invertible.
    pub fn from_images(
        kind: RepKind,
        strands: usize,
        system: LocalRank1System,
        images: BTreeMap<GenKey, Matrix<Cyclotomic>>,
    ) -> Result<MonodromyRep, Error> {
        let mut dim = None;
        for (key, m) in &images {
            match kind {
                RepKind::Artin => {
                    if !matches!(key, GenKey::Artin(i) if (1..strands).contains(i)) {
                        return Err(Error::UnknownLabel(key.to_string()));
                    }
                }
                RepKind::Pure => {
                    if !matches!(key, GenKey::Pure(a, b) if *a >= 1 && a < b && *b <= strands) {
                        return Err(Error::UnknownLabel(key.to_string()));
                    }
                }
            }
            if m.rows() != m.cols() || *dim.get_or_insert(m.rows()) != m.rows() {
                return Err(Error::DimensionMismatch {
                    left: (m.rows(), m.cols()),
                    right: (dim.unwrap_or(m.rows()), dim.unwrap_or(m.rows())),
                });
            }
        }
        let mut inverses = BTreeMap::new();
        for (key, m) in &images {
            inverses.insert(*key, m.inverse()?);
        }
        Ok(MonodromyRep {
            kind,
            strands,
            system,
            dim: dim.unwrap_or(0),
            images,
            inverses,
            certificate: None,
        })
    }

    /// The unreduced colored Gassner representation on the pure generators.
    pub fn gassner(sys: &LocalRank1System) -> Result<MonodromyRep, Error> {
        let n = sys.strands();
        let mut images = BTreeMap::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let g = PureBraidWord::generator(n, a, b, true)?;
                images.insert(GenKey::Pure(a, b), magnus_matrix_pure(&g, sys)?);
            }
        }
        let mut rep = Self::from_images(RepKind::Pure, n, sys.clone(), images)?;
        if rep.images.is_empty() {
            rep.dim = n; // a generatorless base still acts on the full fiber
        }
        Ok(rep)
    }

    /// The unreduced Burau representation (one parameter) on Artin letters.
    pub fn burau(strands: usize, t: &UnitPhase) -> Result<MonodromyRep, Error> {
        let sys = LocalRank1System::constant(strands, t);
        let mut images = BTreeMap::new();
        for i in 1..strands {
            let w = BraidWord::new(strands, alloc::vec![i as i32])?;
            images.insert(GenKey::Artin(i), magnus_matrix(&w, &sys)?);
        }
        Self::from_images(RepKind::Artin, strands, sys, images)
    }

    /// The one-probe monodromy on the reduced fiber (scalar twist included).
    pub fn kz(p: &TwistParams) -> Result<MonodromyRep, Error> {
        let n = p.defects();
        let mut images = BTreeMap::new();
        for a in 1..=n {
            for b in a + 1..=n {
                let g = PureBraidWord::generator(n, a, b, true)?;
                images.insert(GenKey::Pure(a, b), kz_monodromy(p, &g)?);
            }
        }
        let sys = LocalRank1System::from_params(p);
        let fiber_dim = reduced_fiber(&sys).dim();
        let mut rep = Self::from_images(RepKind::Pure, n, sys, images)?;
        if rep.images.is_empty() {
            rep.dim = fiber_dim; // one strand: no generators, but the fiber persists
        }
        Ok(rep)
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn system(&self) -> &LocalRank1System {
        &self.system
    }

    /// Size of the image matrices.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> impl Iterator<Item = (&GenKey, &Matrix<Cyclotomic>)> {
        self.images.iter()
    }

    pub fn image(&self, key: &GenKey) -> Option<&Matrix<Cyclotomic>> {
        self.images.get(key)
    }

    pub fn certificate(&self) -> Option<&RelationCertificate> {
        self.certificate.as_ref()
    }

    /// Swaps in a different image for one generator (and drops any earned
    /// certificate) — the hook for negative-control tests and file loading.
    pub fn replace_image(&mut self, key: GenKey, m: Matrix<Cyclotomic>) -> Result<(), Error> {
        if !self.images.contains_key(&key) {
            return Err(Error::UnknownLabel(key.to_string()));
        }
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                left: (m.rows(), m.cols()),
                right: (self.dim, self.dim),
            });
        }
        self.inverses.insert(key, m.inverse()?);
        self.images.insert(key, m);
        self.certificate = None;
        Ok(())
    }

    fn image_signed(&self, key: GenKey, positive: bool) -> Result<&Matrix<Cyclotomic>, Error> {
        let table = if positive { &self.images } else { &self.inverses };
        table.get(&key).ok_or_else(|| Error::UnknownLabel(key.to_string()))
    }

    /// Evaluates a word in Artin letters (Artin-keyed representations only).
    pub fn image_of_braid(&self, w: &BraidWord) -> Result<Matrix<Cyclotomic>, Error> {
        if self.kind != RepKind::Artin {
            return Err(Error::BadParams(String::from(
                "representation is indexed by pure generators, not Artin letters",
            )));
        }
        if w.strands() != self.strands {
            return Err(Error::StrandMismatch { left: w.strands(), right: self.strands });
        }
        let mut acc = Matrix::identity(self.dim);
        for &l in w.letters() {
            acc = acc.mul(self.image_signed(GenKey::Artin(l.unsigned_abs() as usize), l > 0)?)?;
        }
        Ok(acc)
    }

    /// Evaluates a pure-braid word (pure-keyed representations only).
    pub fn image_of_pure(&self, w: &PureBraidWord) -> Result<Matrix<Cyclotomic>, Error> {
        if self.kind != RepKind::Pure {
            return Err(Error::BadParams(String::from(
                "representation is indexed by Artin letters, not pure generators",
            )));
        }
        if w.strands() != self.strands {
            return Err(Error::StrandMismatch { left: w.strands(), right: self.strands });
        }
        let mut acc = Matrix::identity(self.dim);
        for l in w.letters() {
            acc = acc.mul(self.image_signed(GenKey::Pure(l.a, l.b), l.positive)?)?;
        }
        Ok(acc)
    }

    /// Runs `verify_relations` and remembers the outcome on success.
    pub fn certify(&mut self) -> Result<&RelationCertificate, Error> {
        let cert = verify_relations(self)?;
        self.certificate = Some(cert);
        Ok(self.certificate.as_ref().unwrap())
    }
}

/// Outcome of checking one defining relator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelatorCheck {
    pub index: usize,
    pub relator: String,
    pub ok: bool,
}

/// Per-relator record of a full verification pass.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelationCertificate {
    kind: RepKind,
    strands: usize,
    checks: Vec<RelatorCheck>,
}

impl RelationCertificate {
    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn checks(&self) -> &[RelatorCheck] {
        &self.checks
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelatorCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    /// `Ok` only when every relator passed; otherwise the error names the
    /// first failing relator.
    pub fn require(&self) -> Result<(), Error> {
        match self.failures().next() {
            None => Ok(()),
            Some(c) => Err(Error::RelationFailure(format!(
                "relator {} ({}) does not map to the identity",
                c.index, c.relator
            ))),
        }
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{}/{} relators verified on {} strands{}",
            self.checks.len() - failed,
            self.checks.len(),
            self.strands,
            if failed == 0 { String::new() } else { format!(", {failed} FAILED") }
        )
    }
}

/// Evaluates every defining relator of the appropriate presentation through
/// the representation and records exact identity checks, one per relator.
pub fn verify_relations(rep: &MonodromyRep) -> Result<RelationCertificate, Error> {
    let mut checks = Vec::new();
    match rep.kind() {
        RepKind::Artin => {
            for (index, r) in relators(rep.strands()).into_iter().enumerate() {
                let ok = rep.image_of_braid(&r)?.is_identity();
                checks.push(RelatorCheck { index, relator: format!("{r}"), ok });
            }
        }
        RepKind::Pure => {
            for (index, r) in pure_relators(rep.strands()).into_iter().enumerate() {
                let ok = rep.image_of_pure(&r)?.is_identity();
                checks.push(RelatorCheck { index, relator: format!("{r}"), ok });
            }
        }
    }
    Ok(RelationCertificate { kind: rep.kind(), strands: rep.strands(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn phase(p: i64, q: i64) -> UnitPhase {
        UnitPhase::new(&rat(p, q))
    }

    fn word(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    fn random_pure(rng: &mut ChaCha8Rng, strands: usize, len: usize) -> PureBraidWord {
        let mut w = PureBraidWord::identity(strands);
        for _ in 0..len {
            let a = rng.gen_range(1..strands);
            let b = rng.gen_range(a + 1..=strands);
            let g = PureBraidWord::generator(strands, a, b, rng.gen_bool(0.5)).unwrap();
            w = w.concat(&g).unwrap();
        }
        w
    }

    #[test]
    fn generator_automorphism() {
        let a = braid_to_automorphism(&word(2, &[1]));
        assert_eq!(a.image(1).letters(), [1, 2, -1]);
        assert_eq!(a.image(2).letters(), [1]);
        assert!(braid_to_automorphism(&word(2, &[1, -1])).is_identity());
        // b_12 = sigma_1^2 conjugates x_1 by x_1 x_2
        let b = braid_to_automorphism(&word(2, &[1, 1]));
        assert_eq!(b.image(1).letters(), [1, 2, 1, -2, -1]);
    }

    #[test]
    fn boundary_word_is_preserved_up_to_conjugacy() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for trial in 0..300 {
            let strands = rng.gen_range(2..=5usize);
            let letters: Vec<i32> = (0..rng.gen_range(1..=8))
                .map(|_| {
                    let i = rng.gen_range(1..strands) as i32;
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect();
            let a = braid_to_automorphism(&word(strands, &letters));
            let boundary = (1..=strands)
                .fold(FreeWord::identity(strands), |acc, k| {
                    acc.mul(&FreeWord::generator(strands, k))
                });
            let image = a.apply(&boundary);
            // cyclic reduction of a conjugate is a rotation of the original
            let mut l = image.letters().to_vec();
            while l.len() >= 2 && l[0] == -l[l.len() - 1] {
                l = l[1..l.len() - 1].to_vec();
            }
            assert_eq!(l.len(), strands, "trial {trial}");
            let rotated = (0..strands).any(|s| {
                (0..strands).all(|k| l[k] == ((s + k) % strands + 1) as i32)
            });
            assert!(rotated, "trial {trial}: got {l:?}");
        }
    }

    #[test]
    fn burau_generator_matrix() {
        let t = phase(1, 5);
        let sys = LocalRank1System::constant(2, &t);
        let m = magnus_matrix(&word(2, &[1]), &sys).unwrap();
        let tc = t.to_cyclotomic();
        assert_eq!(m.get(0, 0), &Cyclotomic::one(5).sub(&tc));
        assert_eq!(m.get(0, 1), &tc);
        assert!(m.get(1, 0).is_one());
        assert!(m.get(1, 1).is_zero());
        let id = magnus_matrix(&word(2, &[]), &sys).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn functorial_on_pure_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let strands = rng.gen_range(2..=5usize);
            let sys = LocalRank1System::new(
                (0..strands).map(|_| phase(rng.gen_range(0..6), rng.gen_range(1..=6))).collect(),
            );
            let ulen = rng.gen_range(1..=3);
            let u = random_pure(&mut rng, strands, ulen);
            let vlen = rng.gen_range(1..=3);
            let v = random_pure(&mut rng, strands, vlen);
            let uv = u.concat(&v).unwrap();
            let left = magnus_matrix_pure(&uv, &sys).unwrap();
            let right = magnus_matrix_pure(&u, &sys)
                .unwrap()
                .mul(&magnus_matrix_pure(&v, &sys).unwrap())
                .unwrap();
            assert_eq!(left, right);
        }
    }

    /// Independent oracle: per-letter generator blocks, folded right to left
    /// with the left factor taken at suffix-permuted colors.
    fn letter_product_oracle(w: &BraidWord, sys: &LocalRank1System) -> Matrix<Cyclotomic> {
        use crate::braid::Permutation;
        let n = w.strands();
        let order = sys.order();
        let block = |colors: &[Cyclotomic], l: i32| -> Matrix<Cyclotomic> {
            let i = l.unsigned_abs() as usize - 1;
            let (ci, cj) = (colors[i].clone(), colors[i + 1].clone());
            let mut m = Matrix::<Cyclotomic>::identity(n);
            if l > 0 {
                m.set(i, i, Cyclotomic::one(order).sub(&cj));
                m.set(i, i + 1, ci);
                m.set(i + 1, i, Cyclotomic::one(order));
                m.set(i + 1, i + 1, Cyclotomic::zero(order));
            } else {
                m.set(i, i, Cyclotomic::zero(order));
                m.set(i, i + 1, Cyclotomic::one(order));
                let inv = cj.inv().unwrap();
                m.set(i + 1, i, inv.clone());
                m.set(i + 1, i + 1, inv.mul(&ci.sub(&Cyclotomic::one(order))));
            }
            m
        };
        let mut acc = Matrix::<Cyclotomic>::identity(n);
        let mut suffix = Permutation::identity(n);
        for &l in w.letters().iter().rev() {
            let colors: Vec<Cyclotomic> =
                (1..=n).map(|k| sys.color(suffix.apply(k))).collect();
            acc = block(&colors, l).mul(&acc).unwrap();
            suffix =
                Permutation::adjacent_transposition(n, l.unsigned_abs() as usize).compose(&suffix);
        }
        acc
    }

    #[test]
    fn per_letter_oracle_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        // all-equal parameters: classical unreduced Burau, arbitrary words
        for _ in 0..100 {
            let strands = rng.gen_range(2..=4usize);
            let sys = LocalRank1System::constant(
                strands,
                &phase(rng.gen_range(0..8), rng.gen_range(1..=8)),
            );
            let letters: Vec<i32> = (0..rng.gen_range(1..=6))
                .map(|_| {
                    let i = rng.gen_range(1..strands) as i32;
                    if rng.gen_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect();
            let w = word(strands, &letters);
            assert_eq!(magnus_matrix(&w, &sys).unwrap(), letter_product_oracle(&w, &sys));
        }
        // distinct colors on pure words
        for _ in 0..50 {
            let strands = rng.gen_range(2..=4usize);
            let sys = LocalRank1System::new(
                (0..strands).map(|_| phase(rng.gen_range(0..5), rng.gen_range(1..=5))).collect(),
            );
            let wlen = rng.gen_range(1..=3);
            let w = random_pure(&mut rng, strands, wlen).embed();
            assert_eq!(magnus_matrix(&w, &sys).unwrap(), letter_product_oracle(&w, &sys));
        }
    }

    #[test]
    fn fiber_dimensions() {
        // generic: some t != 1 drops the dimension by one
        let sys = LocalRank1System::new(vec![phase(1, 3), phase(1, 5), phase(1, 7)]);
        assert_eq!(reduced_fiber(&sys).dim(), 2);
        // untwisted: full cohomology of the thrice-punctured plane
        let sys = LocalRank1System::new(vec![phase(0, 1); 3]);
        assert_eq!(reduced_fiber(&sys).dim(), 3);
        // one puncture
        assert_eq!(reduced_fiber(&LocalRank1System::new(vec![phase(1, 2)])).dim(), 0);
        assert_eq!(reduced_fiber(&LocalRank1System::new(vec![phase(0, 1)])).dim(), 1);
        // product one but factors nontrivial: the boundary map still has
        // rank 1, so the dimension drops (the rank criterion, not prod t)
        let sys = LocalRank1System::new(vec![phase(1, 4), phase(3, 4)]);
        assert!(sys.product_phase().is_one());
        assert_eq!(reduced_fiber(&sys).dim(), 1);
    }

    #[test]
    fn reduction_on_two_strands() {
        // N=2: reduced Gassner of b_12 is the 1x1 scalar t1 t2
        let sys = LocalRank1System::new(vec![phase(1, 7), phase(1, 5)]);
        let fiber = reduced_fiber(&sys);
        assert_eq!(fiber.dim(), 1);
        let m = magnus_matrix(&word(2, &[1, 1]), &sys).unwrap();
        let red = fiber.reduce(&m).unwrap();
        assert_eq!(red.get(0, 0), &sys.color(1).mul(&sys.color(2)));
    }

    #[test]
    fn generator_images_preserve_the_fiber() {
        let sys =
            LocalRank1System::new(vec![phase(1, 4), phase(1, 3), phase(2, 3), phase(1, 2)]);
        let fiber = reduced_fiber(&sys);
        for a in 1..=4 {
            for b in a + 1..=4 {
                let g = PureBraidWord::generator(4, a, b, true).unwrap();
                let m = magnus_matrix_pure(&g, &sys).unwrap();
                fiber.reduce(&m).unwrap();
            }
        }
        // a matrix that moves the fixed vector is rejected
        let mut bad = Matrix::<Cyclotomic>::identity(4);
        bad.set(0, 0, Cyclotomic::from_rational(rat(2, 1)));
        assert!(matches!(fiber.reduce(&bad), Err(Error::RelationFailure(_))));
    }

    #[test]
    fn kz_level_four_example() {
        // N=2, level 4, weights (1,1): b_12 |-> e^{2 pi i/8} * (t1 t2) with
        // t = (i, i), i.e. zeta_8 * zeta_4^2 = zeta_8^5
        let p = TwistParams::new(2, 1, 4, vec![1, 1]).unwrap();
        let b12 = PureBraidWord::generator(2, 1, 2, true).unwrap();
        let m = kz_monodromy(&p, &b12).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.get(0, 0), &Cyclotomic::zeta_pow(8, 5));
        // identity word
        let id = kz_monodromy(&p, &PureBraidWord::identity(2)).unwrap();
        assert!(id.is_identity());
        // probe counts other than one are rejected loudly
        let p2 = TwistParams::new(2, 2, 4, vec![1, 1]).unwrap();
        assert_eq!(
            kz_monodromy(&p2, &b12),
            Err(Error::ProbeCountUnsupported { probes: 2 })
        );
    }

    #[test]
    fn kz_kills_relators() {
        for (defects, weights) in [(3usize, vec![1u64, 1, 1]), (4, vec![1, 2, 1, 1])] {
            let p = TwistParams::new(defects, 1, 5, weights).unwrap();
            for r in pure_relators(defects) {
                let m = kz_monodromy(&p, &r).unwrap();
                assert!(m.is_identity(), "relator {r}");
            }
        }
    }

    #[test]
    fn kz_is_a_homomorphism() {
        let p = TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..20 {
            let u = random_pure(&mut rng, 3, 2);
            let v = random_pure(&mut rng, 3, 2);
            let uv = u.concat(&v).unwrap();
            let left = kz_monodromy(&p, &uv).unwrap();
            let right =
                kz_monodromy(&p, &u).unwrap().mul(&kz_monodromy(&p, &v).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn gassner_rep_verifies() {
        for strands in 2..=4usize {
            let sys = LocalRank1System::new(
                (0..strands).map(|k| phase(1 + k as i64, 5)).collect(),
            );
            let mut rep = MonodromyRep::gassner(&sys).unwrap();
            let cert = rep.certify().unwrap();
            assert!(cert.all_ok(), "{}", cert.summary());
        }
    }

    #[test]
    fn burau_rep_verifies_artin_relators() {
        let mut rep = MonodromyRep::burau(4, &phase(1, 6)).unwrap();
        let cert = rep.certify().unwrap();
        assert!(cert.all_ok(), "{}", cert.summary());
        assert!(cert.require().is_ok());
    }

    #[test]
    fn kz_rep_verifies() {
        let p = TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap();
        let rep = MonodromyRep::kz(&p).unwrap();
        assert_eq!(rep.dim(), 2);
        let cert = verify_relations(&rep).unwrap();
        assert!(cert.all_ok(), "{}", cert.summary());
    }

    #[test]
    fn corrupted_generator_is_named() {
        let sys = LocalRank1System::new(vec![phase(1, 5), phase(2, 5), phase(1, 3), phase(1, 4)]);
        let mut rep = MonodromyRep::gassner(&sys).unwrap();
        let decoy = rep.image(&GenKey::Pure(1, 3)).unwrap().clone();
        rep.replace_image(GenKey::Pure(1, 2), decoy).unwrap();
        let cert = verify_relations(&rep).unwrap();
        assert!(!cert.all_ok());
        let failing = cert.failures().next().unwrap();
        assert!(!failing.relator.is_empty());
        assert!(cert.require().is_err());
    }

    #[test]
    fn word_evaluation_matches_colors() {
        let sys = LocalRank1System::new(vec![phase(1, 3), phase(1, 4)]);
        assert_eq!(sys.order(), 12);
        assert_eq!(sys.eval_word(&[1, 2, 1]), Cyclotomic::zeta_pow(12, 4 + 3 + 4));
        assert_eq!(sys.eval_word(&[-1]), Cyclotomic::zeta_pow(12, -4));
        assert!(sys
            .eval(&GroupRingElt::one(2).sub(&GroupRingElt::one(2)))
            .is_zero());
    }
}
