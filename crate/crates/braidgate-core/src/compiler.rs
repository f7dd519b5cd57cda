//! Certified compilation of unitary targets into braid-gate words.
//!
//! A [`GateSet`] is a finite list of labelled invertible matrices over a
//! cyclotomic field, closed under inversion (missing inverses are adjoined
//! with a trailing `'` on the label). The compiler searches words over the
//! gate set that approximate a target matrix in the phase-invariant distance
//!
//! ```text
//!     dist(U, V) = sqrt(1 - |tr(U^* V)| / d)
//! ```
//!
//! and reports a *certified* error: a rational upper bound on the true
//! distance that is provably within the requested tolerance of it. The
//! search itself ranks candidates by the exact score `|tr(U^* V)|^2`, a
//! cyclotomic number compared with exact arithmetic, so the result is
//! deterministic and independent of how the search is scheduled.
//!
//! Search work is split by [`search_level`]: every word of one exact length
//! is owned by the worker equal to its first letter's index modulo the
//! worker count, so any number of workers enumerates the same words exactly
//! once and the merged outcome is identical to a single-threaded run. (The
//! driver here runs the partitions sequentially; the companion crate drives
//! the same function from threads.)

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::braid::PureBraidWord;
use crate::complex::ExactComplex;
use crate::cyclotomic::Cyclotomic;
use crate::error::Error;
use crate::localsys::TwistParams;
use crate::matrix::Matrix;
use crate::monodromy::GenKey;
use crate::rational::{rat, rat_int, Rational};
use crate::real::{sign_of_nonzero, RegularReal};
use crate::transport::CohomologyFamily;

/// How many precision doublings a score comparison may spend before treating
/// two exact scores as tied. Sixty-four doublings from the starting window
/// is far beyond anything a root-of-unity sum can hide inside.
const SCORE_DOUBLINGS: u32 = 64;

/// Numeric targets are scored on a fixed rational grid: the score is the
/// midpoint approximation of |tr| to within half this width. A fixed grid
/// keeps comparisons deterministic across runs and worker counts.
fn grid_eps() -> Rational {
    rat(1, 1 << 20)
}

/// One gate: a label, its matrix, and the index of its inverse gate.
#[derive(Clone, Debug)]
pub struct Gate {
    label: String,
    matrix: Matrix<Cyclotomic>,
    inv: usize,
}

impl Gate {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &Matrix<Cyclotomic> {
        &self.matrix
    }
}

/// A finite, inversion-closed, label-sorted set of invertible gates.
///
/// Construction adjoins any missing inverse under the label `x'` (a prime
/// suffix, which is why user labels may not end in one), then sorts gates by
/// label. Sorting makes index order agree with label order, so the
/// lexicographic tie-breaks used by the search read the same whether you
/// look at indices or at labels.
#[derive(Clone, Debug)]
pub struct GateSet {
    dim: usize,
    gates: Vec<Gate>,
}

impl GateSet {
    pub fn new(named: Vec<(String, Matrix<Cyclotomic>)>) -> Result<GateSet, Error> {
        if named.is_empty() {
            return Err(Error::BadCompileRequest("a gate set needs at least one gate".into()));
        }
        let dim = named[0].1.rows();
        if dim == 0 {
            return Err(Error::BadCompileRequest("gates must have positive dimension".into()));
        }
        for (label, m) in &named {
            if label.is_empty() {
                return Err(Error::BadCompileRequest("gate labels must be nonempty".into()));
            }
            if label.ends_with('\'') {
                return Err(Error::BadCompileRequest(format!(
                    "label {label} ends with a prime, which is reserved for adjoined inverses"
                )));
            }
            if !m.is_square() || m.rows() != dim {
                return Err(Error::DimensionMismatch {
                    left: (dim, dim),
                    right: (m.rows(), m.cols()),
                });
            }
        }
        for i in 1..named.len() {
            if named[..i].iter().any(|(l, _)| *l == named[i].0) {
                return Err(Error::BadCompileRequest(format!(
                    "duplicate gate label {}",
                    named[i].0
                )));
            }
        }

        // Adjoin inverses. A gate whose inverse already appears in the list
        // (itself for involutions) is linked to it; otherwise a primed twin
        // is appended.
        let mut labels: Vec<String> = named.iter().map(|(l, _)| l.clone()).collect();
        let mut mats: Vec<Matrix<Cyclotomic>> = named.into_iter().map(|(_, m)| m).collect();
        let mut inv: Vec<Option<usize>> = vec![None; mats.len()];
        let mut i = 0;
        while i < mats.len() {
            if inv[i].is_none() {
                let m_inv = mats[i].inverse()?;
                if let Some(j) = mats.iter().position(|m| *m == m_inv) {
                    inv[i] = Some(j);
                    inv[j] = Some(i);
                } else {
                    labels.push(format!("{}'", labels[i]));
                    mats.push(m_inv);
                    inv.push(Some(i));
                    inv[i] = Some(mats.len() - 1);
                }
            }
            i += 1;
        }

        // Sort by label and remap the inverse links through the permutation.
        let mut order: Vec<usize> = (0..mats.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut position = vec![0usize; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut gates = Vec::with_capacity(order.len());
        for &old in &order {
            gates.push(Gate {
                label: labels[old].clone(),
                matrix: mats[old].clone(),
                inv: position[inv[old].expect("closure links every gate")],
            });
        }
        Ok(GateSet { dim, gates })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, i: usize) -> &Gate {
        &self.gates[i]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.gates[i].inv
    }

    pub fn index_of(&self, label: &str) -> Result<usize, Error> {
        self.gates
            .iter()
            .position(|g| g.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    /// Product of the gate matrices of `word`, left to right.
    pub fn word_matrix(&self, word: &[usize]) -> Result<Matrix<Cyclotomic>, Error> {
        let mut acc = Matrix::<Cyclotomic>::identity(self.dim);
        for &i in word {
            if i >= self.gates.len() {
                return Err(Error::UnknownLabel(format!("gate index {i}")));
            }
            acc = acc.mul(&self.gates[i].matrix)?;
        }
        Ok(acc)
    }

    /// Indices of the word's inverse: reverse the word and invert each letter.
    pub fn invert_indices(&self, word: &[usize]) -> Vec<usize> {
        word.iter().rev().map(|&i| self.gates[i].inv).collect()
    }

    /// Cancel adjacent inverse pairs until none remain.
    pub fn free_reduce_indices(&self, word: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(word.len());
        for &i in word {
            if out.last().map_or(false, |&p| self.gates[p].inv == i) {
                out.pop();
            } else {
                out.push(i);
            }
        }
        out
    }
}

/// What the compiler aims at: an exact cyclotomic matrix, or a matrix of
/// exact complex numbers (regular-real pairs).
#[derive(Clone, Debug)]
pub enum CompileTarget {
    Exact(Matrix<Cyclotomic>),
    Numeric(Matrix<ExactComplex>),
}

impl CompileTarget {
    pub fn exact(m: Matrix<Cyclotomic>) -> Result<CompileTarget, Error> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::BadCompileRequest("targets must be square and nonempty".into()));
        }
        Ok(CompileTarget::Exact(m))
    }

    pub fn numeric(m: Matrix<ExactComplex>) -> Result<CompileTarget, Error> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::BadCompileRequest("targets must be square and nonempty".into()));
        }
        Ok(CompileTarget::Numeric(m))
    }

    pub fn dim(&self) -> usize {
        match self {
            CompileTarget::Exact(m) => m.rows(),
            CompileTarget::Numeric(m) => m.rows(),
        }
    }

    pub fn to_complex(&self) -> Matrix<ExactComplex> {
        match self {
            CompileTarget::Exact(m) => m.to_complex(),
            CompileTarget::Numeric(m) => m.clone(),
        }
    }
}

/// Search score for a candidate product `V` against the target `U`. Both
/// variants are monotone in |tr(U^* V)|, which the distance is monotone
/// *against*, so maximizing the score minimizes the distance.
#[derive(Clone, Debug)]
enum Score {
    /// `|tr(U^* V)|^2` as an exact cyclotomic number.
    Exact(Cyclotomic),
    /// `|tr(U^* V)|` snapped to the fixed rational grid.
    Grid(Rational),
}

fn score_cmp(a: &Score, b: &Score) -> Ordering {
    match (a, b) {
        (Score::Exact(x), Score::Exact(y)) => {
            if x == y {
                return Ordering::Equal;
            }
            let diff = x.sub(y).to_complex();
            match sign_of_nonzero(diff.re(), SCORE_DOUBLINGS) {
                Some(s) if s > 0 => Ordering::Greater,
                Some(_) => Ordering::Less,
                // Unreachable for genuinely distinct real cyclotomic numbers
                // within the doubling budget; tying keeps the order total.
                None => Ordering::Equal,
            }
        }
        (Score::Grid(x), Score::Grid(y)) => x.cmp(y),
        // A single search never mixes the two kinds.
        _ => Ordering::Equal,
    }
}

/// Conjugated target entries, precomputed once per search.
enum ScoreCtx {
    Exact(Vec<Cyclotomic>),
    Numeric(Vec<ExactComplex>),
}

fn score_ctx(target: &CompileTarget) -> ScoreCtx {
    match target {
        CompileTarget::Exact(m) => {
            ScoreCtx::Exact(m.entries().iter().map(|e| e.conj()).collect())
        }
        CompileTarget::Numeric(m) => {
            ScoreCtx::Numeric(m.entries().iter().map(|e| e.conj()).collect())
        }
    }
}

/// `tr(U^* V) = sum_{ij} conj(U_ij) V_ij`, then the score variant.
fn score_with(ctx: &ScoreCtx, v: &Matrix<Cyclotomic>) -> Result<Score, Error> {
    match ctx {
        ScoreCtx::Exact(conj_u) => {
            let mut tr = Cyclotomic::zero(1);
            for (cu, e) in conj_u.iter().zip(v.entries()) {
                tr = tr.add(&cu.mul(e));
            }
            Ok(Score::Exact(tr.abs_sq()))
        }
        ScoreCtx::Numeric(conj_u) => {
            let parts: Vec<ExactComplex> = conj_u
                .iter()
                .zip(v.entries())
                .map(|(cu, e)| cu.mul(&e.to_complex()))
                .collect();
            let tr = ExactComplex::balanced_sum(parts);
            let snapped = tr.abs().real_approx(&grid_eps())?;
            Ok(Score::Grid(snapped))
        }
    }
}

/// A scored word. Candidates are totally ordered: higher score first, then
/// shorter word, then lexicographically smaller index sequence (equal to
/// label order because gates are label-sorted).
#[derive(Clone, Debug)]
pub struct Candidate {
    score: Score,
    word: Vec<usize>,
}

impl Candidate {
    pub fn word_indices(&self) -> &[usize] {
        &self.word
    }

    /// Strictly better under (score desc, length asc, lex asc).
    pub fn better_than(&self, other: &Candidate) -> bool {
        match score_cmp(&self.score, &other.score) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match self.word.len().cmp(&other.word.len()) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => self.word < other.word,
            },
        }
    }
}

/// Score one explicit word against the target. This is the same scoring the
/// search uses, exposed so an external exhaustive check can rank words with
/// identical tie-breaks.
pub fn score_candidate(
    gates: &GateSet,
    target: &CompileTarget,
    word: Vec<usize>,
) -> Result<Candidate, Error> {
    check_dims(gates, target)?;
    let product = gates.word_matrix(&word)?;
    let ctx = score_ctx(target);
    Ok(Candidate { score: score_with(&ctx, &product)?, word })
}

fn check_dims(gates: &GateSet, target: &CompileTarget) -> Result<(), Error> {
    if gates.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            left: (gates.dim(), gates.dim()),
            right: (target.dim(), target.dim()),
        });
    }
    Ok(())
}

/// Search every freely reduced word of length exactly `level` whose first
/// letter index is `worker` modulo `workers` (the empty word belongs to
/// worker 0). Returns the best candidate of the slice and the number of
/// words scored. Distinct `(worker, workers)` slices partition the level, so
/// merging the per-slice winners with [`Candidate::better_than`] gives a
/// result independent of the worker count.
pub fn search_level(
    gates: &GateSet,
    target: &CompileTarget,
    level: usize,
    worker: usize,
    workers: usize,
) -> Result<(Option<Candidate>, u64), Error> {
    if workers == 0 || worker >= workers {
        return Err(Error::BadCompileRequest(format!(
            "worker {worker} of {workers} is not a valid slice"
        )));
    }
    check_dims(gates, target)?;
    let ctx = score_ctx(target);
    let mut best: Option<Candidate> = None;
    let mut nodes: u64 = 0;
    if level == 0 {
        if worker == 0 {
            let cand = Candidate {
                score: score_with(&ctx, &Matrix::identity(gates.dim()))?,
                word: Vec::new(),
            };
            nodes = 1;
            best = Some(cand);
        }
        return Ok((best, nodes));
    }
    let mut word = Vec::with_capacity(level);
    for first in (0..gates.len()).filter(|i| i % workers == worker) {
        word.push(first);
        let product = gates.gate(first).matrix().clone();
        descend(gates, &ctx, &product, &mut word, level - 1, &mut best, &mut nodes)?;
        word.pop();
    }
    Ok((best, nodes))
}

fn descend(
    gates: &GateSet,
    ctx: &ScoreCtx,
    product: &Matrix<Cyclotomic>,
    word: &mut Vec<usize>,
    remaining: usize,
    best: &mut Option<Candidate>,
    nodes: &mut u64,
) -> Result<(), Error> {
    if remaining == 0 {
        *nodes += 1;
        let cand = Candidate { score: score_with(ctx, product)?, word: word.clone() };
        if best.as_ref().map_or(true, |b| cand.better_than(b)) {
            *best = Some(cand);
        }
        return Ok(());
    }
    let prev = *word.last().expect("descend is entered with a first letter");
    for next in 0..gates.len() {
        // Free-reduction pruning: a word containing a cancelling pair has a
        // freely reduced twin at a lower level with the same matrix, so
        // skipping it loses nothing.
        if gates.inverse_index(prev) == next {
            continue;
        }
        word.push(next);
        let extended = product.mul(gates.gate(next).matrix())?;
        descend(gates, ctx, &extended, word, remaining - 1, best, nodes)?;
        word.pop();
    }
    Ok(())
}

/// Outcome of a compilation: the chosen word (gate labels, left to right),
/// a certified upper bound on its distance to the target, and search stats.
#[derive(Clone, Debug)]
pub struct CompileResult {
    pub word: Vec<String>,
    pub certified_error: Rational,
    pub nodes: u64,
    pub depth: usize,
}

/// Exhaustive search over freely reduced words of length at most `max_len`,
/// level-synchronized: after each level the incumbent is certified and the
/// search stops early once the certified error is within `eps`.
pub fn brute_force_compile(
    gates: &GateSet,
    target: &CompileTarget,
    max_len: usize,
    eps: &Rational,
) -> Result<CompileResult, Error> {
    compile_with_workers(gates, target, max_len, eps, 1)
}

/// [`brute_force_compile`] with the level split into `workers` slices that
/// are searched independently and merged. The answer is identical for every
/// worker count; only the scheduling differs.
pub fn compile_with_workers(
    gates: &GateSet,
    target: &CompileTarget,
    max_len: usize,
    eps: &Rational,
    workers: usize,
) -> Result<CompileResult, Error> {
    check_eps(eps)?;
    check_dims(gates, target)?;
    if workers == 0 {
        return Err(Error::BadCompileRequest("need at least one worker".into()));
    }
    let mut best: Option<Candidate> = None;
    let mut nodes: u64 = 0;
    let mut certified: Option<Rational> = None;
    let mut depth = 0;
    for level in 0..=max_len {
        for worker in 0..workers {
            let (cand, n) = search_level(gates, target, level, worker, workers)?;
            nodes += n;
            if let Some(c) = cand {
                if best.as_ref().map_or(true, |b| c.better_than(b)) {
                    best = Some(c);
                }
            }
        }
        depth = level;
        let incumbent = best.as_ref().expect("level zero always scores the empty word");
        let bound = certify_indices(gates, incumbent.word_indices(), target, eps)?;
        let done = bound <= *eps;
        certified = Some(bound);
        if done {
            break;
        }
    }
    let incumbent = best.expect("the level loop runs at least once");
    let word = incumbent.word.iter().map(|&i| gates.gate(i).label().to_string()).collect();
    Ok(CompileResult {
        word,
        certified_error: certified.expect("certified alongside best"),
        nodes,
        depth,
    })
}

fn check_eps(eps: &Rational) -> Result<(), Error> {
    if *eps <= rat_int(0) {
        return Err(Error::BadCompileRequest("tolerance must be positive".into()));
    }
    Ok(())
}

/// Phase-invariant distance `sqrt(1 - |tr(U^* V)| / d)` between two square
/// matrices of equal dimension, as an exact real.
///
/// On unitary inputs Cauchy-Schwarz keeps the radicand in `[0, 1]` and the
/// value vanishes exactly when `U = e^{i phi} V`; the triangle inequality
/// holds up to a factor of sqrt(2). The formula is still total on arbitrary
/// invertible matrices (the radicand is clamped at zero before the square
/// root), but there `|tr|/d` may exceed 1 and distinct matrices can sit at
/// distance zero — [`unitarity_defect`] measures how far inputs are from
/// the regime where separation is guaranteed.
pub fn distance(
    u: &Matrix<ExactComplex>,
    v: &Matrix<ExactComplex>,
) -> Result<RegularReal, Error> {
    if !u.is_square() || !v.is_square() || u.rows() != v.rows() {
        return Err(Error::DimensionMismatch {
            left: (u.rows(), u.cols()),
            right: (v.rows(), v.cols()),
        });
    }
    let d = u.rows();
    if d == 0 {
        return Err(Error::BadCompileRequest("distance needs positive dimension".into()));
    }
    let parts: Vec<ExactComplex> =
        u.entries().iter().zip(v.entries()).map(|(a, b)| a.conj().mul(b)).collect();
    let tr = ExactComplex::balanced_sum(parts);
    let one = RegularReal::constant(rat_int(1));
    Ok(one.sub(&tr.abs().scale(&rat(1, d as i64))).sqrt_nonneg())
}

/// [`distance`] for cyclotomic matrices.
pub fn distance_cyclo(
    u: &Matrix<Cyclotomic>,
    v: &Matrix<Cyclotomic>,
) -> Result<RegularReal, Error> {
    distance(&u.to_complex(), &v.to_complex())
}

/// How far a matrix is from unitary: the Frobenius norm of `U^* U - I`,
/// exactly zero iff `U` is unitary.
pub fn unitarity_defect(m: &Matrix<Cyclotomic>) -> Result<RegularReal, Error> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            left: (m.rows(), m.cols()),
            right: (m.cols(), m.rows()),
        });
    }
    let gram = m.adjoint().mul(m)?;
    let diff = gram.sub(&Matrix::identity(m.rows()))?;
    // The Frobenius square of any matrix is a nonnegative real cyclotomic.
    Ok(diff.frobenius_sq().to_complex().re().clone().sqrt_nonneg())
}

/// Certify a compiled word against a target: returns a rational `bound` with
///
/// ```text
///     dist <= bound <= dist + eps
/// ```
///
/// where `dist` is the true distance of the word's product to the target.
/// For exact targets an exact-zero test runs first, so perfect compilations
/// certify to literally `0`.
pub fn certify(
    gates: &GateSet,
    word: &[String],
    target: &CompileTarget,
    eps: &Rational,
) -> Result<Rational, Error> {
    let indices: Vec<usize> =
        word.iter().map(|l| gates.index_of(l)).collect::<Result<_, _>>()?;
    certify_indices(gates, &indices, target, eps)
}

fn certify_indices(
    gates: &GateSet,
    word: &[usize],
    target: &CompileTarget,
    eps: &Rational,
) -> Result<Rational, Error> {
    check_eps(eps)?;
    check_dims(gates, target)?;
    let product = gates.word_matrix(word)?;
    let d = gates.dim();
    if let CompileTarget::Exact(_) = target {
        // |tr(U^* V)|^2 = d^2 forces |tr| = d, which pins the distance at 0.
        let ctx = score_ctx(target);
        if let Score::Exact(s) = score_with(&ctx, &product)? {
            if s == Cyclotomic::from_rational(rat_int((d * d) as i64)) {
                return Ok(rat_int(0));
            }
        }
    }
    let dist = distance(&product.to_complex(), &target.to_complex())?;
    // An approximation within eps/4 plus a shift of eps/4 brackets the true
    // value from above by at most eps/2.
    let approx = dist.real_approx(&(eps * &rat(1, 2)))?;
    Ok(approx + eps * &rat(1, 4))
}

/// Gate set made of a cohomology family's generator images for the chosen
/// strand pairs, labelled `b{a}_{b}` with primed inverses.
pub fn gate_set_from_family(
    family: &CohomologyFamily,
    pairs: &[(usize, usize)],
) -> Result<GateSet, Error> {
    if family.fiber_dim() == 0 {
        return Err(Error::BadCompileRequest(
            "the family's fiber is zero-dimensional; nothing to compile into".into(),
        ));
    }
    if pairs.is_empty() {
        return Err(Error::BadCompileRequest("no generator pairs selected".into()));
    }
    let mut named = Vec::with_capacity(pairs.len());
    for &(a, b) in pairs {
        let key = GenKey::Pure(a, b);
        let label = format!("{key}");
        let image = family
            .action()
            .image(&key)
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        named.push((label, image.clone()));
    }
    GateSet::new(named)
}

/// All adjacent-and-crossing generator pairs `1 <= a < b <= strands`.
pub fn all_pairs(strands: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for a in 1..=strands {
        for b in (a + 1)..=strands {
            pairs.push((a, b));
        }
    }
    pairs
}

/// The Ising preset: level 4, one probe, every defect weight 1.
pub fn ising_params(defects: usize) -> Result<TwistParams, Error> {
    TwistParams::new(defects, 1, 4, vec![1; defects])
}

/// The Fibonacci preset: level 5, one probe, every defect weight 1.
pub fn fibonacci_params(defects: usize) -> Result<TwistParams, Error> {
    TwistParams::new(defects, 1, 5, vec![1; defects])
}

/// Convenience: the pure-braid word a compiled label sequence denotes, for
/// feeding back into transport. Labels must be of the `b{a}_{b}` form
/// produced by [`gate_set_from_family`].
pub fn word_to_pure_braid(strands: usize, word: &[String]) -> Result<PureBraidWord, Error> {
    let mut out = PureBraidWord::identity(strands);
    for label in word {
        let (body, positive) = match label.strip_suffix('\'') {
            Some(b) => (b, false),
            None => (label.as_str(), true),
        };
        let rest = body
            .strip_prefix('b')
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        let (a, b) = rest
            .split_once('_')
            .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
        let a: usize = a.parse().map_err(|_| Error::UnknownLabel(label.clone()))?;
        let b: usize = b.parse().map_err(|_| Error::UnknownLabel(label.clone()))?;
        out = out.concat(&PureBraidWord::generator(strands, a, b, positive)?)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::family_from_params;
    use num_traits::{Signed, ToPrimitive};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 1/sqrt(2) = (zeta_8 + zeta_8^-1) / 2.
    fn inv_sqrt2() -> Cyclotomic {
        Cyclotomic::zeta_pow(8, 1).add(&Cyclotomic::zeta_pow(8, -1)).scale(&rat(1, 2))
    }

    fn hadamard() -> Matrix<Cyclotomic> {
        let s = inv_sqrt2();
        Matrix::new(2, 2, vec![s.clone(), s.clone(), s.clone(), s.neg()]).unwrap()
    }

    fn t_gate() -> Matrix<Cyclotomic> {
        Matrix::new(
            2,
            2,
            vec![
                Cyclotomic::one(8),
                Cyclotomic::zero(8),
                Cyclotomic::zero(8),
                Cyclotomic::zeta_pow(8, 1),
            ],
        )
        .unwrap()
    }

    fn ht_gates() -> GateSet {
        GateSet::new(vec![("h".into(), hadamard()), ("t".into(), t_gate())]).unwrap()
    }

    /// Direct f64 evaluation of the distance, independent of the exact real
    /// machinery: cyclotomic entries are summed with libm trigonometry.
    fn cyclo_f64(z: &Cyclotomic) -> (f64, f64) {
        let order = z.order() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in z.coeffs().iter().enumerate() {
            let c = c.to_f64().unwrap();
            let angle = core::f64::consts::TAU * (k as f64) / order;
            re += c * libm::cos(angle);
            im += c * libm::sin(angle);
        }
        (re, im)
    }

    fn distance_f64(u: &Matrix<Cyclotomic>, v: &Matrix<Cyclotomic>) -> f64 {
        let mut tr = (0.0, 0.0);
        for (a, b) in u.entries().iter().zip(v.entries()) {
            let (ar, ai) = cyclo_f64(a);
            let (br, bi) = cyclo_f64(b);
            // conj(a) * b
            tr.0 += ar * br + ai * bi;
            tr.1 += ar * bi - ai * br;
        }
        let d = u.rows() as f64;
        libm::sqrt((1.0 - libm::sqrt(tr.0 * tr.0 + tr.1 * tr.1) / d).max(0.0))
    }

    #[test]
    fn gate_sets_close_under_inversion() {
        let g = ht_gates();
        // h is an involution and keeps its own inverse slot; t gains t'.
        assert_eq!(g.len(), 3);
        let labels: Vec<&str> = g.gates().iter().map(|x| x.label()).collect();
        assert_eq!(labels, vec!["h", "t", "t'"]);
        let h = g.index_of("h").unwrap();
        let t = g.index_of("t").unwrap();
        let tp = g.index_of("t'").unwrap();
        assert_eq!(g.inverse_index(h), h);
        assert_eq!(g.inverse_index(t), tp);
        assert_eq!(g.inverse_index(tp), t);
        assert!(g.word_matrix(&[h, h]).unwrap().is_identity());
        assert!(g.word_matrix(&[t, tp]).unwrap().is_identity());
        assert_eq!(g.free_reduce_indices(&[h, t, tp, h]), Vec::<usize>::new());
        assert_eq!(g.invert_indices(&[h, t]), vec![tp, h]);
        assert!(g.index_of("s").is_err());
    }

    #[test]
    fn bad_gate_sets_are_rejected() {
        assert!(GateSet::new(vec![]).is_err());
        // Reserved prime suffix.
        assert!(GateSet::new(vec![("x'".into(), hadamard())]).is_err());
        // Duplicate label.
        assert!(GateSet::new(vec![("x".into(), hadamard()), ("x".into(), t_gate())]).is_err());
        // Mixed dimensions.
        let one = Matrix::new(1, 1, vec![Cyclotomic::one(4)]).unwrap();
        assert!(GateSet::new(vec![("x".into(), hadamard()), ("y".into(), one)]).is_err());
        // Singular gate.
        let sing = Matrix::new(
            2,
            2,
            vec![Cyclotomic::one(4), Cyclotomic::one(4), Cyclotomic::one(4), Cyclotomic::one(4)],
        )
        .unwrap();
        assert!(GateSet::new(vec![("x".into(), sing)]).is_err());
    }

    #[test]
    fn distance_matches_hand_values() {
        let id = Matrix::<Cyclotomic>::identity(2);
        let x = Matrix::new(
            2,
            2,
            vec![Cyclotomic::zero(4), Cyclotomic::one(4), Cyclotomic::one(4), Cyclotomic::zero(4)],
        )
        .unwrap();
        let close = |r: &RegularReal, v: f64, tol: f64| {
            let a = r.real_approx(&rat(1, 1_000_000)).unwrap().to_f64().unwrap();
            assert!((a - v).abs() <= tol, "expected {v}, approximated {a}");
        };
        close(&distance_cyclo(&id, &id).unwrap(), 0.0, 1e-6);
        // tr(I^* X) = 0, so the distance peaks at 1.
        close(&distance_cyclo(&id, &x).unwrap(), 1.0, 1e-6);
        // dist(I, T) = sqrt(1 - |1 + zeta_8|/2) = 0.27589938...
        close(&distance_cyclo(&id, &t_gate()).unwrap(), 0.275_899_38, 2e-6);
        // Phase invariance: scaling by a root of unity moves nothing.
        let spun = t_gate().scale(&Cyclotomic::zeta_pow(8, 3));
        close(&distance_cyclo(&t_gate(), &spun).unwrap(), 0.0, 1e-6);
        let one = Matrix::<Cyclotomic>::identity(1);
        assert!(distance_cyclo(&id, &one).is_err());
    }

    #[test]
    fn unitarity_defect_detects_stretching() {
        let ok = unitarity_defect(&hadamard()).unwrap();
        assert_eq!(ok.real_approx(&rat(1, 1000)).unwrap(), rat_int(0));
        let stretched = Matrix::new(
            2,
            2,
            vec![
                Cyclotomic::from_rational(rat_int(2)),
                Cyclotomic::zero(4),
                Cyclotomic::zero(4),
                Cyclotomic::one(4),
            ],
        )
        .unwrap();
        // U^*U - I = diag(3, 0), Frobenius norm 3.
        let bad = unitarity_defect(&stretched).unwrap().real_approx(&rat(1, 1000)).unwrap();
        assert!((bad - rat_int(3)).abs() <= rat(1, 1000));
    }

    #[test]
    fn identity_target_compiles_to_the_empty_word() {
        let g = ht_gates();
        let target = CompileTarget::exact(Matrix::identity(2)).unwrap();
        let out = brute_force_compile(&g, &target, 4, &rat(1, 1000)).unwrap();
        assert!(out.word.is_empty());
        assert_eq!(out.certified_error, rat_int(0));
        assert_eq!(out.depth, 0);
        assert_eq!(out.nodes, 1);
    }

    #[test]
    fn single_gate_targets_are_found_exactly() {
        let g = ht_gates();
        for (label, m) in [("t", t_gate()), ("h", hadamard())] {
            let target = CompileTarget::exact(m).unwrap();
            let out = brute_force_compile(&g, &target, 4, &rat(1, 1000)).unwrap();
            assert_eq!(out.word, vec![label.to_string()]);
            assert_eq!(out.certified_error, rat_int(0));
            assert_eq!(out.depth, 1);
        }
        // The inverse of t is reached through the adjoined prime gate.
        let target = CompileTarget::exact(t_gate().inverse().unwrap()).unwrap();
        let out = brute_force_compile(&g, &target, 4, &rat(1, 1000)).unwrap();
        assert_eq!(out.word, vec!["t'".to_string()]);
        // A length-two product, and the tie-breaks pick it over anything longer.
        let ht = hadamard().mul(&t_gate()).unwrap();
        let target = CompileTarget::exact(ht).unwrap();
        let out = brute_force_compile(&g, &target, 4, &rat(1, 1000)).unwrap();
        assert_eq!(out.word, vec!["h".to_string(), "t".to_string()]);
        assert_eq!(out.certified_error, rat_int(0));
    }

    /// Exhaustive oracle: enumerate *all* index words up to a length,
    /// including freely reducible ones, rank them with the same comparator,
    /// and demand the search found the same word. Pruning cancelling pairs
    /// is harmless because a reducible word's reduction, which lives at a
    /// lower level, carries the same matrix and wins the length tie-break.
    fn naive_best(g: &GateSet, target: &CompileTarget, max_len: usize) -> Candidate {
        let mut best: Option<Candidate> = None;
        for len in 0..=max_len {
            let mut word = vec![0usize; len];
            loop {
                let cand = score_candidate(g, target, word.clone()).unwrap();
                if best.as_ref().map_or(true, |b| cand.better_than(b)) {
                    best = Some(cand);
                }
                // Odometer over base-g.len() digits.
                let mut k = len;
                loop {
                    if k == 0 {
                        break;
                    }
                    word[k - 1] += 1;
                    if word[k - 1] < g.len() {
                        break;
                    }
                    word[k - 1] = 0;
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn brute_force_matches_a_naive_oracle() {
        let g = ht_gates();
        let mut rng = ChaCha8Rng::seed_from_u64(401);
        let mut targets = Vec::new();
        // Reachable targets: products of random gate words.
        for _ in 0..4 {
            let len = rng.gen_range(0..=5);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..g.len())).collect();
            targets.push(g.word_matrix(&word).unwrap());
        }
        // An unreachable target: a generic rotation off the generated set.
        targets.push(
            Matrix::new(
                2,
                2,
                vec![
                    Cyclotomic::zeta_pow(12, 1),
                    Cyclotomic::zero(12),
                    Cyclotomic::zero(12),
                    Cyclotomic::zeta_pow(12, 5),
                ],
            )
            .unwrap(),
        );
        for m in targets {
            let target = CompileTarget::exact(m).unwrap();
            let max_len = 5;
            // eps small enough that the search cannot stop before max_len
            // unless it finds an exact hit, mirroring the oracle's horizon.
            let eps = rat(1, 1_000_000);
            let oracle = naive_best(&g, &target, max_len);
            let oracle_labels: Vec<String> = oracle
                .word_indices()
                .iter()
                .map(|&i| g.gate(i).label().to_string())
                .collect();
            let out = brute_force_compile(&g, &target, max_len, &eps).unwrap();
            assert_eq!(out.word, oracle_labels);
            // Any worker count merges to the same answer.
            for workers in [2, 3, 8] {
                let split = compile_with_workers(&g, &target, max_len, &eps, workers).unwrap();
                assert_eq!(split.word, out.word);
                assert_eq!(split.certified_error, out.certified_error);
                assert_eq!(split.nodes, out.nodes);
            }
        }
    }

    #[test]
    fn certification_is_sound_and_within_tolerance() {
        let g = ht_gates();
        let mut rng = ChaCha8Rng::seed_from_u64(402);
        let eps = rat(1, 500);
        for _ in 0..40 {
            let wlen = rng.gen_range(0..=5);
            let tlen = rng.gen_range(0..=5);
            let word: Vec<usize> = (0..wlen).map(|_| rng.gen_range(0..g.len())).collect();
            let tword: Vec<usize> = (0..tlen).map(|_| rng.gen_range(0..g.len())).collect();
            let labels: Vec<String> =
                word.iter().map(|&i| g.gate(i).label().to_string()).collect();
            let tmat = g.word_matrix(&tword).unwrap();
            let target = CompileTarget::exact(tmat.clone()).unwrap();
            let bound = certify(&g, &labels, &target, &eps).unwrap();
            assert!(bound >= rat_int(0));
            // Soundness and tightness against a sharper approximation of the
            // true distance: bound must cover it and exceed it by < eps.
            let umat = g.word_matrix(&word).unwrap();
            let sharp = distance_cyclo(&umat, &tmat)
                .unwrap()
                .real_approx(&(&eps * &rat(1, 8)))
                .unwrap();
            assert!(&bound >= &(&sharp - &(&eps * &rat(1, 16))), "bound below the distance");
            assert!(
                &bound <= &(&sharp + &(&eps + &(&eps * &rat(1, 16)))),
                "bound slack exceeds eps"
            );
            // Independent floating-point cross-check. The oracle's own noise
            // floor near zero is sqrt(machine epsilon), about 1.5e-8, because
            // the square root has unbounded slope there.
            let f = distance_f64(&umat, &tmat);
            let b = bound.to_f64().unwrap();
            assert!(b + 1e-7 >= f && b <= f + 0.0021, "f64 oracle disagrees: {b} vs {f}");
        }
        // Degenerate requests are loud.
        assert!(certify(&g, &[], &CompileTarget::exact(Matrix::identity(2)).unwrap(), &rat_int(0))
            .is_err());
        assert!(certify(
            &g,
            &["nope".into()],
            &CompileTarget::exact(Matrix::identity(2)).unwrap(),
            &rat(1, 10)
        )
        .is_err());
    }

    #[test]
    fn numeric_targets_use_the_grid_and_stay_deterministic() {
        let g = ht_gates();
        // A target given as exact complex entries rather than cyclotomics:
        // diag(3/5 + 4i/5, 1), unit modulus but transcendental angle.
        let z = ExactComplex::from_rationals(&rat(3, 5), &rat(4, 5));
        let zero = ExactComplex::zero();
        let one = ExactComplex::one();
        let m = Matrix::new(2, 2, vec![z, zero.clone(), zero, one]).unwrap();
        let target = CompileTarget::numeric(m).unwrap();
        let out = brute_force_compile(&g, &target, 3, &rat(1, 100)).unwrap();
        for workers in [2, 5] {
            let split = compile_with_workers(&g, &target, 3, &rat(1, 100), workers).unwrap();
            assert_eq!(split.word, out.word);
            assert_eq!(split.certified_error, out.certified_error);
        }
        // The certified bound really bounds the chosen word's distance.
        let labels = out.word.clone();
        let again = certify(&g, &labels, &target, &rat(1, 100)).unwrap();
        assert_eq!(again, out.certified_error);
    }

    #[test]
    fn one_dimensional_fibers_are_phase_trivial() {
        // Two defects at level 4 give a line fiber. The distance mods out a
        // global phase, and on a line *everything* is a global phase: every
        // unit target certifies to zero against the empty word. The metric
        // collapsing in dimension one is forced by its definition, so the
        // compiler should notice instantly rather than search.
        let family = family_from_params(&ising_params(2).unwrap()).unwrap();
        let g = gate_set_from_family(&family, &all_pairs(2)).unwrap();
        assert_eq!(g.dim(), 1);
        assert_eq!(g.len(), 2);
        let target = CompileTarget::exact(
            Matrix::new(1, 1, vec![Cyclotomic::zeta_pow(8, 1)]).unwrap(),
        )
        .unwrap();
        let out = brute_force_compile(&g, &target, 8, &rat(1, 1000)).unwrap();
        assert!(out.word.is_empty());
        assert_eq!(out.certified_error, rat_int(0));
        assert_eq!(out.depth, 0);
        assert_eq!(out.nodes, 1);
        // The label-to-braid bridge, checked directly.
        let braid =
            word_to_pure_braid(2, &["b1_2'".to_string(), "b1_2".to_string(), "b1_2".to_string()])
                .unwrap();
        assert_eq!(braid.len(), 3);
        assert!(!braid.letters()[0].positive);
        assert!(word_to_pure_braid(2, &["q9".to_string()]).is_err());
    }

    #[test]
    fn family_gate_sets_expose_generator_images() {
        let family = family_from_params(&fibonacci_params(3).unwrap()).unwrap();
        let g = gate_set_from_family(&family, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.len(), 4);
        let labels: Vec<&str> = g.gates().iter().map(|x| x.label()).collect();
        assert_eq!(labels, vec!["b1_2", "b1_2'", "b2_3", "b2_3'"]);
        let i = g.index_of("b1_2").unwrap();
        let ip = g.index_of("b1_2'").unwrap();
        assert!(g.word_matrix(&[i, ip]).unwrap().is_identity());
        // Provenance: every gate (primed ones included) is the transport of
        // the pure braid its label names.
        for gate in g.gates() {
            let braid = word_to_pure_braid(3, &[gate.label().to_string()]).unwrap();
            let transported = crate::transport::transport(&family, &braid).unwrap();
            assert_eq!(transported.matrix(), gate.matrix(), "{}", gate.label());
        }
        // These transport matrices are invertible but far from unitary; the
        // diagnostic sees it (the defect is about 3.07), while a unitary
        // matrix reports zero.
        let defect =
            unitarity_defect(g.gate(i).matrix()).unwrap().real_approx(&rat(1, 1000)).unwrap();
        assert!(defect > rat_int(3) && defect < rat(31, 10), "defect {defect}");
        let clean = unitarity_defect(&Matrix::identity(2))
            .unwrap()
            .real_approx(&rat(1, 1000))
            .unwrap();
        assert_eq!(clean, rat_int(0));
        // Because the gates are not unitary, |tr(U^* V)|/d can exceed 1 and
        // the clamped metric hits zero on words that are not phase-equal to
        // the target: compiling the image of b1_2 b2_3 b1_2 stops at depth 1
        // on the best-scoring single letter. The frozen values document that
        // degeneracy rather than hide it.
        let j = g.index_of("b2_3").unwrap();
        let target_m = g.word_matrix(&[i, j, i]).unwrap();
        let target = CompileTarget::exact(target_m.clone()).unwrap();
        let out = brute_force_compile(&g, &target, 3, &rat(1, 1000)).unwrap();
        assert_eq!(out.word, vec!["b2_3'".to_string()]);
        assert_eq!(out.certified_error, rat(1, 4000));
        assert_eq!(out.depth, 1);
        assert_eq!(out.nodes, 5);
        // Selection errors are loud.
        assert!(gate_set_from_family(&family, &[]).is_err());
        assert!(gate_set_from_family(&family, &[(1, 4)]).is_err());
    }

    #[test]
    fn degenerate_requests_are_rejected() {
        let g = ht_gates();
        let target = CompileTarget::exact(Matrix::identity(2)).unwrap();
        assert!(brute_force_compile(&g, &target, 2, &rat_int(0)).is_err());
        assert!(brute_force_compile(&g, &target, 2, &rat(-1, 2)).is_err());
        assert!(compile_with_workers(&g, &target, 2, &rat(1, 10), 0).is_err());
        assert!(search_level(&g, &target, 1, 3, 2).is_err());
        let wrong = CompileTarget::exact(Matrix::identity(3)).unwrap();
        assert!(brute_force_compile(&g, &wrong, 2, &rat(1, 10)).is_err());
        assert!(CompileTarget::exact(Matrix::zero(2, 3)).is_err());
    }
}
