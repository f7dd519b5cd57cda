//! Abelian twist data: rank-one phase assignments to pure-braid generators.
//!
//! A `PhaseTable` sends each strand pair `(a, b)` to a rational exponent
//! `q`, meaning the generator on that pair acts by `exp(2 pi i q)`. Because
//! every defining relator of the pure braid group is a product of
//! commutators-of-words in the generators, *any* assignment of phases to
//! generators extends to a homomorphism to the circle group: the word's
//! phase is just the signed sum of its letters' exponents, mod 1.
//!
//! `TwistParams` is the structured parameter set (level `kappa`, defect
//! weights `w`, probe count) whose induced table on `N + n` strands is
//!
//! ```text
//! defect-defect  (a < b <= N):      w_a w_b / (2 kappa)
//! defect-probe   (a <= N < b):      w_a / kappa
//! probe-probe    (N < a < b):       2 / kappa
//! ```

use crate::braid::PureBraidWord;
use crate::cyclotomic::UnitPhase;
use crate::error::Error;
use crate::rational::Rational;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;

/// Parameters of the abelian twist: `defects` weighted marked strands,
/// `probes` moving strands, and the level `kappa >= 2`. Weights satisfy
/// `0 <= w <= kappa - 2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistParams {
    defects: usize,
    probes: usize,
    level: u64,
    weights: Vec<u64>,
}

impl TwistParams {
    pub fn new(defects: usize, probes: usize, level: u64, weights: Vec<u64>) -> Result<TwistParams, Error> {
        if defects < 1 {
            return Err(Error::BadParams(String::from("need at least one defect strand")));
        }
        if level < 2 {
            return Err(Error::BadParams(format!("level must be >= 2, got {level}")));
        }
        if weights.len() != defects {
            return Err(Error::BadParams(format!(
                "{} weights for {} defects",
                weights.len(),
                defects
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w > level - 2) {
            return Err(Error::BadParams(format!(
                "weight {w} exceeds level - 2 = {}",
                level - 2
            )));
        }
        Ok(TwistParams { defects, probes, level, weights })
    }

    pub fn defects(&self) -> usize {
        self.defects
    }

    pub fn probes(&self) -> usize {
        self.probes
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn strand_count(&self) -> usize {
        self.defects + self.probes
    }

    /// Same parameter set with a different probe count.
    pub fn with_probes(&self, probes: usize) -> TwistParams {
        TwistParams { probes, ..self.clone() }
    }
}

impl fmt::Display for TwistParams {
    /// Wire form `N=2;n=1;level=4;weights=1,1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={};n={};level={};weights=", self.defects, self.probes, self.level)?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Rational exponents on strand pairs `(a, b)`, `1 <= a < b <= strands`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseTable {
    strands: usize,
    entries: BTreeMap<(usize, usize), Rational>,
}

impl PhaseTable {
    /// Any exponent assignment is a valid homomorphism (see module doc);
    /// the table need not cover every pair, but looking up a missing pair
    /// is an error.
    pub fn new(strands: usize, entries: BTreeMap<(usize, usize), Rational>) -> Result<PhaseTable, Error> {
        for &(a, b) in entries.keys() {
            if a < 1 || a >= b || b > strands {
                return Err(Error::BadLetter(format!(
                    "phase-table pair ({a},{b}) out of range for {strands} strands"
                )));
            }
        }
        Ok(PhaseTable { strands, entries })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn exponent(&self, a: usize, b: usize) -> Result<&Rational, Error> {
        self.entries.get(&(a, b)).ok_or(Error::MissingPhase { pair: (a, b) })
    }

    /// Keeps only the pairs supported on the first `strands` strands.
    pub fn restrict(&self, strands: usize) -> PhaseTable {
        PhaseTable {
            strands,
            entries: self
                .entries
                .iter()
                .filter(|((_, b), _)| *b <= strands)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// The structured twist table on `defects + probes` strands.
pub fn twist_table(p: &TwistParams) -> PhaseTable {
    let n_def = p.defects();
    let strands = p.strand_count();
    let kappa = BigInt::from(p.level());
    let mut entries = BTreeMap::new();
    for a in 1..=strands {
        for b in a + 1..=strands {
            let q = if b <= n_def {
                // defect-defect
                Rational::new(
                    BigInt::from(p.weights()[a - 1] * p.weights()[b - 1]),
                    2 * &kappa,
                )
            } else if a <= n_def {
                // defect-probe
                Rational::new(BigInt::from(p.weights()[a - 1]), kappa.clone())
            } else {
                // probe-probe
                Rational::new(BigInt::from(2), kappa.clone())
            };
            entries.insert((a, b), q);
        }
    }
    PhaseTable { strands, entries }
}

/// Phase of a pure-braid word under a table: the signed exponent sum of its
/// letters, as a unit phase. Functorial by construction.
pub fn phase_of_word(table: &PhaseTable, w: &PureBraidWord) -> Result<UnitPhase, Error> {
    if table.strands() != w.strands() {
        return Err(Error::StrandMismatch { left: table.strands(), right: w.strands() });
    }
    let mut sum = Rational::new(BigInt::from(0), BigInt::from(1));
    for l in w.letters() {
        let q = table.exponent(l.a, l.b)?;
        if l.positive {
            sum += q;
        } else {
            sum -= q;
        }
    }
    Ok(UnitPhase::new(&sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::pure_relators;
    use crate::rational::rat;

    #[test]
    fn params_validate() {
        assert!(TwistParams::new(0, 1, 4, alloc::vec![]).is_err());
        assert!(TwistParams::new(2, 1, 1, alloc::vec![0, 0]).is_err());
        assert!(TwistParams::new(2, 1, 4, alloc::vec![1]).is_err());
        assert!(TwistParams::new(2, 1, 4, alloc::vec![1, 3]).is_err());
        assert!(TwistParams::new(2, 1, 4, alloc::vec![1, 2]).is_ok());
    }

    #[test]
    fn table_of_the_level_four_example() {
        // N=2, n=1, level 4, weights (1,1)
        let p = TwistParams::new(2, 1, 4, alloc::vec![1, 1]).unwrap();
        let t = twist_table(&p);
        assert_eq!(t.exponent(1, 2).unwrap(), &rat(1, 8)); // defect-defect
        assert_eq!(t.exponent(1, 3).unwrap(), &rat(1, 4)); // defect-probe
        assert_eq!(t.exponent(2, 3).unwrap(), &rat(1, 4));
        // weight-2 defect against a probe: phase -1
        let p = TwistParams::new(1, 1, 4, alloc::vec![2]).unwrap();
        assert_eq!(twist_table(&p).exponent(1, 2).unwrap(), &rat(1, 2));
        // probe-probe at level 5
        let p = TwistParams::new(1, 2, 5, alloc::vec![1]).unwrap();
        assert_eq!(twist_table(&p).exponent(2, 3).unwrap(), &rat(2, 5));
    }

    #[test]
    fn phases_compose_and_invert() {
        let p = TwistParams::new(2, 1, 4, alloc::vec![1, 1]).unwrap();
        let t = twist_table(&p);
        let g = PureBraidWord::generator(3, 1, 2, true).unwrap();
        let ph = phase_of_word(&t, &g).unwrap();
        assert_eq!(ph.exponent(), &rat(1, 8));
        let both = g.concat(&g.inverse()).unwrap();
        assert!(phase_of_word(&t, &both).unwrap().is_one());
        let sq = g.concat(&g).unwrap();
        assert_eq!(phase_of_word(&t, &sq).unwrap().exponent(), &rat(1, 4));
    }

    #[test]
    fn every_relator_has_trivial_phase() {
        // arbitrary (not twist-shaped) tables still kill the relators
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for strands in 2..=6 {
            let mut entries = BTreeMap::new();
            for a in 1..=strands {
                for b in a + 1..=strands {
                    entries.insert((a, b), rat(rng.gen_range(-12..12), rng.gen_range(1..10)));
                }
            }
            let t = PhaseTable::new(strands, entries).unwrap();
            for r in pure_relators(strands) {
                let ph = phase_of_word(&t, &r).unwrap();
                assert!(ph.is_one(), "relator {r} on {strands} strands");
            }
        }
    }

    #[test]
    fn restriction_matches_fewer_probes() {
        let p = TwistParams::new(3, 2, 5, alloc::vec![1, 2, 1]).unwrap();
        let full = twist_table(&p);
        let restricted = full.restrict(3);
        let defect_only = twist_table(&p.with_probes(0));
        assert_eq!(restricted, defect_only);
        // words supported low see the same phases either way
        let w = PureBraidWord::generator(5, 1, 3, true)
            .unwrap()
            .concat(&PureBraidWord::generator(5, 2, 3, false).unwrap())
            .unwrap();
        let low = w.project(3).unwrap();
        assert_eq!(
            phase_of_word(&full, &w).unwrap(),
            phase_of_word(&defect_only, &low).unwrap()
        );
    }

    #[test]
    fn missing_pair_is_loud() {
        let t = PhaseTable::new(3, BTreeMap::new()).unwrap();
        let g = PureBraidWord::generator(3, 1, 2, true).unwrap();
        assert_eq!(
            phase_of_word(&t, &g),
            Err(Error::MissingPhase { pair: (1, 2) })
        );
    }
}
