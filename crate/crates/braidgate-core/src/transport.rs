//! Families of twisted cohomology over a presented pure-braid base, with
//! transport along words as the monodromy action.
//!
//! A `CohomologyFamily` is the operational form of a local system on the
//! classifying space of `PBr(N)`: the base is carried as a presentation
//! (strand count plus relators), the fiber as its dimension, and the action
//! as generator matrices that have been *certified* against every relator.
//! Transport along a word is then the ordered product of generator images;
//! the path-algebra laws (functoriality under concatenation, reversal as
//! inverse, invariance under relator insertion) hold exactly and are
//! re-checkable through `transport_laws`.

use crate::braid::{pure_relators, PureBraidWord};
use crate::cyclotomic::Cyclotomic;
use crate::error::Error;
use crate::matrix::Matrix;
use crate::monodromy::{reduced_fiber, LocalRank1System, MonodromyRep, RelationCertificate};
use crate::localsys::TwistParams;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// A certified local system over the pure-braid base.
#[derive(Clone, Debug)]
pub struct CohomologyFamily {
    params: TwistParams,
    strands: usize,
    relators: Vec<PureBraidWord>,
    fiber_dim: usize,
    action: MonodromyRep,
}

impl CohomologyFamily {
    /// Wraps an already-built representation, re-deriving the base
    /// presentation and re-running the relator verification. Fails loudly —
    /// with the failing relator named — if the action is not a
    /// representation, or if the matrices do not match the fiber dimension.
    pub fn from_parts(params: TwistParams, mut action: MonodromyRep) -> Result<CohomologyFamily, Error> {
        if params.probes() != 1 {
            return Err(Error::ProbeCountUnsupported { probes: params.probes() });
        }
        let strands = params.defects();
        if action.strands() != strands {
            return Err(Error::StrandMismatch { left: action.strands(), right: strands });
        }
        let fiber_dim = reduced_fiber(&LocalRank1System::from_params(&params)).dim();
        if action.dim() != fiber_dim {
            return Err(Error::DimensionMismatch {
                left: (action.dim(), action.dim()),
                right: (fiber_dim, fiber_dim),
            });
        }
        action.certify()?.require()?;
        Ok(CohomologyFamily {
            params,
            strands,
            relators: pure_relators(strands),
            fiber_dim,
            action,
        })
    }

    pub fn params(&self) -> &TwistParams {
        &self.params
    }

    /// Base strand count (the number of defects).
    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Defining relators of the base presentation.
    pub fn relators(&self) -> &[PureBraidWord] {
        &self.relators
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn action(&self) -> &MonodromyRep {
        &self.action
    }

    pub fn certificate(&self) -> &RelationCertificate {
        self.action.certificate().expect("families are only built certified")
    }
}

/// Builds the one-probe family: reduced fiber and generator images from the
/// twist parameters, verified against every relator before it is returned.
pub fn family_from_params(p: &TwistParams) -> Result<CohomologyFamily, Error> {
    if p.probes() != 1 {
        return Err(Error::ProbeCountUnsupported { probes: p.probes() });
    }
    CohomologyFamily::from_parts(p.clone(), MonodromyRep::kz(p)?)
}

/// Transport along one word: the matrix together with its step-by-step
/// provenance.
#[derive(Clone, Debug)]
pub struct TransportResult {
    word: PureBraidWord,
    matrix: Matrix<Cyclotomic>,
    provenance: Vec<String>,
}

impl TransportResult {
    pub fn word(&self) -> &PureBraidWord {
        &self.word
    }

    pub fn matrix(&self) -> &Matrix<Cyclotomic> {
        &self.matrix
    }

    /// Generator steps in application order.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
}

/// Transport of `w` through the family: the ordered product of generator
/// images, left to right.
pub fn transport(f: &CohomologyFamily, w: &PureBraidWord) -> Result<TransportResult, Error> {
    if w.strands() != f.strands() {
        return Err(Error::StrandMismatch { left: w.strands(), right: f.strands() });
    }
    let mut matrix = Matrix::identity(f.fiber_dim());
    let mut provenance = Vec::with_capacity(w.len());
    for l in w.letters() {
        let step = PureBraidWord::new(f.strands(), alloc::vec![*l])?;
        matrix = matrix.mul(&f.action().image_of_pure(&step)?)?;
        provenance.push(format!("{l}"));
    }
    Ok(TransportResult { word: w.clone(), matrix, provenance })
}

/// Outcome of checking the path-algebra laws on one pair of words.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TransportLaws {
    /// transport(u v) = transport(u) transport(v)
    pub functorial: bool,
    /// transport(u⁻¹) = transport(u)⁻¹
    pub inverses_cancel: bool,
}

impl TransportLaws {
    pub fn all_ok(&self) -> bool {
        self.functorial && self.inverses_cancel
    }
}

/// Checks functoriality on `u, v` and the inverse law on `u`, exactly. A
/// `false` anywhere is an internal-consistency failure, not a data error.
pub fn transport_laws(
    f: &CohomologyFamily,
    u: &PureBraidWord,
    v: &PureBraidWord,
) -> Result<TransportLaws, Error> {
    let uv = u.concat(v)?;
    let functorial = transport(f, &uv)?.matrix
        == transport(f, u)?.matrix.mul(&transport(f, v)?.matrix)?;
    let inverses_cancel =
        transport(f, &u.inverse())?.matrix == transport(f, u)?.matrix.inverse()?;
    Ok(TransportLaws { functorial, inverses_cancel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::GenKey;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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
    fn level_four_family() {
        let p = TwistParams::new(2, 1, 4, vec![1, 1]).unwrap();
        let f = family_from_params(&p).unwrap();
        assert_eq!(f.fiber_dim(), 1);
        assert_eq!(f.action().generators().count(), 1);
        assert!(f.certificate().all_ok());
        let b12 = PureBraidWord::generator(2, 1, 2, true).unwrap();
        let t = transport(&f, &b12).unwrap();
        assert_eq!(&t.matrix, f.action().image(&GenKey::Pure(1, 2)).unwrap());
        assert_eq!(t.matrix.get(0, 0), &Cyclotomic::zeta_pow(8, 5));
        assert_eq!(t.provenance(), ["+(1,2)"]);
        let id = transport(&f, &PureBraidWord::identity(2)).unwrap();
        assert!(id.matrix.is_identity());
    }

    #[test]
    fn one_strand_families() {
        let p = TwistParams::new(1, 1, 4, vec![1]).unwrap();
        let f = family_from_params(&p).unwrap();
        assert_eq!(f.fiber_dim(), 0);
        assert_eq!(f.action().generators().count(), 0);
        let t = transport(&f, &PureBraidWord::identity(1)).unwrap();
        assert_eq!(t.matrix.rows(), 0);
        // untwisted single strand keeps its one-dimensional fiber
        let p0 = TwistParams::new(1, 1, 4, vec![0]).unwrap();
        assert_eq!(family_from_params(&p0).unwrap().fiber_dim(), 1);
    }

    #[test]
    fn relators_transport_to_identity() {
        let p = TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap();
        let f = family_from_params(&p).unwrap();
        assert_eq!(f.fiber_dim(), 2);
        for r in f.relators().to_vec() {
            assert!(transport(&f, &r).unwrap().matrix.is_identity(), "relator {r}");
        }
    }

    #[test]
    fn laws_hold_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let families: Vec<CohomologyFamily> = [
            TwistParams::new(2, 1, 4, vec![1, 1]).unwrap(),
            TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap(),
            TwistParams::new(4, 1, 6, vec![1, 2, 1, 3]).unwrap(),
        ]
        .iter()
        .map(|p| family_from_params(p).unwrap())
        .collect();
        for trial in 0..500 {
            let f = &families[trial % families.len()];
            let ulen = rng.gen_range(0..=4);
            let u = random_pure(&mut rng, f.strands(), ulen);
            let vlen = rng.gen_range(0..=4);
            let v = random_pure(&mut rng, f.strands(), vlen);
            let laws = transport_laws(f, &u, &v).unwrap();
            assert!(laws.all_ok(), "trial {trial}: {laws:?}");
        }
        // the degenerate pair
        let laws = transport_laws(
            &families[0],
            &PureBraidWord::identity(2),
            &PureBraidWord::identity(2),
        )
        .unwrap();
        assert!(laws.all_ok());
    }

    #[test]
    fn transport_is_homotopy_invariant() {
        // inserting a defining relator anywhere never changes the matrix
        let p = TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap();
        let f = family_from_params(&p).unwrap();
        let relators = f.relators().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for trial in 0..200 {
            let wlen = rng.gen_range(0..=5);
            let w = random_pure(&mut rng, 3, wlen);
            let cut = rng.gen_range(0..=w.len());
            let r = &relators[rng.gen_range(0..relators.len())];
            let prefix = PureBraidWord::new(3, w.letters()[..cut].to_vec()).unwrap();
            let suffix = PureBraidWord::new(3, w.letters()[cut..].to_vec()).unwrap();
            let spliced = prefix.concat(r).unwrap().concat(&suffix).unwrap();
            assert!(crate::garside::words_equal(&w.embed(), &spliced.embed()).unwrap());
            assert_eq!(
                transport(&f, &w).unwrap().matrix,
                transport(&f, &spliced).unwrap().matrix,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn corrupted_action_is_rejected_loudly() {
        let p = TwistParams::new(3, 1, 5, vec![1, 1, 1]).unwrap();
        let mut rep = MonodromyRep::kz(&p).unwrap();
        // swap two generator images; relators must notice
        let a = rep.image(&GenKey::Pure(1, 2)).unwrap().clone();
        let b = rep.image(&GenKey::Pure(1, 3)).unwrap().clone();
        rep.replace_image(GenKey::Pure(1, 2), b).unwrap();
        rep.replace_image(GenKey::Pure(1, 3), a).unwrap();
        match CohomologyFamily::from_parts(p, rep) {
            Err(Error::RelationFailure(msg)) => assert!(msg.contains("relator")),
            other => panic!("expected a named relation failure, got {other:?}"),
        }
    }

    #[test]
    fn mismatches_are_domain_errors() {
        let p = TwistParams::new(2, 1, 4, vec![1, 1]).unwrap();
        let f = family_from_params(&p).unwrap();
        let w = PureBraidWord::identity(3);
        assert!(matches!(transport(&f, &w), Err(Error::StrandMismatch { .. })));
        let p2 = TwistParams::new(2, 2, 4, vec![1, 1]).unwrap();
        assert!(matches!(
            family_from_params(&p2),
            Err(Error::ProbeCountUnsupported { probes: 2 })
        ));
    }
}
