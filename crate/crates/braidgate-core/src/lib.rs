//! Exact braid-gate machinery: braid groups with a decidable word problem,
//! abelian twist phases, colored Gassner/Burau monodromy computed by Fox
//! calculus, cohomology transport, and a certified compiler from unitary
//! targets to braid words.
//!
//! Everything here is exact: rationals, cyclotomic integers captured in the
//! power basis, and regular real numbers (rational approximants with an
//! explicit convergence modulus). Floating point appears only inside the
//! Solovay-Kitaev *search heuristic*; every bound the crate reports is
//! certified by exact arithmetic afterwards.
//!
//! The crate is `no_std` (with `alloc`). IO, wire formats, and the CLI live
//! in the companion crate `braidgate`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod braid;
pub mod compiler;
pub mod complex;
pub mod cyclotomic;
pub mod error;
pub mod freegroup;
pub mod garside;
pub mod localsys;
pub mod matrix;
pub mod monodromy;
pub mod rational;
pub mod real;
pub mod sk;
pub mod transport;

pub use braid::{pure_relators, relators, BraidWord, Permutation, PureBraidWord, PureLetter};
pub use compiler::{
    all_pairs, brute_force_compile, certify, compile_with_workers, distance, distance_cyclo,
    fibonacci_params, gate_set_from_family, ising_params, score_candidate, search_level,
    unitarity_defect, word_to_pure_braid, Candidate, CompileResult, CompileTarget, Gate, GateSet,
};
pub use complex::ExactComplex;
pub use cyclotomic::{Cyclotomic, UnitPhase};
pub use error::Error;
pub use freegroup::{fox_derivative, FreeWord, GroupRingElt};
pub use garside::{garside_normal_form, words_equal, GarsideNormalForm};
pub use localsys::{phase_of_word, twist_table, PhaseTable, TwistParams};
pub use matrix::Matrix;
pub use monodromy::{
    braid_to_automorphism, kz_monodromy, magnus_matrix, magnus_matrix_pure, pure_to_automorphism,
    reduced_fiber, verify_relations, BraidAutomorphism, GenKey, LocalRank1System, MonodromyRep,
    ReducedFiber, RelationCertificate, RelatorCheck, RepKind,
};
pub use rational::Rational;
pub use real::RegularReal;
pub use sk::{solovay_kitaev, SkParams};
pub use transport::{
    family_from_params, transport, transport_laws, CohomologyFamily, TransportLaws,
    TransportResult,
};
