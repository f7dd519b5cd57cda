//! OS-thread compile driver.
//!
//! The core crate's `compile_with_workers` evaluates every worker partition
//! on one thread; this driver runs the same partitions on real threads, one
//! per worker, and merges with the same deterministic tie-break, so the two
//! return identical results for every worker count. Gate sets and targets
//! are immutable, so the workers share plain references.

use std::thread;

use braidgate_core::{
    certify, search_level, Candidate, CompileResult, CompileTarget, Error, GateSet, Rational,
};

/// [`braidgate_core::compile_with_workers`] with the per-level worker fan
/// spread over `workers` OS threads.
pub fn compile_parallel(
    gates: &GateSet,
    target: &CompileTarget,
    max_len: usize,
    eps: &Rational,
    workers: usize,
) -> Result<CompileResult, Error> {
    if workers == 0 {
        return Err(Error::BadCompileRequest("need at least one worker".into()));
    }
    let mut best: Option<Candidate> = None;
    let mut nodes: u64 = 0;
    let mut certified: Option<Rational> = None;
    let mut depth = 0;
    for level in 0..=max_len {
        let results: Result<Vec<(Option<Candidate>, u64)>, Error> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|worker| {
                    scope.spawn(move || search_level(gates, target, level, worker, workers))
                })
                .collect();
            // join in spawn order so the merge below is deterministic
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        });
        for (cand, n) in results? {
            nodes += n;
            if let Some(c) = cand {
                if best.as_ref().map_or(true, |b| c.better_than(b)) {
                    best = Some(c);
                }
            }
        }
        depth = level;
        let incumbent = best.as_ref().expect("level zero always scores the empty word");
        let labels: Vec<String> = incumbent
            .word_indices()
            .iter()
            .map(|&i| gates.gate(i).label().to_string())
            .collect();
        let bound = certify(gates, &labels, target, eps)?;
        let done = bound <= *eps;
        certified = Some(bound);
        if done {
            break;
        }
    }
    let incumbent = best.expect("the level loop runs at least once");
    let word =
        incumbent.word_indices().iter().map(|&i| gates.gate(i).label().to_string()).collect();
    Ok(CompileResult {
        word,
        certified_error: certified.expect("certified alongside best"),
        nodes,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use braidgate_core::rational::rat;
    use braidgate_core::{brute_force_compile, compile_with_workers, Cyclotomic, Matrix};

    fn ht_gates() -> GateSet {
        let half = Cyclotomic::zeta_pow(8, 1).add(&Cyclotomic::zeta_pow(8, -1)).scale(&rat(1, 2));
        let hadamard = Matrix::new(
            2,
            2,
            vec![half.clone(), half.clone(), half.clone(), half.neg()],
        )
        .unwrap();
        let t = Matrix::new(
            2,
            2,
            vec![
                Cyclotomic::one(8),
                Cyclotomic::zero(8),
                Cyclotomic::zero(8),
                Cyclotomic::zeta_pow(8, 1),
            ],
        )
        .unwrap();
        GateSet::new(vec![("h".into(), hadamard), ("t".into(), t)]).unwrap()
    }

    #[test]
    fn threads_agree_with_the_sequential_driver() {
        let g = ht_gates();
        let word = ["t", "h", "t", "t"];
        let target_m = g
            .word_matrix(&word.iter().map(|l| g.index_of(l).unwrap()).collect::<Vec<_>>())
            .unwrap();
        let target = CompileTarget::exact(target_m).unwrap();
        // Loose tolerance: the drivers must agree letter for letter anyway,
        // and intermediate-level certification cost scales with 1/eps.
        let eps = rat(1, 100);
        let reference = brute_force_compile(&g, &target, 4, &eps).unwrap();
        for workers in [1usize, 2, 8] {
            let sequential = compile_with_workers(&g, &target, 4, &eps, workers).unwrap();
            let threaded = compile_parallel(&g, &target, 4, &eps, workers).unwrap();
            for out in [&sequential, &threaded] {
                assert_eq!(out.word, reference.word, "workers={workers}");
                assert_eq!(out.certified_error, reference.certified_error);
                assert_eq!(out.nodes, reference.nodes);
                assert_eq!(out.depth, reference.depth);
            }
        }
        assert!(compile_parallel(&g, &target, 4, &eps, 0).is_err());
    }
}
