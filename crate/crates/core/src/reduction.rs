//! Greedy vertex deletion that keeps a complex connected and hole-free.

use std::cmp::Reverse;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::IndexedComplex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutcome {
    /// Surviving vertices, fence included, sorted.
    pub kept: Vec<usize>,
    /// Deleted vertices, sorted. Never contains a fence id.
    pub discarded: Vec<usize>,
    /// Full sweeps performed, including the final one that deleted nothing.
    pub passes: usize,
}

/// Deletes non-fence vertices (with their cofaces) for as long as the
/// complex stays connected with no 1-dimensional holes.
///
/// Each sweep visits the remaining non-fence vertices by descending triangle
/// degree, ties by ascending id, and keeps a deletion only if the Betti
/// numbers are still `(1, 0)`. Sweeps repeat until one deletes nothing, so
/// every kept non-fence vertex is individually necessary on return.
pub fn reduce(s: &SimplicialComplex, fence: &[usize]) -> Result<ReductionOutcome> {
    let ic = IndexedComplex::new(s);
    let n = ic.ids().len();
    let mut is_fence = vec![false; n];
    for &f in fence {
        let i = ic.local_index(f).ok_or_else(|| {
            Error::InvalidArgument(format!("fence vertex {f} is not in the complex"))
        })?;
        is_fence[i] = true;
    }
    let start = ic.betti();
    if !start.is_connected_hole_free() {
        return Err(Error::NotReducible {
            beta0: start.beta0,
            beta1: start.beta1,
        });
    }

    let mut alive = vec![true; n];
    let mut passes = 0;
    loop {
        passes += 1;
        let degree = ic.triangle_degrees(&alive);
        let mut candidates: Vec<usize> = (0..n).filter(|&i| alive[i] && !is_fence[i]).collect();
        candidates.sort_by_key(|&i| (Reverse(degree[i]), ic.ids()[i]));

        let mut accepted = 0;
        for v in candidates {
            alive[v] = false;
            if ic.betti_masked(&alive).is_connected_hole_free() {
                accepted += 1;
            } else {
                alive[v] = true;
            }
        }
        if accepted == 0 {
            break;
        }
    }

    let (kept, discarded): (Vec<usize>, Vec<usize>) = ic
        .ids()
        .iter()
        .partition(|&&id| alive[ic.local_index(id).unwrap()]);
    Ok(ReductionOutcome {
        kept,
        discarded,
        passes,
    })
}
