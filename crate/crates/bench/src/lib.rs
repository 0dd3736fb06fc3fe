//! Fixtures shared by the criterion benches.

use kcoverage::{make_fence, sample_poisson, NodeSet, PoissonConfig};

/// A fenced Poisson network on the side-10 square with radius 2.5.
pub fn network(intensity: f64, seed: u64) -> NodeSet {
    let pattern = sample_poisson(&PoissonConfig::new(intensity, 10.0, seed)).expect("valid config");
    let fence = make_fence(10.0, 2.5).expect("valid fence");
    NodeSet::from_pattern(&pattern, &fence, 2.5).expect("valid node set")
}
