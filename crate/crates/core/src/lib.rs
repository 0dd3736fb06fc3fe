//! k-coverage of planar wireless networks.
//!
//! Nodes with a common sensing radius are turned into a Vietoris-Rips or
//! Čech complex. A fenced square is 1-covered when that complex is connected
//! and has no 1-dimensional holes; [`kcover::k_coverage`] repeatedly strips
//! off a minimal 1-covering layer with [`reduction::reduce`], and the number
//! of disjoint layers found is a lower bound on the coverage multiplicity of
//! the whole square.
//!
//! ```
//! use kcoverage::{k_coverage, make_fence, sample_poisson, Flavor, NodeSet, PoissonConfig};
//!
//! let pattern = sample_poisson(&PoissonConfig::new(0.3, 10.0, 1)).unwrap();
//! let fence = make_fence(10.0, 2.5).unwrap();
//! let ns = NodeSet::from_pattern(&pattern, &fence, 2.5).unwrap();
//! let result = k_coverage(&ns, Flavor::Cech).unwrap();
//! assert_eq!(result.layers.len(), result.k);
//! ```

pub mod analytic;
pub mod complex;
mod error;
pub mod geometry;
pub mod homology;
pub mod kcover;
pub mod montecarlo;
pub mod reduction;
pub mod serial;

pub use analytic::{curve_table, mean_k, p_exactly_k, p_k_covered, PoissonCoverageParams};
pub use complex::{build_cech, build_rips, is_subcomplex, Flavor, SimplicialComplex};
pub use error::{Error, Result};
pub use geometry::{
    covers, make_fence, miniball3_radius, sample_hardcore, sample_poisson, Node, NodeSet, Point2,
    PoissonConfig, Role,
};
pub use homology::{betti, boundary_matrix, count_components, gf2_rank, BettiPair, GF2Matrix};
pub use kcover::{certify, k_coverage, CoverageCertificate, KCoverResult};
pub use montecarlo::{compare_to_theory, run_experiment, ExperimentConfig, ExperimentRow};
pub use reduction::{reduce, ReductionOutcome};
