//! Layer peeling: k disjoint 1-covering layers certify k-coverage.

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{build_flavor_on, Flavor};
use crate::error::Result;
use crate::geometry::{covers, NodeSet, Point2};
use crate::homology::{BettiPair, IndexedComplex};
use crate::reduction::reduce;
use crate::serial::F17;

/// Output of [`k_coverage`]. Layers and residual list interior ids only;
/// the fence takes part in every round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KCoverResult {
    pub k: usize,
    pub flavor: Flavor,
    pub layers: Vec<Vec<usize>>,
    pub residual: Vec<usize>,
    pub residual_betti: BettiPair,
    pub fence_ids: Vec<usize>,
}

impl KCoverResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }
}

/// Peels 1-covering layers off the network.
///
/// The complex (`R_{2r}` or `C_r`) on the remaining interior nodes plus the
/// fence is reduced while it is connected and hole-free; the interior nodes
/// the reduction keeps form the next layer and the discarded ones carry on
/// to the next round. A round whose layer would hold no interior node ends
/// the loop without being counted.
pub fn k_coverage(ns: &NodeSet, flavor: Flavor) -> Result<KCoverResult> {
    let all: Vec<usize> = (0..ns.len()).collect();
    // Both flavors are induced complexes, so restricting the complex on all
    // nodes equals rebuilding it on a subset.
    let full = build_flavor_on(ns, &all, flavor)?;
    let fence = ns.fence_ids();
    let mut remaining = ns.interior_ids();
    let mut layers = Vec::new();

    let residual_betti = loop {
        let mut members = remaining.clone();
        members.extend_from_slice(&fence);
        let s = full.restrict(&members);
        let b = IndexedComplex::new(&s).betti();
        if !b.is_connected_hole_free() {
            break b;
        }
        let outcome = reduce(&s, &fence)?;
        let layer: Vec<usize> = outcome
            .kept
            .iter()
            .copied()
            .filter(|id| remaining.binary_search(id).is_ok())
            .collect();
        if layer.is_empty() {
            break b;
        }
        remaining.retain(|id| outcome.discarded.binary_search(id).is_ok());
        layers.push(layer);
    };

    Ok(KCoverResult {
        k: layers.len(),
        flavor,
        layers,
        residual: remaining,
        residual_betti,
        fence_ids: fence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageFailure {
    pub x: F17,
    pub y: F17,
    pub layer: usize,
}

impl CoverageFailure {
    pub fn point(&self) -> Point2 {
        Point2::new(self.x.0, self.y.0)
    }
}

/// Grid-sampled check that every layer, together with the fence, covers the
/// open square, plus the least number of disks covering any sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageCertificate {
    pub grid_spacing: F17,
    pub min_multiplicity: usize,
    /// Least disk count over samples that no fence disk reaches; `None` when
    /// the fence covers every sample. Layers are disjoint away from the
    /// fence, so this is at least `k` whenever every layer covers.
    pub min_unfenced_multiplicity: Option<usize>,
    pub per_layer_ok: Vec<bool>,
    pub failures: Vec<CoverageFailure>,
}

impl CoverageCertificate {
    pub fn layers_ok(&self) -> bool {
        self.per_layer_ok.iter().all(|&ok| ok)
    }

    /// Every layer covers and no sample is covered by fewer than `k` disks.
    pub fn passes(&self, k: usize) -> bool {
        self.layers_ok() && self.min_multiplicity >= k
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Lattice coordinates `i * spacing` strictly inside `(0, L)`.
pub fn grid_coordinates(domain_side: f64, spacing: f64) -> Vec<f64> {
    let limit = domain_side * (1.0 - 1e-12);
    (1..)
        .map(|i| i as f64 * spacing)
        .take_while(|&c| c < limit)
        .collect()
}

/// Default certification grid: `r / 25`.
pub fn default_grid_spacing(radius: f64) -> f64 {
    radius / 25.0
}

pub fn certify(
    ns: &NodeSet,
    result: &KCoverResult,
    grid_spacing: f64,
) -> Result<CoverageCertificate> {
    if !(grid_spacing > 0.0 && grid_spacing.is_finite()) {
        return Err(crate::Error::InvalidArgument(format!(
            "grid spacing must be positive, got {grid_spacing}"
        )));
    }
    let r = ns.radius();
    let k = result.layers.len();
    let mut layer_of: Vec<Option<usize>> = vec![None; ns.len()];
    for (i, layer) in result.layers.iter().enumerate() {
        for &id in layer {
            layer_of[id] = Some(i);
        }
    }
    let is_fence: Vec<bool> = ns
        .nodes()
        .iter()
        .map(|n| n.role == crate::Role::Fence)
        .collect();
    let coords = grid_coordinates(ns.domain_side(), grid_spacing);

    // One column of samples per task: nodes within `r` of the column in x
    // are the only candidates.
    let columns: Vec<(usize, Option<usize>, Vec<CoverageFailure>)> = coords
        .par_iter()
        .map(|&x| {
            let nearby: Vec<&crate::Node> = ns
                .nodes()
                .iter()
                .filter(|n| (n.position.x - x).abs() <= r)
                .collect();
            let mut min_mult = usize::MAX;
            let mut min_unfenced: Option<usize> = None;
            let mut failures = Vec::new();
            let mut hit = vec![false; k];
            for &y in &coords {
                let p = Point2::new(x, y);
                let mut multiplicity = 0;
                let mut fenced = false;
                hit.iter_mut().for_each(|h| *h = false);
                for node in nearby.iter().filter(|n| covers(n.position, r, p)) {
                    multiplicity += 1;
                    fenced |= is_fence[node.id];
                    if let Some(i) = layer_of[node.id] {
                        hit[i] = true;
                    }
                }
                min_mult = min_mult.min(multiplicity);
                if !fenced {
                    min_unfenced = Some(min_unfenced.map_or(multiplicity, |m| m.min(multiplicity)));
                    failures.extend((0..k).filter(|&i| !hit[i]).map(|layer| CoverageFailure {
                        x: F17(x),
                        y: F17(y),
                        layer,
                    }));
                }
            }
            (min_mult, min_unfenced, failures)
        })
        .collect();

    let min_multiplicity = columns
        .iter()
        .map(|c| c.0)
        .min()
        .filter(|&m| m != usize::MAX)
        .unwrap_or(ns.len());
    let min_unfenced_multiplicity = columns.iter().filter_map(|c| c.1).min();
    let failures: Vec<CoverageFailure> = columns.into_iter().flat_map(|c| c.2).collect();
    let mut per_layer_ok = vec![true; k];
    for f in &failures {
        per_layer_ok[f.layer] = false;
    }
    Ok(CoverageCertificate {
        grid_spacing: F17(grid_spacing),
        min_multiplicity,
        min_unfenced_multiplicity,
        per_layer_ok,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_fence;

    #[test]
    fn empty_interior_gives_zero() {
        let ns = NodeSet::new(&[], &make_fence(10.0, 2.5).unwrap(), 2.5, 10.0).unwrap();
        for flavor in Flavor::ALL {
            let res = k_coverage(&ns, flavor).unwrap();
            assert_eq!(res.k, 0);
            assert!(res.layers.is_empty());
            assert!(res.residual.is_empty());
            let cert = certify(&ns, &res, 0.1).unwrap();
            assert!(cert.per_layer_ok.is_empty() && cert.failures.is_empty());
        }
    }

    #[test]
    fn self_filling_fence_does_not_loop() {
        // A fence that fills its own square: the first layer would be empty.
        let ns = NodeSet::new(
            &[Point2::new(1.0, 1.0)],
            &make_fence(2.0, 1.0).unwrap(),
            1.5,
            2.0,
        )
        .unwrap();
        let res = k_coverage(&ns, Flavor::Rips).unwrap();
        assert_eq!(res.k, 0);
        assert_eq!(res.residual, vec![0]);
        assert_eq!(res.residual_betti, BettiPair::new(1, 0));
    }

    #[test]
    fn grid_excludes_boundary() {
        let g = grid_coordinates(10.0, 0.1);
        assert_eq!(g.len(), 99);
        assert!(g[0] > 0.0 && *g.last().unwrap() < 10.0);
        assert_eq!(grid_coordinates(10.0, 2.5).len(), 3);
    }

    #[test]
    fn certificate_flags_missing_coverage() {
        // One node in the middle of a large square, fence far apart.
        let ns = NodeSet::new(
            &[Point2::new(5.0, 5.0)],
            &make_fence(10.0, 10.0).unwrap(),
            1.0,
            10.0,
        )
        .unwrap();
        let fake = KCoverResult {
            k: 1,
            flavor: Flavor::Cech,
            layers: vec![vec![0]],
            residual: vec![],
            residual_betti: BettiPair::new(1, 1),
            fence_ids: ns.fence_ids(),
        };
        let cert = certify(&ns, &fake, 0.5).unwrap();
        assert_eq!(cert.per_layer_ok, vec![false]);
        assert!(!cert.failures.is_empty());
        assert_eq!(cert.min_multiplicity, 0);
        assert_eq!(cert.min_unfenced_multiplicity, Some(0));
        assert!(!cert.passes(1));
        assert!(certify(&ns, &fake, 0.0).is_err());
    }

    #[test]
    fn result_json_layout() {
        let ns = NodeSet::new(&[], &make_fence(10.0, 10.0).unwrap(), 2.5, 10.0).unwrap();
        let res = k_coverage(&ns, Flavor::Rips).unwrap();
        assert_eq!(
            res.to_json(),
            r#"{"k":0,"flavor":"rips","layers":[],"residual":[],"residual_betti":[4,0],"fence_ids":[0,1,2,3]}"#
        );
    }
}
