//! Node placement and the disk predicates behind complex construction.
//!
//! Coverage uses closed disks: a point at distance exactly `r` from a node
//! is covered by it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::serial::F17;

/// Identifier recorded in node-set metadata for every seeded draw.
pub const GENERATOR: &str = "rand_chacha::ChaCha8Rng/seed_from_u64";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point2) -> f64 {
        self.dist2(other).sqrt()
    }

    fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

/// Closed-disk membership: `|center - p| <= r`.
pub fn covers(center: Point2, r: f64, p: Point2) -> bool {
    center.dist2(p) <= r * r
}

/// Radius of the smallest circle enclosing three points.
///
/// Three closed disks of a common radius `r` share a point exactly when this
/// radius is at most `r`.
pub fn miniball3_radius(a: Point2, b: Point2, c: Point2) -> f64 {
    let ab = a.dist2(b);
    let bc = b.dist2(c);
    let ca = c.dist2(a);
    let (p, q, third, longest) = if ab >= bc && ab >= ca {
        (a, b, c, ab)
    } else if bc >= ca {
        (b, c, a, bc)
    } else {
        (c, a, b, ca)
    };
    let half2 = 0.25 * longest;
    // Diametral circle of the longest side, with a relative slack for the
    // right-angle case where the third point sits on the circle.
    if p.midpoint(q).dist2(third) <= half2 * (1.0 + 4.0 * f64::EPSILON) {
        return half2.sqrt();
    }
    let cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    (ab * bc * ca).sqrt() / (2.0 * cross.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Interior,
    Fence,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    pub position: Point2,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSetMeta {
    pub seed: Option<u64>,
    pub generator: String,
}

impl Default for NodeSetMeta {
    fn default() -> Self {
        Self {
            seed: None,
            generator: GENERATOR.to_string(),
        }
    }
}

/// Network nodes in the square `[0, L]^2`, all sharing one coverage radius.
///
/// Ids are contiguous from zero. Interior nodes come first, fence nodes after.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    nodes: Vec<Node>,
    radius: f64,
    domain_side: f64,
    meta: NodeSetMeta,
}

impl NodeSet {
    pub fn new(
        interior: &[Point2],
        fence: &[Point2],
        radius: f64,
        domain_side: f64,
    ) -> Result<Self> {
        let nodes = interior
            .iter()
            .map(|&p| (p, Role::Interior))
            .chain(fence.iter().map(|&p| (p, Role::Fence)))
            .enumerate()
            .map(|(id, (position, role))| Node { id, position, role })
            .collect();
        let ns = Self {
            nodes,
            radius,
            domain_side,
            meta: NodeSetMeta::default(),
        };
        ns.validate()?;
        Ok(ns)
    }

    /// Attaches a coverage radius and fence to a sampled pattern.
    pub fn from_pattern(pattern: &PointPattern, fence: &[Point2], radius: f64) -> Result<Self> {
        let mut ns = Self::new(&pattern.points, fence, radius, pattern.domain_side)?;
        ns.meta.seed = Some(pattern.seed);
        Ok(ns)
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.meta.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        let side = self.domain_side;
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain side must be positive, got {side}"
            )));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let Point2 { x, y } = node.position;
            if node.id != i {
                return Err(Error::InvalidArgument(format!(
                    "node ids must be contiguous from 0; found {} at index {i}",
                    node.id
                )));
            }
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "node {i} has non-finite coordinates"
                )));
            }
            let ok = match node.role {
                Role::Interior => x > 0.0 && x < side && y > 0.0 && y < side,
                Role::Fence => {
                    let inside = (0.0..=side).contains(&x) && (0.0..=side).contains(&y);
                    inside && (x == 0.0 || x == side || y == 0.0 || y == side)
                }
            };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "{:?} node {i} at ({x}, {y}) is misplaced for side {side}",
                    node.role
                )));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn domain_side(&self) -> f64 {
        self.domain_side
    }

    pub fn meta(&self) -> &NodeSetMeta {
        &self.meta
    }

    pub fn position(&self, id: usize) -> Point2 {
        self.nodes[id].position
    }

    pub fn interior_ids(&self) -> Vec<usize> {
        self.ids_with(Role::Interior)
    }

    pub fn fence_ids(&self) -> Vec<usize> {
        self.ids_with(Role::Fence)
    }

    fn ids_with(&self, role: Role) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.role == role)
            .map(|n| n.id)
            .collect()
    }

    pub fn interior_points(&self) -> Vec<Point2> {
        self.points_with(Role::Interior)
    }

    pub fn fence_points(&self) -> Vec<Point2> {
        self.points_with(Role::Fence)
    }

    fn points_with(&self, role: Role) -> Vec<Point2> {
        self.nodes
            .iter()
            .filter(|n| n.role == role)
            .map(|n| n.position)
            .collect()
    }

    /// Same interior nodes with a different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        let mut ns = self.clone();
        ns.radius = radius;
        ns.validate()?;
        Ok(ns)
    }

    /// Same interior nodes with the fence replaced.
    pub fn with_fence(&self, fence: &[Point2]) -> Result<Self> {
        let ns = Self::new(
            &self.interior_points(),
            fence,
            self.radius,
            self.domain_side,
        )?;
        Ok(ns.with_seed(self.meta.seed))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&NodeSetJsonOut::from(self)).expect("node set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: NodeSetJsonIn = serde_json::from_str(text)?;
        let nodes = raw
            .nodes
            .into_iter()
            .map(|n| Node {
                id: n.id,
                position: Point2::new(n.x, n.y),
                role: n.role,
            })
            .collect();
        let ns = Self {
            nodes,
            radius: raw.radius,
            domain_side: raw.domain_side,
            meta: raw.meta.unwrap_or_default(),
        };
        ns.validate()?;
        Ok(ns)
    }
}

#[derive(Serialize)]
struct NodeJsonOut {
    id: usize,
    x: F17,
    y: F17,
    role: Role,
}

#[derive(Serialize)]
struct NodeSetJsonOut<'a> {
    radius: F17,
    domain_side: F17,
    nodes: Vec<NodeJsonOut>,
    meta: &'a NodeSetMeta,
}

impl<'a> From<&'a NodeSet> for NodeSetJsonOut<'a> {
    fn from(ns: &'a NodeSet) -> Self {
        Self {
            radius: F17(ns.radius),
            domain_side: F17(ns.domain_side),
            nodes: ns
                .nodes
                .iter()
                .map(|n| NodeJsonOut {
                    id: n.id,
                    x: F17(n.position.x),
                    y: F17(n.position.y),
                    role: n.role,
                })
                .collect(),
            meta: &ns.meta,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJsonIn {
    id: usize,
    x: f64,
    y: f64,
    role: Role,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeSetJsonIn {
    radius: f64,
    domain_side: f64,
    nodes: Vec<NodeJsonIn>,
    meta: Option<NodeSetMeta>,
}

/// Parameters of a (possibly thinned) Poisson draw on `[0, L]^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonConfig {
    pub intensity: f64,
    pub domain_side: f64,
    pub seed: u64,
    /// Exclusion distance for hard-core thinning; 0 disables it.
    pub hardcore_distance: f64,
}

impl PoissonConfig {
    pub fn new(intensity: f64, domain_side: f64, seed: u64) -> Self {
        Self {
            intensity,
            domain_side,
            seed,
            hardcore_distance: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.intensity > 0.0 && self.intensity.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "intensity must be positive, got {}",
                self.intensity
            )));
        }
        if !(self.domain_side > 0.0 && self.domain_side.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain side must be positive, got {}",
                self.domain_side
            )));
        }
        if self.hardcore_distance.is_nan() || self.hardcore_distance < 0.0 {
            return Err(Error::InvalidArgument(
                "hard-core distance must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Sampled interior positions, before a radius and fence are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    pub points: Vec<Point2>,
    pub domain_side: f64,
    pub seed: u64,
}

fn uniform_interior(rng: &mut ChaCha8Rng, side: f64) -> Point2 {
    // Open square: reject the (probability 2^-53) draws landing on the edge.
    loop {
        let x = rng.random::<f64>() * side;
        let y = rng.random::<f64>() * side;
        if x > 0.0 && y > 0.0 && x < side && y < side {
            return Point2::new(x, y);
        }
    }
}

fn poisson_points(cfg: &PoissonConfig, rng: &mut ChaCha8Rng) -> Vec<Point2> {
    let mean = cfg.intensity * cfg.domain_side * cfg.domain_side;
    let count = Poisson::new(mean)
        .expect("positive Poisson mean")
        .sample(rng) as usize;
    (0..count)
        .map(|_| uniform_interior(rng, cfg.domain_side))
        .collect()
}

/// Homogeneous Poisson process of intensity `cfg.intensity` on the square.
/// Ignores `hardcore_distance`.
pub fn sample_poisson(cfg: &PoissonConfig) -> Result<PointPattern> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(PointPattern {
        points: poisson_points(cfg, &mut rng),
        domain_side: cfg.domain_side,
        seed: cfg.seed,
    })
}

/// Matérn type II hard-core process: the Poisson draw of [`sample_poisson`]
/// with the same seed, thinned by independent uniform marks. A point is
/// deleted when some other point closer than `hardcore_distance` carries a
/// smaller mark.
pub fn sample_hardcore(cfg: &PoissonConfig) -> Result<PointPattern> {
    cfg.validate()?;
    let d = cfg.hardcore_distance;
    if d.is_nan() || d <= 0.0 {
        return Err(Error::InvalidArgument(
            "hard-core sampling needs a positive exclusion distance".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = poisson_points(cfg, &mut rng);
    let marks: Vec<f64> = (0..points.len()).map(|_| rng.random()).collect();
    let d2 = d * d;
    let beats = |i: usize, j: usize| (marks[j], j) < (marks[i], i);
    let kept = points
        .iter()
        .enumerate()
        .filter(|&(i, &p)| {
            !points
                .iter()
                .enumerate()
                .any(|(j, &q)| j != i && p.dist2(q) < d2 && beats(i, j))
        })
        .map(|(_, &p)| p)
        .collect();
    Ok(PointPattern {
        points: kept,
        domain_side: cfg.domain_side,
        seed: cfg.seed,
    })
}

/// Exactly `count` i.i.d. uniform points, or with `hardcore` set, up to
/// `count` points placed by sequential rejection so that no two are closer
/// than the exclusion distance.
pub fn sample_fixed_count(
    count: usize,
    domain_side: f64,
    seed: u64,
    hardcore: Option<f64>,
) -> Result<PointPattern> {
    if !(domain_side > 0.0 && domain_side.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "domain side must be positive, got {domain_side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    match hardcore {
        None => points.extend((0..count).map(|_| uniform_interior(&mut rng, domain_side))),
        Some(d) if d > 0.0 => {
            let d2 = d * d;
            let max_attempts = 10_000 * count.max(1);
            for _ in 0..max_attempts {
                if points.len() == count {
                    break;
                }
                let p = uniform_interior(&mut rng, domain_side);
                if points.iter().all(|q: &Point2| q.dist2(p) >= d2) {
                    points.push(p);
                }
            }
        }
        Some(d) => {
            return Err(Error::InvalidArgument(format!(
                "hard-core distance must be positive, got {d}"
            )));
        }
    }
    Ok(PointPattern {
        points,
        domain_side,
        seed,
    })
}

/// Fence points on the boundary of `[0, L]^2`: the four corners plus a
/// uniform subdivision of each side into `ceil(L / spacing)` segments,
/// listed counter-clockwise from the origin.
pub fn make_fence(domain_side: f64, spacing: f64) -> Result<Vec<Point2>> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "fence spacing must be positive, got {spacing}"
        )));
    }
    if !(domain_side > 0.0 && domain_side.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "domain side must be positive, got {domain_side}"
        )));
    }
    if spacing > domain_side {
        return Err(Error::InvalidArgument(format!(
            "fence spacing {spacing} exceeds domain side {domain_side}"
        )));
    }
    let segments = ((domain_side / spacing) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let step = domain_side / segments as f64;
    // Shared coordinate ladder keeps the output exactly symmetric under x <-> y.
    let ladder: Vec<f64> = (0..=segments)
        .map(|i| {
            if i == segments {
                domain_side
            } else {
                i as f64 * step
            }
        })
        .collect();
    let l = domain_side;
    let mut fence = Vec::with_capacity(4 * segments);
    fence.extend((0..segments).map(|i| Point2::new(ladder[i], 0.0)));
    fence.extend((0..segments).map(|i| Point2::new(l, ladder[i])));
    fence.extend((0..segments).map(|i| Point2::new(ladder[segments - i], l)));
    fence.extend((0..segments).map(|i| Point2::new(0.0, ladder[segments - i])));
    Ok(fence)
}
