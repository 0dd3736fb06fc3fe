//! Vietoris-Rips and Čech complexes truncated at dimension 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{miniball3_radius, NodeSet, Point2};
use crate::serial::F17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Rips,
    Cech,
}

impl Flavor {
    pub const ALL: [Flavor; 2] = [Flavor::Rips, Flavor::Cech];

    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Rips => "rips",
            Flavor::Cech => "cech",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rips" => Ok(Flavor::Rips),
            "cech" => Ok(Flavor::Cech),
            other => Err(Error::InvalidArgument(format!(
                "unknown flavor '{other}' (expected rips or cech)"
            ))),
        }
    }
}

pub type Edge = [usize; 2];
pub type Triangle = [usize; 3];

/// Vertices, edges and triangles over node ids, each simplex stored with
/// strictly increasing ids and each list sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    edges: Vec<Edge>,
    triangles: Vec<Triangle>,
    flavor: Flavor,
    scale: f64,
}

impl SimplicialComplex {
    /// Builds a complex from explicit simplices, canonicalising order and
    /// rejecting anything not closed under faces.
    pub fn from_simplices(
        flavor: Flavor,
        scale: f64,
        vertices: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = Edge>,
        triangles: impl IntoIterator<Item = Triangle>,
    ) -> Result<Self> {
        let mut vertices: Vec<usize> = vertices.into_iter().collect();
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        let mut triangles: Vec<Triangle> = triangles
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        triangles.sort_unstable();
        triangles.dedup();
        if edges.iter().any(|e| e[0] == e[1])
            || triangles.iter().any(|t| t[0] == t[1] || t[1] == t[2])
        {
            return Err(Error::InvalidArgument(
                "simplices must have distinct vertices".into(),
            ));
        }
        let c = Self {
            vertices,
            edges,
            triangles,
            flavor,
            scale,
        };
        if !c.is_closed() {
            return Err(Error::InvalidArgument(
                "simplex set is not closed under faces".into(),
            ));
        }
        Ok(c)
    }

    pub fn empty(flavor: Flavor, scale: f64) -> Self {
        Self {
            vertices: Vec::new(),
            edges: Vec::new(),
            triangles: Vec::new(),
            flavor,
            scale,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn contains_triangle(&self, t: Triangle) -> bool {
        self.triangles.binary_search(&t).is_ok()
    }

    /// Every edge's endpoints and every triangle's edges are present.
    pub fn is_closed(&self) -> bool {
        let edges_ok = self
            .edges
            .iter()
            .all(|&[a, b]| a < b && self.contains_vertex(a) && self.contains_vertex(b));
        let tris_ok = self.triangles.iter().all(|&[a, b, c]| {
            a < b
                && b < c
                && self.contains_edge([a, b])
                && self.contains_edge([a, c])
                && self.contains_edge([b, c])
        });
        edges_ok && tris_ok
    }

    /// Removes `v` together with every simplex containing it.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        if !self.contains_vertex(v) {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} is not in the complex"
            )));
        }
        Ok(Self {
            vertices: self.vertices.iter().copied().filter(|&x| x != v).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| !e.contains(&v))
                .collect(),
            triangles: self
                .triangles
                .iter()
                .copied()
                .filter(|t| !t.contains(&v))
                .collect(),
            flavor: self.flavor,
            scale: self.scale,
        })
    }

    /// The full subcomplex induced on `keep`. Ids absent from the complex
    /// are ignored.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut mask = vec![false; self.vertices.last().map_or(0, |&v| v + 1)];
        for &v in keep {
            if v < mask.len() {
                mask[v] = true;
            }
        }
        let alive = |v: &usize| mask[*v];
        Self {
            vertices: self.vertices.iter().copied().filter(alive).collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| e.iter().all(alive))
                .collect(),
            triangles: self
                .triangles
                .iter()
                .copied()
                .filter(|t| t.iter().all(alive))
                .collect(),
            flavor: self.flavor,
            scale: self.scale,
        }
    }

    /// Number of triangles containing each vertex.
    pub fn triangle_degrees(&self) -> HashMap<usize, usize> {
        let mut deg: HashMap<usize, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for t in &self.triangles {
            for v in t {
                *deg.get_mut(v).expect("closed complex") += 1;
            }
        }
        deg
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            flavor: Flavor,
            scale: F17,
            vertices: &'a [usize],
            edges: &'a [Edge],
            triangles: &'a [Triangle],
        }
        serde_json::to_string(&Dump {
            flavor: self.flavor,
            scale: F17(self.scale),
            vertices: &self.vertices,
            edges: &self.edges,
            triangles: &self.triangles,
        })
        .expect("complex serializes")
    }
}

/// True iff every simplex of `a` is a simplex of `b`. Flavor and scale are
/// not compared.
pub fn is_subcomplex(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    a.vertices.iter().all(|&v| b.contains_vertex(v))
        && a.edges.iter().all(|&e| b.contains_edge(e))
        && a.triangles.iter().all(|&t| b.contains_triangle(t))
}

/// Vietoris-Rips complex: edges between nodes strictly closer than
/// `epsilon`, triangles on every 3-clique.
pub fn build_rips(ns: &NodeSet, epsilon: f64) -> Result<SimplicialComplex> {
    let ids: Vec<usize> = (0..ns.len()).collect();
    build_rips_on(ns, &ids, epsilon)
}

/// Vietoris-Rips complex on the nodes listed in `ids`.
pub fn build_rips_on(ns: &NodeSet, ids: &[usize], epsilon: f64) -> Result<SimplicialComplex> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Rips scale must be positive, got {epsilon}"
        )));
    }
    let eps2 = epsilon * epsilon;
    Ok(build(
        ns,
        ids,
        Flavor::Rips,
        epsilon,
        epsilon,
        |p, q| p.dist2(q) < eps2,
        |_, _, _| true,
    ))
}

/// Čech complex of closed radius-`r` disks: an edge when two disks meet
/// (distance `<= 2r`), a triangle when three disks share a point.
pub fn build_cech(ns: &NodeSet, r: f64) -> Result<SimplicialComplex> {
    let ids: Vec<usize> = (0..ns.len()).collect();
    build_cech_on(ns, &ids, r)
}

/// Čech complex on the nodes listed in `ids`.
pub fn build_cech_on(ns: &NodeSet, ids: &[usize], r: f64) -> Result<SimplicialComplex> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Čech radius must be positive, got {r}"
        )));
    }
    let reach2 = 4.0 * r * r;
    Ok(build(
        ns,
        ids,
        Flavor::Cech,
        r,
        2.0 * r,
        |p, q| p.dist2(q) <= reach2,
        |a, b, c| miniball3_radius(a, b, c) <= r,
    ))
}

/// The complex the k-coverage loop uses for a flavor: `R_{2r}` or `C_r`.
pub fn build_flavor_on(ns: &NodeSet, ids: &[usize], flavor: Flavor) -> Result<SimplicialComplex> {
    let r = ns.radius();
    match flavor {
        Flavor::Rips => build_rips_on(ns, ids, 2.0 * r),
        Flavor::Cech => build_cech_on(ns, ids, r),
    }
}

fn build(
    ns: &NodeSet,
    ids: &[usize],
    flavor: Flavor,
    scale: f64,
    reach: f64,
    edge_ok: impl Fn(Point2, Point2) -> bool,
    triangle_ok: impl Fn(Point2, Point2, Point2) -> bool,
) -> SimplicialComplex {
    let mut vertices: Vec<usize> = ids.to_vec();
    vertices.sort_unstable();
    vertices.dedup();

    // Uniform buckets of side `reach`: any edge joins the same or an
    // adjacent cell.
    let cell = |p: Point2| ((p.x / reach).floor() as i64, (p.y / reach).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for &v in &vertices {
        grid.entry(cell(ns.position(v))).or_default().push(v);
    }

    // Forward adjacency: neighbours with a larger id, sorted.
    let mut upper: HashMap<usize, Vec<usize>> = HashMap::with_capacity(vertices.len());
    let mut edges = Vec::new();
    for &v in &vertices {
        let p = ns.position(v);
        let (cx, cy) = cell(p);
        let mut nbrs = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    nbrs.extend(
                        bucket
                            .iter()
                            .copied()
                            .filter(|&w| w > v && edge_ok(p, ns.position(w))),
                    );
                }
            }
        }
        nbrs.sort_unstable();
        edges.extend(nbrs.iter().map(|&w| [v, w]));
        upper.insert(v, nbrs);
    }

    let mut triangles = Vec::new();
    for &[a, b] in &edges {
        let (na, nb) = (&upper[&a], &upper[&b]);
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            match na[i].cmp(&nb[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let c = na[i];
                    if triangle_ok(ns.position(a), ns.position(b), ns.position(c)) {
                        triangles.push([a, b, c]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    triangles.sort_unstable();

    SimplicialComplex {
        vertices,
        edges,
        triangles,
        flavor,
        scale,
    }
}
