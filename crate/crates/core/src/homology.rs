//! Betti numbers of 2-dimensional complexes over GF(2).
//!
//! Two evaluators live here. [`betti`] builds the boundary matrices and
//! takes their ranks by bit-packed elimination. [`IndexedComplex`] answers
//! the same question for many vertex subsets of one complex, which is what
//! the reduction loop asks; it works in cycle-space coordinates and is
//! cross-checked against [`betti`] in the tests.

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A dense matrix over GF(2), stored column-major with 64 rows per word.
#[derive(Clone, PartialEq, Eq)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = rows.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            data: vec![0; words * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit != 0);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols);
        self.data[col * self.words + row / 64] >> (row % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols);
        let w = &mut self.data[col * self.words + row / 64];
        let bit = 1u64 << (row % 64);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn column(&self, col: usize) -> &[u64] {
        &self.data[col * self.words..(col + 1) * self.words]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, rhs: &GF2Matrix) -> Result<GF2Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = GF2Matrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..rhs.rows {
                if rhs.get(k, j) {
                    let src = self.column(k).to_vec();
                    let dst = &mut out.data[j * out.words..(j + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        gf2_rank(self)
    }
}

/// Rank over GF(2) by column elimination against a table of pivot columns
/// keyed by their lowest set row.
pub fn gf2_rank(m: &GF2Matrix) -> usize {
    let mut eliminator = Eliminator::new(m.rows);
    for c in 0..m.cols {
        eliminator.insert(m.column(c).to_vec());
    }
    eliminator.rank
}

struct Eliminator {
    words: usize,
    pivots: Vec<Option<Vec<u64>>>,
    rank: usize,
}

impl Eliminator {
    fn new(rows: usize) -> Self {
        Self {
            words: rows.div_ceil(64),
            pivots: vec![None; rows],
            rank: 0,
        }
    }

    /// Reduces `col` against the pivots; keeps it if independent.
    fn insert(&mut self, mut col: Vec<u64>) -> bool {
        debug_assert_eq!(col.len(), self.words);
        while let Some(low) = lowest_set(&col) {
            match &self.pivots[low] {
                Some(p) => {
                    for (c, w) in col.iter_mut().zip(p) {
                        *c ^= w;
                    }
                }
                None => {
                    self.pivots[low] = Some(col);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

fn lowest_set(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

/// `(beta0, beta1)`; serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", from = "[usize; 2]")]
pub struct BettiPair {
    pub beta0: usize,
    pub beta1: usize,
}

impl BettiPair {
    pub const fn new(beta0: usize, beta1: usize) -> Self {
        Self { beta0, beta1 }
    }

    /// One component and no holes.
    pub fn is_connected_hole_free(self) -> bool {
        self.beta0 == 1 && self.beta1 == 0
    }
}

impl From<BettiPair> for [usize; 2] {
    fn from(b: BettiPair) -> Self {
        [b.beta0, b.beta1]
    }
}

impl From<[usize; 2]> for BettiPair {
    fn from([beta0, beta1]: [usize; 2]) -> Self {
        Self { beta0, beta1 }
    }
}

/// Matrix of the boundary map in dimension `k` (1 or 2), rows and columns
/// in sorted simplex order.
pub fn boundary_matrix(s: &SimplicialComplex, k: usize) -> Result<GF2Matrix> {
    match k {
        1 => {
            let mut m = GF2Matrix::zeros(s.vertices().len(), s.edges().len());
            for (c, e) in s.edges().iter().enumerate() {
                for v in e {
                    let r = s.vertices().binary_search(v).expect("closed complex");
                    m.set(r, c, true);
                }
            }
            Ok(m)
        }
        2 => {
            let mut m = GF2Matrix::zeros(s.edges().len(), s.triangles().len());
            for (c, &[a, b, d]) in s.triangles().iter().enumerate() {
                for e in [[b, d], [a, d], [a, b]] {
                    let r = s.edges().binary_search(&e).expect("closed complex");
                    m.set(r, c, true);
                }
            }
            Ok(m)
        }
        _ => Err(Error::InvalidArgument(format!(
            "boundary map only defined here for k in {{1, 2}}, got {k}"
        ))),
    }
}

/// Betti numbers from boundary-matrix ranks:
/// `beta0 = |V| - rank d1`, `beta1 = |E| - rank d1 - rank d2`.
///
/// Panics if the boundary matrices violate `d1 * d2 = 0`.
pub fn betti(s: &SimplicialComplex) -> BettiPair {
    let d1 = boundary_matrix(s, 1).expect("k = 1");
    let d2 = boundary_matrix(s, 2).expect("k = 2");
    assert!(
        d1.mul(&d2).expect("conformable").is_zero(),
        "boundary of a boundary is nonzero"
    );
    let r1 = d1.rank();
    let r2 = d2.rank();
    BettiPair {
        beta0: s.vertices().len() - r1,
        beta1: s.edges().len() - r1 - r2,
    }
}

/// Connected components of the 1-skeleton, by union-find.
pub fn count_components(s: &SimplicialComplex) -> usize {
    let n = s.vertices().len();
    let mut uf = UnionFind::<usize>::new(n);
    let mut components = n;
    for [a, b] in s.edges() {
        let ia = s.vertices().binary_search(a).expect("closed complex");
        let ib = s.vertices().binary_search(b).expect("closed complex");
        if uf.union(ia, ib) {
            components -= 1;
        }
    }
    components
}

/// A complex in local-index form, for repeated Betti queries over vertex
/// subsets (the full subcomplex induced on the alive vertices).
#[derive(Debug, Clone)]
pub struct IndexedComplex {
    ids: Vec<usize>,
    edges: Vec<[u32; 2]>,
    /// Vertex-to-(neighbour, edge) adjacency in CSR form.
    adj_start: Vec<u32>,
    adj: Vec<(u32, u32)>,
    tri_vertices: Vec<[u32; 3]>,
    tri_edges: Vec<[u32; 3]>,
}

impl IndexedComplex {
    pub fn new(s: &SimplicialComplex) -> Self {
        let ids = s.vertices().to_vec();
        let local = |v: &usize| ids.binary_search(v).expect("closed complex") as u32;
        let edges: Vec<[u32; 2]> = s
            .edges()
            .iter()
            .map(|[a, b]| [local(a), local(b)])
            .collect();
        let edge_index =
            |a: usize, b: usize| s.edges().binary_search(&[a, b]).expect("closed complex") as u32;
        let tri_vertices = s
            .triangles()
            .iter()
            .map(|[a, b, c]| [local(a), local(b), local(c)])
            .collect();
        let tri_edges = s
            .triangles()
            .iter()
            .map(|&[a, b, c]| [edge_index(a, b), edge_index(a, c), edge_index(b, c)])
            .collect();

        let mut degree = vec![0u32; ids.len() + 1];
        for &[a, b] in &edges {
            degree[a as usize + 1] += 1;
            degree[b as usize + 1] += 1;
        }
        for i in 1..degree.len() {
            degree[i] += degree[i - 1];
        }
        let adj_start = degree.clone();
        let mut fill = degree;
        let mut adj = vec![(0, 0); 2 * edges.len()];
        for (e, &[a, b]) in edges.iter().enumerate() {
            adj[fill[a as usize] as usize] = (b, e as u32);
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = (a, e as u32);
            fill[b as usize] += 1;
        }
        Self {
            ids,
            edges,
            adj_start,
            adj,
            tri_vertices,
            tri_edges,
        }
    }

    /// Node ids in local-index order.
    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn local_index(&self, id: usize) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Triangle count per local vertex among alive triangles.
    pub fn triangle_degrees(&self, alive: &[bool]) -> Vec<usize> {
        let mut deg = vec![0; self.ids.len()];
        for t in &self.tri_vertices {
            if t.iter().all(|&v| alive[v as usize]) {
                for &v in t {
                    deg[v as usize] += 1;
                }
            }
        }
        deg
    }

    pub fn betti(&self) -> BettiPair {
        self.betti_masked(&vec![true; self.ids.len()])
    }

    /// Betti numbers of the subcomplex induced on vertices with `alive[i]`.
    ///
    /// A BFS spanning forest gives beta0 and identifies the cycle space with
    /// the coordinates of the non-tree edges. Triangle boundaries are then
    /// eliminated in those coordinates: a triangle with one remaining
    /// coordinate spans that unit vector, which is removed from every other
    /// triangle; whatever survives the peeling goes through dense
    /// elimination.
    pub fn betti_masked(&self, alive: &[bool]) -> BettiPair {
        assert_eq!(alive.len(), self.ids.len());
        let n = self.ids.len();
        let edge_alive = |e: usize| {
            let [a, b] = self.edges[e];
            alive[a as usize] && alive[b as usize]
        };

        let mut seen = vec![false; n];
        let mut tree = vec![false; self.edges.len()];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for root in 0..n {
            if !alive[root] || seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let span = self.adj_start[v] as usize..self.adj_start[v + 1] as usize;
                for &(w, e) in &self.adj[span] {
                    let w = w as usize;
                    if alive[w] && !seen[w] {
                        seen[w] = true;
                        tree[e as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
        }

        const NONE: u32 = u32::MAX;
        let mut coord = vec![NONE; self.edges.len()];
        let mut cycle_dim = 0u32;
        for e in 0..self.edges.len() {
            if edge_alive(e) && !tree[e] {
                coord[e] = cycle_dim;
                cycle_dim += 1;
            }
        }
        let betti = |rank2: usize| BettiPair::new(components, cycle_dim as usize - rank2);
        if cycle_dim == 0 {
            return betti(0);
        }

        // Alive triangles with their cycle coordinates.
        let mut tris: Vec<[u32; 3]> = Vec::new();
        let mut remaining: Vec<u8> = Vec::new();
        let mut incidence_count = vec![0u32; cycle_dim as usize + 1];
        for (t, verts) in self.tri_vertices.iter().enumerate() {
            if !verts.iter().all(|&v| alive[v as usize]) {
                continue;
            }
            let cs = self.tri_edges[t].map(|e| coord[e as usize]);
            let k = cs.iter().filter(|&&c| c != NONE).count();
            if k == 0 {
                continue;
            }
            for &c in cs.iter().filter(|&&c| c != NONE) {
                incidence_count[c as usize + 1] += 1;
            }
            tris.push(cs);
            remaining.push(k as u8);
        }
        for i in 1..incidence_count.len() {
            incidence_count[i] += incidence_count[i - 1];
        }
        let inc_start = incidence_count.clone();
        let mut fill = incidence_count;
        let mut incidence = vec![0u32; *inc_start.last().unwrap() as usize];
        for (t, cs) in tris.iter().enumerate() {
            for &c in cs.iter().filter(|&&c| c != NONE) {
                incidence[fill[c as usize] as usize] = t as u32;
                fill[c as usize] += 1;
            }
        }

        let mut killed = vec![false; cycle_dim as usize];
        let mut n_killed = 0usize;
        let mut work: Vec<usize> = (0..tris.len()).filter(|&t| remaining[t] == 1).collect();
        while let Some(t) = work.pop() {
            if remaining[t] != 1 {
                continue;
            }
            let c = tris[t]
                .iter()
                .copied()
                .find(|&c| c != NONE && !killed[c as usize])
                .expect("one live coordinate") as usize;
            killed[c] = true;
            n_killed += 1;
            if n_killed == cycle_dim as usize {
                return betti(n_killed);
            }
            for &u in &incidence[inc_start[c] as usize..inc_start[c + 1] as usize] {
                let u = u as usize;
                remaining[u] -= 1;
                if remaining[u] == 1 {
                    work.push(u);
                }
            }
        }

        // Dense elimination on what the peeling left behind.
        let mut residual_index = vec![NONE; cycle_dim as usize];
        let mut residual_dim = 0usize;
        for (c, &k) in killed.iter().enumerate() {
            if !k {
                residual_index[c] = residual_dim as u32;
                residual_dim += 1;
            }
        }
        let mut eliminator = Eliminator::new(residual_dim);
        for (t, cs) in tris.iter().enumerate() {
            if remaining[t] < 2 {
                continue;
            }
            let mut col = vec![0u64; eliminator.words];
            for &c in cs.iter().filter(|&&c| c != NONE && !killed[c as usize]) {
                let r = residual_index[c as usize] as usize;
                col[r / 64] ^= 1 << (r % 64);
            }
            eliminator.insert(col);
            if eliminator.rank == residual_dim {
                break;
            }
        }
        betti(n_killed + eliminator.rank)
    }
}
