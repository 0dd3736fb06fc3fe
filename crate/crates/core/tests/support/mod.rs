//! Independent reference implementations used by the integration tests and
//! the acceptance suite. Nothing here shares code with the library beyond
//! its public data types.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use kcoverage::{NodeSet, Point2, SimplicialComplex};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense integer matrix, row-major.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// Rank of an integer matrix via Smith-normal-form diagonalisation: pivot on
/// the smallest nonzero entry, clear its row and column with Euclidean
/// steps, repeat. The rank over Q is the number of nonzero diagonal entries.
pub fn snf_rank(mut a: IntMatrix) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    let (head, tail) = a.split_at_mut(i);
                    for (x, p) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                        *x -= &q * p;
                    }
                    if !a[i][t].is_zero() {
                        // Remainder smaller than the pivot: make it the pivot.
                        a.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }
    t
}

/// Oriented boundary matrices with `±1` entries: `∂[a,b] = b − a` and
/// `∂[a,b,c] = [b,c] − [a,c] + [a,b]`.
pub fn oriented_boundaries(s: &SimplicialComplex) -> (IntMatrix, IntMatrix) {
    let v = s.vertices();
    let e = s.edges();
    let vpos = |x: usize| v.binary_search(&x).unwrap();
    let epos = |x: [usize; 2]| e.binary_search(&x).unwrap();
    let mut d1 = vec![vec![BigInt::zero(); e.len()]; v.len()];
    for (j, &[a, b]) in e.iter().enumerate() {
        d1[vpos(a)][j] = BigInt::from(-1);
        d1[vpos(b)][j] = BigInt::from(1);
    }
    let mut d2 = vec![vec![BigInt::zero(); s.triangles().len()]; e.len()];
    for (j, &[a, b, c]) in s.triangles().iter().enumerate() {
        d2[epos([b, c])][j] = BigInt::from(1);
        d2[epos([a, c])][j] = BigInt::from(-1);
        d2[epos([a, b])][j] = BigInt::from(1);
    }
    (d1, d2)
}

/// Rational Betti numbers `(β0, β1)` from the integer boundary matrices.
pub fn rational_betti(s: &SimplicialComplex) -> (usize, usize) {
    let (d1, d2) = oriented_boundaries(s);
    let r1 = if s.edges().is_empty() {
        0
    } else {
        snf_rank(d1)
    };
    let r2 = if s.triangles().is_empty() {
        0
    } else {
        snf_rank(d2)
    };
    (s.vertices().len() - r1, s.edges().len() - r1 - r2)
}

/// Connected components by breadth-first search over the 1-skeleton.
pub fn bfs_components(s: &SimplicialComplex) -> usize {
    let v = s.vertices();
    let mut adj = vec![Vec::new(); v.len()];
    for &[a, b] in s.edges() {
        let (ia, ib) = (v.binary_search(&a).unwrap(), v.binary_search(&b).unwrap());
        adj[ia].push(ib);
        adj[ib].push(ia);
    }
    let mut seen = vec![false; v.len()];
    let mut components = 0;
    for start in 0..v.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    components
}

pub type Simplices = (BTreeSet<[usize; 2]>, BTreeSet<[usize; 3]>);

/// Rips complex by exhaustive pair and triple enumeration (strict `< eps`).
pub fn brute_rips(ns: &NodeSet, eps: f64) -> Simplices {
    let n = ns.len();
    let close = |a: usize, b: usize| ns.position(a).dist(ns.position(b)) < eps;
    let mut edges = BTreeSet::new();
    let mut triangles = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if !close(a, b) {
                continue;
            }
            edges.insert([a, b]);
            for c in b + 1..n {
                if close(a, c) && close(b, c) {
                    triangles.insert([a, b, c]);
                }
            }
        }
    }
    (edges, triangles)
}

/// Smallest radius of a disk containing three points, found by trying every
/// candidate disk (three diametral disks and the circumdisk) and keeping the
/// smallest that contains all three points.
pub fn enclosing_radius(p: [Point2; 3]) -> f64 {
    let contains = |cx: f64, cy: f64, rad: f64| {
        p.iter().all(|q| {
            ((q.x - cx).powi(2) + (q.y - cy).powi(2)).sqrt() <= rad * (1.0 + 1e-12) + 1e-15
        })
    };
    let mut best = f64::INFINITY;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (cx, cy) = ((p[i].x + p[j].x) / 2.0, (p[i].y + p[j].y) / 2.0);
        let rad = p[i].dist(p[j]) / 2.0;
        if contains(cx, cy, rad) {
            best = best.min(rad);
        }
    }
    let (ax, ay, bx, by, cx, cy) = (p[0].x, p[0].y, p[1].x, p[1].y, p[2].x, p[2].y);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d.abs() > 1e-300 {
        let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
        let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
        let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
        let rad = ((ax - ux).powi(2) + (ay - uy).powi(2)).sqrt();
        if contains(ux, uy, rad) {
            best = best.min(rad);
        }
    }
    best
}

/// Čech complex of closed radius-`r` disks by exhaustive enumeration.
pub fn brute_cech(ns: &NodeSet, r: f64) -> Simplices {
    let n = ns.len();
    let meet = |a: usize, b: usize| ns.position(a).dist(ns.position(b)) <= 2.0 * r;
    let mut edges = BTreeSet::new();
    let mut triangles = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            if !meet(a, b) {
                continue;
            }
            edges.insert([a, b]);
            for c in b + 1..n {
                if meet(a, c)
                    && meet(b, c)
                    && enclosing_radius([ns.position(a), ns.position(b), ns.position(c)]) <= r
                {
                    triangles.insert([a, b, c]);
                }
            }
        }
    }
    (edges, triangles)
}

pub fn simplices_of(s: &SimplicialComplex) -> Simplices {
    (
        s.edges().iter().copied().collect(),
        s.triangles().iter().copied().collect(),
    )
}

/// `n` uniform interior points in the open square, no fence.
pub fn uniform_nodes(rng: &mut ChaCha8Rng, n: usize, side: f64, radius: f64) -> NodeSet {
    let pts: Vec<Point2> = (0..n)
        .map(|_| Point2::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect();
    NodeSet::new(&pts, &[], radius, side).unwrap()
}

/// Sample standard deviation over `sqrt(n)`.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
