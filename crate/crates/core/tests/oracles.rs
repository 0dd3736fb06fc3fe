//! Sanity checks for the reference implementations themselves, so a bug in
//! an oracle cannot silently agree with a bug in the library.

mod support;

use kcoverage::{betti, Flavor, Point2, SimplicialComplex};
use num_bigint::BigInt;
use support::*;

fn ints(rows: &[&[i64]]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn complex(edges: &[[usize; 2]], triangles: &[[usize; 3]]) -> SimplicialComplex {
    let vertices = edges.iter().flatten().copied();
    SimplicialComplex::from_simplices(
        Flavor::Rips,
        1.0,
        vertices,
        edges.to_vec(),
        triangles.to_vec(),
    )
    .unwrap()
}

#[test]
fn snf_rank_on_known_matrices() {
    assert_eq!(snf_rank(ints(&[&[2, 4], &[3, 6]])), 1);
    assert_eq!(snf_rank(ints(&[&[2, 0], &[0, 3]])), 2);
    assert_eq!(snf_rank(ints(&[&[0, 0, 0]])), 0);
    assert_eq!(
        snf_rank(ints(&[&[6, 10, 15], &[0, 0, 0], &[12, 20, 30]])),
        1
    );
    // Over GF(2) this matrix has rank 1; over Q it is invertible.
    assert_eq!(snf_rank(ints(&[&[1, 1], &[1, -1]])), 2);
}

#[test]
fn rational_betti_on_small_shapes() {
    let square = complex(&[[0, 1], [1, 2], [2, 3], [0, 3]], &[]);
    assert_eq!(rational_betti(&square), (1, 1));
    let filled = complex(&[[0, 1], [1, 2], [0, 2]], &[[0, 1, 2]]);
    assert_eq!(rational_betti(&filled), (1, 0));
    let two_bits = complex(&[[0, 1], [2, 3]], &[]);
    assert_eq!(rational_betti(&two_bits), (2, 0));
    assert_eq!(bfs_components(&two_bits), 2);
}

#[test]
fn projective_plane_separates_the_coefficient_fields() {
    // Six-vertex real projective plane: H1 is Z/2, invisible over Q but a
    // genuine class over GF(2). The oracle must tell the fields apart.
    let tris: [[usize; 3]; 10] = [
        [0, 1, 3],
        [0, 1, 4],
        [0, 2, 3],
        [0, 2, 5],
        [0, 4, 5],
        [1, 2, 4],
        [1, 2, 5],
        [1, 3, 5],
        [2, 3, 4],
        [3, 4, 5],
    ];
    let mut edges: Vec<[usize; 2]> = tris
        .iter()
        .flat_map(|&[a, b, c]| [[a, b], [a, c], [b, c]])
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let rp2 = complex(&edges, &tris);
    assert_eq!(rational_betti(&rp2), (1, 0));
    assert_eq!(betti(&rp2).beta1, 1);
}

#[test]
fn enclosing_radius_cases() {
    let right = [
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(0.0, 2.0),
    ];
    assert!((enclosing_radius(right) - 2f64.sqrt()).abs() < 1e-12);
    let obtuse = [
        Point2::new(0.0, 0.0),
        Point2::new(4.0, 0.0),
        Point2::new(2.0, 0.5),
    ];
    assert!((enclosing_radius(obtuse) - 2.0).abs() < 1e-12);
    let equilateral = [
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(0.5, 3f64.sqrt() / 2.0),
    ];
    assert!((enclosing_radius(equilateral) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
}
