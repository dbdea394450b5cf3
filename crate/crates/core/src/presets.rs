//! Named triangulations used by the examples, the CLI and the test-suite.

use crate::error::{Error, Result};
use crate::mesh::{build_mesh, Side, TriangulatedSurface};

pub const PRESET_NAMES: [&str; 5] = [
    "tetra_sphere",
    "icosahedron",
    "one_vertex_torus",
    "genus2_one_vertex",
    "flat_torus_16",
];

pub fn by_name(name: &str) -> Result<TriangulatedSurface> {
    match name {
        "tetra_sphere" => Ok(tetra_sphere()),
        "icosahedron" => Ok(icosahedron()),
        "one_vertex_torus" => Ok(one_vertex_torus()),
        "genus2_one_vertex" => Ok(genus2_one_vertex()),
        "flat_torus_16" => Ok(flat_torus_16()),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

pub fn all() -> Vec<(&'static str, TriangulatedSurface)> {
    PRESET_NAMES
        .iter()
        .map(|&n| (n, by_name(n).expect("preset table")))
        .collect()
}

pub fn tetra_sphere() -> TriangulatedSurface {
    build_mesh(&[[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]).expect("tetrahedron")
}

pub fn icosahedron() -> TriangulatedSurface {
    build_mesh(&[
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ])
    .expect("icosahedron")
}

/// The square torus cut along one diagonal: three loop edges, two faces.
pub fn one_vertex_torus() -> TriangulatedSurface {
    // face 0: bottom, right, diagonal; face 1: diagonal, top, left
    let gluing = [
        (Side::new(0, 0), Side::new(1, 1)),
        (Side::new(0, 1), Side::new(1, 2)),
        (Side::new(0, 2), Side::new(1, 0)),
    ];
    TriangulatedSurface::from_gluing(1, &[[0, 0, 0], [0, 0, 0]], &gluing).expect("torus")
}

/// Octagon with word `a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹`, fan-triangulated from one
/// corner: one vertex, nine edges, six faces.
pub fn genus2_one_vertex() -> TriangulatedSurface {
    // T1 = (P0 P1 P2), T_m = (P0 P_m P_m+1) for m = 2..6; side 1 of T_m is
    // octagon side s_m, side 0 of T1 is s0, side 2 of T6 is s7
    let faces = [[0, 0, 0]; 6];
    let s = |m: usize| match m {
        0 => Side::new(0, 0),
        1 => Side::new(0, 1),
        7 => Side::new(5, 2),
        m => Side::new(m - 1, 1),
    };
    let mut gluing = vec![(s(0), s(2)), (s(1), s(3)), (s(4), s(6)), (s(5), s(7))];
    // diagonals P0 P_m, m = 2..6, between T_{m-1} and T_m
    for m in 2..=6 {
        gluing.push((Side::new(m - 2, 2), Side::new(m - 1, 0)));
    }
    TriangulatedSurface::from_gluing(1, &faces, &gluing).expect("genus 2")
}

/// 4×4 periodic grid, each square split along the same diagonal. With unit
/// lengths on every edge this is the flat equilateral torus.
pub fn flat_torus_16() -> TriangulatedSurface {
    let n = 4;
    let id = |i: usize, j: usize| (j % n) * n + (i % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    build_mesh(&faces).expect("flat torus")
}
