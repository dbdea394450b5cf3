#![allow(dead_code)]

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::path::PathBuf;

use discrete_calabi::conformal::{Background, DiscreteConformalStructure};
use discrete_calabi::experiment::random_eta;
use discrete_calabi::geometry::MetricState;
use discrete_calabi::mesh::{build_mesh, FaceId, TriangulatedSurface};
use discrete_calabi::presets;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn experiments_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../experiments")
}

/// Forward-mode dual number `v + d·ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn cst(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }
    pub fn var(v: f64) -> Self {
        Dual { v, d: 1.0 }
    }
    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        Dual { v: r, d: self.d / (2.0 * r) }
    }
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Dual { v: e, d: self.d * e }
    }
    pub fn cosh(self) -> Self {
        Dual { v: self.v.cosh(), d: self.d * self.v.sinh() }
    }
    pub fn sinh(self) -> Self {
        Dual { v: self.v.sinh(), d: self.d * self.v.cosh() }
    }
    pub fn acos(self) -> Self {
        Dual { v: self.v.acos(), d: -self.d / (1.0 - self.v * self.v).sqrt() }
    }
    pub fn atanh(self) -> Self {
        Dual { v: self.v.atanh(), d: self.d / (1.0 - self.v * self.v) }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}
impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}
impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual { v: self.v * o.v, d: self.d * o.v + self.v * o.d }
    }
}
impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual { v: self.v / o.v, d: (self.d * o.v - self.v * o.d) / (o.v * o.v) }
    }
}
impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { v: -self.v, d: -self.d }
    }
}
impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, o: f64) -> Dual {
        Dual { v: self.v * o, d: self.d * o }
    }
}

/// Corner angles of a face from its vertex radii-like quantities, written
/// directly from the cosine laws. `edge(a, b)` gives the side length
/// (Euclidean) or its hyperbolic cosine (hyperbolic) between slots `a`, `b`.
fn corner_angles(bg: Background, edge: impl Fn(usize, usize) -> Dual) -> [Dual; 3] {
    let one = Dual::cst(1.0);
    std::array::from_fn(|a| {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        match bg {
            Background::Euclidean => {
                let (x, y, z) = (edge(a, b), edge(a, c), edge(b, c));
                ((x * x + y * y - z * z) / (x * y * 2.0)).acos()
            }
            Background::Hyperbolic => {
                let (cx, cy, cz) = (edge(a, b), edge(a, c), edge(b, c));
                let sx = (cx * cx - one).sqrt();
                let sy = (cy * cy - one).sqrt();
                ((cx * cy - cz) / (sx * sy)).acos()
            }
        }
    })
}

/// Per-face data for a circle packing: `(vertices, η of the side between
/// slots (a, b) indexed [a][b])`.
fn face_eta(mesh: &TriangulatedSurface, eta: &[f64], f: FaceId) -> [[f64; 3]; 3] {
    let fe = mesh.face_edges(f);
    let mut m = [[0.0; 3]; 3];
    for k in 0..3 {
        let (a, b) = (k, (k + 1) % 3);
        m[a][b] = eta[fe[k].0];
        m[b][a] = eta[fe[k].0];
    }
    m
}

/// Curvature of a circle packing from `u`, with `u_j` carrying dual part
/// `seed[j]`. Euclidean: `r = e^u`, `l² = r_i² + r_j² + 2η r_i r_j`.
/// Hyperbolic: `r = 2 artanh e^u`, `cosh l = cosh r_i cosh r_j + η sinh r_i sinh r_j`.
pub fn cp_curvature_dual(
    mesh: &TriangulatedSurface,
    bg: Background,
    eta: &[f64],
    u: &[f64],
    seed: &[f64],
) -> (Vec<Dual>, Vec<Dual>) {
    let r: Vec<Dual> = u
        .iter()
        .zip(seed)
        .map(|(&x, &d)| {
            let e = Dual { v: x, d }.exp();
            match bg {
                Background::Euclidean => e,
                Background::Hyperbolic => e.atanh() * 2.0,
            }
        })
        .collect();
    let mut k = vec![Dual::cst(TAU); mesh.num_vertices()];
    let mut areas = Vec::new();
    for f in mesh.face_ids() {
        let tri = mesh.face(f);
        let et = face_eta(mesh, eta, f);
        let edge = |a: usize, b: usize| {
            let (ra, rb) = (r[tri[a]], r[tri[b]]);
            match bg {
                Background::Euclidean => (ra * ra + rb * rb + ra * rb * (2.0 * et[a][b])).sqrt(),
                Background::Hyperbolic => ra.cosh() * rb.cosh() + ra.sinh() * rb.sinh() * et[a][b],
            }
        };
        let th = corner_angles(bg, edge);
        for a in 0..3 {
            k[tri[a]] = k[tri[a]] - th[a];
        }
        areas.push(Dual::cst(PI) - th[0] - th[1] - th[2]);
    }
    (k, areas)
}

pub fn cp_curvature(mesh: &TriangulatedSurface, bg: Background, eta: &[f64], u: &[f64]) -> Vec<f64> {
    let zero = vec![0.0; u.len()];
    cp_curvature_dual(mesh, bg, eta, u, &zero).0.iter().map(|d| d.v).collect()
}

/// `∂K/∂u` of a circle packing by forward differentiation, column by column.
pub fn cp_jacobian(mesh: &TriangulatedSurface, bg: Background, eta: &[f64], u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let mut m = vec![vec![0.0; n]; n];
    for j in 0..n {
        let mut seed = vec![0.0; n];
        seed[j] = 1.0;
        let (k, _) = cp_curvature_dual(mesh, bg, eta, u, &seed);
        for i in 0..n {
            m[i][j] = k[i].d;
        }
    }
    m
}

/// Two triangles glued along all three sides.
pub fn pillow() -> TriangulatedSurface {
    build_mesh(&[[0, 1, 2], [1, 0, 2]]).unwrap()
}

pub fn is_nondegenerate(mesh: &TriangulatedSurface, dcs: &DiscreteConformalStructure) -> bool {
    dcs.lengths(mesh)
        .ok()
        .and_then(|l| MetricState::new(mesh, l, dcs.background).ok())
        .is_some_and(|m| m.min_angle() > 1e-3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    CirclePacking,
    VertexScaling,
}

/// A random nondegenerate structure of the given family on one of the
/// presets, cycling through meshes with `index`.
pub fn random_instance(
    bg: Background,
    family: Family,
    index: usize,
    rng: &mut ChaCha8Rng,
) -> (TriangulatedSurface, DiscreteConformalStructure) {
    let mesh = match (family, bg, index % 3) {
        (Family::CirclePacking, _, 0) => presets::tetra_sphere(),
        (Family::CirclePacking, _, 1) => presets::icosahedron(),
        (Family::CirclePacking, _, _) => presets::flat_torus_16(),
        (Family::VertexScaling, _, 0) => presets::tetra_sphere(),
        (Family::VertexScaling, _, 1) => presets::icosahedron(),
        (Family::VertexScaling, Background::Euclidean, _) => presets::flat_torus_16(),
        (Family::VertexScaling, Background::Hyperbolic, _) => presets::genus2_one_vertex(),
    };
    let n = mesh.num_vertices();
    loop {
        let dcs = match family {
            Family::CirclePacking => {
                let eta = random_eta(&mesh, &vec![1.0; n], rng, None).unwrap();
                let u: Vec<f64> = match bg {
                    Background::Euclidean => (0..n).map(|_| rng.random_range(-0.5..0.5)).collect(),
                    Background::Hyperbolic => (0..n)
                        .map(|_| (0.5 * rng.random_range(0.2..2.0f64)).tanh().ln())
                        .collect(),
                };
                DiscreteConformalStructure::circle_packing(&mesh, bg, eta, u).unwrap()
            }
            Family::VertexScaling => {
                let reference: Vec<f64> = (0..mesh.num_edges()).map(|_| rng.random_range(0.8..1.2)).collect();
                let u: Vec<f64> = (0..n).map(|_| rng.random_range(-0.3..0.3)).collect();
                DiscreteConformalStructure::vertex_scaling(&mesh, bg, &reference, u).unwrap()
            }
        };
        if is_nondegenerate(&mesh, &dcs) {
            return (mesh, dcs);
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
