//! Quadrature over the unit sphere.
//!
//! Three node families are available:
//!
//! * [`Scheme::ProductGauss`]: `n` Gauss–Legendre nodes in `cos(theta)` times a
//!   `2n`-point trapezoid rule in `phi`. Exact for polynomials of degree `2n - 1`
//!   in `cos(theta)` and spectrally accurate for smooth integrands.
//! * [`Scheme::HemisphereGauss`]: the same construction applied separately on
//!   each hemisphere (`order` nodes per hemisphere). Integrands with a kink on
//!   the equator, such as `|v_z|` or `sign(v_z)`, are integrated exactly when
//!   they are polynomial on each side.
//! * [`Scheme::Subdivision`]: an icosahedron whose faces are split into
//!   `order^2` triangles and projected onto the sphere; each spherical triangle
//!   contributes its exact area at its normalized centroid. Second-order
//!   accurate, used as an independent cross-check.
//!
//! Grids are immutable and can be shared across threads.

use std::borrow::Borrow;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub const FOUR_PI: f64 = 4.0 * PI;

/// Largest order accepted by [`build_grid`] for the product schemes.
pub const MAX_PRODUCT_ORDER: usize = 8192;
/// Largest subdivision frequency accepted by [`build_grid`].
pub const MAX_SUBDIVISION_ORDER: usize = 512;

/// First order tried by the adaptive driver.
pub const ADAPTIVE_START_ORDER: usize = 4;
/// Polar-node cap of the adaptive driver.
pub const ADAPTIVE_MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    ProductGauss,
    HemisphereGauss,
    Subdivision,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::ProductGauss => "product-gauss",
            Scheme::HemisphereGauss => "hemisphere-gauss",
            Scheme::Subdivision => "subdivision",
        })
    }
}

/// A quadrature node: unit direction and weight in steradians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub direction: Vector3<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone)]
enum Layout {
    Product {
        // (cos theta, sin theta, weight)
        polar: Vec<(f64, f64, f64)>,
        // (cos phi, sin phi)
        azimuth: Vec<(f64, f64)>,
        azimuth_weight: f64,
    },
    Mesh(Vec<Node>),
}

#[derive(Debug, Clone)]
pub struct SphereGrid {
    scheme: Scheme,
    order: usize,
    layout: Layout,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub estimated_error: f64,
    pub nodes_used: usize,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = if n == 1 { 1.0 } else { nf * (z * p1 - p0) / (z * z - 1.0) };
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n % 2 == 1 && i == n / 2 {
            z = 0.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn product_layout(polar: Vec<(f64, f64)>, n_phi: usize) -> Layout {
    let polar = polar
        .into_iter()
        .map(|(u, w)| (u, (1.0 - u * u).max(0.0).sqrt(), w))
        .collect();
    let step = 2.0 * PI / n_phi as f64;
    let azimuth = (0..n_phi)
        .map(|j| {
            let phi = (j as f64 + 0.5) * step;
            (phi.cos(), phi.sin())
        })
        .collect();
    Layout::Product {
        polar,
        azimuth,
        azimuth_weight: step,
    }
}

fn product_gauss(order: usize) -> Layout {
    let (x, w) = gauss_legendre(order);
    product_layout(x.into_iter().zip(w).collect(), 2 * order)
}

fn hemisphere_gauss(order: usize) -> Layout {
    let (x, w) = gauss_legendre(order);
    let mut polar = Vec::with_capacity(2 * order);
    for (&xi, &wi) in x.iter().zip(&w) {
        polar.push((-0.5 * (xi + 1.0), 0.5 * wi));
    }
    for (&xi, &wi) in x.iter().zip(&w) {
        polar.push((0.5 * (xi + 1.0), 0.5 * wi));
    }
    product_layout(polar, 2 * order)
}

fn icosahedron() -> (Vec<Vector3<f64>>, Vec<[usize; 3]>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::with_capacity(12);
    for &s1 in &[1.0, -1.0] {
        for &s2 in &[1.0, -1.0] {
            v.push(Vector3::new(0.0, s1, s2 * phi));
            v.push(Vector3::new(s1, s2 * phi, 0.0));
            v.push(Vector3::new(s2 * phi, 0.0, s1));
        }
    }
    let mut faces = Vec::with_capacity(20);
    let adjacent = |a: &Vector3<f64>, b: &Vector3<f64>| ((a - b).norm() - 2.0).abs() < 1e-9;
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adjacent(&v[i], &v[j]) && adjacent(&v[j], &v[k]) && adjacent(&v[i], &v[k]) {
                    faces.push([i, j, k]);
                }
            }
        }
    }
    debug_assert_eq!(faces.len(), 20);
    (v.into_iter().map(|p| p.normalize()).collect(), faces)
}

fn spherical_triangle_area(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    let triple = a.dot(&b.cross(c)).abs();
    2.0 * triple.atan2(1.0 + a.dot(b) + b.dot(c) + c.dot(a))
}

fn subdivision(order: usize) -> Layout {
    let (verts, faces) = icosahedron();
    let n = order;
    let mut nodes = Vec::with_capacity(20 * n * n);
    for [ia, ib, ic] in faces {
        let (a, b, c) = (verts[ia], verts[ib], verts[ic]);
        let point = |i: usize, j: usize| {
            let (fi, fj) = (i as f64 / n as f64, j as f64 / n as f64);
            (a + (b - a) * fi + (c - a) * fj).normalize()
        };
        let mut push = |p: Vector3<f64>, q: Vector3<f64>, r: Vector3<f64>| {
            nodes.push(Node {
                direction: (p + q + r).normalize(),
                weight: spherical_triangle_area(&p, &q, &r),
            });
        };
        for i in 0..n {
            for j in 0..n - i {
                push(point(i, j), point(i + 1, j), point(i, j + 1));
                if i + j + 1 < n {
                    push(point(i + 1, j), point(i + 1, j + 1), point(i, j + 1));
                }
            }
        }
    }
    Layout::Mesh(nodes)
}

fn build_unchecked(scheme: Scheme, order: usize) -> SphereGrid {
    let layout = match scheme {
        Scheme::ProductGauss => product_gauss(order),
        Scheme::HemisphereGauss => hemisphere_gauss(order),
        Scheme::Subdivision => subdivision(order),
    };
    SphereGrid {
        scheme,
        order,
        layout,
    }
}

/// Builds a grid of the given scheme. `order >= 2`; see [`Scheme`] for its meaning.
pub fn build_grid(scheme: Scheme, order: usize) -> Result<SphereGrid> {
    let cap = match scheme {
        Scheme::Subdivision => MAX_SUBDIVISION_ORDER,
        _ => MAX_PRODUCT_ORDER,
    };
    if order < 2 || order > cap {
        return domain(format!("{scheme} grids support orders 2..={cap}, got {order}"));
    }
    Ok(build_unchecked(scheme, order))
}

impl SphereGrid {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        match &self.layout {
            Layout::Product { polar, azimuth, .. } => polar.len() * azimuth.len(),
            Layout::Mesh(nodes) => nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> Box<dyn Iterator<Item = Node> + '_> {
        match &self.layout {
            Layout::Product {
                polar,
                azimuth,
                azimuth_weight,
            } => Box::new(polar.iter().flat_map(move |&(u, s, w)| {
                azimuth.iter().map(move |&(c, si)| Node {
                    direction: Vector3::new(s * c, s * si, u),
                    weight: w * azimuth_weight,
                })
            })),
            Layout::Mesh(nodes) => Box::new(nodes.iter().copied()),
        }
    }

    /// `sum_i w_i f(v_i)`.
    pub fn sum<F: Fn(&Vector3<f64>) -> f64>(&self, f: F) -> f64 {
        match &self.layout {
            Layout::Product {
                polar,
                azimuth,
                azimuth_weight,
            } => {
                let mut total = 0.0;
                for &(u, s, w) in polar {
                    let ring: f64 = azimuth
                        .iter()
                        .map(|&(c, si)| f(&Vector3::new(s * c, s * si, u)))
                        .sum();
                    total += w * ring;
                }
                total * azimuth_weight
            }
            Layout::Mesh(nodes) => nodes.iter().map(|n| n.weight * f(&n.direction)).sum(),
        }
    }

    fn coarser(&self) -> SphereGrid {
        build_unchecked(self.scheme, (self.order / 2).max(1))
    }
}

/// Integrates `f` on `grid`; the error estimate compares against the half-order grid.
pub fn integrate<F: Fn(&Vector3<f64>) -> f64>(grid: &SphereGrid, f: F) -> QuadratureResult {
    let value = grid.sum(&f);
    let coarse = grid.coarser();
    let coarse_value = coarse.sum(&f);
    QuadratureResult {
        value,
        estimated_error: (value - coarse_value).abs(),
        nodes_used: grid.len() + coarse.len(),
    }
}

fn adapt<G, F>(grids: impl Iterator<Item = G>, f: F, target_rel_err: f64) -> Result<QuadratureResult>
where
    G: Borrow<SphereGrid>,
    F: Fn(&Vector3<f64>) -> f64,
{
    if !(target_rel_err > 0.0) {
        return domain(format!("target relative error must be positive, got {target_rel_err}"));
    }
    let mut previous: Option<f64> = None;
    let mut nodes_used = 0;
    let mut last = (0.0, f64::INFINITY, 0);
    for grid in grids {
        let grid = grid.borrow();
        let value = grid.sum(&f);
        nodes_used += grid.len();
        if let Some(prev) = previous {
            let difference = (value - prev).abs();
            if difference <= target_rel_err * value.abs() {
                return Ok(QuadratureResult {
                    value,
                    estimated_error: difference,
                    nodes_used,
                });
            }
            last = (value, difference, grid.order());
        }
        previous = Some(value);
    }
    Err(Error::Convergence {
        best: last.0,
        difference: last.1,
        order: last.2,
    })
}

fn ladder_orders(max_order: usize) -> impl Iterator<Item = usize> {
    std::iter::successors(Some(ADAPTIVE_START_ORDER), |o| Some(o * 2)).take_while(move |&o| o <= max_order)
}

/// Doubles the product-Gauss order from 4 until successive estimates agree to
/// `target_rel_err` (relative), or fails at [`ADAPTIVE_MAX_ORDER`] polar nodes.
pub fn integrate_adaptive<F: Fn(&Vector3<f64>) -> f64>(f: F, target_rel_err: f64) -> Result<QuadratureResult> {
    adapt(
        ladder_orders(ADAPTIVE_MAX_ORDER).map(|o| build_unchecked(Scheme::ProductGauss, o)),
        f,
        target_rel_err,
    )
}

/// A prebuilt sequence of product-Gauss grids for repeated adaptive integration.
///
/// Building the full ladder up to 4096 polar nodes costs a fraction of a
/// second; bulk callers share one ladder across threads.
#[derive(Debug, Clone)]
pub struct GridLadder {
    grids: Vec<SphereGrid>,
}

impl GridLadder {
    pub fn new(max_order: usize) -> Result<Self> {
        if !(ADAPTIVE_START_ORDER * 2..=MAX_PRODUCT_ORDER).contains(&max_order) {
            return domain(format!("ladder cap {max_order} outside 8..={MAX_PRODUCT_ORDER}"));
        }
        let grids = ladder_orders(max_order)
            .map(|o| build_unchecked(Scheme::ProductGauss, o))
            .collect();
        Ok(Self { grids })
    }

    pub fn max_order(&self) -> usize {
        self.grids.last().map_or(0, |g| g.order())
    }

    pub fn integrate_adaptive<F: Fn(&Vector3<f64>) -> f64>(
        &self,
        f: F,
        target_rel_err: f64,
    ) -> Result<QuadratureResult> {
        adapt(self.grids.iter(), f, target_rel_err)
    }
}

impl Default for GridLadder {
    fn default() -> Self {
        Self::new(ADAPTIVE_MAX_ORDER).expect("default ladder cap is valid")
    }
}
