//! Scalar trigonometric kernels for trivalent vertices and triangular faces.
//!
//! A trivalent vertex with dihedral angles `α, β, γ` on its three edges
//! is cut by a small sphere in a spherical triangle with those angles;
//! the triangle's side lengths are the face angles at the vertex.

use serde::Serialize;
use thiserror::Error;

use crate::minkowski::EPS_LIGHT;

/// Default slack for clamping an arccos argument back into `[-1, 1]`.
pub const EPS_CLAMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum TrigError {
    /// The three angles admit no spherical triangle.
    #[error("arccos argument {0} outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("sin(y)·sin(z) = {0:e} is too small")]
    DegenerateInput(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexKind {
    Finite,
    Ideal,
    NoIntersection,
}

/// `(cos x + cos y cos z) / (sin y sin z)`, the cosine of the face angle
/// opposite the dihedral angle `x`.
pub fn face_angle_cosine(x: f64, y: f64, z: f64) -> Result<f64, TrigError> {
    let s = y.sin() * z.sin();
    if !(s >= EPS_LIGHT) {
        return Err(TrigError::DegenerateInput(s));
    }
    Ok((x.cos() + y.cos() * z.cos()) / s)
}

/// Face angle at a vertex with dihedral angles `(ai, aj, ak)`: the side of
/// the vertex's spherical triangle opposite `ai`, i.e. the angle of the face
/// containing the edges carrying `aj` and `ak`.
pub fn face_angle(ai: f64, aj: f64, ak: f64) -> Result<f64, TrigError> {
    face_angle_with(ai, aj, ak, EPS_CLAMP)
}

/// [`face_angle`] with an explicit clamp band.
///
/// Evaluated as `atan2(sin β, cos β)` with `sin β = sqrt(vertex_form) /
/// (sin aj sin ak)`, which equals the clamped arccos but keeps full
/// precision when `β` is near 0 (nearly ideal vertices).
pub fn face_angle_with(ai: f64, aj: f64, ak: f64, eps_clamp: f64) -> Result<f64, TrigError> {
    let r = face_angle_cosine(ai, aj, ak)?;
    if !(r.abs() <= 1.0 + eps_clamp) {
        return Err(TrigError::OutOfDomain(r));
    }
    // Vertex sum within rounding of π: the link is a point.
    if vertex_deficit(ai, aj, ak).abs() <= IDEAL_SNAP {
        return Ok(0.0);
    }
    let s = aj.sin() * ak.sin();
    let sin_beta = vertex_form_factored(ai, aj, ak).max(0.0).sqrt() / s;
    Ok(sin_beta.atan2(r.clamp(-1.0, 1.0)))
}

/// Determinant of the Gram matrix of three unit normals meeting with
/// dihedral angles `α, β, γ`.
pub fn vertex_form(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let (a, b, c) = (alpha.cos(), beta.cos(), gamma.cos());
    1.0 - 2.0 * a * b * c - a * a - b * b - c * c
}

/// [`vertex_form`] written as a product of cosines of half-sums.
pub fn vertex_form_factored(alpha: f64, beta: f64, gamma: f64) -> f64 {
    -4.0 * half_sum_cos(alpha, beta, gamma)
        * half_sum_cos(alpha, -beta, gamma)
        * half_sum_cos(alpha, beta, -gamma)
        * half_sum_cos(-alpha, beta, gamma)
}

/// Low-order bits of `π` beyond `std::f64::consts::PI`.
const PI_LO: f64 = 1.2246467991473532e-16;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `cos((a + b + c) / 2)` evaluated as `sin((π - a - b - c) / 2)` with
/// compensated sums, so the sign is right even when `a + b + c` is within
/// rounding of `π`.
fn half_sum_cos(a: f64, b: f64, c: f64) -> f64 {
    (0.5 * vertex_deficit(a, b, c)).sin()
}

/// Vertex sums this close to `π` are treated as exactly `π`.
const IDEAL_SNAP: f64 = 8.0 * f64::EPSILON;

/// `π - (a + b + c)` with compensated summation.
fn vertex_deficit(a: f64, b: f64, c: f64) -> f64 {
    let (s1, e1) = two_sum(a, b);
    let (s2, e2) = two_sum(s1, c);
    let (d, e3) = two_sum(std::f64::consts::PI, -s2);
    d + (e3 + PI_LO - e1 - e2)
}

/// Where three pairwise-intersecting planes with non-obtuse dihedral
/// angles meet, judged by the angle sum against `π`.
pub fn classify_vertex(alpha: f64, beta: f64, gamma: f64, tol: f64) -> VertexKind {
    let excess = alpha + beta + gamma - std::f64::consts::PI;
    if excess > tol {
        VertexKind::Finite
    } else if excess >= -tol {
        VertexKind::Ideal
    } else {
        VertexKind::NoIntersection
    }
}

/// Gradient of [`face_angle_cosine`] with respect to `(x, y, z)`.
pub fn face_angle_partials(x: f64, y: f64, z: f64) -> Result<(f64, f64, f64), TrigError> {
    let (sx, cx) = x.sin_cos();
    let (sy, cy) = y.sin_cos();
    let (sz, cz) = z.sin_cos();
    let s = sy * sz;
    if !(s >= EPS_LIGHT) {
        return Err(TrigError::DegenerateInput(s));
    }
    let num = cx + cy * cz;
    let den = s * s;
    let dx = -sx / s;
    let dy = (-s * sy * cz - num * cy * sz) / den;
    let dz = (-s * cy * sz - num * sy * cz) / den;
    Ok((dx, dy, dz))
}

/// `det(M)` expressed through one face: `betas` are the face's three angles,
/// `alphas` the dihedral angles on the three edges bounding it.
pub fn gram_det_factored(betas: [f64; 3], alphas: [f64; 3]) -> f64 {
    let sines: f64 = alphas.iter().map(|a| 1.0 - a.cos() * a.cos()).product();
    sines * vertex_form_factored(betas[0], betas[1], betas[2])
}
