//! Linear algebra of Minkowski space `E^{3,1}`.
//!
//! Signature is `(-, +, +, +)`: `<x, y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3`.
//! Hyperbolic space is the upper sheet `<x, x> = -1, x0 > 0`; a spacelike
//! unit vector `v` is the inward normal of the closed half-space
//! `{w : <w, v> >= 0}`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;
use thiserror::Error;

/// Default tolerance on `<v, v> = ±1` for points and plane normals.
pub const EPS_NORM: f64 = 1e-9;
/// Default threshold below which `|<v, v>|` is treated as lightlike.
pub const EPS_LIGHT: f64 = 1e-12;
/// Default half-width of the tangency band `<v, w>^2 = 1`.
pub const EPS_IDEAL: f64 = 1e-9;

/// Relative pivot threshold for rank decisions in the 3x4 solves.
const RANK_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("vector is lightlike (|<v,v>| = {0:e})")]
    LightlikeVector(f64),
    #[error("planes do not intersect (<v,w>^2 = {0})")]
    PlanesDoNotIntersect(f64),
    #[error("planes meet at a single ideal point (<v,w> = {0})")]
    IdealContact(f64),
    #[error("ball point is not strictly inside the unit sphere (|y| = {0})")]
    PointAtInfinity(f64),
    #[error("vectors do not span a 3-dimensional subspace")]
    DegenerateSpan,
    #[error("vector has non-finite coordinates")]
    NonFinite,
    #[error("vector is not a unit {kind} vector (<v,v> = {norm})")]
    NotNormalized { kind: &'static str, norm: f64 },
}

/// A vector of `E^{3,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MinkowskiVector {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl MinkowskiVector {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    /// Minkowski inner product with `other`.
    pub fn inner(&self, other: &Self) -> f64 {
        inner(self, other)
    }

    /// Minkowski squared norm `<v, v>`.
    pub fn norm_sq(&self) -> f64 {
        inner(self, self)
    }

    /// Euclidean length of the coordinate vector.
    pub fn euclidean_norm(&self) -> f64 {
        self.to_array().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Multiplies the time coordinate by -1, turning the Minkowski product
    /// into a Euclidean dot product: `<u, v> = u.lowered() · v`.
    fn lowered(self) -> [f64; 4] {
        [-self.x0, self.x1, self.x2, self.x3]
    }
}

impl Add for MinkowskiVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(
            self.x0 + o.x0,
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
        )
    }
}

impl Sub for MinkowskiVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(
            self.x0 - o.x0,
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
        )
    }
}

impl Neg for MinkowskiVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul<MinkowskiVector> for f64 {
    type Output = MinkowskiVector;
    fn mul(self, v: MinkowskiVector) -> MinkowskiVector {
        MinkowskiVector::new(self * v.x0, self * v.x1, self * v.x2, self * v.x3)
    }
}

/// `-u0*v0 + u1*v1 + u2*v2 + u3*v3`.
pub fn inner(u: &MinkowskiVector, v: &MinkowskiVector) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
}

/// A point on the upper sheet of the hyperboloid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HyperbolicPoint(MinkowskiVector);

impl HyperbolicPoint {
    /// The point `(1, 0, 0, 0)`, centre of the Poincaré ball.
    pub const ORIGIN: Self = Self(MinkowskiVector::new(1.0, 0.0, 0.0, 0.0));

    /// Wraps `v` after checking `|<v,v> + 1| <= tol` and `v.x0 > 0`.
    pub fn try_new(v: MinkowskiVector, tol: f64) -> Result<Self, MinkowskiError> {
        if !v.is_finite() {
            return Err(MinkowskiError::NonFinite);
        }
        let n = v.norm_sq();
        if (n + 1.0).abs() > tol || v.x0 <= 0.0 {
            return Err(MinkowskiError::NotNormalized {
                kind: "timelike",
                norm: n,
            });
        }
        Ok(Self(v))
    }

    /// The point at hyperbolic distance `t` from the origin along the unit
    /// Euclidean direction `dir`.
    pub fn along_axis(t: f64, dir: [f64; 3]) -> Self {
        let (c, s) = (t.cosh(), t.sinh());
        Self(MinkowskiVector::new(c, s * dir[0], s * dir[1], s * dir[2]))
    }

    pub fn vec(&self) -> MinkowskiVector {
        self.0
    }

    pub fn distance(&self, other: &Self) -> f64 {
        distance(self, other)
    }

    pub fn to_ball(&self) -> BallPoint {
        to_ball(self)
    }
}

/// A spacelike unit normal; names the plane `{<w,v> = 0}` and the closed
/// half-space `{<w,v> >= 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PlaneNormal(MinkowskiVector);

impl PlaneNormal {
    /// Wraps `v` after checking `|<v,v> - 1| <= tol`.
    pub fn try_new(v: MinkowskiVector, tol: f64) -> Result<Self, MinkowskiError> {
        if !v.is_finite() {
            return Err(MinkowskiError::NonFinite);
        }
        let n = v.norm_sq();
        if (n - 1.0).abs() > tol {
            return Err(MinkowskiError::NotNormalized {
                kind: "spacelike",
                norm: n,
            });
        }
        Ok(Self(v))
    }

    pub fn vec(&self) -> MinkowskiVector {
        self.0
    }

    /// Same plane, opposite half-space.
    pub fn flipped(&self) -> Self {
        Self(-self.0)
    }
}

/// A point of the open unit ball in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BallPoint([f64; 3]);

impl BallPoint {
    pub fn try_new(y: [f64; 3]) -> Result<Self, MinkowskiError> {
        let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !r.is_finite() || r >= 1.0 {
            return Err(MinkowskiError::PointAtInfinity(r));
        }
        Ok(Self(y))
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Result of [`normalize`]: the causal character decides the output type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalized {
    Plane(PlaneNormal),
    Point(HyperbolicPoint),
}

/// Scales `v` to unit Minkowski length.
///
/// Timelike vectors land on the upper sheet whatever their time sign.
pub fn normalize(v: &MinkowskiVector, eps_light: f64) -> Result<Normalized, MinkowskiError> {
    if !v.is_finite() {
        return Err(MinkowskiError::NonFinite);
    }
    let n = v.norm_sq();
    if n.abs() <= eps_light {
        return Err(MinkowskiError::LightlikeVector(n.abs()));
    }
    if n > 0.0 {
        Ok(Normalized::Plane(PlaneNormal((1.0 / n.sqrt()) * *v)))
    } else {
        let s = if v.x0 < 0.0 { -1.0 } else { 1.0 };
        Ok(Normalized::Point(HyperbolicPoint((s / (-n).sqrt()) * *v)))
    }
}

/// Dihedral angle `arccos(-<v,w>)` between the half-spaces of two normals.
pub fn dihedral_angle(
    v: &PlaneNormal,
    w: &PlaneNormal,
    eps_ideal: f64,
) -> Result<f64, MinkowskiError> {
    let c = inner(&v.0, &w.0);
    let sq = c * c;
    if (sq - 1.0).abs() <= eps_ideal {
        return Err(MinkowskiError::IdealContact(c));
    }
    if sq > 1.0 {
        return Err(MinkowskiError::PlanesDoNotIntersect(sq));
    }
    Ok((-c).acos())
}

/// Hyperbolic distance `arccosh(-<p,q>)`, clamped against roundoff below 1.
pub fn distance(p: &HyperbolicPoint, q: &HyperbolicPoint) -> f64 {
    (-inner(&p.0, &q.0)).max(1.0).acosh()
}

/// Hyperboloid to Poincaré ball: `(x1, x2, x3) / (1 + x0)`.
pub fn to_ball(p: &HyperbolicPoint) -> BallPoint {
    let v = p.0;
    let d = 1.0 + v.x0;
    BallPoint([v.x1 / d, v.x2 / d, v.x3 / d])
}

/// Poincaré ball to hyperboloid: `(1 + |y|^2, 2y) / (1 - |y|^2)`.
pub fn from_ball(b: &BallPoint) -> Result<HyperbolicPoint, MinkowskiError> {
    let y = b.0;
    let r2: f64 = y.iter().map(|c| c * c).sum();
    if !(r2 < 1.0) {
        return Err(MinkowskiError::PointAtInfinity(r2.sqrt()));
    }
    let d = 1.0 - r2;
    Ok(HyperbolicPoint(MinkowskiVector::new(
        (1.0 + r2) / d,
        2.0 * y[0] / d,
        2.0 * y[1] / d,
        2.0 * y[2] / d,
    )))
}

/// Reduced row echelon data for a rank-3 system `<w, v_i> = b_i`.
struct Echelon {
    /// Rows after full pivoting, in pivot order, over the original columns.
    rows: [[f64; 4]; 3],
    rhs: [f64; 3],
    pivots: [usize; 3],
    free: usize,
}

/// Full-pivot Gaussian elimination of the 3x4 Euclidean system whose rows
/// are the lowered `vs`. Pivot choice is deterministic: largest magnitude,
/// first occurrence on ties (row-major scan).
fn eliminate(vs: [&MinkowskiVector; 3], rhs: [f64; 3]) -> Result<Echelon, MinkowskiError> {
    let mut a = [vs[0].lowered(), vs[1].lowered(), vs[2].lowered()];
    let mut b = rhs;
    if a.iter().flatten().any(|c| !c.is_finite()) {
        return Err(MinkowskiError::NonFinite);
    }
    let scale = a.iter().flatten().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Err(MinkowskiError::DegenerateSpan);
    }
    let mut pivots = [0usize; 3];
    let mut used = [false; 4];
    for k in 0..3 {
        let (mut pr, mut pc, mut best) = (k, 0, -1.0);
        for (r, row) in a.iter().enumerate().skip(k) {
            for (c, &x) in row.iter().enumerate() {
                if !used[c] && x.abs() > best {
                    (pr, pc, best) = (r, c, x.abs());
                }
            }
        }
        if best <= RANK_EPS * scale {
            return Err(MinkowskiError::DegenerateSpan);
        }
        a.swap(k, pr);
        b.swap(k, pr);
        used[pc] = true;
        pivots[k] = pc;
        let p = a[k][pc];
        for c in 0..4 {
            a[k][c] /= p;
        }
        b[k] /= p;
        for r in 0..3 {
            if r != k {
                let f = a[r][pc];
                if f != 0.0 {
                    for c in 0..4 {
                        a[r][c] -= f * a[k][c];
                    }
                    b[r] -= f * b[k];
                }
            }
        }
    }
    let free = (0..4)
        .find(|c| !used[*c])
        .expect("three pivots leave one free column");
    Ok(Echelon {
        rows: a,
        rhs: b,
        pivots,
        free,
    })
}

/// Spans the Minkowski-orthogonal complement of `v1, v2, v3`.
///
/// The result has unit Euclidean norm and its largest-magnitude coordinate
/// (first one on ties) is positive.
pub fn orthocomplement(
    v1: &MinkowskiVector,
    v2: &MinkowskiVector,
    v3: &MinkowskiVector,
) -> Result<MinkowskiVector, MinkowskiError> {
    let e = eliminate([v1, v2, v3], [0.0; 3])?;
    Ok(canonical_scale(null_vector(&e)))
}

fn null_vector(e: &Echelon) -> [f64; 4] {
    let mut w = [0.0; 4];
    w[e.free] = 1.0;
    for k in 0..3 {
        w[e.pivots[k]] = -e.rows[k][e.free];
    }
    w
}

fn canonical_scale(w: [f64; 4]) -> MinkowskiVector {
    let n = w.iter().map(|c| c * c).sum::<f64>().sqrt();
    let mut imax = 0;
    for i in 1..4 {
        if w[i].abs() > w[imax].abs() {
            imax = i;
        }
    }
    let s = if w[imax] < 0.0 { -1.0 / n } else { 1.0 / n };
    MinkowskiVector::from_array(w.map(|c| c * s))
}

/// Solves `<w, v_i> = b_i` for `i = 1..3`.
///
/// Returns a particular solution (free coordinate zero) and the
/// [`orthocomplement`] direction; every solution is `particular + t * null`.
pub fn solve_affine(
    vs: [&MinkowskiVector; 3],
    b: [f64; 3],
) -> Result<(MinkowskiVector, MinkowskiVector), MinkowskiError> {
    let e = eliminate(vs, b)?;
    let mut p = [0.0; 4];
    for k in 0..3 {
        p[e.pivots[k]] = e.rhs[k];
    }
    Ok((
        MinkowskiVector::from_array(p),
        canonical_scale(null_vector(&e)),
    ))
}
