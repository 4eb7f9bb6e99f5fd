//! Construction of the compact tetrahedron realizing a member angle vector.
//!
//! Face angles give edge lengths through the dual law of cosines. Face 4 is
//! placed in canonical pose, its vertices `p_234, p_134, p_124` on the
//! positive x, y and z axes of the Poincaré ball, and `p_123` is found from
//! its three distances to them. Normals are the orthocomplements of the
//! vertex triples.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::format::sig17;
use crate::gram::det4;
use crate::membership::{
    edge_index, edge_vertices, face_angles, is_member, other_faces, DihedralAngles, FaceAngleTable,
    EDGES,
};
use crate::minkowski::{
    self, distance, inner, normalize, orthocomplement, solve_affine, HyperbolicPoint,
    MinkowskiError, Normalized, PlaneNormal, EPS_LIGHT,
};
use crate::trig::EPS_CLAMP;

/// Default tolerance between the two face-derived values of an edge length.
pub const EPS_LEN: f64 = 1e-9;

/// Canonical base face (face 4).
const BASE_FACE: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("angles are not strictly inside the realizable region")]
    NotAMember,
    #[error("edge {edge}: face-derived lengths {a} and {b} disagree")]
    InconsistentLengths { edge: usize, a: f64, b: f64 },
    #[error("triangle is obtuse: cosh-quotient {0} < 1")]
    ObtuseTriangle(f64),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
}

/// Six edge lengths with the two per-face values they were reconciled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeLengths {
    pub lengths: [f64; 6],
    /// `[from face i, from face j]` for edge `e_ij`.
    pub per_face: [[f64; 2]; 6],
}

impl EdgeLengths {
    pub fn max_discrepancy(&self) -> f64 {
        self.per_face
            .iter()
            .fold(0.0, |m, [a, b]| m.max((a - b).abs()))
    }
}

/// Length of edge `e_fj` computed inside face `f`.
fn length_in_face(beta: &FaceAngleTable, f: usize, j: usize) -> f64 {
    // Endpoints of e_fj are the vertices opposite the remaining two faces;
    // the third vertex of face f is the one opposite j.
    let [u, v] = edge_vertices(edge_index(f, j));
    let bu = beta.get(f, u).expect("complete table");
    let bv = beta.get(f, v).expect("complete table");
    let bw = beta.get(f, j).expect("complete table");
    let c = (bu.cos() * bv.cos() + bw.cos()) / (bu.sin() * bv.sin());
    c.max(1.0).acosh()
}

/// Edge lengths from both incident faces, reconciled by their mean.
pub fn edge_lengths(a: &DihedralAngles) -> Result<EdgeLengths, BuildError> {
    edge_lengths_with(a, EPS_LEN)
}

pub fn edge_lengths_with(a: &DihedralAngles, eps_len: f64) -> Result<EdgeLengths, BuildError> {
    if !is_member(a) {
        return Err(BuildError::NotAMember);
    }
    let beta = face_angles(a).map_err(|_| BuildError::NotAMember)?;
    let mut lengths = [0.0; 6];
    let mut per_face = [[0.0; 2]; 6];
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let si = length_in_face(&beta, i, j);
        let sj = length_in_face(&beta, j, i);
        if !((si - sj).abs() <= eps_len) {
            return Err(BuildError::InconsistentLengths {
                edge: e,
                a: si,
                b: sj,
            });
        }
        per_face[e] = [si, sj];
        lengths[e] = 0.5 * (si + sj);
    }
    Ok(EdgeLengths { lengths, per_face })
}

/// Distances `a1, a2, a3` from the origin at which a plane cuts the three
/// positive axes so that the cut triangle has sides `s1, s2, s3`, side `si`
/// opposite the vertex on axis `i`.
pub fn axis_intercepts(s: [f64; 3]) -> Result<[f64; 3], BuildError> {
    let c = s.map(f64::cosh);
    let mut out = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let q = c[j] * c[k] / c[i];
        if !(q >= 1.0 - EPS_CLAMP) {
            return Err(BuildError::ObtuseTriangle(q));
        }
        out[i] = q.max(1.0).sqrt().acosh();
    }
    Ok(out)
}

/// A compact tetrahedron: inward unit normals of faces 1-4 and the vertices
/// opposite them (`p_234, p_134, p_124, p_123`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tetrahedron {
    pub normals: [PlaneNormal; 4],
    pub vertices: [HyperbolicPoint; 4],
}

fn as_point(v: &minkowski::MinkowskiVector) -> Result<HyperbolicPoint, BuildError> {
    match normalize(v, EPS_LIGHT)? {
        Normalized::Point(p) => Ok(p),
        Normalized::Plane(_) => Err(BuildError::NumericalBreakdown(
            "vertex is not timelike".into(),
        )),
    }
}

impl Tetrahedron {
    /// Normals from vertices: face `f` passes through every vertex but the
    /// one opposite it, which must lie on the positive side.
    pub fn from_vertices(vertices: [HyperbolicPoint; 4]) -> Result<Self, BuildError> {
        let mut normals = [None; 4];
        for (f, slot) in normals.iter_mut().enumerate() {
            let [a, b, c] = other_faces(f).map(|v| vertices[v].vec());
            let w = orthocomplement(&a, &b, &c)?;
            let n = match normalize(&w, EPS_LIGHT)? {
                Normalized::Plane(n) => n,
                Normalized::Point(_) => {
                    return Err(BuildError::NumericalBreakdown(
                        "face normal is not spacelike".into(),
                    ))
                }
            };
            *slot = Some(if inner(&vertices[f].vec(), &n.vec()) < 0.0 {
                n.flipped()
            } else {
                n
            });
        }
        Ok(Self {
            normals: normals.map(|n| n.expect("filled above")),
            vertices,
        })
    }

    /// Vertices from normals: the vertex opposite face `v` is the upper-sheet
    /// point orthogonal to the other three normals.
    pub fn from_normals(normals: [PlaneNormal; 4]) -> Result<Self, BuildError> {
        let mut vertices = [HyperbolicPoint::ORIGIN; 4];
        for (v, slot) in vertices.iter_mut().enumerate() {
            let [a, b, c] = other_faces(v).map(|f| normals[f].vec());
            *slot = as_point(&orthocomplement(&a, &b, &c)?)?;
        }
        let t = Self { normals, vertices };
        t.check(1e-9)?;
        Ok(t)
    }

    /// Incidence and half-space invariants at tolerance `tol`.
    pub fn check(&self, tol: f64) -> Result<(), BuildError> {
        for f in 0..4 {
            let n = self.normals[f].vec();
            for v in other_faces(f) {
                let d = inner(&self.vertices[v].vec(), &n);
                if d.abs() > tol {
                    return Err(BuildError::NumericalBreakdown(format!(
                        "vertex {v} off face {f} by {d:e}"
                    )));
                }
            }
            if !(inner(&self.vertices[f].vec(), &n) > 0.0) {
                return Err(BuildError::NumericalBreakdown(format!(
                    "vertex {f} outside face {f}"
                )));
            }
        }
        Ok(())
    }

    /// Determinant of the 4x4 matrix whose rows are the vertex vectors.
    pub fn orientation(&self) -> f64 {
        det4(&self.vertices.map(|p| p.vec().to_array()))
    }
}

/// The tetrahedron with dihedral angles `a`, in canonical pose.
pub fn build(a: &DihedralAngles) -> Result<Tetrahedron, BuildError> {
    let lens = edge_lengths(a)?;
    let base = other_faces(BASE_FACE);
    // Side opposite the vertex on axis m joins the other two base vertices,
    // which share faces m and 4.
    let sides = base.map(|m| lens.lengths[edge_index(m, BASE_FACE)]);
    let axes = axis_intercepts(sides)?;
    let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let placed: [HyperbolicPoint; 3] =
        [0, 1, 2].map(|m| HyperbolicPoint::along_axis(axes[m], dirs[m]));

    // p_123 and the vertex opposite face m share the two faces other than m.
    let rhs = base.map(|m| {
        let (j, k) = ((m + 1) % 3, (m + 2) % 3);
        -lens.lengths[edge_index(j, k)].cosh()
    });
    let pv = placed.map(|p| p.vec());
    let (w0, n) = solve_affine([&pv[0], &pv[1], &pv[2]], rhs)?;

    // <w0 + λn, w0 + λn> = -1
    let qa = n.norm_sq();
    let qb = 2.0 * inner(&w0, &n);
    let qc = w0.norm_sq() + 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    let scale = (qb * qb).max((4.0 * qa * qc).abs()).max(1.0);
    if !(qa > 0.0) || disc < -1e-9 * scale {
        return Err(BuildError::NumericalBreakdown(format!(
            "trilateration discriminant {disc:e}"
        )));
    }
    let root = disc.max(0.0).sqrt();
    let q = -0.5 * (qb + if qb >= 0.0 { root } else { -root });
    let lambdas = if q == 0.0 {
        [0.0, 0.0]
    } else {
        [q / qa, qc / q]
    };

    let mut chosen = None;
    for l in lambdas {
        let Ok(p) = as_point(&(w0 + l * n)) else {
            continue;
        };
        let m = [
            pv[0].to_array(),
            pv[1].to_array(),
            pv[2].to_array(),
            p.vec().to_array(),
        ];
        if det4(&m) > 0.0 {
            chosen = Some(p);
            break;
        }
    }
    let p123 = chosen.ok_or_else(|| {
        BuildError::NumericalBreakdown("no positively oriented fourth vertex".into())
    })?;
    let t = Tetrahedron::from_vertices([placed[0], placed[1], placed[2], p123])?;
    t.check(1e-9)?;
    Ok(t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub dihedrals: DihedralAngles,
    pub edges: [f64; 6],
    /// Face angles recomputed from the measured dihedrals.
    pub face_angle_check: Option<FaceAngleTable>,
}

/// Reads dihedral angles and edge lengths off a tetrahedron.
pub fn measure(t: &Tetrahedron) -> Measurement {
    let mut d = [0.0; 6];
    let mut edges = [0.0; 6];
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let c = inner(&t.normals[i].vec(), &t.normals[j].vec());
        d[e] = (-c).clamp(-1.0, 1.0).acos();
        let [u, v] = edge_vertices(e);
        edges[e] = distance(&t.vertices[u], &t.vertices[v]);
    }
    let dihedrals = DihedralAngles(d);
    Measurement {
        dihedrals,
        edges,
        face_angle_check: face_angles(&dihedrals).ok(),
    }
}

/// Geomview OFF mesh of the tetrahedron in Poincaré ball coordinates.
///
/// Edges and faces are Euclidean chords between the ball images of the
/// vertices, an approximation of the true geodesic faces. Faces are wound
/// counter-clockwise seen from outside.
pub fn export_off(t: &Tetrahedron) -> String {
    let pts = t.vertices.map(|p| p.to_ball().coords());
    let mut out = String::from("OFF\n4 4 6\n");
    for p in &pts {
        let _ = writeln!(out, "{} {} {}", sig17(p[0]), sig17(p[1]), sig17(p[2]));
    }
    for f in 0..4 {
        let [a, b, c] = other_faces(f);
        let sub = |x: [f64; 3], y: [f64; 3]| [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
        let (u, v, w) = (
            sub(pts[b], pts[a]),
            sub(pts[c], pts[a]),
            sub(pts[f], pts[a]),
        );
        let normal = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        let inward = normal[0] * w[0] + normal[1] * w[1] + normal[2] * w[2] > 0.0;
        let (b, c) = if inward { (c, b) } else { (b, c) };
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram::{gram_from_angles, GramMatrix};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn witness() -> DihedralAngles {
        let c = 0.6f64.acos();
        DihedralAngles([FRAC_PI_2, FRAC_PI_2, c, FRAC_PI_2, c, c])
    }

    #[test]
    fn witness_edge_lengths() {
        let l = edge_lengths(&witness()).unwrap();
        // Equilateral face 4 with cos β = 9/16: cosh s = cos β / (1 - cos β) = 9/7.
        let s = (9.0f64 / 7.0).acosh();
        for e in [2, 4, 5] {
            assert!((l.lengths[e] - s).abs() < 1e-12, "{e}: {}", l.lengths[e]);
        }
        assert!((s - 0.738998).abs() < 1e-6);
        assert!(l.max_discrepancy() < 1e-12);
    }

    #[test]
    fn edge_lengths_reject_non_members() {
        assert_eq!(
            edge_lengths(&DihedralAngles([FRAC_PI_3; 6])),
            Err(BuildError::NotAMember)
        );
        assert_eq!(
            edge_lengths(&DihedralAngles([FRAC_PI_2; 6])),
            Err(BuildError::NotAMember)
        );
    }

    #[test]
    fn equilateral_intercepts() {
        let s = (9.0f64 / 7.0).acosh();
        let a = axis_intercepts([s; 3]).unwrap();
        let expected = (3.0 / 7f64.sqrt()).acosh();
        for x in a {
            assert!((x - expected).abs() < 1e-14);
        }
        assert!((expected - 0.511875).abs() < 1e-6);
    }

    #[test]
    fn right_triangle_intercept_is_zero() {
        let (s2, s3) = (0.7f64, 0.9f64);
        let s1 = (s2.cosh() * s3.cosh()).acosh();
        let a = axis_intercepts([s1, s2, s3]).unwrap();
        assert!(a[0].abs() < 1e-7, "{a:?}");
    }

    #[test]
    fn obtuse_triangle_rejected() {
        assert!(matches!(
            axis_intercepts([1.0, 1.0, 1.9]),
            Err(BuildError::ObtuseTriangle(_))
        ));
    }

    #[test]
    fn pythagorean_identities() {
        let s = [0.8, 0.9, 1.0];
        let a = axis_intercepts(s).unwrap();
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            assert!((s[i].cosh() - a[j].cosh() * a[k].cosh()).abs() <= 1e-12 * s[i].cosh());
        }
    }

    #[test]
    fn build_witness() {
        let a = witness();
        let t = build(&a).unwrap();
        let r = (3.0 / 7f64.sqrt()).acosh();
        let ball = (r / 2.0).tanh();
        for m in 0..3 {
            let c = t.vertices[m].to_ball().coords();
            for (k, &x) in c.iter().enumerate() {
                let want = if k == m { ball } else { 0.0 };
                assert!((x - want).abs() < 1e-12, "vertex {m}: {c:?}");
            }
        }
        let meas = measure(&t);
        assert!(meas.dihedrals.max_abs_diff(&a) < 1e-9);
        assert!(GramMatrix::of_normals(&t.normals).max_abs_diff(&gram_from_angles(&a)) < 1e-9);
        assert!(t.orientation() > 0.0);
        let lens = edge_lengths(&a).unwrap();
        for e in 0..6 {
            assert!((meas.edges[e] - lens.lengths[e]).abs() < 1e-9);
        }
    }

    #[test]
    fn relabeled_build_is_congruent() {
        let a = DihedralAngles([1.06, 1.46, 1.29, 1.12, 0.96, 1.44]);
        assert!(is_member(&a));
        let mut base = measure(&build(&a).unwrap()).edges;
        base.sort_by(f64::total_cmp);
        for perm in [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1]] {
            let mut other = measure(&build(&a.relabeled(perm)).unwrap()).edges;
            other.sort_by(f64::total_cmp);
            for (x, y) in base.iter().zip(&other) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn from_normals_recovers_vertices() {
        let t = build(&witness()).unwrap();
        let u = Tetrahedron::from_normals(t.normals).unwrap();
        for (p, q) in t.vertices.iter().zip(&u.vertices) {
            assert!((p.vec() - q.vec()).euclidean_norm() < 1e-9);
        }
    }

    #[test]
    fn off_format() {
        let t = build(&witness()).unwrap();
        let s = export_off(&t);
        assert!(s.starts_with("OFF\n4 4 6\n"));
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2 + 4 + 4);
        for l in &lines[2..6] {
            let r: f64 = l
                .split(' ')
                .map(|x| x.parse::<f64>().unwrap().powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(r < 1.0);
        }
        assert_eq!(s, export_off(&t));
        // Every undirected edge appears in exactly two faces, once per direction.
        let mut directed = Vec::new();
        for l in &lines[6..] {
            let v: Vec<usize> = l.split(' ').skip(1).map(|x| x.parse().unwrap()).collect();
            for k in 0..3 {
                directed.push((v[k], v[(k + 1) % 3]));
            }
        }
        for &(a, b) in &directed {
            assert!(directed.contains(&(b, a)));
        }
    }
}
