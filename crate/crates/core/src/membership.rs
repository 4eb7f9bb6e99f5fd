//! Membership of a 6-tuple of dihedral angles in the space of compact
//! non-obtuse hyperbolic tetrahedra.
//!
//! # Indexing
//!
//! Faces are numbered `0..4` (printed 1-based). Edge `e_ij` is where faces
//! `i` and `j` meet; edges are stored in the order
//! `e12, e13, e14, e23, e24, e34`. A vertex is where three faces meet and is
//! indexed by the face it is *opposite*, so vertex `3` is `p_123`. Face `i`
//! is bounded by `e_ij, e_ik, e_il` and contains every vertex except the
//! one opposite it.
//!
//! The angle of face `i` at vertex `p_ijk` is
//! `face_angle(α_jk, α_ij, α_ik)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::trig::{self, EPS_CLAMP};

/// Default half-width of every equality band.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Face pairs of the six edges, in canonical order.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index into [`EDGES`] of the edge where faces `i` and `j` meet.
pub const fn edge_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("edge needs two distinct faces in 0..4"),
    }
}

/// The three faces other than `f`, ascending.
pub const fn other_faces(f: usize) -> [usize; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("face index out of range"),
    }
}

/// Edges incident to the vertex opposite face `v`.
pub fn vertex_edges(v: usize) -> [usize; 3] {
    let [i, j, k] = other_faces(v);
    [edge_index(i, j), edge_index(i, k), edge_index(j, k)]
}

/// Edges bounding face `f`.
pub fn face_edges(f: usize) -> [usize; 3] {
    other_faces(f).map(|g| edge_index(f, g))
}

/// Vertices at the two ends of edge `e`, as opposite-face indices.
pub fn edge_vertices(e: usize) -> [usize; 2] {
    let (i, j) = EDGES[e];
    let mut out = [0; 2];
    let mut n = 0;
    for v in 0..4 {
        if v != i && v != j {
            out[n] = v;
            n += 1;
        }
    }
    out
}

pub fn edge_label(e: usize) -> String {
    let (i, j) = EDGES[e];
    format!("e{}{}", i + 1, j + 1)
}

pub fn vertex_label(v: usize) -> String {
    let [i, j, k] = other_faces(v);
    format!("p{}{}{}", i + 1, j + 1, k + 1)
}

pub fn face_label(f: usize) -> String {
    format!("F{}", f + 1)
}

/// Parses `e12`..`e34` (either face order, `e` optional).
pub fn parse_edge(s: &str) -> Result<usize, ParseAnglesError> {
    let t = s.trim();
    let digits = t
        .strip_prefix('e')
        .or_else(|| t.strip_prefix('E'))
        .unwrap_or(t);
    let b = digits.as_bytes();
    if b.len() == 2
        && (b'1'..=b'4').contains(&b[0])
        && (b'1'..=b'4').contains(&b[1])
        && b[0] != b[1]
    {
        Ok(edge_index((b[0] - b'1') as usize, (b[1] - b'1') as usize))
    } else {
        Err(ParseAnglesError::BadEdge(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseAnglesError {
    #[error("expected 6 comma-separated angles, got {0}")]
    WrongCount(usize),
    #[error("invalid angle {0:?}")]
    BadNumber(String),
    #[error("invalid edge name {0:?} (expected e12, e13, e14, e23, e24 or e34)")]
    BadEdge(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipError {
    #[error("face angles at vertex {} are undefined", vertex_label(*.0))]
    UndefinedFaceAngle(usize),
}

/// Dihedral angles in radians, in canonical edge order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DihedralAngles(pub [f64; 6]);

impl DihedralAngles {
    pub const fn new(a: [f64; 6]) -> Self {
        Self(a)
    }

    /// Angle on the edge between faces `i` and `j`.
    pub fn between(&self, i: usize, j: usize) -> f64 {
        self.0[edge_index(i, j)]
    }

    /// Sum of the three dihedral angles at the vertex opposite face `v`.
    pub fn vertex_sum(&self, v: usize) -> f64 {
        vertex_edges(v).iter().map(|&e| self.0[e]).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0.map(|x| t * x))
    }

    /// Relabels faces: face `i` of `self` becomes face `perm[i]`.
    pub fn relabeled(&self, perm: [usize; 4]) -> Self {
        let mut out = [0.0; 6];
        for (e, &(i, j)) in EDGES.iter().enumerate() {
            out[edge_index(perm[i], perm[j])] = self.0[e];
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl FromStr for DihedralAngles {
    type Err = ParseAnglesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(ParseAnglesError::WrongCount(parts.len()));
        }
        let mut a = [0.0; 6];
        for (slot, p) in a.iter_mut().zip(&parts) {
            *slot = p
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ParseAnglesError::BadNumber(p.to_string()))?;
        }
        Ok(Self(a))
    }
}

impl fmt::Display for DihedralAngles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// The twelve face angles, `table[face][vertex]` for `face != vertex`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceAngleTable([[Option<f64>; 4]; 4]);

impl FaceAngleTable {
    /// Angle of `face` at the vertex opposite `vertex`.
    pub fn get(&self, face: usize, vertex: usize) -> Option<f64> {
        self.0[face][vertex]
    }

    /// The three angles of `face`, ordered by vertex index.
    pub fn face(&self, face: usize) -> Option<[f64; 3]> {
        let vs = other_faces(face);
        Some([
            self.0[face][vs[0]]?,
            self.0[face][vs[1]]?,
            self.0[face][vs[2]]?,
        ])
    }

    pub fn face_sum(&self, face: usize) -> Option<f64> {
        self.face(face).map(|b| b.iter().sum())
    }

    /// True when every entry is defined.
    pub fn is_complete(&self) -> bool {
        (0..4).all(|f| self.face(f).is_some())
    }

    /// Defined entries as `(face, vertex, angle)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..4).flat_map(move |f| {
            other_faces(f)
                .into_iter()
                .filter_map(move |v| self.0[f][v].map(|b| (f, v, b)))
        })
    }
}

impl Serialize for FaceAngleTable {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(12))?;
        for f in 0..4 {
            for v in other_faces(f) {
                m.serialize_entry(
                    &format!("{}@{}", face_label(f), vertex_label(v)),
                    &self.0[f][v],
                )?;
            }
        }
        m.end()
    }
}

/// Face angles at a single vertex, or `None` if the vertex admits no
/// spherical triangle.
fn vertex_face_angles(a: &DihedralAngles, v: usize, eps_clamp: f64) -> Option<[(usize, f64); 3]> {
    let fs = other_faces(v);
    let mut out = [(0, 0.0); 3];
    for (slot, (n, &f)) in out.iter_mut().zip(fs.iter().enumerate()) {
        let j = fs[(n + 1) % 3];
        let k = fs[(n + 2) % 3];
        let b = trig::face_angle_with(a.between(j, k), a.between(f, j), a.between(f, k), eps_clamp)
            .ok()?;
        *slot = (f, b);
    }
    Some(out)
}

fn partial_face_angles(a: &DihedralAngles, eps_clamp: f64) -> (FaceAngleTable, Option<usize>) {
    let mut t = [[None; 4]; 4];
    let mut first_bad = None;
    for v in 0..4 {
        match vertex_face_angles(a, v, eps_clamp) {
            Some(angles) => {
                for (f, b) in angles {
                    t[f][v] = Some(b);
                }
            }
            None => {
                first_bad.get_or_insert(v);
            }
        }
    }
    (FaceAngleTable(t), first_bad)
}

/// All twelve face angles.
pub fn face_angles(a: &DihedralAngles) -> Result<FaceAngleTable, MembershipError> {
    let (t, bad) = partial_face_angles(a, EPS_CLAMP);
    match bad {
        Some(v) => Err(MembershipError::UndefinedFaceAngle(v)),
        None => Ok(t),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Interior,
    Boundary,
    Exterior,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Interior => "interior",
            Kind::Boundary => "boundary",
            Kind::Exterior => "exterior",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Equal,
    Fail,
    NotEvaluable,
}

impl Status {
    fn mark(self) -> Option<char> {
        match self {
            Status::Pass => None,
            Status::Equal => Some('='),
            Status::Fail => Some('x'),
            Status::NotEvaluable => Some('?'),
        }
    }
}

/// One scalar constraint: the item it concerns, the value tested and the
/// outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Item {
    pub label: String,
    pub value: Option<f64>,
    pub status: Status,
}

/// Full diagnostics of [`classify`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub kind: Kind,
    /// `0 < α <= π/2`, per edge.
    pub condition1: Vec<Item>,
    /// Vertex sums `> π`, per vertex.
    pub condition2: Vec<Item>,
    /// Face-angle sums `< π`, per face.
    pub condition3: Vec<Item>,
    /// Present only when all twelve angles are defined.
    pub face_angles: Option<FaceAngleTable>,
}

impl Verdict {
    /// Every item that did not strictly pass, as `<c><label><mark>` tokens
    /// joined by `|`: `c` is `a`, `v` or `f` for conditions 1-3 and `mark`
    /// is `=` (equality band), `x` (violated) or `?` (not evaluable).
    /// Empty for interior points.
    pub fn codes(&self) -> String {
        let mut out = Vec::new();
        for (prefix, items) in [
            ("a", &self.condition1),
            ("v", &self.condition2),
            ("f", &self.condition3),
        ] {
            for it in items {
                if let Some(m) = it.status.mark() {
                    let digits = it
                        .label
                        .trim_start_matches(|c: char| c.is_ascii_alphabetic());
                    out.push(format!("{prefix}{digits}{m}"));
                }
            }
        }
        out.join("|")
    }

    pub fn items(&self) -> impl Iterator<Item = &Item> {
        self.condition1
            .iter()
            .chain(&self.condition2)
            .chain(&self.condition3)
    }

    pub fn count(&self, status: Status) -> usize {
        self.items().filter(|i| i.status == status).count()
    }
}

fn angle_status(a: f64, tol: f64) -> Status {
    let lower = if a > tol {
        Status::Pass
    } else if a >= -tol {
        Status::Equal
    } else {
        Status::Fail
    };
    let upper = if a <= FRAC_PI_2 {
        Status::Pass
    } else if a <= FRAC_PI_2 + tol {
        Status::Equal
    } else {
        Status::Fail
    };
    lower.max(upper)
}

/// Evaluates conditions (1)-(3) on `a` with equality bands of half-width
/// `tol`.
pub fn classify(a: &DihedralAngles, tol: f64) -> Verdict {
    classify_with(a, tol, EPS_CLAMP)
}

pub fn classify_with(a: &DihedralAngles, tol: f64, eps_clamp: f64) -> Verdict {
    let condition1: Vec<Item> = (0..6)
        .map(|e| Item {
            label: edge_label(e),
            value: Some(a.0[e]),
            status: angle_status(a.0[e], tol),
        })
        .collect();

    let condition2: Vec<Item> = (0..4)
        .map(|v| {
            let s = a.vertex_sum(v);
            let status = if !s.is_finite() {
                Status::Fail
            } else if s > PI + tol {
                Status::Pass
            } else if s >= PI - tol {
                Status::Equal
            } else {
                Status::Fail
            };
            Item {
                label: vertex_label(v),
                value: Some(s),
                status,
            }
        })
        .collect();

    let (table, bad) = partial_face_angles(a, eps_clamp);
    let condition3: Vec<Item> = (0..4)
        .map(|f| match table.face_sum(f) {
            Some(s) => {
                let status = if s < PI - tol {
                    Status::Pass
                } else if s <= PI + tol {
                    Status::Equal
                } else {
                    Status::Fail
                };
                Item {
                    label: face_label(f),
                    value: Some(s),
                    status,
                }
            }
            None => Item {
                label: face_label(f),
                value: None,
                status: Status::NotEvaluable,
            },
        })
        .collect();

    let worst = condition1
        .iter()
        .chain(&condition2)
        .chain(&condition3)
        .map(|i| i.status)
        .max()
        .unwrap_or(Status::Pass);
    let kind = match worst {
        Status::Pass => Kind::Interior,
        Status::Equal => Kind::Boundary,
        Status::Fail | Status::NotEvaluable => Kind::Exterior,
    };
    Verdict {
        kind,
        condition1,
        condition2,
        condition3,
        face_angles: bad.is_none().then_some(table),
    }
}

/// True iff `a` is strictly inside, at the default tolerance.
pub fn is_member(a: &DihedralAngles) -> bool {
    classify(a, DEFAULT_TOL).kind == Kind::Interior
}
