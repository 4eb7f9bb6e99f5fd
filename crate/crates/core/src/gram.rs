//! Gram matrices of face normals and the determinant/minor criterion for
//! compact tetrahedra.

use serde::Serialize;
use thiserror::Error;

use crate::membership::{DihedralAngles, EDGES};
use crate::minkowski::{inner, MinkowskiVector, PlaneNormal, EPS_NORM};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GramError {
    #[error("matrix fails the determinant/minor criterion (det = {det})")]
    NotRealizable { det: f64 },
    #[error("numerical breakdown: |x|^2 - 1 = {0:e} for the timelike normal")]
    NumericalBreakdown(f64),
}

/// Symmetric unidiagonal 4x4 matrix of pairwise normal inner products.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GramMatrix(pub [[f64; 4]; 4]);

impl GramMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self(m)
    }

    /// Pairwise inner products of four normals.
    pub fn of_normals(n: &[PlaneNormal; 4]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = inner(&n[i].vec(), &n[j].vec());
            }
        }
        Self(m)
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> f64 {
        det4(&self.0)
    }

    /// Determinant of the principal submatrix on `idx`.
    pub fn principal_det(&self, idx: &[usize]) -> f64 {
        let m = &self.0;
        match *idx {
            [] => 1.0,
            [i] => m[i][i],
            [i, j] => m[i][i] * m[j][j] - m[i][j] * m[j][i],
            [i, j, k] => det3([
                [m[i][i], m[i][j], m[i][k]],
                [m[j][i], m[j][j], m[j][k]],
                [m[k][i], m[k][j], m[k][k]],
            ]),
            [_, _, _, _] => self.det(),
            _ => panic!("principal minor of size > 4"),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut det = 0.0;
    for c in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut k = 0;
            for cc in 0..4 {
                if cc != c {
                    minor[r - 1][k] = m[r][cc];
                    k += 1;
                }
            }
        }
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][c] * det3(minor);
    }
    det
}

/// `M_ij = -cos α_ij` off the diagonal, 1 on it.
pub fn gram_from_angles(a: &DihedralAngles) -> GramMatrix {
    let mut m = GramMatrix::identity();
    for (e, &(i, j)) in EDGES.iter().enumerate() {
        let c = -a.0[e].cos();
        m.0[i][j] = c;
        m.0[j][i] = c;
    }
    m
}

/// Positive-definiteness of one proper principal submatrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorReport {
    /// Row/column indices, 0-based.
    pub indices: Vec<usize>,
    /// Leading principal minors of the submatrix, sizes 1 through `indices.len()`.
    pub leading: Vec<f64>,
    pub determinant: f64,
    pub positive_definite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MilnorReport {
    pub valid: bool,
    pub det: f64,
    pub det_negative: bool,
    pub minors_positive_definite: bool,
    pub minors: Vec<MinorReport>,
}

/// Subsets of `0..4` of sizes 1..=3, by size then lexicographically.
fn proper_subsets() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=3 {
        for mask in 0u8..16 {
            if mask.count_ones() as usize == size {
                out.push((0..4).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>());
            }
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `det(M) < -tol` and every proper principal submatrix positive definite,
/// each leading minor required to exceed `tol`.
pub fn milnor_check(m: &GramMatrix, tol: f64) -> MilnorReport {
    let minors: Vec<MinorReport> = proper_subsets()
        .into_iter()
        .map(|idx| {
            let leading: Vec<f64> = (1..=idx.len())
                .map(|k| m.principal_det(&idx[..k]))
                .collect();
            let determinant = *leading.last().expect("non-empty subset");
            let positive_definite = leading.iter().all(|&d| d > tol);
            MinorReport {
                indices: idx,
                leading,
                determinant,
                positive_definite,
            }
        })
        .collect();
    let det = m.det();
    let det_negative = det < -tol;
    let minors_positive_definite = minors.iter().all(|r| r.positive_definite);
    MilnorReport {
        valid: det_negative && minors_positive_definite,
        det,
        det_negative,
        minors_positive_definite,
        minors,
    }
}

/// Four unit normals with pairwise inner products `M`.
///
/// The leading 3x3 block is Cholesky-factored and its rows become the
/// spatial parts of `v1, v2, v3` (time coordinate zero). The spatial part
/// `x` of `v4` solves the triangular system for its products with them;
/// its time coordinate is `-sqrt(|x|^2 - 1)`, which puts the vertex
/// opposite face 4, the time axis `(1, 0, 0, 0)`, on the inner side of
/// face 4.
pub fn normals_from_gram(m: &GramMatrix, tol: f64) -> Result<[PlaneNormal; 4], GramError> {
    let report = milnor_check(m, tol);
    if !report.valid {
        return Err(GramError::NotRealizable { det: report.det });
    }
    let g = &m.0;
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (g[i][i] - s).sqrt();
            } else {
                l[i][j] = (g[i][j] - s) / l[j][j];
            }
        }
    }
    let mut x = [0.0; 3];
    for i in 0..3 {
        let s: f64 = (0..i).map(|k| l[i][k] * x[k]).sum();
        x[i] = (g[i][3] - s) / l[i][i];
    }
    let excess = x.iter().map(|c| c * c).sum::<f64>() - 1.0;
    if excess < -tol {
        return Err(GramError::NumericalBreakdown(excess));
    }
    let t = -excess.max(0.0).sqrt();
    let raw = [
        MinkowskiVector::new(0.0, l[0][0], 0.0, 0.0),
        MinkowskiVector::new(0.0, l[1][0], l[1][1], 0.0),
        MinkowskiVector::new(0.0, l[2][0], l[2][1], l[2][2]),
        MinkowskiVector::new(t, x[0], x[1], x[2]),
    ];
    let mut out = [None; 4];
    for (slot, v) in out.iter_mut().zip(raw) {
        *slot = Some(
            PlaneNormal::try_new(v, EPS_NORM.max(tol))
                .map_err(|_| GramError::NumericalBreakdown(v.norm_sq() - 1.0))?,
        );
    }
    Ok(out.map(|n| n.expect("filled above")))
}
