//! Exploration of the angle space: 2-D slices, midpoint witnesses of
//! non-convexity and the three-stage path to the boundary.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::format::sig17;
use crate::membership::{
    classify, edge_index, edge_label, face_edges, is_member, parse_edge, vertex_edges,
    DihedralAngles, Kind, Verdict, DEFAULT_TOL,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExploreError {
    #[error("invalid slice: {0}")]
    InvalidSpec(String),
    #[error("angles are not strictly inside the realizable region")]
    NotAMember,
}

fn invalid(msg: impl Into<String>) -> ExploreError {
    ExploreError::InvalidSpec(msg.into())
}

/// `n` evenly spaced samples from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    /// Parses `LO:HI:N`.
    pub fn parse(s: &str) -> Result<Self, ExploreError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(invalid(format!("range {s:?} is not LO:HI:N")));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad number {x:?} in range")))
        };
        let n = n
            .trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("bad count {n:?} in range")))?;
        Ok(Self {
            lo: num(lo)?,
            hi: num(hi)?,
            n,
        })
    }
}

/// A 2-D slice: four edges pinned, two free edges swept over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceSpec {
    pub fixed: BTreeMap<usize, f64>,
    pub free: (usize, usize),
    pub ranges: [AxisRange; 2],
}

impl SliceSpec {
    /// Free edges `e12, e13` (meeting at `p_123`), all other edges at
    /// `alpha`, both axes over `[0.01, π/2]` with `n` samples.
    pub fn two_free_at_vertex(alpha: f64, n: usize) -> Self {
        let fixed = [2, 3, 4, 5].into_iter().map(|e| (e, alpha)).collect();
        let r = AxisRange {
            lo: 0.01,
            hi: FRAC_PI_2,
            n,
        };
        Self {
            fixed,
            free: (0, 1),
            ranges: [r, r],
        }
    }

    /// Builds a spec from CLI-style strings: `e14=1.3,e23=1.3,...`,
    /// `e12,e13` and `LO:HI:N` (or two ranges separated by a comma).
    pub fn parse(fixed: &str, free: &str, range: &str) -> Result<Self, ExploreError> {
        let mut map = BTreeMap::new();
        for item in fixed.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| invalid(format!("fixed entry {item:?} is not EDGE=ANGLE")))?;
            let e = parse_edge(k).map_err(|err| invalid(err.to_string()))?;
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad angle {v:?}")))?;
            if map.insert(e, x).is_some() {
                return Err(invalid(format!("edge {} fixed twice", edge_label(e))));
            }
        }
        let fr: Vec<&str> = free.split(',').collect();
        let [f0, f1] = fr[..] else {
            return Err(invalid("expected exactly two free edges"));
        };
        let free = (
            parse_edge(f0).map_err(|e| invalid(e.to_string()))?,
            parse_edge(f1).map_err(|e| invalid(e.to_string()))?,
        );
        let rs: Vec<&str> = range.split(',').collect();
        let ranges = match rs[..] {
            [r] => {
                let r = AxisRange::parse(r)?;
                [r, r]
            }
            [a, b] => [AxisRange::parse(a)?, AxisRange::parse(b)?],
            _ => return Err(invalid("expected one or two ranges")),
        };
        let spec = Self {
            fixed: map,
            free,
            ranges,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExploreError> {
        let mut seen = [0u8; 6];
        for &e in self.fixed.keys() {
            if e >= 6 {
                return Err(invalid(format!("edge index {e} out of range")));
            }
            seen[e] += 1;
        }
        for e in [self.free.0, self.free.1] {
            if e >= 6 {
                return Err(invalid(format!("edge index {e} out of range")));
            }
            seen[e] += 1;
        }
        if let Some(e) = seen.iter().position(|&c| c != 1) {
            return Err(invalid(format!(
                "edge {} must be assigned exactly once",
                edge_label(e)
            )));
        }
        for (&e, &x) in &self.fixed {
            if !x.is_finite() {
                return Err(invalid(format!(
                    "fixed angle on {} is not finite",
                    edge_label(e)
                )));
            }
        }
        for r in &self.ranges {
            if !(r.lo > 0.0 && r.lo < r.hi && r.hi <= FRAC_PI_2) {
                return Err(invalid(format!(
                    "range {}:{} must satisfy 0 < lo < hi <= pi/2",
                    r.lo, r.hi
                )));
            }
            if r.n < 2 {
                return Err(invalid("each axis needs at least 2 samples"));
            }
        }
        Ok(())
    }

    /// Angle vector at free-edge values `(x, y)`.
    pub fn angles_at(&self, x: f64, y: f64) -> DihedralAngles {
        let mut a = [0.0; 6];
        for (&e, &v) in &self.fixed {
            a[e] = v;
        }
        a[self.free.0] = x;
        a[self.free.1] = y;
        DihedralAngles(a)
    }

    /// Angle vector at grid node `(i, j)`.
    pub fn node(&self, i: usize, j: usize) -> DihedralAngles {
        self.angles_at(self.ranges[0].value(i), self.ranges[1].value(j))
    }

    /// Same slice with the two free edges (and their ranges) swapped.
    pub fn swapped(&self) -> Self {
        Self {
            fixed: self.fixed.clone(),
            free: (self.free.1, self.free.0),
            ranges: [self.ranges[1], self.ranges[0]],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub kind: Kind,
    /// Failure taxonomy, see [`Verdict::codes`].
    pub codes: String,
}

/// Classified grid, row-major: row `i` is the first free edge's `i`-th
/// value, column `j` the second's.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceGrid {
    pub spec: SliceSpec,
    pub cells: Vec<Cell>,
}

impl SliceGrid {
    pub fn dims(&self) -> (usize, usize) {
        (self.spec.ranges[0].n, self.spec.ranges[1].n)
    }

    pub fn get(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.spec.ranges[1].n + j]
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.cells.iter().filter(|c| c.kind == kind).count()
    }

    /// CSV with header `x,y,kind,codes`, one row per node in row-major
    /// order, LF line endings.
    pub fn to_csv(&self) -> String {
        let (n0, n1) = self.dims();
        let mut out = String::from("x,y,kind,codes\n");
        for i in 0..n0 {
            let x = sig17(self.spec.ranges[0].value(i));
            for j in 0..n1 {
                let c = self.get(i, j);
                let _ = writeln!(
                    out,
                    "{x},{},{},{}",
                    sig17(self.spec.ranges[1].value(j)),
                    c.kind,
                    c.codes
                );
            }
        }
        out
    }

    /// Binary PGM (P5): first free edge along the horizontal axis, second
    /// along the vertical axis increasing upwards. Interior 255, boundary
    /// 128, exterior 0.
    pub fn to_pgm(&self) -> Vec<u8> {
        let (n0, n1) = self.dims();
        let mut out = format!("P5\n{n0} {n1}\n255\n").into_bytes();
        for row in 0..n1 {
            let j = n1 - 1 - row;
            for i in 0..n0 {
                out.push(match self.get(i, j).kind {
                    Kind::Interior => 255,
                    Kind::Boundary => 128,
                    Kind::Exterior => 0,
                });
            }
        }
        out
    }
}

/// Classifies every grid node of `spec` (in parallel; output order is fixed).
pub fn slice(spec: &SliceSpec) -> Result<SliceGrid, ExploreError> {
    spec.validate()?;
    let (n0, n1) = (spec.ranges[0].n, spec.ranges[1].n);
    let cells = (0..n0 * n1)
        .into_par_iter()
        .map(|k| {
            let v = classify(&spec.node(k / n1, k % n1), DEFAULT_TOL);
            Cell {
                kind: v.kind,
                codes: v.codes(),
            }
        })
        .collect();
    Ok(SliceGrid {
        spec: spec.clone(),
        cells,
    })
}

/// Two interior points whose midpoint is exterior.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub a_index: (usize, usize),
    pub b_index: (usize, usize),
    pub a: DihedralAngles,
    pub b: DihedralAngles,
    pub mid: DihedralAngles,
    pub verdicts: [Kind; 3],
}

pub fn midpoint(a: &DihedralAngles, b: &DihedralAngles) -> DihedralAngles {
    let mut m = [0.0; 6];
    for (k, slot) in m.iter_mut().enumerate() {
        *slot = 0.5 * (a.0[k] + b.0[k]);
    }
    DihedralAngles(m)
}

/// Two interior grid nodes whose midpoint is exterior.
///
/// Pairs whose index sums are both even have a grid node as midpoint, so
/// they are screened first by table lookup; failing that, every pair is
/// classified directly. Within each pass pairs `(a, b)` of row-major
/// indices with `a < b` are scanned lexicographically and the first hit is
/// returned, so the result is a function of the spec alone.
pub fn midpoint_counterexample(spec: &SliceSpec) -> Result<Option<Counterexample>, ExploreError> {
    let grid = slice(spec)?;
    let n1 = spec.ranges[1].n;
    let interior: Vec<usize> = (0..grid.cells.len())
        .filter(|&k| grid.cells[k].kind == Kind::Interior)
        .collect();
    let confirm = |ka: usize, kb: usize| {
        let (a, b) = (spec.node(ka / n1, ka % n1), spec.node(kb / n1, kb % n1));
        let mid = midpoint(&a, &b);
        (classify(&mid, DEFAULT_TOL).kind == Kind::Exterior).then(|| Counterexample {
            a_index: (ka / n1, ka % n1),
            b_index: (kb / n1, kb % n1),
            a,
            b,
            mid,
            verdicts: [Kind::Interior, Kind::Interior, Kind::Exterior],
        })
    };
    for (ia, &ka) in interior.iter().enumerate() {
        for &kb in &interior[ia + 1..] {
            let (i, j) = (ka / n1 + kb / n1, ka % n1 + kb % n1);
            if i % 2 == 0 && j % 2 == 0 && grid.get(i / 2, j / 2).kind == Kind::Exterior {
                if let Some(c) = confirm(ka, kb) {
                    return Ok(Some(c));
                }
            }
        }
    }
    for (ia, &ka) in interior.iter().enumerate() {
        for &kb in &interior[ia + 1..] {
            if let Some(c) = confirm(ka, kb) {
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

/// One leg of [`boundary_path`]: the edges in `scaled_edges` are multiplied
/// by a parameter running from 1 down to `breakpoint`, where the vertex
/// sum at `saturated_vertex` reaches `π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub scaled_edges: Vec<usize>,
    pub start: f64,
    pub breakpoint: f64,
    pub saturated_vertex: usize,
    pub start_angles: DihedralAngles,
    pub end_angles: DihedralAngles,
}

impl Stage {
    /// Angles at parameter `p`.
    pub fn at(&self, p: f64) -> DihedralAngles {
        let mut a = self.start_angles;
        for &e in &self.scaled_edges {
            a.0[e] *= p;
        }
        a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSample {
    pub stage: usize,
    pub parameter: f64,
    pub angles: DihedralAngles,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathTrace {
    pub stages: Vec<Stage>,
    pub samples: Vec<PathSample>,
}

/// Index of the largest value, lowest index on ties.
fn argmax(vals: impl IntoIterator<Item = (usize, f64)>) -> (usize, f64) {
    vals.into_iter()
        .fold((usize::MAX, f64::NEG_INFINITY), |best, (i, x)| {
            if x > best.1 {
                (i, x)
            } else {
                best
            }
        })
}

fn stage(start: DihedralAngles, scaled_edges: Vec<usize>, candidates: &[usize]) -> Stage {
    // Each candidate vertex sum is linear in the parameter: p * scaled + fixed.
    let (v, p) = argmax(candidates.iter().map(|&v| {
        let (mut scaled, mut fixed) = (0.0, 0.0);
        for e in vertex_edges(v) {
            if scaled_edges.contains(&e) {
                scaled += start.0[e];
            } else {
                fixed += start.0[e];
            }
        }
        (v, ((PI - fixed) / scaled).min(1.0))
    }));
    let mut s = Stage {
        scaled_edges,
        start: 1.0,
        breakpoint: p,
        saturated_vertex: v,
        start_angles: start,
        end_angles: start,
    };
    s.end_angles = s.at(p);
    s
}

/// Path from a member to the boundary along which no angle increases:
/// uniform scaling until a first vertex becomes ideal, then scaling the face
/// opposite it until a second does, then shrinking the edge joining the two
/// faces opposite those vertices until a third does. Ties go to the lowest
/// vertex index.
pub fn boundary_path(
    a: &DihedralAngles,
    samples_per_stage: usize,
) -> Result<PathTrace, ExploreError> {
    if samples_per_stage < 2 {
        return Err(invalid("need at least 2 samples per stage"));
    }
    if !is_member(a) {
        return Err(ExploreError::NotAMember);
    }
    let all: Vec<usize> = (0..6).collect();
    let s1 = stage(*a, all, &[0, 1, 2, 3]);
    let v1 = s1.saturated_vertex;

    let rest: Vec<usize> = (0..4).filter(|&v| v != v1).collect();
    let s2 = stage(s1.end_angles, face_edges(v1).to_vec(), &rest);
    let v2 = s2.saturated_vertex;

    let last: Vec<usize> = (0..4).filter(|&v| v != v1 && v != v2).collect();
    let s3 = stage(s2.end_angles, vec![edge_index(v1, v2)], &last);

    let stages = vec![s1, s2, s3];
    let mut samples = Vec::with_capacity(3 * samples_per_stage);
    for (k, st) in stages.iter().enumerate() {
        for i in 0..samples_per_stage {
            let p = if i + 1 == samples_per_stage {
                st.breakpoint
            } else {
                1.0 + (st.breakpoint - 1.0) * i as f64 / (samples_per_stage - 1) as f64
            };
            let angles = st.at(p);
            samples.push(PathSample {
                stage: k + 1,
                parameter: p,
                angles,
                verdict: classify(&angles, DEFAULT_TOL),
            });
        }
    }
    Ok(PathTrace { stages, samples })
}
