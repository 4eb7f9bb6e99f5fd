//! Compact hyperbolic tetrahedra with non-obtuse dihedral angles.
//!
//! Given six dihedral angles (edges ordered `e12, e13, e14, e23, e24, e34`,
//! edge `e_ij` being where faces `i` and `j` meet) the crate decides whether
//! they are realized by a compact tetrahedron in hyperbolic space, builds
//! that tetrahedron in the hyperboloid model, and explores the non-convex
//! set of realizable angles.
//!
//! ```
//! use hypertet::{build, classify, measure, DihedralAngles, Kind, DEFAULT_TOL};
//!
//! let c = 0.6f64.acos();
//! let h = std::f64::consts::FRAC_PI_2;
//! let a = DihedralAngles::new([h, h, c, h, c, c]);
//! assert_eq!(classify(&a, DEFAULT_TOL).kind, Kind::Interior);
//!
//! let t = build(&a).unwrap();
//! assert!(measure(&t).dihedrals.max_abs_diff(&a) < 1e-9);
//! ```

// `!(x < y)` is used deliberately so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod builder;
pub mod explore;
pub mod format;
pub mod gram;
pub mod membership;
pub mod minkowski;
pub mod trig;

pub use builder::{
    axis_intercepts, build, edge_lengths, export_off, measure, BuildError, EdgeLengths,
    Measurement, Tetrahedron,
};
pub use explore::{
    boundary_path, midpoint_counterexample, slice, AxisRange, Counterexample, ExploreError,
    PathTrace, SliceGrid, SliceSpec,
};
pub use gram::{
    gram_from_angles, milnor_check, normals_from_gram, GramError, GramMatrix, MilnorReport,
};
pub use membership::{
    classify, face_angles, is_member, DihedralAngles, FaceAngleTable, Kind, MembershipError,
    Status, Verdict, DEFAULT_TOL,
};
pub use minkowski::{BallPoint, HyperbolicPoint, MinkowskiError, MinkowskiVector, PlaneNormal};
pub use trig::VertexKind;
