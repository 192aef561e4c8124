//! Exact convex geometry over Q: cones in canonical double description,
//! quasifans, tailed polyhedra, Minkowski sums and support functions.

mod cone;
pub(crate) mod dd;
mod fan;
mod polyhedron;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use cone::Cone;
pub use fan::{common_refinement, Quasifan, ToricFan};
pub use polyhedron::{
    format_qvector, lattice_to_q, pair, polyhedron_from_support, qvec, Coefficient, FormalDifference, QVector, Support,
    TailedPolyhedron,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvexError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("the covector is not in the dual cone")]
    NotInDual,
    #[error("the covector is outside the dual of the tail cone")]
    OutsideDual,
    #[error("the cone is not pointed")]
    NotPointed,
    #[error("the polyhedron is empty")]
    EmptyPolyhedron,
    #[error("tail cones differ")]
    TailMismatch,
    #[error("inconsistent support data: {0}")]
    Inconsistent(String),
    #[error("not a fan: {0}")]
    NotAFan(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}

pub fn face(c: &Cone, m: &crate::lattice::LatticeVector) -> Result<Cone, ConvexError> {
    c.face(m)
}

pub fn is_pointed(c: &Cone) -> bool {
    c.is_pointed()
}

pub fn minkowski_sum(a: &TailedPolyhedron, b: &TailedPolyhedron) -> Result<TailedPolyhedron, ConvexError> {
    a.minkowski_sum(b)
}

pub fn support_eval(d: &Coefficient, m: &crate::lattice::LatticeVector) -> Support {
    d.support(m)
}

pub fn normal_quasifan(d: &TailedPolyhedron) -> Quasifan {
    d.normal_quasifan()
}

pub fn eval_difference(
    fd: &FormalDifference,
    m: &crate::lattice::LatticeVector,
) -> Result<crate::exactnum::Rational, ConvexError> {
    fd.eval(m)
}

pub fn is_integral(d: &TailedPolyhedron) -> bool {
    d.is_integral()
}
