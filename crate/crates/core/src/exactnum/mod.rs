//! Exact arithmetic: rationals, quadratic fields Q(√d) with conjugation, and
//! dense univariate polynomials over them.

pub mod linalg;
mod poly;
mod quad;
pub mod rational;

use thiserror::Error;

pub use poly::{poly_roots_quadratic, Poly};
pub use quad::{is_squarefree, Field, QuadElement};
pub use rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("polynomial of degree {0} exceeds the supported degree 2")]
    DegreeTooHigh(usize),
    #[error("the zero polynomial has no well-defined roots")]
    ZeroPolynomial,
    #[error("division by zero")]
    ZeroDivision,
    #[error("{0} is not a squarefree integer different from 0 and 1")]
    NotSquarefree(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn conjugate(x: &QuadElement) -> QuadElement {
    x.conjugate()
}
