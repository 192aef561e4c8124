use std::fmt;

use num_traits::{One, Signed, ToPrimitive};

use super::{degree, BaseError, BaseVariety, PrimeDivisor, QDivisor, RationalFunction};
use crate::exactnum::{Poly, QuadElement};

/// Dimension of a space of sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SectionDim {
    Finite(usize),
    Infinite,
}

impl SectionDim {
    pub fn finite(self) -> Option<usize> {
        match self {
            SectionDim::Finite(n) => Some(n),
            SectionDim::Infinite => None,
        }
    }
}

impl fmt::Display for SectionDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionDim::Finite(n) => write!(f, "{n}"),
            SectionDim::Infinite => write!(f, "inf"),
        }
    }
}

fn curve_only(base: &BaseVariety) -> Result<(), BaseError> {
    if base.is_curve() {
        Ok(())
    } else {
        Err(BaseError::UnsupportedBase(
            "section spaces on toric bases are computed per character".into(),
        ))
    }
}

/// `Π p^{−⌊c_p⌋}` over the finite points of `d`.
fn denominator_function(floor: &QDivisor) -> RationalFunction {
    RationalFunction::from_factors(
        QuadElement::one(),
        floor.entries().iter().filter_map(|(p, c)| match p {
            PrimeDivisor::Point(q) => Some((q.clone(), -c.to_integer().to_i64().expect("small"))),
            _ => None,
        }),
    )
}

fn removed_finite_product(base: &BaseVariety) -> Poly {
    base.removed_points()
        .iter()
        .filter_map(|p| p.poly().cloned())
        .fold(Poly::one(), |acc, q| acc.mul(&q))
}

pub fn global_sections_dim(d: &QDivisor, base: &BaseVariety) -> Result<SectionDim, BaseError> {
    curve_only(base)?;
    match base {
        BaseVariety::ProjLine(_) => {
            let deg = degree(&d.restrict(base).floor(), base)?;
            if deg.is_negative() {
                Ok(SectionDim::Finite(0))
            } else {
                Ok(SectionDim::Finite(
                    deg.to_integer().to_usize().expect("degree fits") + 1,
                ))
            }
        }
        // every divisor on an affine curve has nonzero sections
        _ => Ok(SectionDim::Infinite),
    }
}

/// A basis of `{f : div(f) + ⌊D⌋ ≥ 0}` of the form `φ_D · tʲ`, with
/// `φ_D = Π p^{−⌊c_p⌋}`. On affine curves the space is infinite-dimensional and
/// the basis is truncated: numerator degree at most `degree_bound`, and on P¹
/// with finite points removed, pole order at most `degree_bound` there.
pub fn global_sections_basis(
    d: &QDivisor,
    base: &BaseVariety,
    degree_bound: usize,
) -> Result<Vec<RationalFunction>, BaseError> {
    curve_only(base)?;
    let floor = d.restrict(base).floor();
    let phi = denominator_function(&floor);
    let q = removed_finite_product(base);
    let dq = q.degree().unwrap_or(0);
    let level = if dq > 0 { degree_bound } else { 0 };
    let top: i64 = if base.contains(&PrimeDivisor::Infinity) {
        let deg = degree(&floor, base)?.to_integer().to_i64().expect("small");
        deg + (level * dq) as i64
    } else {
        (degree_bound + level * dq) as i64
    };
    let shifted = if level > 0 {
        phi.mul(&RationalFunction::from_factors(
            QuadElement::one(),
            [(q, -(level as i64))],
        ))
    } else {
        phi
    };
    Ok((0..=top).map(|j| shifted.mul(&RationalFunction::t().pow(j))).collect())
}

/// `div(f) + ⌊D⌋ ≥ 0` on the base.
pub fn is_section(f: &RationalFunction, d: &QDivisor, base: &BaseVariety) -> bool {
    let floor = d.restrict(base).floor();
    let mut points: Vec<PrimeDivisor> = floor.entries().keys().cloned().collect();
    points.extend(f.factors().keys().map(|p| PrimeDivisor::Point(p.clone())));
    points.push(PrimeDivisor::Infinity);
    points
        .iter()
        .filter(|p| base.contains(p))
        .all(|p| f.order_at(p) + floor.int_coeff(p) >= 0)
}
