use super::{PPDivError, PolyhedralDivisor};
use crate::base::PrimeDivisor;
use crate::exactnum::{poly_roots_quadratic, Field, Poly};

/// Base change of a divisor over Q to `Q(√d)`: each point splits into the
/// prime divisors over it, each with the same coefficient.
///
/// Degree-2 points split iff their roots lie in the new field. Rational cubics
/// stay irreducible over a quadratic extension. Higher degrees are rejected.
pub fn base_change(d: &PolyhedralDivisor, radicand: i64) -> Result<PolyhedralDivisor, PPDivError> {
    if d.base().field() != Field::Rationals {
        return Err(PPDivError::NotOverRationals);
    }
    let field = Field::quadratic(radicand)?;
    let mut entries = Vec::new();
    for (p, c) in d.entries() {
        match p {
            PrimeDivisor::Point(q) => match q.degree().unwrap_or(0) {
                1 | 3 => entries.push((p.clone(), c.clone())),
                2 => {
                    let roots = poly_roots_quadratic(q, field)?;
                    if roots.is_empty() {
                        entries.push((p.clone(), c.clone()));
                    } else {
                        for r in roots {
                            entries.push((PrimeDivisor::Point(Poly::linear(&r)), c.clone()));
                        }
                    }
                }
                _ => return Err(PPDivError::CannotCertifySplitting(q.to_string())),
            },
            _ => entries.push((p.clone(), c.clone())),
        }
    }
    let out = PolyhedralDivisor::new(d.lattice_rank(), d.tail().clone(), d.base().with_field(field), entries)?;
    Ok(if d.proper_by_construction() {
        out.mark_proper_by_construction()
    } else {
        out
    })
}
