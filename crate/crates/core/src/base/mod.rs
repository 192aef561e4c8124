//! Base varieties of polyhedral divisors: P¹ and A¹ over Q or Q(√d), P¹ with
//! finitely many points removed, and toric varieties from fans. Prime divisors,
//! Q-divisors, factored rational functions and spaces of global sections.

mod function;
mod sections;
mod semilinear;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::convex::ToricFan;
use crate::exactnum::rational::format_rational;
use crate::exactnum::{poly_roots_quadratic, ExactError, Field, Poly, QuadElement, Rational};

pub use function::RationalFunction;
pub use sections::{global_sections_basis, global_sections_dim, is_section, SectionDim};
pub use semilinear::{SemilinearBaseMap, Twist};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseError {
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("factor {0} is reducible over the base field")]
    ReducibleFactor(String),
    #[error("{0} is not a point: expected a monic nonconstant polynomial")]
    NotAPoint(String),
    #[error("prime divisor {0} does not lie on the base")]
    NotOnBase(String),
    #[error("coefficients of {0} do not lie in the base field {1}")]
    FieldMismatch(String, Field),
    #[error("invalid base map: {0}")]
    InvalidMap(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How the irreducibility of a point's polynomial is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Proved by the absence of roots (degree ≤ 3).
    Verified,
    /// Degree too high for the root test; taken on trust.
    Asserted,
}

/// Checks that `p` defines a closed point of A¹ over `field`.
pub fn check_point(p: &Poly, field: Field) -> Result<Irreducibility, BaseError> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 || !p.is_monic() {
        return Err(BaseError::NotAPoint(p.to_string()));
    }
    if !p.coeffs().iter().all(|c| field.contains(c)) {
        return Err(BaseError::FieldMismatch(p.to_string(), field));
    }
    match deg {
        1 => Ok(Irreducibility::Verified),
        2 => {
            if poly_roots_quadratic(p, field)?.is_empty() {
                Ok(Irreducibility::Verified)
            } else {
                Err(BaseError::ReducibleFactor(p.to_string()))
            }
        }
        // A cubic over Q stays irreducible over a quadratic field iff it has no
        // rational root (a root would generate a cubic subextension).
        3 if p.is_rational() => {
            if has_rational_root(p) {
                Err(BaseError::ReducibleFactor(p.to_string()))
            } else {
                Ok(Irreducibility::Verified)
            }
        }
        _ => Ok(Irreducibility::Asserted),
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let limit = n.sqrt();
    let mut out = Vec::new();
    let mut k = BigInt::from(1);
    while k <= limit {
        if (&n % &k).is_zero() {
            out.push(k.clone());
            out.push(&n / &k);
        }
        k += 1;
    }
    out
}

/// Rational root test for a polynomial with rational coefficients.
fn has_rational_root(p: &Poly) -> bool {
    let coeffs: Vec<Rational> = p.coeffs().iter().map(|c| c.a.clone()).collect();
    if coeffs[0].is_zero() {
        return true;
    }
    let den = coeffs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
        .collect();
    let lead = ints.last().expect("nonzero polynomial");
    for num in divisors(&ints[0]) {
        for dn in divisors(lead) {
            for sign in [1, -1] {
                let r = Rational::new(&num * sign, dn.clone());
                if p.eval(&QuadElement::rational(r)).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// A prime divisor of a base: a closed point of P¹ given by a monic
/// irreducible polynomial in the affine coordinate `t`, the point at infinity,
/// or the torus-invariant divisor of a ray of a toric base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeDivisor {
    Point(Poly),
    Infinity,
    Ray(usize),
}

impl PrimeDivisor {
    /// The point `t = a`.
    pub fn at(a: &QuadElement) -> Self {
        PrimeDivisor::Point(Poly::linear(a))
    }

    pub fn at_int(a: i64) -> Self {
        Self::at(&QuadElement::from_int(a))
    }

    /// Degree of the residue field over the base field.
    pub fn degree(&self) -> usize {
        match self {
            PrimeDivisor::Point(p) => p.degree().unwrap_or(0),
            PrimeDivisor::Infinity | PrimeDivisor::Ray(_) => 1,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            PrimeDivisor::Point(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for PrimeDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeDivisor::Point(p) => match p.degree() {
                Some(1) => write!(f, "{{t={}}}", -&p.coeff(0)),
                _ => write!(f, "[{p}]"),
            },
            PrimeDivisor::Infinity => write!(f, "{{inf}}"),
            PrimeDivisor::Ray(i) => write!(f, "D_{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseVariety {
    ProjLine(Field),
    AffLine(Field),
    /// P¹ with a nonempty set of points removed (other than exactly `{∞}`,
    /// which is `AffLine`). Always affine.
    Punctured {
        field: Field,
        removed: Vec<PrimeDivisor>,
    },
    Toric {
        fan: ToricFan,
        field: Field,
    },
}

impl BaseVariety {
    pub fn field(&self) -> Field {
        match self {
            BaseVariety::ProjLine(f) | BaseVariety::AffLine(f) => *f,
            BaseVariety::Punctured { field, .. } | BaseVariety::Toric { field, .. } => *field,
        }
    }

    pub fn is_curve(&self) -> bool {
        !matches!(self, BaseVariety::Toric { .. })
    }

    pub fn is_affine_curve(&self) -> bool {
        matches!(self, BaseVariety::AffLine(_) | BaseVariety::Punctured { .. })
    }

    pub fn with_field(&self, field: Field) -> BaseVariety {
        match self {
            BaseVariety::ProjLine(_) => BaseVariety::ProjLine(field),
            BaseVariety::AffLine(_) => BaseVariety::AffLine(field),
            BaseVariety::Punctured { removed, .. } => BaseVariety::Punctured {
                field,
                removed: removed.clone(),
            },
            BaseVariety::Toric { fan, .. } => BaseVariety::Toric {
                fan: fan.clone(),
                field,
            },
        }
    }

    /// Points of P¹ missing from this curve.
    pub fn removed_points(&self) -> Vec<PrimeDivisor> {
        match self {
            BaseVariety::ProjLine(_) | BaseVariety::Toric { .. } => Vec::new(),
            BaseVariety::AffLine(_) => vec![PrimeDivisor::Infinity],
            BaseVariety::Punctured { removed, .. } => removed.clone(),
        }
    }

    pub fn contains(&self, p: &PrimeDivisor) -> bool {
        match (self, p) {
            (BaseVariety::Toric { fan, .. }, PrimeDivisor::Ray(i)) => *i < fan.rays.len(),
            (BaseVariety::Toric { .. }, _) | (_, PrimeDivisor::Ray(_)) => false,
            (curve, p) => !curve.removed_points().contains(p),
        }
    }

    /// Validates a prime divisor against this base.
    pub fn check_divisor(&self, p: &PrimeDivisor) -> Result<Irreducibility, BaseError> {
        if !self.contains(p) {
            return Err(BaseError::NotOnBase(p.to_string()));
        }
        match p {
            PrimeDivisor::Point(q) => check_point(q, self.field()),
            _ => Ok(Irreducibility::Verified),
        }
    }

    /// The open subset obtained by deleting `points`.
    pub fn remove(&self, points: &[PrimeDivisor]) -> Result<BaseVariety, BaseError> {
        if !self.is_curve() {
            if points.is_empty() {
                return Ok(self.clone());
            }
            return Err(BaseError::UnsupportedBase("removing divisors from a toric base".into()));
        }
        let mut removed = self.removed_points();
        for p in points {
            if !removed.contains(p) {
                removed.push(p.clone());
            }
        }
        removed.sort();
        let field = self.field();
        Ok(match removed.as_slice() {
            [] => BaseVariety::ProjLine(field),
            [PrimeDivisor::Infinity] => BaseVariety::AffLine(field),
            _ => BaseVariety::Punctured { field, removed },
        })
    }

    pub fn describe(&self) -> String {
        match self {
            BaseVariety::ProjLine(f) => format!("P1 over {f}"),
            BaseVariety::AffLine(f) => format!("A1 over {f}"),
            BaseVariety::Punctured { field, removed } => {
                let r: Vec<String> = removed.iter().map(ToString::to_string).collect();
                format!("P1 minus {} over {field}", r.join(", "))
            }
            BaseVariety::Toric { fan, field } if fan.rank == 0 => format!("a point over {field}"),
            BaseVariety::Toric { fan, field } => {
                let r: Vec<String> = fan.rays.iter().map(ToString::to_string).collect();
                format!("toric variety with rays {} over {field}", r.join(", "))
            }
        }
    }
}

impl fmt::Display for BaseVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// A Q-linear combination of prime divisors; zero coefficients are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QDivisor {
    entries: BTreeMap<PrimeDivisor, Rational>,
}

impl QDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (PrimeDivisor, Rational)>) -> Self {
        let mut d = Self::zero();
        for (p, c) in entries {
            d.add_term(p, c);
        }
        d
    }

    pub fn single(p: PrimeDivisor, c: Rational) -> Self {
        Self::from_entries([(p, c)])
    }

    pub fn add_term(&mut self, p: PrimeDivisor, c: Rational) {
        let e = self.entries.entry(p.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&p);
        }
    }

    pub fn coeff(&self, p: &PrimeDivisor) -> Rational {
        self.entries.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<PrimeDivisor, Rational> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        let mut d = self.clone();
        for (p, c) in &other.entries {
            d.add_term(p.clone(), c.clone());
        }
        d
    }

    pub fn neg(&self) -> QDivisor {
        QDivisor {
            entries: self.entries.iter().map(|(p, c)| (p.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &QDivisor) -> QDivisor {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> QDivisor {
        QDivisor::from_entries(self.entries.iter().map(|(p, c)| (p.clone(), c * k)))
    }

    pub fn floor(&self) -> QDivisor {
        QDivisor::from_entries(
            self.entries
                .iter()
                .map(|(p, c)| (p.clone(), Rational::from_integer(c.floor().to_integer()))),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.entries.values().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|c| !c.is_negative())
    }

    /// Entrywise `self ≤ other`.
    pub fn leq(&self, other: &QDivisor) -> bool {
        other.sub(self).is_effective()
    }

    /// Drops the prime divisors not lying on `base`.
    pub fn restrict(&self, base: &BaseVariety) -> QDivisor {
        QDivisor {
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| base.contains(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    /// Integer coefficient, for integral divisors.
    pub fn int_coeff(&self, p: &PrimeDivisor) -> i64 {
        let c = self.coeff(p);
        assert!(c.is_integer(), "coefficient is not an integer");
        c.to_integer().to_i64().expect("coefficient exceeds i64")
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(p, c)| format!("{}*{p}", format_rational(c)))
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

pub fn floor_divisor(d: &QDivisor) -> QDivisor {
    d.floor()
}

/// `Σ coeff(P)·deg(P)` on a curve base.
pub fn degree(d: &QDivisor, base: &BaseVariety) -> Result<Rational, BaseError> {
    if !base.is_curve() {
        return Err(BaseError::UnsupportedBase(
            "degrees are defined on curve bases only".into(),
        ));
    }
    Ok(d.entries
        .iter()
        .map(|(p, c)| c * Rational::from_integer(BigInt::from(p.degree())))
        .sum())
}

/// Principal divisor of a factored rational function, restricted to the base.
pub fn divisor_of(f: &RationalFunction, base: &BaseVariety) -> Result<QDivisor, BaseError> {
    if !base.is_curve() {
        return Err(BaseError::UnsupportedBase(
            "rational functions on toric bases are handled character by character".into(),
        ));
    }
    for p in f.factors().keys() {
        check_point(p, base.field())?;
    }
    Ok(f.divisor_on_p1().restrict(base))
}

pub fn pullback_divisor(psi: &SemilinearBaseMap, d: &QDivisor) -> Result<QDivisor, BaseError> {
    psi.pullback_divisor(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    #[test]
    fn point_checks() {
        let q = Field::Rationals;
        assert_eq!(
            check_point(&Poly::from_ints(&[1, 0, 1]), q).unwrap(),
            Irreducibility::Verified
        );
        assert!(check_point(&Poly::from_ints(&[-1, 0, 1]), q).is_err());
        assert!(check_point(&Poly::from_ints(&[1, 0, 1]), Field::Quadratic(-1)).is_err());
        assert_eq!(
            check_point(&Poly::from_ints(&[-2, 0, 0, 1]), q).unwrap(),
            Irreducibility::Verified
        );
        assert!(check_point(&Poly::from_ints(&[-8, 0, 0, 1]), q).is_err());
        assert_eq!(
            check_point(&Poly::from_ints(&[1, 0, 0, 0, 1]), q).unwrap(),
            Irreducibility::Asserted
        );
        assert!(check_point(&Poly::from_ints(&[1, 2]), q).is_err());
    }

    #[test]
    fn floors_and_degrees() {
        let p0 = PrimeDivisor::at_int(0);
        let d = QDivisor::from_entries([(p0.clone(), rat(3, 2)), (PrimeDivisor::Infinity, rat(-1, 2))]);
        assert_eq!(
            d.floor(),
            QDivisor::from_entries([(p0.clone(), int(1)), (PrimeDivisor::Infinity, int(-1))])
        );
        assert_eq!(
            QDivisor::single(p0.clone(), rat(-1, 3)).floor(),
            QDivisor::single(p0.clone(), int(-1))
        );
        let p1 = BaseVariety::ProjLine(Field::Rationals);
        let principal = QDivisor::from_entries([(p0, int(1)), (PrimeDivisor::Infinity, int(-1))]);
        assert_eq!(degree(&principal, &p1).unwrap(), int(0));
        let deg2 = QDivisor::single(PrimeDivisor::Point(Poly::from_ints(&[1, 0, 1])), rat(1, 2));
        assert_eq!(degree(&deg2, &p1).unwrap(), int(1));
    }

    #[test]
    fn divisors_of_functions() {
        let p1 = BaseVariety::ProjLine(Field::Rationals);
        let t = RationalFunction::t();
        assert_eq!(
            divisor_of(&t, &p1).unwrap(),
            QDivisor::from_entries([(PrimeDivisor::at_int(0), int(1)), (PrimeDivisor::Infinity, int(-1))])
        );
        let f = RationalFunction::from_poly_factor(Poly::from_ints(&[1, 0, 1]), 1);
        assert_eq!(
            divisor_of(&f, &p1).unwrap(),
            QDivisor::from_entries([
                (PrimeDivisor::Point(Poly::from_ints(&[1, 0, 1])), int(1)),
                (PrimeDivisor::Infinity, int(-2))
            ])
        );
        let c = RationalFunction::constant(QuadElement::from_int(7));
        assert!(divisor_of(&c, &p1).unwrap().is_zero());
        let a1 = BaseVariety::AffLine(Field::Rationals);
        assert_eq!(
            divisor_of(&t, &a1).unwrap(),
            QDivisor::single(PrimeDivisor::at_int(0), int(1))
        );
        let bad = RationalFunction::from_poly_factor(Poly::from_ints(&[-1, 0, 1]), 1);
        assert!(matches!(divisor_of(&bad, &p1), Err(BaseError::ReducibleFactor(_))));
    }

    #[test]
    fn removing_points() {
        let p1 = BaseVariety::ProjLine(Field::Rationals);
        assert_eq!(
            p1.remove(&[PrimeDivisor::Infinity]).unwrap(),
            BaseVariety::AffLine(Field::Rationals)
        );
        let u = p1.remove(&[PrimeDivisor::at_int(0)]).unwrap();
        assert!(matches!(u, BaseVariety::Punctured { .. }));
        assert!(!u.contains(&PrimeDivisor::at_int(0)));
        assert!(u.contains(&PrimeDivisor::Infinity));
    }
}
