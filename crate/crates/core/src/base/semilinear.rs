use std::fmt;

use num_traits::{One, Zero};

use super::{BaseError, BaseVariety, PrimeDivisor, QDivisor, RationalFunction};
use crate::exactnum::{Field, Poly, QuadElement};

/// An element of Gal(L/Q) for L = Q or Q(√d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    Identity,
    Conjugation,
}

impl Twist {
    pub fn compose(self, other: Twist) -> Twist {
        if self == other {
            Twist::Identity
        } else {
            Twist::Conjugation
        }
    }

    pub fn apply(self, x: &QuadElement) -> QuadElement {
        match self {
            Twist::Identity => x.clone(),
            Twist::Conjugation => x.conjugate(),
        }
    }

    pub fn apply_poly(self, p: &Poly) -> Poly {
        match self {
            Twist::Identity => p.clone(),
            Twist::Conjugation => p.conjugate(),
        }
    }

    pub fn apply_function(self, f: &RationalFunction) -> RationalFunction {
        match self {
            Twist::Identity => f.clone(),
            Twist::Conjugation => f.conjugate(),
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::Identity => write!(f, "id"),
            Twist::Conjugation => write!(f, "conj"),
        }
    }
}

/// A γ-semilinear automorphism ψ of a base, acting on functions by
/// `ψ*(f) = f^γ ∘ μ` where μ is the Möbius transformation
/// `t ↦ (a t + b)/(c t + d)` of the matrix `[[a, b], [c, d]]`.
///
/// Composition: `(ψ₂∘ψ₁)* = ψ₁*ψ₂*`, whose matrix is `M₂^{γ₁}·M₁` and twist `γ₂γ₁`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearBaseMap {
    pub matrix: [[QuadElement; 2]; 2],
    pub twist: Twist,
    pub field: Field,
}

impl SemilinearBaseMap {
    pub fn new(matrix: [[QuadElement; 2]; 2], twist: Twist, field: Field) -> Result<Self, BaseError> {
        if matrix.iter().flatten().any(|x| !field.contains(x)) {
            return Err(BaseError::InvalidMap(format!("matrix entries must lie in {field}")));
        }
        let det = &(&matrix[0][0] * &matrix[1][1]) - &(&matrix[0][1] * &matrix[1][0]);
        if det.is_zero() {
            return Err(BaseError::InvalidMap("matrix is singular".into()));
        }
        let twist = if field == Field::Rationals {
            Twist::Identity
        } else {
            twist
        };
        Ok(SemilinearBaseMap { matrix, twist, field })
    }

    pub fn identity(field: Field) -> Self {
        Self::twist_only(Twist::Identity, field)
    }

    /// Identity Möbius part with the given twist.
    pub fn twist_only(twist: Twist, field: Field) -> Self {
        let (o, z) = (QuadElement::one(), QuadElement::zero());
        Self::new([[o.clone(), z.clone()], [z, o]], twist, field).expect("identity is invertible")
    }

    /// `t ↦ 1/t` composed with the twist.
    pub fn swap(twist: Twist, field: Field) -> Self {
        let (o, z) = (QuadElement::one(), QuadElement::zero());
        Self::new([[z.clone(), o.clone()], [o, z]], twist, field).expect("swap is invertible")
    }

    fn entry(&self, i: usize, j: usize) -> &QuadElement {
        &self.matrix[i][j]
    }

    /// Whether the Möbius part is the identity (a scalar matrix).
    pub fn is_moebius_identity(&self) -> bool {
        let m = &self.matrix;
        m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1]
    }

    pub fn is_identity(&self) -> bool {
        self.twist == Twist::Identity && self.is_moebius_identity()
    }

    /// Equality as maps: same twist, matrices proportional.
    pub fn same_map(&self, other: &SemilinearBaseMap) -> bool {
        if self.twist != other.twist {
            return false;
        }
        let (a, b) = (&self.matrix, &other.matrix);
        // a ∝ b iff all 2×2 minors of the stacked entries vanish
        let xs: Vec<&QuadElement> = a.iter().flatten().collect();
        let ys: Vec<&QuadElement> = b.iter().flatten().collect();
        (0..4).all(|i| (0..4).all(|j| (xs[i] * ys[j]) == (xs[j] * ys[i])))
    }

    /// Checks that ψ maps `base` to itself.
    pub fn check_on(&self, base: &BaseVariety) -> Result<(), BaseError> {
        if base.field() != self.field {
            return Err(BaseError::InvalidMap(format!(
                "map is defined over {}, base over {}",
                self.field,
                base.field()
            )));
        }
        match base {
            BaseVariety::ProjLine(_) => Ok(()),
            BaseVariety::Toric { .. } => {
                if self.is_moebius_identity() {
                    Ok(())
                } else {
                    Err(BaseError::InvalidMap(
                        "only twists with identity coordinate part act on toric bases".into(),
                    ))
                }
            }
            BaseVariety::AffLine(_) | BaseVariety::Punctured { .. } => {
                let removed = base.removed_points();
                let mut pulled: Vec<PrimeDivisor> = removed
                    .iter()
                    .map(|p| self.pullback_prime(p))
                    .collect::<Result<_, _>>()?;
                pulled.sort();
                let mut r = removed.clone();
                r.sort();
                if pulled == r {
                    Ok(())
                } else {
                    Err(BaseError::InvalidMap("map does not preserve the removed points".into()))
                }
            }
        }
    }

    /// `ψ*[P]` for a prime divisor of P¹ or a toric ray.
    pub fn pullback_prime(&self, p: &PrimeDivisor) -> Result<PrimeDivisor, BaseError> {
        let (c, d) = (self.entry(1, 0), self.entry(1, 1));
        match p {
            PrimeDivisor::Ray(i) => {
                if self.is_moebius_identity() {
                    Ok(PrimeDivisor::Ray(*i))
                } else {
                    Err(BaseError::InvalidMap(
                        "toric rays admit only identity coordinate maps".into(),
                    ))
                }
            }
            PrimeDivisor::Infinity => {
                if c.is_zero() {
                    Ok(PrimeDivisor::Infinity)
                } else {
                    Ok(PrimeDivisor::at(&-&(d / c)))
                }
            }
            PrimeDivisor::Point(q) => {
                let n = q.degree().unwrap_or(0);
                let twisted = self.twist.apply_poly(q);
                let sub = twisted.moebius_substitute(&self.matrix, n);
                match sub.degree() {
                    Some(k) if k == n => Ok(PrimeDivisor::Point(sub.monic())),
                    Some(0) => Ok(PrimeDivisor::Infinity),
                    _ => Err(BaseError::InvalidMap(format!("degenerate pullback of {p}"))),
                }
            }
        }
    }

    pub fn pullback_divisor(&self, d: &QDivisor) -> Result<QDivisor, BaseError> {
        let mut out = QDivisor::zero();
        for (p, c) in d.entries() {
            out.add_term(self.pullback_prime(p)?, c.clone());
        }
        Ok(out)
    }

    /// `ψ*(f) = f^γ ∘ μ`.
    pub fn pullback_function(&self, f: &RationalFunction) -> RationalFunction {
        let c = self.entry(1, 0);
        let d = self.entry(1, 1);
        let mut out = RationalFunction::constant(self.twist.apply(f.constant_part()));
        let mut denominator_exp = 0i64;
        for (p, e) in f.factors() {
            let n = p.degree().unwrap_or(0);
            let sub = self.twist.apply_poly(p).moebius_substitute(&self.matrix, n);
            out = out.mul(&RationalFunction::from_factors(QuadElement::one(), [(sub, *e)]));
            denominator_exp += e * n as i64;
        }
        let den = Poly::new(vec![d.clone(), c.clone()]);
        out.mul(&RationalFunction::from_factors(
            QuadElement::one(),
            [(den, -denominator_exp)],
        ))
    }

    /// `self ∘ first`: the map whose pullback is `first* ∘ self*`.
    pub fn after(&self, first: &SemilinearBaseMap) -> Result<SemilinearBaseMap, BaseError> {
        if self.field != first.field {
            return Err(BaseError::InvalidMap("maps over different fields".into()));
        }
        let m2: Vec<Vec<QuadElement>> = self
            .matrix
            .iter()
            .map(|row| row.iter().map(|x| first.twist.apply(x)).collect())
            .collect();
        let m1 = &first.matrix;
        let prod = |i: usize, j: usize| &(&m2[i][0] * &m1[0][j]) + &(&m2[i][1] * &m1[1][j]);
        SemilinearBaseMap::new(
            [[prod(0, 0), prod(0, 1)], [prod(1, 0), prod(1, 1)]],
            self.twist.compose(first.twist),
            self.field,
        )
    }
}

impl fmt::Display for SemilinearBaseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "t -> ({}*t + {})/({}*t + {}) with twist {}",
            m[0][0], m[0][1], m[1][0], m[1][1], self.twist
        )
    }
}
