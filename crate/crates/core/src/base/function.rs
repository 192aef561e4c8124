use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{PrimeDivisor, QDivisor};
use crate::exactnum::{Poly, QuadElement, Rational};

/// `constant · Π pᵢ^{eᵢ}` in the affine coordinate `t`, with monic nonconstant
/// pairwise distinct `pᵢ` and nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    constant: QuadElement,
    factors: BTreeMap<Poly, i64>,
}

fn qpow(x: &QuadElement, e: i64) -> QuadElement {
    let p = x.pow(e.unsigned_abs() as u32);
    if e < 0 {
        p.inverse().expect("nonzero base")
    } else {
        p
    }
}

impl RationalFunction {
    pub fn one() -> Self {
        Self::constant(QuadElement::one())
    }

    pub fn constant(c: QuadElement) -> Self {
        assert!(!c.is_zero(), "the zero function is not a unit");
        RationalFunction {
            constant: c,
            factors: BTreeMap::new(),
        }
    }

    pub fn t() -> Self {
        Self::from_poly_factor(Poly::t(), 1)
    }

    /// `p^e`, normalizing `p` to be monic.
    pub fn from_poly_factor(p: Poly, e: i64) -> Self {
        Self::from_factors(QuadElement::one(), [(p, e)])
    }

    pub fn from_factors(constant: QuadElement, factors: impl IntoIterator<Item = (Poly, i64)>) -> Self {
        let mut f = Self::constant(constant);
        for (p, e) in factors {
            f.mul_factor(p, e);
        }
        f
    }

    fn mul_factor(&mut self, p: Poly, e: i64) {
        if e == 0 {
            return;
        }
        let lead = p.lead().expect("the zero polynomial is not a factor").clone();
        self.constant = &self.constant * &qpow(&lead, e);
        if p.degree() == Some(0) {
            return;
        }
        let m = p.monic();
        let entry = self.factors.entry(m.clone()).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.remove(&m);
        }
    }

    pub fn constant_part(&self) -> &QuadElement {
        &self.constant
    }

    pub fn factors(&self) -> &BTreeMap<Poly, i64> {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant.is_one()
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        let mut f = self.clone();
        f.constant = &f.constant * &other.constant;
        for (p, e) in &other.factors {
            f.mul_factor(p.clone(), *e);
        }
        f
    }

    pub fn pow(&self, k: i64) -> RationalFunction {
        if k == 0 {
            return Self::one();
        }
        RationalFunction {
            constant: qpow(&self.constant, k),
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    pub fn inv(&self) -> RationalFunction {
        self.pow(-1)
    }

    pub fn div(&self, other: &RationalFunction) -> RationalFunction {
        self.mul(&other.inv())
    }

    /// Applies the Galois conjugation to all coefficients.
    pub fn conjugate(&self) -> RationalFunction {
        Self::from_factors(
            self.constant.conjugate(),
            self.factors.iter().map(|(p, e)| (p.conjugate(), *e)),
        )
    }

    /// `(numerator, denominator)` as expanded polynomials, constant in the numerator.
    pub fn numerator_denominator(&self) -> (Poly, Poly) {
        let mut num = Poly::constant(self.constant.clone());
        let mut den = Poly::one();
        for (p, e) in &self.factors {
            if *e > 0 {
                num = num.mul(&p.pow(*e as u32));
            } else {
                den = den.mul(&p.pow((-e) as u32));
            }
        }
        (num, den)
    }

    /// Value at a point where the function is regular and nonzero.
    pub fn eval(&self, x: &QuadElement) -> Option<QuadElement> {
        let (n, d) = self.numerator_denominator();
        let dv = d.eval(x);
        if dv.is_zero() {
            return None;
        }
        Some(&n.eval(x) / &dv)
    }

    /// Order of vanishing at a prime divisor of P¹ (factors assumed irreducible).
    pub fn order_at(&self, p: &PrimeDivisor) -> i64 {
        match p {
            PrimeDivisor::Point(q) => self.factors.get(q).copied().unwrap_or(0),
            PrimeDivisor::Infinity => -self
                .factors
                .iter()
                .map(|(q, e)| e * q.degree().unwrap_or(0) as i64)
                .sum::<i64>(),
            PrimeDivisor::Ray(_) => 0,
        }
    }

    /// `Σ eᵢ[pᵢ] − (Σ eᵢ deg pᵢ)[∞]` on P¹.
    pub fn divisor_on_p1(&self) -> QDivisor {
        let mut d = QDivisor::zero();
        let mut total = 0i64;
        for (p, e) in &self.factors {
            d.add_term(PrimeDivisor::Point(p.clone()), Rational::from_integer(BigInt::from(*e)));
            total += e * p.degree().unwrap_or(0) as i64;
        }
        d.add_term(PrimeDivisor::Infinity, Rational::from_integer(BigInt::from(-total)));
        d
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_one() || self.factors.is_empty() {
            if self.constant.is_rational() {
                parts.push(self.constant.to_string());
            } else {
                parts.push(format!("({})", self.constant));
            }
        }
        for (p, e) in &self.factors {
            let base = if p.degree() == Some(1) && p.coeff(0).is_zero() {
                "t".to_string()
            } else {
                format!("({p})")
            };
            if *e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{e}"));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}
