use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use super::quad::{Field, QuadElement};
use super::ExactError;

/// Dense univariate polynomial over Q or Q(√d), coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<QuadElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<QuadElement>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| QuadElement::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: QuadElement) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(QuadElement::one())
    }

    /// The coordinate `t`.
    pub fn t() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `t − α`.
    pub fn linear(root: &QuadElement) -> Self {
        Poly::new(vec![-root, QuadElement::one()])
    }

    pub fn monomial(c: QuadElement, degree: usize) -> Self {
        let mut coeffs = vec![QuadElement::zero(); degree];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[QuadElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&QuadElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> QuadElement {
        self.coeffs.get(i).cloned().unwrap_or_else(QuadElement::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &QuadElement) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Applies the Galois conjugation to every coefficient.
    pub fn conjugate(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(QuadElement::conjugate).collect())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(QuadElement::is_rational)
    }

    /// Smallest field containing the coefficients.
    pub fn field(&self) -> Field {
        self.coeffs
            .iter()
            .find(|c| !c.is_rational())
            .map_or(Field::Rationals, |c| Field::Quadratic(c.d))
    }

    pub fn eval(&self, x: &QuadElement) -> QuadElement {
        self.coeffs
            .iter()
            .rev()
            .fold(QuadElement::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![QuadElement::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), ExactError> {
        let dl = divisor.lead().ok_or(ExactError::ZeroDivision)?.inverse()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![QuadElement::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Multiplicity of `factor` as a divisor of `self` (`self` nonzero).
    pub fn multiplicity(&self, factor: &Poly) -> usize {
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            match p.div_rem(factor) {
                Ok((q, r)) if r.is_zero() => {
                    p = q;
                    k += 1;
                }
                _ => break,
            }
        }
        k
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Substitutes `t ↦ (a t + b)/(c t + d)` and clears the denominator
    /// `(c t + d)^n` where `n` is `degree_bound` (at least the degree).
    pub fn moebius_substitute(&self, m: &[[QuadElement; 2]; 2], degree_bound: usize) -> Poly {
        let num = Poly::new(vec![m[0][1].clone(), m[0][0].clone()]);
        let den = Poly::new(vec![m[1][1].clone(), m[1][0].clone()]);
        let mut out = Poly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let term = num.pow(i as u32).mul(&den.pow((degree_bound - i) as u32)).scale(c);
            out = out.add(&term);
        }
        out
    }

    /// Display with variable `t`.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_rational() {
                c.to_string()
            } else {
                format!("({c})")
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => mono,
                (_, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by degree first, then coefficients from the constant term up.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// All roots of `p` lying in `field`, with multiplicity. Supports degree ≤ 2.
pub fn poly_roots_quadratic(p: &Poly, field: Field) -> Result<Vec<QuadElement>, ExactError> {
    match p.degree() {
        None => Err(ExactError::ZeroPolynomial),
        Some(0) => Ok(Vec::new()),
        Some(1) => {
            let r = -&(&p.coeff(0) / &p.coeff(1));
            Ok(vec![r.in_field(field)])
        }
        Some(2) => {
            let (c, b, a) = (p.coeff(0), p.coeff(1), p.coeff(2));
            let four = QuadElement::from_int(4);
            let disc = &(&b * &b) - &(&(&four * &a) * &c);
            let Some(s) = disc.sqrt_in(field) else {
                return Ok(Vec::new());
            };
            let two_a = &a + &a;
            let mut roots = vec![
                (&(-&b + s.clone()) / &two_a).in_field(field),
                (&(-&b - s) / &two_a).in_field(field),
            ];
            roots.sort();
            Ok(roots)
        }
        Some(n) => Err(ExactError::DegreeTooHigh(n)),
    }
}
