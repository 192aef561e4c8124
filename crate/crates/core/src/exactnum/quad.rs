use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, int, parse_rational, rational_sqrt, Rational};
use super::ExactError;

/// The ground field of a computation: Q itself or a quadratic extension Q(√d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Quadratic(i64),
}

impl Field {
    pub fn quadratic(d: i64) -> Result<Self, ExactError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(ExactError::NotSquarefree(d));
        }
        Ok(Field::Quadratic(d))
    }

    /// The radicand, with 0 standing for Q.
    pub fn radicand(self) -> i64 {
        match self {
            Field::Rationals => 0,
            Field::Quadratic(d) => d,
        }
    }

    pub fn from_radicand(d: i64) -> Self {
        if d == 0 {
            Field::Rationals
        } else {
            Field::Quadratic(d)
        }
    }

    pub fn contains(self, x: &QuadElement) -> bool {
        x.b.is_zero() || x.d == self.radicand()
    }

    /// `"Q"` or `"Q(sqrt d)"`.
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        let inner = s
            .strip_prefix("Q(sqrt")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ExactError::Parse(format!("invalid field {s:?}")))?;
        let inner = inner.trim().trim_start_matches('(').trim_end_matches(')');
        let d: i64 = inner
            .trim()
            .parse()
            .map_err(|_| ExactError::Parse(format!("invalid field {s:?}")))?;
        Field::quadratic(d)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Quadratic(d) => write!(f, "Q(sqrt {d})"),
        }
    }
}

pub fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// An element `a + b√d` of Q(√d).
///
/// Elements with `b = 0` are rationals and combine with elements of any
/// field; `d = 0` marks an element created without reference to an extension.
#[derive(Clone, Debug)]
pub struct QuadElement {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl QuadElement {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        let d = if b.is_zero() && d == 0 { 0 } else { d };
        assert!(b.is_zero() || d != 0, "irrational part requires a radicand");
        QuadElement { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        QuadElement {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    /// √d itself.
    pub fn sqrt_d(d: i64) -> Self {
        QuadElement {
            a: Rational::zero(),
            b: Rational::one(),
            d,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Galois conjugation `a + b√d ↦ a − b√d`.
    pub fn conjugate(&self) -> Self {
        QuadElement {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inverse(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::ZeroDivision);
        }
        Ok(QuadElement {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        })
    }

    /// Re-tags a rational element as living in `field`.
    pub fn in_field(mut self, field: Field) -> Self {
        if self.b.is_zero() {
            self.d = field.radicand();
        }
        self
    }

    /// A square root inside Q(√d) for `d` the radicand of `field`, if one exists.
    pub fn sqrt_in(&self, field: Field) -> Option<QuadElement> {
        let d = field.radicand();
        if !field.contains(self) {
            return None;
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(QuadElement::rational(r).in_field(field));
            }
            if d == 0 {
                return None;
            }
            // a = d·r²  ⇒  √a = r√d
            let dq = int(d);
            let r = rational_sqrt(&(&self.a / &dq))?;
            return Some(QuadElement::new(Rational::zero(), r, d));
        }
        // (u + v√d)² = u² + d v² + 2uv √d
        let n = rational_sqrt(&self.norm())?;
        let half = Rational::new(1.into(), 2.into());
        for cand in [(&self.a + &n) * &half, (&self.a - &n) * &half] {
            if let Some(u) = rational_sqrt(&cand) {
                if u.is_zero() {
                    continue;
                }
                let v = &self.b / (&u + &u);
                let root = QuadElement::new(u, v, d);
                if &(&root * &root) == self {
                    return Some(root);
                }
            }
        }
        None
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadElement::one().in_field(Field::from_radicand(self.d));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || ExactError::Parse(format!("invalid field element {s:?}"));
        let Some(pos) = s.find("sqrt(") else {
            return Ok(QuadElement::rational(parse_rational(&s)?));
        };
        let close = s[pos..].find(')').ok_or_else(bad)? + pos;
        if close != s.len() - 1 {
            return Err(bad());
        }
        let d: i64 = s[pos + 5..close].parse().map_err(|_| bad())?;
        Field::quadratic(d)?;
        let head = &s[..pos];
        // head is "", "-", "b*", "a+b*", "a-b*", "a+", "a-"
        let head = head.strip_suffix('*').unwrap_or(head);
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !head[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        let (a_str, b_str) = match split {
            Some(i) => (&head[..i], &head[i..]),
            None => ("", head),
        };
        let a = if a_str.is_empty() {
            Rational::zero()
        } else {
            parse_rational(a_str)?
        };
        let b = match b_str {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other.trim_start_matches('+'))?,
        };
        Ok(QuadElement::new(a, b, d))
    }
}

fn merged_radicand(x: &QuadElement, y: &QuadElement) -> i64 {
    match (x.b.is_zero(), y.b.is_zero()) {
        _ if x.d == y.d => x.d,
        (true, true) => {
            if x.d == 0 {
                y.d
            } else {
                x.d
            }
        }
        (true, false) => y.d,
        (false, true) => x.d,
        (false, false) => panic!("mixing elements of Q(sqrt {}) and Q(sqrt {})", x.d, y.d),
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let b_abs = format_rational(&self.b.abs());
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{b_abs}*sqrt({})", self.d)
        } else {
            write!(f, "{}{sign}{b_abs}*sqrt({})", format_rational(&self.a), self.d)
        }
    }
}

impl PartialEq for QuadElement {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadElement {}

impl Hash for QuadElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
    }
}

impl PartialOrd for QuadElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.a.cmp(&other.a).then_with(|| self.b.cmp(&other.b))
    }
}

impl Zero for QuadElement {
    fn zero() -> Self {
        QuadElement::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadElement {
    fn one() -> Self {
        QuadElement::rational(Rational::one())
    }
}

impl<'a> Add<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn add(self, rhs: &QuadElement) -> QuadElement {
        let d = merged_radicand(self, rhs);
        QuadElement {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d,
        }
    }
}

impl<'a> Sub<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn sub(self, rhs: &QuadElement) -> QuadElement {
        let d = merged_radicand(self, rhs);
        QuadElement {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d,
        }
    }
}

impl<'a> Mul<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    fn mul(self, rhs: &QuadElement) -> QuadElement {
        let d = merged_radicand(self, rhs);
        let dq = Rational::from_integer(d.into());
        QuadElement {
            a: &self.a * &rhs.a + dq * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
    }
}

impl<'a> Div<&'a QuadElement> for &'a QuadElement {
    type Output = QuadElement;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadElement) -> QuadElement {
        self * &rhs.inverse().expect("division by zero in Q(sqrt d)")
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QuadElement {
            type Output = QuadElement;
            fn $m(self, rhs: QuadElement) -> QuadElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        -&self
    }
}
