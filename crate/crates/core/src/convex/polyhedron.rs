use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::cone::{primitive_of_rational, Cone};
use super::dd::IVec;
use super::fan::Quasifan;
use super::ConvexError;
use crate::exactnum::rational::format_rational;
use crate::exactnum::Rational;
use crate::lattice::{LatticeMorphism, LatticeVector};

/// A point of `N_Q`.
pub type QVector = Vec<Rational>;

pub fn qvec(v: &[i64]) -> QVector {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

pub fn lattice_to_q(v: &LatticeVector) -> QVector {
    qvec(&v.0)
}

/// `⟨m, x⟩` for a lattice covector and a rational point.
pub fn pair(m: &LatticeVector, x: &[Rational]) -> Rational {
    m.0.iter()
        .zip(x)
        .filter(|(a, _)| **a != 0)
        .map(|(a, y)| y * Rational::from_integer(BigInt::from(*a)))
        .sum()
}

pub fn format_qvector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

/// Value of a support function; `NegInf` outside the dual of the tail.
/// `(a, b)` standing for `⟨a, x⟩` compared with `b`.
pub type AffineForm = (LatticeVector, Rational);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Support {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Support {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Support::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::NegInf => write!(f, "-inf"),
            Support::PosInf => write!(f, "+inf"),
            Support::Finite(q) => write!(f, "{}", format_rational(q)),
        }
    }
}

/// `Δ = conv(vertices) + tail` with pointed tail, stored by its minimal vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TailedPolyhedron {
    rank: usize,
    vertices: Vec<QVector>,
    tail: Cone,
    // cone over Δ × {1} in Q^{rank+1}; its facets give the H-representation
    homogenized: Cone,
}

fn homogenize_point(v: &[Rational]) -> IVec {
    let mut w = v.to_vec();
    w.push(Rational::from_integer(BigInt::from(1)));
    primitive_of_rational(&w)
}

fn homogenize_direction(v: &LatticeVector) -> IVec {
    let mut w: IVec = v.0.iter().map(|&x| x as i128).collect();
    w.push(0);
    w
}

impl TailedPolyhedron {
    pub fn new(rank: usize, points: &[QVector], tail: &Cone) -> Result<Self, ConvexError> {
        if tail.rank() != rank {
            return Err(ConvexError::RankMismatch {
                expected: rank,
                found: tail.rank(),
            });
        }
        if let Some(p) = points.iter().find(|p| p.len() != rank) {
            return Err(ConvexError::RankMismatch {
                expected: rank,
                found: p.len(),
            });
        }
        if points.is_empty() {
            return Err(ConvexError::EmptyPolyhedron);
        }
        if !tail.is_pointed() {
            return Err(ConvexError::NotPointed);
        }
        let mut gens: Vec<IVec> = points.iter().map(|p| homogenize_point(p)).collect();
        gens.extend(tail.rays().iter().map(homogenize_direction));
        let homogenized = Cone::from_generators_i(rank + 1, &gens, &[]);
        Ok(Self::from_homogenized(rank, homogenized, tail.clone()))
    }

    fn from_homogenized(rank: usize, homogenized: Cone, tail: Cone) -> Self {
        let mut vertices: Vec<QVector> = homogenized
            .rays()
            .iter()
            .filter(|r| r[rank] > 0)
            .map(|r| {
                let t = Rational::from_integer(BigInt::from(r[rank]));
                r.0[..rank]
                    .iter()
                    .map(|&x| Rational::from_integer(BigInt::from(x)) / &t)
                    .collect()
            })
            .collect();
        vertices.sort();
        TailedPolyhedron {
            rank,
            vertices,
            tail,
            homogenized,
        }
    }

    /// `{x : ⟨a,x⟩ ≥ b for (a,b) ∈ inequalities, ⟨e,x⟩ = c for (e,c) ∈ equations}`.
    pub fn from_inequalities(
        rank: usize,
        inequalities: &[(QVector, Rational)],
        equations: &[(QVector, Rational)],
    ) -> Result<Self, ConvexError> {
        let row = |(a, b): &(QVector, Rational)| -> Result<IVec, ConvexError> {
            if a.len() != rank {
                return Err(ConvexError::RankMismatch {
                    expected: rank,
                    found: a.len(),
                });
            }
            let mut w = a.clone();
            w.push(-b);
            Ok(primitive_of_rational(&w))
        };
        let mut ineqs: Vec<IVec> = inequalities.iter().map(row).collect::<Result<_, _>>()?;
        let mut t_nonneg = vec![0i128; rank + 1];
        t_nonneg[rank] = 1;
        ineqs.push(t_nonneg);
        let eqs: Vec<IVec> = equations.iter().map(row).collect::<Result<_, _>>()?;
        let homogenized = Cone::from_inequalities_i(rank + 1, &ineqs, &eqs);
        if !homogenized.is_pointed() {
            return Err(ConvexError::NotPointed);
        }
        if !homogenized.rays().iter().any(|r| r[rank] > 0) {
            return Err(ConvexError::EmptyPolyhedron);
        }
        let recession: Vec<LatticeVector> = homogenized
            .rays()
            .iter()
            .filter(|r| r[rank] == 0)
            .map(|r| LatticeVector(r.0[..rank].to_vec()))
            .collect();
        let tail = Cone::new(rank, &recession)?;
        Ok(Self::from_homogenized(rank, homogenized, tail))
    }

    pub fn point(v: QVector) -> Self {
        let rank = v.len();
        Self::new(rank, &[v], &Cone::zero(rank)).expect("a point is a polyhedron")
    }

    /// `v + tail`.
    pub fn translate_cone(v: QVector, tail: &Cone) -> Result<Self, ConvexError> {
        Self::new(tail.rank(), &[v], tail)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn is_bounded(&self) -> bool {
        self.tail.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_integer()))
    }

    /// Inequalities `⟨a,x⟩ ≥ b` cutting out Δ (facets of the homogenization,
    /// the face at infinity omitted) and equations `⟨e,x⟩ = c` of its affine hull.
    pub fn h_representation(&self) -> (Vec<AffineForm>, Vec<AffineForm>) {
        let split = |v: &LatticeVector| {
            let a = LatticeVector(v.0[..self.rank].to_vec());
            let b = -Rational::from_integer(BigInt::from(v[self.rank]));
            (a, b)
        };
        let ineqs = self
            .homogenized
            .facets()
            .iter()
            .map(split)
            .filter(|(a, _)| !a.is_zero())
            .collect();
        let eqs = self.homogenized.equations().iter().map(split).collect();
        (ineqs, eqs)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let mut w = x.to_vec();
        w.push(Rational::from_integer(BigInt::from(1)));
        self.homogenized.contains_q(&w)
    }

    /// Containment of polyhedra.
    pub fn is_subset_of(&self, other: &TailedPolyhedron) -> bool {
        self.vertices.iter().all(|v| other.contains(v)) && other.tail.contains_cone(&self.tail)
    }

    /// `h_Δ(m) = inf_{v ∈ Δ} ⟨m, v⟩`.
    pub fn support(&self, m: &LatticeVector) -> Support {
        if self.tail.generators().iter().any(|t| m.dot(t) < 0) {
            return Support::NegInf;
        }
        let min = self
            .vertices
            .iter()
            .map(|v| pair(m, v))
            .min()
            .expect("nonempty vertex set");
        Support::Finite(min)
    }

    pub fn minkowski_sum(&self, other: &TailedPolyhedron) -> Result<Self, ConvexError> {
        if self.rank != other.rank {
            return Err(ConvexError::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let points: Vec<QVector> = self
            .vertices
            .iter()
            .flat_map(|a| {
                other
                    .vertices
                    .iter()
                    .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
            })
            .collect();
        let tail = self.tail.join(&other.tail)?;
        Self::new(self.rank, &points, &tail)
    }

    pub fn translate(&self, v: &[Rational]) -> Result<Self, ConvexError> {
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(x, y)| x + y).collect())
            .collect();
        Self::new(self.rank, &pts, &self.tail)
    }

    /// `F(Δ) + target_tail`.
    pub fn image(&self, f: &LatticeMorphism, target_tail: &Cone) -> Result<Self, ConvexError> {
        if f.source_rank() != self.rank {
            return Err(ConvexError::RankMismatch {
                expected: self.rank,
                found: f.source_rank(),
            });
        }
        let pts: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| {
                (0..f.target_rank())
                    .map(|i| {
                        let row = LatticeVector(f.row(i));
                        pair(&row, v)
                    })
                    .collect()
            })
            .collect();
        let tail = self.tail.image(f)?.join(target_tail)?;
        Self::new(f.target_rank(), &pts, &tail)
    }

    /// Normal quasifan: the vertex normal cones `{m ∈ tail∨ : v minimizes ⟨m,·⟩}`
    /// and their faces.
    pub fn normal_quasifan(&self) -> Quasifan {
        let maximal: Vec<Cone> = self
            .vertices
            .iter()
            .map(|v| {
                let mut ineqs: Vec<IVec> = self
                    .vertices
                    .iter()
                    .filter(|w| *w != v)
                    .map(|w| {
                        let d: QVector = w.iter().zip(v).map(|(a, b)| a - b).collect();
                        primitive_of_rational(&d)
                    })
                    .collect();
                ineqs.extend(
                    self.tail
                        .rays()
                        .iter()
                        .map(|t| t.0.iter().map(|&x| x as i128).collect()),
                );
                Cone::from_inequalities_i(self.rank, &ineqs, &[])
            })
            .collect();
        Quasifan::from_maximal(self.rank, maximal)
    }
}

impl fmt::Display for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.iter().map(|v| format_qvector(v)).collect();
        write!(f, "conv({})", vs.join(", "))?;
        if !self.tail.is_zero() {
            write!(f, " + {}", self.tail)?;
        }
        Ok(())
    }
}

/// The unique Δ with the given tail whose support function takes the sampled
/// values: `Δ = ∩_m {x : ⟨m,x⟩ ≥ h(m)}`.
pub fn polyhedron_from_support(
    tail: &Cone,
    samples: &BTreeMap<LatticeVector, Rational>,
) -> Result<TailedPolyhedron, ConvexError> {
    let rank = tail.rank();
    let ineqs: Vec<(QVector, Rational)> = samples.iter().map(|(m, h)| (lattice_to_q(m), h.clone())).collect();
    let delta = TailedPolyhedron::from_inequalities(rank, &ineqs, &[]).map_err(|e| match e {
        ConvexError::EmptyPolyhedron => {
            ConvexError::Inconsistent("the sampled halfspaces have empty intersection".into())
        }
        ConvexError::NotPointed => ConvexError::Inconsistent("the samples do not bound a pointed polyhedron".into()),
        other => other,
    })?;
    if delta.tail() != tail {
        return Err(ConvexError::Inconsistent(format!(
            "recovered tail {} differs from {}",
            delta.tail(),
            tail
        )));
    }
    for (m, h) in samples {
        let got = delta.support(m);
        if got != Support::Finite(h.clone()) {
            return Err(ConvexError::Inconsistent(format!(
                "support at {m} is {got}, sample says {}",
                format_rational(h)
            )));
        }
    }
    Ok(delta)
}

/// A coefficient of a polyhedral divisor: a tailed polyhedron or the empty set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Polyhedron(TailedPolyhedron),
    Empty { rank: usize, tail: Cone },
}

impl Coefficient {
    pub fn rank(&self) -> usize {
        match self {
            Coefficient::Polyhedron(p) => p.rank(),
            Coefficient::Empty { rank, .. } => *rank,
        }
    }

    pub fn tail(&self) -> &Cone {
        match self {
            Coefficient::Polyhedron(p) => p.tail(),
            Coefficient::Empty { tail, .. } => tail,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Coefficient::Empty { .. })
    }

    pub fn as_polyhedron(&self) -> Option<&TailedPolyhedron> {
        match self {
            Coefficient::Polyhedron(p) => Some(p),
            Coefficient::Empty { .. } => None,
        }
    }

    pub fn support(&self, m: &LatticeVector) -> Support {
        match self {
            Coefficient::Polyhedron(p) => p.support(m),
            Coefficient::Empty { .. } => Support::PosInf,
        }
    }

    /// Minkowski sum; `Empty` absorbs.
    pub fn minkowski_sum(&self, other: &Coefficient) -> Result<Coefficient, ConvexError> {
        match (self, other) {
            (Coefficient::Polyhedron(a), Coefficient::Polyhedron(b)) => {
                Ok(Coefficient::Polyhedron(a.minkowski_sum(b)?))
            }
            (Coefficient::Empty { .. }, _) => Ok(self.clone()),
            (_, Coefficient::Empty { .. }) => Ok(other.clone()),
        }
    }

    pub fn is_subset_of(&self, other: &Coefficient) -> bool {
        match (self, other) {
            (Coefficient::Empty { .. }, _) => true,
            (Coefficient::Polyhedron(_), Coefficient::Empty { .. }) => false,
            (Coefficient::Polyhedron(a), Coefficient::Polyhedron(b)) => a.is_subset_of(b),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Polyhedron(p) => write!(f, "{p}"),
            Coefficient::Empty { .. } => write!(f, "empty"),
        }
    }
}

/// An element `plus − minus` of the Grothendieck group of polyhedra with a fixed tail.
#[derive(Clone, Debug)]
pub struct FormalDifference {
    pub plus: TailedPolyhedron,
    pub minus: TailedPolyhedron,
}

impl FormalDifference {
    pub fn new(plus: TailedPolyhedron, minus: TailedPolyhedron) -> Result<Self, ConvexError> {
        if plus.tail() != minus.tail() {
            return Err(ConvexError::TailMismatch);
        }
        Ok(FormalDifference { plus, minus })
    }

    /// The class of `Δ`, i.e. `Δ − tail`.
    pub fn from_polyhedron(p: TailedPolyhedron) -> Self {
        let zero = TailedPolyhedron::translate_cone(vec![Rational::zero(); p.rank()], p.tail())
            .expect("tail of a polyhedron is pointed");
        FormalDifference { plus: p, minus: zero }
    }

    pub fn zero(tail: &Cone) -> Self {
        let z = TailedPolyhedron::translate_cone(vec![Rational::zero(); tail.rank()], tail).expect("pointed tail");
        FormalDifference {
            plus: z.clone(),
            minus: z,
        }
    }

    pub fn tail(&self) -> &Cone {
        self.plus.tail()
    }

    pub fn eval(&self, m: &LatticeVector) -> Result<Rational, ConvexError> {
        match (self.plus.support(m), self.minus.support(m)) {
            (Support::Finite(a), Support::Finite(b)) => Ok(a - b),
            _ => Err(ConvexError::OutsideDual),
        }
    }

    pub fn add(&self, other: &FormalDifference) -> Result<Self, ConvexError> {
        FormalDifference::new(
            self.plus.minkowski_sum(&other.plus)?,
            self.minus.minkowski_sum(&other.minus)?,
        )
    }

    pub fn neg(&self) -> Self {
        FormalDifference {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    /// Equality in the Grothendieck group: `a⁺ + b⁻ = b⁺ + a⁻`.
    pub fn equals(&self, other: &FormalDifference) -> Result<bool, ConvexError> {
        let l = self.plus.minkowski_sum(&other.minus)?;
        let r = other.plus.minkowski_sum(&self.minus)?;
        Ok(l == r)
    }
}
