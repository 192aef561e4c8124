use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dd::{self, IVec};
use super::ConvexError;
use crate::exactnum::linalg;
use crate::exactnum::rational::common_denominator;
use crate::exactnum::Rational;
use crate::lattice::{LatticeMorphism, LatticeVector};

/// A rational polyhedral cone in `Q^rank`, kept in a canonical double
/// description.
///
/// V-side: a lineality basis in reduced echelon form and the primitive extremal
/// rays projected orthogonally off the lineality space. H-side: the same data
/// for the dual cone (`equations` span the orthogonal of the linear span,
/// `facets` are primitive inner normals). Two cones are equal iff their
/// canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rank: usize,
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
}

fn to_ivec(v: &LatticeVector) -> IVec {
    v.0.iter().map(|&x| x as i128).collect()
}

fn to_lattice(v: &[i128]) -> LatticeVector {
    LatticeVector(
        v.iter()
            .map(|&x| i64::try_from(x).expect("cone coordinate exceeds i64"))
            .collect(),
    )
}

fn to_q(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

/// Clears denominators of a rational vector and divides by the content.
pub(crate) fn primitive_of_rational(v: &[Rational]) -> IVec {
    let den = common_denominator(v);
    dd::primitive(
        v.iter()
            .map(|x| {
                (x * Rational::from_integer(den.clone()))
                    .to_integer()
                    .to_i128()
                    .expect("cone coordinate exceeds i128")
            })
            .collect(),
    )
}

fn canonical_subspace(basis: &[IVec]) -> Vec<IVec> {
    let rows: Vec<Vec<Rational>> = basis.iter().map(|b| to_q(b)).collect();
    let (r, _) = linalg::rref(&rows);
    r.iter().map(|row| primitive_of_rational(row)).collect()
}

fn canonical_rays(rays: &[IVec], lineality: &[IVec]) -> Vec<IVec> {
    let basis: Vec<Vec<Rational>> = lineality.iter().map(|b| to_q(b)).collect();
    let set: BTreeSet<IVec> = rays
        .iter()
        .map(|r| primitive_of_rational(&linalg::project_out(&to_q(r), &basis)))
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    set.into_iter().collect()
}

impl Cone {
    fn assemble(rank: usize, primal: dd::Generators, dual: dd::Generators) -> Cone {
        let lin = canonical_subspace(&primal.lineality);
        let rays = canonical_rays(&primal.rays, &lin);
        let eqs = canonical_subspace(&dual.lineality);
        let facets = canonical_rays(&dual.rays, &eqs);
        Cone {
            rank,
            lineality: lin.iter().map(|v| to_lattice(v)).collect(),
            rays: rays.iter().map(|v| to_lattice(v)).collect(),
            equations: eqs.iter().map(|v| to_lattice(v)).collect(),
            facets: facets.iter().map(|v| to_lattice(v)).collect(),
        }
    }

    fn check_ranks(rank: usize, vs: &[LatticeVector]) -> Result<(), ConvexError> {
        match vs.iter().find(|v| v.rank() != rank) {
            Some(v) => Err(ConvexError::RankMismatch {
                expected: rank,
                found: v.rank(),
            }),
            None => Ok(()),
        }
    }

    /// The cone generated by `generators` (empty list: the zero cone).
    pub fn new(rank: usize, generators: &[LatticeVector]) -> Result<Cone, ConvexError> {
        Self::check_ranks(rank, generators)?;
        let g: Vec<IVec> = generators.iter().map(to_ivec).collect();
        Ok(Self::from_generators_i(rank, &g, &[]))
    }

    pub(crate) fn from_generators_i(rank: usize, rays: &[IVec], lineality: &[IVec]) -> Cone {
        let dual = dd::generators(rank, rays, lineality);
        let eqs = canonical_subspace(&dual.lineality);
        let facets = canonical_rays(&dual.rays, &eqs);
        let primal = dd::generators(rank, &facets, &eqs);
        Self::assemble(
            rank,
            primal,
            dd::Generators {
                lineality: eqs,
                rays: facets,
            },
        )
    }

    /// `{x : ⟨a, x⟩ ≥ 0 for a ∈ inequalities, ⟨e, x⟩ = 0 for e ∈ equations}`.
    pub fn from_inequalities(
        rank: usize,
        inequalities: &[LatticeVector],
        equations: &[LatticeVector],
    ) -> Result<Cone, ConvexError> {
        Self::check_ranks(rank, inequalities)?;
        Self::check_ranks(rank, equations)?;
        let a: Vec<IVec> = inequalities.iter().map(to_ivec).collect();
        let e: Vec<IVec> = equations.iter().map(to_ivec).collect();
        Ok(Self::from_inequalities_i(rank, &a, &e))
    }

    pub(crate) fn from_inequalities_i(rank: usize, ineqs: &[IVec], eqs: &[IVec]) -> Cone {
        let primal = dd::generators(rank, ineqs, eqs);
        let lin = canonical_subspace(&primal.lineality);
        let rays = canonical_rays(&primal.rays, &lin);
        let dual = dd::generators(rank, &rays, &lin);
        Self::assemble(rank, dd::Generators { lineality: lin, rays }, dual)
    }

    pub fn zero(rank: usize) -> Cone {
        Self::from_generators_i(rank, &[], &[])
    }

    pub fn full(rank: usize) -> Cone {
        Self::from_inequalities_i(rank, &[], &[])
    }

    /// The positive orthant `cone(e₁, …, e_rank)`.
    pub fn orthant(rank: usize) -> Cone {
        let gens: Vec<LatticeVector> = (0..rank).map(|i| LatticeVector::unit(rank, i)).collect();
        Self::new(rank, &gens).expect("ranks agree")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Primitive extremal rays (modulo the lineality space).
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    /// Inner facet normals.
    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    /// A finite generating set: rays plus both signs of the lineality basis.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }

    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            lineality: self.equations.clone(),
            rays: self.facets.clone(),
            equations: self.lineality.clone(),
            facets: self.rays.clone(),
        }
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        v.rank() == self.rank
            && self.equations.iter().all(|e| e.dot(v) == 0)
            && self.facets.iter().all(|f| f.dot(v) >= 0)
    }

    pub fn contains_q(&self, v: &[Rational]) -> bool {
        let pair = |a: &LatticeVector| -> Rational {
            a.0.iter()
                .zip(v)
                .map(|(x, y)| y * Rational::from_integer(BigInt::from(*x)))
                .sum()
        };
        v.len() == self.rank
            && self.equations.iter().all(|e| pair(e).is_zero())
            && self.facets.iter().all(|f| !pair(f).is_negative())
    }

    /// Membership in the relative interior.
    pub fn relative_interior_contains(&self, v: &LatticeVector) -> bool {
        self.contains(v) && self.facets.iter().all(|f| f.dot(v) > 0)
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// The face `c ∩ m⊥` exposed by `m ∈ c∨`.
    pub fn face(&self, m: &LatticeVector) -> Result<Cone, ConvexError> {
        if m.rank() != self.rank {
            return Err(ConvexError::RankMismatch {
                expected: self.rank,
                found: m.rank(),
            });
        }
        if self.generators().iter().any(|g| m.dot(g) < 0) {
            return Err(ConvexError::NotInDual);
        }
        let rays: Vec<IVec> = self.rays.iter().filter(|r| m.dot(r) == 0).map(to_ivec).collect();
        let lin: Vec<IVec> = self.lineality.iter().map(to_ivec).collect();
        Ok(Self::from_generators_i(self.rank, &rays, &lin))
    }

    /// All faces, including the cone itself and its minimal face.
    pub fn faces(&self) -> Vec<Cone> {
        let mut seen: BTreeSet<Cone> = BTreeSet::new();
        let mut stack = vec![self.clone()];
        while let Some(c) = stack.pop() {
            if seen.contains(&c) {
                continue;
            }
            for f in &c.facets {
                let sub = c.face(f).expect("facet normals lie in the dual");
                if !seen.contains(&sub) {
                    stack.push(sub);
                }
            }
            seen.insert(c);
        }
        seen.into_iter().collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().contains(self)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone, ConvexError> {
        if self.rank != other.rank {
            return Err(ConvexError::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let ineqs: Vec<IVec> = self.facets.iter().chain(&other.facets).map(to_ivec).collect();
        let eqs: Vec<IVec> = self.equations.iter().chain(&other.equations).map(to_ivec).collect();
        Ok(Self::from_inequalities_i(self.rank, &ineqs, &eqs))
    }

    /// The cone generated by both.
    pub fn join(&self, other: &Cone) -> Result<Cone, ConvexError> {
        let mut g = self.generators();
        g.extend(other.generators());
        Cone::new(self.rank, &g)
    }

    /// Sum of the primitive rays: a deterministic relative-interior point.
    pub fn interior_sample(&self) -> LatticeVector {
        self.rays.iter().fold(LatticeVector::zero(self.rank), |acc, r| &acc + r)
    }

    /// Image `F(c)`.
    pub fn image(&self, f: &LatticeMorphism) -> Result<Cone, ConvexError> {
        let g: Result<Vec<LatticeVector>, _> = self.generators().iter().map(|v| f.apply(v)).collect();
        Cone::new(f.target_rank(), &g?)
    }

    /// Preimage `F⁻¹(c)`.
    pub fn preimage(&self, f: &LatticeMorphism) -> Result<Cone, ConvexError> {
        let ft = f.transpose();
        let pull = |vs: &[LatticeVector]| -> Result<Vec<LatticeVector>, ConvexError> {
            vs.iter().map(|v| ft.apply(v).map_err(ConvexError::from)).collect()
        };
        Cone::from_inequalities(f.source_rank(), &pull(&self.facets)?, &pull(&self.equations)?)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone(")?;
        let gens = self.generators();
        for (i, g) in gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if gens.is_empty() {
            write!(f, "0 in Q^{}", self.rank)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    fn cone(rank: usize, gens: &[&[i64]]) -> Cone {
        let g: Vec<LatticeVector> = gens.iter().map(|v| lv(v)).collect();
        Cone::new(rank, &g).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Cone::orthant(2).dual(), Cone::orthant(2));
        let omega = cone(2, &[&[1, 0], &[1, 12]]);
        assert_eq!(omega.dual(), cone(2, &[&[0, 1], &[12, -1]]));
        let z = Cone::zero(2);
        assert_eq!(z.dual(), Cone::full(2));
        assert_eq!(z.dual(), cone(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
    }

    #[test]
    fn face_examples() {
        let o = Cone::orthant(2);
        assert_eq!(o.face(&lv(&[0, 1])).unwrap(), cone(2, &[&[1, 0]]));
        assert_eq!(o.face(&lv(&[0, 0])).unwrap(), o);
        let omega = cone(2, &[&[1, 0], &[1, 12]]);
        assert_eq!(omega.face(&lv(&[12, -1])).unwrap(), cone(2, &[&[1, 12]]));
        assert_eq!(o.face(&lv(&[-1, 0])), Err(ConvexError::NotInDual));
    }

    #[test]
    fn pointedness() {
        assert!(Cone::orthant(2).is_pointed());
        assert!(!cone(2, &[&[1, 0], &[-1, 0]]).is_pointed());
        assert!(cone(2, &[&[1, 0], &[1, 12]]).is_pointed());
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = cone(2, &[&[1, 0], &[2, 2], &[0, 3], &[1, 0]]);
        assert_eq!(c.rays(), &[lv(&[0, 1]), lv(&[1, 0])]);
    }

    #[test]
    fn faces_of_orthant() {
        assert_eq!(Cone::orthant(2).faces().len(), 4);
        assert_eq!(Cone::orthant(3).faces().len(), 8);
        assert_eq!(Cone::full(2).faces().len(), 1);
    }

    #[test]
    fn halfplane_canonical_form() {
        let c = cone(2, &[&[1, 0], &[-1, 0], &[3, 1]]);
        assert_eq!(c.lineality(), &[lv(&[1, 0])]);
        assert_eq!(c.rays(), &[lv(&[0, 1])]);
        assert_eq!(c.facets(), &[lv(&[0, 1])]);
    }

    #[test]
    fn preimage_of_orthant_under_diagonal() {
        let f = LatticeMorphism::from_rows(&[vec![1], vec![1], vec![-1]], 1).unwrap();
        assert!(Cone::orthant(3).preimage(&f).unwrap().is_zero());
        let g = LatticeMorphism::from_rows(&[vec![1, 0], vec![0, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(Cone::orthant(3).preimage(&g).unwrap(), Cone::orthant(2));
    }
}
