use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::cone::Cone;
use super::ConvexError;
use crate::lattice::LatticeVector;

/// A finite collection of cones closed under faces in which any two cones meet
/// in a common face. Cones need not be pointed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quasifan {
    rank: usize,
    cones: Vec<Cone>,
}

impl Quasifan {
    /// Closes `maximal` under faces. Does not check the intersection property;
    /// see [`Quasifan::validate`].
    pub fn from_maximal(rank: usize, maximal: Vec<Cone>) -> Quasifan {
        let mut all: BTreeSet<Cone> = BTreeSet::new();
        for c in maximal {
            if all.contains(&c) {
                continue;
            }
            all.extend(c.faces());
        }
        let mut cones: Vec<Cone> = all.into_iter().collect();
        cones.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        Quasifan { rank, cones }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    /// Cones that are not proper faces of another member.
    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d != *c && d.dim() > c.dim() && d.contains_cone(c))
            })
            .cloned()
            .collect()
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<LatticeVector> {
        self.cones
            .iter()
            .filter(|c| c.dim() == 1 && c.is_pointed())
            .flat_map(|c| c.rays().to_vec())
            .collect()
    }

    pub fn support_contains(&self, v: &LatticeVector) -> bool {
        self.cones.iter().any(|c| c.contains(v))
    }

    /// Checks that every pairwise intersection is a face of both cones.
    pub fn validate(&self) -> Result<(), ConvexError> {
        let max = self.maximal_cones();
        for (i, a) in max.iter().enumerate() {
            for b in &max[i + 1..] {
                let c = a.intersect(b)?;
                if !c.is_face_of(a) || !c.is_face_of(b) {
                    return Err(ConvexError::NotAFan(format!("{a} and {b} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Common refinement of quasifans with a common full-dimensional support:
    /// nonempty full-dimensional intersections of maximal cones.
    pub fn common_refinement(&self, other: &Quasifan) -> Result<Quasifan, ConvexError> {
        if self.rank != other.rank {
            return Err(ConvexError::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let target = self
            .maximal_cones()
            .iter()
            .chain(other.maximal_cones().iter())
            .map(Cone::dim)
            .max()
            .unwrap_or(0);
        let mut maximal = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let c = a.intersect(&b)?;
                if c.dim() == target && !maximal.contains(&c) {
                    maximal.push(c);
                }
            }
        }
        Ok(Quasifan::from_maximal(self.rank, maximal))
    }

    /// Points at which two functions linear on every cone must be compared:
    /// generators of every maximal cone and one relative-interior point each.
    pub fn samples(&self) -> Vec<LatticeVector> {
        let mut out: BTreeSet<LatticeVector> = BTreeSet::new();
        for c in self.maximal_cones() {
            out.extend(c.generators());
            out.insert(c.interior_sample());
        }
        out.into_iter().collect()
    }

    /// The maximal cone containing `v` in its relative interior, if unique.
    pub fn maximal_cone_containing(&self, v: &LatticeVector) -> Vec<Cone> {
        self.maximal_cones().into_iter().filter(|c| c.contains(v)).collect()
    }
}

/// Refinement of several quasifans with common support `support`.
pub fn common_refinement(support: &Cone, fans: &[Quasifan]) -> Result<Quasifan, ConvexError> {
    let mut acc = Quasifan::from_maximal(support.rank(), vec![support.clone()]);
    for f in fans {
        acc = acc.common_refinement(f)?;
    }
    Ok(acc)
}

/// A fan given by an ordered ray list and maximal cones as ray-index sets;
/// the ray order fixes the indexing of toric prime divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricFan {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Vec<usize>>,
}

impl ToricFan {
    pub fn validate(&self) -> Result<(), ConvexError> {
        for r in &self.rays {
            if r.rank() != self.rank {
                return Err(ConvexError::RankMismatch {
                    expected: self.rank,
                    found: r.rank(),
                });
            }
            if !r.is_primitive() {
                return Err(ConvexError::NotAFan(format!("ray {r} is not primitive")));
            }
        }
        for c in &self.cones {
            if c.iter().any(|&i| i >= self.rays.len()) {
                return Err(ConvexError::NotAFan("cone refers to a missing ray".into()));
            }
        }
        let q = self.to_quasifan()?;
        if q.cones().iter().any(|c| !c.is_pointed()) {
            return Err(ConvexError::NotPointed);
        }
        for c in &self.cones {
            let cone = self.cone(c)?;
            if cone.rays().len() != c.len() {
                return Err(ConvexError::NotAFan("a listed ray is not extremal in its cone".into()));
            }
        }
        q.validate()
    }

    pub fn cone(&self, idx: &[usize]) -> Result<Cone, ConvexError> {
        let g: Vec<LatticeVector> = idx.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new(self.rank, &g)
    }

    pub fn to_quasifan(&self) -> Result<Quasifan, ConvexError> {
        let max: Result<Vec<Cone>, _> = self.cones.iter().map(|c| self.cone(c)).collect();
        Ok(Quasifan::from_maximal(self.rank, max?))
    }
}
