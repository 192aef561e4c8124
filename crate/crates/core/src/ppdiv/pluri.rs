use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{PPDivError, PolyhedralDivisor};
use crate::base::{divisor_of, BaseVariety, PrimeDivisor, QDivisor, RationalFunction, SemilinearBaseMap};
use crate::convex::{Coefficient, Cone, FormalDifference, TailedPolyhedron};
use crate::exactnum::Rational;
use crate::lattice::{dual_pairing, LatticeMorphism, LatticeVector};

/// An element `Σ vᵢ ⊗ fᵢ` of `N ⊗ K(Y)*`, read as the map
/// `m ↦ Π fᵢ^{⟨m, vᵢ⟩}` from `M` to rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plurifunction {
    rank: usize,
    terms: Vec<(LatticeVector, RationalFunction)>,
}

impl Plurifunction {
    pub fn trivial(rank: usize) -> Self {
        Plurifunction {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn new(rank: usize, terms: Vec<(LatticeVector, RationalFunction)>) -> Result<Self, PPDivError> {
        if terms.iter().any(|(v, _)| v.rank() != rank) {
            return Err(PPDivError::RankMismatch("plurifunction".into()));
        }
        Ok(Plurifunction { rank, terms })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(LatticeVector, RationalFunction)] {
        &self.terms
    }

    /// `𝔣(m)`.
    pub fn eval(&self, m: &LatticeVector) -> RationalFunction {
        self.terms.iter().fold(RationalFunction::one(), |acc, (v, f)| {
            acc.mul(&f.pow(dual_pairing(m, v).expect("ranks agree")))
        })
    }

    /// The product `𝔣·𝔤`.
    pub fn mul(&self, other: &Plurifunction) -> Result<Plurifunction, PPDivError> {
        if self.rank != other.rank {
            return Err(PPDivError::RankMismatch("plurifunction product".into()));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Plurifunction { rank: self.rank, terms })
    }

    pub fn inv(&self) -> Plurifunction {
        Plurifunction {
            rank: self.rank,
            terms: self.terms.iter().map(|(v, f)| (-v, f.clone())).collect(),
        }
    }

    /// `F_*(Σ vᵢ ⊗ fᵢ) = Σ F(vᵢ) ⊗ fᵢ`.
    pub fn push_forward(&self, f: &LatticeMorphism) -> Result<Plurifunction, PPDivError> {
        if f.source_rank() != self.rank {
            return Err(PPDivError::RankMismatch("plurifunction pushforward".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(v, g)| Ok((f.apply(v)?, g.clone())))
            .collect::<Result<Vec<_>, PPDivError>>()?;
        Ok(Plurifunction {
            rank: f.target_rank(),
            terms,
        })
    }

    /// `ψ*(Σ vᵢ ⊗ fᵢ) = Σ vᵢ ⊗ ψ*fᵢ`.
    pub fn pullback(&self, psi: &SemilinearBaseMap) -> Plurifunction {
        Plurifunction {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(v, g)| (v.clone(), psi.pullback_function(g)))
                .collect(),
        }
    }

    /// Equality as homomorphisms `M → K(Y)*`, tested on a basis of `M`.
    pub fn equals(&self, other: &Plurifunction) -> bool {
        self.rank == other.rank
            && (0..self.rank).all(|i| {
                let e = LatticeVector::unit(self.rank, i);
                self.eval(&e) == other.eval(&e)
            })
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.rank).all(|i| self.eval(&LatticeVector::unit(self.rank, i)).is_one())
    }
}

impl fmt::Display for Plurifunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.terms.iter().map(|(v, g)| format!("{v} (x) {g}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite sum `Σ (Δ⁺_D − Δ⁻_D) ⊗ D` with formal-difference coefficients.
#[derive(Clone, Debug)]
pub struct DivisorSum {
    rank: usize,
    tail: Cone,
    entries: BTreeMap<PrimeDivisor, FormalDifference>,
}

impl DivisorSum {
    pub fn zero(tail: &Cone) -> Self {
        DivisorSum {
            rank: tail.rank(),
            tail: tail.clone(),
            entries: BTreeMap::new(),
        }
    }

    /// The class of a polyhedral divisor without empty coefficients.
    pub fn from_ppdiv(d: &PolyhedralDivisor) -> Result<Self, PPDivError> {
        let mut entries = BTreeMap::new();
        for (p, c) in d.entries() {
            match c {
                Coefficient::Polyhedron(q) => {
                    entries.insert(p.clone(), FormalDifference::from_polyhedron(q.clone()));
                }
                Coefficient::Empty { .. } => {
                    return Err(PPDivError::UnsupportedBase(
                        "empty coefficients have no class in the Grothendieck group".into(),
                    ))
                }
            }
        }
        Ok(DivisorSum {
            rank: d.lattice_rank(),
            tail: d.tail().clone(),
            entries,
        })
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn entries(&self) -> &BTreeMap<PrimeDivisor, FormalDifference> {
        &self.entries
    }

    pub fn add(&self, other: &DivisorSum) -> Result<DivisorSum, PPDivError> {
        if self.tail != other.tail {
            return Err(PPDivError::BaseMismatch);
        }
        let mut entries = self.entries.clone();
        for (p, c) in &other.entries {
            let next = match entries.get(p) {
                Some(x) => x.add(c)?,
                None => c.clone(),
            };
            entries.insert(p.clone(), next);
        }
        Ok(DivisorSum {
            rank: self.rank,
            tail: self.tail.clone(),
            entries,
        })
    }

    pub fn neg(&self) -> DivisorSum {
        DivisorSum {
            rank: self.rank,
            tail: self.tail.clone(),
            entries: self.entries.iter().map(|(p, c)| (p.clone(), c.neg())).collect(),
        }
    }

    pub fn eval(&self, m: &LatticeVector) -> Result<QDivisor, PPDivError> {
        let mut d = QDivisor::zero();
        for (p, c) in &self.entries {
            d.add_term(p.clone(), c.eval(m)?);
        }
        Ok(d)
    }

    /// Equality in the Grothendieck group, entrywise.
    pub fn equals(&self, other: &DivisorSum) -> Result<bool, PPDivError> {
        let zero = FormalDifference::zero(&self.tail);
        let keys: std::collections::BTreeSet<&PrimeDivisor> = self.entries.keys().chain(other.entries.keys()).collect();
        for p in keys {
            let a = self.entries.get(p).unwrap_or(&zero);
            let b = other.entries.get(p).unwrap_or(&zero);
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `div(𝔣) = Σ_D (Σᵢ ord_D(fᵢ)·vᵢ + ω) ⊗ D`, as formal differences against `ω`.
pub fn pluri_divisor(f: &Plurifunction, tail: &Cone, base: &BaseVariety) -> Result<DivisorSum, PPDivError> {
    if f.rank() != tail.rank() {
        return Err(PPDivError::RankMismatch("plurifunction".into()));
    }
    let mut shifts: BTreeMap<PrimeDivisor, Vec<Rational>> = BTreeMap::new();
    for (v, g) in f.terms() {
        for (p, c) in divisor_of(g, base)?.entries() {
            let w = shifts
                .entry(p.clone())
                .or_insert_with(|| vec![Rational::zero(); f.rank()]);
            for (wi, vi) in w.iter_mut().zip(v.entries()) {
                *wi += c * Rational::from_integer(BigInt::from(*vi));
            }
        }
    }
    let zero = TailedPolyhedron::translate_cone(vec![Rational::zero(); tail.rank()], tail)?;
    let mut entries = BTreeMap::new();
    for (p, w) in shifts {
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let plus = TailedPolyhedron::translate_cone(w, tail)?;
        entries.insert(p, FormalDifference::new(plus, zero.clone())?);
    }
    Ok(DivisorSum {
        rank: tail.rank(),
        tail: tail.clone(),
        entries,
    })
}
