//! Polyhedral divisors `𝔇 = Σ Δ_D ⊗ D`: evaluation, properness certificates,
//! the containment order, plurifunctions and their principal divisors,
//! pushforward, pullback, morphisms and base change.

mod basechange;
mod morphism;
mod pluri;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::base::{degree, BaseError, BaseVariety, PrimeDivisor, QDivisor};
use crate::convex::{common_refinement, Coefficient, Cone, ConvexError, Quasifan, Support, TailedPolyhedron};
use crate::exactnum::rational::format_rational;
use crate::exactnum::Rational;
use crate::lattice::{LatticeError, LatticeVector};

pub use basechange::base_change;
pub use morphism::{
    compare_triple, compose, is_morphism, pullback, pushforward, MorphismFailure, MorphismReport, PPDivMorphism,
    TripleRelation,
};
pub use pluri::{pluri_divisor, DivisorSum, Plurifunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PPDivError {
    #[error("tail cone must be pointed")]
    NotPointed,
    #[error("coefficient at {divisor} has tail {found}, expected {expected}")]
    WrongTail {
        divisor: String,
        found: String,
        expected: String,
    },
    #[error("coefficient at {0} lives in the wrong rank")]
    RankMismatch(String),
    #[error("prime divisor {0} appears twice")]
    DuplicateDivisor(String),
    #[error("weight {0} is outside the weight cone")]
    OutsideWeightCone(LatticeVector),
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("polyhedral divisors live on different bases, tails or lattices")]
    BaseMismatch,
    #[error("the lattice map does not send the tail cone into the target tail cone")]
    TailNotMapped,
    #[error("morphisms do not compose: {0}")]
    ChainMismatch(String),
    #[error("base map incompatible with the bases: {0}")]
    BaseMapMismatch(String),
    #[error("cannot certify the splitting of {0} (degree above 3)")]
    CannotCertifySplitting(String),
    #[error("base change expects a base over Q")]
    NotOverRationals,
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Exact(#[from] crate::exactnum::ExactError),
}

/// A polyhedral divisor with pointed tail `ω` on a base variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralDivisor {
    lattice_rank: usize,
    tail: Cone,
    base: BaseVariety,
    entries: BTreeMap<PrimeDivisor, Coefficient>,
    proper_by_construction: bool,
}

impl PolyhedralDivisor {
    pub fn new(
        lattice_rank: usize,
        tail: Cone,
        base: BaseVariety,
        entries: Vec<(PrimeDivisor, Coefficient)>,
    ) -> Result<Self, PPDivError> {
        if tail.rank() != lattice_rank {
            return Err(PPDivError::RankMismatch("tail".into()));
        }
        if !tail.is_pointed() {
            return Err(PPDivError::NotPointed);
        }
        let mut map = BTreeMap::new();
        for (p, c) in entries {
            base.check_divisor(&p)?;
            if c.rank() != lattice_rank {
                return Err(PPDivError::RankMismatch(p.to_string()));
            }
            if c.tail() != &tail {
                return Err(PPDivError::WrongTail {
                    divisor: p.to_string(),
                    found: c.tail().to_string(),
                    expected: tail.to_string(),
                });
            }
            if map.contains_key(&p) {
                return Err(PPDivError::DuplicateDivisor(p.to_string()));
            }
            map.insert(p, c);
        }
        Ok(PolyhedralDivisor {
            lattice_rank,
            tail,
            base,
            entries: map,
            proper_by_construction: false,
        })
    }

    /// Marks the divisor as proper for reasons outside the degree certificate
    /// (toric downgrades).
    pub fn mark_proper_by_construction(mut self) -> Self {
        self.proper_by_construction = true;
        self
    }

    pub fn proper_by_construction(&self) -> bool {
        self.proper_by_construction
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn base(&self) -> &BaseVariety {
        &self.base
    }

    pub fn entries(&self) -> &BTreeMap<PrimeDivisor, Coefficient> {
        &self.entries
    }

    /// `ω` as a polyhedron: the coefficient of prime divisors not listed.
    pub fn trivial_coefficient(&self) -> TailedPolyhedron {
        TailedPolyhedron::translate_cone(vec![Rational::zero(); self.lattice_rank], &self.tail)
            .expect("tail is pointed")
    }

    /// The coefficient at `p`, `ω` when absent.
    pub fn coefficient(&self, p: &PrimeDivisor) -> Coefficient {
        self.entries
            .get(p)
            .cloned()
            .unwrap_or_else(|| Coefficient::Polyhedron(self.trivial_coefficient()))
    }

    /// Entries whose coefficient differs from `ω`.
    pub fn nontrivial_entries(&self) -> BTreeMap<PrimeDivisor, Coefficient> {
        let triv = Coefficient::Polyhedron(self.trivial_coefficient());
        self.entries
            .iter()
            .filter(|(_, c)| **c != triv)
            .map(|(p, c)| (p.clone(), c.clone()))
            .collect()
    }

    /// Equality up to entries equal to `ω`.
    pub fn same_divisor(&self, other: &PolyhedralDivisor) -> bool {
        self.lattice_rank == other.lattice_rank
            && self.tail == other.tail
            && self.base == other.base
            && self.nontrivial_entries() == other.nontrivial_entries()
    }

    /// `ω∨`.
    pub fn weight_cone(&self) -> Cone {
        self.tail.dual()
    }

    pub fn with_entries(&self, entries: Vec<(PrimeDivisor, Coefficient)>) -> Result<Self, PPDivError> {
        Self::new(self.lattice_rank, self.tail.clone(), self.base.clone(), entries)
    }

    fn check_weight(&self, m: &LatticeVector) -> Result<(), PPDivError> {
        if m.rank() != self.lattice_rank || !self.weight_cone().contains(m) {
            return Err(PPDivError::OutsideWeightCone(m.clone()));
        }
        Ok(())
    }

    /// `𝔇(m) = Σ h_{Δ_D}(m)·D` on `Loc(𝔇)`; divisors with empty coefficient
    /// are not part of the locus and do not appear.
    pub fn evaluate(&self, m: &LatticeVector) -> Result<QDivisor, PPDivError> {
        self.check_weight(m)?;
        let mut d = QDivisor::zero();
        for (p, c) in &self.entries {
            if let Support::Finite(h) = c.support(m) {
                d.add_term(p.clone(), h);
            }
        }
        Ok(d)
    }

    /// Per-divisor support values, `+inf` on empty coefficients.
    pub fn evaluate_extended(&self, m: &LatticeVector) -> Result<BTreeMap<PrimeDivisor, Support>, PPDivError> {
        self.check_weight(m)?;
        Ok(self.entries.iter().map(|(p, c)| (p.clone(), c.support(m))).collect())
    }

    /// The base with the supports of empty coefficients removed.
    pub fn loc(&self) -> Result<BaseVariety, PPDivError> {
        let empty: Vec<PrimeDivisor> = self
            .entries
            .iter()
            .filter(|(_, c)| c.is_empty())
            .map(|(p, _)| p.clone())
            .collect();
        Ok(self.base.remove(&empty)?)
    }

    /// Fiber polyhedron over a prime divisor: its coefficient, or `ω`.
    pub fn fiber_polyhedron(&self, y: &PrimeDivisor) -> Coefficient {
        self.coefficient(y)
    }

    /// Common refinement of the normal quasifans of all nonempty coefficients,
    /// on the support `ω∨`.
    pub fn refinement(&self) -> Result<Quasifan, PPDivError> {
        let fans: Vec<Quasifan> = self
            .entries
            .values()
            .filter_map(Coefficient::as_polyhedron)
            .map(TailedPolyhedron::normal_quasifan)
            .collect();
        Ok(common_refinement(&self.weight_cone(), &fans)?)
    }

    /// Degree of `𝔇(m)` on a curve base.
    pub fn degree_at(&self, m: &LatticeVector) -> Result<Rational, PPDivError> {
        let d = self.evaluate(m)?;
        Ok(degree(&d, &self.base)?)
    }

    /// Certifies the properness conditions.
    ///
    /// On P¹, `m ↦ deg 𝔇(m)` is concave and linear on each cone of the
    /// refinement, so it is nonnegative on `ω∨` iff it is at the generators of
    /// the maximal cones. A concave nonnegative homogeneous function that is
    /// positive at one relative-interior point is positive on the whole
    /// relative interior, so one interior sample decides bigness.
    pub fn is_proper(&self) -> Result<PropernessCertificate, PPDivError> {
        if !self.base.is_curve() {
            if self.proper_by_construction {
                return Ok(PropernessCertificate::by_construction());
            }
            return Err(PPDivError::UnsupportedBase(
                "properness is certified on curve bases only".into(),
            ));
        }
        let loc = self.loc()?;
        if loc.is_affine_curve() {
            return Ok(PropernessCertificate {
                mode: CertificateMode::AffineLocus,
                semiample_checks: Vec::new(),
                big_checks: Vec::new(),
                semiample: true,
                big: true,
            });
        }
        let fan = self.refinement()?;
        let mut semiample_checks = Vec::new();
        for m in fan.samples() {
            let deg = self.degree_at(&m)?;
            semiample_checks.push((m, deg));
        }
        let interior = self.weight_cone().interior_sample();
        let deg = self.degree_at(&interior)?;
        let semiample = semiample_checks.iter().all(|(_, d)| !d.is_negative());
        let big = deg.is_positive();
        Ok(PropernessCertificate {
            mode: CertificateMode::Degrees,
            semiample_checks,
            big_checks: vec![(interior, deg)],
            semiample,
            big,
        })
    }

    /// `self ≤ other`: every coefficient of `self` is contained in the
    /// corresponding coefficient of `other` (missing entries read as `ω`).
    pub fn leq(&self, other: &PolyhedralDivisor) -> Result<bool, PPDivError> {
        if self.lattice_rank != other.lattice_rank || self.tail != other.tail || self.base != other.base {
            return Err(PPDivError::BaseMismatch);
        }
        let keys: std::collections::BTreeSet<&PrimeDivisor> = self.entries.keys().chain(other.entries.keys()).collect();
        Ok(keys
            .into_iter()
            .all(|p| self.coefficient(p).is_subset_of(&other.coefficient(p))))
    }
}

impl fmt::Display for PolyhedralDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0 (tail {})", self.tail);
        }
        let parts: Vec<String> = self.entries.iter().map(|(p, c)| format!("{c} (x) {p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMode {
    /// Degree checks on P¹.
    Degrees,
    /// The locus is an affine curve: every divisor is semiample and big.
    AffineLocus,
    /// Produced by a construction known to yield proper divisors.
    ByConstruction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropernessCertificate {
    pub mode: CertificateMode,
    pub semiample_checks: Vec<(LatticeVector, Rational)>,
    pub big_checks: Vec<(LatticeVector, Rational)>,
    pub semiample: bool,
    pub big: bool,
}

impl PropernessCertificate {
    fn by_construction() -> Self {
        PropernessCertificate {
            mode: CertificateMode::ByConstruction,
            semiample_checks: Vec::new(),
            big_checks: Vec::new(),
            semiample: true,
            big: true,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.semiample && self.big
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let yn = |b: bool| if b { "yes" } else { "no" };
        match self.mode {
            CertificateMode::Degrees => {
                for (m, d) in &self.semiample_checks {
                    out.push_str(&format!("  deg D({m}) = {}\n", format_rational(d)));
                }
                for (m, d) in &self.big_checks {
                    out.push_str(&format!("  interior sample {m}: deg D({m}) = {}\n", format_rational(d)));
                }
            }
            CertificateMode::AffineLocus => {
                out.push_str("  locus is an affine curve: every evaluation is semiample and big\n")
            }
            CertificateMode::ByConstruction => out.push_str("  proper by construction (toric downgrade)\n"),
        }
        out.push_str(&format!("semiample: {}\n", yn(self.semiample)));
        out.push_str(&format!("big: {}\n", yn(self.big)));
        out.push_str(&format!("proper: {}\n", yn(self.is_proper())));
        out
    }
}

pub fn evaluate(d: &PolyhedralDivisor, m: &LatticeVector) -> Result<QDivisor, PPDivError> {
    d.evaluate(m)
}

pub fn loc(d: &PolyhedralDivisor) -> Result<BaseVariety, PPDivError> {
    d.loc()
}

pub fn fiber_polyhedron(d: &PolyhedralDivisor, y: &PrimeDivisor) -> Coefficient {
    d.fiber_polyhedron(y)
}

pub fn is_proper(d: &PolyhedralDivisor) -> Result<PropernessCertificate, PPDivError> {
    d.is_proper()
}

pub fn leq(a: &PolyhedralDivisor, b: &PolyhedralDivisor) -> Result<bool, PPDivError> {
    a.leq(b)
}
