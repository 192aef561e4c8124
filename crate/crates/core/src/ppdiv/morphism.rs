use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use super::{pluri_divisor, PPDivError, Plurifunction, PolyhedralDivisor};
use crate::base::{PrimeDivisor, SemilinearBaseMap};
use crate::convex::{common_refinement, Coefficient, Quasifan, Support, TailedPolyhedron};
use crate::exactnum::Rational;
use crate::lattice::{LatticeMorphism, LatticeVector};

/// A morphism `(ψ, F, 𝔣)` of polyhedral divisors: a semilinear base map, a
/// lattice map `F: N → N′` and a plurifunction `𝔣 ∈ N′ ⊗ K(Y)*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPDivMorphism {
    pub psi: SemilinearBaseMap,
    pub lattice_map: LatticeMorphism,
    pub pluri: Plurifunction,
}

impl PPDivMorphism {
    pub fn new(psi: SemilinearBaseMap, lattice_map: LatticeMorphism, pluri: Plurifunction) -> Result<Self, PPDivError> {
        if pluri.rank() != lattice_map.target_rank() {
            return Err(PPDivError::RankMismatch("plurifunction".into()));
        }
        Ok(PPDivMorphism {
            psi,
            lattice_map,
            pluri,
        })
    }

    pub fn identity(d: &PolyhedralDivisor) -> Self {
        PPDivMorphism {
            psi: SemilinearBaseMap::identity(d.base().field()),
            lattice_map: LatticeMorphism::identity(d.lattice_rank()),
            pluri: Plurifunction::trivial(d.lattice_rank()),
        }
    }

    /// Equality of triples: same base map, same lattice map, equal plurifunctions.
    pub fn equals(&self, other: &PPDivMorphism) -> bool {
        self.psi.same_map(&other.psi) && self.lattice_map == other.lattice_map && self.pluri.equals(&other.pluri)
    }

    pub fn is_identity(&self) -> bool {
        self.psi.is_identity() && self.lattice_map.is_identity() && self.pluri.is_trivial()
    }
}

impl fmt::Display for PPDivMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi: {}; F: {}; f: {}", self.psi, self.lattice_map, self.pluri)
    }
}

/// `F_*𝔇 = Σ (F(Δ_D) + ω′) ⊗ D`.
pub fn pushforward(
    f: &LatticeMorphism,
    d: &PolyhedralDivisor,
    target_tail: &crate::convex::Cone,
) -> Result<PolyhedralDivisor, PPDivError> {
    if f.source_rank() != d.lattice_rank() || f.target_rank() != target_tail.rank() {
        return Err(PPDivError::RankMismatch("lattice map".into()));
    }
    if !target_tail.contains_cone(&d.tail().image(f)?) {
        return Err(PPDivError::TailNotMapped);
    }
    let entries = d
        .entries()
        .iter()
        .map(|(p, c)| {
            let img = match c {
                Coefficient::Polyhedron(q) => Coefficient::Polyhedron(q.image(f, target_tail)?),
                Coefficient::Empty { .. } => Coefficient::Empty {
                    rank: target_tail.rank(),
                    tail: target_tail.clone(),
                },
            };
            Ok((p.clone(), img))
        })
        .collect::<Result<Vec<_>, PPDivError>>()?;
    PolyhedralDivisor::new(target_tail.rank(), target_tail.clone(), d.base().clone(), entries)
}

/// `ψ*𝔇 = Σ Δ_D ⊗ ψ*D` for an automorphism ψ of the base.
pub fn pullback(psi: &SemilinearBaseMap, d: &PolyhedralDivisor) -> Result<PolyhedralDivisor, PPDivError> {
    psi.check_on(d.base())?;
    let entries = d
        .entries()
        .iter()
        .map(|(p, c)| Ok((psi.pullback_prime(p)?, c.clone())))
        .collect::<Result<Vec<_>, PPDivError>>()?;
    d.with_entries(entries)
}

/// Which relation between `ψ*𝔇′` and `F_*𝔇 + div 𝔣` is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleRelation {
    /// `ψ*𝔇′ ≤ F_*𝔇 + div 𝔣`: a morphism.
    Leq,
    /// Equality: a semilinear isomorphism.
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismFailure {
    pub weight: LatticeVector,
    pub divisor: PrimeDivisor,
    pub lhs: Support,
    pub rhs: Support,
}

impl fmt::Display for MorphismFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &Support| match s {
            Support::Finite(q) => crate::exactnum::rational::format_rational(q),
            Support::PosInf => "inf".into(),
            Support::NegInf => "-inf".into(),
        };
        write!(
            f,
            "at m = {} on {}: pulled back {} vs {}",
            self.weight,
            self.divisor,
            show(&self.lhs),
            show(&self.rhs)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismReport {
    pub relation: TripleRelation,
    pub samples: Vec<LatticeVector>,
    pub failures: Vec<MorphismFailure>,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn support_leq(a: &Support, b: &Support) -> bool {
    a <= b
}

fn add_support(a: Support, k: &Rational) -> Support {
    match a {
        Support::Finite(x) => Support::Finite(x + k),
        other => other,
    }
}

/// Compares `ψ*𝔇′(m)` with `𝔇(Fᵀm) + div 𝔣(m)` prime by prime at the
/// generators of a common refinement of `ω′∨` on which both sides are linear.
pub fn compare_triple(
    t: &PPDivMorphism,
    source: &PolyhedralDivisor,
    target: &PolyhedralDivisor,
    relation: TripleRelation,
) -> Result<MorphismReport, PPDivError> {
    let f = &t.lattice_map;
    if f.source_rank() != source.lattice_rank() || f.target_rank() != target.lattice_rank() {
        return Err(PPDivError::RankMismatch("lattice map".into()));
    }
    if t.pluri.rank() != target.lattice_rank() {
        return Err(PPDivError::RankMismatch("plurifunction".into()));
    }
    if source.base() != target.base() {
        return Err(PPDivError::BaseMapMismatch(format!(
            "source base {} differs from target base {}",
            source.base(),
            target.base()
        )));
    }
    t.psi
        .check_on(source.base())
        .map_err(|e| PPDivError::BaseMapMismatch(e.to_string()))?;
    if !target.tail().contains_cone(&source.tail().image(f)?) {
        return Err(PPDivError::TailNotMapped);
    }
    let ft = f.transpose();
    let weight = target.weight_cone();

    let mut fans: Vec<Quasifan> = target
        .entries()
        .values()
        .filter_map(Coefficient::as_polyhedron)
        .map(TailedPolyhedron::normal_quasifan)
        .collect();
    for q in source.entries().values().filter_map(Coefficient::as_polyhedron) {
        let nf = q.normal_quasifan();
        let pre = nf
            .maximal_cones()
            .iter()
            .map(|c| c.preimage(&ft))
            .collect::<Result<Vec<_>, _>>()?;
        fans.push(Quasifan::from_maximal(target.lattice_rank(), pre));
    }
    let fan = common_refinement(&weight, &fans)?;
    let samples = fan.samples();

    let pulled = pullback(&t.psi, target)?;
    let div_f = pluri_divisor(&t.pluri, target.tail(), target.base())?;

    let mut failures = Vec::new();
    for m in &samples {
        let lhs = pulled.evaluate_extended(m)?;
        let fm = ft.apply(m)?;
        let src = source.evaluate_extended(&fm)?;
        let df = div_f.eval(m)?;
        let primes: BTreeSet<PrimeDivisor> = lhs
            .keys()
            .chain(src.keys())
            .chain(df.entries().keys())
            .cloned()
            .collect();
        let zero = Support::Finite(Rational::from_integer(BigInt::from(0)));
        for p in primes {
            let l = lhs.get(&p).cloned().unwrap_or_else(|| zero.clone());
            let r = add_support(src.get(&p).cloned().unwrap_or_else(|| zero.clone()), &df.coeff(&p));
            let ok = match relation {
                TripleRelation::Leq => support_leq(&l, &r),
                TripleRelation::Eq => l == r,
            };
            if !ok {
                failures.push(MorphismFailure {
                    weight: m.clone(),
                    divisor: p,
                    lhs: l,
                    rhs: r,
                });
            }
        }
    }
    Ok(MorphismReport {
        relation,
        samples,
        failures,
    })
}

/// Whether `t` is a morphism `source → target`.
pub fn is_morphism(
    t: &PPDivMorphism,
    source: &PolyhedralDivisor,
    target: &PolyhedralDivisor,
) -> Result<MorphismReport, PPDivError> {
    compare_triple(t, source, target, TripleRelation::Leq)
}

/// `second ∘ first = (ψ₂∘ψ₁, F₂F₁, F₂_*(𝔣₁)·ψ₁*(𝔣₂))`.
pub fn compose(second: &PPDivMorphism, first: &PPDivMorphism) -> Result<PPDivMorphism, PPDivError> {
    if second.lattice_map.source_rank() != first.lattice_map.target_rank() {
        return Err(PPDivError::ChainMismatch(format!(
            "rank {} into rank {}",
            first.lattice_map.target_rank(),
            second.lattice_map.source_rank()
        )));
    }
    let psi = second
        .psi
        .after(&first.psi)
        .map_err(|e| PPDivError::ChainMismatch(e.to_string()))?;
    let lattice_map = second.lattice_map.compose(&first.lattice_map)?;
    let pluri = first
        .pluri
        .push_forward(&second.lattice_map)?
        .mul(&second.pluri.pullback(&first.psi))?;
    PPDivMorphism::new(psi, lattice_map, pluri)
}
