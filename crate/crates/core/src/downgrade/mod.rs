//! Downgrading a torus action on an affine toric variety to a subtorus.
//!
//! Given a pointed cone `σ ⊂ N_Q` and a saturated sublattice `F: N′ ↪ N`, the
//! residual `N′`-action is described by a polyhedral divisor on the toric
//! variety of the projected fan in `N″ = N/N′`, with coefficients
//! `s(σ ∩ P⁻¹(v_ρ))` for a section `s` of `F`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use thiserror::Error;

use crate::base::{BaseVariety, PrimeDivisor};
use crate::convex::{lattice_to_q, Coefficient, Cone, ConvexError, QVector, TailedPolyhedron, ToricFan};
use crate::exactnum::linalg::solve;
use crate::exactnum::{Field, Rational};
use crate::lattice::{smith_split, LatticeError, LatticeMorphism, LatticeVector, SplitSequence};
use crate::ppdiv::{PPDivError, PolyhedralDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DowngradeError {
    #[error("sigma must be pointed")]
    NotPointed,
    #[error("sigma must be full-dimensional")]
    NotFullDimensional,
    #[error("base lattice of rank {0} is above the supported rank 2")]
    RankTooHigh(usize),
    #[error("{0} (is the subtorus saturated?)")]
    Split(LatticeError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
    #[error(transparent)]
    PPDiv(#[from] PPDivError),
}

impl From<LatticeError> for DowngradeError {
    fn from(e: LatticeError) -> Self {
        DowngradeError::Split(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DowngradeInput {
    pub sigma: Cone,
    pub inclusion: LatticeMorphism,
    /// Optional projection `P: N → N″`; computed from a Smith form when absent.
    pub projection: Option<LatticeMorphism>,
    /// Optional section `s: N → N′` with `s∘F = id`.
    pub section: Option<LatticeMorphism>,
}

#[derive(Clone, Debug)]
pub struct DowngradeOutput {
    pub fan: ToricFan,
    pub ppdiv: PolyhedralDivisor,
    pub split: SplitSequence,
    /// The prime divisor of the base attached to each fan ray.
    pub ray_divisors: Vec<PrimeDivisor>,
}

fn det(a: &LatticeVector, b: &LatticeVector) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Counterclockwise order starting at the positive first axis.
fn angle_cmp(a: &LatticeVector, b: &LatticeVector) -> Ordering {
    let half = |v: &LatticeVector| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det(a, b)))
}

/// The coarsest fan refining the images of the faces of `sigma` under `P`
/// (target rank at most 2).
pub fn projected_fan(sigma: &Cone, p: &LatticeMorphism) -> Result<ToricFan, DowngradeError> {
    let r = p.target_rank();
    if r > 2 {
        return Err(DowngradeError::RankTooHigh(r));
    }
    let image = sigma.image(p)?;
    let mut rays: Vec<LatticeVector> = Vec::new();
    for g in sigma.generators() {
        let v = p.apply(&g)?;
        if !v.is_zero() {
            rays.push(v.primitive());
        }
    }
    rays.sort();
    rays.dedup();
    let cones: Vec<Vec<usize>> = match r {
        0 => vec![vec![]],
        1 => {
            rays.sort_by(|a, b| b.cmp(a));
            (0..rays.len()).map(|i| vec![i]).collect()
        }
        _ => {
            rays.sort_by(angle_cmp);
            let n = rays.len();
            let mut cones = Vec::new();
            for i in 0..n {
                let j = (i + 1) % n;
                if n < 2 {
                    continue;
                }
                let (a, b) = (&rays[i], &rays[j]);
                if det(a, b) > 0 && image.contains(&(a + b)) {
                    cones.push(vec![i, j]);
                }
            }
            let covered: Vec<usize> = cones.iter().flatten().copied().collect();
            for i in 0..n {
                if !covered.contains(&i) {
                    cones.push(vec![i]);
                }
            }
            cones
        }
    };
    let fan = ToricFan { rank: r, rays, cones };
    fan.validate()?;
    Ok(fan)
}

/// `s(σ ∩ P⁻¹(v))` from the H-representation of `σ`.
fn slice(
    sigma: &Cone,
    split: &SplitSequence,
    tail: &Cone,
    v: &LatticeVector,
) -> Result<TailedPolyhedron, DowngradeError> {
    let (f, p, s) = (&split.inclusion, &split.projection, &split.section);
    let rows: Vec<Vec<Rational>> = p
        .rows()
        .iter()
        .map(|r| lattice_to_q(&LatticeVector(r.clone())))
        .collect();
    let x0 = solve(&rows, &lattice_to_q(v)).expect("P is surjective");
    let sx0: QVector = s
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .zip(&x0)
                .map(|(a, b)| Rational::from_integer(BigInt::from(*a)) * b)
                .sum()
        })
        .collect();
    let ft = f.transpose();
    let dotq = |a: &LatticeVector, x: &[Rational]| -> Rational {
        a.entries()
            .iter()
            .zip(x)
            .map(|(ai, xi)| Rational::from_integer(BigInt::from(*ai)) * xi)
            .sum()
    };
    let lift = |normal: &LatticeVector| -> Result<(QVector, Rational), DowngradeError> {
        let a = ft.apply(normal)?;
        let b = dotq(&a, &sx0) - dotq(normal, &x0);
        Ok((lattice_to_q(&a), b))
    };
    let ineqs = sigma.facets().iter().map(lift).collect::<Result<Vec<_>, _>>()?;
    let eqs = sigma.equations().iter().map(lift).collect::<Result<Vec<_>, _>>()?;
    let delta = TailedPolyhedron::from_inequalities(f.source_rank(), &ineqs, &eqs)?;
    if delta.tail() != tail {
        return Err(ConvexError::TailMismatch.into());
    }
    Ok(delta)
}

fn complete_split(input: &DowngradeInput) -> Result<SplitSequence, DowngradeError> {
    let mut split = smith_split(&input.inclusion)?;
    if let Some(p) = &input.projection {
        split.projection = p.clone();
    }
    if let Some(s) = &input.section {
        split.section = s.clone();
    }
    split.validate()?;
    Ok(split)
}

pub fn downgrade(input: &DowngradeInput) -> Result<DowngradeOutput, DowngradeError> {
    let sigma = &input.sigma;
    if !sigma.is_pointed() {
        return Err(DowngradeError::NotPointed);
    }
    if !sigma.is_full_dimensional() {
        return Err(DowngradeError::NotFullDimensional);
    }
    if input.inclusion.target_rank() != sigma.rank() {
        return Err(LatticeError::RankMismatch {
            expected: sigma.rank(),
            found: input.inclusion.target_rank(),
        }
        .into());
    }
    let split = complete_split(input)?;
    let fan = projected_fan(sigma, &split.projection)?;
    let tail = sigma.preimage(&split.inclusion)?;
    let rank = split.inclusion.source_rank();

    let (base, ray_divisors) = match fan.rank {
        1 => {
            let divs: Vec<PrimeDivisor> = fan
                .rays
                .iter()
                .map(|v| {
                    if v[0] > 0 || fan.rays.len() == 1 {
                        PrimeDivisor::at_int(0)
                    } else {
                        PrimeDivisor::Infinity
                    }
                })
                .collect();
            let base = if fan.rays.len() == 2 {
                BaseVariety::ProjLine(Field::Rationals)
            } else {
                BaseVariety::AffLine(Field::Rationals)
            };
            (base, divs)
        }
        _ => (
            BaseVariety::Toric {
                fan: fan.clone(),
                field: Field::Rationals,
            },
            (0..fan.rays.len()).map(PrimeDivisor::Ray).collect(),
        ),
    };
    let entries = fan
        .rays
        .iter()
        .zip(&ray_divisors)
        .map(|(v, d)| Ok((d.clone(), Coefficient::Polyhedron(slice(sigma, &split, &tail, v)?))))
        .collect::<Result<Vec<_>, DowngradeError>>()?;
    let ppdiv = PolyhedralDivisor::new(rank, tail, base, entries)?.mark_proper_by_construction();
    Ok(DowngradeOutput {
        fan,
        ppdiv,
        split,
        ray_divisors,
    })
}

impl DowngradeOutput {
    /// For a character `e ∈ M` of the torus of `N`, the weight `m = Fᵀe` and
    /// the base character `u` with `Pᵀu = e − sᵀm`.
    pub fn decompose_character(&self, e: &LatticeVector) -> Result<(LatticeVector, LatticeVector), DowngradeError> {
        let m = self.split.inclusion.transpose().apply(e)?;
        let rest = e - &self.split.section.transpose().apply(&m)?;
        // s∘F = id and P∘F = 0 give F s + t P = id for t a section of P,
        // hence u = tᵀ(rest); solving Pᵀu = rest is exact and integral.
        let pt = self.split.projection.transpose();
        let rows: Vec<Vec<Rational>> = pt
            .rows()
            .iter()
            .map(|r| lattice_to_q(&LatticeVector(r.clone())))
            .collect();
        let u = if pt.source_rank() == 0 {
            Vec::new()
        } else {
            solve(&rows, &lattice_to_q(&rest)).expect("sequence is exact")
        };
        let u: Vec<i64> = u
            .iter()
            .map(|x| {
                assert!(x.is_integer(), "split sequence gives integral characters");
                i64::try_from(x.to_integer()).expect("small")
            })
            .collect();
        Ok((m, LatticeVector(u)))
    }

    /// `1` iff the character `e` of the big torus carries a nonzero element
    /// of the fine-graded algebra. Independent of the chosen section.
    pub fn character_dim(&self, e: &LatticeVector) -> Result<u8, DowngradeError> {
        let (m, u) = self.decompose_character(e)?;
        if self.fan.rank == 0 {
            return Ok(u8::from(self.ppdiv.weight_cone().contains(&m)));
        }
        if self.fan.rank == 1 {
            // on a curve base, characters of the base torus are t^u
            let d = match self.ppdiv.evaluate(&m) {
                Ok(d) => d,
                Err(PPDivError::OutsideWeightCone(_)) => return Ok(0),
                Err(e) => return Err(e.into()),
            };
            let ok = self.fan.rays.iter().zip(&self.ray_divisors).all(|(v, p)| {
                let h = d.coeff(p);
                Rational::from_integer(BigInt::from(u.dot(v))) + h >= Rational::from_integer(BigInt::from(0))
            });
            return Ok(u8::from(ok));
        }
        Ok(crate::algebra::fine_graded_piece(&self.ppdiv, &m, &u))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let rays: Vec<String> = self.fan.rays.iter().map(|r| r.to_string()).collect();
        let none = |v: Vec<String>| if v.is_empty() { "none".to_string() } else { v.join(" ") };
        out.push_str(&format!("fan rays: {}\n", none(rays)));
        let cones: Vec<String> = self
            .fan
            .cones
            .iter()
            .map(|c| {
                let idx: Vec<String> = c.iter().map(|i| i.to_string()).collect();
                format!("[{}]", idx.join(","))
            })
            .collect();
        out.push_str(&format!("fan cones: {}\n", none(cones)));
        out.push_str(&format!("P: {}\n", self.split.projection));
        out.push_str(&format!("s: {}\n", self.split.section));
        out.push_str(&format!("tail: {}\n", self.ppdiv.tail()));
        out.push_str(&format!("base: {}\n", self.ppdiv.base()));
        for (v, d) in self.fan.rays.iter().zip(&self.ray_divisors) {
            out.push_str(&format!("  {} at ray {v} ({d})\n", self.ppdiv.coefficient(d)));
        }
        out
    }
}
