//! The multigraded section algebra `A[Y,𝔇] = ⊕_{m ∈ ω∨∩M} H⁰(Y, 𝒪(𝔇(m)))`.

mod monoid;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::base::{
    degree, global_sections_basis, global_sections_dim, is_section, BaseError, BaseVariety, PrimeDivisor,
    RationalFunction, SectionDim,
};
use crate::convex::{ConvexError, Support};
use crate::exactnum::Rational;
use crate::lattice::LatticeVector;
use crate::ppdiv::{PPDivError, PolyhedralDivisor, PropernessCertificate};

pub use monoid::hilbert_basis_2d;

/// Truncation used for bases of infinite-dimensional pieces on affine curves.
pub const DEFAULT_DEGREE_BOUND: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polyhedral divisor is not proper")]
    NotProper,
    #[error("weight cone of rank {0} is above the supported rank 2")]
    RankTooHigh(usize),
    #[error("piece at {0} is infinite-dimensional")]
    InfinitePiece(LatticeVector),
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("box has {found} coordinates, lattice rank is {expected}")]
    BoxRank { expected: usize, found: usize },
    #[error(transparent)]
    PPDiv(#[from] PPDivError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceBasis {
    /// Rational functions on a curve base (truncated if the piece is infinite).
    Functions(Vec<RationalFunction>),
    /// Characters `u ∈ M_Y` of a toric base, restricted to a box.
    Characters(Vec<LatticeVector>),
}

impl PieceBasis {
    pub fn len(&self) -> usize {
        match self {
            PieceBasis::Functions(v) => v.len(),
            PieceBasis::Characters(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPiece {
    pub weight: LatticeVector,
    pub dim: SectionDim,
    pub basis: PieceBasis,
}

impl GradedPiece {
    fn zero(weight: &LatticeVector) -> Self {
        GradedPiece {
            weight: weight.clone(),
            dim: SectionDim::Finite(0),
            basis: PieceBasis::Functions(Vec::new()),
        }
    }
}

/// Inclusive integer ranges, one per coordinate.
pub type WeightBox = Vec<(i64, i64)>;

/// All lattice points of a box, in lexicographic order.
pub fn box_points(bx: &[(i64, i64)]) -> Vec<LatticeVector> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in bx {
        let mut next = Vec::new();
        for p in &out {
            for x in lo..=hi {
                let mut q: Vec<i64> = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    if bx.iter().any(|(lo, hi)| lo > hi) {
        return Vec::new();
    }
    out.into_iter().map(LatticeVector).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertTable {
    pub ranges: WeightBox,
    pub cells: BTreeMap<LatticeVector, SectionDim>,
}

impl HilbertTable {
    pub fn get(&self, m: &LatticeVector) -> Option<SectionDim> {
        self.cells.get(m).copied()
    }

    /// Rows indexed by the first coordinate, columns by the second (rank 2);
    /// one line per weight otherwise.
    pub fn render(&self) -> String {
        render_grid(&self.ranges, |m| self.cells[m].to_string())
    }

    /// `{"a,b": dim}` with keys in lexicographic weight order.
    pub fn cell_map(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (m, d) in &self.cells {
            let key: Vec<String> = m.entries().iter().map(|x| x.to_string()).collect();
            let val = match d {
                SectionDim::Finite(n) => serde_json::Value::from(*n as u64),
                SectionDim::Infinite => serde_json::Value::from("inf"),
            };
            map.insert(key.join(","), val);
        }
        serde_json::Value::Object(map)
    }
}

/// Aligned grid for rank-2 boxes, a list for other ranks.
pub fn render_grid(ranges: &[(i64, i64)], cell: impl Fn(&LatticeVector) -> String) -> String {
    let mut out = String::new();
    if ranges.len() == 2 {
        let (a0, a1) = ranges[0];
        let (b0, b1) = ranges[1];
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["a\\b".to_string()];
        header.extend((b0..=b1).map(|b| b.to_string()));
        rows.push(header);
        for a in a0..=a1 {
            let mut row = vec![a.to_string()];
            row.extend((b0..=b1).map(|b| cell(&LatticeVector(vec![a, b]))));
            rows.push(row);
        }
        let ncols = rows[0].len();
        let widths: Vec<usize> = (0..ncols)
            .map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        for r in rows {
            let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(line.join(" ").trim_end());
            out.push('\n');
        }
    } else {
        for m in box_points(ranges) {
            out.push_str(&format!("{m}: {}\n", cell(&m)));
        }
    }
    out
}

/// `A[Y,𝔇]` for a proper polyhedral divisor.
#[derive(Clone, Debug)]
pub struct SectionAlgebra {
    divisor: PolyhedralDivisor,
    locus: BaseVariety,
    certificate: Option<PropernessCertificate>,
    degree_bound: usize,
}

impl SectionAlgebra {
    pub fn new(divisor: PolyhedralDivisor) -> Result<Self, AlgebraError> {
        let certificate = if divisor.base().is_curve() {
            let c = divisor.is_proper()?;
            if !c.is_proper() {
                return Err(AlgebraError::NotProper);
            }
            Some(c)
        } else if divisor.proper_by_construction() {
            None
        } else {
            return Err(AlgebraError::NotProper);
        };
        let locus = divisor.loc()?;
        Ok(SectionAlgebra {
            divisor,
            locus,
            certificate,
            degree_bound: DEFAULT_DEGREE_BOUND,
        })
    }

    pub fn with_degree_bound(mut self, bound: usize) -> Self {
        self.degree_bound = bound;
        self
    }

    pub fn divisor(&self) -> &PolyhedralDivisor {
        &self.divisor
    }

    pub fn certificate(&self) -> Option<&PropernessCertificate> {
        self.certificate.as_ref()
    }

    fn in_weight_cone(&self, m: &LatticeVector) -> bool {
        m.rank() == self.divisor.lattice_rank() && self.divisor.weight_cone().contains(m)
    }

    /// `H⁰(Loc 𝔇, 𝒪(⌊𝔇(m)⌋))` on a curve base; the zero piece outside `ω∨`.
    pub fn graded_piece(&self, m: &LatticeVector) -> Result<GradedPiece, AlgebraError> {
        if !self.divisor.base().is_curve() {
            return Err(AlgebraError::UnsupportedBase(
                "pieces over a toric base are only computed fine-graded, over a box of base characters".into(),
            ));
        }
        if !self.in_weight_cone(m) {
            return Ok(GradedPiece::zero(m));
        }
        let d = self.divisor.evaluate(m)?;
        let dim = global_sections_dim(&d, &self.locus)?;
        let basis = global_sections_basis(&d, &self.locus, self.degree_bound)?;
        let basis = if dim == SectionDim::Finite(0) {
            Vec::new()
        } else {
            basis
        };
        Ok(GradedPiece {
            weight: m.clone(),
            dim,
            basis: PieceBasis::Functions(basis),
        })
    }

    pub fn dim(&self, m: &LatticeVector) -> Result<SectionDim, AlgebraError> {
        Ok(self.graded_piece(m)?.dim)
    }

    pub fn hilbert_table(&self, bx: &[(i64, i64)]) -> Result<HilbertTable, AlgebraError> {
        if bx.len() != self.divisor.lattice_rank() {
            return Err(AlgebraError::BoxRank {
                expected: self.divisor.lattice_rank(),
                found: bx.len(),
            });
        }
        let mut cells = BTreeMap::new();
        for m in box_points(bx) {
            let d = self.dim(&m)?;
            cells.insert(m, d);
        }
        Ok(HilbertTable {
            ranges: bx.to_vec(),
            cells,
        })
    }

    /// Every product of basis elements of the pieces at `m1` and `m2` is a
    /// section of `𝔇(m1 + m2)`. Infinite pieces use their truncated bases.
    pub fn check_multiplication(&self, m1: &LatticeVector, m2: &LatticeVector) -> Result<bool, AlgebraError> {
        let p1 = self.graded_piece(m1)?;
        let p2 = self.graded_piece(m2)?;
        let (PieceBasis::Functions(b1), PieceBasis::Functions(b2)) = (&p1.basis, &p2.basis) else {
            unreachable!("curve pieces carry function bases")
        };
        if b1.is_empty() || b2.is_empty() {
            return Ok(true);
        }
        let sum = m1 + m2;
        let target = self.divisor.evaluate(&sum)?;
        Ok(b1
            .iter()
            .all(|f| b2.iter().all(|g| is_section(&f.mul(g), &target, &self.locus))))
    }

    /// `−deg(⌊𝔇(m)⌋ + ⌊𝔇(−m)⌋)`: the colength of `A_m·A_{−m}` in `A_0` when
    /// `±m` both lie in the weight cone of a divisor on an affine curve.
    pub fn product_colength(&self, m: &LatticeVector) -> Result<Option<Rational>, AlgebraError> {
        let neg = -m;
        if !self.in_weight_cone(m) || !self.in_weight_cone(&neg) {
            return Ok(None);
        }
        let s = self
            .divisor
            .evaluate(m)?
            .floor()
            .add(&self.divisor.evaluate(&neg)?.floor());
        Ok(Some(-degree(&s.restrict(&self.locus), &self.locus)?))
    }

    /// Hilbert-basis generators of `ω∨ ∩ M` (rank at most 2).
    pub fn weight_monoid_generators(&self) -> Result<Vec<LatticeVector>, AlgebraError> {
        weight_monoid_generators(&self.divisor)
    }

    /// Characters `u` in the box spanning the piece at `m` of a toric-base divisor.
    pub fn toric_piece(&self, m: &LatticeVector, ubox: &[(i64, i64)]) -> Result<GradedPiece, AlgebraError> {
        let BaseVariety::Toric { fan, .. } = self.divisor.base() else {
            return Err(AlgebraError::UnsupportedBase("toric pieces need a toric base".into()));
        };
        if ubox.len() != fan.rank {
            return Err(AlgebraError::BoxRank {
                expected: fan.rank,
                found: ubox.len(),
            });
        }
        let chars: Vec<LatticeVector> = box_points(ubox)
            .into_iter()
            .filter(|u| fine_graded_piece(&self.divisor, m, u) == 1)
            .collect();
        let dim = if !self.in_weight_cone(m) {
            SectionDim::Finite(0)
        } else if fan.rank == 0 {
            SectionDim::Finite(chars.len())
        } else {
            SectionDim::Infinite
        };
        Ok(GradedPiece {
            weight: m.clone(),
            dim,
            basis: PieceBasis::Characters(chars),
        })
    }
}

/// `graded_piece` for a divisor known to be proper.
pub fn graded_piece(d: &PolyhedralDivisor, m: &LatticeVector) -> Result<GradedPiece, AlgebraError> {
    SectionAlgebra::new(d.clone())?.graded_piece(m)
}

pub fn hilbert_table(d: &PolyhedralDivisor, bx: &[(i64, i64)]) -> Result<HilbertTable, AlgebraError> {
    SectionAlgebra::new(d.clone())?.hilbert_table(bx)
}

pub fn check_multiplication(
    d: &PolyhedralDivisor,
    m1: &LatticeVector,
    m2: &LatticeVector,
) -> Result<bool, AlgebraError> {
    SectionAlgebra::new(d.clone())?.check_multiplication(m1, m2)
}

/// Generators of the monoid `ω∨ ∩ M`.
pub fn weight_monoid_generators(d: &PolyhedralDivisor) -> Result<Vec<LatticeVector>, AlgebraError> {
    let w = d.weight_cone();
    let r = d.lattice_rank();
    if r > 2 {
        return Err(AlgebraError::RankTooHigh(r));
    }
    let mut gens: Vec<LatticeVector> = w.lineality().iter().flat_map(|l| [l.clone(), -l]).collect();
    match (r, w.lineality().len()) {
        (0, _) => {}
        (_, l) if l == r => {}
        (1, 0) => gens.extend(w.rays().iter().cloned()),
        (2, 1) => {
            // half-plane: a vector at height one over the boundary line
            gens.push(monoid::height_one(&w.facets()[0]));
        }
        (2, 0) => {
            let rays = w.rays();
            gens.extend(hilbert_basis_2d(&rays[0], &rays[1]));
        }
        _ => unreachable!("a pointed-tail weight cone is full-dimensional"),
    }
    gens.sort();
    gens.dedup();
    Ok(gens)
}

/// `1` iff `⟨u, v_ρ⟩ + h_{Δ_ρ}(m) ≥ 0` for every ray `ρ` of the toric base.
pub fn fine_graded_piece(d: &PolyhedralDivisor, m: &LatticeVector, u: &LatticeVector) -> u8 {
    let BaseVariety::Toric { fan, .. } = d.base() else {
        return 0;
    };
    if m.rank() != d.lattice_rank() || !d.weight_cone().contains(m) || u.rank() != fan.rank {
        return 0;
    }
    for (i, v) in fan.rays.iter().enumerate() {
        let h = match d.entries().get(&PrimeDivisor::Ray(i)) {
            Some(c) => c.support(m),
            None => Support::Finite(Rational::zero()),
        };
        let ok = match h {
            Support::PosInf => true,
            Support::NegInf => false,
            Support::Finite(h) => {
                let s = Rational::from_integer(u.dot(v).into()) + h;
                !s.is_negative()
            }
        };
        if !ok {
            return 0;
        }
    }
    1
}

/// Dimension as an integer; `None` for infinite pieces.
pub fn finite_dim(d: SectionDim) -> Option<i64> {
    d.finite().and_then(|n| n.to_i64())
}

impl fmt::Display for GradedPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{} : dim {}", self.weight, self.dim)?;
        match &self.basis {
            PieceBasis::Functions(b) => {
                let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                write!(f, ", basis [{}]", parts.join(", "))
            }
            PieceBasis::Characters(b) => {
                let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                write!(f, ", characters [{}]", parts.join(", "))
            }
        }
    }
}
