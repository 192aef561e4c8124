//! Galois semilinear actions of `Γ = Gal(L/Q) ≅ Z/2`, `L = Q(√d)`, on
//! polyhedral divisors: automorphism and group-law checks, the Gillard
//! cocycle, descent of graded pieces, and lattice automorphisms preserving a
//! tail cone.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{box_points, weight_monoid_generators, AlgebraError, PieceBasis, SectionAlgebra};
use crate::base::{divisor_of, BaseError, BaseVariety, RationalFunction, SectionDim, Twist};
use crate::convex::{Cone, ConvexError};
use crate::exactnum::linalg::rank;
use crate::exactnum::{Field, QuadElement, Rational};
use crate::lattice::{LatticeError, LatticeMorphism, LatticeVector};
use crate::ppdiv::{
    compare_triple, compose, MorphismReport, PPDivError, PPDivMorphism, PolyhedralDivisor, TripleRelation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("tail cone must be pointed")]
    NotPointed,
    #[error("lattice of rank {0} is above the supported rank 2")]
    RankTooHigh(usize),
    #[error("unsupported order {0}; only 1 and 2 are implemented")]
    UnsupportedOrder(u32),
    #[error("invalid action: {0}")]
    ActionInvalid(String),
    #[error("piece at {0} is infinite-dimensional")]
    InfinitePiece(LatticeVector),
    #[error(transparent)]
    PPDiv(#[from] PPDivError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Base(#[from] BaseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionGroup {
    Trivial,
    Z2,
}

/// A group homomorphism `Γ → SAut(𝔇)`, given by the image of the generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearAction {
    pub group: ActionGroup,
    pub generator: PPDivMorphism,
}

impl SemilinearAction {
    pub fn trivial(d: &PolyhedralDivisor) -> Self {
        SemilinearAction {
            group: ActionGroup::Trivial,
            generator: PPDivMorphism::identity(d),
        }
    }

    pub fn z2(generator: PPDivMorphism) -> Self {
        SemilinearAction {
            group: ActionGroup::Z2,
            generator,
        }
    }

    fn dual_map(&self) -> LatticeMorphism {
        self.generator.lattice_map.transpose()
    }
}

/// `ψ*_γ(𝔇) = F_*(𝔇) + div(𝔣)`, checked exactly on a common refinement.
pub fn is_semilinear_automorphism(t: &PPDivMorphism, d: &PolyhedralDivisor) -> Result<MorphismReport, GaloisError> {
    let f = &t.lattice_map;
    if f.source_rank() != d.lattice_rank() || f.target_rank() != d.lattice_rank() || f.inverse().is_err() {
        return Err(GaloisError::ActionInvalid(
            "the lattice map must be an automorphism".into(),
        ));
    }
    if d.tail().image(f)? != *d.tail() {
        return Err(GaloisError::ActionInvalid(
            "the lattice map must preserve the tail cone".into(),
        ));
    }
    Ok(compare_triple(t, d, d, TripleRelation::Eq)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareLawReport {
    pub psi_square_identity: bool,
    pub lattice_square_identity: bool,
    /// Weights at which the composed plurifunction is not `1`.
    pub pluri_failures: Vec<(LatticeVector, RationalFunction)>,
}

impl SquareLawReport {
    pub fn holds(&self) -> bool {
        self.psi_square_identity && self.lattice_square_identity && self.pluri_failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub twist_ok: bool,
    pub automorphism: MorphismReport,
    pub square_law: SquareLawReport,
}

impl ActionReport {
    pub fn holds(&self) -> bool {
        self.twist_ok && self.automorphism.holds() && self.square_law.holds()
    }
}

/// Generator is a semilinear automorphism and `g∘g` is the identity triple
/// (for the trivial group, the generator itself is the identity).
pub fn is_galois_action(a: &SemilinearAction, d: &PolyhedralDivisor) -> Result<ActionReport, GaloisError> {
    let g = &a.generator;
    let automorphism = is_semilinear_automorphism(g, d)?;
    let gens = weight_monoid_generators(d)?;
    let (twist_ok, square) = match a.group {
        ActionGroup::Trivial => (g.psi.twist == Twist::Identity, g.clone()),
        ActionGroup::Z2 => (
            g.psi.twist == Twist::Conjugation && matches!(d.base().field(), Field::Quadratic(_)),
            compose(g, g)?,
        ),
    };
    let pluri_failures = gens
        .iter()
        .map(|m| (m.clone(), square.pluri.eval(m)))
        .filter(|(_, v)| !v.is_one())
        .collect();
    Ok(ActionReport {
        twist_ok,
        automorphism,
        square_law: SquareLawReport {
            psi_square_identity: square.psi.is_identity(),
            lattice_square_identity: square.lattice_map.is_identity(),
            pluri_failures,
        },
    })
}

/// `h_γ(m) = 𝔣_γ(F*_{γ⁻¹}(m))` on the weight-monoid generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GillardCocycle {
    pub values: Vec<(LatticeVector, RationalFunction)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GillardReport {
    pub cocycle: GillardCocycle,
    /// Weights where `ψ*(𝔇(m)) = 𝔇(F*m) + div h(F*m)` fails.
    pub identity_failures: Vec<LatticeVector>,
    /// Weights where `1 = h(m)·ψ*(h(F*m))` fails.
    pub cocycle_failures: Vec<LatticeVector>,
}

impl GillardReport {
    pub fn holds(&self) -> bool {
        self.identity_failures.is_empty() && self.cocycle_failures.is_empty()
    }
}

/// Evaluates both identities for any generator whose lattice map is an
/// automorphism of `ω`; failures are reported, not raised. The cocycle is
/// tabulated on the weight-monoid generators. Identity (a) is piecewise
/// linear in `m`, so it is also checked on the samples of the refinement
/// used by the automorphism check.
pub fn gillard_cocycle(a: &SemilinearAction, d: &PolyhedralDivisor) -> Result<GillardReport, GaloisError> {
    let samples = is_semilinear_automorphism(&a.generator, d)?.samples;
    let g = &a.generator;
    let ft = a.dual_map();
    let loc = d.loc()?;
    let h = |m: &LatticeVector| -> Result<RationalFunction, GaloisError> { Ok(g.pluri.eval(&ft.apply(m)?)) };
    let generators = weight_monoid_generators(d)?;
    let mut weights: Vec<LatticeVector> = generators.clone();
    for m in samples {
        if !weights.contains(&m) {
            weights.push(m);
        }
    }
    let mut values = Vec::new();
    let mut identity_failures = Vec::new();
    let mut cocycle_failures = Vec::new();
    for m in weights {
        let hm = h(&m)?;
        let fm = ft.apply(&m)?;
        let lhs = g.psi.pullback_divisor(&d.evaluate(&m)?)?;
        let rhs = d.evaluate(&fm)?.add(&divisor_of(&h(&fm)?, &loc)?);
        if lhs.restrict(&loc) != rhs.restrict(&loc) {
            identity_failures.push(m.clone());
        }
        let prod = hm.mul(&g.psi.pullback_function(&h(&fm)?));
        if !prod.is_one() {
            cocycle_failures.push(m.clone());
        }
        if generators.contains(&m) {
            values.push((m, hm));
        }
    }
    Ok(GillardReport {
        cocycle: GillardCocycle { values },
        identity_failures,
        cocycle_failures,
    })
}

/// The semilinear operator `T(s) = 𝔣(m)·ψ*_γ(s)` on `V = ⊕_{m ∈ orbit} A_m`,
/// written as a Q-linear map on `L^n ≅ Q^{2n}`.
#[derive(Clone, Debug)]
pub struct DescentOperator {
    pub orbit: Vec<LatticeVector>,
    pub dim_l: usize,
    radicand: i64,
    /// Column `j` holds the L-coordinates of `T(e_j)`.
    images: Vec<Vec<QuadElement>>,
}

fn quad_parts(x: &QuadElement) -> (Rational, Rational) {
    (x.a.clone(), x.b.clone())
}

impl DescentOperator {
    /// `T(Σ λ_j e_j) = Σ γ(λ_j) T(e_j)`.
    pub fn apply(&self, v: &[QuadElement]) -> Vec<QuadElement> {
        let mut out = vec![QuadElement::zero(); self.dim_l];
        for (lam, col) in v.iter().zip(&self.images) {
            let g = lam.conjugate();
            for (o, c) in out.iter_mut().zip(col) {
                *o = &*o + &(&g * c);
            }
        }
        out
    }

    /// `2n × 2n` rational matrix of `T` in the Q-basis `e_1, √d e_1, …`.
    pub fn q_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.dim_l;
        let d = Rational::from_integer(BigInt::from(self.radicand));
        let mut m = vec![vec![Rational::zero(); 2 * n]; 2 * n];
        for (j, col) in self.images.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                let (a, b) = quad_parts(c);
                // T(e_j) = Σ (a + b√d) e_i
                m[2 * i][2 * j] = a.clone();
                m[2 * i + 1][2 * j] = b.clone();
                // T(√d e_j) = −√d T(e_j) = Σ (−b d − a√d) e_i
                m[2 * i][2 * j + 1] = -(&b * &d);
                m[2 * i + 1][2 * j + 1] = -a;
            }
        }
        m
    }

    /// `dim_Q V^Γ = 2n − rank_Q(T − I)`.
    pub fn fixed_dim_q(&self) -> usize {
        let mut m = self.q_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= Rational::one();
        }
        2 * self.dim_l - rank(&m)
    }
}

/// Coordinates of `g` in the basis `φ·tʲ` (j = 0..len) of a piece on P¹.
fn coordinates(g: &RationalFunction, basis: &[RationalFunction]) -> Option<Vec<QuadElement>> {
    let phi = basis.first()?;
    let (gn, gd) = g.div(phi).numerator_denominator();
    let (q, r) = gn.div_rem(&gd).ok()?;
    if !r.is_zero() || q.degree().is_some_and(|k| k >= basis.len()) {
        return None;
    }
    Some((0..basis.len()).map(|j| q.coeff(j)).collect())
}

pub fn descent_operator(
    a: &SemilinearAction,
    d: &PolyhedralDivisor,
    m: &LatticeVector,
) -> Result<DescentOperator, GaloisError> {
    let Field::Quadratic(radicand) = d.base().field() else {
        return Err(GaloisError::ActionInvalid("descent needs a base over Q(√d)".into()));
    };
    if !matches!(d.base(), BaseVariety::ProjLine(_)) || !d.loc()?.eq(d.base()) {
        return Err(GaloisError::InfinitePiece(m.clone()));
    }
    let alg = SectionAlgebra::new(d.clone())?;
    let ft = a.dual_map();
    let mut orbit = vec![m.clone()];
    let fm = ft.apply(m)?;
    if a.group == ActionGroup::Z2 && fm != *m {
        orbit.push(fm);
    }
    let mut bases = Vec::new();
    for w in &orbit {
        let piece = alg.graded_piece(w)?;
        let SectionDim::Finite(_) = piece.dim else {
            return Err(GaloisError::InfinitePiece(w.clone()));
        };
        let PieceBasis::Functions(b) = piece.basis else {
            unreachable!("curve pieces carry function bases")
        };
        bases.push(b);
    }
    let offsets: Vec<usize> = bases
        .iter()
        .scan(0, |acc, b| {
            let o = *acc;
            *acc += b.len();
            Some(o)
        })
        .collect();
    let dim_l: usize = bases.iter().map(Vec::len).sum();
    let g = &a.generator;
    let mut images = Vec::with_capacity(dim_l);
    for (k, w) in orbit.iter().enumerate() {
        let target = ft.apply(w)?;
        let tk = orbit.iter().position(|x| *x == target).expect("orbit is closed");
        let factor = match a.group {
            ActionGroup::Trivial => RationalFunction::one(),
            ActionGroup::Z2 => g.pluri.eval(w),
        };
        for s in &bases[k] {
            let image = match a.group {
                ActionGroup::Trivial => s.clone(),
                ActionGroup::Z2 => factor.mul(&g.psi.pullback_function(s)),
            };
            let coords = coordinates(&image, &bases[tk])
                .ok_or_else(|| GaloisError::ActionInvalid(format!("T does not map A_{w} into A_{target}")))?;
            let mut col = vec![QuadElement::zero(); dim_l];
            for (i, c) in coords.into_iter().enumerate() {
                col[offsets[tk] + i] = c;
            }
            images.push(col);
        }
    }
    if a.group == ActionGroup::Trivial {
        // the trivial group acts through the identity of L, not by conjugation
        return Ok(DescentOperator {
            orbit,
            dim_l,
            radicand,
            images,
        }
        .trivialized());
    }
    Ok(DescentOperator {
        orbit,
        dim_l,
        radicand,
        images,
    })
}

impl DescentOperator {
    /// For the trivial group `V^Γ = V` viewed over Q.
    fn trivialized(self) -> Self {
        DescentOperator { radicand: 0, ..self }
    }

    pub fn is_trivial_group(&self) -> bool {
        self.radicand == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentCell {
    pub orbit: Vec<LatticeVector>,
    pub dim_l: usize,
    /// `dim_Q V^Γ`; for the trivial group the Q-dimension of `V` itself.
    pub dim_q_fixed: usize,
}

impl fmt::Display for DescentCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o: Vec<String> = self.orbit.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "{{{}}}  dim_L V = {}  dim_Q V^G = {}",
            o.join(", "),
            self.dim_l,
            self.dim_q_fixed
        )
    }
}

/// One cell per Γ-orbit of weights in the box.
pub fn descent_dimensions(
    a: &SemilinearAction,
    d: &PolyhedralDivisor,
    bx: &[(i64, i64)],
) -> Result<Vec<DescentCell>, GaloisError> {
    let report = is_galois_action(a, d)?;
    if !report.holds() {
        return Err(GaloisError::ActionInvalid(
            "the generator does not define an action".into(),
        ));
    }
    let ft = a.dual_map();
    let mut seen: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut cells = Vec::new();
    for m in box_points(bx) {
        if seen.contains(&m) {
            continue;
        }
        let op = descent_operator(a, d, &m)?;
        seen.extend(op.orbit.iter().cloned());
        seen.insert(ft.apply(&m)?);
        let dim_q_fixed = if op.is_trivial_group() {
            // over the trivial group the Q-form is the span of the basis
            op.dim_l
        } else {
            op.fixed_dim_q()
        };
        cells.push(DescentCell {
            orbit: op.orbit.clone(),
            dim_l: op.dim_l,
            dim_q_fixed,
        });
    }
    Ok(cells)
}

/// Lattice automorphisms `F` of `Z²` with `F^order = id` and `F(ω) = ω`.
///
/// For a two-dimensional `ω`, `F` permutes the primitive ray generators, so it
/// is determined by that permutation. For lower-dimensional `ω` the search is
/// over integer matrices with entries bounded by the largest coordinate of the
/// ray generators.
pub fn torus_form_candidates(omega: &Cone, order: u32) -> Result<Vec<LatticeMorphism>, GaloisError> {
    if omega.rank() != 2 {
        return Err(GaloisError::RankTooHigh(omega.rank()));
    }
    if !omega.is_pointed() {
        return Err(GaloisError::NotPointed);
    }
    if !(1..=2).contains(&order) {
        return Err(GaloisError::UnsupportedOrder(order));
    }
    let candidates: Vec<LatticeMorphism> = if omega.dim() == 2 {
        let r = omega.rays();
        let (a, b) = (&r[0], &r[1]);
        let mut out = Vec::new();
        for (x, y) in [(a, b), (b, a)] {
            // F a = x, F b = y  ⇒  F = [x y]·[a b]⁻¹
            let det = a[0] * b[1] - a[1] * b[0];
            let num = [
                [x[0] * b[1] - y[0] * a[1], -x[0] * b[0] + y[0] * a[0]],
                [x[1] * b[1] - y[1] * a[1], -x[1] * b[0] + y[1] * a[0]],
            ];
            if num.iter().flatten().all(|v| v % det == 0) {
                let rows = vec![
                    vec![num[0][0] / det, num[0][1] / det],
                    vec![num[1][0] / det, num[1][1] / det],
                ];
                out.push(LatticeMorphism::from_rows(&rows, 2)?);
            }
        }
        out
    } else {
        let bound = omega
            .rays()
            .iter()
            .flat_map(|r| r.entries().iter().map(|x| x.abs()))
            .max()
            .unwrap_or(1)
            .max(1);
        let range: Vec<i64> = (-bound..=bound).collect();
        let mut out = Vec::new();
        for &p in &range {
            for &q in &range {
                for &r in &range {
                    for &s in &range {
                        if (p * s - q * r).abs() == 1 {
                            out.push(LatticeMorphism::from_rows(&[vec![p, q], vec![r, s]], 2)?);
                        }
                    }
                }
            }
        }
        out
    };
    let mut result: Vec<LatticeMorphism> = Vec::new();
    for f in candidates {
        if f.inverse().is_err() || omega.image(&f)? != *omega {
            continue;
        }
        let mut power = LatticeMorphism::identity(2);
        for _ in 0..order {
            power = power.compose(&f)?;
        }
        if power.is_identity() && !result.contains(&f) {
            result.push(f);
        }
    }
    result.sort_by_key(|f| (!f.is_identity(), f.rows()));
    Ok(result)
}
