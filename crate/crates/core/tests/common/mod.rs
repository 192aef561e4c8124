//! Strategies, oracles and property checks shared by the property suites and
//! the acceptance target. Oracles here avoid the library's own algorithms.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use ppdiv_core::base::{divisor_of, BaseVariety, PrimeDivisor, QDivisor, RationalFunction, SemilinearBaseMap, Twist};
use ppdiv_core::convex::{polyhedron_from_support, Coefficient, Cone, Support, TailedPolyhedron};
use ppdiv_core::doc::Document;
use ppdiv_core::exactnum::{Field, Poly, QuadElement, Rational};
use ppdiv_core::lattice::{LatticeMorphism, LatticeVector};
use ppdiv_core::ppdiv::{
    base_change, compare_triple, compose, is_morphism, pluri_divisor, pullback, pushforward, DivisorSum, PPDivMorphism,
    Plurifunction, PolyhedralDivisor, TripleRelation,
};

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../golden")
        .join(name)
}

pub fn load(name: &str) -> Document {
    let text = std::fs::read_to_string(golden(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    Document::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load_ppdiv(name: &str) -> PolyhedralDivisor {
    load(name).into_ppdivisor().unwrap().divisor
}

pub fn lv(v: &[i64]) -> LatticeVector {
    LatticeVector(v.to_vec())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---- strategies ----------------------------------------------------------

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn point2() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), 2)
}

pub fn nonzero_vector() -> impl Strategy<Value = LatticeVector> {
    (-3i64..=3, -3i64..=3)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| lv(&[a, b]))
}

/// Pointed cones in rank 2 of every dimension.
pub fn pointed_cone() -> impl Strategy<Value = Cone> {
    prop_oneof![
        Just(Cone::zero(2)),
        nonzero_vector().prop_map(|v| Cone::new(2, &[v]).unwrap()),
        (nonzero_vector(), nonzero_vector())
            .prop_filter("independent", |(u, v)| u[0] * v[1] - u[1] * v[0] != 0)
            .prop_map(|(u, v)| Cone::new(2, &[u, v]).unwrap()),
    ]
}

/// Arbitrary cones in rank 2, lineality allowed.
pub fn any_cone() -> impl Strategy<Value = Cone> {
    prop::collection::vec(nonzero_vector(), 0..4).prop_map(|g| Cone::new(2, &g).unwrap())
}

pub fn polyhedron_with_tail(tail: Cone) -> impl Strategy<Value = TailedPolyhedron> {
    prop::collection::vec(point2(), 1..5).prop_map(move |pts| TailedPolyhedron::new(2, &pts, &tail).unwrap())
}

pub fn polyhedron() -> impl Strategy<Value = TailedPolyhedron> {
    pointed_cone().prop_flat_map(polyhedron_with_tail)
}

pub fn polyhedron_pair() -> impl Strategy<Value = (TailedPolyhedron, TailedPolyhedron)> {
    pointed_cone().prop_flat_map(|t| (polyhedron_with_tail(t.clone()), polyhedron_with_tail(t)))
}

/// Points of P¹ over Q of degree at most 2.
pub fn rational_point() -> impl Strategy<Value = PrimeDivisor> {
    prop_oneof![
        Just(PrimeDivisor::Infinity),
        (-3i64..=3).prop_map(PrimeDivisor::at_int),
        prop::sample::select(vec![[-2i64, 0], [-3, 0], [1, 0], [1, 1], [-5, 0], [3, 0], [2, 2]])
            .prop_map(|[c0, c1]| PrimeDivisor::Point(Poly::from_ints(&[c0, c1, 1]))),
    ]
}

/// Polyhedral divisors of rank 2 on P¹ over Q.
pub fn ppdivisor() -> impl Strategy<Value = PolyhedralDivisor> {
    pointed_cone().prop_flat_map(|tail| {
        prop::collection::btree_map(rational_point(), polyhedron_with_tail(tail.clone()), 0..4).prop_map(
            move |entries| {
                let e = entries
                    .into_iter()
                    .map(|(p, c)| (p, Coefficient::Polyhedron(c)))
                    .collect();
                PolyhedralDivisor::new(2, tail.clone(), BaseVariety::ProjLine(Field::Rationals), e).unwrap()
            },
        )
    })
}

pub fn nonsingular_matrix() -> impl Strategy<Value = LatticeMorphism> {
    prop::array::uniform4(-2i64..=2)
        .prop_filter("nonsingular", |m| m[0] * m[3] - m[1] * m[2] != 0)
        .prop_map(|m| LatticeMorphism::from_rows(&[vec![m[0], m[1]], vec![m[2], m[3]]], 2).unwrap())
}

pub fn moebius() -> impl Strategy<Value = SemilinearBaseMap> {
    prop::array::uniform4(-2i64..=2)
        .prop_filter("invertible", |m| m[0] * m[3] - m[1] * m[2] != 0)
        .prop_map(|m| {
            let e = QuadElement::from_int;
            SemilinearBaseMap::new(
                [[e(m[0]), e(m[1])], [e(m[2]), e(m[3])]],
                Twist::Identity,
                Field::Rationals,
            )
            .unwrap()
        })
}

pub fn rational_function() -> impl Strategy<Value = RationalFunction> {
    (
        prop::sample::select(vec![1i64, -1, 2, 3]),
        prop::collection::vec((-2i64..=2, -2i64..=2), 0..3),
    )
        .prop_map(|(c, fs)| {
            RationalFunction::from_factors(
                QuadElement::from_int(c),
                fs.into_iter()
                    .map(|(a, e)| (Poly::linear(&QuadElement::from_int(a)), e)),
            )
        })
}

pub fn plurifunction() -> impl Strategy<Value = Plurifunction> {
    prop::collection::vec((nonzero_vector(), rational_function()), 0..3)
        .prop_map(|terms| Plurifunction::new(2, terms).unwrap())
}

/// `(ψ, F, 𝔣)` with nonsingular `F`.
pub fn triple() -> impl Strategy<Value = PPDivMorphism> {
    (moebius(), nonsingular_matrix(), plurifunction()).prop_map(|(psi, f, p)| PPDivMorphism::new(psi, f, p).unwrap())
}

// ---- morphism targets ----------------------------------------------------

fn inverse_map(psi: &SemilinearBaseMap) -> SemilinearBaseMap {
    let m = &psi.matrix;
    let neg = |x: &QuadElement| -x;
    SemilinearBaseMap::new(
        [[m[1][1].clone(), neg(&m[0][1])], [neg(&m[1][0]), m[0][0].clone()]],
        psi.twist,
        psi.field,
    )
    .unwrap()
}

/// `ord_P(𝔣)` as a vector of N: `Σ ord_P(fᵢ) vᵢ`, computed term by term.
fn pluri_orders(f: &Plurifunction, base: &BaseVariety) -> BTreeMap<PrimeDivisor, Vec<Rational>> {
    let mut out: BTreeMap<PrimeDivisor, Vec<Rational>> = BTreeMap::new();
    for (v, g) in f.terms() {
        for (p, c) in divisor_of(g, base).unwrap().entries() {
            let w = out.entry(p.clone()).or_insert_with(|| vec![Rational::zero(); v.rank()]);
            for (wi, vi) in w.iter_mut().zip(v.entries()) {
                *wi += c * Rational::from_integer(BigInt::from(*vi));
            }
        }
    }
    out
}

/// The divisor `(ψ⁻¹)*(F_*𝔇 + div 𝔣)`, so that `t` is a morphism into it
/// with equality.
pub fn target_of(t: &PPDivMorphism, d: &PolyhedralDivisor) -> PolyhedralDivisor {
    let tail = d.tail().image(&t.lattice_map).unwrap();
    let pushed = pushforward(&t.lattice_map, d, &tail).unwrap();
    let orders = pluri_orders(&t.pluri, d.base());
    let mut entries: BTreeMap<PrimeDivisor, TailedPolyhedron> = pushed
        .entries()
        .iter()
        .map(|(p, c)| (p.clone(), c.as_polyhedron().unwrap().clone()))
        .collect();
    for (p, w) in orders {
        let base = entries
            .remove(&p)
            .unwrap_or_else(|| TailedPolyhedron::new(2, &[vec![Rational::zero(); 2]], &tail).unwrap());
        entries.insert(p, base.translate(&w).unwrap());
    }
    let e = entries
        .into_iter()
        .map(|(p, c)| (p, Coefficient::Polyhedron(c)))
        .collect();
    let shifted = PolyhedralDivisor::new(2, tail, d.base().clone(), e).unwrap();
    pullback(&inverse_map(&t.psi), &shifted).unwrap()
}

// ---- convex properties ---------------------------------------------------

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(s: Support) -> Rational {
    match s {
        Support::Finite(x) => x,
        other => panic!("expected a finite support value, got {other}"),
    }
}

/// Lattice points of `tail∨` with coordinates in `[-n, n]`.
pub fn dual_box(tail: &Cone, n: i64) -> Vec<LatticeVector> {
    let dual = tail.dual();
    let mut out = Vec::new();
    for a in -n..=n {
        for b in -n..=n {
            let m = lv(&[a, b]);
            if dual.contains(&m) {
                out.push(m);
            }
        }
    }
    out
}

/// Reconstruction of Δ from its support function on the normal quasifan.
pub fn check_round_trip(p: &TailedPolyhedron) -> Check {
    let samples: BTreeMap<LatticeVector, Rational> = p
        .normal_quasifan()
        .samples()
        .into_iter()
        .map(|m| {
            let h = finite(p.support(&m));
            (m, h)
        })
        .collect();
    let back = polyhedron_from_support(p.tail(), &samples).map_err(|e| format!("{p}: {e}"))?;
    ensure(&back == p, || format!("{p} reconstructed as {back}"))
}

/// Equality of polyhedra is equality of support functions, and the samples
/// of the common refinement of the normal quasifans detect it.
pub fn check_evaluation_equality(a: &TailedPolyhedron, b: &TailedPolyhedron) -> Check {
    let fan = a.normal_quasifan().common_refinement(&b.normal_quasifan()).unwrap();
    let agree_samples = fan.samples().iter().all(|m| a.support(m) == b.support(m));
    let agree_box = dual_box(a.tail(), 8).iter().all(|m| a.support(m) == b.support(m));
    ensure(agree_samples == (a == b), || {
        format!("{a} vs {b}: samples agree = {agree_samples}")
    })?;
    ensure(!agree_samples || agree_box, || {
        format!("{a} vs {b}: samples agree but a box point differs")
    })
}

/// Δ has integral vertices iff `h_Δ` is integral on the lattice points of `tail∨`.
pub fn check_integrality(p: &TailedPolyhedron) -> Check {
    let integral_support = dual_box(p.tail(), 20).iter().all(|m| finite(p.support(m)).is_integer());
    ensure(integral_support == p.is_integral(), || {
        format!(
            "{p}: is_integral = {}, integral support = {integral_support}",
            p.is_integral()
        )
    })
}

/// `h(m + m') ≥ h(m) + h(m')`, strictly iff no maximal cone of the normal
/// quasifan contains both.
pub fn check_concavity(p: &TailedPolyhedron, m: &LatticeVector, n: &LatticeVector) -> Check {
    let (hm, hn, hs) = (finite(p.support(m)), finite(p.support(n)), finite(p.support(&(m + n))));
    ensure(hs >= &hm + &hn, || format!("{p}: h({m}+{n}) < h({m}) + h({n})"))?;
    let common = p
        .normal_quasifan()
        .maximal_cones()
        .iter()
        .any(|c| c.contains(m) && c.contains(n));
    let strict = hs > &hm + &hn;
    ensure(strict == !common, || {
        format!("{p}: strict = {strict} at {m}, {n} but common maximal cone = {common}")
    })
}

pub fn check_minkowski(a: &TailedPolyhedron, b: &TailedPolyhedron) -> Check {
    let s = a.minkowski_sum(b).map_err(|e| e.to_string())?;
    for m in dual_box(a.tail(), 6) {
        let lhs = finite(s.support(&m));
        let rhs = finite(a.support(&m)) + finite(b.support(&m));
        ensure(lhs == rhs, || format!("h_(A+B)({m}) != h_A + h_B for {a}, {b}"))?;
    }
    Ok(())
}

pub fn check_dual_dual(c: &Cone) -> Check {
    let dd = c.dual().dual();
    ensure(&dd == c, || format!("{c}: double dual is {dd}"))
}

// ---- polyhedral divisor properties ----------------------------------------

/// `𝔇(m + m') ≥ 𝔇(m) + 𝔇(m')` coefficientwise on the weight cone.
pub fn check_evaluation_concavity(d: &PolyhedralDivisor, m: &LatticeVector, n: &LatticeVector) -> Check {
    let s = d.evaluate(&(m + n)).unwrap();
    let sum = d.evaluate(m).unwrap().add(&d.evaluate(n).unwrap());
    ensure(sum.leq(&s), || {
        format!("D({m}) + D({n}) = {sum} exceeds D({m}+{n}) = {s}")
    })
}

/// Each coefficient is recovered from the evaluations at its normal samples.
pub fn check_reconstruction(d: &PolyhedralDivisor) -> Check {
    for (p, c) in d.entries() {
        let poly = c.as_polyhedron().unwrap();
        let samples: BTreeMap<LatticeVector, Rational> = poly
            .normal_quasifan()
            .samples()
            .into_iter()
            .map(|m| {
                let v = d.evaluate(&m).unwrap().coeff(p);
                (m, v)
            })
            .collect();
        let back = polyhedron_from_support(d.tail(), &samples).map_err(|e| e.to_string())?;
        ensure(&back == poly, || {
            format!("coefficient at {p}: {poly} recovered as {back}")
        })?;
    }
    Ok(())
}

/// `(G F)_* = G_* F_*`.
pub fn check_pushforward_functorial(d: &PolyhedralDivisor, f: &LatticeMorphism, g: &LatticeMorphism) -> Check {
    let t1 = d.tail().image(f).unwrap();
    let t2 = t1.image(g).unwrap();
    let gf = g.compose(f).unwrap();
    let twice = pushforward(g, &pushforward(f, d, &t1).unwrap(), &t2).unwrap();
    let once = pushforward(&gf, d, &t2).unwrap();
    ensure(twice == once, || format!("G_*F_* D = {twice} but (GF)_* D = {once}"))
}

// ---- morphism algebra ----------------------------------------------------

pub fn check_target_is_morphism(t: &PPDivMorphism, d: &PolyhedralDivisor) -> Check {
    let target = target_of(t, d);
    let leq = is_morphism(t, d, &target).map_err(|e| e.to_string())?;
    let eq = compare_triple(t, d, &target, TripleRelation::Eq).map_err(|e| e.to_string())?;
    ensure(leq.holds() && eq.holds(), || {
        let f: Vec<String> = eq.failures.iter().map(ToString::to_string).collect();
        format!("{t} is not a morphism into its target: {}", f.join("; "))
    })
}

pub fn check_closure(d: &PolyhedralDivisor, t1: &PPDivMorphism, t2: &PPDivMorphism) -> Check {
    let d1 = target_of(t1, d);
    let d2 = target_of(t2, &d1);
    let c = compose(t2, t1).map_err(|e| e.to_string())?;
    let r = is_morphism(&c, d, &d2).map_err(|e| e.to_string())?;
    ensure(r.holds(), || {
        let f: Vec<String> = r.failures.iter().map(ToString::to_string).collect();
        format!("composite {c} fails: {}", f.join("; "))
    })
}

pub fn check_associativity(t1: &PPDivMorphism, t2: &PPDivMorphism, t3: &PPDivMorphism) -> Check {
    let left = compose(t3, &compose(t2, t1).unwrap()).unwrap();
    let right = compose(&compose(t3, t2).unwrap(), t1).unwrap();
    ensure(left.equals(&right), || format!("{left} != {right}"))
}

pub fn check_identity_laws(d: &PolyhedralDivisor, t: &PPDivMorphism) -> Check {
    let target = target_of(t, d);
    let left = compose(&PPDivMorphism::identity(&target), t).unwrap();
    let right = compose(t, &PPDivMorphism::identity(d)).unwrap();
    ensure(left.equals(t) && right.equals(t), || {
        format!("identity laws fail for {t}")
    })
}

pub fn check_pluri_inverse(f: &Plurifunction, tail: &Cone) -> Check {
    let base = BaseVariety::ProjLine(Field::Rationals);
    let a = pluri_divisor(f, tail, &base).map_err(|e| e.to_string())?;
    let b = pluri_divisor(&f.inv(), tail, &base).map_err(|e| e.to_string())?;
    let sum = a.add(&b).map_err(|e| e.to_string())?;
    ensure(sum.equals(&DivisorSum::zero(tail)).unwrap(), || {
        format!("div({f}) + div({f}⁻¹) is not zero")
    })?;
    for m in dual_box(tail, 3) {
        let ev = sum.eval(&m).map_err(|e| e.to_string())?;
        ensure(ev.is_zero(), || {
            format!("div({f}) + div({f}⁻¹) evaluates to {ev} at {m}")
        })?;
    }
    Ok(())
}

// ---- base change ---------------------------------------------------------

/// Degree of a divisor on P¹ from the polynomial degrees of its points.
pub fn naive_degree(d: &QDivisor) -> Rational {
    d.entries()
        .iter()
        .map(|(p, c)| {
            let deg = match p {
                PrimeDivisor::Point(poly) => poly.coeffs().len() as i64 - 1,
                _ => 1,
            };
            c * Rational::from_integer(BigInt::from(deg))
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Whether the monic integer quadratic `t² + c1 t + c0` splits over Q(√d):
/// its discriminant is `d` times a rational square.
pub fn splits_over(c0: i64, c1: i64, d: i64) -> bool {
    let disc = c1 * c1 - 4 * c0;
    let is_square = |n: i64| n >= 0 && (0..=n).any(|r| r * r == n);
    if is_square(disc) {
        return true;
    }
    // disc = d r²  ⇔  disc·d = (d r)² with disc/d a square
    disc % d == 0 && is_square(disc / d)
}

fn int_coeffs(p: &Poly) -> Vec<i64> {
    p.coeffs()
        .iter()
        .map(|c| {
            assert!(c.b.is_zero() && c.a.is_integer());
            i64::try_from(c.a.to_integer()).unwrap()
        })
        .collect()
}

pub fn check_base_change(d: &PolyhedralDivisor, radicand: i64) -> Check {
    let l = base_change(d, radicand).map_err(|e| e.to_string())?;
    let expected_points: usize = d
        .entries()
        .keys()
        .map(|p| match p {
            PrimeDivisor::Point(poly) if poly.coeffs().len() == 3 => {
                let c = int_coeffs(poly);
                if splits_over(c[0], c[1], radicand) {
                    2
                } else {
                    1
                }
            }
            _ => 1,
        })
        .sum();
    ensure(l.entries().len() == expected_points, || {
        format!(
            "expected {expected_points} points after base change, got {}",
            l.entries().len()
        )
    })?;
    ensure(l.base().field() == Field::Quadratic(radicand), || {
        "base field not extended".into()
    })?;
    let mut weights = dual_box(d.tail(), 4);
    weights.extend(d.weight_cone().generators());
    for m in weights {
        let a = naive_degree(&d.evaluate(&m).unwrap());
        let b = naive_degree(&l.evaluate(&m).unwrap());
        ensure(a == b, || {
            format!("deg D({m}) = {a} over Q but {b} over Q(sqrt {radicand})")
        })?;
    }
    Ok(())
}

// ---- ring oracles --------------------------------------------------------

/// Monomials x^i y^j z^k of A³ with weight (i + k, j + k) = (a, b).
pub fn a3_monomials(a: i64, b: i64) -> usize {
    let mut n = 0;
    for i in 0..=a.max(0) {
        for j in 0..=b.max(0) {
            for k in 0..=a.max(0).min(b.max(0)) {
                if i + k == a && j + k == b {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Normal-form monomials of k[x,y,z,w]/(x³ + y⁴ + zw) (x-exponent at most 2)
/// with weights x = (4,0), y = (3,0), z = (0,1), w = (12,−1).
pub fn x3y4zw_monomials(a: i64, b: i64) -> usize {
    let mut n = 0;
    for i in 0..=2 {
        for l in 0..=a.max(0) / 12 {
            let rest = a - 4 * i - 12 * l;
            if rest < 0 || rest % 3 != 0 {
                continue;
            }
            let k = b + l;
            if k >= 0 {
                n += 1;
            }
        }
    }
    n
}

/// A polynomial in x, y, z, w with integer coefficients, reduced modulo
/// xw − 1 − yz (no monomial divisible by xw).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Poly(pub BTreeMap<[u32; 4], i64>);

impl Sl2Poly {
    pub fn monomial(e: [u32; 4]) -> Self {
        Sl2Poly([(e, 1)].into_iter().collect()).reduce()
    }

    fn add_term(map: &mut BTreeMap<[u32; 4], i64>, e: [u32; 4], c: i64) {
        let v = map.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            map.remove(&e);
        }
    }

    /// Rewrites x w ↦ 1 + y z until no monomial contains both x and w.
    pub fn reduce(self) -> Self {
        let mut todo = self.0;
        let mut done: BTreeMap<[u32; 4], i64> = BTreeMap::new();
        while let Some((e, c)) = todo.pop_first() {
            if e[0] > 0 && e[3] > 0 {
                let base = [e[0] - 1, e[1], e[2], e[3] - 1];
                Self::add_term(&mut todo, base, c);
                Self::add_term(&mut todo, [base[0], base[1] + 1, base[2] + 1, base[3]], c);
            } else {
                Self::add_term(&mut done, e, c);
            }
        }
        Sl2Poly(done)
    }

    pub fn mul(&self, other: &Sl2Poly) -> Sl2Poly {
        let mut out = BTreeMap::new();
        for (e, c) in &self.0 {
            for (f, d) in &other.0 {
                let g = [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]];
                Self::add_term(&mut out, g, c * d);
            }
        }
        Sl2Poly(out).reduce()
    }

    /// Coefficients in s = yz when every monomial is a power of yz.
    pub fn in_s(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        for (e, c) in &self.0 {
            if e[0] != 0 || e[3] != 0 || e[1] != e[2] {
                return None;
            }
            let k = e[1] as usize;
            if out.len() <= k {
                out.resize(k + 1, 0);
            }
            out[k] = *c;
        }
        Some(out)
    }
}

/// Weight of x^i y^j z^k w^l under (λx, μy, μ⁻¹z, λ⁻¹w).
pub fn sl2_weight(e: [u32; 4]) -> (i64, i64) {
    (e[0] as i64 - e[3] as i64, e[1] as i64 - e[2] as i64)
}

/// Normal-form monomials of weight (a, b) and total degree at most `deg`.
pub fn sl2_monomials(a: i64, b: i64, deg: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            for k in 0..=deg - i - j {
                for l in 0..=deg - i - j - k {
                    if (i > 0 && l > 0) || sl2_weight([i, j, k, l]) != (a, b) {
                        continue;
                    }
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Multiplicity of the root `r` of an integer polynomial (ascending coefficients).
pub fn root_multiplicity(p: &[i64], r: i64) -> usize {
    let mut p: Vec<i64> = p.to_vec();
    let mut k = 0;
    loop {
        let v = p.iter().rev().fold(0i64, |acc, c| acc * r + c);
        if v != 0 || p.len() <= 1 {
            return k;
        }
        // synthetic division by (s − r)
        let mut q = vec![0i64; p.len() - 1];
        let mut carry = 0;
        for i in (1..p.len()).rev() {
            carry = p[i] + carry * r;
            q[i - 1] = carry;
        }
        p = q;
        k += 1;
    }
}
