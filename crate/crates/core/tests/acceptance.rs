//! One line per acceptance criterion. Criteria 5 and 7 are known to be
//! blocked; the target fails if that set changes in either direction.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use ppdiv_core::algebra::{hilbert_table, SectionAlgebra};
use ppdiv_core::base::{PrimeDivisor, SectionDim};
use ppdiv_core::convex::{Cone, TailedPolyhedron};
use ppdiv_core::downgrade::downgrade;
use ppdiv_core::galois::{
    descent_dimensions, gillard_cocycle, is_galois_action, is_semilinear_automorphism, torus_form_candidates,
};
use ppdiv_core::lattice::LatticeMorphism;
use ppdiv_core::ppdiv::base_change;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const BLOCKED: [u32; 2] = [5, 7];

type Outcome = Result<String, String>;

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{detail}, but took {took:?} (limit {limit:?})"));
    }
    Ok(format!("{detail} in {took:?}"))
}

fn criterion_1() -> Outcome {
    let d = load_ppdiv("a3.ppdiv");
    timed(Duration::from_secs(1), || {
        let table = hilbert_table(&d, &[(0, 10), (0, 10)]).map_err(|e| e.to_string())?;
        for a in 0..=10 {
            for b in 0..=10 {
                let got = table.get(&lv(&[a, b]));
                let oracle = a3_monomials(a, b);
                if got != Some(SectionDim::Finite(oracle)) || oracle as i64 != a.min(b) + 1 {
                    return Err(format!("m = ({a}, {b}): table {got:?}, monomials {oracle}"));
                }
            }
        }
        Ok("A3 table equals min(a,b)+1 and the monomial count on 0..10".into())
    })
}

fn sl2_generator(a: i64, b: i64) -> Sl2Poly {
    let deg = (a.abs() + b.abs()) as u32;
    let e = sl2_monomials(a, b, deg)
        .into_iter()
        .min_by_key(|e| e.iter().sum::<u32>())
        .unwrap();
    Sl2Poly::monomial(e)
}

fn criterion_2() -> Outcome {
    let d = load_ppdiv("sl2.ppdiv");
    let alg = SectionAlgebra::new(d.clone()).map_err(|e| e.to_string())?;
    let zero = PrimeDivisor::at_int(0);
    let minus_one = PrimeDivisor::at_int(-1);
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            let m = lv(&[a, b]);
            let bound = (a.abs() + b.abs()) as u32;
            let grows = sl2_monomials(a, b, bound + 2).len() > sl2_monomials(a, b, bound).len();
            let dim = alg.dim(&m).map_err(|e| e.to_string())?;
            if dim != SectionDim::Infinite || !grows {
                return Err(format!("m = {m}: library {dim:?}, ring piece grows = {grows}"));
            }
            let product = sl2_generator(a, b).mul(&sl2_generator(-a, -b));
            let poly = product.in_s().ok_or(format!("A_m A_-m at {m} is not in k[s]"))?;
            let (deg, at0, at1) = (
                poly.len() - 1,
                root_multiplicity(&poly, 0),
                root_multiplicity(&poly, -1),
            );
            let colength = alg.product_colength(&m).map_err(|e| e.to_string())?;
            let floors = d.evaluate(&m).unwrap().floor().add(&d.evaluate(&-&m).unwrap().floor());
            let ok = colength == Some(q(deg as i64, 1))
                && floors.coeff(&zero) == q(-(at0 as i64), 1)
                && floors.coeff(&minus_one) == q(-(at1 as i64), 1)
                && deg as i64 == a.abs() + b.abs();
            if !ok {
                return Err(format!(
                    "m = {m}: colength {colength:?}, ring product {poly:?}, floors {floors}"
                ));
            }
        }
    }
    Ok("SL2 pieces are infinite and A_m A_-m matches the ring oracle for |a|,|b| <= 3".into())
}

fn criterion_3() -> Outcome {
    let d = load_ppdiv("x3y4zw.ppdiv");
    timed(Duration::from_secs(5), || {
        let table = hilbert_table(&d, &[(0, 24), (-2, 2)]).map_err(|e| e.to_string())?;
        for a in 0..=24 {
            for b in -2..=2 {
                let got = table.get(&lv(&[a, b]));
                let oracle = x3y4zw_monomials(a, b);
                let ok = match got {
                    Some(SectionDim::Finite(n)) => n == oracle,
                    None => oracle == 0 && !d.weight_cone().contains(&lv(&[a, b])),
                    Some(SectionDim::Infinite) => false,
                };
                if !ok {
                    return Err(format!("m = ({a}, {b}): table {got:?}, quotient ring {oracle}"));
                }
            }
        }
        Ok("x3+y4+zw table equals the quotient-ring count on 0..24 x -2..2".into())
    })
}

fn criterion_4() -> Outcome {
    let input = load("blowup.dginput").into_downgrade_input().unwrap().input;
    let out = downgrade(&input).map_err(|e| e.to_string())?;
    let expected = [
        (lv(&[1, 0]), vec![vec![q(1, 1)]]),
        (lv(&[0, 1]), vec![vec![q(0, 1)]]),
        (lv(&[1, 1]), vec![vec![q(0, 1)], vec![q(1, 1)]]),
    ];
    if out.fan.rays.len() != 3 {
        return Err(format!("fan rays {:?}", out.fan.rays));
    }
    for (ray, verts) in &expected {
        let i = out
            .fan
            .rays
            .iter()
            .position(|r| r == ray)
            .ok_or(format!("ray {ray} missing"))?;
        let coeff = out.ppdiv.coefficient(&out.ray_divisors[i]);
        let want = TailedPolyhedron::new(1, verts, &Cone::zero(1)).unwrap();
        if coeff.as_polyhedron() != Some(&want) {
            return Err(format!("coefficient at {ray} is {coeff}, expected {want}"));
        }
    }
    let mut tables = Vec::new();
    for s in [[1, 0, 0], [0, 1, 0], [0, 0, -1]] {
        let mut alt = input.clone();
        alt.section = Some(LatticeMorphism::from_rows(&[s.to_vec()], 3).unwrap());
        let o = downgrade(&alt).map_err(|e| e.to_string())?;
        let mut table = Vec::new();
        for x in -1..=4 {
            for y in -1..=4 {
                for z in -1..=4 {
                    let e = lv(&[x, y, z]);
                    let dim = o.character_dim(&e).map_err(|e| e.to_string())?;
                    let oracle = u8::from(x >= 0 && y >= 0 && z >= 0);
                    if dim != oracle {
                        return Err(format!(
                            "section {s:?}: character {e} has dim {dim}, monomial count {oracle}"
                        ));
                    }
                    table.push(dim);
                }
            }
        }
        tables.push(table);
    }
    if tables.windows(2).any(|w| w[0] != w[1]) {
        return Err("character tables differ between sections".into());
    }
    Ok("blow-up coefficients are exact and three sections give the orthant character table".into())
}

fn criterion_5() -> Outcome {
    let a3 = base_change(&load_ppdiv("a3.ppdiv"), -1).map_err(|e| e.to_string())?;
    let action = load("swap-moebius.action").into_action().unwrap().action;
    let auto = is_semilinear_automorphism(&action.generator, &a3).map_err(|e| e.to_string())?;
    let report = is_galois_action(&action, &a3).map_err(|e| e.to_string())?;
    let gillard = gillard_cocycle(&action, &a3).map_err(|e| e.to_string())?;
    if auto.holds() && report.holds() && gillard.identity_failures.is_empty() {
        Ok("swap [v:w] -> [conj w : conj v] is a Galois action on A3".into())
    } else {
        let first = auto.failures.first().map(ToString::to_string).unwrap_or_default();
        Err(format!(
            "swap [v:w] -> [conj w : conj v] fails: {} equality failures (first: {first}), Gillard (a) fails at {} weights",
            auto.failures.len(),
            gillard.identity_failures.len()
        ))
    }
}

fn criterion_6() -> Outcome {
    let a3 = base_change(&load_ppdiv("a3.ppdiv"), -1).map_err(|e| e.to_string())?;
    let action = load("swap.action").into_action().unwrap().action;
    let cells = descent_dimensions(&action, &a3, &[(0, 6), (0, 6)]).map_err(|e| e.to_string())?;
    for c in &cells {
        let oracle: usize = c.orbit.iter().map(|m| a3_monomials(m[0], m[1])).sum();
        if c.dim_l != oracle || c.dim_q_fixed != c.dim_l {
            return Err(format!("{c}: monomial count {oracle}"));
        }
    }
    let find = |o: [[i64; 2]; 2]| {
        cells
            .iter()
            .find(|c| c.orbit.len() == 2 && o.iter().all(|m| c.orbit.contains(&lv(m))))
            .map(|c| c.dim_l)
    };
    if find([[1, 0], [0, 1]]) != Some(2) || find([[1, 2], [2, 1]]) != Some(4) {
        return Err("orbit dimensions differ from the monomial counts 2 and 4".into());
    }
    Ok(format!(
        "dim_Q V^G = dim_L V on all {} orbit cells of 0..6",
        cells.len()
    ))
}

fn criterion_7() -> Outcome {
    let id = LatticeMorphism::identity(2);
    let swap = LatticeMorphism::from_rows(&[vec![0, 1], vec![1, 0]], 2).unwrap();
    let orthant = torus_form_candidates(&Cone::orthant(2), 2).map_err(|e| e.to_string())?;
    if orthant != vec![id.clone(), swap] {
        return Err(format!("orthant candidates {orthant:?}"));
    }
    let omega = Cone::new(2, &[lv(&[1, 0]), lv(&[1, 12])]).unwrap();
    let found = torus_form_candidates(&omega, 2).map_err(|e| e.to_string())?;
    if found != vec![id] {
        let shown: Vec<String> = found.iter().map(|f| format!("{:?}", f.rows())).collect();
        return Err(format!(
            "orthant gives [id, swap], but cone((1,0),(1,12)) gives {}",
            shown.join(", ")
        ));
    }
    Ok("torus form candidates are [id] and [id, swap]".into())
}

fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, |v| check(v).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())
}

fn criterion_8() -> Outcome {
    timed(Duration::from_secs(30), || {
        run(200, polyhedron(), |p| check_round_trip(&p))?;
        run(200, polyhedron_pair(), |(a, b)| check_evaluation_equality(&a, &b))?;
        run(200, polyhedron(), |p| check_integrality(&p))?;
        let weights = (polyhedron(), any::<prop::sample::Index>(), any::<prop::sample::Index>());
        run(200, weights, |(p, i, j)| {
            let w = dual_box(p.tail(), 4);
            check_concavity(&p, i.get(&w), j.get(&w))
        })?;
        run(200, polyhedron_pair(), |(a, b)| check_minkowski(&a, &b))?;
        run(200, any_cone(), |c| check_dual_dual(&c))?;
        Ok("six convex properties hold on 200 cases each".into())
    })
}

fn criterion_9() -> Outcome {
    run(100, (ppdivisor(), triple(), triple()), |(d, t1, t2)| {
        check_closure(&d, &t1, &t2)
    })?;
    run(100, (triple(), triple(), triple()), |(a, b, c)| {
        check_associativity(&a, &b, &c)
    })?;
    run(100, (ppdivisor(), triple()), |(d, t)| check_identity_laws(&d, &t))?;
    run(100, (plurifunction(), pointed_cone()), |(f, c)| {
        check_pluri_inverse(&f, &c)
    })?;
    Ok("closure, associativity, identities and the inverse law hold on 100 cases each".into())
}

fn criterion_10() -> Outcome {
    let radicands = prop::sample::select(vec![-1i64, 2, 3, -3, 5]);
    run(50, (ppdivisor(), radicands), |(d, r)| check_base_change(&d, r))?;
    Ok("evaluation degrees survive Q -> Q(sqrt d) on 50 cases".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = BTreeSet::new();
    for (n, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {n}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {n}: {detail}");
                failed.insert(n);
            }
        }
    }
    let blocked: BTreeSet<u32> = BLOCKED.into_iter().collect();
    if failed != blocked {
        eprintln!("failing criteria {failed:?} differ from the known blocked set {blocked:?}");
        std::process::exit(1);
    }
    println!(
        "{} of 10 criteria pass; {blocked:?} blocked as recorded",
        10 - blocked.len()
    );
}
