//! Double description: generators of `{x : a·x ≥ 0 for a ∈ ineqs, e·x = 0 for e ∈ eqs}`.
//!
//! Integer arithmetic in `i128`, every vector kept primitive. Overflow panics;
//! at the supported ranks and coordinate sizes it does not occur.

use num_integer::Integer;

pub(crate) type IVec = Vec<i128>;

#[derive(Debug, Clone)]
pub(crate) struct Generators {
    pub lineality: Vec<IVec>,
    pub rays: Vec<IVec>,
}

fn mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in cone arithmetic")
}

pub(crate) fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).fold(0i128, |s, (x, y)| {
        s.checked_add(mul(*x, *y)).expect("integer overflow in cone arithmetic")
    })
}

pub(crate) fn primitive(mut v: IVec) -> IVec {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
    v
}

/// `a·x − b·y`, made primitive.
fn combine(a: i128, x: &[i128], b: i128, y: &[i128]) -> IVec {
    primitive(
        x.iter()
            .zip(y)
            .map(|(p, q)| {
                mul(a, *p)
                    .checked_sub(mul(b, *q))
                    .expect("integer overflow in cone arithmetic")
            })
            .collect(),
    )
}

pub(crate) fn generators(dim: usize, ineqs: &[IVec], eqs: &[IVec]) -> Generators {
    let mut lineality: Vec<IVec> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    let mut rays: Vec<IVec> = Vec::new();
    let mut processed: Vec<IVec> = Vec::new();

    let constraints = eqs
        .iter()
        .flat_map(|e| [e.clone(), e.iter().map(|x| -x).collect()])
        .chain(ineqs.iter().cloned());

    for a in constraints {
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        if let Some(k) = lineality.iter().position(|l| dot(&a, l) != 0) {
            let mut l0 = lineality.swap_remove(k);
            if dot(&a, &l0) < 0 {
                l0 = l0.iter().map(|x| -x).collect();
            }
            let al0 = dot(&a, &l0);
            for l in lineality.iter_mut() {
                let al = dot(&a, l);
                if al != 0 {
                    *l = combine(al0, l, al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(&a, r);
                if ar != 0 {
                    *r = combine(al0, r, ar, &l0);
                }
            }
            rays.push(primitive(l0));
            processed.push(a);
            continue;
        }

        let vals: Vec<i128> = rays.iter().map(|r| dot(&a, r)).collect();
        if vals.iter().all(|&v| v >= 0) {
            processed.push(a);
            continue;
        }
        let zero_sets: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| processed.iter().map(|p| dot(p, r) == 0).collect())
            .collect();
        let mut next: Vec<IVec> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i] >= 0 {
                next.push(r.clone());
            }
        }
        for (i, p) in rays.iter().enumerate() {
            if vals[i] <= 0 {
                continue;
            }
            for (j, q) in rays.iter().enumerate() {
                if vals[j] >= 0 {
                    continue;
                }
                let common: Vec<bool> = zero_sets[i].iter().zip(&zero_sets[j]).map(|(x, y)| *x && *y).collect();
                let adjacent = !(0..rays.len())
                    .any(|k| k != i && k != j && common.iter().zip(&zero_sets[k]).all(|(c, z)| !*c || *z));
                if adjacent {
                    // vals[i] > 0 > vals[j]: vals[i]·q − vals[j]·p lies on a⊥
                    next.push(combine(vals[i], q, vals[j], p));
                }
            }
        }
        rays = next;
        processed.push(a);
    }
    Generators { lineality, rays }
}
