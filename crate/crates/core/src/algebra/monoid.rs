use num_integer::Integer;

use crate::lattice::LatticeVector;

fn det(a: &LatticeVector, b: &LatticeVector) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// `x` with `det(p, x) = 1`, for primitive `p`.
fn det_one_partner(p: &LatticeVector) -> LatticeVector {
    // p0·x1 − p1·x0 = 1
    let e = Integer::extended_gcd(&p[0], &(-p[1]));
    debug_assert_eq!(e.gcd.abs(), 1);
    let s = e.gcd.signum();
    LatticeVector(vec![e.y * s, e.x * s])
}

/// A lattice point `u` with `⟨u, n⟩ = 1`, for primitive `n`.
pub(crate) fn height_one(n: &LatticeVector) -> LatticeVector {
    let e = Integer::extended_gcd(&n[0], &n[1]);
    let s = e.gcd.signum();
    LatticeVector(vec![e.x * s, e.y * s])
}

/// Hilbert basis of the pointed cone spanned by two independent primitive
/// vectors, ordered from one ray to the other.
///
/// Walks the boundary of the convex hull of the nonzero lattice points: from
/// `p` the next point is the one with `det(p, x) = 1` inside the cone that lies
/// closest to the far ray.
pub fn hilbert_basis_2d(a: &LatticeVector, b: &LatticeVector) -> Vec<LatticeVector> {
    let (r1, r2) = if det(a, b) > 0 { (a, b) } else { (b, a) };
    assert!(det(r1, r2) != 0, "rays must be independent");
    let mut out = vec![r1.clone()];
    let mut p = r1.clone();
    while det(&p, r2) != 0 {
        let x0 = det_one_partner(&p);
        let d = det(&p, r2);
        let k = Integer::div_ceil(&(-det(&x0, r2)), &d);
        p = &x0 + &p.scale(k);
        out.push(p.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(v: &[i64]) -> LatticeVector {
        LatticeVector(v.to_vec())
    }

    #[test]
    fn known_bases() {
        assert_eq!(
            hilbert_basis_2d(&lv(&[1, 0]), &lv(&[0, 1])),
            vec![lv(&[1, 0]), lv(&[0, 1])]
        );
        assert_eq!(
            hilbert_basis_2d(&lv(&[0, 1]), &lv(&[12, -1])),
            vec![lv(&[12, -1]), lv(&[1, 0]), lv(&[0, 1])]
        );
        // cone((0,1),(2,-1)) ... the A_1 singularity cone((1,0),(1,2))
        assert_eq!(
            hilbert_basis_2d(&lv(&[1, 0]), &lv(&[1, 2])),
            vec![lv(&[1, 0]), lv(&[1, 1]), lv(&[1, 2])]
        );
    }

    #[test]
    fn height_one_vectors() {
        for n in [lv(&[3, 5]), lv(&[-2, 7]), lv(&[0, -1])] {
            assert_eq!(height_one(&n).dot(&n), 1);
        }
    }
}
