//! Dense linear algebra over Q for the small matrices that appear in cone and
//! descent computations.

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// A solution of `a · x = b`, if one exists.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
pub fn project_out(v: &[Rational], basis: &[Vec<Rational>]) -> Vec<Rational> {
    if basis.is_empty() {
        return v.to_vec();
    }
    // v − Bᵀ c with (B Bᵀ) c = B v
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|bi| basis.iter().map(|bj| dot(bi, bj)).collect())
        .collect();
    let rhs: Vec<Rational> = basis.iter().map(|bi| dot(bi, v)).collect();
    let c = solve(&gram, &rhs).expect("basis vectors are independent");
    let mut out = v.to_vec();
    for (ci, bi) in c.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(bi) {
            *o = &*o - &(ci * x);
        }
    }
    out
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn is_nonnegative(v: &[Rational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
