//! Free Z-modules of finite rank: vectors, integer matrices as morphisms,
//! Smith normal form, and split short exact sequences `0 → N′ → N → N″ → 0`.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("lattice map is not injective")]
    NotInjective,
    #[error("cokernel has torsion (elementary divisor {0}); the subtorus is not saturated")]
    TorsionCokernel(i64),
    #[error("invalid split sequence: {0}")]
    InvalidSplit(String),
    #[error("matrix is not invertible over Z")]
    NotUnimodular,
}

/// An element of a lattice `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn new(entries: Vec<i64>) -> Self {
        LatticeVector(entries)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Divides out the gcd of the entries; the zero vector is returned unchanged.
    pub fn primitive(&self) -> LatticeVector {
        let g = self.content();
        if g <= 1 {
            return self.clone();
        }
        LatticeVector(self.0.iter().map(|x| x / g).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVector {
        LatticeVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

impl Index<usize> for LatticeVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(v: Vec<i64>) -> Self {
        LatticeVector(v)
    }
}

impl From<&[i64]> for LatticeVector {
    fn from(v: &[i64]) -> Self {
        LatticeVector(v.to_vec())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

/// The perfect pairing `M × N → Z`.
pub fn dual_pairing(m: &LatticeVector, n: &LatticeVector) -> Result<i64, LatticeError> {
    if m.rank() != n.rank() {
        return Err(LatticeError::RankMismatch {
            expected: m.rank(),
            found: n.rank(),
        });
    }
    Ok(m.dot(n))
}

/// A Z-linear map `Z^cols → Z^rows`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMorphism {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl LatticeMorphism {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LatticeMorphism {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from rows; `source_rank` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], source_rank: usize) -> Result<Self, LatticeError> {
        let mut data = Vec::with_capacity(rows.len() * source_rank);
        for r in rows {
            if r.len() != source_rank {
                return Err(LatticeError::RankMismatch {
                    expected: source_rank,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(LatticeMorphism {
            rows: rows.len(),
            cols: source_rank,
            data,
        })
    }

    /// Builds the map sending the `j`-th basis vector to `images[j]`.
    pub fn from_columns(images: &[LatticeVector], target_rank: usize) -> Self {
        let mut m = Self::zero(target_rank, images.len());
        for (j, v) in images.iter().enumerate() {
            for i in 0..target_rank {
                m.set(i, j, v[i]);
            }
        }
        m
    }

    pub fn target_rank(&self) -> usize {
        self.rows
    }

    pub fn source_rank(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector, LatticeError> {
        if v.rank() != self.cols {
            return Err(LatticeError::RankMismatch {
                expected: self.cols,
                found: v.rank(),
            });
        }
        Ok(LatticeVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
                .collect(),
        ))
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LatticeMorphism) -> Result<Self, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::RankMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// Inverse over Z of a square unimodular matrix.
    pub fn inverse(&self) -> Result<Self, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotUnimodular);
        }
        let snf = smith_normal_form(self);
        if snf.diagonal.len() != self.rows || snf.diagonal.iter().any(|&d| d != 1) {
            return Err(LatticeError::NotUnimodular);
        }
        // U A V = I  ⇒  A⁻¹ = V U
        snf.right.compose(&snf.left)
    }
}

impl fmt::Display for LatticeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", LatticeVector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

/// `left · A · right = diag(diagonal)` with unimodular `left`, `right`;
/// `diagonal` lists the nonzero elementary divisors `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: LatticeMorphism,
    pub right: LatticeMorphism,
    pub diagonal: Vec<i64>,
}

pub fn smith_normal_form(a: &LatticeMorphism) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = LatticeMorphism::identity(m);
    let mut v = LatticeMorphism::identity(n);
    let mut diagonal = Vec::new();

    let swap_rows = |x: &mut LatticeMorphism, i: usize, j: usize| {
        for c in 0..x.cols {
            let t = x.get(i, c);
            x.set(i, c, x.get(j, c));
            x.set(j, c, t);
        }
    };
    let swap_cols = |x: &mut LatticeMorphism, i: usize, j: usize| {
        for r in 0..x.rows {
            let t = x.get(r, i);
            x.set(r, i, x.get(r, j));
            x.set(r, j, t);
        }
    };
    // row_j -= k * row_i
    let row_op = |x: &mut LatticeMorphism, i: usize, j: usize, k: i64| {
        for c in 0..x.cols {
            let val = x.get(j, c) - k * x.get(i, c);
            x.set(j, c, val);
        }
    };
    let col_op = |x: &mut LatticeMorphism, i: usize, j: usize, k: i64| {
        for r in 0..x.rows {
            let val = x.get(r, j) - k * x.get(r, i);
            x.set(r, j, val);
        }
    };

    for t in 0..m.min(n) {
        // pivot: smallest nonzero |entry| in the trailing block
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| d.get(i, j) != 0)
            .min_by_key(|&(i, j)| d.get(i, j).abs());
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut d, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut done = true;
            for i in t + 1..m {
                let q = Integer::div_floor(&d.get(i, t), &d.get(t, t));
                if q != 0 {
                    row_op(&mut d, t, i, q);
                    row_op(&mut u, t, i, q);
                }
                if d.get(i, t) != 0 {
                    swap_rows(&mut d, t, i);
                    swap_rows(&mut u, t, i);
                    done = false;
                }
            }
            for j in t + 1..n {
                let q = Integer::div_floor(&d.get(t, j), &d.get(t, t));
                if q != 0 {
                    col_op(&mut d, t, j, q);
                    col_op(&mut v, t, j, q);
                }
                if d.get(t, j) != 0 {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut v, t, j);
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = d.get(t, t);
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| d.get(i, j) % p != 0);
            match bad {
                Some((i, _)) => {
                    // row_t += row_i
                    row_op(&mut d, i, t, -1);
                    row_op(&mut u, i, t, -1);
                }
                None => break,
            }
        }
        if d.get(t, t) < 0 {
            for c in 0..n {
                let val = -d.get(t, c);
                d.set(t, c, val);
            }
            for c in 0..m {
                let val = -u.get(t, c);
                u.set(t, c, val);
            }
        }
        diagonal.push(d.get(t, t));
    }
    SmithForm {
        left: u,
        right: v,
        diagonal,
    }
}

/// A split exact sequence `0 → N′ --F--> N --P--> N″ → 0` with section `s`, `s∘F = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSequence {
    pub inclusion: LatticeMorphism,
    pub projection: LatticeMorphism,
    pub section: LatticeMorphism,
}

impl SplitSequence {
    /// Checks `P∘F = 0`, `s∘F = id`, ranks, and that `P` is surjective.
    pub fn validate(&self) -> Result<(), LatticeError> {
        let (f, p, s) = (&self.inclusion, &self.projection, &self.section);
        let n = f.target_rank();
        let bad = |msg: &str| Err(LatticeError::InvalidSplit(msg.to_string()));
        if p.source_rank() != n || s.source_rank() != n || s.target_rank() != f.source_rank() {
            return bad("ranks of F, P and s are inconsistent");
        }
        if f.source_rank() + p.target_rank() != n {
            return bad("rank N must equal rank N′ + rank N″");
        }
        if p.compose(f)?.data.iter().any(|&x| x != 0) {
            return bad("P∘F is not zero");
        }
        if !s.compose(f)?.is_identity() {
            return bad("s∘F is not the identity");
        }
        let snf = smith_normal_form(p);
        if snf.diagonal.len() != p.target_rank() || snf.diagonal.iter().any(|&d| d != 1) {
            return bad("P is not surjective");
        }
        Ok(())
    }
}

/// Completes an injective `F` with torsion-free cokernel to a split sequence.
///
/// The section is the one read off the Smith change-of-basis matrices; it is
/// not canonical, and pp-divisors built from different sections differ by a
/// polyhedral principal divisor.
pub fn smith_split(f: &LatticeMorphism) -> Result<SplitSequence, LatticeError> {
    let snf = smith_normal_form(f);
    let k = f.source_rank();
    if snf.diagonal.len() < k {
        return Err(LatticeError::NotInjective);
    }
    if let Some(&e) = snf.diagonal.iter().find(|&&e| e != 1) {
        return Err(LatticeError::TorsionCokernel(e));
    }
    let n = f.target_rank();
    // U F V = [I; 0]  ⇒  first k rows of U F equal V⁻¹, the remaining rows vanish.
    let u_rows = snf.left.rows();
    let top = LatticeMorphism::from_rows(&u_rows[..k], n)?;
    let projection = LatticeMorphism::from_rows(&u_rows[k..], n)?;
    let section = snf.right.compose(&top)?;
    let split = SplitSequence {
        inclusion: f.clone(),
        projection,
        section,
    };
    split.validate()?;
    Ok(split)
}
