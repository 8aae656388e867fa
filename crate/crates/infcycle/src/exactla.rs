//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Every homology, kernel and membership computation in this crate bottoms
//! out here. Matrices are sparse (row, col) -> rational maps; no zero entry
//! is ever stored and no floating point is used anywhere.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

/// Shorthand for small rational constants in tests and tables.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("not a subspace")]
    NotASubspace,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
}

/// Sparse matrix over the rationals. Indices are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = RatMatrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Columns are dense vectors of length `ambient`.
    pub fn from_columns(ambient: usize, cols: &[Vec<Rat>]) -> Self {
        let mut m = RatMatrix::zeros(ambient, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), ambient, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.entries.insert((i, j), v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rat) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.rows];
        for (&(r, cc), v) in &self.entries {
            if cc == c {
                out[r] = v.clone();
            }
        }
        out
    }

    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut m = RatMatrix::zeros(self.rows, self.cols + other.cols);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((r, c), v.clone());
        }
        for (&(r, c), v) in &other.entries {
            m.entries.insert((r, c + self.cols), v.clone());
        }
        m
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut other_rows: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            other_rows[r].push((c, v));
        }
        let mut m = RatMatrix::zeros(self.rows, other.cols);
        for (&(i, k), v) in &self.entries {
            for &(j, w) in &other_rows[k] {
                m.add_to(i, j, &(v * w));
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, x.len(), "vector length mismatch");
        let mut out = vec![Rat::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            if !x[c].is_zero() {
                out[r] += v * &x[c];
            }
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m.set(r, c, v * s);
        }
        m
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (&(r, c), v) in &other.entries {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn rank(&self) -> usize {
        echelon(self.sparse_rows()).len()
    }

    /// Reduced row echelon form. The result is canonical, independent of
    /// pivot choices made along the way.
    pub fn rref(&self) -> Rref {
        let mut rows = echelon(self.sparse_rows());
        // back-substitute and normalize
        rows.sort_by_key(|r| *r.keys().next().unwrap());
        let pivots: Vec<usize> = rows.iter().map(|r| *r.keys().next().unwrap()).collect();
        for i in 0..rows.len() {
            let lead = *rows[i].keys().next().unwrap();
            let lc = rows[i][&lead].clone();
            if !lc.is_one() {
                for v in rows[i].values_mut() {
                    *v = &*v / &lc;
                }
            }
            // clear this pivot column from earlier rows
            for j in 0..i {
                if let Some(f) = rows[j].get(&lead).cloned() {
                    let (rj, ri) = split_two(&mut rows, j, i);
                    row_axpy(rj, ri, &-f);
                }
            }
        }
        let mut matrix = RatMatrix::zeros(rows.len(), self.cols);
        for (i, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                matrix.entries.insert((i, c), v.clone());
            }
        }
        Rref { matrix, pivots }
    }

    pub fn kernel_basis(&self) -> Subspace {
        let rref = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = rref.pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (i, &p) in rref.pivots.iter().enumerate() {
                let coeff = rref.matrix.get(i, free);
                if !coeff.is_zero() {
                    v[p] = -coeff;
                }
            }
            basis.push(v);
        }
        Subspace { ambient: self.cols, basis }
    }

    /// Inverse of a square matrix, when it exists.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let aug = self.hstack(&RatMatrix::identity(self.rows));
        let rref = aug.rref();
        if rref.pivots.len() != self.rows || rref.pivots.iter().any(|&p| p >= self.rows) {
            return None;
        }
        let mut inv = RatMatrix::zeros(self.rows, self.rows);
        for (&(r, c), v) in rref.matrix.entries.iter() {
            if c >= self.rows {
                inv.entries.insert((r, c - self.rows), v.clone());
            }
        }
        Some(inv)
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    /// Free variables are set to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        let mut aug = self.clone();
        aug.cols += 1;
        for (i, v) in b.iter().enumerate() {
            if !v.is_zero() {
                aug.entries.insert((i, self.cols), v.clone());
            }
        }
        let rref = aug.rref();
        if rref.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.get(i, self.cols);
        }
        Some(x)
    }

    fn sparse_rows(&self) -> Vec<BTreeMap<usize, Rat>> {
        let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); self.rows];
        for (&(r, c), v) in &self.entries {
            rows[r].insert(c, v.clone());
        }
        rows.retain(|r| !r.is_empty());
        rows
    }
}

pub struct Rref {
    pub matrix: RatMatrix,
    /// Pivot column of each row, strictly increasing.
    pub pivots: Vec<usize>,
}

fn split_two<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &mut T) {
    assert!(a < b);
    let (lo, hi) = v.split_at_mut(b);
    (&mut lo[a], &mut hi[0])
}

/// dst += f * src
fn row_axpy(dst: &mut BTreeMap<usize, Rat>, src: &BTreeMap<usize, Rat>, f: &Rat) {
    for (&c, v) in src {
        let nv = match dst.get(&c) {
            Some(old) => old + v * f,
            None => v * f,
        };
        if nv.is_zero() {
            dst.remove(&c);
        } else {
            dst.insert(c, nv);
        }
    }
}

/// Size measure used for pivot selection: small numerators and denominators
/// keep coefficient growth down during elimination.
fn pivot_weight(v: &Rat) -> u64 {
    (v.numer().abs().bits() + v.denom().bits()) as u64
}

/// Forward elimination on sparse rows. Returns the nonzero echelon rows;
/// pivot choice prefers the entry of smallest numerator/denominator size in
/// the current column, ties broken by row index.
fn echelon(mut rows: Vec<BTreeMap<usize, Rat>>) -> Vec<BTreeMap<usize, Rat>> {
    let mut done: Vec<BTreeMap<usize, Rat>> = Vec::new();
    while !rows.is_empty() {
        // column with the smallest leading index among remaining rows
        let col = rows.iter().map(|r| *r.keys().next().unwrap()).min().unwrap();
        let mut best: Option<(u64, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            if *r.keys().next().unwrap() == col {
                let w = pivot_weight(&r[&col]);
                if best.map_or(true, |(bw, _)| w < bw) {
                    best = Some((w, i));
                }
            }
        }
        let pivot_idx = best.unwrap().1;
        let pivot = rows.swap_remove(pivot_idx);
        let pv = pivot[&col].clone();
        for r in rows.iter_mut() {
            if let Some(v) = r.get(&col).cloned() {
                let f = -v / &pv;
                row_axpy(r, &pivot, &f);
            }
        }
        rows.retain(|r| !r.is_empty());
        done.push(pivot);
    }
    done
}

/// A linear subspace of Q^ambient, stored by an explicit basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn new(ambient: usize, basis: Vec<Vec<Rat>>) -> Result<Self, LinAlgError> {
        for v in &basis {
            if v.len() != ambient {
                return Err(LinAlgError::DimensionMismatch { expected: ambient, got: v.len() });
            }
        }
        let m = RatMatrix::from_columns(ambient, &basis);
        if m.rank() != basis.len() {
            return Err(LinAlgError::DependentBasis);
        }
        Ok(Subspace { ambient, basis })
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn as_matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.ambient, &self.basis)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.as_matrix().solve(v).is_some()
    }
}

/// dim(big) - dim(small), after checking small really sits inside big.
pub fn quotient_dim(big: &Subspace, small: &Subspace) -> Result<usize, LinAlgError> {
    if big.ambient != small.ambient {
        return Err(LinAlgError::DimensionMismatch { expected: big.ambient, got: small.ambient });
    }
    let big_m = big.as_matrix();
    let r_big = big_m.rank();
    if r_big != big.dim() {
        return Err(LinAlgError::DependentBasis);
    }
    let r_union = big_m.hstack(&small.as_matrix()).rank();
    if r_union != r_big {
        return Err(LinAlgError::NotASubspace);
    }
    Ok(big.dim() - small.dim())
}

/// Representatives of big/small: the vectors of `big` (in order) that extend
/// a spanning set of `small` to one of `big`. Deterministic in the given
/// generator order.
pub fn quotient_reps(big: &[Vec<Rat>], small: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let ambient = big.first().map_or_else(|| small.first().map_or(0, |v| v.len()), |v| v.len());
    let mut rows: Vec<BTreeMap<usize, Rat>> = Vec::new();
    let mut rank = 0usize;
    let add = |rows: &mut Vec<BTreeMap<usize, Rat>>, v: &[Rat]| -> bool {
        let mut row: BTreeMap<usize, Rat> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        for r in rows.iter() {
            if row.is_empty() {
                break;
            }
            let lead = *r.keys().next().unwrap();
            if let Some(c) = row.get(&lead).cloned() {
                let f = -c / &r[&lead];
                row_axpy(&mut row, r, &f);
            }
        }
        if row.is_empty() {
            false
        } else {
            rows.push(row);
            rows.sort_by_key(|r| *r.keys().next().unwrap());
            true
        }
    };
    for v in small {
        if add(&mut rows, v) {
            rank += 1;
        }
    }
    let _ = rank;
    let mut reps = Vec::new();
    for v in big {
        if add(&mut rows, v) {
            reps.push(v.clone());
        }
    }
    let _ = ambient;
    reps
}

/// Intersection dim of a subspace Z with the column space of B.
pub fn intersection_with_image_dim(z: &Subspace, b: &RatMatrix) -> usize {
    let rb = b.rank();
    let joint = b.hstack(&z.as_matrix()).rank();
    z.dim() + rb - joint
}

/// dim of span(z_cols) modulo the column space of `b`, computed by one
/// sparse elimination of b's columns followed by incremental reduction of
/// each z vector.
pub fn dim_modulo_image(z_cols: &[Vec<Rat>], b: &RatMatrix) -> usize {
    let mut cols: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    for (&(r, c), v) in b.entries() {
        cols.entry(c).or_default().insert(r, v.clone());
    }
    let mut rows = echelon(cols.into_values().collect());
    rows.sort_by_key(|r| *r.keys().next().unwrap());
    let mut count = 0usize;
    for z in z_cols {
        let mut cur: BTreeMap<usize, Rat> =
            z.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        for r in &rows {
            if cur.is_empty() {
                break;
            }
            let lead = *r.keys().next().unwrap();
            if let Some(c) = cur.get(&lead).cloned() {
                let f = -c / &r[&lead];
                row_axpy(&mut cur, r, &f);
            }
        }
        if !cur.is_empty() {
            rows.push(cur);
            rows.sort_by_key(|r| *r.keys().next().unwrap());
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(RatMatrix::identity(2).rank(), 2);
        assert_eq!(RatMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        // [[1,2],[2,4]] has rank 1
        let m = RatMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(RatMatrix::identity(4).kernel_basis().dim(), 0);
        let z = RatMatrix::zeros(2, 3);
        let k = z.kernel_basis();
        assert_eq!(k.dim(), 3);
        assert_eq!(k.basis()[0], vec![rat_int(1), rat_int(0), rat_int(0)]);

        // [[1,1]] -> span{(1,-1)}
        let m = RatMatrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        let v = &k.basis()[0];
        assert_eq!(&v[0] + &v[1], rat_int(0));
        assert!(!v[0].is_zero());
    }

    #[test]
    fn solve_cases() {
        let id = RatMatrix::identity(3);
        let b = vec![rat_int(1), rat(1, 2), rat_int(-3)];
        assert_eq!(id.solve(&b).unwrap(), b);

        let m = RatMatrix::from_rows(vec![vec![rat_int(1), rat_int(1)]]);
        let x = m.solve(&[rat_int(2)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![rat_int(2)]);

        let z = RatMatrix::zeros(1, 1);
        assert!(z.solve(&[rat_int(1)]).is_none());
    }

    #[test]
    fn quotient_dims() {
        let big = Subspace::full(3);
        assert_eq!(quotient_dim(&big, &Subspace::zero(3)).unwrap(), 3);
        assert_eq!(quotient_dim(&big, &big).unwrap(), 0);

        // dim-2 inside dim-4
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); 4];
            v[i] = Rat::one();
            v
        };
        let big = Subspace::new(4, vec![e(0), e(1), e(2), e(3)]).unwrap();
        let small = Subspace::new(4, vec![e(1), e(3)]).unwrap();
        assert_eq!(quotient_dim(&big, &small).unwrap(), 2);

        let outside = Subspace::new(3, vec![vec![rat_int(1), rat_int(0), rat_int(0)]]).unwrap();
        let plane = Subspace::new(
            3,
            vec![vec![rat_int(0), rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(0), rat_int(1)]],
        )
        .unwrap();
        assert_eq!(quotient_dim(&plane, &outside), Err(LinAlgError::NotASubspace));
    }

    #[test]
    fn quotient_reps_pick_first_independent() {
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); 3];
            v[i] = Rat::one();
            v
        };
        let small = vec![vec![rat_int(0), rat_int(1), rat_int(1)]];
        let reps = quotient_reps(&[e(0), e(1), e(2)], &small);
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], e(0));
        assert_eq!(reps[1], e(1));
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-4i64..5, r * c).prop_map(move |vals| {
                let rows: Vec<Vec<Rat>> =
                    vals.chunks(c).map(|ch| ch.iter().map(|&v| rat_int(v)).collect()).collect();
                RatMatrix::from_rows(rows)
            })
        })
    }

    proptest! {
        #[test]
        fn rank_transpose(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().dim(), m.cols());
        }

        #[test]
        fn solve_verifies(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 1..5)) {
            // build a consistent rhs from a random preimage
            let x: Vec<Rat> = (0..m.cols()).map(|i| rat_int(*seed.get(i % seed.len()).unwrap())).collect();
            let b = m.mul_vec(&x);
            let sol = m.solve(&b).expect("consistent system must solve");
            prop_assert_eq!(m.mul_vec(&sol), b);
        }
    }
}
