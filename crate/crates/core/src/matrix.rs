//! Dense matrices over a [`Field`] and exact elimination.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;

use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Row-major integer entries.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count matches shape");
        Matrix {
            field,
            rows,
            cols,
            data: entries.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix {
            field,
            rows: n,
            cols,
            data,
        }
    }

    /// Integer entries drawn uniformly from `-bound..=bound`.
    pub fn random<R: Rng>(field: Field, rows: usize, cols: usize, bound: i64, rng: &mut R) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for v in &mut m.data {
            *v = field.from_i64(rng.random_range(-bound..=bound));
        }
        m
    }

    /// A random invertible matrix: a product of random unit triangular factors
    /// and a permutation.
    pub fn random_invertible<R: Rng>(field: Field, n: usize, bound: i64, rng: &mut R) -> Matrix {
        let mut lower = Matrix::identity(field, n);
        let mut upper = Matrix::identity(field, n);
        for i in 0..n {
            for j in 0..i {
                lower.set(i, j, field.from_i64(rng.random_range(-bound..=bound)));
                upper.set(j, i, field.from_i64(rng.random_range(-bound..=bound)));
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let mut p = Matrix::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            p.set(i, j, field.one());
        }
        p.mul(&lower).mul(&upper)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix sum shapes");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "matrix difference shapes");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scaled(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shapes");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// `[self other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row counts");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    /// Block matrix from a grid of blocks with consistent shapes.
    pub fn from_blocks(grid: &[Vec<&Matrix>]) -> Matrix {
        let mut out: Option<Matrix> = None;
        for row in grid {
            let mut acc = row[0].clone();
            for b in &row[1..] {
                acc = acc.hstack(b);
            }
            out = Some(match out {
                None => acc,
                Some(o) => o.vstack(&acc),
            });
        }
        out.expect("at least one block row")
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let (r, pivots) = self.hstack(&Matrix::identity(self.field, n)).rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, 2 * n))
    }

    /// Some `X` with `self · X = b`, if the system is consistent.
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve row counts");
        let (r, pivots) = self.hstack(b).rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (row, &c) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Basis of the null space `{v : self · v = 0}` as columns.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, self.field.one());
            for (row, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, -r.get(row, fc));
            }
        }
        k
    }
}

/// Rank of a sparse matrix given by rows `column → entry`.
pub fn sparse_rank(field: Field, rows: Vec<BTreeMap<usize, Scalar>>) -> usize {
    // pivot column -> reduced row with that leading column
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    let one = field.one();
    for mut row in rows {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_value)) = row.iter().next() else {
                break;
            };
            match pivots.get(&lead) {
                None => {
                    let inv = lead_value.inverse().expect("nonzero lead");
                    if inv != one {
                        for v in row.values_mut() {
                            *v *= &inv;
                        }
                    }
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let factor = lead_value.clone();
                    for (c, v) in p {
                        let entry = row.entry(*c).or_insert_with(|| field.zero());
                        *entry -= &(&factor * v);
                        if entry.is_zero() {
                            row.remove(c);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_and_solve() {
        let q = Field::Rational;
        let a = Matrix::from_i64(q, 2, 2, &[2, 1, 1, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv, Matrix::from_i64(q, 2, 2, &[1, -1, -1, 2]));
        assert!(a.mul(&inv).is_identity());
        let singular = Matrix::from_i64(q, 2, 2, &[1, 2, 2, 4]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
        let b = Matrix::from_i64(q, 2, 1, &[3, 6]);
        let x = singular.solve(&b).unwrap();
        assert_eq!(singular.mul(&x), b);
        assert!(singular.solve(&Matrix::from_i64(q, 2, 1, &[1, 0])).is_none());
        let k = singular.kernel();
        assert_eq!(k.cols(), 1);
        assert!(singular.mul(&k).is_zero());
    }

    #[test]
    fn random_invertible_is_invertible_and_sparse_rank_agrees() {
        let q = Field::Rational;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            let m = Matrix::random_invertible(q, n, 3, &mut rng);
            assert!(m.inverse().is_some());
            let r = Matrix::random(q, n, n + 1, 1, &mut rng);
            let rows = (0..r.rows())
                .map(|i| (0..r.cols()).map(|j| (j, r.get(i, j).clone())).collect())
                .collect();
            assert_eq!(sparse_rank(q, rows), r.rank());
        }
    }
}
