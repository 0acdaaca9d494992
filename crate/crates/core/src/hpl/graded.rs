//! Graded linear maps between finite complexes supported in degrees `0..T`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Field;

/// A map of degree `shift` sending degree `n` of the source to degree
/// `n + shift` of the target. Block `n` is a `(dim target_{n+shift}) ×
/// (dim source_n)` matrix acting on column vectors; degrees outside `0..T`
/// have dimension zero.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    field: Field,
    source: Vec<usize>,
    target: Vec<usize>,
    shift: i32,
    blocks: Vec<Matrix>,
}

fn dim_at(dims: &[usize], k: i64) -> usize {
    if k < 0 {
        0
    } else {
        dims.get(k as usize).copied().unwrap_or(0)
    }
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap(shift {}", self.shift)?;
        for (n, b) in self.blocks.iter().enumerate() {
            write!(f, ", {n}: {b:?}")?;
        }
        write!(f, ")")
    }
}

impl GradedMap {
    pub fn zero(field: Field, source: &[usize], target: &[usize], shift: i32) -> GradedMap {
        let blocks = (0..source.len())
            .map(|n| Matrix::zeros(field, dim_at(target, n as i64 + shift as i64), source[n]))
            .collect();
        GradedMap {
            field,
            source: source.to_vec(),
            target: target.to_vec(),
            shift,
            blocks,
        }
    }

    pub fn identity(field: Field, dims: &[usize]) -> GradedMap {
        GradedMap {
            field,
            source: dims.to_vec(),
            target: dims.to_vec(),
            shift: 0,
            blocks: dims.iter().map(|&d| Matrix::identity(field, d)).collect(),
        }
    }

    /// Builds a map from its blocks, checking shapes.
    pub fn from_blocks(
        field: Field,
        source: &[usize],
        target: &[usize],
        shift: i32,
        blocks: Vec<Matrix>,
    ) -> Result<GradedMap> {
        if blocks.len() != source.len() {
            return Err(Error::Shape(format!(
                "{} blocks for {} source degrees",
                blocks.len(),
                source.len()
            )));
        }
        for (n, b) in blocks.iter().enumerate() {
            let want = (dim_at(target, n as i64 + shift as i64), source[n]);
            if b.shape() != want {
                return Err(Error::Shape(format!(
                    "block {n} has shape {:?}, expected {want:?}",
                    b.shape()
                )));
            }
        }
        Ok(GradedMap {
            field,
            source: source.to_vec(),
            target: target.to_vec(),
            shift,
            blocks,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn degrees(&self) -> usize {
        self.source.len()
    }

    pub fn block(&self, n: usize) -> &Matrix {
        &self.blocks[n]
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn set_block(&mut self, n: usize, m: Matrix) {
        assert_eq!(m.shape(), self.blocks[n].shape(), "block shape");
        self.blocks[n] = m;
    }

    fn target_dim(&self, n: usize) -> usize {
        dim_at(&self.target, n as i64 + self.shift as i64)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.source, other.target, "composable graded maps");
        let shift = self.shift + other.shift;
        let blocks = (0..other.source.len())
            .map(|n| {
                let mid = n as i64 + other.shift as i64;
                let rows = dim_at(&self.target, n as i64 + shift as i64);
                if mid < 0 || mid as usize >= self.source.len() {
                    Matrix::zeros(self.field, rows, other.source[n])
                } else {
                    self.blocks[mid as usize].mul(&other.blocks[n])
                }
            })
            .collect();
        GradedMap {
            field: self.field,
            source: other.source.clone(),
            target: self.target.clone(),
            shift,
            blocks,
        }
    }

    fn zip(&self, other: &GradedMap, op: fn(&Matrix, &Matrix) -> Matrix) -> GradedMap {
        assert_eq!(
            (&self.source, &self.target, self.shift),
            (&other.source, &other.target, other.shift),
            "parallel graded maps"
        );
        GradedMap {
            field: self.field,
            source: self.source.clone(),
            target: self.target.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.zip(other, Matrix::sub)
    }

    pub fn neg(&self) -> GradedMap {
        GradedMap {
            blocks: self.blocks.iter().map(Matrix::neg).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// `self − 1` for an endomorphism of degree zero.
    pub fn minus_identity(&self) -> GradedMap {
        assert!(self.shift == 0 && self.source == self.target, "degree-zero endomorphism");
        self.sub(&GradedMap::identity(self.field, &self.source))
    }

    /// Degreewise inverse of a degree-zero map, if every block is invertible.
    pub fn inverse(&self) -> Option<GradedMap> {
        if self.shift != 0 {
            return None;
        }
        let blocks = self.blocks.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(GradedMap {
            field: self.field,
            source: self.target.clone(),
            target: self.source.clone(),
            shift: 0,
            blocks,
        })
    }

    /// Rank of block `n`, zero outside the support.
    pub fn rank_at(&self, n: i64) -> usize {
        if n < 0 || n as usize >= self.blocks.len() {
            0
        } else {
            self.blocks[n as usize].rank()
        }
    }

    /// Rows and columns of every block, for diagnostics.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        (0..self.source.len()).map(|n| (self.target_dim(n), self.source[n])).collect()
    }
}

/// `dim H_n` of a complex with differential `b` of degree −1.
pub fn homology_dims(b: &GradedMap) -> Vec<usize> {
    let dims = b.source();
    (0..dims.len())
        .map(|n| dims[n] - b.rank_at(n as i64) - b.rank_at(n as i64 + 1))
        .collect()
}

/// Whether the chain map `phi: (C, bc) → (D, bd)` is a quasi-isomorphism,
/// tested by acyclicity of its mapping cone.
pub fn is_quasi_isomorphism(phi: &GradedMap, bc: &GradedMap, bd: &GradedMap) -> bool {
    let field = phi.field();
    let c = phi.source();
    let d = phi.target();
    let t = c.len();
    // cone_n = C_{n-1} ⊕ D_n, d(x, y) = (−bc x, phi x + bd y)
    let cone_dims: Vec<usize> = (0..=t).map(|n| dim_at(c, n as i64 - 1) + dim_at(d, n as i64)).collect();
    let mut ranks = vec![0usize; t + 2];
    for n in 1..=t {
        let cn1 = dim_at(c, n as i64 - 1);
        let cn2 = dim_at(c, n as i64 - 2);
        let dn = dim_at(d, n as i64);
        let dn1 = dim_at(d, n as i64 - 1);
        let mut m = Matrix::zeros(field, cn2 + dn1, cn1 + dn);
        if n >= 2 {
            let b = bc.block(n - 1).neg();
            for i in 0..cn2 {
                for j in 0..cn1 {
                    m.set(i, j, b.get(i, j).clone());
                }
            }
        }
        let ph = phi.block(n - 1);
        for i in 0..dn1 {
            for j in 0..cn1 {
                m.set(cn2 + i, j, ph.get(i, j).clone());
            }
        }
        if n < t {
            let b = bd.block(n);
            for i in 0..dn1 {
                for j in 0..dn {
                    m.set(cn2 + i, cn1 + j, b.get(i, j).clone());
                }
            }
        }
        ranks[n] = m.rank();
    }
    (0..=t).all(|n| cone_dims[n] == ranks[n] + ranks[n + 1])
}

/// Kronecker product, used to vectorise homotopy equations.
pub(crate) fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            for k in 0..b.rows() {
                for l in 0..b.cols() {
                    out.set(i * b.rows() + k, j * b.cols() + l, x * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Some `k` of degree +1 on `(L, b)` with `target = b k + k b`, if one exists.
pub fn solve_homotopy(target: &GradedMap, b: &GradedMap) -> Option<GradedMap> {
    let field = b.field();
    let dims = b.source().to_vec();
    let t = dims.len();
    // unknown k_n: L_n → L_{n+1}, column-major vectorised
    let mut offsets = Vec::with_capacity(t + 1);
    let mut total = 0;
    for n in 0..t {
        offsets.push(total);
        total += dim_at(&dims, n as i64 + 1) * dims[n];
    }
    let equations: usize = dims.iter().map(|d| d * d).sum();
    let mut system = Matrix::zeros(field, equations, total);
    let mut rhs = Matrix::zeros(field, equations, 1);
    let mut row0 = 0;
    for n in 0..t {
        let dn = dims[n];
        // target_n = b_{n+1} k_n + k_{n−1} b_n
        let tn = target.block(n);
        for j in 0..dn {
            for i in 0..dn {
                rhs.set(row0 + j * dn + i, 0, tn.get(i, j).clone());
            }
        }
        if n + 1 < t && dims[n + 1] > 0 {
            // vec(b_{n+1} k_n) = (I ⊗ b_{n+1}) vec(k_n)
            let part = kron(&Matrix::identity(field, dn), b.block(n + 1));
            place(&mut system, row0, offsets[n], &part);
        }
        if n >= 1 && dims[n - 1] > 0 {
            // vec(k_{n−1} b_n) = (b_nᵀ ⊗ I) vec(k_{n−1})
            let part = kron(&b.block(n).transpose(), &Matrix::identity(field, dn));
            place(&mut system, row0, offsets[n - 1], &part);
        }
        row0 += dn * dn;
    }
    let x = system.solve(&rhs)?;
    let blocks = (0..t)
        .map(|n| {
            let rows = dim_at(&dims, n as i64 + 1);
            let mut k = Matrix::zeros(field, rows, dims[n]);
            for j in 0..dims[n] {
                for i in 0..rows {
                    k.set(i, j, x.get(offsets[n] + j * rows + i, 0).clone());
                }
            }
            k
        })
        .collect();
    GradedMap::from_blocks(field, &dims, &dims, 1, blocks).ok()
}

fn place(m: &mut Matrix, r0: usize, c0: usize, part: &Matrix) {
    for i in 0..part.rows() {
        for j in 0..part.cols() {
            if !part.get(i, j).is_zero() {
                let v = m.get(r0 + i, c0 + j) + part.get(i, j);
                m.set(r0 + i, c0 + j, v);
            }
        }
    }
}

fn sum_dims(a: &[usize], b: &[usize]) -> Vec<usize> {
    assert_eq!(a.len(), b.len(), "same degree range");
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl GradedMap {
    /// `[self other]: S ⊕ S' → T`.
    pub fn hstack(&self, other: &GradedMap) -> GradedMap {
        assert_eq!((self.shift, &self.target), (other.shift, &other.target), "hstack");
        GradedMap {
            field: self.field,
            source: sum_dims(&self.source, &other.source),
            target: self.target.clone(),
            shift: self.shift,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.hstack(b)).collect(),
        }
    }

    /// `[self; other]: S → T ⊕ T'`.
    pub fn vstack(&self, other: &GradedMap) -> GradedMap {
        assert_eq!((self.shift, &self.source), (other.shift, &other.source), "vstack");
        GradedMap {
            field: self.field,
            source: self.source.clone(),
            target: sum_dims(&self.target, &other.target),
            shift: self.shift,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.vstack(b)).collect(),
        }
    }

    /// `[[a, b], [c, d]]` on direct sums.
    pub fn from_grid(a: &GradedMap, b: &GradedMap, c: &GradedMap, d: &GradedMap) -> GradedMap {
        a.hstack(b).vstack(&c.hstack(d))
    }

    /// `P ∘ self ∘ Q⁻¹` for degreewise changes of basis `P` on the target and
    /// `Q` on the source (given with its inverse).
    pub fn conjugate(&self, p: &GradedMap, q_inv: &GradedMap) -> GradedMap {
        p.compose(self).compose(q_inv)
    }
}
