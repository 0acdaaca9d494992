//! Seeded random complexes and data.
//!
//! Every complex over a field is a direct sum of copies of `k → k` and of
//! `k` with zero differential. A random complex is such a standard form with
//! random ranks, conjugated by random invertible matrices in each degree. An
//! SDR datum is the inclusion of `L` into `L ⊕ C` with `C` contractible,
//! conjugated the same way.

use rand::Rng;

use crate::hpl::datum::{is_small, HrDatum};
use crate::hpl::graded::GradedMap;
use crate::matrix::Matrix;
use crate::scalar::Field;

const ENTRY_BOUND: i64 = 2;

/// Standard differential: in degree `n` the first `ranks[n+1]` basis vectors
/// are boundaries and the next `ranks[n]` map onto the boundaries of degree
/// `n − 1`. `ranks[0]` must be zero.
fn standard_differential(field: Field, dims: &[usize], ranks: &[usize]) -> GradedMap {
    let t = dims.len();
    let mut b = GradedMap::zero(field, dims, dims, -1);
    for n in 1..t {
        let boundaries_here = if n + 1 < t { ranks[n + 1] } else { 0 };
        let mut m = Matrix::zeros(field, dims[n - 1], dims[n]);
        for j in 0..ranks[n] {
            m.set(j, boundaries_here + j, field.one());
        }
        b.set_block(n, m);
    }
    b
}

/// The contraction of a standard contractible differential: each boundary
/// goes back to its source.
fn standard_contraction(field: Field, dims: &[usize], ranks: &[usize]) -> GradedMap {
    let t = dims.len();
    let mut s = GradedMap::zero(field, dims, dims, 1);
    for n in 0..t.saturating_sub(1) {
        let boundaries_up = if n + 2 < t { ranks[n + 2] } else { 0 };
        let mut m = Matrix::zeros(field, dims[n + 1], dims[n]);
        for j in 0..ranks[n + 1] {
            m.set(boundaries_up + j, j, field.one());
        }
        s.set_block(n, m);
    }
    s
}

/// Random ranks for a differential on the given dimensions.
fn random_ranks<R: Rng>(dims: &[usize], rng: &mut R) -> Vec<usize> {
    let t = dims.len();
    let mut ranks = vec![0; t + 1];
    for n in 1..t {
        let room = (dims[n - 1] - ranks[n - 1]).min(dims[n]);
        ranks[n] = rng.random_range(0..=room);
    }
    ranks
}

/// Random invertible changes of basis per degree, with inverses.
pub fn random_basis_change<R: Rng>(field: Field, dims: &[usize], rng: &mut R) -> (GradedMap, GradedMap) {
    let mats: Vec<Matrix> = dims
        .iter()
        .map(|&d| Matrix::random_invertible(field, d, ENTRY_BOUND, rng))
        .collect();
    let inv: Vec<Matrix> = mats.iter().map(|m| m.inverse().expect("invertible")).collect();
    (
        GradedMap::from_blocks(field, dims, dims, 0, mats).expect("shapes"),
        GradedMap::from_blocks(field, dims, dims, 0, inv).expect("shapes"),
    )
}

/// A random square-zero differential on the given dimensions.
pub fn random_complex<R: Rng>(field: Field, dims: &[usize], rng: &mut R) -> GradedMap {
    let ranks = random_ranks(dims, rng);
    let (p, p_inv) = random_basis_change(field, dims, rng);
    standard_differential(field, dims, &ranks).conjugate(&p, &p_inv)
}

/// A random contractible complex with ranks `ranks[1..]` and a contraction
/// `σ` (`bσ + σb = 1`). With `twist` the contraction is modified by
/// `bρ − ρb` for a random `ρ` of degree 2, so that `σ²` is usually nonzero.
pub fn random_contractible<R: Rng>(
    field: Field,
    ranks: &[usize],
    twist: bool,
    rng: &mut R,
) -> (GradedMap, GradedMap) {
    let t = ranks.len();
    let mut full = ranks.to_vec();
    full[0] = 0;
    full.push(0);
    let dims: Vec<usize> = (0..t).map(|n| full[n] + full[n + 1]).collect();
    let (p, p_inv) = random_basis_change(field, &dims, rng);
    let b = standard_differential(field, &dims, &full).conjugate(&p, &p_inv);
    let mut s = standard_contraction(field, &dims, &full).conjugate(&p, &p_inv);
    if twist {
        let mut rho = GradedMap::zero(field, &dims, &dims, 2);
        for n in 0..t {
            let m = rho.block(n);
            let (r, c) = m.shape();
            rho.set_block(n, Matrix::random(field, r, c, 1, rng));
        }
        s = s.add(&b.compose(&rho)).sub(&rho.compose(&b));
    }
    (b, s)
}

/// Random contractible ranks fitting under `room[n]` in every degree.
pub fn random_contractible_ranks<R: Rng>(room: &[usize], rng: &mut R) -> Vec<usize> {
    let t = room.len();
    let mut ranks = vec![0; t];
    for n in 1..t {
        let cap = room[n - 1].saturating_sub(ranks[n - 1]).min(room[n]);
        ranks[n] = rng.random_range(0..=cap);
    }
    ranks
}

/// A random SDR datum with `degrees` degrees and total dimension at most
/// `max_dim` in each degree of `M`.
pub fn random_sdr<R: Rng>(field: Field, degrees: usize, max_dim: usize, rng: &mut R) -> HrDatum {
    let l: Vec<usize> = (0..degrees).map(|_| rng.random_range(0..=max_dim.min(3))).collect();
    let room: Vec<usize> = l.iter().map(|&d| max_dim - d).collect();
    let ranks = random_contractible_ranks(&room, rng);
    let (eta, sigma) = random_contractible(field, &ranks, false, rng);
    let c = eta.source().to_vec();
    let bl = random_complex(field, &l, rng);
    let zero_lc = |shift| GradedMap::zero(field, &l, &c, shift);
    let zero_cl = |shift| GradedMap::zero(field, &c, &l, shift);
    let bm0 = GradedMap::from_grid(&bl, &zero_cl(-1), &zero_lc(-1), &eta);
    let i0 = GradedMap::identity(field, &l).vstack(&zero_lc(0));
    let p0 = GradedMap::identity(field, &l).hstack(&zero_cl(0));
    let h0 = GradedMap::from_grid(
        &GradedMap::zero(field, &l, &l, 1),
        &zero_cl(1),
        &zero_lc(1),
        &sigma.neg(),
    );
    let m: Vec<usize> = l.iter().zip(&c).map(|(a, b)| a + b).collect();
    let (q, q_inv) = random_basis_change(field, &m, rng);
    let (pl, pl_inv) = random_basis_change(field, &l, rng);
    HrDatum {
        bl: bl.conjugate(&pl, &pl_inv),
        bm: bm0.conjugate(&q, &q_inv),
        i: i0.conjugate(&q, &pl_inv),
        p: p0.conjugate(&pl, &q_inv),
        h: h0.conjugate(&q, &q_inv),
    }
}

/// A perturbation `δ = b' − b` for a random differential `b'` on `M`, retried
/// until `1 − δh` is invertible.
pub fn random_small_perturbation<R: Rng>(d: &HrDatum, tries: usize, rng: &mut R) -> Option<GradedMap> {
    for _ in 0..tries {
        let b_new = random_complex(d.field(), d.m_dims(), rng);
        let delta = b_new.sub(&d.bm);
        if is_small(d, &delta) {
            return Some(delta);
        }
    }
    None
}
