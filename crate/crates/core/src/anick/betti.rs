//! Betti numbers `dim Tor_m^A(E, E)`, global dimension reports and the
//! exactness check of the one-sided resolution `E ⊗_A P`.

use std::collections::BTreeMap;

use super::resolution::{anick_resolution, Resolution};
use crate::bimodule::Algebra;
use crate::chains::{all_chains, UfGraph};
use crate::error::{Error, Result};
use crate::gsb::{Certificate, GroebnerData};
use crate::matrix::sparse_rank;
use crate::morse::BasedComplex;
use crate::pathalg::Path;
use crate::scalar::{Field, Scalar};

/// Betti numbers for `m ≤ exact_through`, split by internal degree when the
/// presentation is homogeneous (otherwise everything sits at degree 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub graded: bool,
    pub by_degree: Vec<BTreeMap<usize, usize>>,
}

impl BettiTable {
    pub fn total(&self, m: usize) -> usize {
        self.by_degree.get(m).map_or(0, |t| t.values().sum())
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..self.by_degree.len()).map(|m| self.total(m)).collect()
    }

    /// Largest `m` with a nonzero Betti number.
    pub fn top_nonzero(&self) -> Option<usize> {
        (0..self.by_degree.len()).rev().find(|&m| self.total(m) > 0)
    }
}

/// Betti numbers of a free complex given per cell internal degrees. Terms of
/// the differential with both factors vertices survive `E ⊗_A − ⊗_A E`; those
/// connect cells of equal internal degree when `graded`. `exact_through` is
/// the last `m` whose homology the truncation determines.
pub fn betti_of_complex(x: &BasedComplex, degrees: &[Vec<usize>], graded: bool, exact_through: usize) -> BettiTable {
    let field = x.field();
    let deg = |n: usize, i: usize| if graded { degrees[n][i] } else { 0 };
    // rank of d_n restricted to sources of each internal degree
    let rank_by_degree = |n: usize| -> BTreeMap<usize, usize> {
        let mut rows: BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, Scalar>>> = BTreeMap::new();
        for (i, j, w) in x.arrows(n) {
            if let Some(c) = w.scalar_part() {
                rows.entry(deg(n, i)).or_default().entry(i).or_default().insert(j, c);
            }
        }
        rows.into_iter()
            .map(|(t, r)| (t, sparse_rank(field, r.into_values().collect())))
            .collect()
    };
    let mut by_degree = Vec::new();
    for m in 0..=exact_through.min(degrees.len().saturating_sub(1)) {
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..x.cells(m).len() {
            *dims.entry(deg(m, i)).or_default() += 1;
        }
        let out_rank = if m >= 1 { rank_by_degree(m) } else { BTreeMap::new() };
        let in_rank = rank_by_degree(m + 1);
        let table = dims
            .into_iter()
            .map(|(t, d)| (t, d - out_rank.get(&t).unwrap_or(&0) - in_rank.get(&t).unwrap_or(&0)))
            .filter(|&(_, b)| b > 0)
            .collect();
        by_degree.push(table);
    }
    BettiTable { graded, by_degree }
}

/// The last `m` whose Tor the resolution determines.
pub fn exact_through(res: &Resolution) -> usize {
    if res.complete {
        res.length
    } else {
        res.length.saturating_sub(1)
    }
}

pub fn betti(res: &Resolution, q: &crate::pathalg::Quiver) -> BettiTable {
    let degrees: Vec<Vec<usize>> = res.levels.iter().map(|l| l.iter().map(|c| c.degree()).collect()).collect();
    betti_of_complex(&res.to_based_complex(q), &degrees, res.homogeneous, exact_through(res))
}

/// What is known about `gldim A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlDim {
    Exact(usize),
    /// `upper` is `None` when the truncation gives no upper bound.
    Bounds { lower: usize, upper: Option<usize> },
}

/// The global dimension from the chain graph and Betti numbers. Finite
/// acyclic graphs give an upper bound by the top chain weight and a lower
/// bound by the top nonzero Betti number; otherwise `length` (and a degree
/// cap when the basis is truncated) must be supplied and only a lower bound
/// results.
pub fn gldim(g: &GroebnerData, length: Option<usize>, max_degree: Option<usize>) -> Result<GlDim> {
    let q = g.quiver();
    let graph = UfGraph::build(g)?;
    if g.certificate() == Certificate::Complete && !graph.is_truncated() {
        if let Some(set) = all_chains(g, &graph) {
            let upper = set.top_weight();
            let res = anick_resolution(g, upper, None)?;
            let lower = betti(&res, q).top_nonzero().unwrap_or(0);
            return Ok(if lower == upper {
                GlDim::Exact(upper)
            } else {
                GlDim::Bounds {
                    lower,
                    upper: Some(upper),
                }
            });
        }
    }
    let Some(n) = length else {
        return Err(Error::CapRequired(
            "the chain graph is infinite or cyclic; give a resolution length".into(),
        ));
    };
    let res = anick_resolution(g, n, max_degree)?;
    let lower = betti(&res, q).top_nonzero().unwrap_or(0);
    Ok(GlDim::Bounds { lower, upper: None })
}

/// `dim H_n` of the one-sided complex `E ⊗_A P` per internal degree, over
/// internal degrees at most `max_internal_degree`. Exactness of the
/// resolution means `H_0 ≅ E` in degree 0 and `H_n = 0` otherwise. Only the
/// `n` the truncation determines are returned. Requires a homogeneous
/// presentation.
pub fn one_sided_homology(
    alg: &Algebra,
    res: &Resolution,
    max_internal_degree: usize,
) -> Result<Vec<BTreeMap<usize, usize>>> {
    let g = alg.gb;
    if !g.is_homogeneous() {
        return Err(Error::InvalidPresentation(
            "the exactness check needs a homogeneous presentation".into(),
        ));
    }
    if let Some(cap) = res.degree_cap.filter(|&cap| max_internal_degree > cap) {
        return Err(Error::BeyondCap {
            degree: max_internal_degree,
            cap,
        });
    }
    let field: Field = g.field();
    let nontips: Vec<Vec<Path>> = (0..=max_internal_degree).map(|d| g.nontips_of_degree(d)).collect();
    let top = if res.complete {
        Some(res.length)
    } else {
        res.length.checked_sub(1)
    };
    let Some(top) = top else { return Ok(Vec::new()) };
    // C_n has basis c ⊗ m, m a NonTip starting at t(c), keyed to (internal degree, column)
    let bases: Vec<BTreeMap<(usize, Path), (usize, usize)>> = (0..=top + 1)
        .map(|n| {
            let mut out = BTreeMap::new();
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for (i, c) in res.levels.get(n).into_iter().flatten().enumerate() {
                for k in 0..=max_internal_degree.saturating_sub(c.degree()) {
                    if c.degree() > max_internal_degree {
                        break;
                    }
                    for m in nontips[k].iter().filter(|m| m.source() == c.target()) {
                        let t = c.degree() + k;
                        let slot = count.entry(t).or_default();
                        out.insert((i, m.clone()), (t, *slot));
                        *slot += 1;
                    }
                }
            }
            out
        })
        .collect();
    // c ⊗ m ↦ Σ λ·t ⊗ NF(r·m) over the terms l⊗r of d(c) with l a vertex
    let rank_of = |n: usize| -> Result<BTreeMap<usize, usize>> {
        let mut rows: BTreeMap<usize, Vec<BTreeMap<usize, Scalar>>> = BTreeMap::new();
        if n == 0 {
            return Ok(BTreeMap::new());
        }
        for ((i, m), &(t, _)) in &bases[n] {
            let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (target, w) in &res.differential[n][*i] {
                let j = res.position(target).expect("target enumerated");
                for (l, r, lambda) in w.terms() {
                    if !l.is_vertex() {
                        continue;
                    }
                    let Some(nf) = alg.product(r, m)? else { continue };
                    for (u, mu) in nf.terms() {
                        if let Some(&(_, col)) = bases[n - 1].get(&(j, u.clone())) {
                            let e = row.entry(col).or_insert_with(|| field.zero());
                            *e += &(lambda * mu);
                        }
                    }
                }
            }
            row.retain(|_, v| !v.is_zero());
            rows.entry(t).or_default().push(row);
        }
        Ok(rows.into_iter().map(|(t, r)| (t, sparse_rank(field, r))).collect())
    };
    let mut out = Vec::new();
    for n in 0..=top {
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        for &(t, _) in bases[n].values() {
            *dims.entry(t).or_default() += 1;
        }
        let out_rank = rank_of(n)?;
        let in_rank = if n < res.differential.len() - 1 { rank_of(n + 1)? } else { BTreeMap::new() };
        let h = dims
            .into_iter()
            .map(|(t, k)| (t, k - out_rank.get(&t).unwrap_or(&0) - in_rank.get(&t).unwrap_or(&0)))
            .filter(|&(_, h)| h > 0)
            .collect();
        out.push(h);
    }
    Ok(out)
}
