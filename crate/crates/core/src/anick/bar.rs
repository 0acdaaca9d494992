//! The reduced two-sided bar complex on NonTip sequences and its canonical
//! Morse matching.
//!
//! A bar cell `(w_1, …, w_n)` generates `A e_s ⊗ e_t A` where `s` is the
//! source of `w_1` and `t` the target of `w_n`. Cells reuse [`Chain`]; the
//! chains are exactly the critical cells.

use std::collections::HashMap;

use crate::bimodule::{image_add, Algebra, BimoduleWeight, Image};
use crate::chains::{chain_prefix_len, Chain};
use crate::error::{Error, Result};
use crate::gsb::GroebnerData;
use crate::morse::{BasedComplex, Cell, MatchedComplex, PartialMatching, Role};
use crate::pathalg::Path;
use crate::scalar::{Field, Scalar};

pub type BarCell = Chain;

pub(crate) fn sign(field: Field, k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        field.one()
    } else {
        -field.one()
    }
}

/// The cell on `components`, or the vertex cell `e_v` when there are none.
fn cell_or_vertex(components: Vec<Path>, v: u32) -> BarCell {
    if components.is_empty() {
        Chain::vertex_chain(v)
    } else {
        Chain::new(components)
    }
}

/// Whether every component is a positive-length NonTip path and the
/// components compose.
pub fn is_bar_cell(g: &GroebnerData, c: &BarCell) -> bool {
    let w = c.components();
    w.iter().all(|p| !p.is_vertex() && g.is_nontip(p)) && w.windows(2).all(|pair| pair[0].target() == pair[1].source())
}

/// `d(w_1, …, w_n)`, one combined weight per target. Merges whose product
/// reduces to zero contribute nothing.
pub fn bar_differential(alg: &Algebra, c: &BarCell) -> Result<Vec<(BarCell, BimoduleWeight)>> {
    let w = c.components();
    let n = w.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let q = alg.quiver();
    let field = alg.gb.field();
    let s = q.vertex(c.source());
    let t = q.vertex(c.target());
    let mut out: Image<BarCell> = Image::new();
    image_add(
        &mut out,
        &cell_or_vertex(w[1..].to_vec(), w[0].target()),
        &BimoduleWeight::term(w[0].clone(), t.clone(), field.one()),
    );
    for j in 1..n {
        let nf = alg
            .product(&w[j - 1], &w[j])?
            .expect("bar cell components compose");
        for (u, lambda) in nf.terms() {
            let mut comps = w[..j - 1].to_vec();
            comps.push(u.clone());
            comps.extend_from_slice(&w[j + 1..]);
            image_add(
                &mut out,
                &Chain::new(comps),
                &BimoduleWeight::term(s.clone(), t.clone(), &sign(field, j) * lambda),
            );
        }
    }
    image_add(
        &mut out,
        &cell_or_vertex(w[..n - 1].to_vec(), w[n - 1].source()),
        &BimoduleWeight::term(s, w[n - 1].clone(), sign(field, n)),
    );
    Ok(out.into_iter().collect())
}

/// The index `i` with the cell in `V_{w,i}`: one less than the length of
/// the longest chain prefix.
pub fn classification_index(g: &GroebnerData, c: &BarCell) -> isize {
    chain_prefix_len(g, c.components()) as isize - 1
}

/// The role of a bar cell under the canonical matching.
///
/// With `(w_1, …, w_{i+1})` the longest chain prefix and `i < n − 1`: if
/// `w_{i+1} w_{i+2}` is NonTip the cell is matched up to the merge;
/// otherwise it is matched down from the split `w_{i+2} = w′w″` with `w′`
/// the shortest prefix completing an edge, with weight `(−1)^{i+2}`.
pub fn canonical_role(g: &GroebnerData, c: &BarCell) -> Role<BarCell> {
    let w = c.components();
    let n = w.len();
    let m = chain_prefix_len(g, w);
    if m == n {
        return Role::Critical;
    }
    let q = g.quiver();
    let split = |k: usize, at: usize| -> Vec<Path> {
        let v = &w[k];
        let mut comps = w[..k].to_vec();
        comps.push(q.factor(v, 0, at));
        comps.push(q.factor(v, at, v.len()));
        comps.extend_from_slice(&w[k + 1..]);
        comps
    };
    if m == 0 {
        return Role::Lower {
            partner: Chain::new(split(0, 1)),
            lambda: sign(g.field(), 1),
        };
    }
    let u = &w[m - 1];
    let v = &w[m];
    let uv = u.compose(v).expect("bar cell components compose");
    if g.is_nontip(&uv) {
        let mut comps = w[..m - 1].to_vec();
        comps.push(uv);
        comps.extend_from_slice(&w[m + 1..]);
        return Role::Upper {
            partner: Chain::new(comps),
        };
    }
    let at = (1..v.len())
        .find(|&k| !g.is_nontip(&u.compose(&q.factor(v, 0, k)).expect("composes")))
        .expect("a proper prefix completes the edge");
    Role::Lower {
        partner: Chain::new(split(m, at)),
        lambda: sign(g.field(), m + 1),
    }
}

/// The bar complex queried lazily, cell by cell.
pub struct BarComplex<'a> {
    alg: &'a Algebra<'a>,
}

impl<'a> BarComplex<'a> {
    pub fn new(alg: &'a Algebra<'a>) -> BarComplex<'a> {
        BarComplex { alg }
    }
}

impl MatchedComplex for BarComplex<'_> {
    type Cell = BarCell;

    fn boundary(&self, c: &BarCell) -> Result<Vec<(BarCell, BimoduleWeight)>> {
        bar_differential(self.alg, c)
    }

    fn role(&self, c: &BarCell) -> Result<Role<BarCell>> {
        Ok(canonical_role(self.alg.gb, c))
    }

    fn identity(&self, c: &BarCell) -> BimoduleWeight {
        let q = self.alg.quiver();
        BimoduleWeight::term(q.vertex(c.source()), q.vertex(c.target()), self.alg.gb.field().one())
    }

    fn label(&self, c: &BarCell) -> String {
        c.display(self.alg.quiver())
    }
}

/// Bar cells of degree at most `max_degree`, grouped by weight and sorted
/// canonically.
pub fn bar_cells(g: &GroebnerData, max_degree: usize) -> Vec<Vec<BarCell>> {
    let q = g.quiver();
    let mut starting_at: HashMap<u32, Vec<Path>> = HashMap::new();
    for d in 1..=max_degree {
        for p in g.nontips_of_degree(d) {
            starting_at.entry(p.source()).or_default().push(p);
        }
    }
    let mut levels: Vec<Vec<BarCell>> = vec![(0..q.vertex_count() as u32).map(Chain::vertex_chain).collect()];
    let mut frontier: Vec<(Vec<Path>, u32, usize)> = (0..q.vertex_count() as u32).map(|v| (Vec::new(), v, 0)).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (comps, end, degree) in &frontier {
            for p in starting_at.get(end).into_iter().flatten() {
                if degree + p.len() <= max_degree {
                    let mut c = comps.clone();
                    c.push(p.clone());
                    next.push((c, p.target(), degree + p.len()));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let mut level: Vec<BarCell> = next.iter().map(|(c, _, _)| Chain::new(c.clone())).collect();
        level.sort();
        levels.push(level);
        frontier = next;
    }
    levels
}

/// An explicitly built truncation of the bar complex with the canonical
/// matching on it.
pub struct ExplicitBar {
    pub cells: Vec<Vec<BarCell>>,
    pub complex: BasedComplex,
    pub matching: PartialMatching,
    index: HashMap<BarCell, (usize, usize)>,
}

impl ExplicitBar {
    pub fn position(&self, c: &BarCell) -> Option<(usize, usize)> {
        self.index.get(c).copied()
    }
}

/// Materializes every bar cell of degree at most `max_degree`. The cells span
/// a subcomplex since no bar arrow raises the degree, and matched pairs share
/// their word, so the matching restricts to it.
pub fn materialize(alg: &Algebra, max_degree: usize) -> Result<ExplicitBar> {
    let g = alg.gb;
    let q = alg.quiver();
    let cells = bar_cells(g, max_degree);
    let mut complex = BasedComplex::new(g.field());
    let mut index = HashMap::new();
    for (n, level) in cells.iter().enumerate() {
        for c in level {
            let i = complex.add_cell(
                n,
                Cell {
                    label: c.display(q),
                    source: c.source(),
                    target: c.target(),
                },
            );
            index.insert(c.clone(), (n, i));
        }
    }
    let mut matching = PartialMatching::new();
    for (n, level) in cells.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            for (t, w) in bar_differential(alg, c)? {
                let (_, j) = index.get(&t).copied().ok_or_else(|| {
                    Error::Verification(format!("bar arrow leaves the truncation at {}", t.display(q)))
                })?;
                complex.add_arrow(n, i, j, &w);
            }
            if let Role::Lower { partner, .. } = canonical_role(g, c) {
                let (m, k) = index.get(&partner).copied().ok_or_else(|| {
                    Error::Verification(format!("matched partner outside the truncation at {}", c.display(q)))
                })?;
                debug_assert_eq!(m, n + 1);
                matching.insert(m, k, i);
            }
        }
    }
    Ok(ExplicitBar {
        cells,
        complex,
        matching,
        index,
    })
}
