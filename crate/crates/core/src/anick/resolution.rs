//! The two-sided Anick resolution: chains as free generators and the Morse
//! differential of the bar complex restricted to them.

use std::collections::HashMap;

use super::bar::{bar_differential, BarCell, BarComplex};
use crate::bimodule::{image_add, image_add_all, weight_then_image, Algebra, BimoduleWeight, Image};
use crate::chains::{enumerate_chains, Chain, UfGraph};
use crate::error::{Error, Result};
use crate::gsb::{Certificate, GroebnerData};
use crate::morse::{BasedComplex, Cell, CellId, MorseEngine};
use crate::pathalg::Quiver;
use crate::scalar::Field;

/// `levels[n]` are the chains of weight `n` (generators of `P_n`) and
/// `differential[n][i]` is `d_n` of `levels[n][i]` in `P_{n−1}`.
#[derive(Clone, Debug)]
pub struct Resolution {
    field: Field,
    pub length: usize,
    pub degree_cap: Option<usize>,
    pub levels: Vec<Vec<Chain>>,
    pub differential: Vec<Vec<Image<Chain>>>,
    /// No chain of weight `length + 1` fits the degree cap, so `P_length`
    /// is the last module.
    pub complete: bool,
    pub homogeneous: bool,
    /// Cells of degree at most this are certified: the cap less the largest
    /// tip degree.
    pub certified_window: Option<usize>,
    index: HashMap<Chain, usize>,
}

impl Resolution {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn position(&self, c: &Chain) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn d(&self, c: &Chain) -> Option<&Image<Chain>> {
        let i = self.position(c)?;
        self.differential.get(c.weight())?.get(i)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, Vec::len)
    }

    pub fn to_based_complex(&self, q: &Quiver) -> BasedComplex {
        let mut x = BasedComplex::new(self.field);
        for (n, level) in self.levels.iter().enumerate() {
            for c in level {
                x.add_cell(
                    n,
                    Cell {
                        label: c.display(q),
                        source: c.source(),
                        target: c.target(),
                    },
                );
            }
        }
        for (n, ims) in self.differential.iter().enumerate() {
            for (i, im) in ims.iter().enumerate() {
                for (t, w) in im {
                    x.add_arrow(n, i, self.index[t], w);
                }
            }
        }
        x
    }

    /// Generators whose `d∘d` is nonzero.
    pub fn check_d_squared(&self, alg: &Algebra) -> Result<Vec<(Chain, Image<Chain>)>> {
        let mut bad = Vec::new();
        for n in 2..self.differential.len() {
            for (i, im) in self.differential[n].iter().enumerate() {
                let dd = apply(im, &mut |t| Ok(self.differential[n - 1][self.index[t]].clone()), alg)?;
                if !dd.is_empty() {
                    bad.push((self.levels[n][i].clone(), dd));
                }
            }
        }
        Ok(bad)
    }
}

pub(crate) fn apply<C: Ord + Clone>(
    element: &Image<C>,
    map: &mut dyn FnMut(&C) -> Result<Image<C>>,
    alg: &Algebra,
) -> Result<Image<C>> {
    let mut out = Image::new();
    for (c, w) in element {
        let part = weight_then_image(w, &map(c)?, alg)?;
        image_add_all(&mut out, &part, None);
    }
    Ok(out)
}

fn differ<C: Ord + Clone>(a: &Image<C>, b: &Image<C>) -> bool {
    let mut diff = a.clone();
    for (c, w) in b {
        image_add(&mut diff, c, &w.neg());
    }
    !diff.is_empty()
}

fn check_cap(g: &GroebnerData, max_degree: Option<usize>) -> Result<()> {
    let Certificate::UpTo(cap) = g.certificate() else {
        return Ok(());
    };
    match max_degree {
        None => Err(Error::CapRequired(format!(
            "the basis is certified through degree {cap}"
        ))),
        Some(d) if d > cap => Err(Error::BeyondCap { degree: d, cap }),
        Some(_) => Ok(()),
    }
}

/// `P_0, …, P_length` restricted to chains of degree at most `max_degree`.
/// A cap is required when the basis is only certified up to a degree, and
/// may not exceed that degree.
pub fn anick_resolution(g: &GroebnerData, length: usize, max_degree: Option<usize>) -> Result<Resolution> {
    Ok(build(g, length, max_degree, false)?.0)
}

/// `f` on every generator: the chain map from the Anick resolution into the
/// bar complex.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub f: Vec<Vec<Image<BarCell>>>,
}

pub fn anick_resolution_with_transfer(
    g: &GroebnerData,
    length: usize,
    max_degree: Option<usize>,
) -> Result<(Resolution, Transfer)> {
    let (res, f) = build(g, length, max_degree, true)?;
    Ok((res, Transfer { f: f.unwrap() }))
}

fn build(
    g: &GroebnerData,
    length: usize,
    max_degree: Option<usize>,
    transfer: bool,
) -> Result<(Resolution, Option<Vec<Vec<Image<BarCell>>>>)> {
    check_cap(g, max_degree)?;
    let q = g.quiver();
    let graph = UfGraph::build(g)?;
    let chains = enumerate_chains(g, &graph, length, max_degree);
    let alg = Algebra::new(g);
    let bar = BarComplex::new(&alg);
    let mut engine = MorseEngine::new(&bar, &alg);
    let index: HashMap<Chain, usize> = chains
        .levels
        .iter()
        .flat_map(|l| l.iter().enumerate().map(|(i, c)| (c.clone(), i)))
        .collect();
    let mut differential = vec![vec![Image::new(); chains.levels[0].len()]];
    for level in &chains.levels[1..] {
        let mut ims = Vec::with_capacity(level.len());
        for c in level {
            let im = engine.d_morse(c)?;
            if let Some(t) = im.keys().find(|t| !index.contains_key(*t)) {
                return Err(Error::Verification(format!(
                    "d of {} reaches {} outside the enumerated chains",
                    c.display(q),
                    t.display(q)
                )));
            }
            ims.push(im);
        }
        differential.push(ims);
    }
    let f = if transfer {
        let mut f = Vec::new();
        for level in &chains.levels {
            f.push(level.iter().map(|c| engine.f(c)).collect::<Result<Vec<_>>>()?);
        }
        Some(f)
    } else {
        None
    };
    let res = Resolution {
        field: g.field(),
        length,
        degree_cap: max_degree,
        levels: chains.levels,
        differential,
        complete: !chains.next_level_nonempty,
        homogeneous: g.is_homogeneous(),
        certified_window: max_degree.map(|d| d.saturating_sub(g.max_tip_degree())),
        index,
    };
    Ok((res, f))
}

/// Checks `g f = 1` and `d f = f d` on every generator, recomputing `g` and
/// the bar differential independently of the run that produced `f`.
pub fn verify_transfer(alg: &Algebra, res: &Resolution, t: &Transfer) -> Result<Vec<String>> {
    let q = alg.quiver();
    let bar = BarComplex::new(alg);
    let mut engine = MorseEngine::new(&bar, alg);
    let mut failures = Vec::new();
    for (n, level) in res.levels.iter().enumerate() {
        for (i, c) in level.iter().enumerate() {
            let fc = &t.f[n][i];
            let gf = apply(fc, &mut |b| Ok((*engine.g(b)?).clone()), alg)?;
            let mut one = Image::new();
            one.insert(
                c.clone(),
                BimoduleWeight::term(q.vertex(c.source()), q.vertex(c.target()), alg.gb.field().one()),
            );
            if differ(&gf, &one) {
                failures.push(format!("g f != 1 at {}", c.display(q)));
            }
            let df = apply(fc, &mut |b| Ok(bar_differential(alg, b)?.into_iter().collect()), alg)?;
            let fd = apply(&res.differential[n][i], &mut |s| Ok(t.f[n - 1][res.index[s]].clone()), alg)?;
            if differ(&df, &fd) {
                failures.push(format!("d f != f d at {}", c.display(q)));
            }
        }
    }
    Ok(failures)
}

/// The explicit cells of `P_n` as ids in [`Resolution::to_based_complex`].
pub fn cell_id(res: &Resolution, c: &Chain) -> Option<CellId> {
    res.position(c).map(|i| (c.weight(), i))
}
