//! Minimality of the resolution: directly from the scalar entries of the
//! differential, and through the combinatorial reduction-path criterion.

use std::collections::{HashMap, HashSet, VecDeque};

use super::resolution::Resolution;
use crate::chains::{Chain, ChainSet};
use crate::gsb::GroebnerData;
use crate::morse::BasedComplex;
use crate::pathalg::Path;
use crate::scalar::Scalar;

/// A nonzero entry of `d ⊗_{A^e} E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarEntry {
    pub degree: usize,
    pub source: usize,
    pub target: usize,
    pub coefficient: Scalar,
}

/// Every nonzero scalar entry of every differential. The complex is minimal
/// iff this is empty.
pub fn scalar_entries(x: &BasedComplex) -> Vec<ScalarEntry> {
    let mut out = Vec::new();
    for n in 1..x.len() {
        for (i, j, w) in x.arrows(n) {
            if let Some(c) = w.scalar_part() {
                out.push(ScalarEntry {
                    degree: n,
                    source: i,
                    target: j,
                    coefficient: c,
                });
            }
        }
    }
    out
}

/// A scalar entry of the resolution in chain terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub source: Chain,
    pub target: Chain,
    pub coefficient: Scalar,
}

pub fn minimality_direct(res: &Resolution) -> Vec<Witness> {
    let mut out = Vec::new();
    for (n, ims) in res.differential.iter().enumerate() {
        for (i, im) in ims.iter().enumerate() {
            for (t, w) in im {
                if let Some(c) = w.scalar_part() {
                    out.push(Witness {
                        source: res.levels[n][i].clone(),
                        target: t.clone(),
                        coefficient: c,
                    });
                }
            }
        }
    }
    out
}

/// The criterion's verdict on the chains of one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Weight at most two, where the criterion always holds.
    Unconditional,
    /// Homogeneous, and no chain of one weight lower shares a degree.
    ByDegree,
    /// No chain word reduces to the word of a chain of one weight lower.
    Holds,
    /// `source`'s word reduces to `target`'s word through `steps`.
    Fails { source: Chain, target: Chain, steps: Vec<Path> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

/// Words reachable from `start` by one or more elementary reductions
/// `u·tip(g)·v → u·p·v`, `p` a non-tip monomial of `g`, with parent links.
fn reachable(g: &GroebnerData, start: &Path) -> HashMap<Path, Path> {
    let q = g.quiver();
    let mut parent: HashMap<Path, Path> = HashMap::new();
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        for (b, tip) in g.basis().iter().zip(g.tips()) {
            for at in w.occurrences(tip.arrows()).collect::<Vec<_>>() {
                let left = q.factor(&w, 0, at);
                let right = q.factor(&w, at + tip.len(), w.len());
                for (p, _) in b.terms().filter(|(p, _)| *p != tip) {
                    let next = left.compose(p).and_then(|lp| lp.compose(&right)).expect("reduction composes");
                    if !parent.contains_key(&next) && next != *start {
                        parent.insert(next.clone(), w.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    parent
}

/// For each weight `n` of the chain set, whether any chain word reduces to
/// the word of a chain of weight `n − 1`.
pub fn minimality_criterion(g: &GroebnerData, chains: &ChainSet) -> Vec<Verdict> {
    let q = g.quiver();
    let mut out = Vec::new();
    for (n, level) in chains.levels.iter().enumerate() {
        if n <= 2 {
            out.push(Verdict::Unconditional);
            continue;
        }
        let lower = &chains.levels[n - 1];
        if g.is_homogeneous() {
            let degrees: HashSet<usize> = lower.iter().map(Chain::degree).collect();
            if level.iter().all(|c| !degrees.contains(&c.degree())) {
                out.push(Verdict::ByDegree);
                continue;
            }
        }
        let targets: Vec<(Path, &Chain)> = lower.iter().map(|c| (c.word(q), c)).collect();
        let mut verdict = Verdict::Holds;
        'chains: for c in level {
            let start = c.word(q);
            let parent = reachable(g, &start);
            for (w, t) in &targets {
                if w.len() > start.len() {
                    continue;
                }
                if parent.contains_key(w) {
                    let mut steps = vec![w.clone()];
                    while let Some(p) = parent.get(steps.last().unwrap()) {
                        steps.push(p.clone());
                    }
                    steps.reverse();
                    verdict = Verdict::Fails {
                        source: c.clone(),
                        target: (*t).clone(),
                        steps,
                    };
                    break 'chains;
                }
            }
        }
        out.push(verdict);
    }
    out
}
