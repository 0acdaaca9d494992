//! Algebraic Morse theory on based complexes of rank-one free bimodules.
//!
//! A matched arrow `u → t` with weight `λ·(1⊗1)` is reversed into a dotted
//! arrow `t ⇢ u` of weight `−λ⁻¹`. The reduced differential and the transfer
//! maps are sums over zigzag paths; [`MorseEngine`] evaluates them through
//! memoized recursions that rewrite each non-critical cell in terms of
//! critical ones.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::rc::Rc;

use crate::bimodule::{image_add, image_add_all, weight_then_image, Algebra, BimoduleWeight, Image};
use crate::error::{Error, Result};
use crate::pathalg::Path;
use crate::scalar::{Field, Scalar};

/// The role of a cell under a matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role<C> {
    Critical,
    /// Target of a matched arrow `partner → self` of weight `λ·(1⊗1)`.
    Lower { partner: C, lambda: Scalar },
    /// Source of a matched arrow `self → partner`.
    Upper { partner: C },
}

/// A based complex together with a matching, queried cell by cell.
pub trait MatchedComplex {
    type Cell: Clone + Ord + Eq + Hash + Debug;

    /// Arrows out of `c`, one combined weight per target.
    fn boundary(&self, c: &Self::Cell) -> Result<Vec<(Self::Cell, BimoduleWeight)>>;

    fn role(&self, c: &Self::Cell) -> Result<Role<Self::Cell>>;

    /// The identity weight `e_s⊗e_t` on the cell's frame.
    fn identity(&self, c: &Self::Cell) -> BimoduleWeight;

    fn label(&self, c: &Self::Cell) -> String;
}

/// Memoized evaluation of `g`, `d^M`, `θ` and `f`.
pub struct MorseEngine<'a, X: MatchedComplex> {
    x: &'a X,
    alg: &'a Algebra<'a>,
    g_memo: HashMap<X::Cell, Rc<Image<X::Cell>>>,
    theta_memo: HashMap<X::Cell, Rc<Image<X::Cell>>>,
    depth: usize,
    max_depth: usize,
}

impl<'a, X: MatchedComplex> MorseEngine<'a, X> {
    pub fn new(x: &'a X, alg: &'a Algebra<'a>) -> Self {
        MorseEngine {
            x,
            alg,
            g_memo: HashMap::new(),
            theta_memo: HashMap::new(),
            depth: 0,
            max_depth: 100_000,
        }
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn algebra(&self) -> &Algebra<'a> {
        self.alg
    }

    fn enter(&mut self, c: &X::Cell) -> Result<()> {
        self.depth += 1;
        if self.depth > self.max_depth {
            self.depth = 0;
            return Err(Error::DepthExceeded(self.x.label(c)));
        }
        Ok(())
    }

    fn lower_parts(
        &self,
        t: &X::Cell,
        partner: &X::Cell,
        lambda: &Scalar,
    ) -> Result<(Scalar, Vec<(X::Cell, BimoduleWeight)>)> {
        let factor = -lambda
            .inverse()
            .ok_or_else(|| Error::InvalidMatching(format!("zero matched weight at {}", self.x.label(t))))?;
        let mut others = Vec::new();
        let mut matched = None;
        for (s, w) in self.x.boundary(partner)? {
            if &s == t {
                matched = Some(w);
            } else {
                others.push((s, w));
            }
        }
        if matched.as_ref().and_then(|w| w.as_scalar_identity()) != Some(lambda) {
            return Err(Error::InvalidMatching(format!(
                "matched arrow {} -> {} does not have weight {lambda}",
                self.x.label(partner),
                self.x.label(t)
            )));
        }
        Ok((factor, others))
    }

    /// `g(t)`: the projection of a generator onto critical cells.
    pub fn g(&mut self, t: &X::Cell) -> Result<Rc<Image<X::Cell>>> {
        if let Some(v) = self.g_memo.get(t) {
            return Ok(Rc::clone(v));
        }
        self.enter(t)?;
        let image = match self.x.role(t)? {
            Role::Critical => {
                let mut im = Image::new();
                im.insert(t.clone(), self.x.identity(t));
                im
            }
            Role::Upper { .. } => Image::new(),
            Role::Lower { partner, lambda } => {
                let (factor, others) = self.lower_parts(t, &partner, &lambda)?;
                let mut im = Image::new();
                for (s, w) in others {
                    let sub = self.g(&s)?;
                    let part = weight_then_image(&w, &sub, self.alg)?;
                    image_add_all(&mut im, &part, Some(&factor));
                }
                im
            }
        };
        self.depth -= 1;
        let rc = Rc::new(image);
        self.g_memo.insert(t.clone(), Rc::clone(&rc));
        Ok(rc)
    }

    /// `d^M(c)` for a critical cell.
    pub fn d_morse(&mut self, c: &X::Cell) -> Result<Image<X::Cell>> {
        let mut out = Image::new();
        for (t, w) in self.x.boundary(c)? {
            let sub = self.g(&t)?;
            let part = weight_then_image(&w, &sub, self.alg)?;
            image_add_all(&mut out, &part, None);
        }
        Ok(out)
    }

    /// `θ(t)`, one degree up.
    pub fn theta(&mut self, t: &X::Cell) -> Result<Rc<Image<X::Cell>>> {
        if let Some(v) = self.theta_memo.get(t) {
            return Ok(Rc::clone(v));
        }
        self.enter(t)?;
        let image = match self.x.role(t)? {
            Role::Lower { partner, lambda } => {
                let (factor, others) = self.lower_parts(t, &partner, &lambda)?;
                let mut im = Image::new();
                im.insert(partner.clone(), self.x.identity(&partner));
                for (s, w) in others {
                    let sub = self.theta(&s)?;
                    let part = weight_then_image(&w, &sub, self.alg)?;
                    image_add_all(&mut im, &part, None);
                }
                let mut scaled = Image::new();
                image_add_all(&mut scaled, &im, Some(&factor));
                scaled
            }
            _ => Image::new(),
        };
        self.depth -= 1;
        let rc = Rc::new(image);
        self.theta_memo.insert(t.clone(), Rc::clone(&rc));
        Ok(rc)
    }

    /// `f(c) = c + Σ w·θ(target)` for a critical cell.
    pub fn f(&mut self, c: &X::Cell) -> Result<Image<X::Cell>> {
        let mut out = Image::new();
        out.insert(c.clone(), self.x.identity(c));
        for (t, w) in self.x.boundary(c)? {
            let sub = self.theta(&t)?;
            let part = weight_then_image(&w, &sub, self.alg)?;
            image_add_all(&mut out, &part, None);
        }
        Ok(out)
    }

    /// Sum over explicitly enumerated zigzag paths from a critical cell, each
    /// path's weight composed from scratch. Slow; an oracle for [`Self::d_morse`].
    pub fn d_morse_brute_force(&self, c: &X::Cell, max_paths: usize) -> Result<Image<X::Cell>> {
        let mut out = Image::new();
        let mut count = 0;
        let mut stack: Vec<(X::Cell, BimoduleWeight)> = self.x.boundary(c)?;
        while let Some((t, acc)) = stack.pop() {
            count += 1;
            if count > max_paths {
                return Err(Error::DepthExceeded(format!(
                    "more than {max_paths} zigzag paths from {}",
                    self.x.label(c)
                )));
            }
            match self.x.role(&t)? {
                Role::Critical => image_add(&mut out, &t, &acc),
                Role::Upper { .. } => {}
                Role::Lower { partner, lambda } => {
                    let (factor, others) = self.lower_parts(&t, &partner, &lambda)?;
                    let dotted = acc.scaled(&factor);
                    for (s, w) in others {
                        stack.push((s, dotted.then(&w, self.alg)?));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A cell of an explicit complex: a label and its vertex frame `(s, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub source: u32,
    pub target: u32,
}

/// `(homological degree, index)`.
pub type CellId = (usize, usize);

/// Cells per homological degree and weighted arrows `(n, i) → (n−1, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    field: Field,
    cells: Vec<Vec<Cell>>,
    /// `arrows[n]` maps `(i, j)` to the weight of `(n, i) → (n−1, j)`.
    arrows: Vec<BTreeMap<(usize, usize), BimoduleWeight>>,
}

impl BasedComplex {
    pub fn new(field: Field) -> BasedComplex {
        BasedComplex {
            field,
            cells: Vec::new(),
            arrows: Vec::new(),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `e_s⊗e_t` on the cell's frame.
    pub fn identity(&self, id: CellId) -> BimoduleWeight {
        let cell = self.cell(id);
        BimoduleWeight::term(Path::trivial(cell.source), Path::trivial(cell.target), self.field.one())
    }

    fn ensure_degree(&mut self, n: usize) {
        while self.cells.len() <= n {
            self.cells.push(Vec::new());
            self.arrows.push(BTreeMap::new());
        }
    }

    pub fn add_cell(&mut self, n: usize, cell: Cell) -> usize {
        self.ensure_degree(n);
        self.cells[n].push(cell);
        self.cells[n].len() - 1
    }

    /// Adds to the weight of `(n, from) → (n−1, to)`.
    pub fn add_arrow(&mut self, n: usize, from: usize, to: usize, w: &BimoduleWeight) {
        assert!(n >= 1, "arrows leave positive degrees");
        self.ensure_degree(n);
        assert!(from < self.cells[n].len() && to < self.cells[n - 1].len(), "arrow endpoints exist");
        let entry = self.arrows[n].entry((from, to)).or_default();
        entry.add_assign(w);
        if entry.is_zero() {
            self.arrows[n].remove(&(from, to));
        }
    }

    /// Number of degrees (top degree plus one).
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self, n: usize) -> &[Cell] {
        self.cells.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell(&self, id: CellId) -> &Cell {
        &self.cells[id.0][id.1]
    }

    pub fn arrows(&self, n: usize) -> impl Iterator<Item = (usize, usize, &BimoduleWeight)> {
        self.arrows
            .get(n)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&(i, j), w)| (i, j, w)))
    }

    pub fn arrow(&self, n: usize, from: usize, to: usize) -> Option<&BimoduleWeight> {
        self.arrows.get(n)?.get(&(from, to))
    }

    pub fn boundary_of(&self, id: CellId) -> Vec<(CellId, BimoduleWeight)> {
        let (n, i) = id;
        match self.arrows.get(n) {
            None => Vec::new(),
            Some(m) => m
                .range((i, 0)..=(i, usize::MAX))
                .map(|(&(_, j), w)| ((n - 1, j), w.clone()))
                .collect(),
        }
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Cells whose `d∘d` is nonzero, with the offending image.
    pub fn check_d_squared(&self, alg: &Algebra) -> Result<Vec<(CellId, Image<CellId>)>> {
        let mut bad = Vec::new();
        for n in 2..self.len() {
            for i in 0..self.cells[n].len() {
                let mut acc = Image::new();
                for (t, w) in self.boundary_of((n, i)) {
                    let mut inner = Image::new();
                    for (s, v) in self.boundary_of(t) {
                        inner.insert(s, v);
                    }
                    let part = weight_then_image(&w, &inner, alg)?;
                    image_add_all(&mut acc, &part, None);
                }
                if !acc.is_empty() {
                    bad.push(((n, i), acc));
                }
            }
        }
        Ok(bad)
    }
}

/// A set of arrows `(degree of source, source index, target index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialMatching {
    pub arrows: BTreeSet<(usize, usize, usize)>,
}

impl PartialMatching {
    pub fn new() -> PartialMatching {
        PartialMatching::default()
    }

    pub fn insert(&mut self, n: usize, from: usize, to: usize) {
        self.arrows.insert((n, from, to));
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingViolation {
    /// The matched arrow is not an arrow of the complex.
    MissingArrow { degree: usize, from: usize, to: usize },
    /// A cell lies on two matched arrows (M1).
    SharedCell { cell: CellId },
    /// A matched weight is not a nonzero scalar multiple of `1⊗1` (M2).
    WeightNotScalar { degree: usize, from: usize, to: usize },
}

/// Checks (M1) and the scalar restriction of (M2).
pub fn validate_matching(x: &BasedComplex, m: &PartialMatching) -> Vec<MatchingViolation> {
    let mut out = Vec::new();
    let mut used: BTreeMap<CellId, usize> = BTreeMap::new();
    for &(n, from, to) in &m.arrows {
        match x.arrow(n, from, to) {
            None => {
                out.push(MatchingViolation::MissingArrow { degree: n, from, to });
                continue;
            }
            Some(w) => {
                if w.as_scalar_identity().is_none() {
                    out.push(MatchingViolation::WeightNotScalar { degree: n, from, to });
                }
            }
        }
        *used.entry((n, from)).or_default() += 1;
        *used.entry((n - 1, to)).or_default() += 1;
    }
    for (cell, count) in used {
        if count > 1 {
            out.push(MatchingViolation::SharedCell { cell });
        }
    }
    out
}

/// An explicit complex with a validated matching.
pub struct ExplicitMatched<'a> {
    pub complex: &'a BasedComplex,
    roles: HashMap<CellId, Role<CellId>>,
}

impl<'a> ExplicitMatched<'a> {
    pub fn new(complex: &'a BasedComplex, m: &PartialMatching) -> Result<ExplicitMatched<'a>> {
        if let Some(v) = validate_matching(complex, m).first() {
            return Err(Error::InvalidMatching(format!("{v:?}")));
        }
        let mut roles = HashMap::new();
        for &(n, from, to) in &m.arrows {
            let lambda = complex
                .arrow(n, from, to)
                .and_then(|w| w.as_scalar_identity())
                .cloned()
                .expect("validated");
            roles.insert((n - 1, to), Role::Lower { partner: (n, from), lambda });
            roles.insert((n, from), Role::Upper { partner: (n - 1, to) });
        }
        Ok(ExplicitMatched { complex, roles })
    }

    pub fn critical_cells(&self, n: usize) -> Vec<usize> {
        (0..self.complex.cells(n).len())
            .filter(|&i| !self.roles.contains_key(&(n, i)))
            .collect()
    }
}

impl MatchedComplex for ExplicitMatched<'_> {
    type Cell = CellId;

    fn boundary(&self, c: &CellId) -> Result<Vec<(CellId, BimoduleWeight)>> {
        Ok(self.complex.boundary_of(*c))
    }

    fn role(&self, c: &CellId) -> Result<Role<CellId>> {
        Ok(self.roles.get(c).cloned().unwrap_or(Role::Critical))
    }

    fn identity(&self, c: &CellId) -> BimoduleWeight {
        self.complex.identity(*c)
    }

    fn label(&self, c: &CellId) -> String {
        format!("{} (degree {})", self.complex.cell(*c).label, c.0)
    }
}

/// Outcome of the finiteness check on zigzag paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorseCheck {
    Morse,
    /// A zigzag cycle through these lower cells.
    NotMorse(Vec<CellId>),
    Inconclusive,
}

/// Zigzag paths `t ⇢ u → t'` between lower cells of the same degree must be
/// finite: searches the induced digraph for a cycle.
pub fn check_morse(x: &BasedComplex, m: &PartialMatching, depth_limit: Option<usize>) -> MorseCheck {
    let mut partner: BTreeMap<CellId, usize> = BTreeMap::new();
    for &(n, from, to) in &m.arrows {
        partner.insert((n - 1, to), from);
    }
    let successors = |t: &CellId| -> Vec<CellId> {
        let Some(&u) = partner.get(t) else {
            return Vec::new();
        };
        x.boundary_of((t.0 + 1, u))
            .into_iter()
            .map(|(s, _)| s)
            .filter(|s| s != t && partner.contains_key(s))
            .collect()
    };
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut mark: BTreeMap<CellId, Mark> = BTreeMap::new();
    let mut inconclusive = false;
    for root in partner.keys() {
        if mark.contains_key(root) {
            continue;
        }
        let n = root.0;
        let limit = depth_limit
            .unwrap_or_else(|| 10 * (x.cells(n).len() + x.cells(n + 1).len()))
            .max(1);
        let mut stack: Vec<(CellId, Vec<CellId>)> = vec![(*root, successors(root))];
        mark.insert(*root, Mark::Open);
        while let Some((t, pending)) = stack.last_mut() {
            match pending.pop() {
                Some(s) => match mark.get(&s) {
                    None => {
                        if stack.len() >= limit {
                            inconclusive = true;
                            continue;
                        }
                        mark.insert(s, Mark::Open);
                        let next = successors(&s);
                        stack.push((s, next));
                    }
                    Some(Mark::Open) => {
                        let pos = stack.iter().position(|(c, _)| *c == s).unwrap();
                        return MorseCheck::NotMorse(stack[pos..].iter().map(|(c, _)| *c).collect());
                    }
                    Some(Mark::Done) => {}
                },
                None => {
                    mark.insert(*t, Mark::Done);
                    stack.pop();
                }
            }
        }
    }
    if inconclusive {
        MorseCheck::Inconclusive
    } else {
        MorseCheck::Morse
    }
}

/// The reduced complex and the transfer maps, in the original cell ids.
#[derive(Clone, Debug)]
pub struct MorseResult {
    /// Critical cell indices per degree.
    pub critical: Vec<Vec<usize>>,
    /// The reduced complex on the critical cells, re-indexed per degree.
    pub reduced: BasedComplex,
    /// `f` on each critical cell.
    pub f: Vec<Vec<Image<CellId>>>,
    /// `g` on every cell.
    pub g: Vec<Vec<Image<CellId>>>,
    /// `θ` on every cell.
    pub theta: Vec<Vec<Image<CellId>>>,
}

/// Runs the engine on an explicit complex. The matching must be Morse.
pub fn morse_reduce(x: &BasedComplex, m: &PartialMatching, alg: &Algebra) -> Result<MorseResult> {
    match check_morse(x, m, None) {
        MorseCheck::Morse => {}
        MorseCheck::NotMorse(cycle) => {
            return Err(Error::NotMorse(format!(
                "zigzag cycle through {}",
                cycle
                    .iter()
                    .map(|c| x.cell(*c).label.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
        MorseCheck::Inconclusive => {
            return Err(Error::NotMorse("zigzag search exhausted its depth limit".into()))
        }
    }
    let em = ExplicitMatched::new(x, m)?;
    let mut engine = MorseEngine::new(&em, alg);
    let critical: Vec<Vec<usize>> = (0..x.len()).map(|n| em.critical_cells(n)).collect();
    let mut reduced = BasedComplex::new(x.field());
    let mut position: HashMap<CellId, usize> = HashMap::new();
    for (n, crit) in critical.iter().enumerate() {
        reduced.ensure_degree(n);
        for &i in crit {
            let idx = reduced.add_cell(n, x.cell((n, i)).clone());
            position.insert((n, i), idx);
        }
    }
    let mut f = Vec::new();
    for (n, crit) in critical.iter().enumerate() {
        let mut fs = Vec::new();
        for &i in crit {
            if n > 0 {
                for (t, w) in engine.d_morse(&(n, i))? {
                    reduced.add_arrow(n, position[&(n, i)], position[&t], &w);
                }
            }
            fs.push(engine.f(&(n, i))?);
        }
        f.push(fs);
    }
    let mut g = Vec::new();
    let mut theta = Vec::new();
    for n in 0..x.len() {
        let mut gs = Vec::new();
        let mut ts = Vec::new();
        for i in 0..x.cells(n).len() {
            gs.push((*engine.g(&(n, i))?).clone());
            ts.push((*engine.theta(&(n, i))?).clone());
        }
        g.push(gs);
        theta.push(ts);
    }
    Ok(MorseResult {
        critical,
        reduced,
        f,
        g,
        theta,
    })
}

fn apply(
    element: &Image<CellId>,
    map: &dyn Fn(CellId) -> Image<CellId>,
    alg: &Algebra,
) -> Result<Image<CellId>> {
    let mut out = Image::new();
    for (c, w) in element {
        let part = weight_then_image(w, &map(*c), alg)?;
        image_add_all(&mut out, &part, None);
    }
    Ok(out)
}

fn differ(a: &Image<CellId>, b: &Image<CellId>) -> bool {
    let mut diff = a.clone();
    for (c, w) in b {
        image_add(&mut diff, c, &w.neg());
    }
    !diff.is_empty()
}

/// Checks `(d^M)² = 0`, `d f = f d^M`, `d^M g = g d`, `g f = 1` and
/// `f g − 1 = dθ + θd` on every generator. Returns one line per failure.
pub fn verify_equivalence(x: &BasedComplex, r: &MorseResult, alg: &Algebra) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let id_of = |c: CellId| -> Image<CellId> {
        let mut im = Image::new();
        im.insert(c, x.identity(c));
        im
    };
    let d = |c: CellId| -> Image<CellId> { x.boundary_of(c).into_iter().collect() };
    let crit_pos: HashMap<CellId, usize> = r
        .critical
        .iter()
        .enumerate()
        .flat_map(|(n, v)| v.iter().enumerate().map(move |(k, &i)| ((n, i), k)))
        .collect();
    // d^M on original critical ids
    let dm = |c: CellId| -> Image<CellId> {
        let k = crit_pos[&c];
        if c.0 == 0 {
            return Image::new();
        }
        r.reduced
            .boundary_of((c.0, k))
            .into_iter()
            .map(|((m, j), w)| ((m, r.critical[m][j]), w))
            .collect()
    };
    let f = |c: CellId| -> Image<CellId> { r.f[c.0][crit_pos[&c]].clone() };
    let g = |c: CellId| -> Image<CellId> { r.g[c.0][c.1].clone() };
    let theta = |c: CellId| -> Image<CellId> { r.theta[c.0][c.1].clone() };
    for (n, crit) in r.critical.iter().enumerate() {
        for &i in crit {
            let c = (n, i);
            let label = &x.cell(c).label;
            if !apply(&dm(c), &dm, alg)?.is_empty() {
                failures.push(format!("d^M d^M != 0 at {label}"));
            }
            if differ(&apply(&f(c), &d, alg)?, &apply(&dm(c), &f, alg)?) {
                failures.push(format!("d f != f d^M at {label}"));
            }
            if differ(&apply(&f(c), &g, alg)?, &id_of(c)) {
                failures.push(format!("g f != 1 at {label}"));
            }
        }
    }
    for n in 0..x.len() {
        for i in 0..x.cells(n).len() {
            let c = (n, i);
            let label = &x.cell(c).label;
            if differ(&apply(&g(c), &dm, alg)?, &apply(&d(c), &g, alg)?) {
                failures.push(format!("d^M g != g d at {label}"));
            }
            let mut lhs = apply(&g(c), &f, alg)?;
            image_add_all(&mut lhs, &id_of(c), Some(&-x.field().one()));
            let mut rhs = apply(&theta(c), &d, alg)?;
            image_add_all(&mut rhs, &apply(&d(c), &theta, alg)?, None);
            if differ(&lhs, &rhs) {
                failures.push(format!("f g - 1 != d theta + theta d at {label}"));
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsb::{GroebnerData, Presentation};

    fn cell(label: &str) -> Cell {
        Cell {
            label: label.into(),
            source: 0,
            target: 0,
        }
    }

    fn scalar_weight(c: i64) -> BimoduleWeight {
        let e = Path::trivial(0);
        BimoduleWeight::term(e.clone(), e, Field::Rational.from_i64(c))
    }

    fn ground() -> GroebnerData {
        GroebnerData::new(&Presentation::free(Field::Rational, &[]).unwrap()).unwrap()
    }

    /// Two cells in degree 1 and two in degree 0, all four arrows of weight 1.
    fn square() -> BasedComplex {
        let mut x = BasedComplex::new(Field::Rational);
        x.add_cell(0, cell("c1"));
        x.add_cell(0, cell("c2"));
        x.add_cell(1, cell("u1"));
        x.add_cell(1, cell("u2"));
        for u in 0..2 {
            for c in 0..2 {
                x.add_arrow(1, u, c, &scalar_weight(1));
            }
        }
        x
    }

    #[test]
    fn empty_matching_is_the_identity() {
        let p = Presentation::free(Field::Rational, &["x"]).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let alg = Algebra::new(&g);
        let mut x = BasedComplex::new(Field::Rational);
        x.add_cell(0, cell("e"));
        x.add_cell(1, cell("x"));
        let e = Path::trivial(0);
        let mut w = BimoduleWeight::term(p.path("x"), e.clone(), Field::Rational.one());
        w.add_term(e, p.path("x"), Field::Rational.from_i64(-1));
        x.add_arrow(1, 0, 0, &w);
        let m = PartialMatching::new();
        assert_eq!(check_morse(&x, &m, None), MorseCheck::Morse);
        let r = morse_reduce(&x, &m, &alg).unwrap();
        assert_eq!(r.reduced, x);
        assert_eq!(r.f[1][0], [((1, 0), x.identity((1, 0)))].into_iter().collect());
        assert!(r.theta.iter().flatten().all(|t| t.is_empty()));
        assert!(verify_equivalence(&x, &r, &alg).unwrap().is_empty());
    }

    #[test]
    fn matching_violations() {
        let x = square();
        let mut m = PartialMatching::new();
        m.insert(1, 0, 0);
        m.insert(1, 1, 0);
        assert!(validate_matching(&x, &m).contains(&MatchingViolation::SharedCell { cell: (0, 0) }));

        let p = Presentation::free(Field::Rational, &["a"]).unwrap();
        let mut y = BasedComplex::new(Field::Rational);
        y.add_cell(0, cell("t"));
        y.add_cell(1, cell("u"));
        y.add_arrow(1, 0, 0, &BimoduleWeight::term(p.path("a"), Path::trivial(0), Field::Rational.one()));
        let mut m = PartialMatching::new();
        m.insert(1, 0, 0);
        assert_eq!(
            validate_matching(&y, &m),
            vec![MatchingViolation::WeightNotScalar { degree: 1, from: 0, to: 0 }]
        );
        let mut m = PartialMatching::new();
        m.insert(1, 0, 1);
        assert!(matches!(validate_matching(&y, &m)[0], MatchingViolation::MissingArrow { .. }));
    }

    #[test]
    fn zigzag_loop_is_not_morse() {
        let x = square();
        let mut m = PartialMatching::new();
        m.insert(1, 0, 0);
        m.insert(1, 1, 1);
        assert!(validate_matching(&x, &m).is_empty());
        match check_morse(&x, &m, None) {
            MorseCheck::NotMorse(cycle) => {
                let mut cycle = cycle;
                cycle.sort();
                assert_eq!(cycle, vec![(0, 0), (0, 1)]);
            }
            other => panic!("expected a cycle, got {other:?}"),
        }
        let g = ground();
        let alg = Algebra::new(&g);
        assert!(matches!(morse_reduce(&x, &m, &alg), Err(Error::NotMorse(_))));
        let em = ExplicitMatched::new(&x, &m).unwrap();
        let mut engine = MorseEngine::new(&em, &alg).with_max_depth(50);
        assert!(matches!(engine.g(&(0, 0)), Err(Error::DepthExceeded(_))));
    }

    #[test]
    fn cancelling_a_pair_transfers_by_the_negative_inverse() {
        // u -> t with weight 2, c -> t with weight 3; matching u -> t.
        let mut x = BasedComplex::new(Field::Rational);
        x.add_cell(0, cell("t"));
        x.add_cell(1, cell("u"));
        x.add_cell(1, cell("c"));
        x.add_arrow(1, 0, 0, &scalar_weight(2));
        x.add_arrow(1, 1, 0, &scalar_weight(3));
        let mut m = PartialMatching::new();
        m.insert(1, 0, 0);
        let g = ground();
        let alg = Algebra::new(&g);
        let r = morse_reduce(&x, &m, &alg).unwrap();
        assert_eq!(r.critical, vec![vec![], vec![1]]);
        let q = Field::Rational;
        let expected_theta: Image<CellId> = [(
            (1, 0),
            BimoduleWeight::term(Path::trivial(0), Path::trivial(0), q.parse_scalar("-1/2").unwrap()),
        )]
        .into_iter()
        .collect();
        assert_eq!(r.theta[0][0], expected_theta);
        let f = &r.f[1][0];
        assert_eq!(f[&(1, 0)].as_scalar_identity(), Some(&q.parse_scalar("-3/2").unwrap()));
        assert!(verify_equivalence(&x, &r, &alg).unwrap().is_empty());
    }

    #[test]
    fn memoized_and_enumerated_zigzags_agree() {
        // A path complex with scalar weights: degree 2 cell a, degree 1 cells
        // b1 b2, degree 0 cells c1 c2; match b1 -> c1.
        let mut x = BasedComplex::new(Field::Rational);
        x.add_cell(0, cell("c1"));
        x.add_cell(0, cell("c2"));
        x.add_cell(1, cell("b1"));
        x.add_cell(1, cell("b2"));
        x.add_cell(2, cell("a"));
        x.add_arrow(1, 0, 0, &scalar_weight(1));
        x.add_arrow(1, 0, 1, &scalar_weight(2));
        x.add_arrow(1, 1, 0, &scalar_weight(2));
        x.add_arrow(1, 1, 1, &scalar_weight(4));
        x.add_arrow(2, 0, 0, &scalar_weight(2));
        x.add_arrow(2, 0, 1, &scalar_weight(-1));
        let g = ground();
        let alg = Algebra::new(&g);
        assert!(x.check_d_squared(&alg).unwrap().is_empty());
        let mut m = PartialMatching::new();
        m.insert(1, 0, 0);
        let em = ExplicitMatched::new(&x, &m).unwrap();
        let mut engine = MorseEngine::new(&em, &alg);
        for c in [(1, 1), (2, 0)] {
            assert_eq!(engine.d_morse(&c).unwrap(), engine.d_morse_brute_force(&c, 1000).unwrap());
        }
        // d^M(b2) = (4 - 2·2)·c2 = 0
        assert!(engine.d_morse(&(1, 1)).unwrap().is_empty());
        let r = morse_reduce(&x, &m, &alg).unwrap();
        assert!(verify_equivalence(&x, &r, &alg).unwrap().is_empty());
    }
}
