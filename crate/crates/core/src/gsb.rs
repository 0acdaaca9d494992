//! Presentations, normal forms modulo a Gröbner–Shirshov basis, reducedness
//! checks and bounded overlap verification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::pathalg::{Arrow, FreeElement, Path, Quiver};
use crate::scalar::{Field, Scalar};

/// An element supported on NonTip monomials.
pub type NormalForm = FreeElement;

/// A quiver with relations over a field. The quiver is canonical: its arrows
/// are stored in precedence order, highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub field: Field,
    pub relations: Vec<FreeElement>,
    /// An explicit Gröbner–Shirshov basis, verified on construction.
    pub basis: Option<Vec<FreeElement>>,
    pub degree_cap: Option<usize>,
    /// The explicit basis is a truncation of a known infinite family.
    pub family_closed: bool,
}

impl Presentation {
    /// Builds the canonical quiver. `order` lists every arrow name, highest
    /// precedence first.
    pub fn new(
        field: Field,
        vertices: &[&str],
        arrows: &[(&str, &str, &str)],
        order: &[&str],
    ) -> Result<Presentation> {
        let declared = Quiver::from_labels(vertices, arrows)?;
        let mut seen = BTreeSet::new();
        let mut canonical = Vec::with_capacity(order.len());
        for name in order {
            let id = declared.arrow_id(name).ok_or_else(|| {
                Error::InvalidPresentation(format!("order names unknown arrow `{name}`"))
            })?;
            if !seen.insert(id) {
                return Err(Error::InvalidPresentation(format!(
                    "arrow `{name}` repeated in order"
                )));
            }
            canonical.push(declared.arrow(id).clone());
        }
        if canonical.len() != declared.arrow_count() {
            return Err(Error::InvalidPresentation(
                "order must list every arrow exactly once".into(),
            ));
        }
        let quiver = Quiver::new(declared.vertices().to_vec(), canonical)?;
        Ok(Presentation {
            quiver,
            field,
            relations: Vec::new(),
            basis: None,
            degree_cap: None,
            family_closed: false,
        })
    }

    /// A one-vertex presentation with arrows in precedence order.
    pub fn free(field: Field, names: &[&str]) -> Result<Presentation> {
        let arrows: Vec<(&str, &str, &str)> = names.iter().map(|n| (*n, "1", "1")).collect();
        Presentation::new(field, &["1"], &arrows, names)
    }

    pub fn element(&self, text: &str) -> Result<FreeElement> {
        self.quiver.parse_element(self.field, text)
    }

    pub fn add_relation(&mut self, r: FreeElement) -> Result<()> {
        validate_relation(&self.quiver, &r)?;
        self.relations.push(r);
        Ok(())
    }

    pub fn with_relations(mut self, texts: &[&str]) -> Result<Presentation> {
        for t in texts {
            let r = self.element(t)?;
            self.add_relation(r)?;
        }
        Ok(self)
    }

    pub fn with_basis(mut self, texts: &[&str]) -> Result<Presentation> {
        let mut basis = Vec::with_capacity(texts.len());
        for t in texts {
            let g = self.element(t)?;
            validate_relation(&self.quiver, &g)?;
            basis.push(g);
        }
        self.basis = Some(basis);
        Ok(self)
    }

    pub fn arrow(&self, name: &str) -> u32 {
        self.quiver
            .arrow_id(name)
            .unwrap_or_else(|| panic!("unknown arrow `{name}`"))
    }

    pub fn path(&self, names: &str) -> Path {
        self.quiver
            .parse_path(names)
            .unwrap_or_else(|e| panic!("bad path `{names}`: {e}"))
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations
            .iter()
            .chain(self.basis.iter().flatten())
            .map(FreeElement::max_len)
            .max()
            .unwrap_or(0)
    }

    pub fn arrows(&self) -> &[Arrow] {
        self.quiver.arrows()
    }
}

/// Relations are nonzero combinations of parallel paths of length at least 2.
pub fn validate_relation(q: &Quiver, r: &FreeElement) -> Result<()> {
    let (tip, _) = r.tip().map_err(|_| Error::InvalidPresentation("zero relation".into()))?;
    for p in r.paths() {
        if p.len() < 2 {
            return Err(Error::InvalidPresentation(format!(
                "relation term `{}` has length below 2",
                q.fmt_path(p)
            )));
        }
        if p.source() != tip.source() || p.target() != tip.target() {
            return Err(Error::InvalidPresentation(format!(
                "relation `{}` mixes non-parallel paths",
                q.fmt_element(r)
            )));
        }
    }
    Ok(())
}

/// True iff no element of `tips` occurs as a factor of `p`.
pub fn is_nontip(p: &Path, tips: &[Path]) -> bool {
    tips.iter().all(|t| !p.contains_factor(t.arrows()))
}

/// A lookup structure for rewriting with a list of monic elements.
#[derive(Clone, Debug)]
struct TipTable {
    index: HashMap<Vec<u32>, usize>,
    lengths: Vec<usize>,
}

impl TipTable {
    fn new(basis: &[FreeElement]) -> TipTable {
        let mut index = HashMap::new();
        let mut lengths = BTreeSet::new();
        for (i, g) in basis.iter().enumerate() {
            let (t, _) = g.tip().expect("basis elements are nonzero");
            index.entry(t.arrows().to_vec()).or_insert(i);
            lengths.insert(t.len());
        }
        TipTable {
            index,
            lengths: lengths.into_iter().collect(),
        }
    }

    /// The leftmost tip occurrence in `p` as `(start, basis index)`.
    fn find(&self, p: &Path) -> Option<(usize, usize)> {
        let a = p.arrows();
        for start in 0..a.len() {
            for &len in &self.lengths {
                if start + len > a.len() {
                    break;
                }
                if let Some(&i) = self.index.get(&a[start..start + len]) {
                    return Some((start, i));
                }
            }
        }
        None
    }
}

/// One rewrite `c · u g v` subtracted during reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub coefficient: Scalar,
    pub left: Path,
    pub basis_index: usize,
    pub right: Path,
}

fn reduce_with(
    q: &Quiver,
    basis: &[FreeElement],
    table: &TipTable,
    x: &FreeElement,
    cap: Option<usize>,
    mut trace: Option<&mut Vec<TraceStep>>,
) -> Result<FreeElement> {
    let mut work: BTreeMap<Path, Scalar> = x.terms().map(|(p, c)| (p.clone(), c.clone())).collect();
    let mut done = FreeElement::zero();
    while let Some((m, c)) = work.pop_last() {
        if let Some(cap) = cap {
            if m.len() > cap {
                return Err(Error::BeyondCap {
                    degree: m.len(),
                    cap,
                });
            }
        }
        match table.find(&m) {
            None => done.add_term(m, c),
            Some((start, gi)) => {
                let g = &basis[gi];
                let tlen = g.tip().expect("nonzero").0.len();
                let u = q.factor(&m, 0, start);
                let v = q.factor(&m, start + tlen, m.len());
                for (p, d) in g.terms().skip(1) {
                    let upv = u.compose(p).and_then(|up| up.compose(&v)).expect("parallel terms");
                    let delta = -(&c * d);
                    let entry = work.entry(upv);
                    match entry {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += &delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
                if let Some(t) = trace.as_deref_mut() {
                    t.push(TraceStep {
                        coefficient: c,
                        left: u,
                        basis_index: gi,
                        right: v,
                    });
                }
            }
        }
    }
    Ok(done)
}

/// Reduces `x` by an arbitrary list of nonzero elements (made monic here).
pub fn reduce_by(q: &Quiver, elements: &[FreeElement], x: &FreeElement) -> FreeElement {
    let monic: Vec<FreeElement> = elements.iter().map(|g| g.monic().expect("nonzero")).collect();
    let table = TipTable::new(&monic);
    reduce_with(q, &monic, &table, x, None, None).expect("no cap")
}

/// What the basis is known to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Every ambiguity resolves.
    Complete,
    /// Ambiguities of composite degree at most `D` resolve.
    UpTo(usize),
}

/// A reduced Gröbner–Shirshov basis with its tip set.
#[derive(Clone, Debug)]
pub struct GroebnerData {
    quiver: Quiver,
    field: Field,
    basis: Vec<FreeElement>,
    tips: Vec<Path>,
    table: TipTable,
    degree_cap: Option<usize>,
    certificate: Certificate,
    family_closed: bool,
    homogeneous: bool,
}

impl GroebnerData {
    /// Verifies an explicit basis, or completes the relations when none is
    /// given. Completion needs a degree cap unless it closes within four times
    /// the largest relation degree.
    pub fn new(p: &Presentation) -> Result<GroebnerData> {
        let q = &p.quiver;
        let cap = p.degree_cap;
        let (basis, certificate) = match &p.basis {
            Some(given) => {
                let monic: Vec<FreeElement> =
                    given.iter().map(FreeElement::monic).collect::<Result<_>>()?;
                let bound = cap.unwrap_or_else(|| full_overlap_bound(&monic));
                if let Err(cx) = verify_basis(q, &monic, bound) {
                    return Err(Error::NotGroebner(cx.describe(q)));
                }
                let reduced = interreduce(q, monic);
                let certificate = match cap {
                    Some(d) if verify_basis(q, &reduced, full_overlap_bound(&reduced)).is_err() => {
                        Certificate::UpTo(d)
                    }
                    _ => Certificate::Complete,
                };
                (reduced, certificate)
            }
            None => {
                let bound = cap.unwrap_or(4 * p.max_relation_degree().max(1));
                let basis = complete(q, &p.relations, bound, cap.is_none())?;
                let certificate = match cap {
                    Some(d) if verify_basis(q, &basis, full_overlap_bound(&basis)).is_err() => {
                        Certificate::UpTo(d)
                    }
                    _ => Certificate::Complete,
                };
                (basis, certificate)
            }
        };
        let mut g = GroebnerData::assemble(q.clone(), p.field, basis, cap, certificate, p.family_closed);
        for r in &p.relations {
            if cap.is_some_and(|d| r.max_len() > d) {
                continue;
            }
            let nf = g.reduce(r)?;
            if !nf.is_zero() {
                return Err(Error::NotGroebner(format!(
                    "relation `{}` does not reduce to zero",
                    q.fmt_element(r)
                )));
            }
        }
        g.homogeneous &= p.relations.iter().all(FreeElement::is_homogeneous);
        Ok(g)
    }

    fn assemble(
        quiver: Quiver,
        field: Field,
        mut basis: Vec<FreeElement>,
        degree_cap: Option<usize>,
        certificate: Certificate,
        family_closed: bool,
    ) -> GroebnerData {
        basis.sort_by(|a, b| a.tip().unwrap().0.cmp(b.tip().unwrap().0));
        let tips: Vec<Path> = basis.iter().map(|g| g.tip().unwrap().0.clone()).collect();
        let table = TipTable::new(&basis);
        let homogeneous = basis.iter().all(FreeElement::is_homogeneous);
        GroebnerData {
            quiver,
            field,
            basis,
            tips,
            table,
            degree_cap,
            certificate,
            family_closed,
            homogeneous,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Basis elements sorted by ascending tip.
    pub fn basis(&self) -> &[FreeElement] {
        &self.basis
    }

    /// The tip set `W`, ascending.
    pub fn tips(&self) -> &[Path] {
        &self.tips
    }

    pub fn degree_cap(&self) -> Option<usize> {
        self.degree_cap
    }

    pub fn certificate(&self) -> Certificate {
        self.certificate
    }

    pub fn family_closed(&self) -> bool {
        self.family_closed
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn max_tip_degree(&self) -> usize {
        self.tips.iter().map(Path::len).max().unwrap_or(0)
    }

    fn reduction_cap(&self) -> Option<usize> {
        match self.certificate {
            Certificate::Complete => None,
            Certificate::UpTo(d) => Some(d),
        }
    }

    /// Normal form modulo the ideal. Rewrites the largest reducible monomial
    /// at the leftmost tip occurrence.
    pub fn reduce(&self, x: &FreeElement) -> Result<NormalForm> {
        reduce_with(&self.quiver, &self.basis, &self.table, x, self.reduction_cap(), None)
    }

    /// Like [`GroebnerData::reduce`], also returning the rewrites so that
    /// `x - nf = Σ c·u·g·v`.
    pub fn reduce_traced(&self, x: &FreeElement) -> Result<(NormalForm, Vec<TraceStep>)> {
        let mut trace = Vec::new();
        let nf = reduce_with(
            &self.quiver,
            &self.basis,
            &self.table,
            x,
            self.reduction_cap(),
            Some(&mut trace),
        )?;
        Ok((nf, trace))
    }

    /// Normal form of a single path with coefficient 1.
    pub fn reduce_path(&self, p: &Path) -> Result<NormalForm> {
        if let Some(cap) = self.reduction_cap() {
            if p.len() > cap {
                return Err(Error::BeyondCap {
                    degree: p.len(),
                    cap,
                });
            }
        }
        if self.is_nontip(p) {
            return Ok(FreeElement::monomial(p.clone(), self.field.one()));
        }
        self.reduce(&FreeElement::monomial(p.clone(), self.field.one()))
    }

    pub fn multiply_mod(&self, a: &NormalForm, b: &NormalForm) -> Result<NormalForm> {
        self.reduce(&a.multiply(b))
    }

    pub fn is_nontip(&self, p: &Path) -> bool {
        self.table.find(p).is_none()
    }

    /// Leftmost tip occurrence `(start, basis index)`.
    pub fn find_tip(&self, p: &Path) -> Option<(usize, usize)> {
        self.table.find(p)
    }

    /// NonTip paths of exactly length `d`, ascending.
    pub fn nontips_of_degree(&self, d: usize) -> Vec<Path> {
        let q = &self.quiver;
        let mut level: Vec<Path> = (0..q.vertex_count() as u32).map(|v| q.vertex(v)).collect();
        for _ in 0..d {
            let mut next = Vec::new();
            for p in &level {
                for a in 0..q.arrow_count() as u32 {
                    let Some(pa) = p.compose(&q.arrow_path(a)) else {
                        continue;
                    };
                    if self.tips.iter().all(|t| !pa.arrows().ends_with(t.arrows())) {
                        next.push(pa);
                    }
                }
            }
            level = next;
        }
        level.sort();
        level
    }

    pub fn check_reduced(&self) -> Vec<Violation> {
        check_reduced(&self.basis)
    }
}

/// A failure of one of the reducedness conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Tip coefficient is not 1.
    NotMonic { index: usize },
    /// A non-tip term contains a tip.
    ReducibleTail { index: usize, term: Path },
    /// The tip of `inner` divides the tip of `outer`.
    TipDivides { inner: usize, outer: usize },
}

impl Violation {
    pub fn describe(&self, q: &Quiver, basis: &[FreeElement]) -> String {
        let show = |i: &usize| q.fmt_element(&basis[*i]);
        match self {
            Violation::NotMonic { index } => format!("R1: tip coefficient of `{}` is not 1", show(index)),
            Violation::ReducibleTail { index, term } => format!(
                "R2: term `{}` of `{}` contains a tip",
                q.fmt_path(term),
                show(index)
            ),
            Violation::TipDivides { inner, outer } => format!(
                "R3: tip of `{}` divides tip of `{}`",
                show(inner),
                show(outer)
            ),
        }
    }
}

/// Lists every R1, R2 and R3 violation of `basis`.
pub fn check_reduced(basis: &[FreeElement]) -> Vec<Violation> {
    let tips: Vec<&Path> = basis.iter().map(|g| g.tip().expect("nonzero").0).collect();
    let mut out = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        if !g.tip().unwrap().1.is_one() {
            out.push(Violation::NotMonic { index: i });
        }
    }
    for (i, g) in basis.iter().enumerate() {
        for p in g.paths().skip(1) {
            if tips.iter().any(|t| p.contains_factor(t.arrows())) {
                out.push(Violation::ReducibleTail {
                    index: i,
                    term: p.clone(),
                });
            }
        }
    }
    for (i, ti) in tips.iter().enumerate() {
        for (j, tj) in tips.iter().enumerate() {
            if i != j && tj.contains_factor(ti.arrows()) && (ti != tj || i < j) {
                out.push(Violation::TipDivides { inner: i, outer: j });
            }
        }
    }
    out
}

/// An ambiguity between two basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambiguity {
    pub first: usize,
    pub second: usize,
    /// The composite word.
    pub word: Path,
    /// Overlap (a suffix of the first tip equals a prefix of the second) or
    /// inclusion (the second tip contains the first).
    pub inclusion: bool,
}

/// An ambiguity whose S-element has a nonzero normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub ambiguity: Ambiguity,
    pub normal_form: FreeElement,
}

impl Counterexample {
    pub fn describe(&self, q: &Quiver) -> String {
        format!(
            "{} ambiguity on `{}` leaves `{}`",
            if self.ambiguity.inclusion { "inclusion" } else { "overlap" },
            q.fmt_path(&self.ambiguity.word),
            q.fmt_element(&self.normal_form)
        )
    }
}

/// All ambiguities with composite degree at most `max_degree`.
pub fn ambiguities(q: &Quiver, basis: &[FreeElement], max_degree: usize) -> Vec<Ambiguity> {
    let tips: Vec<&Path> = basis.iter().map(|g| g.tip().expect("nonzero").0).collect();
    let mut out = Vec::new();
    for (i, t1) in tips.iter().enumerate() {
        for (j, t2) in tips.iter().enumerate() {
            let (a, b) = (t1.arrows(), t2.arrows());
            for k in 1..a.len().min(b.len()) {
                if a[a.len() - k..] == b[..k] && a.len() + b.len() - k <= max_degree {
                    let tail = q.factor(t2, k, b.len());
                    out.push(Ambiguity {
                        first: i,
                        second: j,
                        word: t1.compose(&tail).expect("overlap composes"),
                        inclusion: false,
                    });
                }
            }
            if i != j && b.len() >= a.len() && b.len() <= max_degree && t2.contains_factor(a) {
                out.push(Ambiguity {
                    first: i,
                    second: j,
                    word: (*t2).clone(),
                    inclusion: true,
                });
            }
        }
    }
    out
}

fn s_element(q: &Quiver, basis: &[FreeElement], amb: &Ambiguity) -> FreeElement {
    let g1 = &basis[amb.first];
    let g2 = &basis[amb.second];
    let t1 = g1.tip().unwrap().0;
    let t2 = g2.tip().unwrap().0;
    let w = &amb.word;
    if amb.inclusion {
        let start = t2.occurrences(t1.arrows()).next().expect("inclusion");
        let u = q.factor(w, 0, start);
        let v = q.factor(w, start + t1.len(), w.len());
        g2.sub(&g1.sandwich(&u, &v))
    } else {
        let v = q.factor(w, t1.len(), w.len());
        let u = q.factor(w, 0, w.len() - t2.len());
        g1.sandwich(&q.vertex(t1.source()), &v)
            .sub(&g2.sandwich(&u, &q.vertex(t2.target())))
    }
}

/// Checks every ambiguity of composite degree at most `max_degree`; `basis`
/// is made monic first.
pub fn verify_basis(
    q: &Quiver,
    basis: &[FreeElement],
    max_degree: usize,
) -> std::result::Result<(), Counterexample> {
    let monic: Vec<FreeElement> = basis.iter().map(|g| g.monic().expect("nonzero")).collect();
    let table = TipTable::new(&monic);
    for amb in ambiguities(q, &monic, max_degree) {
        let s = s_element(q, &monic, &amb);
        let nf = reduce_with(q, &monic, &table, &s, None, None).expect("no cap");
        if !nf.is_zero() {
            return Err(Counterexample {
                ambiguity: amb,
                normal_form: nf,
            });
        }
    }
    Ok(())
}

/// The certificate `verify_gsb_up_to` reports.
pub fn verify_gsb_up_to(
    g: &GroebnerData,
    max_degree: usize,
) -> std::result::Result<Certificate, Counterexample> {
    verify_basis(g.quiver(), g.basis(), max_degree)?;
    Ok(Certificate::UpTo(max_degree))
}

/// Largest composite degree any ambiguity can have.
fn full_overlap_bound(basis: &[FreeElement]) -> usize {
    2 * basis.iter().map(FreeElement::max_len).max().unwrap_or(0)
}

/// Tail-reduces until the list is reduced; drops elements that vanish.
pub fn interreduce(q: &Quiver, mut basis: Vec<FreeElement>) -> Vec<FreeElement> {
    basis.retain(|g| !g.is_zero());
    basis = basis.into_iter().map(|g| g.monic().unwrap()).collect();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < basis.len() {
            let others: Vec<FreeElement> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = if others.is_empty() {
                basis[i].clone()
            } else {
                reduce_by(q, &others, &basis[i])
            };
            if r != basis[i] {
                changed = true;
                if r.is_zero() {
                    basis.remove(i);
                    continue;
                }
                basis[i] = r.monic().unwrap();
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    basis.sort_by(|a, b| a.tip().unwrap().0.cmp(b.tip().unwrap().0));
    basis
}

/// Bounded completion. Ambiguities above `bound` are ignored unless `strict`,
/// in which case any new element or ambiguity above it is a `CapRequired`
/// error.
pub fn complete(
    q: &Quiver,
    relations: &[FreeElement],
    bound: usize,
    strict: bool,
) -> Result<Vec<FreeElement>> {
    let mut basis = interreduce(q, relations.to_vec());
    loop {
        let limit = if strict { usize::MAX } else { bound };
        let table = TipTable::new(&basis);
        let mut fresh = Vec::new();
        for amb in ambiguities(q, &basis, limit) {
            let s = s_element(q, &basis, &amb);
            let nf = reduce_with(q, &basis, &table, &s, None, None)?;
            if !nf.is_zero() {
                if strict && (amb.word.len() > bound || nf.max_len() > bound) {
                    return Err(Error::CapRequired(format!(
                        "completion does not close within degree {bound}"
                    )));
                }
                fresh.push(nf);
            }
        }
        if fresh.is_empty() {
            return Ok(basis);
        }
        basis.extend(fresh);
        basis = interreduce(q, basis);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example42() -> Presentation {
        Presentation::new(
            Field::Rational,
            &["1", "2", "3"],
            &[("a", "1", "2"), ("a'", "2", "1"), ("b", "2", "3"), ("b'", "3", "2")],
            &["a", "b", "b'", "a'"],
        )
        .unwrap()
        .with_relations(&["a*b", "b'*a'", "a'*a - b*b'"])
        .unwrap()
    }

    #[test]
    fn example42_completion_matches_known_basis() {
        let p = example42();
        let g = GroebnerData::new(&p).unwrap();
        let shown: Vec<String> = g.basis().iter().map(|x| p.quiver.fmt_element(x)).collect();
        assert_eq!(shown, ["b'*a'", "b*b' - a'*a", "a*b", "a'*a*a'", "a*a'*a"]);
        assert_eq!(g.certificate(), Certificate::Complete);
        assert!(g.check_reduced().is_empty());
    }

    #[test]
    fn example42_normal_forms() {
        let p = example42();
        let g = GroebnerData::new(&p).unwrap();
        let nf = g.reduce_path(&p.path("b*b'")).unwrap();
        assert_eq!(p.quiver.fmt_element(&nf), "a'*a");
        let aa = g
            .multiply_mod(&p.element("a").unwrap(), &p.element("a'").unwrap())
            .unwrap();
        assert_eq!(p.quiver.fmt_element(&aa), "a*a'");
        assert!(g.is_nontip(&p.path("a'*a")));
        assert!(!g.is_nontip(&p.path("a*b")));
        assert!(g.is_nontip(&p.quiver.vertex(0)));
        let listed: Vec<String> = (1..=3)
            .flat_map(|d| g.nontips_of_degree(d))
            .map(|x| p.quiver.fmt_path(&x))
            .collect();
        assert_eq!(listed, ["a'", "b'", "b", "a", "a'*a", "b'*b", "a*a'"]);
    }

    #[test]
    fn commutative_polynomials_are_a_basis() {
        let p = Presentation::free(Field::Rational, &["x", "y"])
            .unwrap()
            .with_relations(&["x*y - y*x"])
            .unwrap();
        let g = GroebnerData::new(&p).unwrap();
        assert_eq!(verify_gsb_up_to(&g, 4), Ok(Certificate::UpTo(4)));
        assert_eq!(g.basis().len(), 1);
    }

    #[test]
    fn missing_overlap_consequence_is_reported() {
        // x^2 - y with y^2: the self-overlap on x^3 leaves x*y - y*x.
        let q = Quiver::one_vertex(&["x", "y"]).unwrap();
        let f = Field::Rational;
        let basis = vec![
            q.parse_element(f, "x*x - y").unwrap(),
            q.parse_element(f, "y*y").unwrap(),
        ];
        let cx = verify_basis(&q, &basis, 4).unwrap_err();
        assert_eq!(q.fmt_path(&cx.ambiguity.word), "x*x*x");
        assert_eq!(q.fmt_element(&cx.normal_form), "x*y - y*x");
    }

    #[test]
    fn reducedness_violations() {
        let q = Quiver::one_vertex(&["x", "y", "z"]).unwrap();
        let f = Field::Rational;
        let basis = vec![
            q.parse_element(f, "x*x + y*x").unwrap(),
            q.parse_element(f, "2*x*z").unwrap(),
        ];
        assert_eq!(check_reduced(&basis), vec![Violation::NotMonic { index: 1 }]);
        let basis = vec![
            q.parse_element(f, "x*y").unwrap(),
            q.parse_element(f, "x*y*x").unwrap(),
        ];
        assert_eq!(
            check_reduced(&basis),
            vec![Violation::TipDivides { inner: 0, outer: 1 }]
        );
    }

    #[test]
    fn non_closing_completion_requires_a_cap() {
        let mut p = Presentation::free(Field::Rational, &["x", "y", "z"])
            .unwrap()
            .with_relations(&["x*x + y*x", "x*z", "z*y"])
            .unwrap();
        assert!(matches!(GroebnerData::new(&p), Err(Error::CapRequired(_))));
        p.degree_cap = Some(5);
        let g = GroebnerData::new(&p).unwrap();
        assert_eq!(g.certificate(), Certificate::UpTo(5));
        let shown: Vec<String> = g.basis().iter().map(|x| p.quiver.fmt_element(x)).collect();
        assert_eq!(
            shown,
            [
                "z*y",
                "x*z",
                "x*x + y*x",
                "x*y*x + y*y*x",
                "x*y*y*x + y*y*y*x",
                "x*y*y*y*x + y*y*y*y*x"
            ]
        );
        let long = p.path("x*y*y*y*y*y");
        assert!(matches!(
            g.reduce_path(&long),
            Err(Error::BeyondCap { degree: 6, cap: 5 })
        ));
    }

    #[test]
    fn relations_must_be_parallel_and_long() {
        let p = Presentation::free(Field::Rational, &["x", "y"]).unwrap();
        assert!(p.clone().with_relations(&["x*y - y"]).is_err());
        let q = Presentation::new(
            Field::Rational,
            &["1", "2"],
            &[("a", "1", "2"), ("b", "2", "1")],
            &["a", "b"],
        )
        .unwrap();
        assert!(q.with_relations(&["a*b - b*a"]).is_err());
    }
}
