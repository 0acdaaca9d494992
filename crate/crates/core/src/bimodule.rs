//! Weights of maps between rank-one free bimodules `A e_i ⊗ e_j A`.
//!
//! A weight `Σ λ l⊗r` sends the generator of the source cell to
//! `Σ λ l·[target]·r`. Composing `w1` (first) with `w2` gives
//! `Σ λ1 λ2 (l1 l2)⊗(r2 r1)`, products taken in `A`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::gsb::{GroebnerData, NormalForm};
use crate::pathalg::{Path, Quiver};
use crate::scalar::{Field, Scalar};

/// A Gröbner basis with a cache of path normal forms.
#[derive(Debug)]
pub struct Algebra<'g> {
    pub gb: &'g GroebnerData,
    cache: RefCell<HashMap<Path, Rc<NormalForm>>>,
}

impl<'g> Algebra<'g> {
    pub fn new(gb: &'g GroebnerData) -> Algebra<'g> {
        Algebra {
            gb,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        self.gb.quiver()
    }

    pub fn normal_form(&self, p: &Path) -> Result<Rc<NormalForm>> {
        if let Some(nf) = self.cache.borrow().get(p) {
            return Ok(Rc::clone(nf));
        }
        let nf = Rc::new(self.gb.reduce_path(p)?);
        self.cache.borrow_mut().insert(p.clone(), Rc::clone(&nf));
        Ok(nf)
    }

    /// Normal form of `ab`, `None` when the paths do not compose.
    pub fn product(&self, a: &Path, b: &Path) -> Result<Option<Rc<NormalForm>>> {
        if a.is_vertex() && a.target() == b.source() {
            return self.normal_form(b).map(Some);
        }
        if b.is_vertex() && a.target() == b.source() {
            return self.normal_form(a).map(Some);
        }
        match a.compose(b) {
            None => Ok(None),
            Some(ab) => self.normal_form(&ab).map(Some),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BimoduleWeight {
    terms: BTreeMap<(Path, Path), Scalar>,
}

impl BimoduleWeight {
    pub fn zero() -> BimoduleWeight {
        BimoduleWeight::default()
    }

    pub fn term(left: Path, right: Path, c: Scalar) -> BimoduleWeight {
        let mut w = BimoduleWeight::zero();
        w.add_term(left, right, c);
        w
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Path, &Scalar)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn coefficient(&self, left: &Path, right: &Path) -> Option<&Scalar> {
        self.terms.get(&(left.clone(), right.clone()))
    }

    pub fn add_term(&mut self, left: Path, right: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((left, right)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &BimoduleWeight) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &BimoduleWeight, s: &Scalar) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c * s);
        }
    }

    pub fn scaled(&self, s: &Scalar) -> BimoduleWeight {
        let mut w = BimoduleWeight::zero();
        w.add_scaled(self, s);
        w
    }

    pub fn neg(&self) -> BimoduleWeight {
        BimoduleWeight {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &BimoduleWeight) -> BimoduleWeight {
        let mut w = self.clone();
        w.add_assign(&other.neg());
        w
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &BimoduleWeight, alg: &Algebra) -> Result<BimoduleWeight> {
        let mut out = BimoduleWeight::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &next.terms {
                let Some(left) = alg.product(l1, l2)? else {
                    continue;
                };
                let Some(right) = alg.product(r2, r1)? else {
                    continue;
                };
                let c = c1 * c2;
                for (lp, lc) in left.terms() {
                    let lc = &c * lc;
                    for (rp, rc) in right.terms() {
                        out.add_term(lp.clone(), rp.clone(), &lc * rc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Some(λ)` when the weight is `λ·(1⊗1)` with λ nonzero.
    pub fn as_scalar_identity(&self) -> Option<&Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let ((l, r), c) = self.terms.iter().next().unwrap();
        (l.is_vertex() && r.is_vertex()).then_some(c)
    }

    /// The sum of the `vertex⊗vertex` coefficients: the weight after
    /// tensoring with `E` on both sides.
    pub fn scalar_part(&self) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        for ((l, r), c) in &self.terms {
            if l.is_vertex() && r.is_vertex() {
                acc = Some(match acc {
                    None => c.clone(),
                    Some(a) => &a + c,
                });
            }
        }
        acc.filter(|s| !s.is_zero())
    }

    /// Terms whose right factor is a vertex: the one-sided (left module)
    /// collapse `- ⊗_A k`.
    pub fn left_collapse(&self) -> BimoduleWeight {
        BimoduleWeight {
            terms: self
                .terms
                .iter()
                .filter(|((_, r), _)| r.is_vertex())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// `λ*l⊗r + ...`, with `1` for vertices; zero prints as `0`.
    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let side = |p: &Path| {
            if p.is_vertex() {
                "1".to_string()
            } else {
                q.fmt_path(p)
            }
        };
        let mut out = String::new();
        for (i, ((l, r), c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                let _ = write!(out, "{mag}*");
            }
            let _ = write!(out, "{}⊗{}", side(l), side(r));
        }
        out
    }
}

/// Parses the [`BimoduleWeight::display`] form on the frame `source → target`:
/// a left `1` is `e_source`, a right `1` is `e_target`.
pub fn parse_weight(q: &Quiver, field: Field, text: &str, source: u32, target: u32) -> Result<BimoduleWeight> {
    let bad = |m: String| Error::Parse {
        line: 0,
        column: 0,
        message: m,
    };
    let mut w = BimoduleWeight::zero();
    let text = text.trim();
    if text == "0" {
        return Ok(w);
    }
    let (first_negative, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, text),
    };
    let mut terms = vec![(first_negative, String::new())];
    let chunks = rest.split(' ').peekable();
    for chunk in chunks {
        match chunk {
            "+" | "-" => terms.push((chunk == "-", String::new())),
            "" => {}
            _ => terms.last_mut().unwrap().1.push_str(chunk),
        }
    }
    for (negative, term) in terms {
        let (lhs, rhs) = term
            .split_once('⊗')
            .ok_or_else(|| bad(format!("term `{term}` lacks `⊗`")))?;
        let (coeff, lhs) = match lhs.split_once('*') {
            Some((c, l)) if c.starts_with(|ch: char| ch.is_ascii_digit()) => (field.parse_scalar(c)?, l),
            _ => (field.one(), lhs),
        };
        let side = |p: &str, v: u32| if p == "1" { Ok(q.vertex(v)) } else { q.parse_path(p) };
        let coeff = if negative { -coeff } else { coeff };
        w.add_term(side(lhs, source)?, side(rhs, target)?, coeff);
    }
    Ok(w)
}

/// A bimodule element in generator coordinates: generator → weight.
pub type Image<C> = BTreeMap<C, BimoduleWeight>;

pub fn image_add<C: Ord + Clone>(acc: &mut Image<C>, cell: &C, w: &BimoduleWeight) {
    if w.is_zero() {
        return;
    }
    let entry = acc.entry(cell.clone()).or_default();
    entry.add_assign(w);
    if entry.is_zero() {
        acc.remove(cell);
    }
}

pub fn image_add_all<C: Ord + Clone>(acc: &mut Image<C>, other: &Image<C>, scale: Option<&Scalar>) {
    for (c, w) in other {
        match scale {
            None => image_add(acc, c, w),
            Some(s) => image_add(acc, c, &w.scaled(s)),
        }
    }
}

/// Applies a weight to an image: `w` (into the image's generator) followed by
/// the image.
pub fn weight_then_image<C: Ord + Clone>(
    w: &BimoduleWeight,
    image: &Image<C>,
    alg: &Algebra,
) -> Result<Image<C>> {
    let mut out = Image::new();
    for (c, v) in image {
        let composed = w.then(v, alg)?;
        image_add(&mut out, c, &composed);
    }
    Ok(out)
}
