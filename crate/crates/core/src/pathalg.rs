//! Quivers, paths, the left length-lexicographic order and elements of the
//! free path algebra `kQ`.
//!
//! Paths are written left to right: `ab` means `a` then `b`, so `t(a) = s(b)`.
//!
//! The derived [`Ord`] on [`Path`] is the admissible order of a *canonical*
//! quiver, one whose arrows are listed by precedence (arrow 0 is the largest).
//! [`crate::gsb::Presentation`] always canonicalizes its quiver, so inside the
//! pipeline the natural `BTreeMap` order of paths is the admissible order.
//! [`compare`] evaluates an arbitrary [`AdmissibleOrder`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: u32,
    pub target: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, u32>,
    arrow_index: HashMap<String, u32>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Quiver> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i as u32).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let mut arrow_index = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if !valid_arrow_name(&a.name) {
                return Err(Error::InvalidQuiver(format!("invalid arrow name `{}`", a.name)));
            }
            if a.source as usize >= vertices.len() || a.target as usize >= vertices.len() {
                return Err(Error::InvalidQuiver(format!(
                    "arrow `{}` has an undeclared endpoint",
                    a.name
                )));
            }
            if arrow_index.insert(a.name.clone(), i as u32).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{}`", a.name)));
            }
        }
        Ok(Quiver {
            vertices,
            arrows,
            vertex_index,
            arrow_index,
        })
    }

    /// A quiver from `(name, source label, target label)` triples.
    pub fn from_labels(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Quiver> {
        let vs: Vec<String> = vertices.iter().map(|v| v.to_string()).collect();
        let lookup = |label: &str| {
            vs.iter()
                .position(|v| v == label)
                .map(|i| i as u32)
                .ok_or_else(|| Error::InvalidQuiver(format!("unknown vertex `{label}`")))
        };
        let mut out = Vec::with_capacity(arrows.len());
        for (name, s, t) in arrows {
            out.push(Arrow {
                name: name.to_string(),
                source: lookup(s)?,
                target: lookup(t)?,
            });
        }
        Quiver::new(vs, out)
    }

    /// One vertex labelled `1` with a loop per name (a free algebra).
    pub fn one_vertex(names: &[&str]) -> Result<Quiver> {
        let arrows: Vec<(&str, &str, &str)> = names.iter().map(|n| (*n, "1", "1")).collect();
        Quiver::from_labels(&["1"], &arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: u32) -> &Arrow {
        &self.arrows[id as usize]
    }

    pub fn arrow_id(&self, name: &str) -> Option<u32> {
        self.arrow_index.get(name).copied()
    }

    pub fn vertex_id(&self, label: &str) -> Option<u32> {
        self.vertex_index.get(label).copied()
    }

    pub fn vertex(&self, v: u32) -> Path {
        assert!((v as usize) < self.vertices.len(), "vertex {v} out of range");
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow_path(&self, a: u32) -> Path {
        let arrow = self.arrow(a);
        Path {
            source: arrow.source,
            target: arrow.target,
            arrows: vec![a],
        }
    }

    /// The path through a nonempty arrow sequence.
    pub fn path(&self, arrows: &[u32]) -> Result<Path> {
        let first = arrows
            .first()
            .ok_or_else(|| Error::InvalidQuiver("empty arrow sequence".into()))?;
        let mut target = self.arrow(*first).source;
        for &a in arrows {
            let arrow = self
                .arrows
                .get(a as usize)
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow id {a} out of range")))?;
            if arrow.source != target {
                return Err(Error::InvalidQuiver(format!(
                    "arrows do not compose at `{}`",
                    arrow.name
                )));
            }
            target = arrow.target;
        }
        Ok(Path {
            source: self.arrow(*first).source,
            target,
            arrows: arrows.to_vec(),
        })
    }

    pub fn path_by_names(&self, names: &[&str]) -> Result<Path> {
        let ids = names
            .iter()
            .map(|n| {
                self.arrow_id(n)
                    .ok_or_else(|| Error::InvalidQuiver(format!("unknown arrow `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.path(&ids)
    }

    /// The vertex where arrow `i` of `p` starts (or `t(p)` for `i = len`).
    pub fn vertex_at(&self, p: &Path, i: usize) -> u32 {
        if i < p.arrows.len() {
            self.arrows[p.arrows[i] as usize].source
        } else {
            p.target
        }
    }

    /// The factor of `p` spanning arrows `i..j`.
    pub fn factor(&self, p: &Path, i: usize, j: usize) -> Path {
        assert!(i <= j && j <= p.arrows.len());
        if i == j {
            return self.vertex(self.vertex_at(p, i));
        }
        Path {
            source: self.vertex_at(p, i),
            target: self.arrows[p.arrows[j - 1] as usize].target,
            arrows: p.arrows[i..j].to_vec(),
        }
    }

    /// `a*b*c` for paths, `e_<label>` for vertices.
    pub fn fmt_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            return format!("e_{}", self.vertices[p.source as usize]);
        }
        let names: Vec<&str> = p
            .arrows
            .iter()
            .map(|&a| self.arrows[a as usize].name.as_str())
            .collect();
        names.join("*")
    }

    /// Terms in descending order, e.g. `b*b' - a'*a`; zero prints as `0`.
    pub fn fmt_element(&self, x: &FreeElement) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (p, c)) in x.terms().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
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
            out.push_str(&self.fmt_path(p));
        }
        out
    }

    /// Parses a path written `a*b*c` or `e_<label>`.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if let Some(label) = text.strip_prefix("e_") {
            return self
                .vertex_id(label)
                .map(|v| self.vertex(v))
                .ok_or_else(|| parse_error(0, format!("unknown vertex `{label}`")));
        }
        let names: Vec<&str> = text.split('*').map(str::trim).collect();
        for n in &names {
            if self.arrow_id(n).is_none() {
                return Err(parse_error(0, format!("unknown arrow `{n}`")));
            }
        }
        self.path_by_names(&names)
            .map_err(|e| parse_error(0, e.to_string()))
    }

    /// Parses `±coeff*a1*a2 ± ...`. Coefficients are integers or fractions and
    /// default to 1. Error columns are 1-based offsets into `text`.
    pub fn parse_element(&self, field: Field, text: &str) -> Result<FreeElement> {
        let mut out = FreeElement::zero();
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut first = true;
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos >= bytes.len() {
                if first {
                    return Err(parse_error(pos + 1, "empty element".into()));
                }
                break;
            }
            let mut negative = false;
            if bytes[pos] == b'+' || bytes[pos] == b'-' {
                negative = bytes[pos] == b'-';
                pos += 1;
            } else if !first {
                return Err(parse_error(pos + 1, "expected `+` or `-`".into()));
            }
            let start = pos;
            while pos < bytes.len() && bytes[pos] != b'+' && bytes[pos] != b'-' {
                pos += 1;
            }
            let term = &text[start..pos];
            let offset = start + (term.len() - term.trim_start().len());
            let (coeff, path) = self.parse_term(field, term.trim(), offset)?;
            out.add_term(path, if negative { -coeff } else { coeff });
            first = false;
        }
        Ok(out)
    }

    fn parse_term(&self, field: Field, term: &str, offset: usize) -> Result<(Scalar, Path)> {
        if term.is_empty() {
            return Err(parse_error(offset + 1, "empty term".into()));
        }
        let mut factors: Vec<&str> = term.split('*').map(str::trim).collect();
        let mut coeff = field.one();
        if factors[0].starts_with(|c: char| c.is_ascii_digit()) {
            coeff = field
                .parse_scalar(factors[0])
                .map_err(|_| parse_error(offset + 1, format!("invalid coefficient `{}`", factors[0])))?;
            factors.remove(0);
            if factors.is_empty() {
                return Err(parse_error(offset + 1, "coefficient without a path".into()));
            }
        }
        let path = self
            .parse_path(&factors.join("*"))
            .map_err(|e| match e {
                Error::Parse { message, .. } => parse_error(offset + 1, message),
                other => other,
            })?;
        Ok((coeff, path))
    }
}

fn parse_error(column: usize, message: String) -> Error {
    Error::Parse {
        line: 0,
        column,
        message,
    }
}

/// Arrow names start with a letter, avoid the vertex prefix `e_`, and use no
/// operator characters.
pub fn valid_arrow_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() => {}
        _ => return false,
    }
    !name.starts_with("e_")
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// A path: a vertex when `arrows` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    source: u32,
    target: u32,
    arrows: Vec<u32>,
}

impl Path {
    /// The vertex path `e_v`; validity of `v` is the caller's concern.
    pub fn trivial(v: u32) -> Path {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn source(&self) -> u32 {
        self.source
    }

    pub fn target(&self) -> u32 {
        self.target
    }

    pub fn arrows(&self) -> &[u32] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Concatenation, `None` when `t(self) != s(other)`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if self.target != other.source {
            return None;
        }
        let mut arrows = Vec::with_capacity(self.arrows.len() + other.arrows.len());
        arrows.extend_from_slice(&self.arrows);
        arrows.extend_from_slice(&other.arrows);
        Some(Path {
            source: self.source,
            target: other.target,
            arrows,
        })
    }

    /// Positions where `pattern` occurs as a contiguous factor.
    pub fn occurrences<'a>(&'a self, pattern: &'a [u32]) -> impl Iterator<Item = usize> + 'a {
        let n = pattern.len();
        let count = if n == 0 || n > self.arrows.len() {
            0
        } else {
            self.arrows.len() - n + 1
        };
        (0..count).filter(move |&i| &self.arrows[i..i + n] == pattern)
    }

    pub fn contains_factor(&self, pattern: &[u32]) -> bool {
        self.occurrences(pattern).next().is_some()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| {
                if self.arrows.is_empty() {
                    self.source.cmp(&other.source)
                } else {
                    other.arrows.cmp(&self.arrows)
                }
            })
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An arrow precedence, highest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleOrder {
    rank: Vec<u32>,
}

impl AdmissibleOrder {
    /// `names` must list every arrow of `q` exactly once.
    pub fn from_names(q: &Quiver, names: &[&str]) -> Result<AdmissibleOrder> {
        let mut rank = vec![u32::MAX; q.arrow_count()];
        for (r, n) in names.iter().enumerate() {
            let id = q
                .arrow_id(n)
                .ok_or_else(|| Error::InvalidPresentation(format!("order names unknown arrow `{n}`")))?;
            if rank[id as usize] != u32::MAX {
                return Err(Error::InvalidPresentation(format!("arrow `{n}` repeated in order")));
            }
            rank[id as usize] = r as u32;
        }
        if rank.contains(&u32::MAX) || names.len() != q.arrow_count() {
            return Err(Error::InvalidPresentation(
                "order must list every arrow exactly once".into(),
            ));
        }
        Ok(AdmissibleOrder { rank })
    }

    /// The order of a canonical quiver: arrow id equals rank.
    pub fn identity(arrow_count: usize) -> AdmissibleOrder {
        AdmissibleOrder {
            rank: (0..arrow_count as u32).collect(),
        }
    }

    /// Position in the precedence list, 0 for the largest arrow.
    pub fn rank(&self, arrow: u32) -> u32 {
        self.rank[arrow as usize]
    }

    /// Arrow ids from highest to lowest precedence.
    pub fn precedence(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (0..self.rank.len() as u32).collect();
        ids.sort_by_key(|&a| self.rank[a as usize]);
        ids
    }
}

/// Left length-lexicographic comparison under `ord`.
pub fn compare(ord: &AdmissibleOrder, p: &Path, q: &Path) -> Ordering {
    p.len().cmp(&q.len()).then_with(|| {
        if p.is_vertex() {
            return p.source.cmp(&q.source);
        }
        for (a, b) in p.arrows.iter().zip(&q.arrows) {
            if a != b {
                return ord.rank(*b).cmp(&ord.rank(*a));
            }
        }
        Ordering::Equal
    })
}

/// A finite linear combination of paths with no stored zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeElement {
    terms: BTreeMap<Path, Scalar>,
}

impl FreeElement {
    pub fn zero() -> FreeElement {
        FreeElement::default()
    }

    pub fn monomial(p: Path, c: Scalar) -> FreeElement {
        let mut x = FreeElement::zero();
        x.add_term(p, c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (Path, Scalar)>>(terms: I) -> FreeElement {
        let mut x = FreeElement::zero();
        for (p, c) in terms {
            x.add_term(p, c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending order (canonical quiver).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Path, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, p: &Path) -> Option<&Scalar> {
        self.terms.get(p)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.terms.keys().rev()
    }

    pub fn add_term(&mut self, p: Path, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Removes and returns the term at `p`.
    pub fn take(&mut self, p: &Path) -> Option<Scalar> {
        self.terms.remove(p)
    }

    pub fn add_scaled(&mut self, other: &FreeElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (p, d) in &other.terms {
            self.add_term(p.clone(), d * c);
        }
    }

    pub fn add(&self, other: &FreeElement) -> FreeElement {
        let mut x = self.clone();
        for (p, c) in &other.terms {
            x.add_term(p.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, other: &FreeElement) -> FreeElement {
        let mut x = self.clone();
        for (p, c) in &other.terms {
            x.add_term(p.clone(), -c);
        }
        x
    }

    pub fn scaled(&self, c: &Scalar) -> FreeElement {
        if c.is_zero() {
            return FreeElement::zero();
        }
        FreeElement {
            terms: self.terms.iter().map(|(p, d)| (p.clone(), d * c)).collect(),
        }
    }

    pub fn neg(&self) -> FreeElement {
        FreeElement {
            terms: self.terms.iter().map(|(p, d)| (p.clone(), -d)).collect(),
        }
    }

    /// Product in `kQ`; non-composable pairs contribute zero.
    pub fn multiply(&self, other: &FreeElement) -> FreeElement {
        let mut x = FreeElement::zero();
        for (p, c) in &self.terms {
            for (q, d) in &other.terms {
                if let Some(pq) = p.compose(q) {
                    x.add_term(pq, c * d);
                }
            }
        }
        x
    }

    /// `u * self * v` for paths `u`, `v`.
    pub fn sandwich(&self, u: &Path, v: &Path) -> FreeElement {
        let mut x = FreeElement::zero();
        for (p, c) in &self.terms {
            if let Some(up) = u.compose(p) {
                if let Some(upv) = up.compose(v) {
                    x.add_term(upv, c.clone());
                }
            }
        }
        x
    }

    /// Largest monomial and its coefficient (canonical quiver).
    pub fn tip(&self) -> Result<(&Path, &Scalar)> {
        self.terms.iter().next_back().ok_or(Error::TipOfZero)
    }

    /// Largest monomial under an arbitrary order.
    pub fn tip_under(&self, ord: &AdmissibleOrder) -> Result<(&Path, &Scalar)> {
        self.terms
            .iter()
            .max_by(|a, b| compare(ord, a.0, b.0))
            .ok_or(Error::TipOfZero)
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Path::len).max().unwrap_or(0)
    }

    pub fn min_len(&self) -> usize {
        self.terms.keys().map(Path::len).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.max_len() == self.min_len()
    }

    /// Scales so that the tip coefficient is 1.
    pub fn monic(&self) -> Result<FreeElement> {
        let (_, c) = self.tip()?;
        let inv = c.inverse().ok_or(Error::TipOfZero)?;
        Ok(self.scaled(&inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example42() -> Quiver {
        // canonical: a > b > b' > a'
        Quiver::from_labels(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("b'", "3", "2"), ("a'", "2", "1")],
        )
        .unwrap()
    }

    #[test]
    fn vertex_is_identity() {
        let q = example42();
        let a = q.arrow_path(0);
        assert_eq!(q.vertex(0).compose(&a), Some(a.clone()));
        assert_eq!(a.compose(&q.vertex(1)), Some(a));
    }

    #[test]
    fn composition_follows_endpoints() {
        let q = example42();
        let a = q.arrow_path(0);
        let b = q.arrow_path(1);
        let ab = a.compose(&b).unwrap();
        assert_eq!(q.fmt_path(&ab), "a*b");
        assert_eq!(ab.len(), 2);
        assert_eq!(b.compose(&a), None);
    }

    #[test]
    fn length_lex_examples() {
        let q = Quiver::one_vertex(&["x2", "x1"]).unwrap();
        let ord = AdmissibleOrder::from_names(&q, &["x2", "x1"]).unwrap();
        let p = q.path_by_names(&["x2", "x1", "x1"]).unwrap();
        let r = q.path_by_names(&["x2", "x2", "x1"]).unwrap();
        assert_eq!(compare(&ord, &p, &r), Ordering::Less);
        assert_eq!(p.cmp(&r), Ordering::Less);
        assert_eq!(compare(&ord, &q.vertex(0), &q.arrow_path(1)), Ordering::Less);

        let q = Quiver::one_vertex(&["x", "y", "z"]).unwrap();
        let ord = AdmissibleOrder::from_names(&q, &["x", "y", "z"]).unwrap();
        let xz = q.path_by_names(&["x", "z"]).unwrap();
        let yy = q.path_by_names(&["y", "y"]).unwrap();
        assert_eq!(compare(&ord, &xz, &yy), Ordering::Greater);
    }

    #[test]
    fn compare_respects_a_non_identity_precedence() {
        let q = Quiver::one_vertex(&["x", "y"]).unwrap();
        let ord = AdmissibleOrder::from_names(&q, &["y", "x"]).unwrap();
        assert_eq!(compare(&ord, &q.arrow_path(0), &q.arrow_path(1)), Ordering::Less);
    }

    #[test]
    fn multiply_examples() {
        let q = example42();
        let f = Field::Rational;
        let a = FreeElement::monomial(q.arrow_path(0), f.one());
        let b = FreeElement::monomial(q.arrow_path(1), f.one());
        let e3 = FreeElement::monomial(q.vertex(2), f.one());
        assert_eq!(a.add(&b).multiply(&e3), b);
        let six_ab = a.scaled(&f.from_i64(2)).multiply(&b.scaled(&f.from_i64(3)));
        assert_eq!(q.fmt_element(&six_ab), "6*a*b");
    }

    #[test]
    fn tip_examples() {
        let q = example42();
        let f = Field::Rational;
        let r = q.parse_element(f, "b*b' - a'*a").unwrap();
        let (t, c) = r.tip().unwrap();
        assert_eq!(q.fmt_path(t), "b*b'");
        assert!(c.is_one());
        let v = q.parse_element(f, "5*e_1").unwrap();
        assert_eq!(v.tip().unwrap().1, &f.from_i64(5));
        assert_eq!(FreeElement::zero().tip(), Err(Error::TipOfZero));
    }

    #[test]
    fn element_round_trips_through_text() {
        let q = Quiver::one_vertex(&["x", "y", "z"]).unwrap();
        let f = Field::Rational;
        let x = q.parse_element(f, "-2*x*y + 1/2*z - y*x").unwrap();
        let text = q.fmt_element(&x);
        assert_eq!(text, "-2*x*y - y*x + 1/2*z");
        assert_eq!(q.parse_element(f, &text).unwrap(), x);
    }

    #[test]
    fn parse_errors_carry_columns() {
        let q = Quiver::one_vertex(&["x", "y"]).unwrap();
        match q.parse_element(Field::Rational, "x*y + w*x") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(q.parse_element(Field::Rational, "").is_err());
        assert!(q.parse_element(Field::Rational, "x y").is_err());
    }

    #[test]
    fn quiver_validation() {
        assert!(Quiver::from_labels(&["1", "1"], &[]).is_err());
        assert!(Quiver::from_labels(&["1"], &[("a", "1", "2")]).is_err());
        assert!(Quiver::from_labels(&["1"], &[("a", "1", "1"), ("a", "1", "1")]).is_err());
        assert!(Quiver::from_labels(&["1"], &[("e_x", "1", "1")]).is_err());
    }
}
