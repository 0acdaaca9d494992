//! On-disk formats: presentations in TOML, complexes and HPL data in JSON.
//! Every file carries a `format` name and a `version`.

use std::collections::HashMap;

use anick_core::bimodule::parse_weight;
use anick_core::hpl::{GradedMap, HrDatum};
use anick_core::matrix::Matrix;
use anick_core::morse::{BasedComplex, Cell, PartialMatching};
use anick_core::{Error, Field, Presentation, Quiver};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const VERSION: u32 = 1;
pub const PRESENTATION_FORMAT: &str = "anick-presentation";
pub const COMPLEX_FORMAT: &str = "anick-complex";
pub const DATUM_FORMAT: &str = "anick-hpl-datum";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct PresentationFile {
    pub format: String,
    pub version: u32,
    /// `Q` or `Fp:<prime>`.
    pub field: String,
    pub vertices: Vec<String>,
    /// Arrow precedence, highest first.
    pub order: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub family_closed: bool,
    pub arrows: Vec<ArrowSpec>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

fn check_header(format: &str, version: u32, want: &str) -> CliResult<()> {
    if format != want {
        return Err(CliError::Usage(format!("expected format `{want}`, found `{format}`")));
    }
    if version != VERSION {
        return Err(CliError::Usage(format!("unsupported {want} version {version}")));
    }
    Ok(())
}

impl PresentationFile {
    pub fn parse(text: &str) -> CliResult<PresentationFile> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            CliError::File {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("presentation files serialize")
    }

    pub fn from_presentation(p: &Presentation) -> PresentationFile {
        let q = &p.quiver;
        let v = |i: u32| q.vertices()[i as usize].clone();
        PresentationFile {
            format: PRESENTATION_FORMAT.into(),
            version: VERSION,
            field: p.field.name(),
            vertices: q.vertices().to_vec(),
            order: q.arrows().iter().map(|a| a.name.clone()).collect(),
            relations: p.relations.iter().map(|r| q.fmt_element(r)).collect(),
            basis: p.basis.as_ref().map(|b| b.iter().map(|g| q.fmt_element(g)).collect()),
            degree_cap: p.degree_cap,
            family_closed: p.family_closed,
            arrows: q
                .arrows()
                .iter()
                .map(|a| ArrowSpec {
                    name: a.name.clone(),
                    source: v(a.source),
                    target: v(a.target),
                })
                .collect(),
        }
    }

    /// Builds the presentation. `source` is the file text, used to place
    /// element parse errors on their line.
    pub fn to_presentation(&self, source: Option<&str>) -> CliResult<Presentation> {
        check_header(&self.format, self.version, PRESENTATION_FORMAT)?;
        let field = Field::parse_name(&self.field)?;
        let vertices: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let arrows: Vec<(&str, &str, &str)> = self
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.source.as_str(), a.target.as_str()))
            .collect();
        let order: Vec<&str> = self.order.iter().map(String::as_str).collect();
        let mut p = Presentation::new(field, &vertices, &arrows, &order)?;
        let locate = |text: &str, e: Error| -> CliError {
            match (e, source) {
                (Error::Parse { column, message, .. }, Some(src)) => {
                    let quoted = format!("\"{text}\"");
                    match src.find(&quoted) {
                        Some(at) => {
                            let (line, col) = line_col(src, at + 1);
                            CliError::File {
                                line,
                                column: col + column.saturating_sub(1),
                                message,
                            }
                        }
                        None => CliError::File { line: 0, column, message },
                    }
                }
                (e, _) => CliError::Core(e),
            }
        };
        for r in &self.relations {
            let x = p.element(r).map_err(|e| locate(r, e))?;
            p.add_relation(x)?;
        }
        if let Some(basis) = &self.basis {
            let texts: Vec<&str> = basis.iter().map(String::as_str).collect();
            for t in &texts {
                p.element(t).map_err(|e| locate(t, e))?;
            }
            p = p.with_basis(&texts)?;
        }
        p.degree_cap = self.degree_cap;
        p.family_closed = self.family_closed;
        Ok(p)
    }
}

pub fn read_presentation(path: &str) -> CliResult<Presentation> {
    let text = read(path)?;
    PresentationFile::parse(&text)?.to_presentation(Some(&text))
}

pub fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub label: String,
    /// Vertex labels of the frame `e_source ⊗ e_target`.
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowEntry {
    /// Homological degree of the source cell.
    pub degree: usize,
    pub from: usize,
    pub to: usize,
    /// `λ*l⊗r + …` with `1` for the frame vertices.
    pub weight: String,
}

/// A based complex with a matching over a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub format: String,
    pub version: u32,
    pub presentation: PresentationFile,
    pub cells: Vec<Vec<CellSpec>>,
    pub arrows: Vec<ArrowEntry>,
    /// `[degree of source, source index, target index]`.
    #[serde(default)]
    pub matching: Vec<[usize; 3]>,
}

impl ComplexFile {
    pub fn new(p: &Presentation, x: &BasedComplex, m: &PartialMatching) -> ComplexFile {
        let q = &p.quiver;
        let v = |i: u32| q.vertices()[i as usize].clone();
        let cells = (0..x.len())
            .map(|n| {
                x.cells(n)
                    .iter()
                    .map(|c| CellSpec {
                        label: c.label.clone(),
                        source: v(c.source),
                        target: v(c.target),
                    })
                    .collect()
            })
            .collect();
        let arrows = (1..x.len())
            .flat_map(|n| {
                x.arrows(n).map(move |(from, to, w)| ArrowEntry {
                    degree: n,
                    from,
                    to,
                    weight: w.display(q),
                })
            })
            .collect();
        ComplexFile {
            format: COMPLEX_FORMAT.into(),
            version: VERSION,
            presentation: PresentationFile::from_presentation(p),
            cells,
            arrows,
            matching: m.arrows.iter().map(|&(n, i, j)| [n, i, j]).collect(),
        }
    }

    pub fn parse(text: &str) -> CliResult<ComplexFile> {
        serde_json::from_str(text).map_err(|e| CliError::File {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex files serialize")
    }

    pub fn build(&self) -> CliResult<(Presentation, BasedComplex, PartialMatching)> {
        check_header(&self.format, self.version, COMPLEX_FORMAT)?;
        let p = self.presentation.to_presentation(None)?;
        let q: &Quiver = &p.quiver;
        let vertex = |label: &str| {
            q.vertex_id(label)
                .ok_or_else(|| CliError::Usage(format!("unknown vertex `{label}`")))
        };
        let mut x = BasedComplex::new(p.field);
        for (n, level) in self.cells.iter().enumerate() {
            for c in level {
                x.add_cell(
                    n,
                    Cell {
                        label: c.label.clone(),
                        source: vertex(&c.source)?,
                        target: vertex(&c.target)?,
                    },
                );
            }
        }
        for a in &self.arrows {
            if a.degree == 0 || a.from >= x.cells(a.degree).len() || a.to >= x.cells(a.degree - 1).len() {
                return Err(CliError::Usage(format!(
                    "arrow ({}, {}) -> {} has no endpoints",
                    a.degree, a.from, a.to
                )));
            }
            let src = x.cell((a.degree, a.from));
            let w = parse_weight(q, p.field, &a.weight, src.source, src.target)?;
            x.add_arrow(a.degree, a.from, a.to, &w);
        }
        let mut m = PartialMatching::new();
        for &[n, i, j] in &self.matching {
            m.insert(n, i, j);
        }
        Ok((p, x, m))
    }
}

/// A block matrix as rows of scalar strings.
pub type Rows = Vec<Vec<String>>;

/// An HPL datum, optionally with a perturbation and a homotopy `k` on `L`,
/// each map given by its blocks per source degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumFile {
    pub format: String,
    pub version: u32,
    pub field: String,
    pub l: Vec<usize>,
    pub m: Vec<usize>,
    pub bl: Vec<Rows>,
    pub bm: Vec<Rows>,
    pub i: Vec<Rows>,
    pub p: Vec<Rows>,
    pub h: Vec<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<Rows>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<Rows>>,
}

fn to_rows(g: &GradedMap) -> Vec<Rows> {
    g.blocks()
        .iter()
        .map(|b| {
            (0..b.rows())
                .map(|r| (0..b.cols()).map(|c| b.get(r, c).to_string()).collect())
                .collect()
        })
        .collect()
}

fn from_rows(field: Field, src: &[usize], tgt: &[usize], shift: i32, blocks: &[Rows]) -> CliResult<GradedMap> {
    let mut mats = Vec::with_capacity(blocks.len());
    for (n, rows) in blocks.iter().enumerate() {
        let cols = src.get(n).copied().unwrap_or(0);
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!("block {n} rows must have {cols} entries")).into());
        }
        mats.push(Matrix::from_rows(field, cols, parsed));
    }
    Ok(GradedMap::from_blocks(field, src, tgt, shift, mats)?)
}

impl DatumFile {
    pub fn new(d: &HrDatum, delta: Option<&GradedMap>, k: Option<&GradedMap>) -> DatumFile {
        DatumFile {
            format: DATUM_FORMAT.into(),
            version: VERSION,
            field: d.field().name(),
            l: d.l_dims().to_vec(),
            m: d.m_dims().to_vec(),
            bl: to_rows(&d.bl),
            bm: to_rows(&d.bm),
            i: to_rows(&d.i),
            p: to_rows(&d.p),
            h: to_rows(&d.h),
            delta: delta.map(to_rows),
            k: k.map(to_rows),
        }
    }

    pub fn parse(text: &str) -> CliResult<DatumFile> {
        serde_json::from_str(text).map_err(|e| CliError::File {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datum files serialize")
    }

    pub fn build(&self) -> CliResult<(HrDatum, Option<GradedMap>, Option<GradedMap>)> {
        check_header(&self.format, self.version, DATUM_FORMAT)?;
        let f = Field::parse_name(&self.field)?;
        let (l, m) = (&self.l, &self.m);
        let d = HrDatum {
            bl: from_rows(f, l, l, -1, &self.bl)?,
            bm: from_rows(f, m, m, -1, &self.bm)?,
            i: from_rows(f, l, m, 0, &self.i)?,
            p: from_rows(f, m, l, 0, &self.p)?,
            h: from_rows(f, m, m, 1, &self.h)?,
        };
        d.check_shapes()?;
        let delta = self.delta.as_ref().map(|b| from_rows(f, m, m, -1, b)).transpose()?;
        let k = self.k.as_ref().map(|b| from_rows(f, l, l, 1, b)).transpose()?;
        Ok((d, delta, k))
    }
}

/// Vertex labels of a quiver, by id.
pub fn vertex_labels(q: &Quiver) -> HashMap<u32, String> {
    (0..q.vertex_count() as u32).map(|v| (v, q.vertices()[v as usize].clone())).collect()
}
