//! The subcommands. Each returns its report in text and structured form and
//! whether every check it ran passed.

use anick_core::anick::{
    anick_resolution, anick_resolution_with_transfer, betti, gldim, minimality_criterion, minimality_direct,
    verify_transfer, BettiTable, GlDim, Resolution, Verdict,
};
use anick_core::bimodule::{Algebra, BimoduleWeight};
use anick_core::chains::{enumerate_chains, UfGraph};
use anick_core::gsb::verify_gsb_up_to;
use anick_core::hpl::random::{random_sdr, random_small_perturbation};
use anick_core::hpl::{verify_hpl, DatumFlags, GradedMap, HplReport, HrDatum};
use anick_core::morse::{morse_reduce, validate_matching, verify_equivalence, BasedComplex};
use anick_core::{Certificate, Error, Field, GroebnerData, Presentation, Quiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fmt::Write;

use crate::error::CliResult;
use crate::files::{ComplexFile, DatumFile, PresentationFile, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Debug)]
pub struct Output {
    pub text: String,
    pub structured: Value,
    pub ok: bool,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&self.structured).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

fn header(kind: &str, body: Value) -> Value {
    let mut v = json!({ "format": format!("anick-{kind}"), "version": VERSION });
    if let (Value::Object(head), Value::Object(rest)) = (&mut v, body) {
        head.extend(rest);
    }
    v
}

fn certificate(c: Certificate) -> String {
    match c {
        Certificate::Complete => "complete".into(),
        Certificate::UpTo(d) => format!("up to degree {d}"),
    }
}

fn cap_of(d: Option<usize>) -> String {
    d.map_or("none".into(), |d| d.to_string())
}

/// A truncated basis needs an explicit degree cap within its certificate.
fn require_cap(g: &GroebnerData, max_degree: Option<usize>) -> CliResult<()> {
    if let Certificate::UpTo(cap) = g.certificate() {
        match max_degree {
            None => {
                return Err(Error::CapRequired(format!("the basis is certified only up to degree {cap}; pass --max-degree")).into())
            }
            Some(d) if d > cap => return Err(Error::BeyondCap { degree: d, cap }.into()),
            Some(_) => {}
        }
    }
    Ok(())
}

pub fn check_gsb(p: &Presentation, max_degree: Option<usize>) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    let q = g.quiver();
    let violations = g.check_reduced();
    let overlap = max_degree.map(|d| verify_gsb_up_to(&g, d));
    let mut text = String::new();
    writeln!(text, "basis ({} elements), certificate {}", g.basis().len(), certificate(g.certificate())).unwrap();
    for b in g.basis() {
        writeln!(text, "  {}", q.fmt_element(b)).unwrap();
    }
    if violations.is_empty() {
        writeln!(text, "reduced: yes").unwrap();
    } else {
        for v in &violations {
            writeln!(text, "not reduced: {}", v.describe(q, g.basis())).unwrap();
        }
    }
    let overlap_json = match &overlap {
        None => Value::Null,
        Some(Ok(c)) => {
            writeln!(text, "overlaps resolve {}", certificate(*c)).unwrap();
            json!({ "holds": true, "certificate": certificate(*c) })
        }
        Some(Err(cx)) => {
            writeln!(text, "overlap fails: {}", cx.describe(q)).unwrap();
            json!({ "holds": false, "counterexample": cx.describe(q) })
        }
    };
    let ok = violations.is_empty() && !matches!(overlap, Some(Err(_)));
    let structured = header(
        "gsb-report",
        json!({
            "basis": g.basis().iter().map(|b| q.fmt_element(b)).collect::<Vec<_>>(),
            "tips": g.tips().iter().map(|t| q.fmt_path(t)).collect::<Vec<_>>(),
            "certificate": certificate(g.certificate()),
            "reduced": violations.is_empty(),
            "violations": violations.iter().map(|v| v.describe(q, g.basis())).collect::<Vec<_>>(),
            "overlaps": overlap_json,
        }),
    );
    Ok(Output { text, structured, ok })
}

pub fn chains(p: &Presentation, max_weight: usize, max_degree: Option<usize>) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    require_cap(&g, max_degree)?;
    let q = g.quiver();
    let graph = UfGraph::build(&g)?;
    let set = enumerate_chains(&g, &graph, max_weight, max_degree);
    let mut text = String::new();
    let mut levels = Vec::new();
    for (n, level) in set.levels.iter().enumerate() {
        writeln!(text, "W^({}) weight {n}: {} chains", n as isize - 1, level.len()).unwrap();
        for c in level {
            writeln!(text, "  {} [degree {}]", c.display(q), c.degree()).unwrap();
        }
        levels.push(json!({
            "weight": n,
            "chains": level.iter().map(|c| json!({ "chain": c.display(q), "degree": c.degree() })).collect::<Vec<_>>(),
        }));
    }
    if set.next_level_nonempty {
        writeln!(text, "weight {} is nonempty", max_weight + 1).unwrap();
    }
    let structured = header(
        "chains",
        json!({
            "maxWeight": max_weight,
            "maxDegree": max_degree,
            "levels": levels,
            "nextLevelNonempty": set.next_level_nonempty,
        }),
    );
    Ok(Output { text, structured, ok: true })
}

fn weight_terms(w: &BimoduleWeight, q: &Quiver) -> Vec<(String, String, String)> {
    w.terms().map(|(l, r, c)| (c.to_string(), q.fmt_path(l), q.fmt_path(r))).collect()
}

/// Cells per level, then `(row, col, [(λ, left, right)…])` per differential
/// with rows the source chains and columns the target chains.
pub fn dump_resolution(res: &Resolution, q: &Quiver) -> (String, Value) {
    let mut text = String::new();
    let mut cells = Vec::new();
    for (n, level) in res.levels.iter().enumerate() {
        writeln!(text, "P_{n}: {} cells", level.len()).unwrap();
        for (i, c) in level.iter().enumerate() {
            writeln!(text, "  {i} {} [degree {}]", c.display(q), c.degree()).unwrap();
        }
        cells.push(level.iter().map(|c| json!({ "chain": c.display(q), "degree": c.degree() })).collect::<Vec<_>>());
    }
    let mut entries = Vec::new();
    for n in 1..res.levels.len() {
        writeln!(text, "d_{n}:").unwrap();
        for (row, im) in res.differential[n].iter().enumerate() {
            for (t, w) in im {
                let col = res.position(t).expect("targets are chains of the resolution");
                let terms = weight_terms(w, q);
                let shown: Vec<String> = terms.iter().map(|(c, l, r)| format!("({c}, {l}, {r})")).collect();
                writeln!(text, "  ({row}, {col}, [{}])", shown.join(", ")).unwrap();
                entries.push(json!({ "degree": n, "row": row, "col": col, "terms": terms }));
            }
        }
    }
    (text, json!({ "cells": cells, "entries": entries }))
}

fn resolution_summary(res: &Resolution) -> String {
    format!(
        "length {} cap {} complete {} homogeneous {} certified window {}\n",
        res.length,
        cap_of(res.degree_cap),
        res.complete,
        res.homogeneous,
        cap_of(res.certified_window)
    )
}

pub fn resolve(p: &Presentation, length: usize, max_degree: Option<usize>, transfer_maps: bool) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    let q = g.quiver();
    let alg = Algebra::new(&g);
    let (res, transfer) = if transfer_maps {
        let (r, t) = anick_resolution_with_transfer(&g, length, max_degree)?;
        (r, Some(t))
    } else {
        (anick_resolution(&g, length, max_degree)?, None)
    };
    let mut text = format!("field {}\n", g.field().name());
    text.push_str(&resolution_summary(&res));
    let (dump, mut structured) = dump_resolution(&res, q);
    text.push_str(&dump);
    let bad = res.check_d_squared(&alg)?;
    if bad.is_empty() {
        writeln!(text, "d∘d = 0: holds").unwrap();
    } else {
        for (c, _) in &bad {
            writeln!(text, "d∘d = 0 fails on {}", c.display(q)).unwrap();
        }
    }
    let mut ok = bad.is_empty();
    let transfer_json = match &transfer {
        None => Value::Null,
        Some(t) => {
            let failures = verify_transfer(&alg, &res, t)?;
            if failures.is_empty() {
                writeln!(text, "transfer maps: gf = 1 and df = fd hold").unwrap();
            }
            for f in &failures {
                writeln!(text, "transfer maps: {f}").unwrap();
            }
            ok &= failures.is_empty();
            json!({ "holds": failures.is_empty(), "failures": failures })
        }
    };
    let body = structured.as_object_mut().unwrap();
    body.insert("field".into(), json!(g.field().name()));
    body.insert("length".into(), json!(res.length));
    body.insert("maxDegree".into(), json!(res.degree_cap));
    body.insert("complete".into(), json!(res.complete));
    body.insert("homogeneous".into(), json!(res.homogeneous));
    body.insert("certifiedWindow".into(), json!(res.certified_window));
    body.insert(
        "dSquared".into(),
        json!({ "holds": bad.is_empty(), "failures": bad.iter().map(|(c, _)| c.display(q)).collect::<Vec<_>>() }),
    );
    body.insert("transfer".into(), transfer_json);
    Ok(Output {
        text,
        structured: header("resolution", structured),
        ok,
    })
}

fn verdict(v: &Verdict, q: &Quiver) -> (String, Value) {
    match v {
        Verdict::Unconditional => ("holds (weight at most two)".into(), json!({ "holds": true, "reason": "unconditional" })),
        Verdict::ByDegree => ("holds (by degree)".into(), json!({ "holds": true, "reason": "degree" })),
        Verdict::Holds => ("holds".into(), json!({ "holds": true, "reason": "no reduction" })),
        Verdict::Fails { source, target, steps } => {
            let path: Vec<String> = steps.iter().map(|s| q.fmt_path(s)).collect();
            (
                format!("fails: {} reduces to {} via {}", source.display(q), target.display(q), path.join(" -> ")),
                json!({ "holds": false, "source": source.display(q), "target": target.display(q), "steps": path }),
            )
        }
    }
}

/// Exit status follows `minimality_direct`: the resolution is minimal
/// through the computed length.
pub fn minimality(p: &Presentation, length: usize, max_degree: Option<usize>) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    let q = g.quiver();
    let res = anick_resolution(&g, length, max_degree)?;
    let graph = UfGraph::build(&g)?;
    let set = enumerate_chains(&g, &graph, length, max_degree);
    let verdicts = minimality_criterion(&g, &set);
    let witnesses = minimality_direct(&res);
    let mut text = resolution_summary(&res);
    let mut crit = Vec::new();
    for (n, v) in verdicts.iter().enumerate() {
        let (line, val) = verdict(v, q);
        writeln!(text, "criterion at weight {n}: {line}").unwrap();
        crit.push(val);
    }
    if witnesses.is_empty() {
        writeln!(text, "direct: minimal through length {length}").unwrap();
    }
    for w in &witnesses {
        writeln!(
            text,
            "direct: not minimal, {} -> {} with scalar {}",
            w.source.display(q),
            w.target.display(q),
            w.coefficient
        )
        .unwrap();
    }
    let structured = header(
        "minimality",
        json!({
            "length": length,
            "maxDegree": max_degree,
            "criterion": crit,
            "minimal": witnesses.is_empty(),
            "witnesses": witnesses.iter().map(|w| json!({
                "source": w.source.display(q),
                "target": w.target.display(q),
                "coefficient": w.coefficient.to_string(),
            })).collect::<Vec<_>>(),
        }),
    );
    Ok(Output {
        text,
        structured,
        ok: witnesses.is_empty(),
    })
}

fn betti_report(t: &BettiTable) -> (String, Value) {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (n, by) in t.by_degree.iter().enumerate() {
        if t.graded {
            let parts: Vec<String> = by.iter().map(|(d, b)| format!("{b}@{d}")).collect();
            writeln!(text, "beta_{n} = {} [{}]", t.total(n), parts.join(", ")).unwrap();
        } else {
            writeln!(text, "beta_{n} = {}", t.total(n)).unwrap();
        }
        rows.push(json!({
            "n": n,
            "total": t.total(n),
            "byDegree": by.iter().map(|(d, b)| json!([d, b])).collect::<Vec<_>>(),
        }));
    }
    (text, json!({ "graded": t.graded, "betti": rows }))
}

pub fn betti_cmd(p: &Presentation, length: usize, max_degree: Option<usize>) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    let res = anick_resolution(&g, length, max_degree)?;
    let t = betti(&res, g.quiver());
    let (body, mut structured) = betti_report(&t);
    let text = resolution_summary(&res) + &body;
    structured.as_object_mut().unwrap().insert("length".into(), json!(length));
    Ok(Output {
        text,
        structured: header("betti", structured),
        ok: true,
    })
}

pub fn gldim_cmd(p: &Presentation, length: Option<usize>, max_degree: Option<usize>) -> CliResult<Output> {
    let g = GroebnerData::new(p)?;
    let (text, body) = match gldim(&g, length, max_degree)? {
        GlDim::Exact(n) => (format!("gldim = {n}\n"), json!({ "exact": n })),
        GlDim::Bounds { lower, upper } => (
            format!("{lower} <= gldim <= {}\n", upper.map_or("?".into(), |u| u.to_string())),
            json!({ "lower": lower, "upper": upper }),
        ),
    };
    Ok(Output {
        text,
        structured: header("gldim", body),
        ok: true,
    })
}

fn complex_dump(x: &BasedComplex, q: &Quiver, cells: &[Vec<usize>]) -> (String, Value) {
    let mut text = String::new();
    let mut levels = Vec::new();
    for n in 0..x.len() {
        let labels: Vec<String> = x.cells(n).iter().map(|c| c.label.clone()).collect();
        writeln!(text, "degree {n}: {}", labels.join(", ")).unwrap();
        levels.push(labels);
    }
    let mut arrows = Vec::new();
    for n in 1..x.len() {
        for (from, to, w) in x.arrows(n) {
            writeln!(text, "  d_{n}({}) ∋ {} · {}", x.cells(n)[from].label, w.display(q), x.cells(n - 1)[to].label).unwrap();
            arrows.push(json!({ "degree": n, "from": from, "to": to, "weight": w.display(q) }));
        }
    }
    let critical: Vec<Vec<usize>> = cells.to_vec();
    (text, json!({ "cells": levels, "arrows": arrows, "critical": critical }))
}

pub fn morse(file: &ComplexFile) -> CliResult<Output> {
    let (p, x, m) = file.build()?;
    let violations = validate_matching(&x, &m);
    if let Some(v) = violations.first() {
        return Err(Error::InvalidMatching(format!("{v:?}")).into());
    }
    let g = GroebnerData::new(&p)?;
    let alg = Algebra::new(&g);
    let q = g.quiver();
    let r = morse_reduce(&x, &m, &alg)?;
    let failures = verify_equivalence(&x, &r, &alg)?;
    let d2 = r.reduced.check_d_squared(&alg)?;
    let (mut text, mut body) = complex_dump(&r.reduced, q, &r.critical);
    text.insert_str(0, "reduced complex\n");
    if d2.is_empty() {
        writeln!(text, "d∘d = 0: holds").unwrap();
    } else {
        writeln!(text, "d∘d = 0 fails on {} cells", d2.len()).unwrap();
    }
    if failures.is_empty() {
        writeln!(text, "equivalence: gf = 1, fg - 1 = dθ + θd, chain maps hold").unwrap();
    }
    for f in &failures {
        writeln!(text, "equivalence: {f}").unwrap();
    }
    let o = body.as_object_mut().unwrap();
    o.insert("dSquared".into(), json!(d2.is_empty()));
    o.insert("equivalence".into(), json!({ "holds": failures.is_empty(), "failures": failures }));
    Ok(Output {
        text,
        structured: header("morse", body),
        ok: failures.is_empty() && d2.is_empty(),
    })
}

fn flags(f: &DatumFlags) -> Value {
    json!({ "hr": f.hr, "sqi": f.sqi, "he": f.he, "dr": f.dr, "sdr": f.sdr, "level": f.level() })
}

fn hpl_report(r: &HplReport, text: &mut String) -> Value {
    writeln!(
        text,
        "datum {} -> perturbed {}",
        r.original.level().unwrap_or("none"),
        r.perturbed.level().unwrap_or("none")
    )
    .unwrap();
    for c in &r.checks {
        match c.failing_degree {
            None if c.holds => writeln!(text, "  {}: holds", c.name).unwrap(),
            Some(n) => writeln!(text, "  {}: fails in degree {n}", c.name).unwrap(),
            None => writeln!(text, "  {}: fails", c.name).unwrap(),
        }
    }
    json!({
        "original": flags(&r.original),
        "perturbed": flags(&r.perturbed),
        "checks": r.checks.iter().map(|c| json!({ "name": c.name, "holds": c.holds, "failingDegree": c.failing_degree })).collect::<Vec<_>>(),
        "allHold": r.all_hold(),
    })
}

pub fn hpl_file(file: &DatumFile) -> CliResult<Output> {
    let (d, delta, k) = file.build()?;
    let delta = delta.unwrap_or_else(|| GradedMap::zero(d.field(), d.m_dims(), d.m_dims(), -1));
    let r = verify_hpl(&d, &delta, k.as_ref())?;
    let mut text = String::new();
    let body = hpl_report(&r, &mut text);
    Ok(Output {
        text,
        structured: header("hpl-report", body),
        ok: r.all_hold(),
    })
}

/// Settings of the seeded random suite.
pub const RANDOM_DEGREES: usize = 4;
pub const RANDOM_MAX_DIM: usize = 6;
pub const PERTURBATION_TRIES: usize = 200;

/// One seeded random SDR datum with a small perturbation. `None` if no
/// small perturbation turned up.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (HrDatum, Option<GradedMap>) {
    let d = random_sdr(Field::Rational, RANDOM_DEGREES, RANDOM_MAX_DIM, rng);
    let delta = random_small_perturbation(&d, PERTURBATION_TRIES, rng);
    (d, delta)
}

pub fn hpl_random(trials: usize, seed: u64) -> CliResult<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut ok = true;
    for t in 0..trials {
        let (d, delta) = random_instance(&mut rng);
        write!(text, "trial {t}: ").unwrap();
        let Some(delta) = delta else {
            writeln!(text, "no small perturbation found").unwrap();
            reports.push(Value::Null);
            ok = false;
            continue;
        };
        let r = verify_hpl(&d, &delta, None)?;
        ok &= r.all_hold();
        reports.push(hpl_report(&r, &mut text));
    }
    let structured = header("hpl-random", json!({ "trials": trials, "seed": seed, "reports": reports }));
    Ok(Output { text, structured, ok })
}

pub fn builtin(name: &str, field: Field) -> CliResult<Output> {
    let p = anick_core::anick::builtins::builtin(field, name)
        .ok_or_else(|| Error::InvalidPresentation(format!("unknown builtin `{name}`")))??;
    let file = PresentationFile::from_presentation(&p);
    let text = file.to_toml();
    Ok(Output {
        structured: serde_json::to_value(&file).expect("presentation files serialize"),
        text,
        ok: true,
    })
}
