//! Named presentations used throughout the tests, benches and CLI.

use crate::error::Result;
use crate::gsb::Presentation;
use crate::scalar::Field;

/// The three-vertex quiver `a: 1→2, a′: 2→1, b: 2→3, b′: 3→2` modulo
/// `ab, b′a′, a′a − bb′`, ordered `a > b > b′ > a′`.
pub fn example42(field: Field) -> Result<Presentation> {
    Presentation::new(
        field,
        &["1", "2", "3"],
        &[("a", "1", "2"), ("a'", "2", "1"), ("b", "2", "3"), ("b'", "3", "2")],
        &["a", "b", "b'", "a'"],
    )?
    .with_relations(&["a*b", "b'*a'", "a'*a - b*b'"])
}

/// The Chinese algebra of rank `n` on `x1, …, xn` with `xn > … > x1`, with
/// its known Gröbner–Shirshov basis supplied explicitly.
pub fn chinese(field: Field, n: usize) -> Result<Presentation> {
    let names: Vec<String> = (1..=n).rev().map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let x = |i: usize| format!("x{i}");
    let mut relations = Vec::new();
    let mut basis = Vec::new();
    for i in 1..=n {
        for j in 1..i {
            let (xi, xj) = (x(i), x(j));
            for r in [format!("{xi}*{xj}*{xj} - {xj}*{xi}*{xj}"), format!("{xi}*{xi}*{xj} - {xi}*{xj}*{xi}")] {
                relations.push(r.clone());
                basis.push(r);
            }
            for k in 1..j {
                let xk = x(k);
                for r in [
                    format!("{xi}*{xj}*{xk} - {xj}*{xi}*{xk}"),
                    format!("{xi}*{xk}*{xj} - {xj}*{xi}*{xk}"),
                ] {
                    relations.push(r.clone());
                    basis.push(r);
                }
                basis.push(format!("{xi}*{xj}*{xi}*{xk} - {xi}*{xk}*{xi}*{xj}"));
            }
        }
    }
    let rel: Vec<&str> = relations.iter().map(String::as_str).collect();
    let bas: Vec<&str> = basis.iter().map(String::as_str).collect();
    Presentation::free(field, &refs)?.with_relations(&rel)?.with_basis(&bas)
}

/// `k⟨x, y, z⟩ / (x² + yx, xz, zy)` with `x > y > z`, with the basis
/// `x y^k x + y^{k+1} x` for `k ≤ max_k` together with `xz, zy`, certified
/// through degree `max_k + 2`. The family continues for every `k`.
pub fn iyudu_shkarin(field: Field, max_k: usize) -> Result<Presentation> {
    let ys = |k: usize| "y*".repeat(k);
    let mut basis: Vec<String> = (0..=max_k).map(|k| format!("x*{}x + {}y*x", ys(k), ys(k))).collect();
    basis.push("x*z".into());
    basis.push("z*y".into());
    let bas: Vec<&str> = basis.iter().map(String::as_str).collect();
    let mut p = Presentation::free(field, &["x", "y", "z"])?
        .with_relations(&["x*x + y*x", "x*z", "z*y"])?
        .with_basis(&bas)?;
    p.degree_cap = Some(max_k + 2);
    p.family_closed = true;
    Ok(p)
}

/// On `x1 > … > x7`: `x1x2x3 − x6x7, x3x4x5, x6x7x4x5`, whose one-sided
/// Anick differential differs from the previously published formula.
pub fn jw_counterexample(field: Field) -> Result<Presentation> {
    let names = ["x1", "x2", "x3", "x4", "x5", "x6", "x7"];
    Presentation::free(field, &names)?.with_relations(&["x1*x2*x3 - x6*x7", "x3*x4*x5", "x6*x7*x4*x5"])
}

/// On `x1 > … > x5`: `x1x2x3 − x1x5, x2x3x4 − x5x4, x1x5x4`.
pub fn algebra_b(field: Field) -> Result<Presentation> {
    let names = ["x1", "x2", "x3", "x4", "x5"];
    Presentation::free(field, &names)?.with_relations(&["x1*x2*x3 - x1*x5", "x2*x3*x4 - x5*x4", "x1*x5*x4"])
}

/// Names accepted by [`builtin`]; `chinese` and `iyudu-shkarin` take a
/// `:<n>` suffix (rank, family cap).
pub const BUILTINS: &[&str] = &["example42", "chinese:<n>", "iyudu-shkarin:<K>", "jw-counterexample", "algebra-b"];

pub fn builtin(field: Field, name: &str) -> Option<Result<Presentation>> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a.parse::<usize>().ok()?)),
        None => (name, None),
    };
    Some(match (base, arg) {
        ("example42", None) => example42(field),
        ("chinese", Some(n)) if n >= 1 => chinese(field, n),
        ("iyudu-shkarin", Some(k)) => iyudu_shkarin(field, k),
        ("jw-counterexample", None) => jw_counterexample(field),
        ("algebra-b", None) => algebra_b(field),
        _ => return None,
    })
}
