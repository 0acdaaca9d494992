use anick_core::anick::builtins::{chinese, example42, iyudu_shkarin};
use anick_core::anick::{anick_resolution, Resolution};
use anick_core::bimodule::Algebra;
use anick_core::matrix::sparse_rank;
use anick_core::{compare, Field, FreeElement, GroebnerData, Path, Presentation, Quiver, Scalar};
use proptest::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeMap;

const Q: Field = Field::Rational;

fn corpus() -> Vec<(&'static str, Presentation)> {
    vec![
        ("example42", example42(Q).unwrap()),
        ("chinese2", chinese(Q, 2).unwrap()),
        ("iyudu-shkarin", iyudu_shkarin(Q, 7).unwrap()),
    ]
}

/// A path from walking the quiver: `start` picks the vertex, each step picks
/// among the outgoing arrows (stopping at sinks).
fn walk(q: &Quiver, start: usize, steps: &[usize]) -> Path {
    let mut p = q.vertex((start % q.vertex_count()) as u32);
    for s in steps {
        let out: Vec<u32> = (0..q.arrow_count() as u32).filter(|&a| q.arrow(a).source == p.target()).collect();
        if out.is_empty() {
            break;
        }
        p = p.compose(&q.arrow_path(out[s % out.len()])).unwrap();
    }
    p
}

fn element(q: &Quiver, terms: &[(usize, Vec<usize>, i64)], from: Option<u32>) -> FreeElement {
    let mut x = FreeElement::zero();
    for (start, steps, c) in terms {
        let start = from.map_or(*start, |v| v as usize);
        x.add_term(walk(q, start, steps), Q.from_i64(*c));
    }
    x
}

fn terms_strategy(max_len: usize) -> impl Strategy<Value = Vec<(usize, Vec<usize>, i64)>> {
    prop::collection::vec((0usize..4, prop::collection::vec(0usize..4, 0..=max_len), -3i64..=3), 1..5)
}

fn paths_of_length(q: &Quiver, d: usize) -> Vec<Path> {
    let mut level: Vec<Path> = (0..q.vertex_count() as u32).map(|v| q.vertex(v)).collect();
    for _ in 0..d {
        level = level
            .iter()
            .flat_map(|p| (0..q.arrow_count() as u32).filter_map(move |a| p.compose(&q.arrow_path(a))))
            .collect();
    }
    level
}

/// `dim (kQ/I)_d` from the span of `u·r·v` over the defining relations,
/// without any Gröbner basis.
fn dim_by_linear_algebra(p: &Presentation, d: usize) -> usize {
    let q = &p.quiver;
    let all = paths_of_length(q, d);
    let col: BTreeMap<&Path, usize> = all.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut rows = Vec::new();
    for r in &p.relations {
        let k = r.max_len();
        if k > d {
            continue;
        }
        for a in 0..=d - k {
            for u in paths_of_length(q, a) {
                for v in paths_of_length(q, d - k - a) {
                    let s = r.sandwich(&u, &v);
                    if s.is_zero() {
                        continue;
                    }
                    let row: BTreeMap<usize, Scalar> = s.terms().map(|(p, c)| (col[p], c.clone())).collect();
                    rows.push(row);
                }
            }
        }
    }
    all.len() - sparse_rank(Q, rows)
}

#[test]
fn graded_dimensions_match_linear_algebra() {
    for (name, p) in corpus() {
        let g = GroebnerData::new(&p).unwrap();
        for d in 0..=6 {
            assert_eq!(g.nontips_of_degree(d).len(), dim_by_linear_algebra(&p, d), "{name} degree {d}");
        }
    }
}

#[test]
fn chinese_rank_three_certificate_through_degree_eight() {
    let p = chinese(Q, 3).unwrap();
    let g = GroebnerData::new(&p).unwrap();
    assert_eq!(g.basis().len(), 9);
    assert!(anick_core::gsb::verify_gsb_up_to(&g, 8).is_ok());
    for d in 0..=8 {
        assert_eq!(g.nontips_of_degree(d).len(), dim_by_linear_algebra(&p, d), "degree {d}");
    }
}

#[test]
fn d_squared_vanishes_on_the_corpus() {
    let runs: Vec<(Presentation, usize, Option<usize>)> = vec![
        (example42(Q).unwrap(), 5, Some(6)),
        (chinese(Q, 2).unwrap(), 3, None),
        (iyudu_shkarin(Q, 4).unwrap(), 4, Some(6)),
    ];
    for (p, n, d) in runs {
        let g = GroebnerData::new(&p).unwrap();
        let alg = Algebra::new(&g);
        let res: Resolution = anick_resolution(&g, n, d).unwrap();
        assert!(res.check_d_squared(&alg).unwrap().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn order_is_total_and_admissible(
        case in 0usize..3,
        a in (0usize..4, prop::collection::vec(0usize..4, 0..6)),
        b in (0usize..4, prop::collection::vec(0usize..4, 0..6)),
        c in (0usize..4, prop::collection::vec(0usize..4, 0..6)),
        u in prop::collection::vec(0usize..4, 0..4),
    ) {
        let (_, p) = &corpus()[case];
        let q = &p.quiver;
        let (x, y, z) = (walk(q, a.0, &a.1), walk(q, b.0, &b.1), walk(q, c.0, &c.1));
        let ord = |s: &Path, t: &Path| s.cmp(t);
        prop_assert_eq!(ord(&x, &y), ord(&y, &x).reverse());
        prop_assert_eq!(ord(&x, &y) == Ordering::Equal, x == y);
        if ord(&x, &y) != Ordering::Greater && ord(&y, &z) != Ordering::Greater {
            prop_assert!(ord(&x, &z) != Ordering::Greater);
        }
        // right and left multiplication by a common path preserve the order
        let w = walk(q, 0, &u);
        let (xs, ys) = (walk(q, a.0, &a.1), walk(q, a.0, &b.1));
        if let (Some(xw), Some(yw)) = (xs.compose(&w), ys.compose(&w)) {
            prop_assert_eq!(ord(&xw, &yw), ord(&xs, &ys));
        }
        if let (Some(wx), Some(wy)) = (w.compose(&xs), w.compose(&ys)) {
            prop_assert_eq!(ord(&wx, &wy), ord(&xs, &ys));
        }
        prop_assert_eq!(compare(&anick_core::AdmissibleOrder::identity(q.arrow_count()), &x, &y), ord(&x, &y));
    }

    #[test]
    fn tips_are_multiplicative(
        case in 0usize..3,
        f in terms_strategy(4),
        u in prop::collection::vec(0usize..4, 0..3),
        v in prop::collection::vec(0usize..4, 0..3),
    ) {
        let (_, p) = &corpus()[case];
        let q = &p.quiver;
        let x = element(q, &f, Some(0));
        prop_assume!(!x.is_zero());
        let (tip, _) = x.tip().unwrap();
        let left = walk(q, 0, &u);
        prop_assume!(left.target() == 0);
        let right = walk(q, tip.target() as usize, &v);
        let s = x.sandwich(&left, &right);
        prop_assume!(!s.is_zero());
        let expect = left.compose(tip).and_then(|lt| lt.compose(&right)).unwrap();
        prop_assert_eq!(s.tip().unwrap().0, &expect);
    }

    #[test]
    fn reduction_is_idempotent_linear_and_traced(
        case in 0usize..3,
        f in terms_strategy(6),
        h in terms_strategy(6),
        s in -4i64..=4,
    ) {
        let (_, p) = &corpus()[case];
        let q = &p.quiver;
        let g = GroebnerData::new(p).unwrap();
        let x = element(q, &f, None);
        let y = element(q, &h, None);
        let nx = g.reduce(&x).unwrap();
        prop_assert_eq!(g.reduce(&nx).unwrap(), nx.clone());
        prop_assert!(nx.paths().all(|m| g.is_nontip(m)));
        let c = Q.from_i64(s);
        let ny = g.reduce(&y).unwrap();
        prop_assert_eq!(g.reduce(&x.add(&y.scaled(&c))).unwrap(), nx.add(&ny.scaled(&c)));
        let (nf, trace) = g.reduce_traced(&x).unwrap();
        let mut replay = nf.clone();
        for step in &trace {
            replay = replay.add(&g.basis()[step.basis_index].sandwich(&step.left, &step.right).scaled(&step.coefficient));
        }
        prop_assert_eq!(replay, x);
    }

    #[test]
    fn normal_form_product_is_associative(
        case in 0usize..3,
        a in terms_strategy(3),
        b in terms_strategy(3),
        c in terms_strategy(3),
    ) {
        let (_, p) = &corpus()[case];
        let q = &p.quiver;
        let g = GroebnerData::new(p).unwrap();
        let (x, y, z) = (element(q, &a, None), element(q, &b, None), element(q, &c, None));
        let xy_z = g.multiply_mod(&g.multiply_mod(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.multiply_mod(&x, &g.multiply_mod(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
    }
}
