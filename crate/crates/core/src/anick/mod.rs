//! Two-sided Anick resolutions of path algebras with relations.

pub mod bar;
pub mod betti;
pub mod builtins;
pub mod minimality;
pub mod resolution;
pub mod section7;

pub use bar::{bar_differential, canonical_role, materialize, BarCell, BarComplex, ExplicitBar};
pub use betti::{betti, betti_of_complex, gldim, one_sided_homology, BettiTable, GlDim};
pub use minimality::{minimality_criterion, minimality_direct, scalar_entries, ScalarEntry, Verdict, Witness};
pub use resolution::{anick_resolution, anick_resolution_with_transfer, verify_transfer, Resolution, Transfer};
pub use section7::{minimal_section7, section7_matching};

#[cfg(test)]
mod tests {
    use super::builtins::*;
    use super::*;
    use crate::bimodule::{parse_weight, Algebra, BimoduleWeight};
    use crate::chains::{enumerate_chains, Chain, UfGraph};
    use crate::gsb::{GroebnerData, Presentation};
    use crate::morse::{MorseEngine, Role};
    use crate::scalar::Field;

    const Q: Field = Field::Rational;

    fn chain(p: &Presentation, text: &str) -> Chain {
        Chain::new(text.split(',').map(|c| p.path(c)).collect())
    }

    fn weight(p: &Presentation, c: &Chain, text: &str) -> BimoduleWeight {
        parse_weight(&p.quiver, Q, text, c.source(), c.target()).unwrap()
    }

    /// Rows and columns in the displayed order; `perm[k]` is our index of
    /// displayed cell `k` in level 1.
    fn check_matrix(p: &Presentation, res: &Resolution, n: usize, rows: &[&str], cols: &[Chain], entries: &[&[&str]]) {
        for (r, row) in rows.iter().enumerate() {
            let c = if n == 1 { Chain::new(vec![p.path(row)]) } else { chain(p, row) };
            let d = res.d(&c).unwrap();
            for (k, t) in cols.iter().enumerate() {
                let want = weight(p, &c, entries[r][k]);
                let got = d.get(t).cloned().unwrap_or_default();
                assert_eq!(got, want, "entry ({row}, {}) is {}", t.display(&p.quiver), got.display(&p.quiver));
            }
            assert!(d.keys().all(|t| cols.contains(t)));
        }
    }

    #[test]
    fn example44_matrices() {
        let p = example42(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let res = anick_resolution(&g, 2, None).unwrap();
        let shown: Vec<String> = res.levels[1].iter().map(|c| c.display(&p.quiver)).collect();
        assert_eq!(shown, ["(a)", "(b)", "(b')", "(a')"]);
        let e: Vec<Chain> = (0..3).map(Chain::vertex_chain).collect();
        check_matrix(
            &p,
            &res,
            1,
            &["a", "b", "a'", "b'"],
            &e,
            &[&["-1⊗a", "a⊗1", "0"], &["0", "-1⊗b", "b⊗1"], &["a'⊗1", "-1⊗a'", "0"], &["0", "b'⊗1", "-1⊗b'"]],
        );
        let w0: Vec<Chain> = ["a", "b", "a'", "b'"].iter().map(|a| Chain::new(vec![p.path(a)])).collect();
        check_matrix(
            &p,
            &res,
            2,
            &["a,b", "b,b'", "b',a'", "a,a'*a", "a',a*a'"],
            &w0,
            &[
                &["1⊗b", "a⊗1", "0", "0"],
                &["-a'⊗1", "1⊗b'", "-1⊗a", "b⊗1"],
                &["0", "0", "b'⊗1", "1⊗a'"],
                &["1⊗a'*a + a*a'⊗1", "0", "a⊗a", "0"],
                &["a'⊗a'", "0", "1⊗a*a' + a'*a⊗1", "0"],
            ],
        );
        let alg = Algebra::new(&g);
        assert!(res.check_d_squared(&alg).unwrap().is_empty());
        assert!(minimality_direct(&res).is_empty());
    }

    #[test]
    fn canonical_roles() {
        let p = example42(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let c = chain(&p, "a',a");
        assert_eq!(canonical_role(&g, &c), Role::Upper { partner: chain(&p, "a'*a") });
        assert_eq!(
            canonical_role(&g, &chain(&p, "a'*a")),
            Role::Lower {
                partner: c,
                lambda: -Q.one()
            }
        );
        assert_eq!(canonical_role(&g, &chain(&p, "a,a'*a")), Role::Critical);
        let p2 = chinese(Q, 2).unwrap();
        let g2 = GroebnerData::new(&p2).unwrap();
        assert_eq!(canonical_role(&g2, &chain(&p2, "x2,x2*x1,x1")), Role::Critical);
    }

    #[test]
    fn free_algebra_resolution() {
        let p = Presentation::free(Q, &["x", "y"]).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let res = anick_resolution(&g, 3, None).unwrap();
        assert!(res.levels[2].is_empty());
        let x = Chain::new(vec![p.path("x")]);
        assert_eq!(res.d(&x).unwrap()[&Chain::vertex_chain(0)], weight(&p, &x, "x⊗1 - 1⊗x"));
        assert_eq!(betti(&res, &p.quiver).totals(), [1, 2, 0, 0]);
        assert_eq!(gldim(&g, None, None).unwrap(), GlDim::Exact(1));
    }

    #[test]
    fn jw_witness_and_criterion() {
        let p = jw_counterexample(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let res = anick_resolution(&g, 3, None).unwrap();
        let c = chain(&p, "x1,x2*x3,x4*x5");
        let d = res.d(&c).unwrap();
        let t1 = chain(&p, "x6,x7*x4*x5");
        let t2 = chain(&p, "x3,x4*x5");
        assert_eq!(d[&t1].left_collapse(), weight(&p, &c, "-1⊗1"));
        assert_eq!(d[&t2].left_collapse(), weight(&p, &c, "x1*x2⊗1"));
        assert!(d.iter().all(|(t, w)| *t == t1 || *t == t2 || w.left_collapse().is_zero()));
        let w = minimality_direct(&res);
        assert!(w.iter().any(|w| w.source == c && w.target == t1));
        let graph = UfGraph::build(&g).unwrap();
        let verdicts = minimality_criterion(&g, &enumerate_chains(&g, &graph, 3, None));
        assert!(!verdicts[3].holds());
    }

    #[test]
    fn algebra_b_is_minimal_despite_the_criterion() {
        let p = algebra_b(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let res = anick_resolution(&g, 3, None).unwrap();
        let c = chain(&p, "x1,x2*x3,x4");
        let d = res.d(&c).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&chain(&p, "x2,x3*x4")], weight(&p, &c, "x1⊗1"));
        assert_eq!(d[&chain(&p, "x1,x2*x3")], weight(&p, &c, "-1⊗x4"));
        assert!(minimality_direct(&res).is_empty());
        let graph = UfGraph::build(&g).unwrap();
        let verdicts = minimality_criterion(&g, &enumerate_chains(&g, &graph, 3, None));
        match &verdicts[3] {
            Verdict::Fails { target, steps, .. } => {
                assert_eq!(*target, chain(&p, "x1,x5*x4"));
                assert_eq!(steps.len(), 2);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn chinese_two() {
        let p = chinese(Q, 2).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        assert_eq!(gldim(&g, None, None).unwrap(), GlDim::Exact(3));
        let res = anick_resolution(&g, 3, None).unwrap();
        assert!(res.complete);
        assert_eq!(betti(&res, &p.quiver).total(3), 1);
        let alg = Algebra::new(&g);
        assert!(res.check_d_squared(&alg).unwrap().is_empty());
        let h = one_sided_homology(&alg, &res, 7).unwrap();
        assert_eq!(h[0], [(0, 1)].into_iter().collect());
        assert!(h[1..].iter().all(|m| m.is_empty()), "{h:?}");
    }

    #[test]
    fn cross_engine_on_example42() {
        let p = example42(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let alg = Algebra::new(&g);
        let res = anick_resolution(&g, 4, Some(4)).unwrap();
        let bar = materialize(&alg, 4).unwrap();
        let r = crate::morse::morse_reduce(&bar.complex, &bar.matching, &alg).unwrap();
        for (n, level) in res.levels.iter().enumerate() {
            let crit: Vec<&Chain> = r.critical[n].iter().map(|&i| &bar.cells[n][i]).collect();
            assert_eq!(crit, level.iter().collect::<Vec<_>>());
            for (k, c) in level.iter().enumerate() {
                for ((m, j), w) in r.reduced.boundary_of((n, k)) {
                    let t = &bar.cells[m][r.critical[m][j]];
                    assert_eq!(res.d(c).unwrap().get(t), Some(&w));
                }
                assert_eq!(r.reduced.boundary_of((n, k)).len(), res.d(c).unwrap().len());
            }
        }
        let lazy = BarComplex::new(&alg);
        let mut engine = MorseEngine::new(&lazy, &alg);
        for c in &res.levels[2] {
            assert_eq!(engine.d_morse(c).unwrap(), engine.d_morse_brute_force(c, 100_000).unwrap());
        }
    }

    #[test]
    fn transfer_maps() {
        let p = example42(Q).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let alg = Algebra::new(&g);
        let (res, t) = anick_resolution_with_transfer(&g, 3, Some(4)).unwrap();
        assert!(verify_transfer(&alg, &res, &t).unwrap().is_empty());
    }

    #[test]
    fn section7_reduces_to_the_minimal_resolution() {
        let p = iyudu_shkarin(Q, 4).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let alg = Algebra::new(&g);
        let res = anick_resolution(&g, 5, Some(6)).unwrap();
        assert!(res.check_d_squared(&alg).unwrap().is_empty());
        let (x, _, r) = minimal_section7(&alg, &res).unwrap();
        let crit = |n: usize| -> Vec<String> { r.critical[n].iter().map(|&i| x.cell((n, i)).label.clone()).collect() };
        assert_eq!(crit(4), ["(x,x,z,y)"]);
        assert_eq!(crit(3), ["(x,x,z)", "(x,z,y)"]);
        assert_eq!(crit(2).len(), 3);
        assert!(scalar_entries(&r.reduced).iter().all(|e| e.degree == 5));
        assert_eq!(betti(&res, &p.quiver).totals()[..5], [1, 3, 3, 2, 1]);
    }
}
