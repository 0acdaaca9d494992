//! The homological perturbation lemma on finite-dimensional complexes.

pub mod contractible;
pub mod datum;
pub mod graded;
pub mod random;

pub use contractible::{block_datum, kill_contractible, random_block_complex, verify_kill, BlockComplex, KillResult};
pub use datum::{
    classify_datum, is_small, k_infinity, perturb, verify_hpl, DatumFlags, HplReport, HrDatum, IdentityCheck,
    PerturbedDatum,
};
pub use graded::{homology_dims, is_quasi_isomorphism, solve_homotopy, GradedMap};

#[cfg(test)]
mod tests {
    use super::random::{random_complex, random_small_perturbation, random_sdr};
    use super::*;
    use crate::matrix::Matrix;
    use crate::scalar::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: Field = Field::Rational;

    fn single(dims: &[usize], shift: i32, n: usize, m: Matrix) -> GradedMap {
        let mut g = GradedMap::zero(Q, dims, dims, shift);
        g.set_block(n, m);
        g
    }

    /// `k ← k` with `b = 1`, `L = 0` and `h = −1`.
    fn contractible_line() -> HrDatum {
        let l = [0, 0];
        let m = [1, 1];
        HrDatum {
            bl: GradedMap::zero(Q, &l, &l, -1),
            bm: single(&m, -1, 1, Matrix::from_i64(Q, 1, 1, &[1])),
            i: GradedMap::zero(Q, &l, &m, 0),
            p: GradedMap::zero(Q, &m, &l, 0),
            h: single(&m, 1, 0, Matrix::from_i64(Q, 1, 1, &[-1])),
        }
    }

    #[test]
    fn identity_datum_is_sdr() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let dims = [2, 3, 1];
        let b = random_complex(Q, &dims, &mut rng);
        let d = HrDatum {
            bl: b.clone(),
            bm: b,
            i: GradedMap::identity(Q, &dims),
            p: GradedMap::identity(Q, &dims),
            h: GradedMap::zero(Q, &dims, &dims, 1),
        };
        let (flags, _) = classify_datum(&d, None).unwrap();
        assert!(flags.sdr && flags.dr && flags.he && flags.sqi && flags.hr);
        assert!(classify_datum(&contractible_line(), None).unwrap().0.sdr);
    }

    #[test]
    fn extra_homology_gives_hr_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m_dims = [2, 2, 2];
        let extra = [1, 0, 0];
        let bm = random_complex(Q, &m_dims, &mut rng);
        let z = |s: &[usize], t: &[usize], shift| GradedMap::zero(Q, s, t, shift);
        // L = M ⊕ k, i the projection, p the inclusion: ip = 1 on M
        let d = HrDatum {
            bl: GradedMap::from_grid(&bm, &z(&extra, &m_dims, -1), &z(&m_dims, &extra, -1), &z(&extra, &extra, -1)),
            bm: bm.clone(),
            i: GradedMap::identity(Q, &m_dims).hstack(&z(&extra, &m_dims, 0)),
            p: GradedMap::identity(Q, &m_dims).vstack(&z(&m_dims, &extra, 0)),
            h: z(&m_dims, &m_dims, 1),
        };
        let (flags, _) = classify_datum(&d, None).unwrap();
        assert!(flags.hr);
        assert_ne!(homology_dims(&d.bl), homology_dims(&d.bm));
        assert!(!flags.sqi && !flags.he && !flags.dr);
    }

    #[test]
    fn smallness() {
        let d = contractible_line();
        let zero = GradedMap::zero(Q, &[1, 1], &[1, 1], -1);
        assert!(is_small(&d, &zero));
        let bad = single(&[1, 1], -1, 1, Matrix::from_i64(Q, 1, 1, &[-1]));
        assert!(!is_small(&d, &bad));
        assert!(matches!(perturb(&d, &bad), Err(crate::Error::NotSmall(_))));
        let r = perturb(&d, &zero).unwrap();
        assert_eq!((r.i_inf, r.p_inf, r.h_inf, r.b_inf), (d.i.clone(), d.p.clone(), d.h.clone(), d.bl.clone()));
    }

    #[test]
    fn nilpotent_delta_h_is_small() {
        // M = (k² ← k²) with b = 1 and h = −1; δ strictly upper triangular
        let m = [2, 2];
        let d = HrDatum {
            bl: GradedMap::zero(Q, &[0, 0], &[0, 0], -1),
            bm: single(&m, -1, 1, Matrix::identity(Q, 2)),
            i: GradedMap::zero(Q, &[0, 0], &m, 0),
            p: GradedMap::zero(Q, &m, &[0, 0], 0),
            h: single(&m, 1, 0, Matrix::identity(Q, 2).neg()),
        };
        assert!(classify_datum(&d, None).unwrap().0.sdr);
        let delta = single(&m, -1, 1, Matrix::from_i64(Q, 2, 2, &[0, 5, 0, 0]));
        let dh = delta.compose(&d.h);
        assert!(!dh.is_zero() && dh.compose(&dh).is_zero());
        assert!(is_small(&d, &delta));
        assert!(verify_hpl(&d, &delta, None).unwrap().all_hold());
    }

    #[test]
    fn random_sdr_perturbations_satisfy_every_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let d = random_sdr(Q, 4, 6, &mut rng);
            let (flags, k) = classify_datum(&d, None).unwrap();
            assert!(flags.sdr, "{flags:?}");
            let delta = random_small_perturbation(&d, 200, &mut rng).expect("a small perturbation");
            let rep = verify_hpl(&d, &delta, k.as_ref()).unwrap();
            let failures: Vec<_> = rep.failures().collect();
            assert!(failures.is_empty(), "{failures:?}");
            assert!(rep.perturbed.sdr);
        }
    }

    #[test]
    fn killing_contractible_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut saw_nonzero_square = false;
        for round in 0..10 {
            let b = random_block_complex(Q, 4, 6, round % 2 == 0, false, &mut rng).unwrap();
            let r = kill_contractible(&b).unwrap();
            let failures: Vec<_> = verify_kill(&b, &r).into_iter().filter(|c| !c.holds).collect();
            assert!(failures.is_empty(), "{failures:?}");
            let (datum, _) = block_datum(&b);
            let (flags, _) = classify_datum(&datum, None).unwrap();
            assert!(flags.dr);
            let s2 = b.sigma.compose(&b.sigma);
            assert_eq!(flags.sdr, s2.is_zero());
            saw_nonzero_square |= !s2.is_zero();
        }
        assert!(saw_nonzero_square);
    }

    #[test]
    fn classical_killing_lemma_when_eta_second_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let b = random_block_complex(Q, 2, 6, false, true, &mut rng).unwrap();
            let r = kill_contractible(&b).unwrap();
            let sg = b.sigma.compose(&b.gamma);
            assert_eq!(r.f, GradedMap::identity(Q, b.c_dims()).vstack(&sg.neg()));
            assert_eq!(r.d_bar, b.alpha.sub(&b.beta.compose(&sg)));
            assert!(verify_kill(&b, &r).iter().all(|c| c.holds));
        }
    }
}
