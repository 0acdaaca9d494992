//! Killing a contractible summand: a complex `C ⊕ C'` with differential
//! `[[α, β], [γ, η' + η'']]`, where `(C', η')` is contracted by `σ` and
//! `1 + η''σ` is invertible, is homotopy equivalent to `(C, α − βσλγ)` with
//! `λ = (1 + η''σ)⁻¹`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hpl::datum::{check_perturbation, k_infinity, perturb, HrDatum, IdentityCheck};
use crate::hpl::graded::GradedMap;
use crate::hpl::random::{random_complex, random_contractible, random_contractible_ranks};
use crate::matrix::Matrix;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockComplex {
    pub alpha: GradedMap,
    pub beta: GradedMap,
    pub gamma: GradedMap,
    pub eta_prime: GradedMap,
    pub eta_second: GradedMap,
    pub sigma: GradedMap,
}

impl BlockComplex {
    pub fn field(&self) -> Field {
        self.alpha.field()
    }

    pub fn c_dims(&self) -> &[usize] {
        self.alpha.source()
    }

    pub fn c_prime_dims(&self) -> &[usize] {
        self.eta_prime.source()
    }

    pub fn eta(&self) -> GradedMap {
        self.eta_prime.add(&self.eta_second)
    }

    /// The total differential on `C ⊕ C'`.
    pub fn d(&self) -> GradedMap {
        GradedMap::from_grid(&self.alpha, &self.beta, &self.gamma, &self.eta())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillResult {
    pub lambda: GradedMap,
    pub lambda_bar: GradedMap,
    pub d_bar: GradedMap,
    pub f: GradedMap,
    pub g: GradedMap,
    pub h_inf: GradedMap,
    pub k_inf: GradedMap,
    /// `(βσ; 1 + η''σ): C' → C ⊕ C'`, onto the kernel of `g`.
    pub kernel_map: GradedMap,
    /// `(σγ, 1 + ση''): C ⊕ C' → C'`, vanishing on the image of `f`.
    pub cokernel_map: GradedMap,
}

/// The datum `(C, 0) ⇄ (C ⊕ C', 0 ⊕ η')` with `h = 0 ⊕ −σ`, and the
/// perturbation `δ = [[α, β], [γ, η'']]`.
pub fn block_datum(b: &BlockComplex) -> (HrDatum, GradedMap) {
    let field = b.field();
    let c = b.c_dims();
    let cp = b.c_prime_dims();
    let z = |s: &[usize], t: &[usize], shift| GradedMap::zero(field, s, t, shift);
    let datum = HrDatum {
        bl: z(c, c, -1),
        bm: GradedMap::from_grid(&z(c, c, -1), &z(cp, c, -1), &z(c, cp, -1), &b.eta_prime),
        i: GradedMap::identity(field, c).vstack(&z(c, cp, 0)),
        p: GradedMap::identity(field, c).hstack(&z(cp, c, 0)),
        h: GradedMap::from_grid(&z(c, c, 1), &z(cp, c, 1), &z(c, cp, 1), &b.sigma.neg()),
    };
    let delta = GradedMap::from_grid(&b.alpha, &b.beta, &b.gamma, &b.eta_second);
    (datum, delta)
}

/// Checks the hypotheses and computes the transferred data through the
/// perturbation lemma.
pub fn kill_contractible(b: &BlockComplex) -> Result<KillResult> {
    let field = b.field();
    let cp = b.c_prime_dims();
    let one_cp = GradedMap::identity(field, cp);
    let ep = &b.eta_prime;
    if !ep.compose(ep).is_zero() {
        return Err(Error::Verification("eta' does not square to zero".into()));
    }
    if ep.compose(&b.sigma).add(&b.sigma.compose(ep)) != one_cp {
        return Err(Error::Verification("sigma is not a contraction of eta'".into()));
    }
    let d = b.d();
    if !d.compose(&d).is_zero() {
        return Err(Error::Verification("the block differential does not square to zero".into()));
    }
    let lambda = one_cp
        .add(&b.eta_second.compose(&b.sigma))
        .inverse()
        .ok_or_else(|| Error::Singular("1 + eta'' sigma is not invertible".into()))?;
    let lambda_bar = one_cp.sub(&b.sigma.compose(&lambda).compose(&b.eta_second));
    let (datum, delta) = block_datum(b);
    check_perturbation(&datum, &delta)?;
    let r = perturb(&datum, &delta)?;
    let k0 = GradedMap::zero(field, b.c_dims(), b.c_dims(), 1);
    let k_inf = k_infinity(&datum, &r, &k0);
    let kernel_map = b.beta.compose(&b.sigma).vstack(&one_cp.add(&b.eta_second.compose(&b.sigma)));
    let cokernel_map = b.sigma.compose(&b.gamma).hstack(&one_cp.add(&b.sigma.compose(&b.eta_second)));
    Ok(KillResult {
        lambda,
        lambda_bar,
        d_bar: r.b_inf,
        f: r.i_inf,
        g: r.p_inf,
        h_inf: r.h_inf,
        k_inf,
        kernel_map,
        cokernel_map,
    })
}

fn check(out: &mut Vec<IdentityCheck>, name: &'static str, lhs: &GradedMap, rhs: &GradedMap) {
    let failing_degree = lhs.sub(rhs).blocks().iter().position(|m| !m.is_zero());
    out.push(IdentityCheck {
        name,
        holds: failing_degree.is_none(),
        failing_degree,
    });
}

fn flag(out: &mut Vec<IdentityCheck>, name: &'static str, holds: bool) {
    out.push(IdentityCheck {
        name,
        holds,
        failing_degree: None,
    });
}

/// Rank of each block of a degree-zero map equals the expected values.
fn ranks(m: &GradedMap) -> Vec<usize> {
    m.blocks().iter().map(Matrix::rank).collect()
}

/// Compares the computed data with the closed forms and checks both short
/// exact sequences.
pub fn verify_kill(b: &BlockComplex, r: &KillResult) -> Vec<IdentityCheck> {
    let field = b.field();
    let c = b.c_dims();
    let cp = b.c_prime_dims();
    let one_c = GradedMap::identity(field, c);
    let one_cp = GradedMap::identity(field, cp);
    let z = |s: &[usize], t: &[usize], shift| GradedMap::zero(field, s, t, shift);
    let (s, l, be, ga) = (&b.sigma, &r.lambda, &b.beta, &b.gamma);
    let d = b.d();
    let mut out = Vec::new();

    let bsl = be.compose(s).compose(l);
    let slg = s.compose(l).compose(ga);
    check(&mut out, "d_bar = alpha - beta sigma lambda gamma", &r.d_bar, &b.alpha.sub(&bsl.compose(ga)));
    check(&mut out, "f = (1; -sigma lambda gamma)", &r.f, &one_c.vstack(&slg.neg()));
    check(&mut out, "g = (1, -beta sigma lambda)", &r.g, &one_c.hstack(&bsl.neg()));
    check(
        &mut out,
        "h_inf = diag(0, -sigma lambda)",
        &r.h_inf,
        &GradedMap::from_grid(&z(c, c, 1), &z(cp, c, 1), &z(c, cp, 1), &s.compose(l).neg()),
    );
    let s2 = s.compose(s);
    check(
        &mut out,
        "k_inf = -beta sigma lambda sigma^2 lambda gamma",
        &r.k_inf,
        &bsl.compose(&s2).compose(l).compose(ga).neg(),
    );

    check(&mut out, "d_bar^2 = 0", &r.d_bar.compose(&r.d_bar), &z(c, c, -2));
    check(&mut out, "f chain map", &d.compose(&r.f), &r.f.compose(&r.d_bar));
    check(&mut out, "g chain map", &r.d_bar.compose(&r.g), &r.g.compose(&d));
    let m: Vec<usize> = c.iter().zip(cp).map(|(a, b)| a + b).collect();
    check(
        &mut out,
        "f g - 1 = d h_inf + h_inf d",
        &r.f.compose(&r.g).sub(&GradedMap::identity(field, &m)),
        &d.compose(&r.h_inf).add(&r.h_inf.compose(&d)),
    );
    check(
        &mut out,
        "g f - 1 = d_bar k_inf + k_inf d_bar",
        &r.g.compose(&r.f).sub(&one_c),
        &r.d_bar.compose(&r.k_inf).add(&r.k_inf.compose(&r.d_bar)),
    );

    // first sequence: C' → C ⊕ C' → C
    let km = &r.kernel_map;
    check(&mut out, "kernel map chain map", &d.compose(km), &km.compose(&b.eta_prime));
    check(&mut out, "g kills the kernel map", &r.g.compose(km), &z(cp, c, 0));
    let left_inv = z(c, cp, 0).hstack(l);
    check(&mut out, "(0, lambda) inverts the kernel map", &left_inv.compose(km), &one_cp);
    flag(&mut out, "kernel map injective", ranks(km) == cp.to_vec());
    flag(&mut out, "g surjective", ranks(&r.g) == c.to_vec());
    flag(
        &mut out,
        "first sequence exact in the middle",
        ranks(km).iter().zip(ranks(&r.g)).zip(&m).all(|((a, b), t)| a + b == *t),
    );

    // second sequence: C → C ⊕ C' → C'
    let cm = &r.cokernel_map;
    check(&mut out, "cokernel map chain map", &b.eta_prime.compose(cm), &cm.compose(&d));
    check(&mut out, "cokernel map kills f", &cm.compose(&r.f), &z(c, cp, 0));
    let right_inv = z(cp, c, 0).vstack(&r.lambda_bar);
    check(&mut out, "(0; lambda_bar) splits the cokernel map", &cm.compose(&right_inv), &one_cp);
    check(
        &mut out,
        "lambda_bar inverts 1 + sigma eta''",
        &r.lambda_bar.compose(&one_cp.add(&s.compose(&b.eta_second))),
        &one_cp,
    );
    flag(&mut out, "f injective", ranks(&r.f) == c.to_vec());
    flag(&mut out, "cokernel map surjective", ranks(cm) == cp.to_vec());
    flag(
        &mut out,
        "second sequence exact in the middle",
        ranks(&r.f).iter().zip(ranks(cm)).zip(&m).all(|((a, b), t)| a + b == *t),
    );

    if s2.is_zero() {
        check(&mut out, "sigma^2 = 0 gives g f = 1", &r.g.compose(&r.f), &one_c);
    }
    out
}

/// A random block complex: a random differential on `C ⊕ C'` whose `C'`
/// block is split as a random contractible `η'` plus the remainder. With
/// `eta_second_zero` the complex has two degrees, `η = η'` and the other
/// blocks are arbitrary.
pub fn random_block_complex<R: Rng>(
    field: Field,
    degrees: usize,
    max_dim: usize,
    twist: bool,
    eta_second_zero: bool,
    rng: &mut R,
) -> Option<BlockComplex> {
    let degrees = if eta_second_zero { 2 } else { degrees };
    for _ in 0..100 {
        let c: Vec<usize> = (0..degrees).map(|_| rng.random_range(0..=max_dim / 2)).collect();
        let room: Vec<usize> = c.iter().map(|&d| max_dim - d).collect();
        let ranks = random_contractible_ranks(&room, rng);
        let (eta_prime, sigma) = random_contractible(field, &ranks, twist, rng);
        let cp = eta_prime.source().to_vec();
        let b = if eta_second_zero {
            let random_map = |s: &[usize], t: &[usize], rng: &mut R| {
                let mut g = GradedMap::zero(field, s, t, -1);
                let (r, k) = g.block(1).shape();
                g.set_block(1, Matrix::random(field, r, k, 2, rng));
                g
            };
            BlockComplex {
                alpha: random_map(&c, &c, rng),
                beta: random_map(&cp, &c, rng),
                gamma: random_map(&c, &cp, rng),
                eta_second: GradedMap::zero(field, &cp, &cp, -1),
                eta_prime,
                sigma,
            }
        } else {
            let m: Vec<usize> = c.iter().zip(&cp).map(|(a, b)| a + b).collect();
            let d = random_complex(field, &m, rng);
            // block of d from the summand `from` to the summand `to` (0 = C, 1 = C')
            let part = |to: usize, from: usize| -> GradedMap {
                let sdims = if from == 0 { &c } else { &cp };
                let tdims = if to == 0 { &c } else { &cp };
                let blocks = (0..degrees)
                    .map(|n| {
                        if n == 0 {
                            return Matrix::zeros(field, 0, sdims[0]);
                        }
                        let r0 = if to == 0 { 0 } else { c[n - 1] };
                        let c0 = if from == 0 { 0 } else { c[n] };
                        d.block(n).block(r0, r0 + tdims[n - 1], c0, c0 + sdims[n])
                    })
                    .collect();
                GradedMap::from_blocks(field, sdims, tdims, -1, blocks).expect("shapes")
            };
            BlockComplex {
                alpha: part(0, 0),
                beta: part(0, 1),
                gamma: part(1, 0),
                eta_second: part(1, 1).sub(&eta_prime),
                eta_prime,
                sigma,
            }
        };
        if one_plus_eta_sigma_invertible(&b) {
            return Some(b);
        }
    }
    None
}

fn one_plus_eta_sigma_invertible(b: &BlockComplex) -> bool {
    GradedMap::identity(b.field(), b.c_prime_dims())
        .add(&b.eta_second.compose(&b.sigma))
        .inverse()
        .is_some()
}
