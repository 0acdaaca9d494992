//! Homotopy retract data, perturbations and the perturbed datum.

use crate::error::{Error, Result};
use crate::hpl::graded::{is_quasi_isomorphism, solve_homotopy, GradedMap};
use crate::scalar::Field;

/// `i: (L, bl) → (M, bm)`, `p: M → L` and `h` of degree +1 on `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrDatum {
    pub bl: GradedMap,
    pub bm: GradedMap,
    pub i: GradedMap,
    pub p: GradedMap,
    pub h: GradedMap,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DatumFlags {
    pub hr: bool,
    pub sqi: bool,
    pub he: bool,
    pub dr: bool,
    pub sdr: bool,
}

impl DatumFlags {
    /// The strongest level reached, `None` when not even HR.
    pub fn level(&self) -> Option<&'static str> {
        if self.sdr {
            Some("SDR")
        } else if self.dr {
            Some("DR")
        } else if self.he {
            Some("HE")
        } else if self.sqi {
            Some("SQI")
        } else if self.hr {
            Some("HR")
        } else {
            None
        }
    }
}

fn is_chain_map(phi: &GradedMap, b_src: &GradedMap, b_tgt: &GradedMap) -> bool {
    b_tgt.compose(phi) == phi.compose(b_src)
}

impl HrDatum {
    pub fn field(&self) -> Field {
        self.bl.field()
    }

    pub fn l_dims(&self) -> &[usize] {
        self.bl.source()
    }

    pub fn m_dims(&self) -> &[usize] {
        self.bm.source()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let l = self.l_dims();
        let m = self.m_dims();
        let ok = |g: &GradedMap, s: &[usize], t: &[usize], shift: i32| g.source() == s && g.target() == t && g.shift() == shift;
        if l.len() != m.len() {
            return Err(Error::Shape("L and M have different degree ranges".into()));
        }
        if !ok(&self.bl, l, l, -1) || !ok(&self.bm, m, m, -1) {
            return Err(Error::Shape("differentials must be endomorphisms of degree -1".into()));
        }
        if !ok(&self.i, l, m, 0) || !ok(&self.p, m, l, 0) || !ok(&self.h, m, m, 1) {
            return Err(Error::Shape("i: L -> M, p: M -> L of degree 0 and h of degree +1 on M".into()));
        }
        Ok(())
    }

    /// `ip − 1 − (bh + hb)`.
    fn hr_residual(&self) -> GradedMap {
        let bh = self.bm.compose(&self.h).add(&self.h.compose(&self.bm));
        self.i.compose(&self.p).minus_identity().sub(&bh)
    }

    /// Checks a supplied homotopy `pi − 1 = bk + kb`.
    pub fn is_he_witness(&self, k: &GradedMap) -> bool {
        let pi1 = self.p.compose(&self.i).minus_identity();
        k.source() == self.l_dims() && k.shift() == 1 && pi1 == self.bl.compose(k).add(&k.compose(&self.bl))
    }

    /// A homotopy `k` with `pi − 1 = bk + kb`, found by linear algebra.
    pub fn find_he_witness(&self) -> Option<GradedMap> {
        solve_homotopy(&self.p.compose(&self.i).minus_identity(), &self.bl)
    }
}

/// Classifies a datum. With no supplied `k` the HE witness is searched for.
/// Returns the flags and the witness that was used.
pub fn classify_datum(d: &HrDatum, k: Option<&GradedMap>) -> Result<(DatumFlags, Option<GradedMap>)> {
    d.check_shapes()?;
    let mut flags = DatumFlags::default();
    let complexes = d.bl.compose(&d.bl).is_zero() && d.bm.compose(&d.bm).is_zero();
    flags.hr = complexes
        && is_chain_map(&d.i, &d.bl, &d.bm)
        && is_chain_map(&d.p, &d.bm, &d.bl)
        && d.hr_residual().is_zero();
    if !flags.hr {
        return Ok((flags, None));
    }
    flags.sqi = is_quasi_isomorphism(&d.i, &d.bl, &d.bm) && is_quasi_isomorphism(&d.p, &d.bm, &d.bl);
    let witness = match k {
        Some(k) => d.is_he_witness(k).then(|| k.clone()),
        None => d.find_he_witness(),
    };
    flags.he = flags.sqi && witness.is_some();
    flags.dr = flags.he && d.p.compose(&d.i).minus_identity().is_zero();
    flags.sdr = flags.dr
        && d.h.compose(&d.h).is_zero()
        && d.h.compose(&d.i).is_zero()
        && d.p.compose(&d.h).is_zero();
    Ok((flags, witness))
}

/// `1 − δh`, degreewise.
fn one_minus_delta_h(d: &HrDatum, delta: &GradedMap) -> GradedMap {
    delta.compose(&d.h).neg().add(&GradedMap::identity(d.field(), d.m_dims()))
}

pub fn check_perturbation(d: &HrDatum, delta: &GradedMap) -> Result<()> {
    if delta.source() != d.m_dims() || delta.target() != d.m_dims() || delta.shift() != -1 {
        return Err(Error::Shape("a perturbation is an endomorphism of M of degree -1".into()));
    }
    let b = d.bm.add(delta);
    if !b.compose(&b).is_zero() {
        return Err(Error::Verification("(b + delta)^2 != 0".into()));
    }
    Ok(())
}

/// Whether `1 − δh` is invertible in every degree.
pub fn is_small(d: &HrDatum, delta: &GradedMap) -> bool {
    one_minus_delta_h(d, delta).inverse().is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedDatum {
    pub a: GradedMap,
    pub i_inf: GradedMap,
    pub p_inf: GradedMap,
    pub h_inf: GradedMap,
    pub b_inf: GradedMap,
}

impl PerturbedDatum {
    /// The perturbed data as an HR datum from `(L, b∞)` to `(M, b + δ)`.
    pub fn as_datum(&self, d: &HrDatum, delta: &GradedMap) -> HrDatum {
        HrDatum {
            bl: self.b_inf.clone(),
            bm: d.bm.add(delta),
            i: self.i_inf.clone(),
            p: self.p_inf.clone(),
            h: self.h_inf.clone(),
        }
    }
}

/// `A = (1 − δh)⁻¹δ`, `i∞ = i + hAi`, `p∞ = p + pAh`, `h∞ = h + hAh`,
/// `b∞ = b + pAi`.
pub fn perturb(d: &HrDatum, delta: &GradedMap) -> Result<PerturbedDatum> {
    d.check_shapes()?;
    check_perturbation(d, delta)?;
    let inv = one_minus_delta_h(d, delta)
        .inverse()
        .ok_or_else(|| Error::NotSmall("1 - delta h is not invertible".into()))?;
    let a = inv.compose(delta);
    let ha = d.h.compose(&a);
    Ok(PerturbedDatum {
        i_inf: d.i.add(&ha.compose(&d.i)),
        p_inf: d.p.add(&d.p.compose(&a).compose(&d.h)),
        h_inf: d.h.add(&ha.compose(&d.h)),
        b_inf: d.bl.add(&d.p.compose(&a).compose(&d.i)),
        a,
    })
}

/// One named identity and whether it held; failures carry the first
/// degree with a nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub failing_degree: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HplReport {
    pub checks: Vec<IdentityCheck>,
    pub original: DatumFlags,
    pub perturbed: DatumFlags,
}

impl HplReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    fn record(&mut self, name: &'static str, lhs: &GradedMap, rhs: &GradedMap) {
        let diff = lhs.sub(rhs);
        let failing_degree = diff.blocks().iter().position(|b| !b.is_zero());
        self.checks.push(IdentityCheck {
            name,
            holds: failing_degree.is_none(),
            failing_degree,
        });
    }
}

/// Evaluates every identity of the perturbation lemma on a datum and a small
/// perturbation. `k` is an HE witness for the original datum, searched for
/// when absent.
pub fn verify_hpl(d: &HrDatum, delta: &GradedMap, k: Option<&GradedMap>) -> Result<HplReport> {
    let (original, witness) = classify_datum(d, k)?;
    let r = perturb(d, delta)?;
    let field = d.field();
    let one_m = GradedMap::identity(field, d.m_dims());
    let one_l = GradedMap::identity(field, d.l_dims());
    let (b, bl, h, i, p) = (&d.bm, &d.bl, &d.h, &d.i, &d.p);
    let bd = b.add(delta);
    let (a, ii, pi_, hi, bi) = (&r.a, &r.i_inf, &r.p_inf, &r.h_inf, &r.b_inf);
    let mut rep = HplReport {
        original,
        ..HplReport::default()
    };

    let a_minus_delta = a.sub(delta);
    rep.record("delta h A = A - delta", &delta.compose(h).compose(a), &a_minus_delta);
    rep.record("A h delta = A - delta", &a.compose(h).compose(delta), &a_minus_delta);
    let inv1 = one_minus_delta_h(d, delta).inverse().expect("small");
    rep.record("(1 - delta h)^-1 = 1 + A h", &inv1, &one_m.add(&a.compose(h)));
    match one_m.sub(&h.compose(delta)).inverse() {
        Some(inv2) => rep.record("(1 - h delta)^-1 = 1 + h A", &inv2, &one_m.add(&h.compose(a))),
        None => rep.checks.push(IdentityCheck {
            name: "(1 - h delta)^-1 = 1 + h A",
            holds: false,
            failing_degree: None,
        }),
    }
    let aipa = a.compose(i).compose(p).compose(a);
    rep.record(
        "A i p A + A b + b A = 0",
        &aipa.add(&a.compose(b)).add(&b.compose(a)),
        &GradedMap::zero(field, d.m_dims(), d.m_dims(), -2),
    );

    rep.record("b_inf^2 = 0", &bi.compose(bi), &GradedMap::zero(field, d.l_dims(), d.l_dims(), -2));
    rep.record("i_inf chain map", &bd.compose(ii), &ii.compose(bi));
    rep.record("p_inf chain map", &bi.compose(pi_), &pi_.compose(&bd));
    rep.record(
        "i_inf p_inf = 1 + (b + delta) h_inf + h_inf (b + delta)",
        &ii.compose(pi_),
        &one_m.add(&bd.compose(hi)).add(&hi.compose(&bd)),
    );

    let pinf_i_1 = pi_.compose(i).sub(&one_l);
    let p_iinf_1 = p.compose(ii).sub(&one_l);
    rep.record("b_inf (p_inf i - 1) = (p_inf i - 1) b", &bi.compose(&pinf_i_1), &pinf_i_1.compose(bl));
    rep.record("(p i_inf - 1) b_inf = b (p i_inf - 1)", &p_iinf_1.compose(bi), &bl.compose(&p_iinf_1));

    rep.record(
        "i (p i_inf - 1) = h i_inf b_inf + b h i_inf",
        &i.compose(&p_iinf_1),
        &h.compose(ii).compose(bi).add(&b.compose(h).compose(ii)),
    );
    rep.record(
        "(p_inf i - 1) p = b_inf p_inf h + p_inf h b",
        &pinf_i_1.compose(p),
        &bi.compose(pi_).compose(h).add(&pi_.compose(h).compose(b)),
    );
    rep.record(
        "(p i_inf - 1) p_inf = p h_inf (b + delta) + b p h_inf",
        &p_iinf_1.compose(pi_),
        &p.compose(hi).compose(&bd).add(&bl.compose(p).compose(hi)),
    );
    rep.record(
        "i_inf (p_inf i - 1) = (b + delta) h_inf i + h_inf i b",
        &ii.compose(&pinf_i_1),
        &bd.compose(hi).compose(i).add(&hi.compose(i).compose(bl)),
    );

    let h1 = p.compose(hi).compose(i);
    let h2 = pi_.compose(h).compose(ii);
    rep.record(
        "p i - 1 = b h' + h' b - (p i_inf - 1)(p_inf i - 1)",
        &p.compose(i).sub(&one_l),
        &bl.compose(&h1).add(&h1.compose(bl)).sub(&p_iinf_1.compose(&pinf_i_1)),
    );
    rep.record(
        "p_inf i_inf - 1 = b_inf h'' + h'' b_inf - (p_inf i - 1)(p i_inf - 1)",
        &pi_.compose(ii).sub(&one_l),
        &bi.compose(&h2).add(&h2.compose(bi)).sub(&pinf_i_1.compose(&p_iinf_1)),
    );

    if let Some(k) = &witness {
        let k_inf = k_infinity(d, &r, k);
        rep.record(
            "p_inf i_inf - 1 = b_inf k_inf + k_inf b_inf",
            &pi_.compose(ii).sub(&one_l),
            &bi.compose(&k_inf).add(&k_inf.compose(bi)),
        );
    }

    let (perturbed, _) = classify_datum(&r.as_datum(d, delta), None)?;
    for (name, before, after) in [
        ("HR persists", original.hr, perturbed.hr),
        ("SQI persists", original.sqi, perturbed.sqi),
        ("HE persists", original.he, perturbed.he),
        ("SDR persists", original.sdr, perturbed.sdr),
    ] {
        rep.checks.push(IdentityCheck {
            name,
            holds: !before || after,
            failing_degree: None,
        });
    }
    rep.perturbed = perturbed;
    Ok(rep)
}

/// `k∞ = (p∞i − 1) k (pi∞ − 1) + p∞hi∞ − p∞hbhi∞ − p∞hhi∞b∞`.
pub fn k_infinity(d: &HrDatum, r: &PerturbedDatum, k: &GradedMap) -> GradedMap {
    let one_l = GradedMap::identity(d.field(), d.l_dims());
    let pinf_i_1 = r.p_inf.compose(&d.i).sub(&one_l);
    let p_iinf_1 = d.p.compose(&r.i_inf).sub(&one_l);
    let ph = r.p_inf.compose(&d.h);
    pinf_i_1
        .compose(k)
        .compose(&p_iinf_1)
        .add(&ph.compose(&r.i_inf))
        .sub(&ph.compose(&d.bm).compose(&d.h).compose(&r.i_inf))
        .sub(&ph.compose(&d.h).compose(&r.i_inf).compose(&r.b_inf))
}
