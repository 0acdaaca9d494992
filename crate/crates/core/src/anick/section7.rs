//! The second Morse matching on the Anick resolution of
//! `k⟨x, y, z⟩ / (x² + yx, xz, zy)`, which reduces it to a minimal one.

use super::resolution::Resolution;
use crate::bimodule::Algebra;
use crate::chains::Chain;
use crate::error::{Error, Result};
use crate::morse::{morse_reduce, BasedComplex, MorseResult, PartialMatching};
use crate::pathalg::{Path, Quiver};

/// `ℓ` when `p = y^ℓ x`.
fn y_power_x(p: &Path, x: u32, y: u32) -> Option<usize> {
    let (last, rest) = p.arrows().split_last()?;
    (*last == x && rest.iter().all(|&a| a == y)).then_some(rest.len())
}

/// The resolution as a based complex together with the matching
/// `(x, x, y^ℓ x, …) → (x, y^{ℓ+1} x, …)`, each arrow checked to have weight
/// `−1⊗1`.
pub fn section7_matching(res: &Resolution, q: &Quiver) -> Result<(BasedComplex, PartialMatching)> {
    let (Some(x), Some(y), Some(_)) = (q.arrow_id("x"), q.arrow_id("y"), q.arrow_id("z")) else {
        return Err(Error::InvalidPresentation("expected arrows x, y, z".into()));
    };
    if q.vertex_count() != 1 || q.arrow_count() != 3 {
        return Err(Error::InvalidPresentation("expected one vertex and arrows x, y, z".into()));
    }
    let complex = res.to_based_complex(q);
    let mut matching = PartialMatching::new();
    let minus_one = -res.field().one();
    for level in res.levels.iter().skip(3) {
        for (i, c) in level.iter().enumerate() {
            let w = c.components();
            let xp = q.arrow_path(x);
            if w[0] != xp || w[1] != xp {
                continue;
            }
            let Some(ell) = y_power_x(&w[2], x, y) else { continue };
            let mut target = vec![xp.clone()];
            let mut ys = vec![y; ell + 1];
            ys.push(x);
            target.push(q.path(&ys)?);
            target.extend_from_slice(&w[3..]);
            let target = Chain::new(target);
            let weight = res.d(c).and_then(|im| im.get(&target)).ok_or_else(|| {
                Error::InvalidMatching(format!("{} has no arrow to {}", c.display(q), target.display(q)))
            })?;
            if weight.as_scalar_identity() != Some(&minus_one) {
                return Err(Error::InvalidMatching(format!(
                    "arrow {} -> {} has weight {}",
                    c.display(q),
                    target.display(q),
                    weight.display(q)
                )));
            }
            let j = res.position(&target).expect("target is a chain of the resolution");
            matching.insert(c.weight(), i, j);
        }
    }
    Ok((complex, matching))
}

/// Reduces the resolution along [`section7_matching`].
pub fn minimal_section7(alg: &Algebra, res: &Resolution) -> Result<(BasedComplex, PartialMatching, MorseResult)> {
    let (x, m) = section7_matching(res, alg.quiver())?;
    let r = morse_reduce(&x, &m, alg)?;
    Ok((x, m, r))
}
