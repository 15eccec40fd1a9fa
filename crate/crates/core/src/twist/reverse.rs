use num_traits::Signed;

use crate::exactnum::{CycloElem, Rat};
use crate::search::{chain_lengths, Candidate};
use crate::{Error, Result};

/// The same chain read from C₃ to C₁, rescaled to c₁ = h₁ = 1.
///
/// c′ = (1, c₂/c₃, c₁/c₃) and s′ = ℓ₃/c₃; heights come from the dual basis again.
pub fn reverse_chain(cand: &Candidate) -> Result<Candidate> {
    let n = cand.s.modulus();
    let [c1, c2, c3] = &cand.c;
    let c = [CycloElem::one(n), c2.div(c3)?, c1.div(c3)?];
    let s = chain_lengths(&cand.c, &cand.s)[3].div(c3)?;
    let dual = cand.field.dual_basis(&c)?;
    let h = [CycloElem::one(n), dual[1].div(&dual[0])?, dual[2].div(&dual[0])?];
    let mut ratios = Vec::with_capacity(3);
    for (j, l) in [(0, 1), (0, 2), (1, 2)] {
        let r: Rat =
            (&h[j] * &c[l]).div(&(&c[j] * &h[l]))?.as_rat().filter(|r| r.is_positive()).ok_or_else(|| {
                Error::InvariantBreach(format!("reversed moduli ratio not positive rational for {}", cand.tuple))
            })?;
        ratios.push(r);
    }
    let mut theta = cand.theta.clone();
    theta.reverse();
    Ok(Candidate {
        tuple: cand.tuple,
        reversed: !cand.reversed,
        c,
        h,
        field: cand.field.clone(),
        s,
        theta,
        moduli_ratios: ratios.try_into().expect("three ratios"),
    })
}

/// Circumferences, heights and s agree.
pub fn same_chain(a: &Candidate, b: &Candidate) -> bool {
    a.c == b.c && a.h == b.h && a.s == b.s
}
