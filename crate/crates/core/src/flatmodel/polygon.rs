use std::cmp::Ordering;

use serde::Serialize;

use super::surface::floor;
use crate::exactnum::{cmp_real, rat, CycloElem, Rat};
use crate::search::Candidate;
use crate::{Error, Result};

const N: u64 = 28;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorizontalCylinder {
    pub c: CycloElem,
    pub h: CycloElem,
    /// Horizontal displacement of a loop crossing the cylinder, modulo c.
    pub twist: CycloElem,
    /// Length of the part of the boundary glued to the cylinder itself.
    pub self_glued: CycloElem,
}

/// The regular 14-gon with opposite sides glued, a horizontal side at the bottom.
#[derive(Clone, Debug, Serialize)]
pub struct Veech14 {
    /// Vertices ζ₂₈^{2j−8}, j = 0..13.
    pub vertices: Vec<CycloElem>,
    /// Distinct heights of vertices, top first.
    pub levels: Vec<CycloElem>,
    /// Top, next and central cylinder.
    pub cylinders: Vec<HorizontalCylinder>,
}

/// A three-cylinder chain scaled to c₁ = h₁ = 1 and sheared to t₂ = 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedChain {
    pub c: [CycloElem; 3],
    pub h: [CycloElem; 3],
    pub s: CycloElem,
    pub twists: [CycloElem; 3],
}

fn re(z: &CycloElem) -> CycloElem {
    (z + &z.conjugate()).scale(&rat(1, 2))
}

fn im(z: &CycloElem) -> CycloElem {
    (&(z - &z.conjugate()) * &CycloElem::root(N, -7)).scale(&rat(1, 2))
}

/// x mod m into [0, m).
pub(crate) fn reduce_mod(x: &CycloElem, m: &CycloElem) -> Result<CycloElem> {
    let k = floor(&x.div(m)?)?;
    Ok(x - &m.scale(&Rat::from_integer(k.into())))
}

fn sort_real(v: &mut [(CycloElem, usize)]) -> Result<()> {
    let mut err = None;
    v.sort_by(|a, b| {
        cmp_real(&a.0, &b.0).unwrap_or_else(|e| {
            err = Some(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), Err)
}

/// A vertex in the developed cylinder with its zero label.
struct Corner {
    z: CycloElem,
    label: usize,
}

pub fn build_veech_14gon() -> Result<Veech14> {
    let vertices: Vec<CycloElem> = (0..14).map(|j| CycloElem::root(N, 2 * j - 8)).collect();
    // sides j and j+7 are glued, so v_j ~ v_{j+8} and v_{j+1} ~ v_{j+7}: two zeros by parity
    let label = |j: usize| j % 2;
    let mut by_height: Vec<(CycloElem, usize)> = vertices.iter().enumerate().map(|(j, v)| (im(v), j)).collect();
    sort_real(&mut by_height)?;
    by_height.reverse();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut heights: Vec<CycloElem> = Vec::new();
    for (y, j) in by_height {
        if heights.last() == Some(&y) {
            levels.last_mut().expect("nonempty").push(j);
        } else {
            heights.push(y);
            levels.push(vec![j]);
        }
    }
    if levels.len() != 7 || levels.iter().any(|l| l.len() != 2) {
        return Err(Error::InvariantBreach("14-gon does not have 7 levels of 2 vertices".into()));
    }
    // (left, right) at each level
    let mut lr: Vec<(usize, usize)> = Vec::new();
    for l in &levels {
        let (a, b) = (l[0], l[1]);
        lr.push(if cmp_real(&re(&vertices[a]), &re(&vertices[b]))? == Ordering::Less { (a, b) } else { (b, a) });
    }
    let width = |i: usize| re(&vertices[lr[i].1]) - re(&vertices[lr[i].0]);
    let mut cylinders = Vec::new();
    for i in 0..3 {
        let (tl, tr) = lr[i];
        let (bl, br) = lr[i + 1];
        let c = &width(i) + &width(i + 1);
        let h = &heights[i] - &heights[i + 1];
        // strip 5 − i is glued to the right of strip i by T = TR + BR
        let shift = &vertices[tr] + &vertices[br];
        let (tl2, tr2) = lr[5 - i];
        let top = [
            Corner { z: vertices[tl].clone(), label: label(tl) },
            Corner { z: vertices[tr].clone(), label: label(tr) },
            Corner { z: &vertices[tr2] + &shift, label: label(tr2) },
        ];
        debug_assert_eq!(&vertices[tl2] + &shift, vertices[tr]);
        let v = Corner { z: vertices[bl].clone(), label: label(bl) };
        let w = top
            .iter()
            .find(|w| w.label == v.label)
            .ok_or_else(|| Error::InvariantBreach("no loop crosses the cylinder".into()))?;
        let twist = reduce_mod(&re(&(&w.z - &v.z)), &c)?;
        // the top and bottom sides close up the top cylinder, the central diagonal the middle one
        let self_glued = match i {
            0 => width(0),
            2 => width(3),
            _ => CycloElem::zero(N),
        };
        cylinders.push(HorizontalCylinder { c, h, twist, self_glued });
    }
    Ok(Veech14 { vertices, levels: heights, cylinders })
}

impl Veech14 {
    /// Chain data with the top cylinder (or the central one) as C₁.
    pub fn normalized(&self, central_first: bool) -> Result<NormalizedChain> {
        let mut cyl = self.cylinders.clone();
        if central_first {
            cyl.reverse();
        }
        let (c1, h1) = (cyl[0].c.clone(), cyl[0].h.clone());
        let c: Vec<CycloElem> = cyl.iter().map(|x| x.c.div(&c1)).collect::<Result<_>>()?;
        let h: Vec<CycloElem> = cyl.iter().map(|x| x.h.div(&h1)).collect::<Result<_>>()?;
        let t: Vec<CycloElem> = cyl.iter().map(|x| x.twist.div(&c1)).collect::<Result<_>>()?;
        let shear = (-&t[1]).div(&h[1])?;
        let twists: Vec<CycloElem> = (0..3).map(|j| reduce_mod(&(&t[j] + &(&shear * &h[j])), &c[j])).collect::<Result<_>>()?;
        let s = cyl[0].self_glued.div(&c1)?;
        let arr = |v: Vec<CycloElem>| -> [CycloElem; 3] { v.try_into().expect("three cylinders") };
        Ok(NormalizedChain { c: arr(c), h: arr(h), s, twists: arr(twists) })
    }
}

fn congruent(a: &CycloElem, b: &CycloElem, m: &CycloElem) -> Result<bool> {
    Ok((a - b).div(m)?.as_rat().is_some_and(|r| r.is_integer()))
}

impl NormalizedChain {
    /// Same circumferences, heights and s, and twists agreeing up to a common sign.
    pub fn matches(&self, cand: &Candidate, t1: &Rat, t3_frac: &Rat) -> Result<bool> {
        if self.c != cand.c || self.h != cand.h || self.s != cand.s {
            return Ok(false);
        }
        let n = cand.s.modulus();
        let t = [CycloElem::from_rat(n, t1.clone()), CycloElem::zero(n), cand.c[2].scale(t3_frac)];
        for sign in [1, -1] {
            let mut all = true;
            for j in 0..3 {
                let tj = if sign == 1 { t[j].clone() } else { -&t[j] };
                all &= congruent(&self.twists[j], &tj, &self.c[j])?;
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourteen_gon_cylinders() {
        let p = build_veech_14gon().unwrap();
        assert_eq!(p.levels.len(), 7);
        assert_eq!(p.cylinders.len(), 3);
        // moduli h/c agree across the three cylinders
        let m: Vec<CycloElem> = p.cylinders.iter().map(|c| c.h.div(&c.c).unwrap()).collect();
        assert_eq!(m[0], m[1]);
        assert_eq!(m[1], m[2]);
        let top = p.normalized(false).unwrap();
        assert!(top.twists.iter().all(|t| t.is_zero()));
        assert!((top.s.to_f64() - 0.2632).abs() < 1e-3);
    }

    #[test]
    fn reduce_mod_negative() {
        let m = CycloElem::from_int(1, 3);
        assert_eq!(reduce_mod(&CycloElem::from_int(1, -1), &m).unwrap(), CycloElem::from_int(1, 2));
        assert_eq!(reduce_mod(&CycloElem::from_int(1, 7), &m).unwrap(), CycloElem::from_int(1, 1));
    }
}
