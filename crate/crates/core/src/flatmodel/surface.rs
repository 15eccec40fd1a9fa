use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::exactnum::{cmp_real, CycloElem, Rat};
use crate::search::{chain_lengths, Candidate};
use crate::{Error, Result};

/// Horizontal cylinders C₁, …, C_g glued in a chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSurface {
    pub c: Vec<CycloElem>,
    pub h: Vec<CycloElem>,
    /// Twist of each cylinder, an absolute length modulo its circumference.
    pub twists: Vec<CycloElem>,
    /// ℓ₀ = s and ℓ_k = c_k − ℓ_{k−1}.
    pub saddle_lengths: Vec<CycloElem>,
}

fn positive(x: &CycloElem) -> Result<bool> {
    Ok(x.sign()? > 0)
}

impl ChainSurface {
    pub fn new(c: Vec<CycloElem>, h: Vec<CycloElem>, s: CycloElem, twists: Vec<CycloElem>) -> Result<Self> {
        let g = c.len();
        if g < 2 || h.len() != g || twists.len() != g {
            return Err(Error::InvalidArgument(format!("chain needs g ≥ 2 cylinders with matching data, got {g}")));
        }
        for (x, what) in c.iter().map(|x| (x, "circumference")).chain(h.iter().map(|x| (x, "height"))) {
            if !positive(x)? {
                return Err(Error::Infeasible(format!("{what} {x} is not positive")));
            }
        }
        let mut lengths = vec![s];
        for cj in &c {
            let next = cj - lengths.last().expect("nonempty");
            lengths.push(next);
        }
        for (k, l) in lengths.iter().enumerate() {
            if !positive(l)? {
                return Err(Error::Infeasible(format!("saddle length ℓ_{k} = {l} is not positive")));
            }
        }
        Ok(ChainSurface { c, h, twists, saddle_lengths: lengths })
    }

    pub fn genus(&self) -> usize {
        self.c.len()
    }

    pub fn area(&self) -> CycloElem {
        self.c.iter().zip(&self.h).fold(CycloElem::zero(1), |acc, (c, h)| &acc + &(c * h))
    }
}

/// Surface for a candidate with twists t₁ (a fraction of c₁ = 1), t₂ = 0 and t₃ = c₃·t3_frac.
pub fn build_chain_surface(cand: &Candidate, t1: &Rat, t3_frac: &Rat) -> Result<ChainSurface> {
    let n = cand.s.modulus();
    let l = chain_lengths(&cand.c, &cand.s);
    debug_assert_eq!(l[0], cand.s);
    let twists = vec![CycloElem::from_rat(n, t1.clone()), CycloElem::zero(n), cand.c[2].scale(t3_frac)];
    ChainSurface::new(cand.c.to_vec(), cand.h.to_vec(), cand.s.clone(), twists)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// The component containing C₁.
    First,
    /// The component containing C_g.
    Last,
}

/// A vertical cylinder; `height` is its horizontal width.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerticalCylinder {
    pub height: CycloElem,
    pub circumference: CycloElem,
    /// Passes through the marked saddle connection and through its complement.
    pub crossings: BTreeMap<String, u64>,
}

/// The first-return data of the vertical flow on the core circle of an end cylinder.
#[derive(Clone, Debug)]
struct ReturnMap {
    len: CycloElem,
    /// Length of the marked saddle connection [0, mark).
    mark: CycloElem,
    /// Return time over the marked arc; over the complement it is `short + extra`.
    short: CycloElem,
    extra: CycloElem,
    /// Rotation x ↦ x − frac·len.
    frac: Rat,
    names: [&'static str; 2],
}

fn side_map(surf: &ChainSurface, side: Side) -> Result<ReturnMap> {
    let g = surf.genus();
    if surf.twists[1..g - 1].iter().any(|t| !t.is_zero()) {
        return Err(Error::InvalidArgument("middle twists must be zero".into()));
    }
    let (end, next, mark, names) = match side {
        Side::First => (0, 1, surf.saddle_lengths[0].clone(), ["gamma_0", "gamma_0_prime"]),
        Side::Last => (g - 1, g - 2, surf.saddle_lengths[g].clone(), ["gamma_g", "gamma_g_prime"]),
    };
    let frac = surf.twists[end]
        .div(&surf.c[end])?
        .as_rat()
        .ok_or_else(|| Error::NonPeriodic(format!("twist of cylinder {} is not a rational fraction", end + 1)))?;
    let frac = &frac - frac.floor();
    Ok(ReturnMap { len: surf.c[end].clone(), mark, short: surf.h[end].clone(), extra: surf.h[next].clone(), frac, names })
}

fn lt(a: &CycloElem, b: &CycloElem) -> Result<bool> {
    Ok(cmp_real(a, b)? == Ordering::Less)
}

impl ReturnMap {
    fn rotate(&self, x: &CycloElem) -> Result<CycloElem> {
        let y = x - &self.len.scale(&self.frac);
        Ok(if lt(&y, &CycloElem::zero(1))? { &y + &self.len } else { y })
    }

    fn step_cap(&self) -> u64 {
        let q = self.frac.denom().to_u64().unwrap_or(u64::MAX);
        let d = self.len.as_rat().and_then(|r| r.denom().to_u64()).unwrap_or(1);
        64u64.saturating_mul(q).saturating_mul(d)
    }

    /// Orbit tracing: cut the circle at the orbits of 0 and `mark`, follow arcs under the rotation.
    fn trace(&self) -> Result<Vec<VerticalCylinder>> {
        if !lt(&CycloElem::zero(1), &self.mark)? || !lt(&self.mark, &self.len)? {
            return Err(Error::Infeasible("marked saddle connection outside the circle".into()));
        }
        let cap = self.step_cap();
        let mut pts: Vec<CycloElem> = Vec::new();
        for start in [CycloElem::zero(1), self.mark.clone()] {
            let mut x = start.clone();
            let mut steps = 0u64;
            loop {
                if !pts.contains(&x) {
                    pts.push(x.clone());
                }
                x = self.rotate(&x)?;
                steps += 1;
                if x == start {
                    break;
                }
                if steps > cap {
                    return Err(Error::NonPeriodic(format!("orbit did not close within {cap} steps")));
                }
            }
        }
        let mut err = None;
        pts.sort_by(|a, b| {
            cmp_real(a, b).unwrap_or_else(|e| {
                err = Some(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        let m = pts.len();
        let end = |i: usize| if i + 1 < m { pts[i + 1].clone() } else { self.len.clone() };
        let widths: Vec<CycloElem> = (0..m).map(|i| &end(i) - &pts[i]).collect();
        let mut image = Vec::with_capacity(m);
        for p in &pts {
            let y = self.rotate(p)?;
            let j = pts.iter().position(|z| *z == y).ok_or_else(|| Error::InvariantBreach("orbit point escaped".into()))?;
            image.push(j);
        }
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let (mut circ, mut inside, mut outside) = (CycloElem::zero(1), 0u64, 0u64);
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                if widths[i] != widths[start] {
                    return Err(Error::InvariantBreach("rotation changed an arc length".into()));
                }
                if lt(&pts[i], &self.mark)? {
                    circ = &circ + &self.short;
                    inside += 1;
                } else {
                    circ = &(&circ + &self.short) + &self.extra;
                    outside += 1;
                }
                i = image[i];
            }
            let crossings = BTreeMap::from([(self.names[0].to_string(), inside), (self.names[1].to_string(), outside)]);
            out.push(VerticalCylinder { height: widths[start].clone(), circumference: circ, crossings });
        }
        Ok(out)
    }

    /// Closed forms with t = k/q, p = ⌊q·mark/len⌋, r = mark − p·len/q.
    fn predict(&self) -> Result<Vec<VerticalCylinder>> {
        let q = self.frac.denom().clone();
        let qn = q.to_u64().ok_or_else(|| Error::InvalidArgument("denominator too large".into()))?;
        let ratio = self.mark.div(&self.len)?.scale(&Rat::from_integer(q.clone()));
        let p = floor(&ratio)?;
        let unit = self.len.scale(&Rat::new(1.into(), q));
        let r = &self.mark - &unit.scale(&Rat::from_integer(p.into()));
        if r.is_zero() {
            return Err(Error::DegenerateSaddle);
        }
        let long = &self.short + &self.extra;
        let times = |a: u64, b: u64| &self.short.scale(&Rat::from_integer(a.into())) + &long.scale(&Rat::from_integer(b.into()));
        let cyl = |h: CycloElem, a: u64, b: u64| VerticalCylinder {
            height: h,
            circumference: times(a, b),
            crossings: BTreeMap::from([(self.names[0].to_string(), a), (self.names[1].to_string(), b)]),
        };
        let p = p as u64;
        Ok(vec![cyl(r.clone(), p + 1, qn - p - 1), cyl(&unit - &r, p, qn - p)])
    }
}

/// ⌊x⌋ for a real element.
pub(crate) fn floor(x: &CycloElem) -> Result<i64> {
    let mut p = x.to_f64().floor() as i64;
    loop {
        let lo = x - &CycloElem::from_int(1, p);
        let hi = &CycloElem::from_int(1, p + 1) - x;
        match (lo.sign()?, hi.sign()?) {
            (s, t) if s >= 0 && t > 0 => return Ok(p),
            (-1, _) => p -= 1,
            _ => p += 1,
        }
    }
}

/// Vertical cylinders on one side of the pair of vertical loops in C₂, by orbit tracing.
pub fn vertical_side_decomposition(surf: &ChainSurface, side: Side) -> Result<Vec<VerticalCylinder>> {
    let map = side_map(surf, side)?;
    let traced = map.trace()?;
    // r = 0 leaves the marked point on the orbit of 0
    if traced.len() < 2 || traced.iter().any(|c| c.height.is_zero()) {
        return Err(Error::DegenerateSaddle);
    }
    Ok(traced)
}

/// The two cylinders predicted by the closed forms, D₁ first.
pub fn predicted_decomposition(surf: &ChainSurface, side: Side) -> Result<Vec<VerticalCylinder>> {
    side_map(surf, side)?.predict()
}

/// Total area of one side: len·short + (len − mark)·extra.
pub fn side_area(surf: &ChainSurface, side: Side) -> Result<CycloElem> {
    let m = side_map(surf, side)?;
    Ok(&(&m.len * &m.short) + &(&(&m.len - &m.mark) * &m.extra))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModuliRatio {
    pub pair: (usize, usize),
    pub ratio: CycloElem,
    pub rational: bool,
}

/// h′_i c′_j / (h′_j c′_i) for every pair i < j.
pub fn moduli_ratio_check(cyls: &[VerticalCylinder]) -> Result<Vec<ModuliRatio>> {
    if cyls.len() < 2 {
        return Err(Error::InvalidArgument("need at least two cylinders".into()));
    }
    let mut out = Vec::new();
    for i in 0..cyls.len() {
        for j in i + 1..cyls.len() {
            let num = &cyls[i].height * &cyls[j].circumference;
            let den = &cyls[j].height * &cyls[i].circumference;
            let ratio = num.div(&den)?;
            let rational = ratio.degree_over_q() == 1;
            out.push(ModuliRatio { pair: (i, j), ratio, rational });
        }
    }
    Ok(out)
}

/// Rescales a trace of the last side of `surf` to compare with the first side of the reversed chain.
pub fn rescale(cyls: &[VerticalCylinder], width: &CycloElem, height: &CycloElem) -> Result<Vec<VerticalCylinder>> {
    cyls.iter()
        .map(|c| {
            Ok(VerticalCylinder {
                height: c.height.div(width)?,
                circumference: c.circumference.div(height)?,
                crossings: c.crossings.values().zip(["gamma_0", "gamma_0_prime"]).map(|(v, k)| (k.to_string(), *v)).collect(),
            })
        })
        .collect()
}
