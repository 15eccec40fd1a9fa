use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::case::CaseData;
use super::elim::{AffineRelation, Elimination};
use super::poly::{rat_sqrt, PolyPQ, UPoly};
use crate::exactnum::{CycloElem, Rat};
use crate::search::Candidate;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistSolution {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::ser::rat")]
    pub u: Rat,
    /// t₁ = k/q over 0 ≤ k < q with gcd(k, q) = 1.
    #[serde(serialize_with = "crate::ser::rats")]
    pub twists: Vec<Rat>,
    pub valid: bool,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintBound {
    pub constraint: PolyPQ,
    /// Discriminant of the monic quadratic in P, as a polynomial in q.
    pub discriminant: Option<UPoly>,
    /// Largest q allowed by the discriminant being non-negative.
    pub discriminant_bound: Option<u64>,
    /// Largest q allowed by the constraint together with the affine relation.
    pub affine_bound: Option<u64>,
}

/// (p, q) with p = ⌊q·s⌋ and a rational ratio h′₁c′₂/(h′₂c′₁).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectHit {
    pub p: u64,
    pub q: u64,
    #[serde(serialize_with = "crate::ser::rat")]
    pub ratio: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub bounds: Vec<ConstraintBound>,
    pub affine: AffineRelation,
    /// Overall bound on q, if any constraint family provides one.
    pub q_bound: Option<u64>,
    /// No bound was found and only q ≤ q_max was searched.
    pub incomplete: bool,
    pub solutions: Vec<TwistSolution>,
    pub direct_q_max: u64,
    pub direct: Vec<DirectHit>,
    pub routes_agree: bool,
}

impl SolveReport {
    pub fn valid(&self) -> impl Iterator<Item = &TwistSolution> {
        self.solutions.iter().filter(|s| s.valid)
    }
}

fn floor_u64(r: &Rat) -> u64 {
    if r.is_negative() {
        0
    } else {
        r.floor().to_integer().to_u64().unwrap_or(u64::MAX)
    }
}

fn binom(n: u32, k: u32) -> Rat {
    Rat::from_integer((0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64).into())
}

fn pow(x: &Rat, e: u32) -> Rat {
    (0..e).fold(Rat::one(), |a, _| a * x)
}

/// Bound on q for zeros of F with P = λq + δ, 0 < δ < 1.
///
/// The q^D coefficient is F_D(λ, 1); every lower coefficient is bounded by
/// Σ |f_ij| C(i, m) |λ|^m over the contributing terms, so a zero needs
/// |F_D(λ, 1)|·q ≤ Σ_{d<D} M_d.
fn affine_bound(f: &PolyPQ, lambda: &Rat) -> Option<u64> {
    let top = f.total_degree();
    let mut lead = Rat::zero();
    let mut lower = Rat::zero();
    for (&(i, j), c) in f.terms() {
        for m in 0..=i {
            let w = c * binom(i, m) * pow(lambda, m);
            if m + j == top {
                if m == i {
                    lead += w;
                }
                // m < i with m + j = top is impossible since i + j ≤ top
            } else {
                lower += w.abs();
            }
        }
    }
    (!lead.is_zero()).then(|| floor_u64(&(lower / lead.abs())).max(1))
}

fn discriminant(f: &PolyPQ) -> Option<UPoly> {
    let c = f.in_p();
    if c.len() != 3 || c[2].degree() != Some(0) {
        return None;
    }
    let a = c[2].0[0].clone();
    let four = Rat::from_integer(4.into());
    let d = c[1].mul(&c[1]).add(&c[2].mul(&c[0]).scale(&-four));
    Some(d.scale(&(Rat::one() / (&a * &a))))
}

fn discriminant_bound(d: &UPoly) -> Option<u64> {
    match d.leading() {
        Some(l) if l.is_negative() => d.root_bound().map(|b| floor_u64(&b)),
        _ => None,
    }
}

/// Integer P in 1..=q with F(P, q) = 0 for every constraint.
fn candidate_ps(constraints: &[PolyPQ], q: u64) -> Vec<u64> {
    let qr = Rat::from_integer(q.into());
    let mut ps: Vec<u64> = match constraints.iter().find(|c| c.degree_p() >= 1) {
        Some(f) => {
            let c: Vec<Rat> = f.in_p().iter().map(|u| u.eval(&qr)).collect();
            let roots: Vec<Rat> = match c.len() {
                2 if !c[1].is_zero() => vec![-&c[0] / &c[1]],
                3 if !c[2].is_zero() => {
                    let disc = &c[1] * &c[1] - Rat::from_integer(4.into()) * &c[2] * &c[0];
                    match rat_sqrt(&disc) {
                        Some(r) => {
                            let two_a = Rat::from_integer(2.into()) * &c[2];
                            vec![(-&c[1] + &r) / &two_a, (-&c[1] - r) / two_a]
                        }
                        None => vec![],
                    }
                }
                // vanishing leading coefficient at this q: try every P
                _ => (1..=q).map(|p| Rat::from_integer(p.into())).collect(),
            };
            roots.iter().filter(|r| r.is_integer()).filter_map(|r| r.to_integer().to_u64()).collect()
        }
        None => (1..=q).collect(),
    };
    ps.retain(|&p| (1..=q).contains(&p));
    ps.sort_unstable();
    ps.dedup();
    ps.retain(|&p| constraints.iter().all(|f| f.eval(&Rat::from_integer(p.into()), &qr).is_zero()));
    ps
}

/// ⌊q·s⌋ exactly, or None if q·s is an integer (r = 0).
pub fn floor_qs(s: &CycloElem, q: u64) -> Result<Option<u64>> {
    let qs = s.scale(&Rat::from_integer(q.into()));
    let mut p = (qs.to_f64().floor().max(0.0)) as i64;
    loop {
        let lo = &qs - &CycloElem::from_int(qs.modulus(), p);
        let hi = &CycloElem::from_int(qs.modulus(), p + 1) - &qs;
        match (lo.sign()?, hi.sign()?) {
            (0, _) => return Ok(None),
            (1, 1) => return Ok(Some(p as u64)),
            (-1, _) => p -= 1,
            _ => p += 1,
        }
    }
}

/// h′₁c′₂/(h′₂c′₁) = (qs − p)(q + (q−p)h₂) / (((p+1) − qs)(q + (q−p−1)h₂)).
pub fn vertical_ratio(s: &CycloElem, h2: &CycloElem, p: u64, q: u64) -> Result<CycloElem> {
    let n = s.modulus();
    let r = |x: i64| Rat::from_integer(x.into());
    let (pi, qi) = (p as i64, q as i64);
    let qs = s.scale(&r(qi));
    let num = &(&qs - &CycloElem::from_int(n, pi)) * &(&CycloElem::from_int(n, qi) + &h2.scale(&r(qi - pi)));
    let den = &(&CycloElem::from_int(n, pi + 1) - &qs) * &(&CycloElem::from_int(n, qi) + &h2.scale(&r(qi - pi - 1)));
    num.div(&den)
}

fn validate(case: &CaseData, cand: &Candidate, p1: u64, q: u64) -> Result<TwistSolution> {
    let p = p1 - 1;
    let (pr, qr) = (Rat::from_integer(p1.into()), Rat::from_integer(q.into()));
    let twists = (0..q).filter(|k| k.gcd(&q) == 1).map(|k| Rat::new(k.into(), q.into())).collect();
    let mut sol = TwistSolution { p, q, u: Rat::zero(), twists, valid: false, reason: None };
    let fail = |mut s: TwistSolution, why: &str| {
        s.reason = Some(why.to_string());
        Ok(s)
    };
    if floor_qs(&cand.s, q)? != Some(p) {
        return fail(sol, "p-not-floor-qs");
    }
    let (left, right) = case.sides(&pr, &qr);
    let Some(i) = right.iter().position(|x| !x.is_zero()) else {
        return fail(sol, "u-undetermined");
    };
    sol.u = &left[i] / &right[i];
    if left.iter().zip(&right).any(|(l, r)| *l != &sol.u * r) {
        return fail(sol, "matrix-equation");
    }
    if sol.u <= Rat::one() {
        return fail(sol, "u-not-above-one");
    }
    match vertical_ratio(&cand.s, &cand.h[1], p, q)?.as_rat() {
        Some(ratio) if &ratio + Rat::one() == sol.u => {}
        Some(_) => return fail(sol, "u-ratio-mismatch"),
        None => return fail(sol, "ratio-irrational"),
    }
    sol.valid = true;
    Ok(sol)
}

/// Direct per-q route: p = ⌊q·s⌋ and exact rationality of the vertical ratio.
pub fn direct_route(cand: &Candidate, q_max: u64) -> Result<Vec<DirectHit>> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        let Some(p) = floor_qs(&cand.s, q)? else { continue };
        if let Some(ratio) = vertical_ratio(&cand.s, &cand.h[1], p, q)?.as_rat() {
            out.push(DirectHit { p, q, ratio });
        }
    }
    Ok(out)
}

pub fn integer_solutions(case: &CaseData, elim: &Elimination, cand: &Candidate, q_max: u64) -> Result<SolveReport> {
    let lambda = match &elim.affine {
        AffineRelation::InverseU { lambda } => Some(lambda.clone()),
        _ => None,
    };
    let bounds: Vec<ConstraintBound> = elim
        .constraints
        .iter()
        .map(|f| {
            let disc = discriminant(f);
            let discriminant_bound = disc.as_ref().and_then(discriminant_bound);
            let affine_bound = lambda.as_ref().and_then(|l| {
                // 1/u = P − λq ∈ (0, 1) with 1 ≤ P ≤ q is empty unless 0 < λ < 1
                if !l.is_positive() || *l >= Rat::one() {
                    Some(0)
                } else {
                    affine_bound(f, l)
                }
            });
            ConstraintBound { constraint: f.clone(), discriminant: disc, discriminant_bound, affine_bound }
        })
        .collect();
    let contradiction = elim.affine == AffineRelation::Contradiction;
    let q_bound =
        bounds.iter().flat_map(|b| [b.discriminant_bound, b.affine_bound]).flatten().chain(contradiction.then_some(0)).min();
    let incomplete = q_bound.is_none();
    let limit = q_bound.unwrap_or(q_max);
    let mut solutions = Vec::new();
    for q in 1..=limit {
        for p1 in candidate_ps(&elim.constraints, q) {
            solutions.push(validate(case, cand, p1, q)?);
        }
    }
    let direct = direct_route(cand, q_max)?;
    let symbolic: Vec<(u64, u64)> = solutions.iter().filter(|s| s.valid && s.q <= q_max).map(|s| (s.p, s.q)).collect();
    let routes_agree = symbolic == direct.iter().map(|d| (d.p, d.q)).collect::<Vec<_>>();
    Ok(SolveReport {
        bounds,
        affine: elim.affine.clone(),
        q_bound,
        incomplete,
        solutions,
        direct_q_max: q_max,
        direct,
        routes_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn affine_bound_case1() {
        // 2P² − 2Pq − 2P + q² + q at λ = 1/2: leading 1/2
        let f = PolyPQ::from_terms([
            ((2, 0), rat(2, 1)),
            ((1, 1), rat(-2, 1)),
            ((1, 0), rat(-2, 1)),
            ((0, 2), rat(1, 1)),
            ((0, 1), rat(1, 1)),
        ]);
        let b = affine_bound(&f, &rat(1, 2)).unwrap();
        assert!(b >= 1);
        // the true solution q = 1 is inside the bound
        assert_eq!(discriminant(&f).unwrap(), UPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(-1, 1)]));
        assert_eq!(discriminant_bound(&discriminant(&f).unwrap()), Some(2));
        assert_eq!(candidate_ps(&[f], 1), vec![1]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), rat(6, 1));
        assert_eq!(binom(3, 0), rat(1, 1));
    }
}
