use num_traits::{One, Zero};
use serde::Serialize;

use super::case::CaseData;
use super::poly::PolyPQ;
use crate::exactnum::linalg;
use crate::exactnum::Rat;
use crate::{Error, Result};

/// What the rows orthogonal to b say about u.
///
/// For μ with μ·b = 0 the matrix equation reduces to q·m₁ = u·q·(P·m₁ − q·m₂),
/// with m₁ = μ·(e₀+b+k) and m₂ = μ·(a+k), so 1/u = P − λq for λ = m₂/m₁.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AffineRelation {
    /// 1/u = P − λq.
    InverseU {
        #[serde(serialize_with = "crate::ser::rat")]
        lambda: Rat,
    },
    /// The rows force q = 0 or u = 0.
    Contradiction,
    /// Every such row is identically zero.
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    #[serde(serialize_with = "crate::ser::rats")]
    pub kernel: Vec<Rat>,
    #[serde(serialize_with = "crate::ser::rats")]
    pub left_kernel: Vec<Rat>,
    /// Normalized constraints in P = p + 1 and q.
    pub constraints: Vec<PolyPQ>,
    pub affine: AffineRelation,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

fn affine_relation(case: &CaseData) -> AffineRelation {
    let e0b_k: Vec<Rat> = (0..3).map(|i| if i == 0 { Rat::one() } else { Rat::zero() } + &case.b[i] + &case.k[i]).collect();
    let ak: Vec<Rat> = (0..3).map(|i| &case.a[i] + &case.k[i]).collect();
    let perp = linalg::kernel(&vec![case.b.to_vec()]);
    let mut lambda: Option<Rat> = None;
    for mu in &perp {
        let (m1, m2) = (dot(mu, &e0b_k), dot(mu, &ak));
        if m1.is_zero() {
            if !m2.is_zero() {
                return AffineRelation::Contradiction;
            }
            continue;
        }
        let l = m2 / m1;
        match &lambda {
            Some(prev) if *prev != l => return AffineRelation::Contradiction,
            _ => lambda = Some(l),
        }
    }
    match lambda {
        Some(lambda) => AffineRelation::InverseU { lambda },
        None => AffineRelation::Vacuous,
    }
}

/// Eliminates u (and the kernel parameter τ) from the matrix equation.
///
/// With w = M_R⁻¹-style particular solution w₀(P, q) plus τκ, proportionality
/// w ∝ (P², Pq, q²) gives q·w₁ − P·w₂ = 0 and q·w₂ − P·w₃ = 0, both linear in τ;
/// their τ-resultant is the constraint.
pub fn eliminate_u(case: &CaseData) -> Result<Elimination> {
    let r = linalg::rank(&case.m_r);
    if r != 2 {
        return Err(Error::DegenerateRank(r));
    }
    let kappa = linalg::kernel(&case.m_r).remove(0);
    let ell = linalg::left_kernel(&case.m_r).remove(0);
    if linalg::vec_mat(&ell, &case.m_l).iter().any(|x| !x.is_zero()) {
        return Err(Error::InvariantBreach("left kernel of M_R does not annihilate M_L".into()));
    }
    let col = |j: usize| -> Vec<Rat> { case.m_l.iter().map(|row| row[j].clone()).collect() };
    let sol = |j: usize| {
        linalg::solve(&case.m_r, &col(j)).ok_or_else(|| Error::InvariantBreach("M_R w = M_L e_j is inconsistent".into()))
    };
    let (s1, s2, s3) = (sol(0)?, sol(1)?, sol(2)?);
    let w0: Vec<PolyPQ> = (0..3).map(|i| PolyPQ::linear(&s1[i], &s2[i], &s3[i])).collect();
    let (p, q) = (PolyPQ::p(), PolyPQ::q());
    let kc = |i: usize| PolyPQ::constant(kappa[i].clone());
    // E_j = A_j + τ·B_j
    let a1 = q.mul(&w0[0]).sub(&p.mul(&w0[1]));
    let b1 = q.mul(&kc(0)).sub(&p.mul(&kc(1)));
    let a2 = q.mul(&w0[1]).sub(&p.mul(&w0[2]));
    let b2 = q.mul(&kc(1)).sub(&p.mul(&kc(2)));
    let res = a1.mul(&b2).sub(&a2.mul(&b1));
    let raw = if res.is_zero() && b1.is_zero() && b2.is_zero() { vec![a1, a2] } else { vec![res] };
    let mut constraints: Vec<PolyPQ> =
        raw.into_iter().filter(|c| !c.is_zero()).map(|c| c.strip_monomial().normalized()).collect();
    constraints.dedup();
    if constraints.is_empty() {
        return Err(Error::Underdetermined);
    }
    Ok(Elimination { kernel: kappa, left_kernel: ell, constraints, affine: affine_relation(case) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn r(v: [(i64, i64); 3]) -> [Rat; 3] {
        v.map(|(a, b)| rat(a, b))
    }

    pub fn case1() -> CaseData {
        CaseData::from_expansions(r([(9, 7), (-2, 7), (-3, 7)]), r([(-1, 1), (1, 1), (1, 1)]), r([(-11, 7), (4, 7), (6, 7)]))
    }

    #[test]
    fn case1_quadratic() {
        let e = eliminate_u(&case1()).unwrap();
        assert_eq!(e.constraints.len(), 1);
        assert_eq!(e.constraints[0].to_string(), "2P^2 - 2Pq - 2P + q^2 + q");
        assert_eq!(e.affine, AffineRelation::InverseU { lambda: rat(1, 2) });
    }

    #[test]
    fn case2_affine() {
        let c =
            CaseData::from_expansions(r([(-8, 7), (1, 7), (5, 7)]), r([(0, 1), (1, 1), (0, 1)]), r([(5, 7), (2, 7), (-4, 7)]));
        let e = eliminate_u(&c).unwrap();
        assert_eq!(e.affine, AffineRelation::InverseU { lambda: rat(-1, 4) });
        assert_eq!(e.constraints[0].to_string(), "4P^2 + 2Pq - 4P - 3q^2 - q");
    }

    #[test]
    fn degenerate_rank() {
        let z = r([(0, 1), (0, 1), (0, 1)]);
        assert!(matches!(eliminate_u(&CaseData::from_expansions(z.clone(), z.clone(), z)), Err(Error::DegenerateRank(_))));
    }
}
