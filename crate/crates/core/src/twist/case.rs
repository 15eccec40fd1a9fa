use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::PolyPQ;
use crate::exactnum::linalg::{self, Matrix};
use crate::exactnum::{CycloElem, Rat};
use crate::search::Candidate;
use crate::{Error, Result};

/// Expansions of s, h₂ and s·h₂ in (1, t, t²) and the two matrices of the
/// rationality constraint M_L·(P, q, 1)ᵀ = u·M_R·(P², Pq, q²)ᵀ with P = p + 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseData {
    #[serde(serialize_with = "crate::ser::rats")]
    pub a: [Rat; 3],
    #[serde(serialize_with = "crate::ser::rats")]
    pub b: [Rat; 3],
    #[serde(serialize_with = "crate::ser::rats")]
    pub k: [Rat; 3],
    #[serde(serialize_with = "crate::ser::rat_matrix")]
    pub m_l: Matrix,
    #[serde(serialize_with = "crate::ser::rat_matrix")]
    pub m_r: Matrix,
}

fn e0(i: usize) -> Rat {
    if i == 0 {
        Rat::one()
    } else {
        Rat::zero()
    }
}

/// Primitive integer vector with first nonzero entry positive.
pub fn primitive_direction(v: &[Rat]) -> Vec<Rat> {
    let p = PolyPQ::from_terms(v.iter().enumerate().map(|(i, c)| ((0, i as u32), c.clone())));
    let n = p.normalized();
    // normalized() makes the highest-index entry positive; flip to make the first one positive
    let mut out: Vec<Rat> = (0..v.len()).map(|i| n.coeff(0, i as u32)).collect();
    if out.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

/// A rational relation λ₁(s − 1) + λ₂h₂ + λ₃(s·h₂ + 1) = 0, or None if the three are independent.
pub fn dependence_lambda(cand: &Candidate) -> Result<Option<[Rat; 3]>> {
    let n = cand.s.modulus();
    let one = CycloElem::one(n);
    let h2 = &cand.h[1];
    let sh = &cand.s * h2;
    let rows = vec![cand.expand(&(&cand.s - &one))?.to_vec(), cand.expand(h2)?.to_vec(), cand.expand(&(&sh + &one))?.to_vec()];
    let ker = linalg::left_kernel(&rows);
    let Some(v) = ker.first() else {
        return Ok(None);
    };
    let v = primitive_direction(v);
    let check = &(&(&cand.s - &one).scale(&v[0]) + &h2.scale(&v[1])) + &(&sh + &one).scale(&v[2]);
    if !check.is_zero() {
        return Err(Error::InvariantBreach("dependence relation does not vanish".into()));
    }
    Ok(Some([v[0].clone(), v[1].clone(), v[2].clone()]))
}

impl CaseData {
    pub fn from_expansions(a: [Rat; 3], b: [Rat; 3], k: [Rat; 3]) -> Self {
        let two = Rat::from_integer(2.into());
        let m_l = (0..3).map(|i| vec![-&b[i] * &two, e0(i) + &b[i] + &k[i], b[i].clone()]).collect();
        let m_r = (0..3).map(|i| vec![-b[i].clone(), e0(i) + &b[i] + &k[i], -&a[i] - &k[i]]).collect();
        CaseData { a, b, k, m_l, m_r }
    }

    /// Left and right sides of the matrix equation at integers (P, q) and a given u.
    pub fn sides(&self, p: &Rat, q: &Rat) -> (Vec<Rat>, Vec<Rat>) {
        let left = linalg::mat_vec(&self.m_l, &[p.clone(), q.clone(), Rat::one()]);
        let right = linalg::mat_vec(&self.m_r, &[p * p, p * q, q * q]);
        (left, right)
    }
}

/// CaseData for an admissible candidate with a dependence relation.
///
/// Checks the reconstruction of s, h₂, s·h₂, that M_L(1,0,2)ᵀ = 0, and that M_R is singular.
pub fn build_case(cand: &Candidate) -> Result<CaseData> {
    let h2 = &cand.h[1];
    let sh = &cand.s * h2;
    let (a, b, k) = (cand.expand(&cand.s)?, cand.expand(h2)?, cand.expand(&sh)?);
    for (coeffs, elem) in [(&a, &cand.s), (&b, h2), (&k, &sh)] {
        if cand.field.combine(coeffs) != *elem {
            return Err(Error::InvariantBreach("expansion does not recombine".into()));
        }
    }
    let case = CaseData::from_expansions(a, b, k);
    let two = Rat::from_integer(2.into());
    if linalg::mat_vec(&case.m_l, &[Rat::one(), Rat::zero(), two]).iter().any(|x| !x.is_zero()) {
        return Err(Error::InvariantBreach("M_L (1,0,2) is not zero".into()));
    }
    if !linalg::det(&case.m_r).is_zero() {
        return Err(Error::InvariantBreach(format!("M_R is invertible for {}, contradicting the dependence", cand.tuple)));
    }
    Ok(case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::search::{evaluate_symmetric, RootTuple};

    fn cand(n: u64, e: [u64; 3]) -> Candidate {
        evaluate_symmetric(&RootTuple::raw(n, e)).unwrap().unwrap()
    }

    fn r(v: [(i64, i64); 3]) -> [Rat; 3] {
        v.map(|(a, b)| rat(a, b))
    }

    #[test]
    fn case_expansions() {
        let c1 = build_case(&cand(7, [1, 5, 3])).unwrap();
        assert_eq!(c1.a, r([(9, 7), (-2, 7), (-3, 7)]));
        assert_eq!(c1.b, r([(-1, 1), (1, 1), (1, 1)]));
        assert_eq!(c1.k, r([(-11, 7), (4, 7), (6, 7)]));
        let c2 = build_case(&cand(7, [5, 3, 1])).unwrap();
        assert_eq!(c2.a, r([(-8, 7), (1, 7), (5, 7)]));
        assert_eq!(c2.b, r([(0, 1), (1, 1), (0, 1)]));
        assert_eq!(c2.k, r([(5, 7), (2, 7), (-4, 7)]));
        let c3 = build_case(&cand(14, [1, 11, 5])).unwrap();
        assert_eq!(c3.a, r([(8, 7), (-6, 7), (2, 7)]));
        assert_eq!(c3.b, r([(-1, 1), (1, 1), (0, 1)]));
        assert_eq!(c3.k, r([(-10, 7), (18, 7), (-6, 7)]));
    }

    #[test]
    fn dependence_relations() {
        let dir = |v: [i64; 3]| primitive_direction(&v.map(|x| rat(x, 1)));
        assert_eq!(dependence_lambda(&cand(7, [1, 5, 3])).unwrap().unwrap().to_vec(), dir([-2, 0, -1]));
        assert_eq!(dependence_lambda(&cand(7, [5, 3, 1])).unwrap().unwrap().to_vec(), dir([4, -2, 5]));
        assert_eq!(dependence_lambda(&cand(14, [1, 11, 5])).unwrap().unwrap().to_vec(), dir([-3, 0, -1]));
        assert_eq!(dependence_lambda(&cand(7, [1, 3, 5])).unwrap(), None);
    }

    #[test]
    fn primitive_directions() {
        assert_eq!(primitive_direction(&[rat(-4, 3), rat(0, 1), rat(-2, 3)]), vec![rat(2, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(primitive_direction(&[rat(0, 1), rat(-1, 2), rat(1, 3)]), vec![rat(0, 1), rat(3, 1), rat(-2, 1)]);
    }
}
