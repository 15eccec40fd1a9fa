use serde::Serialize;

use crate::exactnum::CycloElem;
use crate::{Error, Result};

/// One term a·z of a linear relation, z = ζ_m^e.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationTerm {
    pub coeff: CycloElem,
    /// (modulus, exponent) of the root of unity.
    pub root: (u64, i64),
}

impl RelationTerm {
    pub fn new(coeff: CycloElem, modulus: u64, exponent: i64) -> Self {
        RelationTerm { coeff, root: (modulus, exponent) }
    }

    fn value(&self) -> CycloElem {
        &self.coeff * &CycloElem::root(self.root.0, self.root.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PartitionVerdict {
    Primitive,
    /// Every proper nonempty vanishing subset, as sorted index lists.
    Decomposable(Vec<Vec<usize>>),
}

pub const MAX_RELATION_LEN: usize = 12;

pub fn primitive_partition(terms: &[RelationTerm]) -> Result<PartitionVerdict> {
    let k = terms.len();
    if k > MAX_RELATION_LEN {
        return Err(Error::RelationTooLong(k));
    }
    if terms.iter().any(|t| t.coeff.is_zero()) {
        return Err(Error::InvalidRelation("zero coefficient".into()));
    }
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (terms[i].root, terms[j].root);
            if CycloElem::root(a.0, a.1) == CycloElem::root(b.0, b.1) {
                return Err(Error::InvalidRelation(format!("terms {i} and {j} share a root")));
            }
        }
    }
    let values: Vec<CycloElem> = terms.iter().map(RelationTerm::value).collect();
    let total = values.iter().skip(1).fold(values.first().cloned().unwrap_or_else(|| CycloElem::zero(1)), |a, b| &a + b);
    if !total.is_zero() {
        return Err(Error::NotARelation);
    }
    // subset sums by lowest-bit recurrence: sum[mask] = sum[mask without low bit] + value[low bit]
    let full = (1usize << k) - 1;
    let mut sums: Vec<CycloElem> = Vec::with_capacity(full + 1);
    sums.push(CycloElem::zero(1));
    let mut vanishing = Vec::new();
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        let s = &sums[mask & (mask - 1)] + &values[low];
        if mask != full && s.is_zero() {
            vanishing.push((0..k).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
        }
        sums.push(s);
    }
    vanishing.sort();
    Ok(if vanishing.is_empty() { PartitionVerdict::Primitive } else { PartitionVerdict::Decomposable(vanishing) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(n: u64) -> CycloElem {
        CycloElem::one(n)
    }

    #[test]
    fn cube_roots_are_primitive() {
        let t: Vec<_> = (0..3).map(|e| RelationTerm::new(one(3), 3, e)).collect();
        assert_eq!(primitive_partition(&t).unwrap(), PartitionVerdict::Primitive);
    }

    #[test]
    fn paired_cancellation_decomposes() {
        // 1 + (−1) + ζ₅ + (−ζ₅), the roots being 1, ζ₂, ζ₅, ζ₁₀⁷
        let t = vec![
            RelationTerm::new(one(1), 1, 0),
            RelationTerm::new(one(1), 2, 1),
            RelationTerm::new(one(1), 5, 1),
            RelationTerm::new(one(1), 10, 7),
        ];
        assert_eq!(primitive_partition(&t).unwrap(), PartitionVerdict::Decomposable(vec![vec![0, 1], vec![2, 3]]));
    }

    #[test]
    fn errors() {
        let t = vec![RelationTerm::new(one(1), 3, 0), RelationTerm::new(one(1), 3, 1)];
        assert_eq!(primitive_partition(&t), Err(Error::NotARelation));
        let dup = vec![RelationTerm::new(one(1), 3, 1), RelationTerm::new(-one(1), 6, 2)];
        assert!(matches!(primitive_partition(&dup), Err(Error::InvalidRelation(_))));
        let long: Vec<_> = (0..13).map(|e| RelationTerm::new(one(13), 13, e)).collect();
        assert_eq!(primitive_partition(&long), Err(Error::RelationTooLong(13)));
    }
}
