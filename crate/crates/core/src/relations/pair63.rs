//! Pairs (y₁, y₂) of roots of unity of order dividing 63 with
//! (y₁ + y₁⁻¹)/(y₂ + y₂⁻¹) rational or cubic.

use num_integer::Integer;
use serde::Serialize;

use crate::exactnum::field::field;
use crate::exactnum::{ratio_stabilizer, IntRootSum};

pub const N63: u64 = 63;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairHit {
    /// Exponents of y₁, y₂ as powers of ζ₆₃.
    pub exponents: (u64, u64),
    pub orders: (u64, u64),
    pub ratio_degree: usize,
}

pub fn order(e: u64, n: u64) -> u64 {
    n / e.gcd(&n)
}

fn two_cos(e: u64) -> IntRootSum {
    IntRootSum::new(N63, [(e as i64, 1), (-(e as i64), 1)])
}

/// Exhaustive search in lexicographic exponent order.
///
/// y_j ≠ 1 (y = y⁻¹ only for y = 1 at odd order) and y₁ ≠ y₂^{±1}.
pub fn pair_search_63() -> Vec<PairHit> {
    let phi = field(N63).units.len();
    let mut out = Vec::new();
    for a in 1..N63 {
        for b in 1..N63 {
            if a == b || (a + b) % N63 == 0 {
                continue;
            }
            let degree = phi / ratio_stabilizer(&two_cos(a), &two_cos(b)).len();
            if degree == 1 || degree == 3 {
                out.push(PairHit { exponents: (a, b), orders: (order(a, N63), order(b, N63)), ratio_degree: degree });
            }
        }
    }
    out
}

/// Whether gcd(ord y₁, ord y₂) ∈ {7, 9} or {ord y₁, ord y₂} = {3, 7}.
pub fn satisfies_dichotomy(h: &PairHit) -> bool {
    let (o1, o2) = h.orders;
    matches!(o1.gcd(&o2), 7 | 9) || (o1.min(o2), o1.max(o2)) == (3, 7)
}

/// Whether both orders divide 7 or both divide 9.
pub fn orders_share_prime_part(h: &PairHit) -> bool {
    let (o1, o2) = h.orders;
    (7 % o1 == 0 && 7 % o2 == 0) || (9 % o1 == 0 && 9 % o2 == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycloElem;

    #[test]
    fn frozen_count_and_examples() {
        let hits = pair_search_63();
        assert_eq!(hits.len(), 96);
        // (ζ₇, ζ₇²) = (ζ₆₃⁹, ζ₆₃¹⁸)
        let h = hits.iter().find(|h| h.exponents == (9, 18)).unwrap();
        assert_eq!(h.ratio_degree, 3);
        assert!(hits.iter().all(|h| h.exponents.0 != h.exponents.1));
        let mut sorted = hits.clone();
        sorted.sort_by_key(|h| h.exponents);
        assert_eq!(sorted, hits);
    }

    #[test]
    fn degree_agrees_with_field_arithmetic() {
        for &(a, b) in &[(9u64, 18u64), (21, 7), (1, 2), (7, 28)] {
            let y = |e: u64| &CycloElem::root(N63, e as i64) + &CycloElem::root(N63, -(e as i64));
            let ratio = y(a).div(&y(b)).unwrap();
            let phi = field(N63).units.len();
            assert_eq!(ratio.degree_over_q(), phi / ratio_stabilizer(&two_cos(a), &two_cos(b)).len());
        }
    }

    #[test]
    fn order_three_exceptions() {
        // ζ₃ against ζ₉: (−1)/(2cos 2π/9) is cubic but gcd of orders is 3
        let hits = pair_search_63();
        let h = hits.iter().find(|h| h.exponents == (21, 7)).unwrap();
        assert_eq!(h.orders, (3, 9));
        assert!(!satisfies_dichotomy(h));
        assert!(orders_share_prime_part(h));
        let bad: Vec<_> = hits.iter().filter(|h| !satisfies_dichotomy(h)).collect();
        assert_eq!(bad.len(), 24);
        assert!(bad.iter().all(|h| matches!(h.orders, (3, 9) | (9, 3))));
    }
}
