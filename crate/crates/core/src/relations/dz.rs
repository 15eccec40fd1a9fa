//! Order bounds for primitive relations among roots of unity (Dvornicich–Zannier).

use num_integer::Integer;
use serde::Serialize;

use crate::exactnum::field::factorize;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderBoundQuery {
    /// Relation length.
    pub k: u64,
    /// Degree bound [L ∩ Q(ζₙ) : Q].
    pub d: u64,
}

impl OrderBoundQuery {
    pub fn new(k: u64, d: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("relation length k = {k} must be at least 2")));
        }
        if d < 1 {
            return Err(Error::InvalidArgument("degree bound d must be at least 1".into()));
        }
        Ok(OrderBoundQuery { k, d })
    }

    /// Primes above this cost more than k − 2: (p−1)/gcd(d, p−1) ≤ k − 1 forces p ≤ d(k−1) + 1.
    pub fn prime_cap(&self) -> u64 {
        self.d * (self.k - 1) + 1
    }
}

/// Cost (p−1)/gcd(d, p−1) − 1 of a prime dividing n exactly once.
fn cost(p: u64, d: u64) -> u64 {
    (p - 1) / d.gcd(&(p - 1)) - 1
}

pub fn dz_admissible(n: u64, q: OrderBoundQuery) -> bool {
    let f = factorize(n);
    // p^{m+1} | n requires p^m | 2d; the strongest instance is m = e − 1
    let powers_ok = f.iter().all(|&(p, e)| e < 2 || (2 * q.d) % p.pow(e - 1) == 0);
    let sum: u64 = f.iter().filter(|&&(_, e)| e == 1).map(|&(p, _)| cost(p, q.d)).sum();
    powers_ok && sum + 2 <= q.k
}

fn primes_up_to(cap: u64) -> Vec<u64> {
    (2..=cap).filter(|&p| (2..p).take_while(|i| i * i <= p).all(|i| p % i != 0)).collect()
}

/// Maximal admissible orders under divisibility, over primes ≤ `prime_cap`.
///
/// Primes dividing 2d take their largest allowed exponent (which carries no cost);
/// every other prime appears at most once and spends its cost from the budget k − 2.
pub fn dz_enumerate_maximal(q: OrderBoundQuery, prime_cap: u64) -> Vec<u64> {
    let two_d = 2 * q.d;
    let budget = q.k - 2;
    let mut base = 1u64;
    let mut optional = Vec::new();
    for p in primes_up_to(prime_cap) {
        if two_d % p == 0 {
            let mut e = 1;
            while two_d % p.pow(e) == 0 {
                e += 1;
            }
            base *= p.pow(e);
        } else if cost(p, q.d) <= budget {
            optional.push(p);
        }
    }
    let mut feasible: Vec<Vec<u64>> = Vec::new();
    fn walk(i: usize, left: u64, cur: &mut Vec<u64>, opts: &[u64], d: u64, out: &mut Vec<Vec<u64>>) {
        if i == opts.len() {
            out.push(cur.clone());
            return;
        }
        let c = cost(opts[i], d);
        if c <= left {
            cur.push(opts[i]);
            walk(i + 1, left - c, cur, opts, d, out);
            cur.pop();
        }
        walk(i + 1, left, cur, opts, d, out);
    }
    walk(0, budget, &mut Vec::new(), &optional, q.d, &mut feasible);
    let mut orders: Vec<u64> = feasible.iter().map(|s| base * s.iter().product::<u64>()).collect();
    orders.sort_unstable();
    orders.dedup();
    let maximal: Vec<u64> = orders.iter().copied().filter(|&a| !orders.iter().any(|&b| b != a && b % a == 0)).collect();
    maximal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: u64, d: u64) -> OrderBoundQuery {
        OrderBoundQuery::new(k, d).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        assert!(dz_admissible(1260, q(6, 3)));
        assert!(!dz_admissible(25, q(6, 3)));
        assert!(dz_admissible(1, q(2, 1)));
        assert!(dz_admissible(3276, q(6, 3)));
        assert!(!dz_admissible(1260 * 13, q(6, 3)));
    }

    #[test]
    fn maximal_orders() {
        assert_eq!(dz_enumerate_maximal(q(6, 3), 100), vec![1260, 3276]);
        assert_eq!(dz_enumerate_maximal(q(6, 3), q(6, 3).prime_cap()), vec![1260, 3276]);
        assert_eq!(dz_enumerate_maximal(q(4, 3), 100), vec![252]);
        assert_eq!(dz_enumerate_maximal(q(6, 1), 100), vec![60]);
    }

    #[test]
    fn lowering_an_exponent_can_add_cost() {
        // 3 ∥ 420 contributes (3−1)/gcd(3,2) − 1 = 1 that 3² | 1260 did not
        assert!(dz_admissible(1260, q(6, 3)));
        assert!(!dz_admissible(420, q(6, 3)));
    }

    #[test]
    fn invalid_queries() {
        assert!(OrderBoundQuery::new(1, 1).is_err());
        assert!(OrderBoundQuery::new(2, 0).is_err());
    }
}
