use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// Reduction data for Q(ζₙ): the monic cyclotomic polynomial Φₙ.
#[derive(Debug)]
pub struct CycloField {
    pub n: u64,
    pub phi: usize,
    /// Coefficients of Φₙ, index = degree, length φ(n) + 1.
    pub poly: Vec<i64>,
    /// Nonzero coefficients of Φₙ below the leading term.
    lower: Vec<(usize, i64)>,
    /// Units of Z/n in increasing order.
    pub units: Vec<u64>,
}

impl CycloField {
    fn build(n: u64) -> Self {
        let poly = cyclotomic_poly(n);
        let phi = poly.len() - 1;
        let lower = poly[..phi].iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
        let units = if n == 1 { vec![1] } else { (1..n).filter(|k| k.gcd(&n) == 1).collect() };
        CycloField { n, phi, poly, lower, units }
    }

    /// Reduce an integer polynomial modulo Φₙ in place; the result has length φ(n).
    pub fn reduce_i64(&self, buf: &mut Vec<i64>) {
        for k in (self.phi..buf.len()).rev() {
            let c = buf[k];
            if c != 0 {
                let base = k - self.phi;
                for &(i, a) in &self.lower {
                    buf[base + i] =
                        buf[base + i].checked_sub(c.checked_mul(a).expect("coefficient overflow")).expect("coefficient overflow");
                }
            }
        }
        buf.truncate(self.phi);
        buf.resize(self.phi, 0);
    }

    pub fn reduce_big(&self, buf: &mut Vec<BigInt>) {
        for k in (self.phi..buf.len()).rev() {
            if buf[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut buf[k]);
            let base = k - self.phi;
            for &(i, a) in &self.lower {
                buf[base + i] -= &c * a;
            }
        }
        buf.truncate(self.phi);
        buf.resize(self.phi, BigInt::zero());
    }

    /// Whether Σ v[e] ζₙ^e vanishes, for a dense vector indexed by exponent mod n.
    pub fn vanishes_i64(&self, v: &[i64]) -> bool {
        let mut buf = v.to_vec();
        self.reduce_i64(&mut buf);
        buf.iter().all(|c| *c == 0)
    }

    pub fn is_unit(&self, k: i64) -> bool {
        let n = self.n as i64;
        n == 1 || k.rem_euclid(n).gcd(&n) == 1
    }
}

/// Process-wide memo of reduction data; entries are immutable once built.
fn cache() -> &'static RwLock<HashMap<u64, Arc<CycloField>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CycloField>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

pub fn field(n: u64) -> Arc<CycloField> {
    assert!(n >= 1, "modulus must be positive");
    if let Some(f) = cache().read().unwrap().get(&n) {
        return f.clone();
    }
    let f = Arc::new(CycloField::build(n));
    cache().write().unwrap().entry(n).or_insert(f).clone()
}

fn mobius(mut n: u64) -> i64 {
    let mut res = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            res = -res;
        }
        p += 1;
    }
    if n > 1 {
        res = -res;
    }
    res
}

/// Φₙ via Π_{d|n} (x^d − 1)^{μ(n/d)}.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut p: Vec<i128> = vec![1];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            // multiply by x^d - 1
            let d = d as usize;
            let mut q = vec![0i128; p.len() + d];
            for (i, c) in p.iter().enumerate() {
                q[i + d] += c;
                q[i] -= c;
            }
            p = q;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            // exact division by x^d - 1: q[i] = q[i-d] - p[i] from the bottom
            let d = d as usize;
            let m = p.len() - d;
            let mut q = vec![0i128; m];
            for i in 0..m {
                q[i] = -p[i] + if i >= d { q[i - d] } else { 0 };
            }
            p = q;
        }
    }
    let out: Vec<i64> = p.into_iter().map(|c| i64::try_from(c).expect("Φ coefficient overflow")).collect();
    debug_assert_eq!(*out.last().unwrap(), 1);
    out
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut res = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            res -= res / p;
        }
        p += 1;
    }
    if m > 1 {
        res -= res / m;
    }
    res
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(7), vec![1; 7]);
    }

    #[test]
    fn degrees_match_phi() {
        for n in 1..200u64 {
            assert_eq!(cyclotomic_poly(n).len() as u64 - 1, euler_phi(n), "n = {n}");
        }
        assert_eq!(field(819).phi, 432);
        assert_eq!(field(3276).phi, 864);
    }

    #[test]
    fn known_large_coefficient() {
        // Φ₁₀₅ is the first with a coefficient of absolute value 2
        let p = cyclotomic_poly(105);
        assert_eq!(p.iter().map(|c| c.abs()).max(), Some(2));
    }

    #[test]
    fn vanishing_root_sums() {
        let f = field(12);
        let mut v = vec![0i64; 12];
        // ζ₁₂^0 + ζ₁₂^4 + ζ₁₂^8 = 0
        v[0] = 1;
        v[4] = 1;
        v[8] = 1;
        assert!(f.vanishes_i64(&v));
        v[8] = 0;
        assert!(!f.vanishes_i64(&v));
    }
}
