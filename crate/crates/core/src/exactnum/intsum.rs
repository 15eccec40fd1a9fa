//! Integer combinations of roots of unity, Σ c·ζₙ^e, for fast exact filters.
//!
//! Products stay in the group ring Z[C_n]; only zero tests reduce modulo Φₙ.

use super::field::{field, CycloField};
use super::CycloElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRootSum {
    pub n: u64,
    /// (exponent mod n, coefficient), merged and free of zeros.
    pub terms: Vec<(u64, i64)>,
}

impl IntRootSum {
    pub fn new(n: u64, raw: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut terms: Vec<(u64, i64)> = raw.into_iter().map(|(e, c)| (e.rem_euclid(n as i64) as u64, c)).collect();
        terms.sort_unstable();
        let mut merged: Vec<(u64, i64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|t| t.1 != 0);
        IntRootSum { n, terms: merged }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.n, o.n);
        let n = self.n as i64;
        IntRootSum::new(
            self.n,
            self.terms.iter().flat_map(|&(a, x)| o.terms.iter().map(move |&(b, y)| ((a + b) as i64 % n, x * y))),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        IntRootSum::new(
            self.n,
            self.terms.iter().map(|&(e, c)| (e as i64, c)).chain(o.terms.iter().map(|&(e, c)| (e as i64, -c))),
        )
    }

    pub fn galois(&self, k: u64) -> Self {
        let n = self.n;
        IntRootSum::new(n, self.terms.iter().map(|&(e, c)| ((e * k % n) as i64, c)))
    }

    /// Exact zero test. A double-precision value far from zero short-circuits: each term
    /// carries at most ~1e-15 absolute error per unit of coefficient, far below the cutoff.
    pub fn is_zero_in(&self, f: &CycloField) -> bool {
        debug_assert_eq!(f.n, self.n);
        if self.terms.is_empty() {
            return true;
        }
        let mass: i64 = self.terms.iter().map(|t| t.1.abs()).sum();
        let (re, im) = self.to_c64();
        if re.hypot(im) > 1e-9 * mass as f64 {
            return false;
        }
        self.is_zero_exact(f)
    }

    /// Zero test by reduction modulo Φₙ only.
    pub fn is_zero_exact(&self, f: &CycloField) -> bool {
        let mut dense = vec![0i64; self.n as usize];
        for &(e, c) in &self.terms {
            dense[e as usize] += c;
        }
        f.vanishes_i64(&dense)
    }

    pub fn is_zero(&self) -> bool {
        self.is_zero_in(&field(self.n))
    }

    pub fn to_elem(&self) -> CycloElem {
        let t: Vec<(i64, i64)> = self.terms.iter().map(|&(e, c)| (e as i64, c)).collect();
        CycloElem::from_int_terms(self.n, &t)
    }

    /// Complex value in double precision.
    pub fn to_c64(&self) -> (f64, f64) {
        let n = self.n as f64;
        self.terms.iter().fold((0.0, 0.0), |(re, im), &(e, c)| {
            let a = std::f64::consts::TAU * e as f64 / n;
            (re + c as f64 * a.cos(), im + c as f64 * a.sin())
        })
    }
}

/// Units k for which σ_k(a/b) = a/b, tested as σ_k(a)·b = a·σ_k(b).
pub fn ratio_stabilizer(a: &IntRootSum, b: &IntRootSum) -> Vec<u64> {
    let f = field(a.n);
    f.units.iter().copied().filter(|&k| a.galois(k).mul(b).sub(&a.mul(&b.galois(k))).is_zero_in(&f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_tests() {
        assert!(IntRootSum::new(3, [(0, 1), (1, 1), (2, 1)]).is_zero());
        assert!(!IntRootSum::new(3, [(0, 1), (1, 1)]).is_zero());
        assert!(IntRootSum::new(6, [(3, 1), (0, 1)]).is_zero());
        assert!(IntRootSum::new(5, [(7, 2), (2, -2)]).terms.is_empty());
        let f = field(9);
        for e in 0..9 {
            let s = IntRootSum::new(9, [(e, 1), (e + 3, 1), (e + 6, 1), (1, 2)]);
            assert_eq!(s.is_zero_in(&f), s.is_zero_exact(&f));
        }
    }

    #[test]
    fn agrees_with_field_elements() {
        let a = IntRootSum::new(12, [(1, 2), (5, -1), (11, 3)]);
        let b = IntRootSum::new(12, [(2, 1), (7, 1)]);
        assert_eq!(a.mul(&b).to_elem(), &a.to_elem() * &b.to_elem());
        assert_eq!(a.galois(5).to_elem(), a.to_elem().galois(5).unwrap());
    }

    #[test]
    fn ratio_degree() {
        // (ζ₇ + ζ₇⁻¹)/(ζ₇² + ζ₇⁻²) is cubic: stabilizer {±1}
        let a = IntRootSum::new(7, [(1, 1), (6, 1)]);
        let b = IntRootSum::new(7, [(2, 1), (5, 1)]);
        assert_eq!(ratio_stabilizer(&a, &b), vec![1, 6]);
        assert_eq!(ratio_stabilizer(&a, &a).len(), 6);
    }
}
