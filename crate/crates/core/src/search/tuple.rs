use num_integer::Integer;
use serde::Serialize;

use crate::exactnum::IntRootSum;
use crate::{Error, Result};

/// Exponents (n₁, n₂, n₃) of x_j = ζₙ^{n_j}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootTuple {
    pub n: u64,
    pub e: [u64; 3],
}

impl RootTuple {
    /// Validated constructor: gcd(n₁, n₂, n₃, n) = 1 and ±1, x_j^{±1} pairwise distinct.
    pub fn new(n: u64, e: [u64; 3]) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidModulus(n));
        }
        let t = RootTuple::raw(n, e);
        if e.iter().any(|&x| x >= n) {
            return Err(Error::InvalidArgument(format!("exponents {e:?} out of range for n = {n}")));
        }
        if !t.primitive() {
            return Err(Error::InvariantBreach(format!("gcd of {e:?} and {n} is not 1")));
        }
        if !t.distinct() {
            return Err(Error::InvariantBreach(format!("±1, x_j^±1 not distinct for {e:?} mod {n}")));
        }
        Ok(t)
    }

    /// No validation; filters are applied by the caller.
    pub fn raw(n: u64, e: [u64; 3]) -> Self {
        RootTuple { n, e }
    }

    pub fn primitive(&self) -> bool {
        self.e.iter().fold(self.n, |g, &x| g.gcd(&x)) == 1
    }

    /// The eight values ±1, x_j^{±1} as exponents of ζ_{2n}, pairwise distinct.
    pub fn distinct(&self) -> bool {
        let m = 2 * self.n;
        let mut v = vec![0, self.n];
        for &x in &self.e {
            v.push(2 * x % m);
            v.push((m - 2 * x % m) % m);
        }
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    pub fn permuted(&self, p: [usize; 3]) -> Self {
        RootTuple::raw(self.n, [self.e[p[0]], self.e[p[1]], self.e[p[2]]])
    }

    pub fn inverted(&self) -> Self {
        RootTuple::raw(self.n, self.e.map(|x| (self.n - x) % self.n))
    }

    /// The images under the 12 symmetries (6 permutations × simultaneous inversion), deduplicated.
    pub fn orbit(&self) -> Vec<RootTuple> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out: Vec<RootTuple> = PERMS.iter().flat_map(|&p| [self.permuted(p), self.permuted(p).inverted()]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn canonical(&self) -> RootTuple {
        self.orbit()[0]
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// θ_j = n_j/n mapped into (−1/2, 1/2], as (numerator, n).
    pub fn theta_num(&self, j: usize) -> i64 {
        let (x, n) = (self.e[j] as i64, self.n as i64);
        if 2 * x < n {
            x
        } else {
            x - n
        }
    }
}

impl std::fmt::Display for RootTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{}) mod {}", self.e[0], self.e[1], self.e[2], self.n)
    }
}

/// D(a,b) = (a − a⁻¹)(b² − b⁻²) − (a² − a⁻²)(b − b⁻¹) for a = ζ_N^x, b = ζ_N^y.
pub fn cross_sum(n: u64, x: i64, y: i64) -> IntRootSum {
    let a1 = IntRootSum::new(n, [(x, 1), (-x, -1)]);
    let a2 = IntRootSum::new(n, [(2 * x, 1), (-2 * x, -1)]);
    let b1 = IntRootSum::new(n, [(y, 1), (-y, -1)]);
    let b2 = IntRootSum::new(n, [(2 * y, 1), (-2 * y, -1)]);
    a1.mul(&b2).sub(&a2.mul(&b1))
}

/// (D(x₂,x₃), D(x₃,x₁), D(x₁,x₂)); c_j is proportional to the j-th entry.
pub fn cross_sums(n: u64, e: [i64; 3]) -> [IntRootSum; 3] {
    [cross_sum(n, e[1], e[2]), cross_sum(n, e[2], e[0]), cross_sum(n, e[0], e[1])]
}
