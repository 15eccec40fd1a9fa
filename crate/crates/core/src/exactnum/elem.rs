use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{field, CycloField};
use super::{linalg, Rat};
use crate::{Error, Result};

/// Element of Q(ζₙ) in canonical power-basis coordinates modulo Φₙ.
#[derive(Clone)]
pub struct CycloElem {
    n: u64,
    coeffs: Vec<Rat>,
}

fn lcm(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Common denominator form of a rational vector.
fn to_common(c: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let den = c.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let nums = c.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    (nums, den)
}

fn from_common(v: Vec<BigInt>, den: &BigInt) -> Vec<Rat> {
    v.into_iter().map(|x| Rat::new(x, den.clone())).collect()
}

impl CycloElem {
    pub fn zero(n: u64) -> Self {
        let phi = field(n).phi;
        CycloElem { n, coeffs: vec![Rat::zero(); phi] }
    }

    pub fn one(n: u64) -> Self {
        Self::from_rat(n, Rat::one())
    }

    pub fn from_rat(n: u64, r: Rat) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[0] = r;
        e
    }

    pub fn from_int(n: u64, k: i64) -> Self {
        Self::from_rat(n, Rat::from_integer(k.into()))
    }

    /// ζₙ^e for any integer exponent.
    pub fn root(n: u64, e: i64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(e, Rat::one());
        Self::canonicalize(n, &m).expect("positive modulus")
    }

    /// Canonical form of Σ raw[e]·ζₙ^e.
    pub fn canonicalize(n: u64, raw: &BTreeMap<i64, Rat>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(0));
        }
        let f = field(n);
        let mut dense = vec![Rat::zero(); n as usize];
        for (e, r) in raw {
            dense[e.rem_euclid(n as i64) as usize] += r;
        }
        Ok(Self::reduce_dense(&f, &dense))
    }

    /// Canonical form of a sparse integer combination Σ c·ζₙ^e.
    pub fn from_int_terms(n: u64, terms: &[(i64, i64)]) -> Self {
        let f = field(n);
        let mut dense = vec![0i64; n as usize];
        for &(e, c) in terms {
            dense[e.rem_euclid(n as i64) as usize] += c;
        }
        f.reduce_i64(&mut dense);
        CycloElem { n, coeffs: dense.into_iter().map(|c| Rat::from_integer(c.into())).collect() }
    }

    fn reduce_dense(f: &CycloField, dense: &[Rat]) -> Self {
        let (mut nums, den) = to_common(dense);
        f.reduce_big(&mut nums);
        CycloElem { n: f.n, coeffs: from_common(nums, &den) }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value if the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rat().is_some()
    }

    /// Embed into Q(ζ_m) for a multiple m of the modulus.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.n == 0, "lift target {m} is not a multiple of {}", self.n);
        if m == self.n {
            return self.clone();
        }
        let step = m / self.n;
        let f = field(m);
        let mut dense = vec![Rat::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[(j as u64 * step % m) as usize] += c;
            }
        }
        Self::reduce_dense(&f, &dense)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.n == b.n {
            (a.clone(), b.clone())
        } else {
            let m = lcm(a.n, b.n);
            (a.lift(m), b.lift(m))
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloElem { n: self.n, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let f = field(self.n);
        let (a, da) = to_common(&self.coeffs);
        let (b, db) = to_common(&other.coeffs);
        let mut prod = vec![BigInt::zero(); 2 * f.phi];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        f.reduce_big(&mut prod);
        CycloElem { n: self.n, coeffs: from_common(prod, &(da * db)) }
    }

    /// Columns of the multiplication-by-self matrix in the power basis.
    fn mult_matrix(&self) -> linalg::Matrix {
        let f = field(self.n);
        let phi = f.phi;
        let (a, den) = to_common(&self.coeffs);
        let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
        let mut cur = a;
        for _ in 0..phi {
            cols.push(cur.clone());
            let mut next = vec![BigInt::zero(); phi + 1];
            for (i, x) in cur.into_iter().enumerate() {
                next[i + 1] = x;
            }
            f.reduce_big(&mut next);
            cur = next;
        }
        (0..phi).map(|i| (0..phi).map(|j| Rat::new(cols[j][i].clone(), den.clone())).collect()).collect()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            return Ok(Self::from_rat(self.n, r.recip()));
        }
        let m = self.mult_matrix();
        let mut e0 = vec![Rat::zero(); m.len()];
        e0[0] = Rat::one();
        let x = linalg::solve(&m, &e0).ok_or_else(|| Error::InvariantBreach("singular multiplication matrix".into()))?;
        Ok(CycloElem { n: self.n, coeffs: x })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// σ_k : ζ ↦ ζ^k.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let f = field(self.n);
        if !f.is_unit(k) {
            return Err(Error::NotAnAutomorphism { k, n: self.n });
        }
        Ok(self.galois_unchecked(&f, k))
    }

    pub(crate) fn galois_unchecked(&self, f: &CycloField, k: i64) -> Self {
        let n = self.n as i64;
        let k = k.rem_euclid(n.max(1));
        let mut dense = vec![Rat::zero(); self.n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[((j as i64 * k) % n) as usize] += c;
            }
        }
        Self::reduce_dense(f, &dense)
    }

    pub fn conjugate(&self) -> Self {
        let f = field(self.n);
        self.galois_unchecked(&f, -1)
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Units k with σ_k(self) = self.
    pub fn stabilizer(&self) -> Vec<u64> {
        let f = field(self.n);
        if self.is_rational() {
            return f.units.clone();
        }
        f.units.iter().copied().filter(|&k| self.galois_unchecked(&f, k as i64) == *self).collect()
    }

    /// Size of the Galois orbit, which is [Q(a):Q].
    pub fn degree_over_q(&self) -> usize {
        let f = field(self.n);
        f.units.len() / self.stabilizer().len()
    }

    /// Exact sign at ζₙ ↦ exp(2πi/n); see [`super::sign`].
    pub fn sign(&self) -> Result<i8> {
        super::sign::sign_at_standard_embedding(self, super::sign::start_bits())
    }

    /// Floating-point value of the real part, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| c.to_f64().unwrap_or(f64::NAN) * (std::f64::consts::TAU * j as f64 / n).cos())
            .sum()
    }

    pub fn to_c64(&self) -> (f64, f64) {
        let n = self.n as f64;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).fold((0.0, 0.0), |(re, im), (j, c)| {
            let x = c.to_f64().unwrap_or(f64::NAN);
            let a = std::f64::consts::TAU * j as f64 / n;
            (re + x * a.cos(), im + x * a.sin())
        })
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Self::common(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloElem {}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ{})[{}]", self.n, self)
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sep = if first {
                if c.is_negative() {
                    "-"
                } else {
                    ""
                }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            first = false;
            let a = c.abs();
            match j {
                0 => write!(f, "{sep}{a}")?,
                _ if a.is_one() => write!(f, "{sep}z^{j}")?,
                _ => write!(f, "{sep}{a}*z^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn add(self, rhs: &CycloElem) -> CycloElem {
        let (a, b) = CycloElem::common(self, rhs);
        CycloElem { n: a.n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl<'a> Sub<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn sub(self, rhs: &CycloElem) -> CycloElem {
        let (a, b) = CycloElem::common(self, rhs);
        CycloElem { n: a.n, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }
}

impl<'a> Mul<&'a CycloElem> for &'a CycloElem {
    type Output = CycloElem;
    fn mul(self, rhs: &CycloElem) -> CycloElem {
        if self.n == rhs.n {
            self.mul_same(rhs)
        } else {
            let (a, b) = CycloElem::common(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: CycloElem) -> CycloElem { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a CycloElem> for CycloElem {
            type Output = CycloElem;
            fn $m(self, rhs: &CycloElem) -> CycloElem { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn z(n: u64, e: i64) -> CycloElem {
        CycloElem::root(n, e)
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(z(4, 2), CycloElem::from_int(4, -1));
        assert_eq!(z(6, 2).coeffs(), &[rat(-1, 1), rat(1, 1)]);
        let all: BTreeMap<i64, Rat> = (0..7).map(|e| (e, rat(1, 1))).collect();
        assert!(CycloElem::canonicalize(7, &all).unwrap().is_zero());
        assert_eq!(CycloElem::canonicalize(0, &all), Err(Error::InvalidModulus(0)));
        assert_eq!(z(7, -1), z(7, 6));
        assert_eq!(z(7, 15), z(7, 1));
    }

    #[test]
    fn multiplication_and_inverse() {
        assert_eq!(&z(7, 1) * &z(7, 6), CycloElem::one(7));
        let a = &CycloElem::one(3) + &z(3, 1);
        assert_eq!(a.inv().unwrap(), -z(3, 1));
        assert_eq!(CycloElem::from_int(5, 2).inv().unwrap(), CycloElem::from_rat(5, rat(1, 2)));
        assert_eq!(CycloElem::zero(5).inv(), Err(Error::DivisionByZero));
        let b = &(&z(12, 1) + &z(12, 5)) - &CycloElem::from_int(12, 3);
        assert_eq!(&b * &b.inv().unwrap(), CycloElem::one(12));
    }

    #[test]
    fn mixed_moduli_lift() {
        // ζ₄ · ζ₃ = ζ₁₂^{3+4}
        assert_eq!(&z(4, 1) * &z(3, 1), z(12, 7));
        // −1 = ζ₂ = ζ₁₄^7
        assert_eq!(z(2, 1), z(14, 7));
        assert_eq!(z(7, 1).lift(28), z(28, 4));
        // ζ₁₄ = −ζ₇⁴
        assert_eq!(z(14, 1), -z(7, 4));
    }

    #[test]
    fn galois_and_conjugate() {
        assert_eq!(z(7, 1).galois(3).unwrap(), z(7, 3));
        assert_eq!(CycloElem::from_rat(7, rat(5, 3)).galois(2).unwrap(), CycloElem::from_rat(7, rat(5, 3)));
        let t = &z(7, 1) + &z(7, -1);
        assert_eq!(t.galois(2).unwrap(), &z(7, 2) + &z(7, -2));
        assert!(matches!(z(7, 1).galois(7), Err(Error::NotAnAutomorphism { .. })));
        assert_eq!(z(7, 1).conjugate(), z(7, 6));
        assert!(t.is_real());
        assert!(!z(7, 1).is_real());
    }

    #[test]
    fn degrees() {
        assert_eq!((&z(7, 1) + &z(7, -1)).degree_over_q(), 3);
        assert_eq!(z(8, 1).degree_over_q(), 4);
        assert_eq!(CycloElem::from_rat(9, rat(7, 5)).degree_over_q(), 1);
        // √2 = ζ₈ + ζ₈⁻¹
        assert_eq!((&z(8, 1) + &z(8, -1)).degree_over_q(), 2);
    }

    #[test]
    fn display() {
        let a = &z(7, 1) - &CycloElem::from_rat(7, rat(1, 2));
        assert_eq!(a.to_string(), "-1/2 + z^1");
        assert_eq!(CycloElem::zero(3).to_string(), "0");
    }
}
