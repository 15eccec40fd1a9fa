use num_traits::Zero;

use super::field::{factorize, field};
use super::{linalg, CycloElem, Rat};
use crate::{Error, Result};

/// A cubic subfield K = Q(t) of Q(ζₙ), described by its generator and its fixing subgroup.
#[derive(Clone, Debug)]
pub struct CubicFieldDesc {
    pub ambient_modulus: u64,
    pub generator_t: CycloElem,
    pub conductor: u64,
    pub power_basis: [CycloElem; 3],
    /// Units k with σ_k fixing K pointwise.
    pub fixing_subgroup: Vec<u64>,
    /// One unit from each coset of the fixing subgroup.
    pub coset_reps: [u64; 3],
}

impl PartialEq for CubicFieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_modulus == other.ambient_modulus && self.generator_t == other.generator_t
    }
}

/// Whether d has the shape 9^ε·p₁⋯p_m with distinct primes p_j ≡ 1 (mod 3).
pub fn is_cubic_conductor(d: u64) -> bool {
    d > 1 && factorize(d).iter().all(|&(p, e)| if p == 3 { e == 2 } else { e == 1 && p % 3 == 1 })
}

impl CubicFieldDesc {
    pub fn from_generator(t: CycloElem) -> Result<Self> {
        let n = t.modulus();
        let f = field(n);
        let stab = t.stabilizer();
        let degree = f.units.len() / stab.len();
        if degree != 3 {
            return Err(Error::NotCubic(degree));
        }
        let mut reps = Vec::new();
        let mut seen: Vec<u64> = Vec::new();
        for &k in &f.units {
            if seen.contains(&k) {
                continue;
            }
            reps.push(k);
            seen.extend(stab.iter().map(|h| h * k % n));
        }
        let conductor = (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| f.units.iter().filter(|k| *k % d == 1 % d).all(|k| stab.contains(k)))
            .expect("n itself always qualifies");
        if !is_cubic_conductor(conductor) {
            return Err(Error::InvariantBreach(format!("conductor {conductor} of a cubic field has the wrong shape")));
        }
        let t2 = &t * &t;
        Ok(CubicFieldDesc {
            ambient_modulus: n,
            power_basis: [CycloElem::one(n), t.clone(), t2],
            generator_t: t,
            conductor,
            fixing_subgroup: stab,
            coset_reps: [reps[0], reps[1], reps[2]],
        })
    }

    fn lift(&self, a: &CycloElem) -> Result<CycloElem> {
        let n = self.ambient_modulus;
        if n % a.modulus() != 0 {
            return Err(Error::NotInSubfield);
        }
        Ok(a.lift(n))
    }

    pub fn contains(&self, a: &CycloElem) -> bool {
        let Ok(a) = self.lift(a) else { return false };
        let f = field(self.ambient_modulus);
        self.fixing_subgroup.iter().all(|&k| a.galois_unchecked(&f, k as i64) == a)
    }

    /// Coordinates (r₀, r₁, r₂) with a = r₀ + r₁t + r₂t².
    pub fn expand(&self, a: &CycloElem) -> Result<[Rat; 3]> {
        if !self.contains(a) {
            return Err(Error::NotInSubfield);
        }
        let a = self.lift(a)?;
        let phi = a.coeffs().len();
        let m: linalg::Matrix = (0..phi).map(|i| self.power_basis.iter().map(|b| b.coeffs()[i].clone()).collect()).collect();
        let x = linalg::solve(&m, a.coeffs()).ok_or(Error::NotInSubfield)?;
        Ok([x[0].clone(), x[1].clone(), x[2].clone()])
    }

    pub fn combine(&self, r: &[Rat; 3]) -> CycloElem {
        let b = &self.power_basis;
        &(&b[0].scale(&r[0]) + &b[1].scale(&r[1])) + &b[2].scale(&r[2])
    }

    /// The three conjugates σ(a) for σ ranging over Gal(K/Q).
    pub fn conjugates(&self, a: &CycloElem) -> Result<[CycloElem; 3]> {
        if !self.contains(a) {
            return Err(Error::NotInSubfield);
        }
        let a = self.lift(a)?;
        let f = field(self.ambient_modulus);
        let c = |k: u64| a.galois_unchecked(&f, k as i64);
        Ok([c(self.coset_reps[0]), c(self.coset_reps[1]), c(self.coset_reps[2])])
    }

    /// Tr_{K/Q}(a) as the sum of the three conjugates.
    pub fn trace(&self, a: &CycloElem) -> Result<Rat> {
        let [x, y, z] = self.conjugates(a)?;
        (&(&x + &y) + &z).as_rat().ok_or_else(|| Error::InvariantBreach("trace is not rational".into()))
    }

    pub fn gram(&self, c: &[CycloElem; 3]) -> Result<linalg::Matrix> {
        let mut g = vec![vec![Rat::zero(); 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let v = self.trace(&(&c[i] * &c[j]))?;
                g[i][j] = v.clone();
                g[j][i] = v;
            }
        }
        Ok(g)
    }

    /// Dual basis (d₁,d₂,d₃) with Tr(c_i d_j) = δ_ij.
    pub fn dual_basis(&self, c: &[CycloElem; 3]) -> Result<[CycloElem; 3]> {
        let g = self.gram(c)?;
        let inv = linalg::inverse(&g).ok_or(Error::DegenerateBasis)?;
        let n = self.ambient_modulus;
        let d = |j: usize| (0..3).fold(CycloElem::zero(n), |acc, i| &acc + &c[i].lift(n).scale(&inv[j][i]));
        Ok([d(0), d(1), d(2)])
    }

    pub fn is_basis(&self, c: &[CycloElem; 3]) -> Result<bool> {
        Ok(!linalg::det(&self.gram(c)?).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use num_traits::One;

    fn t7() -> CycloElem {
        &CycloElem::root(7, 1) + &CycloElem::root(7, -1)
    }

    #[test]
    fn conductor_and_shape() {
        let k = CubicFieldDesc::from_generator(t7()).unwrap();
        assert_eq!(k.conductor, 7);
        assert_eq!(k.fixing_subgroup, vec![1, 6]);
        let t14 = &CycloElem::root(14, 1) + &CycloElem::root(14, -1);
        assert_eq!(CubicFieldDesc::from_generator(t14).unwrap().conductor, 7);
        let t18 = &CycloElem::root(18, 1) + &CycloElem::root(18, -1);
        assert_eq!(CubicFieldDesc::from_generator(t18).unwrap().conductor, 9);
        assert!(is_cubic_conductor(63) && is_cubic_conductor(9) && !is_cubic_conductor(27) && !is_cubic_conductor(5));
        assert_eq!(CubicFieldDesc::from_generator(CycloElem::root(8, 1)).unwrap_err(), Error::NotCubic(4));
    }

    #[test]
    fn expansion_round_trip() {
        let k = CubicFieldDesc::from_generator(t7()).unwrap();
        let t2 = &t7() * &t7();
        assert_eq!(k.expand(&t2).unwrap(), [rat(0, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(k.expand(&CycloElem::root(7, 1)), Err(Error::NotInSubfield));
        let a = &t2.pow(3) - &t7().scale(&rat(5, 2));
        assert_eq!(k.combine(&k.expand(&a).unwrap()), a);
    }

    #[test]
    fn trace_of_rationals_and_powers() {
        let k = CubicFieldDesc::from_generator(t7()).unwrap();
        assert_eq!(k.trace(&CycloElem::from_rat(7, rat(2, 5))).unwrap(), rat(6, 5));
        // t is a root of x³ + x² − 2x − 1: power sums 3, −1, 5
        assert_eq!(k.trace(&t7()).unwrap(), rat(-1, 1));
        assert_eq!(k.trace(&t7().pow(2)).unwrap(), rat(5, 1));
        assert_eq!(k.trace(&t7().pow(3)).unwrap(), rat(-4, 1));
    }

    #[test]
    fn dual_basis_is_involution() {
        let k = CubicFieldDesc::from_generator(t7()).unwrap();
        let c = k.power_basis.clone();
        let d = k.dual_basis(&c).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { Rat::one() } else { Rat::zero() };
                assert_eq!(k.trace(&(&c[i] * &d[j])).unwrap(), want);
            }
        }
        assert_eq!(k.dual_basis(&d).unwrap(), c);
        let degenerate = [CycloElem::one(7), t7(), &t7() + &CycloElem::one(7)];
        assert_eq!(k.dual_basis(&degenerate).unwrap_err(), Error::DegenerateBasis);
    }
}
