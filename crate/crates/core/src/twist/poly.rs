use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::exactnum::Rat;

/// Polynomial in P and q with rational coefficients, keyed by (deg P, deg q).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PolyPQ {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl PolyPQ {
    pub fn zero() -> Self {
        PolyPQ::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rat)>) -> Self {
        let mut p = PolyPQ::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn constant(c: Rat) -> Self {
        PolyPQ::from_terms([((0, 0), c)])
    }

    pub fn p() -> Self {
        PolyPQ::from_terms([((1, 0), Rat::one())])
    }

    pub fn q() -> Self {
        PolyPQ::from_terms([((0, 1), Rat::one())])
    }

    /// a·P + b·q + c.
    pub fn linear(a: &Rat, b: &Rat, c: &Rat) -> Self {
        PolyPQ::from_terms([((1, 0), a.clone()), ((0, 1), b.clone()), ((0, 0), c.clone())])
    }

    fn add_term(&mut self, k: (u32, u32), c: Rat) {
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, dp: u32, dq: u32) -> Rat {
        self.terms.get(&(dp, dq)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn degree_p(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        PolyPQ::from_terms(self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = PolyPQ::zero();
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &o.terms {
                r.add_term((a + x, b + y), c * d);
            }
        }
        r
    }

    pub fn eval(&self, p: &Rat, q: &Rat) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, ((a, b), c)| acc + c * pow(p, *a) * pow(q, *b))
    }

    /// Coefficients of P⁰, P¹, … as polynomials in q.
    pub fn in_p(&self) -> Vec<UPoly> {
        let mut out = vec![UPoly::zero(); self.degree_p() as usize + 1];
        for ((a, b), c) in &self.terms {
            let u = &mut out[*a as usize];
            if u.0.len() <= *b as usize {
                u.0.resize(*b as usize + 1, Rat::zero());
            }
            u.0[*b as usize] += c;
        }
        out.into_iter().map(UPoly::trimmed).collect()
    }

    /// Divides out every power of P and of q that divides all terms.
    pub fn strip_monomial(&self) -> Self {
        let mp = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let mq = self.terms.keys().map(|k| k.1).min().unwrap_or(0);
        PolyPQ::from_terms(self.terms.iter().map(|((a, b), c)| ((a - mp, b - mq), c.clone())))
    }

    /// Primitive integer coefficients with a positive leading coefficient, the
    /// leading term being the largest (deg P, deg q) in lexicographic order.
    pub fn normalized(&self) -> Self {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        let den = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num = self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(&(c.numer() * &den / c.denom())));
        let mut s = Rat::new(den, num);
        if lead.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }
}

fn pow(x: &Rat, e: u32) -> Rat {
    (0..e).fold(Rat::one(), |a, _| a * x)
}

impl fmt::Display for PolyPQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match (a, b) {
                (0, 0) => String::new(),
                _ => {
                    let v = |s: &str, d: u32| match d {
                        0 => String::new(),
                        1 => s.to_string(),
                        _ => format!("{s}^{d}"),
                    };
                    format!("{}{}", v("P", *a), v("q", *b))
                }
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyPQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for PolyPQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Univariate polynomial in q, coefficient i of qⁱ, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn from_coeffs(c: Vec<Rat>) -> Self {
        UPoly(c).trimmed()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<Rat>, i: usize| v.get(i).cloned().unwrap_or_else(Rat::zero);
        UPoly::from_coeffs((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        UPoly::from_coeffs(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return UPoly::zero();
        }
        let mut r = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(r)
    }

    /// Cauchy bound: every real root x satisfies |x| < 1 + max |a_i / a_lead|.
    pub fn root_bound(&self) -> Option<Rat> {
        let lead = self.leading()?;
        let m = self.0[..self.0.len() - 1].iter().map(|c| (c / lead).abs()).max().unwrap_or_else(Rat::zero);
        Some(m + Rat::one())
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = PolyPQ::from_terms(self.0.iter().enumerate().map(|(i, c)| ((0, i as u32), c.clone())));
        write!(f, "{p}")
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Exact square root of a non-negative rational, if it is a square.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rat::new(rn, rd))
}
