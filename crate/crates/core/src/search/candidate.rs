use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::tuple::{cross_sums, RootTuple};
use crate::exactnum::field::field;
use crate::exactnum::{CubicFieldDesc, CycloElem, IntRootSum, Rat};
use crate::{Error, Result};

/// Why a tuple fails a filter. Each variant names the first failing check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    NotPrimitive,
    Distinctness,
    NotCubic,
    NotBasis,
    CircumferenceSign,
    ModuliNotRational,
    ModuliNotPositive,
    SaddleSign,
    /// ℓ_k ≤ 0 for the given k.
    Chain(u8),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::NotPrimitive => write!(f, "not-primitive"),
            Reason::Distinctness => write!(f, "distinctness"),
            Reason::NotCubic => write!(f, "not-cubic"),
            Reason::NotBasis => write!(f, "not-basis"),
            Reason::CircumferenceSign => write!(f, "sign-failure:circumference"),
            Reason::ModuliNotRational => write!(f, "moduli-not-rational"),
            Reason::ModuliNotPositive => write!(f, "moduli-not-positive"),
            Reason::SaddleSign => write!(f, "sign-failure:saddle"),
            Reason::Chain(k) => write!(f, "sign-failure:chain-{k}"),
        }
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An admissible solution with c₁ = h₁ = 1.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub tuple: RootTuple,
    /// Built by chain reversal from the candidate of `tuple`.
    pub reversed: bool,
    pub c: [CycloElem; 3],
    pub h: [CycloElem; 3],
    pub field: CubicFieldDesc,
    pub s: CycloElem,
    /// Signed angle fractions of the source tuple.
    pub theta: [Rat; 3],
    /// h_j c_k / (c_j h_k) for (j,k) = (1,2), (1,3), (2,3).
    pub moduli_ratios: [Rat; 3],
}

/// Candidate data as expansions in the power basis (1, t, t²) of K.
#[derive(Serialize)]
struct CandidateRecord<'a> {
    tuple: &'a RootTuple,
    reversed: bool,
    conductor: u64,
    t: &'a CycloElem,
    #[serde(serialize_with = "ser_triples")]
    c: Vec<[Rat; 3]>,
    #[serde(serialize_with = "ser_triples")]
    h: Vec<[Rat; 3]>,
    #[serde(serialize_with = "crate::ser::rats")]
    s: [Rat; 3],
    #[serde(serialize_with = "crate::ser::rats")]
    moduli_ratios: &'a [Rat],
    s_approx: f64,
}

fn ser_triples<S: Serializer>(v: &[[Rat; 3]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(crate::ser::rat_str).collect()).collect();
    strs.serialize(s)
}

impl Serialize for Candidate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ex = |a: &CycloElem| self.field.expand(a).map_err(serde::ser::Error::custom);
        CandidateRecord {
            tuple: &self.tuple,
            reversed: self.reversed,
            conductor: self.field.conductor,
            t: &self.field.generator_t,
            c: self.c.iter().map(ex).collect::<std::result::Result<_, _>>()?,
            h: self.h.iter().map(ex).collect::<std::result::Result<_, _>>()?,
            s: ex(&self.s)?,
            moduli_ratios: &self.moduli_ratios,
            s_approx: self.s.to_f64(),
        }
        .serialize(s)
    }
}

impl Candidate {
    pub fn expand(&self, a: &CycloElem) -> Result<[Rat; 3]> {
        self.field.expand(a)
    }
}

fn cross_elems(t: &RootTuple) -> [IntRootSum; 3] {
    cross_sums(t.n, t.e.map(|x| x as i64))
}

/// Circumferences (1, c₂, c₃) with c_j/c_k = D_j/D_k, checked against both linear equations.
pub fn circumference_ratios(t: &RootTuple) -> Result<[CycloElem; 3]> {
    if !t.distinct() {
        return Err(Error::InvariantBreach(format!("distinctness fails for {t}")));
    }
    let d = cross_elems(t).map(|x| x.to_elem());
    if d[0].is_zero() {
        return Err(Error::InvariantBreach(format!("zero denominator for {t}")));
    }
    let c = [CycloElem::one(t.n), d[1].div(&d[0])?, d[2].div(&d[0])?];
    if !c.iter().all(CycloElem::is_real) {
        return Err(Error::InvariantBreach(format!("non-real circumference for {t}")));
    }
    verify_relations(t, &c)?;
    Ok(c)
}

/// Σ c_j (x_j − x_j⁻¹) = 0 and Σ c_j (x_j² − x_j⁻²) = 0, by direct substitution.
pub fn verify_relations(t: &RootTuple, c: &[CycloElem; 3]) -> Result<()> {
    for m in [1i64, 2] {
        let mut sum = CycloElem::zero(t.n);
        for j in 0..3 {
            let e = m * t.e[j] as i64;
            let x = &CycloElem::root(t.n, e) - &CycloElem::root(t.n, -e);
            sum = &sum + &(&c[j] * &x);
        }
        if !sum.is_zero() {
            return Err(Error::InvariantBreach(format!("relation with exponent multiplier {m} fails for {t}")));
        }
    }
    Ok(())
}

pub fn thetas(t: &RootTuple) -> Result<[Rat; 3]> {
    let th = [0, 1, 2].map(|j| Rat::new(t.theta_num(j).into(), (t.n as i64).into()));
    if th.iter().any(|x| x.is_zero()) {
        return Err(Error::InvariantBreach(format!("x_j = 1 in {t}")));
    }
    Ok(th)
}

/// s = Σ c_j (sgn θ_j − 2θ_j).
pub fn compute_s(c: &[CycloElem; 3], theta: &[Rat; 3]) -> Result<CycloElem> {
    let n = c[0].modulus();
    let mut s = CycloElem::zero(n);
    for j in 0..3 {
        if theta[j].is_zero() {
            return Err(Error::InvariantBreach("θ_j = 0".into()));
        }
        let sg = Rat::from_integer(theta[j].signum().to_integer());
        let w: Rat = sg - &theta[j] * Rat::from_integer(2.into());
        s = &s + &c[j].scale(&w);
    }
    Ok(s)
}

/// Units k with σ_k fixing every c_j. Double-precision values decide clear
/// non-fixings; anything close is settled in the group ring.
fn fixing_units(t: &RootTuple, d: &[IntRootSum; 3]) -> Vec<u64> {
    let f = field(t.n);
    let n = t.n as usize;
    let table: Vec<(f64, f64)> = (0..n)
        .map(|e| {
            let a = std::f64::consts::TAU * e as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    let value = |x: &IntRootSum, k: u64| {
        x.terms.iter().fold((0.0, 0.0), |(re, im), &(e, c)| {
            let (cr, ci) = table[(e * k % t.n) as usize];
            (re + c as f64 * cr, im + c as f64 * ci)
        })
    };
    let mass = |x: &IntRootSum| x.terms.iter().map(|t| t.1.abs()).sum::<i64>() as f64;
    let base: Vec<(f64, f64)> = d.iter().map(|x| value(x, 1)).collect();
    let fixes = |k: u64, j: usize| {
        let (a, b) = (value(&d[j], k), value(&d[0], k));
        // D_j(ζ^k)·D_1(ζ) − D_j(ζ)·D_1(ζ^k)
        let re = a.0 * base[0].0 - a.1 * base[0].1 - (base[j].0 * b.0 - base[j].1 * b.1);
        let im = a.0 * base[0].1 + a.1 * base[0].0 - (base[j].0 * b.1 + base[j].1 * b.0);
        if re.hypot(im) > 1e-9 * mass(&d[j]) * mass(&d[0]) {
            return false;
        }
        d[j].galois(k).mul(&d[0]).sub(&d[j].mul(&d[0].galois(k))).is_zero_exact(&f)
    };
    f.units.iter().copied().filter(|&k| fixes(k, 1) && fixes(k, 2)).collect()
}

fn fixed_by(x: &CycloElem, group: &[u64]) -> Result<bool> {
    for &k in group {
        if x.galois(k as i64)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generator of K: ζₙ + ζₙ⁻¹ if it lies in K∖Q, else the first of x₁ + x₁⁻¹, c₂, c₃ that does.
fn choose_generator(t: &RootTuple, c: &[CycloElem; 3], group: &[u64]) -> Result<CycloElem> {
    let n = t.n;
    let two_cos = |e: i64| &CycloElem::root(n, e) + &CycloElem::root(n, -e);
    for g in [two_cos(1), two_cos(t.e[0] as i64), c[1].clone(), c[2].clone()] {
        if !g.is_rational() && fixed_by(&g, group)? {
            return Ok(g);
        }
    }
    Err(Error::InvariantBreach(format!("no generator of K found for {t}")))
}

pub type Verdict<T> = std::result::Result<T, Reason>;

/// Conditions that are symmetric under permutation and simultaneous inversion:
/// distinctness, c₂ and c₃ real, positive and spanning a cubic K together with 1,
/// and rational positive moduli ratios for the dual-basis heights.
pub fn evaluate_symmetric(t: &RootTuple) -> Result<Verdict<Candidate>> {
    if !t.primitive() {
        return Ok(Err(Reason::NotPrimitive));
    }
    if !t.distinct() {
        return Ok(Err(Reason::Distinctness));
    }
    let d = cross_elems(t);
    let phi = field(t.n).units.len();
    let group = fixing_units(t, &d);
    match phi / group.len() {
        1 => return Ok(Err(Reason::NotBasis)),
        3 => {}
        _ => return Ok(Err(Reason::NotCubic)),
    }
    let c = circumference_ratios(t)?;
    for cj in &c[1..] {
        if cj.sign()? <= 0 {
            return Ok(Err(Reason::CircumferenceSign));
        }
    }
    let gen = choose_generator(t, &c, &group)?;
    let k = CubicFieldDesc::from_generator(gen)?;
    let mut fixing = k.fixing_subgroup.clone();
    fixing.sort_unstable();
    if fixing != group {
        return Err(Error::InvariantBreach(format!("fixing group of K disagrees with the filter for {t}")));
    }
    if !k.is_basis(&c)? {
        return Ok(Err(Reason::NotBasis));
    }
    let dual = k.dual_basis(&c)?;
    let h = [CycloElem::one(t.n), dual[1].div(&dual[0])?, dual[2].div(&dual[0])?];
    let mut ratios = Vec::with_capacity(3);
    for (j, l) in [(0, 1), (0, 2), (1, 2)] {
        let r = (&h[j] * &c[l]).div(&(&c[j] * &h[l]))?;
        match r.as_rat() {
            None => return Ok(Err(Reason::ModuliNotRational)),
            Some(q) if !q.is_positive() => return Ok(Err(Reason::ModuliNotPositive)),
            Some(q) => ratios.push(q),
        }
    }
    let theta = thetas(t)?;
    let s = compute_s(&c, &theta)?;
    let moduli_ratios: [Rat; 3] = ratios.try_into().expect("three ratios");
    Ok(Ok(Candidate { tuple: *t, reversed: false, c, h, field: k, s, theta, moduli_ratios }))
}

/// ℓ₀ = s, ℓ_k = c_k − ℓ_{k−1}: consecutive saddle connections share the boundary of C_k.
pub fn chain_lengths(c: &[CycloElem; 3], s: &CycloElem) -> [CycloElem; 4] {
    let l1 = &c[0] - s;
    let l2 = &c[1] - &l1;
    let l3 = &c[2] - &l2;
    [s.clone(), l1, l2, l3]
}

/// (−1)^k s + Σ_{j≤k} (−1)^{j−1} c_j, kept for the audit flag only.
fn literal_lengths(c: &[CycloElem; 3], s: &CycloElem) -> [CycloElem; 3] {
    let mut out = Vec::with_capacity(3);
    let mut acc = CycloElem::zero(s.modulus());
    for k in 1..=3 {
        acc = if k % 2 == 1 { &acc + &c[k - 1] } else { &acc - &c[k - 1] };
        let signed = if k % 2 == 1 { -s } else { s.clone() };
        out.push(&acc + &signed);
    }
    out.try_into().expect("three lengths")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainAudit {
    /// The alternating closed form gives a different verdict than the recursion.
    pub literal_formula_differs: bool,
    /// Dropping the k = g inequality would change the verdict.
    pub last_inequality_decisive: bool,
}

/// s > 0 and ℓ₁, ℓ₂, ℓ₃ > 0, with audit flags.
pub fn evaluate_asymmetric(cand: &Candidate) -> Result<(Verdict<()>, ChainAudit)> {
    let pos = |x: &CycloElem| -> Result<bool> { Ok(x.sign()? > 0) };
    if !cand.c.iter().map(pos).collect::<Result<Vec<_>>>()?.iter().all(|&b| b) {
        return Err(Error::InvariantBreach(format!("non-positive circumference in candidate {}", cand.tuple)));
    }
    let l = chain_lengths(&cand.c, &cand.s);
    let signs: Vec<bool> = l.iter().map(pos).collect::<Result<_>>()?;
    let verdict = match signs.iter().position(|&b| !b) {
        None => Ok(()),
        Some(0) => Err(Reason::SaddleSign),
        Some(k) => Err(Reason::Chain(k as u8)),
    };
    let lit: Vec<bool> = literal_lengths(&cand.c, &cand.s).iter().map(pos).collect::<Result<_>>()?;
    let literal_ok = signs[0] && lit.iter().all(|&b| b);
    let short_ok = signs[..3].iter().all(|&b| b);
    let audit = ChainAudit {
        literal_formula_differs: literal_ok != verdict.is_ok(),
        last_inequality_decisive: short_ok != verdict.is_ok(),
    };
    Ok((verdict, audit))
}

pub fn check_symmetric(t: &RootTuple) -> bool {
    matches!(evaluate_symmetric(t), Ok(Ok(_)))
}

pub fn check_asymmetric(t: &RootTuple) -> bool {
    match evaluate_symmetric(t) {
        Ok(Ok(cand)) => matches!(evaluate_asymmetric(&cand), Ok((Ok(()), _))),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn tup(n: u64, e: [u64; 3]) -> RootTuple {
        RootTuple::raw(n, e)
    }

    #[test]
    fn circumferences_n7() {
        let t = tup(7, [1, 5, 3]);
        let c = circumference_ratios(&t).unwrap();
        assert_eq!(c[0], CycloElem::one(7));
        assert_eq!(c[1].degree_over_q(), 3);
        assert_eq!(c[2].degree_over_q(), 3);
        assert!(circumference_ratios(&tup(7, [1, 1, 3])).is_err());
    }

    #[test]
    fn permutation_covariance() {
        let a = circumference_ratios(&tup(7, [1, 3, 5])).unwrap();
        let b = circumference_ratios(&tup(7, [3, 1, 5])).unwrap();
        // b = (c₂, c₁, c₃)/c₂ in terms of a
        assert_eq!(b[1], a[0].div(&a[1]).unwrap());
        assert_eq!(b[2], a[2].div(&a[1]).unwrap());
    }

    #[test]
    fn s_expansions() {
        let cand = evaluate_symmetric(&tup(7, [1, 5, 3])).unwrap().unwrap();
        assert_eq!(cand.expand(&cand.s).unwrap(), [rat(9, 7), rat(-2, 7), rat(-3, 7)]);
        let cand = evaluate_symmetric(&tup(14, [1, 11, 5])).unwrap().unwrap();
        assert_eq!(cand.expand(&cand.s).unwrap(), [rat(8, 7), rat(-6, 7), rat(2, 7)]);
        assert_eq!(cand.field.conductor, 7);
    }

    #[test]
    fn s_formula_arithmetic() {
        let one = CycloElem::one(4);
        let c = [one.clone(), one.clone(), one];
        let th = [rat(1, 4), rat(-1, 4), rat(1, 4)];
        // (1 − 1/2) + (−1 + 1/2) + (1 − 1/2)
        assert_eq!(compute_s(&c, &th).unwrap(), CycloElem::from_rat(4, rat(1, 2)));
    }

    #[test]
    fn symmetric_examples() {
        assert!(check_symmetric(&tup(7, [1, 3, 5])));
        assert!(check_symmetric(&tup(18, [1, 5, 14])));
        assert!(!check_symmetric(&tup(8, [1, 3, 5])));
        assert_eq!(evaluate_symmetric(&tup(7, [1, 1, 3])).unwrap().unwrap_err(), Reason::Distinctness);
        assert_eq!(evaluate_symmetric(&tup(14, [2, 4, 6])).unwrap().unwrap_err(), Reason::NotPrimitive);
    }

    #[test]
    fn asymmetric_examples() {
        assert!(check_asymmetric(&tup(7, [1, 5, 3])));
        assert!(!check_asymmetric(&tup(7, [3, 5, 1])));
        assert!(check_asymmetric(&tup(14, [1, 11, 5])));
        let cand = evaluate_symmetric(&tup(7, [1, 5, 3])).unwrap().unwrap();
        let (v, audit) = evaluate_asymmetric(&cand).unwrap();
        assert!(v.is_ok());
        assert!(audit.literal_formula_differs);
        assert!(!audit.last_inequality_decisive);
    }

    #[test]
    fn dual_heights_satisfy_trace_conditions() {
        let cand = evaluate_symmetric(&tup(18, [1, 5, 14])).unwrap().unwrap();
        let d0 = cand.field.dual_basis(&cand.c).unwrap()[0].clone();
        for i in 0..3 {
            for j in 0..3 {
                let tr = cand.field.trace(&(&cand.c[i] * &(&cand.h[j] * &d0))).unwrap();
                assert_eq!(tr, rat((i == j) as i64, 1));
            }
        }
    }

    #[test]
    fn reason_codes_render() {
        assert_eq!(Reason::Chain(2).to_string(), "sign-failure:chain-2");
        assert_eq!(serde_json::to_string(&Reason::NotCubic).unwrap(), "\"not-cubic\"");
    }
}
