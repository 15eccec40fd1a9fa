use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::candidate::{evaluate_asymmetric, evaluate_symmetric, Candidate, ChainAudit, Reason};
use super::tuple::RootTuple;
use crate::{Error, Result};

/// Verdict for one ordered tuple in the orbit of a symmetric survivor.
#[derive(Clone, Debug, Serialize)]
pub struct TupleVerdict {
    pub tuple: RootTuple,
    pub asymmetric: bool,
    pub reason: Option<Reason>,
    pub audit: ChainAudit,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusReport {
    pub n: u64,
    pub canonical_tuples: u64,
    /// First failing filter, counted over canonical representatives.
    pub reasons: BTreeMap<String, u64>,
    pub symmetric: Vec<RootTuple>,
    pub asymmetric: Vec<RootTuple>,
    pub verdicts: Vec<TupleVerdict>,
    /// Candidates of the asymmetric list, in the same order.
    #[serde(skip)]
    pub candidates: Vec<Candidate>,
}

/// Canonical representatives with first exponent e₁, in lexicographic order.
fn reps_with_first(n: u64, e1: u64) -> impl Iterator<Item = RootTuple> {
    (0..n).flat_map(move |e2| (0..n).map(move |e3| RootTuple::raw(n, [e1, e2, e3]))).filter(RootTuple::is_canonical)
}

pub fn enumerate_candidates(n: u64) -> Result<ModulusReport> {
    if n < 3 {
        return Err(Error::InvalidModulus(n));
    }
    let per_first: Vec<Vec<(RootTuple, std::result::Result<(), Reason>)>> = (0..n)
        .into_par_iter()
        .map(|e1| reps_with_first(n, e1).map(|t| Ok((t, evaluate_symmetric(&t)?.map(|_| ())))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut reasons = BTreeMap::new();
    let mut symmetric = Vec::new();
    let mut canonical_tuples = 0;
    for (t, v) in per_first.into_iter().flatten() {
        canonical_tuples += 1;
        match v {
            Ok(()) => symmetric.push(t),
            Err(r) => *reasons.entry(r.to_string()).or_insert(0) += 1,
        }
    }
    let mut members: Vec<RootTuple> = symmetric.iter().flat_map(RootTuple::orbit).collect();
    members.sort_unstable();
    members.dedup();
    let evaluated: Vec<(TupleVerdict, Option<Candidate>)> = members
        .par_iter()
        .map(|t| {
            let cand = evaluate_symmetric(t)?
                .map_err(|r| Error::InvariantBreach(format!("{t} is in the orbit of a symmetric survivor but fails with {r}")))?;
            let (v, audit) = evaluate_asymmetric(&cand)?;
            let verdict = TupleVerdict { tuple: *t, asymmetric: v.is_ok(), reason: v.err(), audit };
            Ok((verdict, v.is_ok().then_some(cand)))
        })
        .collect::<Result<_>>()?;
    let mut verdicts = Vec::with_capacity(evaluated.len());
    let mut candidates = Vec::new();
    for (v, c) in evaluated {
        verdicts.push(v);
        candidates.extend(c);
    }
    let asymmetric = candidates.iter().map(|c| c.tuple).collect();
    log::info!("n = {n}: {canonical_tuples} canonical tuples, {} symmetric, {} asymmetric", symmetric.len(), candidates.len());
    Ok(ModulusReport { n, canonical_tuples, reasons, symmetric, asymmetric, verdicts, candidates })
}

/// Every n ≥ 3 dividing 56 or 72.
pub fn scan_moduli() -> Vec<u64> {
    (3..=72).filter(|n| 56 % n == 0 || 72 % n == 0).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderScan {
    pub moduli: Vec<ModulusReport>,
    /// Moduli with a nonempty symmetric list.
    pub nonempty: Vec<u64>,
}

pub const EXPECTED_MODULI: [u64; 3] = [7, 14, 18];

impl OrderScan {
    pub fn report(&self, n: u64) -> Option<&ModulusReport> {
        self.moduli.iter().find(|m| m.n == n)
    }

    pub fn candidates(&self) -> impl Iterator<Item = &Candidate> {
        self.moduli.iter().flat_map(|m| m.candidates.iter())
    }

    pub fn only_expected_moduli(&self) -> bool {
        self.nonempty == EXPECTED_MODULI
    }
}

pub fn run_order_scan() -> Result<OrderScan> {
    let moduli = scan_moduli().into_iter().map(enumerate_candidates).collect::<Result<Vec<_>>>()?;
    let nonempty = moduli.iter().filter(|m| !m.symmetric.is_empty()).map(|m| m.n).collect();
    Ok(OrderScan { moduli, nonempty })
}
