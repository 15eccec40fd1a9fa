use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::case::{build_case, dependence_lambda, CaseData};
use super::elim::{eliminate_u, Elimination};
use super::reverse::{reverse_chain, same_chain};
use super::solve::{integer_solutions, SolveReport};
use crate::exactnum::{CycloElem, Rat};
use crate::flatmodel::{build_chain_surface, build_veech_14gon, moduli_ratio_check, vertical_side_decomposition, Side};
use crate::search::{run_order_scan, Candidate, OrderScan, RootTuple};
use crate::Result;

pub const VEECH_14GON: &str = "Veech 14-gon";

/// One direction of the twist analysis for a candidate.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionReport {
    pub reversed: bool,
    pub candidate: Candidate,
    #[serde(serialize_with = "crate::ser::opt_rats")]
    pub dependence: Option<[Rat; 3]>,
    pub case: Option<CaseData>,
    pub elimination: Option<Elimination>,
    pub solve: Option<SolveReport>,
    pub error: Option<String>,
}

impl DirectionReport {
    fn twists(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.solve.iter().flat_map(|s| s.valid()).flat_map(|s| s.twists.iter().cloned()).collect();
        out.sort();
        out.dedup();
        out
    }

    fn incomplete(&self) -> bool {
        self.solve.as_ref().is_some_and(|s| s.incomplete)
    }

    fn routes_agree(&self) -> bool {
        self.solve.as_ref().is_none_or(|s| s.routes_agree)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateVerdict {
    pub tuple: RootTuple,
    pub forward: DirectionReport,
    pub backward: Option<DirectionReport>,
    /// survivor, independent, no-twist-solution, no-reversed-twist-solution or error.
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Survivor {
    pub candidate: Candidate,
    /// t₁ as a fraction of c₁ = 1.
    #[serde(serialize_with = "crate::ser::rat")]
    pub t1: Rat,
    #[serde(serialize_with = "crate::ser::rat")]
    pub t2: Rat,
    /// t₃ as a fraction of c₃.
    #[serde(serialize_with = "crate::ser::rat")]
    pub t3: Rat,
    pub orbit_class: usize,
    /// Vertical moduli on both sides are rationally related.
    pub vertical_moduli_rational: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub verdicts: Vec<CandidateVerdict>,
    /// Candidates where s − 1, h₂ and s·h₂ + 1 are linearly dependent over Q.
    pub dependent: Vec<RootTuple>,
    pub survivors: Vec<Survivor>,
    pub orbit_count: usize,
    pub orbit_labels: Vec<Option<String>>,
    /// Some q range was searched without a proven bound.
    pub incomplete: bool,
    pub routes_agree: bool,
}

fn analyze(cand: Candidate, q_max: u64) -> DirectionReport {
    let mut rep = DirectionReport {
        reversed: cand.reversed,
        candidate: cand,
        dependence: None,
        case: None,
        elimination: None,
        solve: None,
        error: None,
    };
    let run = |rep: &mut DirectionReport| -> Result<()> {
        rep.dependence = dependence_lambda(&rep.candidate)?;
        if rep.dependence.is_none() {
            return Ok(());
        }
        let case = build_case(&rep.candidate)?;
        let elim = eliminate_u(&case)?;
        rep.solve = Some(integer_solutions(&case, &elim, &rep.candidate, q_max)?);
        rep.case = Some(case);
        rep.elimination = Some(elim);
        Ok(())
    };
    if let Err(e) = run(&mut rep) {
        rep.error = Some(e.to_string());
    }
    rep
}

fn classify_one(cand: &Candidate, q_max: u64) -> CandidateVerdict {
    let forward = analyze(cand.clone(), q_max);
    let verdict = |v: &str| v.to_string();
    let tuple = cand.tuple;
    if let Some(e) = &forward.error {
        return CandidateVerdict { tuple, verdict: format!("error: {e}"), forward, backward: None };
    }
    if forward.dependence.is_none() {
        return CandidateVerdict { tuple, forward, backward: None, verdict: verdict("independent") };
    }
    if forward.twists().is_empty() {
        return CandidateVerdict { tuple, forward, backward: None, verdict: verdict("no-twist-solution") };
    }
    let backward = match reverse_chain(cand) {
        Ok(r) => analyze(r, q_max),
        Err(e) => return CandidateVerdict { tuple, forward, backward: None, verdict: format!("error: {e}") },
    };
    let v = match (&backward.error, backward.twists().is_empty()) {
        (Some(e), _) => format!("error: {e}"),
        (None, true) => verdict("no-reversed-twist-solution"),
        (None, false) => verdict("survivor"),
    };
    CandidateVerdict { tuple, forward, backward: Some(backward), verdict: v }
}

fn vertical_check(cand: &Candidate, t1: &Rat, t3: &Rat) -> Result<bool> {
    let surf = build_chain_surface(cand, t1, t3)?;
    for side in [Side::First, Side::Last] {
        let cyls = vertical_side_decomposition(&surf, side)?;
        if !moduli_ratio_check(&cyls)?.iter().all(|m| m.rational) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Survivors a and b describe the same surface up to chain reversal.
fn same_surface(a: &Survivor, b: &Survivor, reversed_a: &Candidate) -> bool {
    (same_chain(&a.candidate, &b.candidate) && a.t1 == b.t1 && a.t3 == b.t3)
        || (same_chain(reversed_a, &b.candidate) && a.t1 == b.t3 && a.t3 == b.t1)
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Runs the twist analysis on every candidate and groups the survivors.
pub fn classify_candidates(cands: &[Candidate], q_max: u64) -> Result<ClassificationReport> {
    let verdicts: Vec<CandidateVerdict> = cands.par_iter().map(|c| classify_one(c, q_max)).collect();
    let dependent = verdicts.iter().filter(|v| v.forward.dependence.is_some()).map(|v| v.tuple).collect();
    let mut survivors = Vec::new();
    for v in verdicts.iter().filter(|v| v.verdict == "survivor") {
        let back = v.backward.as_ref().expect("survivor has a reversed report");
        for t1 in v.forward.twists() {
            for t3 in back.twists() {
                let vertical_moduli_rational = vertical_check(&v.forward.candidate, &t1, &t3)?;
                survivors.push(Survivor {
                    candidate: v.forward.candidate.clone(),
                    t1: t1.clone(),
                    t2: Rat::zero(),
                    t3,
                    orbit_class: 0,
                    vertical_moduli_rational,
                });
            }
        }
    }
    let reversed: Vec<Candidate> = survivors.iter().map(|s| reverse_chain(&s.candidate)).collect::<Result<_>>()?;
    let mut parent: Vec<usize> = (0..survivors.len()).collect();
    for i in 0..survivors.len() {
        for j in i + 1..survivors.len() {
            if same_surface(&survivors[i], &survivors[j], &reversed[i]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[b] = a;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..survivors.len() {
        let r = find(&mut parent, i);
        let class = match roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        survivors[i].orbit_class = class;
    }
    let polygon = build_veech_14gon()?;
    let shapes = [polygon.normalized(false)?, polygon.normalized(true)?];
    let mut orbit_labels = vec![None; roots.len()];
    for s in &survivors {
        for shape in &shapes {
            if shape.matches(&s.candidate, &s.t1, &s.t3)? {
                orbit_labels[s.orbit_class] = Some(VEECH_14GON.to_string());
            }
        }
    }
    let all = verdicts.iter().flat_map(|v| std::iter::once(&v.forward).chain(v.backward.iter()));
    let incomplete = all.clone().any(|d| d.incomplete());
    let routes_agree = all.into_iter().all(|d| d.routes_agree());
    Ok(ClassificationReport { verdicts, dependent, survivors, orbit_count: roots.len(), orbit_labels, incomplete, routes_agree })
}

/// Order scan followed by the twist analysis of every candidate.
pub fn classify_all(q_max: u64) -> Result<(OrderScan, ClassificationReport)> {
    let scan = run_order_scan()?;
    let cands: Vec<Candidate> = scan.candidates().cloned().collect();
    let report = classify_candidates(&cands, q_max)?;
    Ok((scan, report))
}

/// t₃ = c₃·frac as an element, for display.
pub fn absolute_t3(s: &Survivor) -> CycloElem {
    s.candidate.c[2].scale(&s.t3)
}
