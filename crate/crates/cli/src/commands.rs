use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use apteich_core::exactnum::{CycloElem, Rat};
use apteich_core::flatmodel::{
    build_chain_surface, build_veech_14gon, moduli_ratio_check, predicted_decomposition, vertical_side_decomposition,
    ModuliRatio, Side, VerticalCylinder,
};
use apteich_core::relations::{det819, pair63};
use apteich_core::relations::{det_search_819, dz_enumerate_maximal, pair_search_63, DetSearchConfig, OrderBoundQuery};
use apteich_core::search::{enumerate_candidates, evaluate_symmetric, run_order_scan, Candidate, OrderScan, RootTuple};
use apteich_core::ser::{parse_rat, rat_str};
use apteich_core::twist::{classify_candidates, ClassificationReport, VEECH_14GON};
use serde::Serialize;
use serde_json::json;

use crate::output::{Outcome, Table};
use crate::{Cli, Command, Search, UsageError, EXIT_INCOMPLETE, EXIT_OK, EXIT_REGRESSION};

pub enum Failure {
    Usage(UsageError),
    Engine(apteich_core::Error),
}

impl From<apteich_core::Error> for Failure {
    fn from(e: apteich_core::Error) -> Self {
        Failure::Engine(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Engine(apteich_core::Error::InvariantBreach(format!("serialization: {e}")))
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(UsageError(msg.into())))
}

type Run = Result<Outcome, Failure>;

pub fn run(cli: &Cli, workers: usize) -> Run {
    match &cli.command {
        Command::Dz { k, d } => dz(*k, *d),
        Command::Enumerate { n } => enumerate(*n),
        Command::SearchRelations { which: Search::Pair63 } => pair(),
        Command::SearchRelations { which: Search::Det819 } => det(cli, workers),
        Command::Classify => classify(cli.q_max),
        Command::VerifyFlat { candidate, t1, t3 } => verify_flat(cli.q_max, candidate, t1, t3),
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn tuple_str(t: &RootTuple) -> String {
    format!("({},{},{})", t.e[0], t.e[1], t.e[2])
}

fn timed<T>(stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    log::info!("{stage}: {:.3} s", start.elapsed().as_secs_f64());
    out
}

fn dz(k: u64, d: u64) -> Run {
    let q = match OrderBoundQuery::new(k, d) {
        Ok(q) => q,
        Err(e) => return usage(e.to_string()),
    };
    let max = dz_enumerate_maximal(q, q.prime_cap());
    let mut csv = Table::new(&["order"]);
    max.iter().for_each(|m| csv.push(vec![m.to_string()]));
    let text = max.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    Ok(Outcome { command: "dz", json: json!({ "k": k, "d": d, "maximal": max }), csv, text, code: EXIT_OK })
}

fn enumerate(n: u64) -> Run {
    if n < 3 {
        return usage(format!("n must be at least 3, got {n}"));
    }
    let rep = timed("enumerate", || enumerate_candidates(n))?;
    let mut csv = Table::new(&["list", "n", "e1", "e2", "e3"]);
    let mut text = format!("n = {n}: {} symmetric, {} asymmetric\n", rep.symmetric.len(), rep.asymmetric.len());
    for (name, list) in [("symmetric", &rep.symmetric), ("asymmetric", &rep.asymmetric)] {
        let _ = writeln!(text, "{name}:");
        for t in list {
            csv.push(vec![name.into(), n.to_string(), t.e[0].to_string(), t.e[1].to_string(), t.e[2].to_string()]);
            let _ = writeln!(text, "  {}", tuple_str(t));
        }
    }
    let _ = writeln!(text, "first failing filter over {} canonical tuples:", rep.canonical_tuples);
    for (reason, count) in &rep.reasons {
        let _ = writeln!(text, "  {reason}: {count}");
    }
    Ok(Outcome { command: "enumerate", json: serde_json::to_value(&rep)?, csv, text, code: EXIT_OK })
}

fn order_histogram<K: Ord + std::fmt::Debug>(keys: impl Iterator<Item = K>) -> String {
    let mut m: BTreeMap<K, usize> = BTreeMap::new();
    keys.for_each(|k| *m.entry(k).or_default() += 1);
    m.iter().map(|(k, v)| format!("{k:?} x{v}")).collect::<Vec<_>>().join(", ")
}

fn pair() -> Run {
    let hits = timed("pair63", pair_search_63);
    let exceptions: Vec<_> = hits.iter().filter(|h| !pair63::satisfies_dichotomy(h)).collect();
    let ok = exceptions.is_empty();
    let mut csv = Table::new(&["e1", "e2", "order1", "order2", "ratio_degree", "dichotomy"]);
    for h in &hits {
        csv.push(vec![
            h.exponents.0.to_string(),
            h.exponents.1.to_string(),
            h.orders.0.to_string(),
            h.orders.1.to_string(),
            h.ratio_degree.to_string(),
            pass(pair63::satisfies_dichotomy(h)).into(),
        ]);
    }
    let mut text = format!("pairs of order dividing 63 with rational or cubic ratio: {}\n", hits.len());
    let _ = write!(text, "gcd ∈ {{7,9}} or {{7,3}}: {}", pass(ok));
    if !ok {
        let sorted = exceptions.iter().map(|h| (h.orders.0.min(h.orders.1), h.orders.0.max(h.orders.1)));
        let _ = write!(text, " ({} exceptions, orders {})", exceptions.len(), order_histogram(sorted));
    }
    text.push('\n');
    let json = json!({
        "hits": hits,
        "audit": {
            "dichotomy": pass(ok),
            "exceptions": exceptions,
        },
    });
    Ok(Outcome { command: "search-relations", json, csv, text, code: if ok { EXIT_OK } else { EXIT_REGRESSION } })
}

fn det(cli: &Cli, workers: usize) -> Run {
    let tolerance: f64 = cli.tolerance.parse().map_err(|_| Failure::Usage(UsageError("bad tolerance".into())))?;
    let cfg = DetSearchConfig { tolerance, workers, ..DetSearchConfig::default() };
    let rep = det_search_819(&cfg);
    log::info!(
        "det819: {} triples, {} prefilter survivors, {} hits in {:.2} s",
        rep.triples_searched,
        rep.prefilter_survivors,
        rep.hits.len(),
        rep.seconds
    );
    let exceptions: Vec<_> = rep.hits.iter().filter(|h| !det819::satisfies_dichotomy(h)).collect();
    let cubic: Vec<_> = rep.hits.iter().filter(|h| h.cubic_circumferences).collect();
    let followup_ok = cubic.iter().all(|h| det819::orders_divide_7_or_9(h));
    let audit_ok = rep.audit_failures.is_empty();
    let ok = exceptions.is_empty();
    let mut csv = Table::new(&["m1", "m2", "m3", "order1", "order2", "order3", "cubic_circumferences", "dichotomy"]);
    for h in &rep.hits {
        csv.push(vec![
            h.exponents.0.to_string(),
            h.exponents.1.to_string(),
            h.exponents.2.to_string(),
            h.orders.0.to_string(),
            h.orders.1.to_string(),
            h.orders.2.to_string(),
            h.cubic_circumferences.to_string(),
            pass(det819::satisfies_dichotomy(h)).into(),
        ]);
    }
    let mut text = format!(
        "normalized triples: {}\nprefilter survivors: {}\nexact vanishing triples: {}\n",
        rep.triples_searched,
        rep.prefilter_survivors,
        rep.hits.len()
    );
    let _ = write!(text, "dichotomy: {}", pass(ok));
    if !ok {
        let sorted = exceptions.iter().map(|h| {
            let mut o = [h.orders.0, h.orders.1, h.orders.2];
            o.sort_unstable();
            (o[0], o[1], o[2])
        });
        let _ = write!(text, " ({} exceptions, orders {})", exceptions.len(), order_histogram(sorted));
    }
    let _ =
        writeln!(text, "\ncubic circumference cases ({}) with all orders dividing 7 or 9: {}", cubic.len(), pass(followup_ok));
    let _ = writeln!(text, "prefilter spot-check ({} rejected triples): {}", rep.rejected_audited, pass(audit_ok));
    let json = json!({
        "report": rep,
        "audit": {
            "dichotomy": pass(ok),
            "exceptions": exceptions,
            "cubic_followup": pass(followup_ok),
            "prefilter_spot_check": pass(audit_ok),
        },
    });
    let code = if ok && followup_ok && audit_ok { EXIT_OK } else { EXIT_REGRESSION };
    Ok(Outcome { command: "search-relations", json, csv, text, code })
}

#[derive(Serialize)]
struct ClassifyResult<'a> {
    scan: &'a OrderScan,
    classification: &'a ClassificationReport,
}

fn classify_exit(rep: &ClassificationReport) -> u8 {
    if rep.incomplete {
        EXIT_INCOMPLETE
    } else if rep.orbit_count == 1
        && rep.orbit_labels[0].as_deref() == Some(VEECH_14GON)
        && rep.routes_agree
        && rep.verdicts.iter().all(|v| !v.verdict.starts_with("error"))
    {
        EXIT_OK
    } else {
        EXIT_REGRESSION
    }
}

fn run_classification(q_max: u64) -> Result<(OrderScan, ClassificationReport), Failure> {
    let scan = timed("order scan", run_order_scan)?;
    let cands: Vec<Candidate> = scan.candidates().cloned().collect();
    let rep = timed("twist analysis", || classify_candidates(&cands, q_max))?;
    Ok((scan, rep))
}

fn solutions(rep: Option<&apteich_core::twist::DirectionReport>) -> String {
    rep.and_then(|d| d.solve.as_ref())
        .map(|s| s.valid().map(|x| format!("({},{})", x.p, x.q)).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn classify(q_max: u64) -> Run {
    let (scan, rep) = run_classification(q_max)?;
    let mut csv = Table::new(&[
        "n",
        "e1",
        "e2",
        "e3",
        "verdict",
        "dependence",
        "constraint",
        "solutions",
        "reversed_constraint",
        "reversed_solutions",
    ]);
    let constraint = |d: Option<&apteich_core::twist::DirectionReport>| {
        d.and_then(|d| d.elimination.as_ref())
            .map(|e| e.constraints.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; "))
            .unwrap_or_default()
    };
    let mut text = String::new();
    let _ = writeln!(text, "moduli with symmetric tuples: {:?}", scan.nonempty);
    let _ = writeln!(text, "candidates: {}", scan.candidates().count());
    for v in &rep.verdicts {
        let dep = v.forward.dependence.as_ref().map(|d| d.iter().map(rat_str).collect::<Vec<_>>().join(" ")).unwrap_or_default();
        csv.push(vec![
            v.tuple.n.to_string(),
            v.tuple.e[0].to_string(),
            v.tuple.e[1].to_string(),
            v.tuple.e[2].to_string(),
            v.verdict.clone(),
            dep,
            constraint(Some(&v.forward)),
            solutions(Some(&v.forward)),
            constraint(v.backward.as_ref()),
            solutions(v.backward.as_ref()),
        ]);
    }
    let dependent: Vec<String> = rep.dependent.iter().map(|t| format!("{} mod {}", tuple_str(t), t.n)).collect();
    let _ = writeln!(text, "dependent candidates: {}", dependent.join(", "));
    for v in rep.verdicts.iter().filter(|v| v.forward.dependence.is_some()) {
        let _ = writeln!(text, "  {} mod {}: {}", tuple_str(&v.tuple), v.tuple.n, v.verdict);
        for (label, d) in [("forward", Some(&v.forward)), ("reversed", v.backward.as_ref())] {
            if let Some(d) = d {
                let sols = solutions(Some(d));
                let sols = if sols.is_empty() { "none".to_string() } else { sols };
                let _ = writeln!(text, "    {label}: {} = 0, solutions (p,q): {sols}", constraint(Some(d)));
            }
        }
    }
    let labels: Vec<&str> = rep.orbit_labels.iter().map(|l| l.as_deref().unwrap_or("unidentified")).collect();
    let _ = writeln!(text, "orbits: {} [{}]", rep.orbit_count, labels.join(", "));
    let _ = writeln!(text, "incomplete: {}", if rep.incomplete { "yes" } else { "no" });
    let _ = writeln!(text, "symbolic and direct routes agree: {}", if rep.routes_agree { "yes" } else { "no" });
    let json = serde_json::to_value(ClassifyResult { scan: &scan, classification: &rep })?;
    Ok(Outcome { command: "classify", json, csv, text, code: classify_exit(&rep) })
}

#[derive(Serialize)]
struct SideReport {
    side: Side,
    traced: Vec<VerticalCylinder>,
    predicted: Vec<VerticalCylinder>,
    agree: bool,
    moduli: Vec<ModuliRatio>,
    error: Option<String>,
}

fn parse_tuple(s: &str) -> Result<RootTuple, Failure> {
    let parsed = s.split_once(':').and_then(|(n, e)| {
        let n: u64 = n.trim().parse().ok()?;
        let e: Vec<u64> = e.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
        Some((n, <[u64; 3]>::try_from(e).ok()?))
    });
    match parsed {
        Some((n, e)) => RootTuple::new(n, e).map_err(|e| Failure::Usage(UsageError(e.to_string()))),
        None => usage(format!("candidate must be `n:e1,e2,e3` or `14gon`, got {s:?}")),
    }
}

fn approx(x: &CycloElem) -> String {
    format!("{:.6}", x.to_f64())
}

fn side_report(surf: &apteich_core::flatmodel::ChainSurface, side: Side) -> SideReport {
    let traced = vertical_side_decomposition(surf, side);
    let predicted = predicted_decomposition(surf, side);
    match (traced, predicted) {
        (Ok(traced), Ok(predicted)) => {
            let agree = traced == predicted;
            match moduli_ratio_check(&traced) {
                Ok(moduli) => SideReport { side, traced, predicted, agree, moduli, error: None },
                Err(e) => SideReport { side, traced, predicted, agree, moduli: vec![], error: Some(e.to_string()) },
            }
        }
        (Err(e), _) | (_, Err(e)) => {
            SideReport { side, traced: vec![], predicted: vec![], agree: false, moduli: vec![], error: Some(e.to_string()) }
        }
    }
}

fn verify_flat(q_max: u64, candidate: &str, t1: &str, t3: &str) -> Run {
    if candidate.trim().eq_ignore_ascii_case("14gon") {
        return verify_14gon(q_max);
    }
    let tuple = parse_tuple(candidate)?;
    let parse = |s: &str| parse_rat(s).ok_or_else(|| Failure::Usage(UsageError(format!("not a rational number: {s:?}"))));
    let (t1, t3): (Rat, Rat) = (parse(t1)?, parse(t3)?);
    let cand = match evaluate_symmetric(&tuple)? {
        Ok(c) => c,
        Err(reason) => return usage(format!("{} is not an admissible candidate: {reason}", tuple_str(&tuple))),
    };
    let mut text = format!("candidate {} mod {} with t1 = {t1}, t3 = {t3}\n", tuple_str(&tuple), tuple.n);
    let sides: Vec<SideReport> = match build_chain_surface(&cand, &t1, &t3) {
        Ok(surf) => [Side::First, Side::Last].into_iter().map(|s| side_report(&surf, s)).collect(),
        Err(e) => {
            let _ = writeln!(text, "surface: {e}");
            vec![]
        }
    };
    let mut csv = Table::new(&[
        "side",
        "cylinder",
        "height",
        "circumference",
        "crossings_marked",
        "crossings_complement",
        "matches_closed_form",
    ]);
    let mut ok = !sides.is_empty();
    for s in &sides {
        let name = if s.side == Side::First { "first" } else { "last" };
        let _ = writeln!(text, "{name} side:");
        if let Some(e) = &s.error {
            let _ = writeln!(text, "  {e}");
        }
        for (i, c) in s.traced.iter().enumerate() {
            let counts: Vec<u64> = c.crossings.values().copied().collect();
            let _ = writeln!(
                text,
                "  D{}: height {}, circumference {}, crossings ({}, {})",
                i + 1,
                approx(&c.height),
                approx(&c.circumference),
                counts[0],
                counts[1]
            );
            csv.push(vec![
                name.into(),
                (i + 1).to_string(),
                c.height.to_string(),
                c.circumference.to_string(),
                counts[0].to_string(),
                counts[1].to_string(),
                s.agree.to_string(),
            ]);
        }
        let rational = !s.moduli.is_empty() && s.moduli.iter().all(|m| m.rational);
        let _ = writeln!(text, "  closed forms: {}", if s.agree { "agree" } else { "differ" });
        let _ = writeln!(text, "  moduli ratio: {}", if rational { "rational" } else { "irrational" });
        ok &= s.error.is_none() && s.agree && rational;
    }
    let _ = writeln!(text, "verify-flat: {}", pass(ok));
    let json = json!({
        "candidate": cand,
        "t1": rat_str(&t1),
        "t3": rat_str(&t3),
        "sides": sides,
        "verdict": pass(ok),
    });
    Ok(Outcome { command: "verify-flat", json, csv, text, code: if ok { EXIT_OK } else { EXIT_REGRESSION } })
}

fn verify_14gon(q_max: u64) -> Run {
    let polygon = build_veech_14gon()?;
    let shapes = [("top", polygon.normalized(false)?), ("central", polygon.normalized(true)?)];
    let (_, rep) = run_classification(q_max)?;
    let mut matches = Vec::new();
    for s in &rep.survivors {
        for (name, shape) in &shapes {
            if shape.matches(&s.candidate, &s.t1, &s.t3)? {
                matches.push((*name, s.candidate.tuple.clone(), s.orbit_class));
            }
        }
    }
    let ok = !matches.is_empty() && rep.orbit_count == 1;
    let mut text = format!("14-gon horizontal cylinders: {}\n", polygon.cylinders.len());
    let mut csv = Table::new(&["first_cylinder", "c1", "c2", "c3", "h1", "h2", "h3", "s"]);
    for (name, shape) in &shapes {
        let row: Vec<String> = std::iter::once(name.to_string())
            .chain(shape.c.iter().chain(shape.h.iter()).chain(std::iter::once(&shape.s)).map(|x| x.to_string()))
            .collect();
        csv.push(row);
        let cs: Vec<String> = shape.c.iter().map(approx).collect();
        let _ = writeln!(text, "  {name} first: c = ({}), s = {}", cs.join(", "), approx(&shape.s));
    }
    for (name, tuple, _) in &matches {
        let _ = writeln!(text, "  matches survivor {} mod {} ({name} cylinder first)", tuple_str(tuple), tuple.n);
    }
    let matches: Vec<_> = matches
        .iter()
        .map(|(name, tuple, orbit)| json!({ "first_cylinder": name, "tuple": tuple, "orbit_class": orbit }))
        .collect();
    let _ = writeln!(text, "agreement with classify survivor: {}", pass(ok));
    let json = json!({ "polygon": polygon, "normalized": { "top": shapes[0].1, "central": shapes[1].1 }, "matches": matches, "verdict": pass(ok) });
    Ok(Outcome { command: "verify-flat", json, csv, text, code: if ok { EXIT_OK } else { EXIT_REGRESSION } })
}
