use apteich_core::exactnum::{rat, CubicFieldDesc, CycloElem};
use apteich_core::flatmodel::build_veech_14gon;
use apteich_core::search::RootTuple;
use apteich_core::twist::{classify_all, UPoly, VEECH_14GON};

#[test]
fn full_classification() {
    let (scan, rep) = classify_all(64).unwrap();
    assert_eq!(scan.candidates().count(), 37);
    let dependent: Vec<RootTuple> = rep.dependent.clone();
    assert_eq!(dependent, vec![RootTuple::raw(7, [1, 5, 3]), RootTuple::raw(7, [5, 3, 1]), RootTuple::raw(14, [1, 11, 5])]);
    assert!(rep.verdicts.iter().filter(|v| v.tuple.n == 18).all(|v| v.verdict == "independent"));
    assert!(rep.verdicts.iter().all(|v| !v.verdict.starts_with("error")));
    assert_eq!(rep.survivors.len(), 2);
    assert_eq!(rep.orbit_count, 1);
    assert_eq!(rep.orbit_labels, [Some(VEECH_14GON.to_string())]);
    assert!(!rep.incomplete);
    assert!(rep.routes_agree);

    let verdict = |t: RootTuple| rep.verdicts.iter().find(|v| v.tuple == t).unwrap();
    let case1 = verdict(RootTuple::raw(7, [1, 5, 3]));
    let solve = case1.forward.solve.as_ref().unwrap();
    assert_eq!(solve.bounds[0].constraint.to_string(), "2P^2 - 2Pq - 2P + q^2 + q");
    assert_eq!(solve.bounds[0].discriminant, Some(UPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(-1, 1)])));
    let back = case1.backward.as_ref().unwrap().solve.as_ref().unwrap();
    assert_eq!(back.bounds[0].discriminant, Some(UPoly::from_coeffs(vec![rat(1, 1), rat(0, 1), rat(-8, 9)])));
    assert_eq!(back.valid().map(|s| s.q).collect::<Vec<_>>(), [1]);
    let case3 = verdict(RootTuple::raw(14, [1, 11, 5]));
    assert_eq!(case3.backward.as_ref().unwrap().solve.as_ref().unwrap().valid().map(|s| s.q).collect::<Vec<_>>(), [1]);
    assert_eq!(verdict(RootTuple::raw(7, [5, 3, 1])).verdict, "no-twist-solution");
}

#[test]
fn narrow_direct_check_keeps_the_result() {
    let (_, rep) = classify_all(1).unwrap();
    assert_eq!(rep.orbit_count, 1);
    assert!(!rep.incomplete);
    assert!(rep.routes_agree);
}

#[test]
fn fourteen_gon_field() {
    let p = build_veech_14gon().unwrap();
    let top = p.normalized(false).unwrap();
    let k = CubicFieldDesc::from_generator(&CycloElem::root(28, 2) + &CycloElem::root(28, -2)).unwrap();
    assert!(k.is_basis(&top.c).unwrap());
    assert!(top.c.iter().all(|c| c.degree_over_q() == 3 || c.as_rat().is_some()));
}
