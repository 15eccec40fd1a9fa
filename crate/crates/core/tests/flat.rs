use apteich_core::exactnum::{rat, CycloElem, Rat};
use apteich_core::flatmodel::{
    build_chain_surface, moduli_ratio_check, predicted_decomposition, rescale, side_area, vertical_side_decomposition,
    ChainSurface, Side,
};
use apteich_core::search::{evaluate_symmetric, Candidate, RootTuple};
use apteich_core::twist::reverse_chain;
use apteich_core::Error;
use num_integer::Integer;
use proptest::prelude::*;

fn cand(n: u64, e: [u64; 3]) -> Candidate {
    evaluate_symmetric(&RootTuple::raw(n, e)).unwrap().unwrap()
}

fn zero() -> Rat {
    rat(0, 1)
}

#[test]
fn case1_untwisted() {
    let c = cand(7, [1, 5, 3]);
    let surf = build_chain_surface(&c, &zero(), &zero()).unwrap();
    let one = CycloElem::one(7);
    assert_eq!(surf.saddle_lengths[0], c.s);
    assert_eq!(surf.saddle_lengths[1], &one - &c.s);
    assert!(surf.area().sign().unwrap() > 0);
    let cyls = vertical_side_decomposition(&surf, Side::First).unwrap();
    assert_eq!(cyls.len(), 2);
    assert_eq!(cyls[0].height, c.s);
    assert_eq!(cyls[0].circumference, one);
    assert_eq!(cyls[1].height, &one - &c.s);
    assert_eq!(cyls[1].circumference, &one + &c.h[1]);
    assert_eq!(cyls[0].crossings["gamma_0"], 1);
    assert_eq!(cyls[0].crossings["gamma_0_prime"], 0);
    assert!(moduli_ratio_check(&cyls).unwrap().iter().all(|m| m.rational));
    let last = vertical_side_decomposition(&surf, Side::Last).unwrap();
    assert!(moduli_ratio_check(&last).unwrap().iter().all(|m| m.rational));
}

#[test]
fn saddle_too_long() {
    let c = cand(7, [1, 5, 3]);
    let twists = vec![CycloElem::zero(7); 3];
    let s = &c.c[0] + &CycloElem::one(7);
    let r = ChainSurface::new(c.c.to_vec(), c.h.to_vec(), s, twists);
    assert!(matches!(r, Err(Error::Infeasible(_))));
}

#[test]
fn half_twist_is_irrational() {
    let c = cand(7, [1, 5, 3]);
    let surf = build_chain_surface(&c, &rat(1, 2), &zero()).unwrap();
    let cyls = vertical_side_decomposition(&surf, Side::First).unwrap();
    assert!(!moduli_ratio_check(&cyls).unwrap()[0].rational);
}

#[test]
fn case2_never_rational() {
    let c = cand(7, [5, 3, 1]);
    for q in 1..=16i64 {
        for k in (0..q).filter(|k| k.gcd(&q) == 1) {
            let surf = build_chain_surface(&c, &rat(k, q), &zero()).unwrap();
            let cyls = vertical_side_decomposition(&surf, Side::First).unwrap();
            assert!(!moduli_ratio_check(&cyls).unwrap()[0].rational, "k/q = {k}/{q}");
        }
    }
}

#[test]
fn reversal_symmetry() {
    for (n, e) in [(7, [1, 5, 3]), (14, [1, 11, 5]), (18, [1, 5, 14])] {
        let c = cand(n, e);
        let r = reverse_chain(&c).unwrap();
        for (t1, t3) in [(zero(), zero()), (rat(1, 3), rat(2, 5))] {
            let surf = build_chain_surface(&c, &t1, &t3).unwrap();
            let rsurf = build_chain_surface(&r, &t3, &t1).unwrap();
            let last = vertical_side_decomposition(&surf, Side::Last).unwrap();
            let first = vertical_side_decomposition(&rsurf, Side::First).unwrap();
            assert_eq!(rescale(&last, &c.c[2], &c.h[2]).unwrap(), first);
        }
    }
}

fn q(n: i64, d: i64) -> CycloElem {
    CycloElem::from_rat(1, rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn rational_chains_match_closed_forms(
        lens in proptest::collection::vec((1i64..40, 1i64..12), 4),
        hs in proptest::collection::vec((1i64..20, 1i64..9), 3),
        den in 1i64..10,
        num in 0i64..10,
        den3 in 1i64..8,
        num3 in 0i64..8,
    ) {
        let l: Vec<CycloElem> = lens.iter().map(|&(a, b)| q(a, b)).collect();
        let c = vec![&l[0] + &l[1], &l[1] + &l[2], &l[2] + &l[3]];
        let h: Vec<CycloElem> = hs.iter().map(|&(a, b)| q(a, b)).collect();
        let t1 = rat(num % den, den);
        let t3 = rat(num3 % den3, den3);
        let twists = vec![c[0].scale(&t1), q(0, 1), c[2].scale(&t3)];
        let surf = ChainSurface::new(c.clone(), h, l[0].clone(), twists).unwrap();
        for (side, t) in [(Side::First, &t1), (Side::Last, &t3)] {
            let predicted = match predicted_decomposition(&surf, side) {
                Ok(p) => p,
                Err(Error::DegenerateSaddle) => {
                    prop_assert_eq!(vertical_side_decomposition(&surf, side), Err(Error::DegenerateSaddle));
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            let traced = vertical_side_decomposition(&surf, side).unwrap();
            prop_assert_eq!(&traced, &predicted);
            let qd = t.denom().clone();
            let len = if side == Side::First { &c[0] } else { &c[2] };
            prop_assert_eq!(&traced[0].height + &traced[1].height, len.scale(&Rat::new(1.into(), qd.clone())));
            for cyl in &traced {
                let total: u64 = cyl.crossings.values().sum();
                prop_assert_eq!(Rat::from_integer(total.into()), Rat::from_integer(qd.clone()));
            }
            let area = traced.iter().fold(q(0, 1), |a, x| &a + &(&x.height * &x.circumference));
            prop_assert_eq!(area, side_area(&surf, side).unwrap());
        }
    }
}
