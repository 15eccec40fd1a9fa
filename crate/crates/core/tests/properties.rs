use apteich_core::exactnum::field::field;
use apteich_core::exactnum::{cmp_real, rat, CycloElem, IntRootSum};
use apteich_core::relations::{
    dz_admissible, dz_enumerate_maximal, primitive_partition, OrderBoundQuery, PartitionVerdict, RelationTerm,
};
use apteich_core::search::{enumerate_candidates, evaluate_symmetric, RootTuple};
use apteich_core::twist::classify_candidates;
use proptest::prelude::*;

const MODULI: [u64; 7] = [5, 7, 9, 12, 14, 18, 28];

fn elem(n: u64, terms: &[(i64, i64, i64)]) -> CycloElem {
    terms.iter().fold(CycloElem::zero(n), |acc, &(e, a, b)| &acc + &CycloElem::root(n, e).scale(&rat(a, b)))
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    proptest::collection::vec((-40i64..40, -9i64..10, 1i64..6), 0..6)
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(i in 0usize..MODULI.len(), a in terms(), b in terms(), c in terms()) {
        let n = MODULI[i];
        let (a, b, c) = (elem(n, &a), elem(n, &b), elem(n, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, CycloElem::zero(n));
        prop_assert_eq!(&a * &CycloElem::one(n), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), CycloElem::one(n));
        }
    }

    #[test]
    fn galois_is_a_homomorphism(i in 0usize..MODULI.len(), a in terms(), b in terms(), k in 1i64..60) {
        let n = MODULI[i];
        let f = field(n);
        prop_assume!(f.is_unit(k));
        let (a, b) = (elem(n, &a), elem(n, &b));
        let s = |x: &CycloElem| x.galois(k).unwrap();
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&CycloElem::root(n, 1)), CycloElem::root(n, k));
    }

    #[test]
    fn sign_soundness(i in 0usize..MODULI.len(), a in terms(), r in -3i64..4) {
        let n = MODULI[i];
        let z = elem(n, &a);
        let x = &(&z + &z.conjugate()) + &CycloElem::from_int(n, r);
        let sg = x.sign().unwrap();
        prop_assert_eq!(sg == 0, x.is_zero());
        prop_assert_eq!((-&x).sign().unwrap(), -sg);
        let v = x.to_f64();
        if v.abs() > 1e-9 {
            prop_assert_eq!(sg, if v > 0.0 { 1 } else { -1 });
        }
        prop_assert_eq!(cmp_real(&x, &x).unwrap(), std::cmp::Ordering::Equal);
    }

    #[test]
    fn int_sums_agree_with_elements(i in 0usize..MODULI.len(), t in proptest::collection::vec((-40i64..40, -3i64..4), 0..8)) {
        let n = MODULI[i];
        let s = IntRootSum::new(n, t.clone());
        let e = t.iter().fold(CycloElem::zero(n), |acc, &(x, c)| &acc + &CycloElem::root(n, x).scale(&rat(c, 1)));
        prop_assert_eq!(s.is_zero_exact(&field(n)), e.is_zero());
        prop_assert_eq!(s.to_elem(), e);
    }

    #[test]
    fn dz_maximal_is_an_antichain_covering_admissible(k in 2u64..8, d in 1u64..5, n in 1u64..3000) {
        let q = OrderBoundQuery::new(k, d).unwrap();
        let max = dz_enumerate_maximal(q, 200);
        for (i, a) in max.iter().enumerate() {
            prop_assert!(dz_admissible(*a, q));
            for (j, b) in max.iter().enumerate() {
                prop_assert!(i == j || b % a != 0);
            }
        }
        if dz_admissible(n, q) {
            prop_assert!(max.iter().any(|m| m % n == 0), "{} admissible but not covered by {:?}", n, max);
        }
    }

    #[test]
    fn partition_of_joined_relations(m1 in 2u64..8, m2 in 2u64..8, shift in 1i64..20) {
        // 1 + ζ + … + ζ^{m−1} = 0 for each m, rotated apart so no roots repeat
        let n = 2 * 3 * 5 * 7 * 4;
        let mut t: Vec<RelationTerm> = (0..m1).map(|j| RelationTerm::new(CycloElem::one(1), m1, j as i64)).collect();
        let rot = |j: u64| (j as i64) * (n as i64 / m2 as i64) + shift;
        t.extend((0..m2).map(|j| RelationTerm::new(CycloElem::one(1), n, rot(j))));
        let roots: Vec<CycloElem> = t.iter().map(|x| CycloElem::root(x.root.0, x.root.1)).collect();
        let clash = (0..roots.len()).any(|i| (i + 1..roots.len()).any(|j| roots[i] == roots[j]));
        prop_assume!(!clash && t.len() <= 12);
        match primitive_partition(&t).unwrap() {
            PartitionVerdict::Decomposable(subsets) => {
                let first: Vec<usize> = (0..m1 as usize).collect();
                prop_assert!(subsets.contains(&first));
            }
            PartitionVerdict::Primitive => prop_assert!(false, "a joined relation is not primitive"),
        }
    }
}

#[test]
fn dual_basis_gram_identities() {
    for (n, e) in [(7, [1, 3, 5]), (14, [1, 5, 11]), (18, [1, 5, 14]), (18, [3, 7, 12])] {
        let cand = evaluate_symmetric(&RootTuple::raw(n, e)).unwrap().unwrap();
        let k = &cand.field;
        let d = k.dual_basis(&cand.c).unwrap();
        let g = k.gram(&cand.c).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let t = k.trace(&(&cand.c[i] * &d[j])).unwrap();
                assert_eq!(t, rat(if i == j { 1 } else { 0 }, 1));
                assert_eq!(g[i][j], g[j][i]);
                assert_eq!(g[i][j], k.trace(&(&cand.c[i] * &cand.c[j])).unwrap());
            }
        }
        let gd = k.gram(&d).unwrap();
        // the Gram matrix of the dual basis inverts the Gram matrix of the basis
        for i in 0..3 {
            for j in 0..3 {
                let s = (0..3).fold(rat(0, 1), |acc, l| acc + &g[i][l] * &gd[l][j]);
                assert_eq!(s, rat(if i == j { 1 } else { 0 }, 1));
            }
        }
    }
}

#[test]
fn reports_are_independent_of_worker_count() {
    let run = |threads| {
        with_pool(threads, || {
            let rep = enumerate_candidates(18).unwrap();
            let cls = classify_candidates(&rep.candidates, 8).unwrap();
            (serde_json::to_string(&rep).unwrap(), serde_json::to_string(&cls).unwrap())
        })
    };
    assert_eq!(run(1), run(3));
}
