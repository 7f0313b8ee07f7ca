use std::collections::BTreeSet;
use std::ops::ControlFlow;

use proptest::prelude::*;
use splitbound_core::f2quad::{count_by_recursion, F2QuadForm};
use splitbound_core::finabel::{
    quotient, reduce_tuple, replay, subgroup_from_generators, subgroup_types,
};
use splitbound_core::heisenberg::{commutator, diag_matrix, perm_matrix, PglSubgroup};
use splitbound_core::liedata::{self, Tables};
use splitbound_core::obstruction::{
    f_e, min_splitting_exponent, ta_feasible, thm13_bound, ObstructionQuery,
};
use splitbound_core::qzforms::{primal_subgroup, standard_module};
use splitbound_core::{EnumLimit, Element, FinAbGroup, QmodZ};

/// Arbitrary cyclic factors; the group is their canonicalized product.
fn group(max_order: u64) -> impl Strategy<Value = FinAbGroup> {
    prop::collection::vec(2u64..=12, 0..4)
        .prop_filter("order bound", move |f| f.iter().product::<u64>() <= max_order)
        .prop_map(|f| FinAbGroup::new(&f).unwrap())
}

fn element(a: &FinAbGroup, seed: &[u64]) -> Element {
    let coords: Vec<u64> = a
        .invariants()
        .iter()
        .zip(seed.iter().cycle())
        .map(|(&d, &s)| s % d)
        .collect();
    a.element(&coords).unwrap()
}

fn p_power(p: u64, max_r: u32) -> impl Strategy<Value = FinAbGroup> {
    prop::collection::vec(1u32..=max_r, 1..=2)
        .prop_filter("small", move |es| es.iter().sum::<u32>() <= max_r)
        .prop_map(move |es| {
            let f: Vec<u64> = es.iter().map(|&e| p.pow(e)).collect();
            FinAbGroup::new(&f).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalization_is_idempotent_and_keeps_order(f in prop::collection::vec(2u64..=30, 0..5)) {
        let a = FinAbGroup::new(&f).unwrap();
        prop_assert_eq!(a.order(), f.iter().product::<u64>());
        let b = FinAbGroup::new(a.invariants()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.invariants().windows(2).all(|w| w[1] % w[0] == 0));
    }

    #[test]
    fn character_pairing_is_bilinear(a in group(200), s in prop::collection::vec(0u64..1000, 3..9)) {
        let x = element(&a, &s[0..]);
        let y = element(&a, &s[1..]);
        let chi = element(&a.dual(), &s[2..]);
        let lhs = a.eval_character(&chi, &a.add(&x, &y)).unwrap();
        let rhs = a.eval_character(&chi, &x).unwrap() + a.eval_character(&chi, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
        let o = a.element_order(&x) as i64;
        prop_assert_eq!(a.eval_character(&chi, &a.scale(&x, o)).unwrap(), QmodZ::default());
    }

    #[test]
    fn reduce_tuple_contract(a in group(64), extra in 0usize..=3, s in prop::collection::vec(0u64..64, 1..40)) {
        let len = a.rank() + extra;
        let xi: Vec<Element> = (0..len).map(|i| element(&a, &s[i % s.len()..])).collect();
        let red = reduce_tuple(&a, &xi).unwrap();
        prop_assert!(red.nonzero_count() <= a.rank());
        prop_assert_eq!(replay(&a, &xi, &red.ops).unwrap(), red.reduced.clone());
        prop_assert_eq!(
            subgroup_from_generators(&a, &xi).unwrap(),
            subgroup_from_generators(&a, &red.reduced).unwrap()
        );
    }

    #[test]
    fn generated_subgroup_quotient_order(a in group(128), s in prop::collection::vec(0u64..128, 1..6)) {
        let gens: Vec<Element> = (0..s.len()).map(|i| element(&a, &s[i..])).collect();
        let h = subgroup_from_generators(&a, &gens).unwrap();
        let q = quotient(&a, &h).unwrap();
        prop_assert_eq!(h.order() * q.order(), a.order());
        for g in &gens {
            prop_assert!(h.contains(g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn standard_module_is_nondegenerate_with_primal_lagrangian(a in group(16)) {
        let w = standard_module(&a);
        prop_assert!(w.is_nondegenerate());
        prop_assert!(w.is_lagrangian(&primal_subgroup(&a)).unwrap());
    }

    #[test]
    fn lagrangian_quotient_matches(a in group(16)) {
        let w = standard_module(&a);
        for l in w.lagrangians(EnumLimit::DEFAULT).unwrap() {
            prop_assert_eq!(l.order() * l.order(), w.group().order());
            let q = w.quotient_by_lagrangian(&l).unwrap();
            prop_assert_eq!(q.invariants(), l.invariants());
        }
    }

    #[test]
    fn isotropic_iff_restriction_vanishes(a in group(9)) {
        let w = standard_module(&a);
        let mut iso = BTreeSet::new();
        w.for_each_isotropic(EnumLimit::DEFAULT, |s| {
            iso.insert(s.hnf().to_vec());
            ControlFlow::Continue(())
        }).unwrap();
        let h = w.group().clone();
        splitbound_core::finabel::for_each_subgroup(&h, EnumLimit::DEFAULT, |s| {
            let r = w.restrict(&s).unwrap();
            let vanishes = r.radical().order() == s.order();
            assert_eq!(vanishes, w.is_isotropic(&s).unwrap());
            assert_eq!(vanishes, iso.contains(s.hnf()));
            ControlFlow::Continue(())
        }).unwrap();
    }

    #[test]
    fn max_isotropic_squares_to_order(a in group(16)) {
        let w = standard_module(&a);
        let m = w.max_isotropic(EnumLimit::DEFAULT).unwrap();
        prop_assert_eq!(m.order * m.order, w.group().order());
    }

    #[test]
    fn braiding_identity(a in group(12), s in prop::collection::vec(0u64..100, 4)) {
        let x = element(&a, &s[0..]);
        let chi = element(&a.dual(), &s[1..]);
        let p = perm_matrix(&a, &x).unwrap();
        let d = diag_matrix(&a, &chi).unwrap();
        let c = commutator(&d, &p).unwrap();
        prop_assert!(c.is_scalar());
        let expected = a.eval_character(&chi, &x).unwrap();
        let got = c.scalar_exponent().unwrap();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn subgroup_and_quotient_types_agree(a in prop_oneof![p_power(2, 4), p_power(3, 3), group(36)]) {
        let subs = subgroup_types(&a, EnumLimit::DEFAULT).unwrap();
        let mut quots = std::collections::BTreeMap::new();
        splitbound_core::finabel::for_each_subgroup(&a, EnumLimit::DEFAULT, |s| {
            *quots.entry(quotient(&a, &s).unwrap().invariants().to_vec()).or_insert(0u64) += 1;
            ControlFlow::Continue(())
        }).unwrap();
        prop_assert_eq!(subs, quots);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn f2_count_matches_normal_form(dim in 1usize..=10, seed in any::<u64>()) {
        let mut x = seed;
        let rows: Vec<u32> = (0..dim)
            .map(|i| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((x >> 33) as u32) & !((1u32 << i) - 1) & ((1u32 << dim) - 1)
            })
            .collect();
        let q = F2QuadForm::new(dim, rows).unwrap();
        let blocks = q.decompose().unwrap();
        let (zeros, ones) = count_by_recursion(&blocks).unwrap();
        prop_assert_eq!(zeros + ones, 1u64 << dim);
        prop_assert_eq!(q.count_anisotropic().unwrap(), ones);
        let d = q.decompose_with_basis().unwrap();
        prop_assert_eq!(q.transform(&d.basis).unwrap(), F2QuadForm::from_blocks(&d.blocks).unwrap());
    }

    #[test]
    fn obstruction_invariants(p in prop::sample::select(vec![2u64, 3, 5]), r in 1u32..=14, e in 0u32..=3) {
        let q = ObstructionQuery::new(p, r, e).unwrap();
        let m = min_splitting_exponent(&q).unwrap();
        prop_assert!(m.total >= f_e(r, e));
        prop_assert_eq!(m.f_e, f_e(r, e));
        prop_assert!(ta_feasible(&q, &m.witness));
        prop_assert_eq!(m.witness.total(), m.total);
        prop_assert!(f_e(r, e + 1) <= f_e(r, e));
        if e < r {
            let t = thm13_bound(&q).unwrap();
            prop_assert_eq!(t.bound, p.pow(t.exponent));
            prop_assert_eq!(t.exponent, (2 * r).saturating_sub(2 * e + 2));
        } else {
            prop_assert!(thm13_bound(&q).is_err());
        }
    }

    #[test]
    fn tits_depth_consistency_is_divisibility(idx in 0usize..9, n in 4u32..12, sc in any::<bool>(), p in prop::sample::select(vec![2u64, 3, 5, 7]), d in 0u32..8) {
        let series = liedata::Series::ALL[idx];
        let rank = if series.is_classical() { Some(n) } else { None };
        let g = liedata::GroupDescriptor::new(series, rank, sc).unwrap();
        match liedata::tits_n(&g) {
            Ok(t) => prop_assert_eq!(liedata::depth_consistency(&g, p, d).unwrap(), t % p.pow(d) == 0),
            Err(e) => prop_assert_eq!(e.code(), "unsupported-type"),
        }
    }
}

#[test]
fn tables_round_trip() {
    let t = Tables::embedded().unwrap();
    assert_eq!(Tables::parse(&t.to_text()).unwrap(), t);
}

#[test]
fn depth_equals_rank_for_small_p_groups() {
    for (p, f) in [(2u64, vec![2u64]), (2, vec![4]), (2, vec![2, 2]), (2, vec![8]), (3, vec![3]), (3, vec![9])] {
        let g = FinAbGroup::new(&f).unwrap();
        let (mut o, mut r) = (g.order(), 0);
        while o > 1 {
            o /= p;
            r += 1;
        }
        let h = PglSubgroup::heisenberg_image(&g, EnumLimit::DEFAULT).unwrap();
        assert_eq!(h.depth(EnumLimit::DEFAULT).unwrap(), r, "{f:?}");
    }
}
