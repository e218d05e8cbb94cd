mod oracles;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use schubert_core::covers::{covers, lr_coefficient, monk_covers, Condition, LrCache, Partition};
use schubert_core::geometry::{build_system, Param, SystemOptions};
use schubert_core::indexing::{
    alpha_of_w, bruhat_leq, dimension, enumerate_indices, w_of_alpha, FlagPermutation, FlagShape, GrassIndex, Index, Space,
};
use schubert_core::multposet::{build_poset, ProblemSpec};
use schubert_core::solver::{solve, TrackerConfig};

fn space_strategy() -> impl Strategy<Value = Space> {
    prop_oneof![
        (2usize..=5).prop_flat_map(|n| {
            proptest::collection::btree_set(1..n, 1..n).prop_map(move |d| Space::Flag { n, d: d.into_iter().collect() })
        }),
        (2usize..=6).prop_flat_map(|n| (1..n).prop_map(move |k| Space::Grassmannian { k, n })),
        (1usize..=4).prop_map(|n| Space::Orthogonal { n }),
        (1usize..=4).prop_map(|n| Space::Lagrangian { n }),
    ]
}

fn simple_condition(space: &Space, pick: usize) -> Condition {
    match space {
        Space::Flag { d, .. } => Condition::Stage(1 + pick % d.len()),
        Space::Grassmannian { .. } => Condition::Schur(Partition::new(vec![1]).unwrap()),
        _ => Condition::Simple,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_text_round_trips(space in space_strategy(), pick in any::<prop::sample::Index>()) {
        let all = enumerate_indices(&space).unwrap();
        let w = pick.get(&all);
        let text = w.to_string();
        prop_assert_eq!(&space.parse_index(&text).unwrap(), w);
    }

    #[test]
    fn covers_lie_below_and_drop_codimension(space in space_strategy(), pick in any::<prop::sample::Index>(), c in 0usize..8) {
        let all = enumerate_indices(&space).unwrap();
        let w = pick.get(&all);
        let condition = simple_condition(&space, c);
        let list = covers(&space, w, &condition, &mut LrCache::new()).unwrap();
        for (v, m) in &list.covers {
            prop_assert!(*m >= 1);
            prop_assert!(bruhat_leq(v, w, &space).unwrap());
            prop_assert!(!bruhat_leq(w, v, &space).unwrap());
            prop_assert_eq!(dimension(v) + condition.codimension(), dimension(w));
        }
    }

    #[test]
    fn bruhat_order_is_a_partial_order(space in space_strategy(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let all = enumerate_indices(&space).unwrap();
        let (u, v, w) = (a.get(&all), b.get(&all), c.get(&all));
        prop_assert!(bruhat_leq(u, u, &space).unwrap());
        if bruhat_leq(u, v, &space).unwrap() && bruhat_leq(v, u, &space).unwrap() {
            prop_assert_eq!(u, v);
        }
        if bruhat_leq(u, v, &space).unwrap() && bruhat_leq(v, w, &space).unwrap() {
            prop_assert!(bruhat_leq(u, w, &space).unwrap());
        }
        if bruhat_leq(u, v, &space).unwrap() {
            prop_assert!(dimension(u) <= dimension(v));
        }
    }

    #[test]
    fn grassmannian_permutations_round_trip(n in 2usize..=8, k_pick in 0usize..8, pick in any::<prop::sample::Index>()) {
        let k = 1 + k_pick % (n - 1);
        let all = enumerate_indices(&Space::Grassmannian { k, n }).unwrap();
        let alpha: &GrassIndex = pick.get(&all).as_grass().unwrap();
        let w = w_of_alpha(alpha).unwrap();
        prop_assert_eq!(&alpha_of_w(&w, 1).unwrap(), alpha);
        prop_assert_eq!(w.length(), alpha.dimension());
    }

    #[test]
    fn monk_matches_oracle_on_full_flags(n in 2usize..=7, seed in any::<u64>(), stage_pick in 0usize..7) {
        let d: Vec<usize> = (1..n).collect();
        let mut word: Vec<usize> = (1..=n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            word.swap(i, (s >> 33) as usize % (i + 1));
        }
        let stage = 1 + stage_pick % d.len();
        let w = FlagPermutation::new(word.clone(), FlagShape::new(n, d.clone()).unwrap()).unwrap();
        let got: Vec<Vec<usize>> = monk_covers(&w, stage).unwrap().covers.iter().map(|(v, _)| v.as_perm().unwrap().word().to_vec()).collect();
        prop_assert_eq!(got, oracles::monk_down(&word, &d, stage));
    }

    #[test]
    fn lr_is_symmetric(a in proptest::collection::vec(0usize..=4, 3), b in proptest::collection::vec(0usize..=3, 3), c in proptest::collection::vec(0usize..=5, 3)) {
        let p = |mut v: Vec<usize>| { v.sort_unstable_by(|x, y| y.cmp(x)); Partition::new(v).unwrap() };
        let (lam, mu, nu) = (p(a), p(b), p(c));
        prop_assert_eq!(lr_coefficient(&nu, &lam, &mu), lr_coefficient(&nu, &mu, &lam));
    }

    #[test]
    fn deg_satisfies_its_recursion(k in 1usize..=3, extra in 1usize..=3, seed in any::<u64>()) {
        let n = k + extra;
        let space = Space::Grassmannian { k, n };
        let boxes: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![1, 1], vec![2, 1]];
        let mut left = k * extra;
        let mut s = seed;
        let mut conditions = Vec::new();
        while left > 0 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mu = &boxes[(s >> 33) as usize % boxes.len()];
            let size: usize = mu.iter().sum();
            let mu = if size <= left && mu.len() <= k && mu[0] <= extra { mu.clone() } else { vec![1] };
            left -= mu.iter().sum::<usize>();
            conditions.push(Condition::Schur(Partition::new(mu).unwrap()));
        }
        let p = build_poset(&ProblemSpec::new(space, conditions)).unwrap();
        for w in p.nodes() {
            let below: BigUint = p.edges_into(w).map(|e| p.deg(&e.from) * e.multiplicity).sum();
            if p.rank_of(w) == Some(0) {
                prop_assert_eq!(p.deg(w), BigUint::from(1u32));
            } else {
                prop_assert_eq!(p.deg(w), below);
            }
            prop_assert!(p.odd(w) <= p.deg(w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn real_systems_have_conjugate_closed_solutions(raw in proptest::collection::btree_set(-40i64..40, 4)) {
        let params: Vec<Param> = raw.into_iter().map(|x| Param::Finite(BigRational::new(x.into(), 4.into()))).collect();
        prop_assume!(!params.contains(&Param::int(0)));
        let spec = ProblemSpec::repeated(Space::Grassmannian { k: 2, n: 4 }, Condition::Schur(Partition::new(vec![1]).unwrap()), 4);
        let sys = build_system(&spec, &params, &SystemOptions::default()).unwrap();
        let set = solve(&sys, &TrackerConfig::default()).unwrap();
        prop_assert_eq!(set.total(), 2);
        prop_assert_eq!(set.n_real + 2 * set.n_pairs, set.total());
        // distinct real osculation points make every solution real here
        prop_assert_eq!(set.n_real, 2);
    }

    #[test]
    fn lagrangian_plane_has_no_real_points(s in -30i64..30, t in -30i64..30) {
        prop_assume!(s != t);
        let space = Space::Lagrangian { n: 2 };
        let target: Index = space.parse_index("2").unwrap();
        let spec = ProblemSpec::repeated(space, Condition::Simple, 2).with_target(target);
        let sys = build_system(&spec, &[Param::int(s), Param::int(t)], &SystemOptions::default()).unwrap();
        let set = solve(&sys, &TrackerConfig::default()).unwrap();
        prop_assert_eq!((set.total(), set.n_real, set.n_pairs), (2, 0, 1));
    }
}

#[test]
fn oracle_self_checks() {
    assert_eq!(oracles::pieri(&[1], 1), vec![vec![1, 1], vec![2]]);
    assert_eq!(oracles::grassmann_power_top(2, 4, &[1], 4), 2);
    assert_eq!(oracles::isotropic_power_top(2, true), 2);
    assert_eq!(oracles::isotropic_power_top(3, false), 2);
    assert_eq!(oracles::flag_product_top(3, &[1, 2], &[1, 1, 2]), 1);
}
