mod common;

use chaotic_iterations::graph::{build_gamma, find_strategy_path, function_from_index, is_chaotic};
use chaotic_iterations::hash::{
    certify, invert_post_treatment, post_treatment, ChaoticHasher, Digest, HashKey, PostFunction,
    StreamHasher,
};
use chaotic_iterations::metric::{continuity_holds_for, distance};
use chaotic_iterations::{
    ci_step_subset, gf_iterate, parse_truth_table, trajectory, write_truth_table, BooleanMap,
    StateVector, Strategy as Schedule, StrategyTerm, SystemPoint, UpdateFunction,
};
use common::{conjugate, strongly_connected_by_reachability, table_of};
use proptest::prelude::*;

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|b| StateVector::from_bits(&b).unwrap())
}

fn function(n: usize) -> impl Strategy<Value = UpdateFunction> {
    proptest::collection::vec(0u32..1 << n, 1 << n)
        .prop_map(move |t| UpdateFunction::from_table(n, t).unwrap())
}

fn unary_word(n: usize, len: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(1..=n, len)
}

#[test]
fn gamma_has_fixed_out_degree_for_all_small_functions() {
    for n in 1..=2 {
        for index in 0..1u64 << (n << n) {
            let g = build_gamma(&function_from_index(n, index).unwrap()).unwrap();
            assert_eq!(g.vertex_count(), 1 << n);
            assert_eq!(g.arc_count(), n << n);
            for x in 0..1u32 << n {
                assert_eq!(g.successors(x).len(), n);
            }
        }
    }
}

#[test]
fn scc_and_reachability_agree_on_every_two_cell_function() {
    for index in 0..256 {
        let f = function_from_index(2, index).unwrap();
        assert_eq!(f.table(), table_of(2, index).as_slice());
        assert_eq!(
            is_chaotic(&f).unwrap(),
            strongly_connected_by_reachability(2, &table_of(2, index))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_arcs_differ_from_source_in_at_most_one_cell(f in function(4)) {
        let g = build_gamma(&f).unwrap();
        for arc in g.arcs() {
            let diff = (arc.source ^ arc.target).count_ones();
            prop_assert!(diff <= 1);
            if diff == 1 {
                prop_assert_eq!(arc.source ^ arc.target, 1 << (arc.index - 1));
            }
        }
    }

    #[test]
    fn chaos_is_invariant_under_relabeling(
        f in function(3),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
    ) {
        prop_assert_eq!(is_chaotic(&f).unwrap(), is_chaotic(&conjugate(&f, &perm)).unwrap());
    }

    #[test]
    fn scc_matches_reachability_oracle(f in function(3)) {
        prop_assert_eq!(
            is_chaotic(&f).unwrap(),
            strongly_connected_by_reachability(3, f.table())
        );
    }

    #[test]
    fn strategy_paths_replay(f in function(4), x in state(4), y in state(4)) {
        match find_strategy_path(&f, &x, &y).unwrap() {
            Some(s) => {
                let len = s.remaining().unwrap();
                prop_assert!(len < 16);
                let states = trajectory(&f, &x, &s, len).unwrap();
                prop_assert_eq!(states.last().unwrap(), &y);
            }
            None => prop_assert!(!is_chaotic(&f).unwrap()),
        }
    }

    #[test]
    fn chaotic_functions_connect_every_pair(x in state(5), y in state(5)) {
        let f0 = chaotic_iterations::make_negation(5).unwrap();
        prop_assert!(find_strategy_path(&f0, &x, &y).unwrap().is_some());
    }

    #[test]
    fn trajectory_matches_iterated_gf(f in function(3), x in state(3), w in unary_word(3, 12)) {
        let s = Schedule::unary(3, &w).unwrap();
        let states = trajectory(&f, &x, &s, w.len()).unwrap();
        let p = SystemPoint::new(s, x).unwrap();
        for (m, expected) in states.iter().enumerate() {
            prop_assert_eq!(&gf_iterate(&p, &f, m).unwrap().state, expected);
        }
    }

    #[test]
    fn subset_steps_touch_only_their_cells(
        f in function(4),
        x in state(4),
        subset in proptest::sample::subsequence(vec![1usize, 2, 3, 4], 0..=4),
    ) {
        let y = ci_step_subset(&f, &x, &subset).unwrap();
        let fx = f.apply(&x);
        for i in 1..=4 {
            let expected = if subset.contains(&i) { fx.get(i) } else { x.get(i) };
            prop_assert_eq!(y.get(i), expected);
        }
    }

    #[test]
    fn distance_is_a_metric(
        a in (unary_word(6, 16), state(6)),
        b in (unary_word(6, 16), state(6)),
        c in (unary_word(6, 16), state(6)),
    ) {
        let pt = |(w, e): &(Vec<usize>, StateVector)| {
            SystemPoint::new(Schedule::unary(6, w).unwrap(), e.clone()).unwrap()
        };
        let (x, y, z) = (pt(&a), pt(&b), pt(&c));
        let dxy = distance(&x, &y, 16).unwrap();
        prop_assert_eq!(dxy, distance(&y, &x, 16).unwrap());
        prop_assert!(distance(&x, &x, 16).unwrap().is_zero());
        prop_assert_eq!(dxy.is_zero(), a == b);
        prop_assert!(
            distance(&x, &z, 16).unwrap().total_numerator()
                <= dxy.total_numerator() + distance(&y, &z, 16).unwrap().total_numerator()
        );
        prop_assert_eq!(dxy.integer_part(), a.1.hamming(&b.1).unwrap() as u64);
    }

    #[test]
    fn continuity_holds_pointwise(
        f in function(3),
        x in state(3),
        w in unary_word(3, 12),
        tail in unary_word(3, 12),
        k in 1usize..6,
    ) {
        // y shares state and the first k+1 terms with x
        let mut v = w.clone();
        v[k + 1..].copy_from_slice(&tail[k + 1..]);
        let p = SystemPoint::new(Schedule::unary(3, &w).unwrap(), x.clone()).unwrap();
        let q = SystemPoint::new(Schedule::unary(3, &v).unwrap(), x).unwrap();
        prop_assert!(continuity_holds_for(&f, &p, &q, k).unwrap());
    }

    #[test]
    fn truth_tables_roundtrip(f in (1usize..=6).prop_flat_map(function)) {
        prop_assert_eq!(parse_truth_table(&write_truth_table(&f)).unwrap(), f);
    }

    #[test]
    fn state_hex_roundtrip(n in 1usize..300, seed in any::<u64>()) {
        let bits: Vec<bool> = (0..n).map(|i| (seed.rotate_left(i as u32 % 64) ^ i as u64) & 1 == 1).collect();
        let s = StateVector::from_bits(&bits).unwrap();
        prop_assert_eq!(StateVector::from_hex(n, &s.to_hex()).unwrap(), s);
    }

    #[test]
    fn post_treatment_inverts(
        x in state(64),
        terms in proptest::collection::vec((1usize..=64).prop_map(StrategyTerm::Unary), 0..80),
    ) {
        let f = PostFunction::Negation;
        let d = Digest::from_state(x);
        let y = post_treatment(&d, &terms, &f).unwrap();
        prop_assert_eq!(invert_post_treatment(&y, &terms, &f).unwrap(), d);
    }

    #[test]
    fn bijective_table_functions_certify(perm in Just((0u32..16).collect::<Vec<_>>()).prop_shuffle()) {
        // f(x) = !x is certified for every term list; an arbitrary
        // permutation need not be
        let f = PostFunction::Table(UpdateFunction::from_table(4, perm).unwrap());
        let terms: Vec<StrategyTerm> = (1..=4).map(StrategyTerm::Unary).collect();
        if certify(&f, 4, &terms).is_ok() {
            let x = Digest::from_state(StateVector::from_index(4, 5).unwrap());
            let y = post_treatment(&x, &terms, &f).unwrap();
            prop_assert_eq!(invert_post_treatment(&y, &terms, &f).unwrap(), x);
        }
    }

    #[test]
    fn hash_is_deterministic_and_recoverable(message in proptest::collection::vec(any::<u8>(), 0..200)) {
        let key = HashKey::new([3u8; 16], [4u8; 16]).unwrap();
        let h = ChaoticHasher::new();
        let d = h.hash(&key, &message).unwrap();
        prop_assert_eq!(&d, &h.hash(&key, &message).unwrap());
        prop_assert_eq!(d.len(), 256);
        prop_assert_eq!(h.recover_inner(&key, &d).unwrap(), h.inner_hash(&key, &message));
    }

    #[test]
    fn stream_prefixes_are_stable(frames in proptest::collection::vec(state(256), 1..6)) {
        let key = HashKey::new([1u8; 16], [2u8; 16]).unwrap();
        let h = ChaoticHasher::new();
        let mut full = StreamHasher::new(&h, &key);
        let all: Vec<Digest> = frames.iter().map(|f| full.push(f).unwrap()).collect();
        let mut part = StreamHasher::new(&h, &key);
        for (f, d) in frames.iter().zip(&all).take(frames.len() - 1) {
            prop_assert_eq!(&part.push(f).unwrap(), d);
        }
    }
}
