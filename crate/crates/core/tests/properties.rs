use nosol_core::constructions::{behrend_set, is_3ap_free, lift, two_var_digits, LiftedSet};
use nosol_core::search::{
    greedy_set, max_digit_set, small_dependency_search, SearchConfig, SearchMode,
};
use nosol_core::{
    count_nontrivial_solutions, find_nontrivial_solution, is_dissociated, is_injective_map, is_primitive,
    make_symmetric, Certificate, DigitSet, Equation, Mode, SolutionQuery, Strategy as Route,
};
use proptest::prelude::*;

fn free(eq: &Equation, set: &[i64], mode: Mode) -> bool {
    let q = SolutionQuery::new(eq.clone(), set.to_vec())
        .unwrap()
        .with_mode(mode)
        .with_budget(u64::MAX);
    find_nontrivial_solution(&q).unwrap().is_none()
}

fn invariant() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec((-5i64..=5).prop_filter("nonzero", |&v| v != 0), 1..5).prop_filter_map(
        "closing coefficient is zero",
        |mut c| {
            let last = -c.iter().sum::<i64>();
            (last != 0).then(|| {
                c.push(last);
                c
            })
        },
    )
}

fn small_set() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-12i64..20, 1..8).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strategies_agree(coeffs in invariant(), set in small_set(), distinct in any::<bool>()) {
        let eq = Equation::new(coeffs).unwrap();
        let mode = if distinct { Mode::Distinct } else { Mode::All };
        let run = |s: Route| {
            let q = SolutionQuery::new(eq.clone(), set.clone()).unwrap().with_mode(mode).with_strategy(s);
            (find_nontrivial_solution(&q).unwrap(), count_nontrivial_solutions(&q).unwrap())
        };
        let (w0, c0) = run(Route::Dfs);
        for s in [Route::MeetInMiddle, Route::Naive, Route::Auto] {
            let (w, c) = run(s);
            // Every route returns the same lexicographically first witness.
            prop_assert_eq!(&w, &w0);
            prop_assert_eq!(c, c0);
        }
        prop_assert_eq!(w0.is_some(), c0.ordered > 0);
    }

    #[test]
    fn lift_count_matches_members(base in 2u64..12, mask in 1u32..(1 << 11), n in 1u64..3000) {
        let digits: Vec<i64> = (0..base as i64).filter(|&d| d == 0 || mask & (1 << d) != 0).collect();
        let s = LiftedSet::from_digits(base, &digits, n).unwrap();
        let members = s.to_vec();
        prop_assert_eq!(members.len() as u64, s.count());
        let brute: Vec<i64> = (1..=n as i64).filter(|&x| s.contains(x)).collect();
        prop_assert_eq!(members, brute);
    }

    #[test]
    fn primitive_iff_dissociated(a in prop::collection::vec(1i64..40, 1..7)) {
        prop_assert_eq!(is_primitive(&make_symmetric(&a).unwrap()).unwrap(), is_dissociated(&a).unwrap());
    }

    #[test]
    fn certificate_json_round_trip(a in 1i64..8, extra in 1i64..8) {
        prop_assume!(num_integer::gcd(a, a + extra) == 1);
        let cert = two_var_digits(a, a + extra).unwrap();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back, cert);
    }

    #[test]
    fn dependency_search_is_minimal(a in 1i64..40, b in 1i64..40, c in 1i64..40, m in 1u64..6) {
        let found = small_dependency_search(a, b, c, m).unwrap();
        let mi = m as i64;
        let mut best: Option<u64> = None;
        for i in -mi..=mi {
            for j in -mi..=mi {
                for k in -mi..=mi {
                    if (i, j, k) != (0, 0, 0) && i * a + j * b + k * c == 0 {
                        let mag = [i, j, k].iter().map(|v| v.unsigned_abs()).max().unwrap();
                        best = Some(best.map_or(mag, |b: u64| b.min(mag)));
                    }
                }
            }
        }
        prop_assert_eq!(found.map(|d| d.magnitude()), best);
        if let Some(d) = found {
            prop_assert!(d.holds_for(a, b, c));
        }
    }

    #[test]
    fn injective_map_matches_sums(a in prop::collection::vec(1i64..12, 1..4), b in 1u64..7) {
        let mut sums = std::collections::HashSet::new();
        let mut ok = true;
        let digits = b as i64;
        let total = digits.pow(a.len() as u32);
        for idx in 0..total {
            let mut t = idx;
            let mut s = 0;
            for &g in &a {
                s += g * (t % digits);
                t /= digits;
            }
            ok &= sums.insert(s);
        }
        prop_assert_eq!(is_injective_map(&a, b, u64::MAX).unwrap(), ok);
    }
}

/// Largest solution-free subset of `{0..top}` containing 0, by brute force
/// over every subset; ties broken by lexicographic order.
fn brute_max(eq: &Equation, top: i64) -> Vec<i64> {
    let mut best: Vec<i64> = vec![0];
    for mask in 0u32..(1 << top) {
        if (mask.count_ones() as usize) + 1 < best.len() {
            continue;
        }
        let set: Vec<i64> = std::iter::once(0).chain((1..=top).filter(|&x| mask & (1 << (x - 1)) != 0)).collect();
        if set.len() >= best.len() && free(eq, &set, Mode::All) && (set.len() > best.len() || set < best) {
            best = set;
        }
    }
    best
}

#[test]
fn exact_search_matches_subset_enumeration() {
    for gens in [vec![1, 2], vec![1, 1], vec![1, 3], vec![2, 3], vec![1, 2, 4]] {
        let eq = make_symmetric(&gens).unwrap();
        let s = eq.side_sum();
        for l in (2..=30u64).filter(|l| (l - 1) / s >= 1) {
            let top = ((l - 1) / s) as i64;
            if top > 12 {
                continue;
            }
            let r = max_digit_set(&eq, l, &SearchConfig::default(), None).unwrap();
            assert!(r.exhausted);
            assert_eq!(r.digits, brute_max(&eq, top), "gens {gens:?}, L {l}");
        }
    }
}

#[test]
fn anytime_and_greedy_are_sound() {
    let eq = make_symmetric(&[3, 5, 9]).unwrap();
    let exact = max_digit_set(&eq, 700, &SearchConfig::default(), None).unwrap();
    for (mode, budget) in [(SearchMode::Greedy, 1), (SearchMode::Anytime, 50), (SearchMode::Anytime, 5_000)] {
        let cfg = SearchConfig { mode, budget, ..SearchConfig::default() };
        let r = max_digit_set(&eq, 700, &cfg, None).unwrap();
        assert!(free(&eq, &r.digits, Mode::All));
        assert!(r.digits.len() <= exact.digits.len());
    }
}

#[test]
fn anytime_improves_with_budget() {
    let eq = make_symmetric(&[43, 69, 70]).unwrap();
    let mut prev = 0;
    for budget in [1, 100, 10_000, 1_000_000] {
        let cfg = SearchConfig { mode: SearchMode::Anytime, budget, ..SearchConfig::default() };
        let r = max_digit_set(&eq, 5825, &cfg, None).unwrap();
        assert!(r.digits.len() >= prev);
        prev = r.digits.len();
    }
    assert_eq!(prev, 11);
}

#[test]
fn greedy_sets_are_solution_free() {
    for gens in [vec![1, 1], vec![1, 2], vec![1, 3, 4]] {
        let eq = make_symmetric(&gens).unwrap();
        let g = greedy_set(&eq, 60, u64::MAX).unwrap();
        assert!(g.complete);
        assert!(free(&eq, &g.set, Mode::All));
    }
}

#[test]
fn lifted_sets_are_solution_free() {
    for (a, b) in [(1, 2), (2, 3), (1, 4)] {
        let cert = two_var_digits(a, b).unwrap();
        let set = lift(&cert, 400).unwrap().to_vec();
        assert!(free(cert.equation(), &set, Mode::All), "({a},{b})");
    }
}

#[test]
fn behrend_sets_avoid_progressions() {
    for m in [1u64, 5, 10, 40, 200, 1000] {
        let s = behrend_set(m);
        assert!(is_3ap_free(&s));
        assert!(s.iter().all(|&x| 0 <= x && x as u64 <= m));
        let three_ap = Equation::new(vec![1, 1, -2]).unwrap();
        if s.len() <= 40 {
            assert!(free(&three_ap, &s, Mode::All), "m={m}");
        }
    }
}

#[test]
fn minimal_base_is_minimal() {
    let eq = make_symmetric(&[2, 5]).unwrap();
    let ds = DigitSet::with_minimal_base(eq.clone(), vec![0, 1, 3]).unwrap();
    assert!(ds.no_carry_holds());
    let smaller = DigitSet::new(eq, ds.base() - 1, vec![0, 1, 3]).unwrap();
    assert!(!smaller.no_carry_holds());
}
