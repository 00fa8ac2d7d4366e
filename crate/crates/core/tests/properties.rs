use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pubmarket::dynamics::{
    br_dynamics, replicator_simulate, ReplicatorParams, ShareState, Terminal, UpdateRule,
};
use pubmarket::game::{DominanceKind, IedsPolicy, NormalFormGame, PlayerOrder, StrategyProfile};
use pubmarket::mixed::{is_equilibrium, mixed_2x2, support_enumeration, MixedProfile};
use pubmarket::ordinal::{
    canonical_instantiation, linear_extensions, sample_in_extension, Constraint,
    OrderingConstraintSet,
};
use pubmarket::Rational;

fn game(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = NormalFormGame> {
    (1..=max, 1..=max).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec((lo..=hi, lo..=hi), n), m)
            .prop_map(|cells| NormalFormGame::from_integers(&cells).unwrap())
    })
}

fn game_2x2() -> impl Strategy<Value = NormalFormGame> {
    prop::collection::vec(prop::collection::vec((-5i64..=5, -5i64..=5), 2), 2)
        .prop_map(|cells| NormalFormGame::from_integers(&cells).unwrap())
}

/// Random acyclic constraint set over `s0..s5`: relations only point from
/// lower to higher index, so no cycle can form.
fn constraints() -> impl Strategy<Value = OrderingConstraintSet> {
    prop::collection::vec((0usize..6, 0usize..6, prop::bool::weighted(0.15)), 0..8)
        .prop_map(|edges| {
            let mut set = OrderingConstraintSet::new();
            set.add_chain(&["s0"]);
            for i in 1..6 {
                set.add_chain(&[format!("s{i}").as_str()]);
            }
            for (a, b, tie) in edges {
                if a < b {
                    let (x, y) = (format!("s{a}"), format!("s{b}"));
                    set.add(if tie {
                        Constraint::eq(&x, &y)
                    } else {
                        Constraint::gt(&x, &y)
                    });
                }
            }
            set
        })
        .prop_filter("consistent", |set| set.validate().is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strict_ieds_keeps_every_pure_nash(g in game(4, -4, 4)) {
        for order in [PlayerOrder::RowFirst, PlayerOrder::ColFirst, PlayerOrder::Alternating] {
            let (_, t) = g.ieds(IedsPolicy::new(DominanceKind::Strict, order));
            for p in g.pure_nash() {
                prop_assert!(t.surviving_rows.contains(&p.row) && t.surviving_cols.contains(&p.col));
            }
        }
    }

    #[test]
    fn weak_ieds_solution_is_nash(g in game(3, -3, 3)) {
        let (_, t) = g.ieds(IedsPolicy::new(DominanceKind::Weak, PlayerOrder::RowFirst));
        if let Some(p) = t.solution() {
            prop_assert!(g.pure_nash().contains(&p));
        }
    }

    #[test]
    fn mixed_2x2_agrees_with_support_enumeration_when_nondegenerate(g in game_2x2()) {
        let closed = mixed_2x2(&g).unwrap();
        for e in &closed {
            prop_assert!(is_equilibrium(&g, &e.profile));
        }
        let all_distinct = |col: bool| (0..2).all(|k| {
            let (a, b) = if col {
                (g.cell(StrategyProfile::new(k, 0)).1.clone(), g.cell(StrategyProfile::new(k, 1)).1.clone())
            } else {
                (g.cell(StrategyProfile::new(0, k)).0.clone(), g.cell(StrategyProfile::new(1, k)).0.clone())
            };
            a != b
        });
        if all_distinct(false) && all_distinct(true) {
            let enumerated = support_enumeration(&g).unwrap();
            let a: Vec<MixedProfile> = closed.iter().map(|e| e.profile.clone()).collect();
            let b: Vec<MixedProfile> = enumerated.iter().map(|e| e.profile.clone()).collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn br_fixed_points_are_pure_nash(g in game(3, -3, 3), r in 0usize..3, c in 0usize..3, col_first in any::<bool>()) {
        let (m, n) = g.shape();
        let start = StrategyProfile::new(r % m, c % n);
        let rule = if col_first { UpdateRule::AlternatingColFirst } else { UpdateRule::AlternatingRowFirst };
        let t = br_dynamics(&g, start, rule, 50).unwrap();
        match t.terminal {
            Terminal::FixedPoint { profile } => prop_assert!(g.pure_nash().contains(&profile)),
            Terminal::Cycle { period, first_index } => {
                prop_assert_eq!(&t.path[first_index], &t.path[first_index + period]);
            }
            Terminal::Truncated => prop_assert!(false, "finite game must settle within 50 steps"),
        }
    }

    #[test]
    fn canonical_and_sampled_values_respect_their_extension(set in constraints(), seed in any::<u64>()) {
        let exts = linear_extensions(&set, 10_000).unwrap();
        prop_assert!(!exts.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in exts.iter().take(20) {
            let canon = canonical_instantiation(e);
            prop_assert!(canon.satisfies(&set));
            prop_assert_eq!(&e.induced_by(&canon).unwrap(), e);
            let sample = sample_in_extension(e, &mut rng);
            prop_assert!(sample.satisfies(&set));
            prop_assert_eq!(&e.induced_by(&sample).unwrap(), e);
        }
    }

    #[test]
    fn extensions_are_distinct(set in constraints()) {
        let exts = linear_extensions(&set, 10_000).unwrap();
        for (i, a) in exts.iter().enumerate() {
            for b in &exts[i + 1..] {
                prop_assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn replicator_stays_on_simplex(
        g in game(3, 1, 9).prop_filter("3x3", |g| g.shape() == (3, 3)),
        raw in prop::array::uniform3(0.0f64..1.0),
        herd in 0.0f64..20.0,
    ) {
        let s: f64 = raw.iter().sum();
        prop_assume!(s > 1e-6);
        let init = ShareState::new(raw[0] / s, raw[1] / s, raw[2] / s);
        let t = replicator_simulate(&g, init, ReplicatorParams { herd_weight: herd, payoff_shift: 0.0, steps: 100 }).unwrap();
        for st in &t.states {
            prop_assert!((st.sum() - 1.0).abs() <= 1e-12);
            prop_assert!(st.shares.iter().all(|x| *x >= 0.0));
        }
        // Extinct models stay extinct.
        for k in 0..3 {
            if init.shares[k] == 0.0 {
                prop_assert!(t.states.iter().all(|st| st.shares[k] == 0.0));
            }
        }
    }

    #[test]
    fn rational_text_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
        let r = Rational::new(n, d);
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), r);
    }
}
