use gridreach::circle::{crosses, semi_crosses, separates};
use gridreach::separator::Strategy as Separator;
use gridreach::{
    bfs_reachable, gen_random, parse_grid, solve, write_grid, InnerSolver, Level, Mode, SolveConfig,
};
use proptest::prelude::*;

fn chord(n: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..n, 0..n).prop_filter("endpoints differ", |(a, b)| a != b)
}

fn level() -> impl Strategy<Value = Level> {
    prop_oneof![
        Just(Level::Unreached),
        Just(Level::Infinite),
        (-20i64..20, 0u32..8).prop_map(|(i, t)| Level::finite(i, t)),
    ]
}

proptest! {
    #[test]
    fn crossing_implies_semi_crossing(n in 4usize..12, seed in any::<u64>()) {
        let pick = |k: u64| ((seed >> (8 * k)) as usize % n, (seed >> (8 * k + 4)) as usize % n);
        let (e1, e2) = (pick(0), pick(1));
        prop_assume!(e1.0 != e1.1 && e2.0 != e2.1);
        prop_assert_eq!(crosses(n, e1, e2), crosses(n, e2, e1));
        if crosses(n, e1, e2) {
            prop_assert!(semi_crosses(n, e1, e2));
        }
    }

    #[test]
    fn separation_is_symmetric(e1 in chord(9), e2 in chord(9), e3 in chord(9)) {
        prop_assert_eq!(separates(9, e1, e2, e3), separates(9, e1, e3, e2));
    }

    #[test]
    fn level_order_is_total_and_shift_monotone(a in level(), b in level(), d in -5i64..5) {
        prop_assert!(a <= b || b < a);
        if a.int_part().is_some() && b.int_part().is_some() && a < b {
            prop_assert!(a.shifted(d) < b.shifted(d));
        }
    }

    #[test]
    fn text_round_trip(w in 1u32..9, h in 1u32..9, density in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assume!(w * h >= 2);
        let g = gen_random(w, h, density, seed).unwrap();
        let text = write_grid(&g);
        prop_assert_eq!(write_grid(&parse_grid(&text).unwrap()), text);
    }

    #[test]
    fn solve_agrees_with_bfs(
        w in 2u32..9,
        h in 2u32..9,
        density in 0.1f64..0.9,
        seed in any::<u64>(),
        streamed in any::<bool>(),
        separator_inner in any::<bool>(),
        cycle in any::<bool>(),
    ) {
        let g = gen_random(w, h, density, seed).unwrap();
        let mut cfg = SolveConfig {
            mode: if streamed { Mode::Streamed } else { Mode::Materialized },
            inner: if separator_inner { InnerSolver::Separator } else { InnerSolver::Bfs },
            ..SolveConfig::default()
        };
        cfg.reach.strategy = if cycle { Separator::FundamentalCycle } else { Separator::BfsLayer };
        cfg.reach.cutoff = 8;
        prop_assert_eq!(solve(&g, &cfg).unwrap().answer, bfs_reachable(&g, g.s(), g.t()));
    }
}

#[test]
fn edge_count_concentrates() {
    for (density, seed) in [(0.3, 1u64), (0.5, 2), (0.8, 3)] {
        let g = gen_random(100, 100, density, seed).unwrap();
        let m = g.candidate_edge_count() as f64;
        let sigma = (m * density * (1.0 - density)).sqrt();
        let got = g.edge_count() as f64;
        assert!(got >= 1e4 || density < 0.5);
        assert!(
            (got - m * density).abs() <= 5.0 * sigma,
            "density {density}: {got} edges of {m}"
        );
    }
}

#[test]
fn two_by_one_queries() {
    let g = parse_grid("grid 2 1\ns 0 0\nt 1 0\ne 0 0 1 0\n").unwrap();
    assert!(solve(&g, &SolveConfig::default()).unwrap().answer);
    let back = parse_grid("grid 2 1\ns 1 0\nt 0 0\ne 0 0 1 0\n").unwrap();
    assert!(!solve(&back, &SolveConfig::default()).unwrap().answer);
}

#[test]
fn answer_is_independent_of_the_block_side() {
    for seed in 0..20 {
        let g = gen_random(14, 11, 0.6, seed).unwrap();
        let want = bfs_reachable(&g, g.s(), g.t());
        for side in [2, 3, 5, 14] {
            let cfg = SolveConfig {
                block_side: Some(side),
                ..SolveConfig::default()
            };
            assert_eq!(
                solve(&g, &cfg).unwrap().answer,
                want,
                "seed {seed} side {side}"
            );
        }
    }
}
