use proptest::prelude::*;
use zerone::info::{Alphabet, Dist};
use zerone::mc::McConfig;
use zerone::renorm::{self, LocalRule, Line, StabilizationConfig};
use zerone::symmetry::{self, Config};

fn binary_rule(ell: usize, range: usize) -> impl Strategy<Value = LocalRule> {
    let width = 2 * (ell + range) + 1;
    prop::collection::vec(0usize..2, 1 << width)
        .prop_map(move |t| LocalRule::new(Alphabet::binary(), ell, range, t).unwrap())
}

fn any_rule() -> impl Strategy<Value = LocalRule> {
    prop_oneof![binary_rule(1, 0), binary_rule(1, 1), binary_rule(0, 1), binary_rule(2, 0)]
}

/// `a^n_k` straight from the recursive definition.
fn oracle(rule: &LocalRule, input: &dyn Fn(i64) -> usize, n: usize, k: i64) -> usize {
    if n == 0 {
        return input(k);
    }
    let (b, l, r) = (rule.block() as i64, rule.ell() as i64, rule.range() as i64);
    let args: Vec<usize> = (b * k - l - r..=b * k + l + r).map(|i| oracle(rule, input, n - 1, i)).collect();
    rule.apply(&args)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolve_matches_recursive_oracle(rule in any_rule(), n in 0usize..=3, seed in any::<u64>()) {
        let radius = renorm::required_radius(&rule, n).unwrap();
        let line = Line::from_fn(radius + 2, |k| usize::from(zerone::rng::bernoulli(seed, 0, k as u64, 0.5)));
        let input = |k: i64| line.get(k).unwrap();
        let levels = renorm::evolve(&line, &rule, n).unwrap();
        for (m, level) in levels.iter().enumerate() {
            for k in -level.radius()..=level.radius() {
                prop_assert_eq!(level.get(k).unwrap(), oracle(&rule, &input, m, k));
            }
        }
        prop_assert_eq!(renorm::trace_at_zero(&line, &rule, n).unwrap().values.last().copied(), Some(oracle(&rule, &input, n, 0)));
    }

    #[test]
    fn radius_recurrence(rule in any_rule(), n in 0usize..6) {
        let b = rule.block() as i64;
        let reach = (rule.ell() + rule.range()) as i64;
        let next = renorm::required_radius(&rule, n + 1).unwrap();
        prop_assert_eq!(next, b * renorm::required_radius(&rule, n).unwrap() + reach);
    }

    #[test]
    fn block_determines_value(n in 0usize..=6, seed in any::<u64>(), noise in any::<u64>()) {
        let rule = renorm::majority_rule();
        let s = renorm::required_radius(&rule, n).unwrap();
        let outer = s + 5;
        let base = Line::from_fn(outer, |k| usize::from(zerone::rng::bernoulli(seed, 0, k as u64, 0.5)));
        let noisy = Line::from_fn(outer, |k| {
            if k.abs() <= s { base.get(k).unwrap() } else { usize::from(zerone::rng::bernoulli(noise, 1, k as u64, 0.5)) }
        });
        let a = renorm::trace_at_zero(&base, &rule, n).unwrap().values;
        let b = renorm::trace_at_zero(&noisy, &rule, n).unwrap().values;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn block_exchange_swaps_adjacent_values(rule in binary_rule(1, 0), n in 0usize..=2, seed in any::<u64>()) {
        let s_up = renorm::required_radius(&rule, n + 1).unwrap();
        let stride = 3i64.pow(n as u32);
        let radius = s_up + 2 * stride;
        let line = Line::from_fn(radius, |k| usize::from(zerone::rng::bernoulli(seed, 0, k as u64, 0.5)));
        let config: Config = (-radius..=radius).map(|k| (k, line.get(k).unwrap())).collect();
        let pi = renorm::block_exchange(n, &rule).unwrap();
        let target: Vec<i64> = (-radius..=radius).collect();
        let moved = symmetry::apply_map(&config, &pi, &target).unwrap();
        let moved = Line::new(radius, moved.values().copied().collect()).unwrap();
        let before = renorm::evolve(&line, &rule, n).unwrap().pop().unwrap();
        let after = renorm::evolve(&moved, &rule, n).unwrap().pop().unwrap();
        prop_assert_eq!(after.get(0), before.get(1));
        prop_assert_eq!(after.get(1), before.get(0));
        for k in -before.radius()..=before.radius() {
            if k != 0 && k != 1 {
                prop_assert_eq!(after.get(k), before.get(k));
            }
        }
    }

    #[test]
    fn majority_exchange_invariance(n in 0usize..=3, seed in any::<u64>()) {
        let rule = renorm::majority_rule();
        let s = renorm::required_radius(&rule, n + 1).unwrap();
        let line = Line::from_fn(s, |k| usize::from(zerone::rng::bernoulli(seed, 0, k as u64, 0.5)));
        let config: Config = (-s..=s).map(|k| (k, line.get(k).unwrap())).collect();
        let target: Vec<i64> = (-s..=s).collect();
        let moved = symmetry::apply_map(&config, &renorm::block_exchange(n, &rule).unwrap(), &target).unwrap();
        let moved = Line::new(s, moved.values().copied().collect()).unwrap();
        prop_assert_eq!(
            renorm::trace_at_zero(&line, &rule, n + 1).unwrap().values[n + 1],
            renorm::trace_at_zero(&moved, &rule, n + 1).unwrap().values[n + 1]
        );
    }

    #[test]
    fn pushforward_stays_on_simplex(table in prop::collection::vec(0usize..3, 27), w in prop::collection::vec(0.01f64..1.0, 3)) {
        let rule = LocalRule::new(Alphabet::indexed(3), 1, 0, table).unwrap();
        let total: f64 = w.iter().sum();
        let d = Dist::from_probs(w.iter().map(|x| x / total).collect()).unwrap();
        for step in renorm::iterate_dist(&rule, &d, 4).unwrap() {
            prop_assert!(step.probs().iter().all(|&p| p >= 0.0));
            prop_assert!((step.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn site_map_is_pushforward(rule in binary_rule(1, 0), p in 0.0f64..=1.0) {
        let d = renorm::pushforward(&rule, &Dist::bernoulli(p).unwrap()).unwrap();
        prop_assert!((d.probs()[1] - renorm::site_map(&rule, p)).abs() < 1e-12);
    }

    #[test]
    fn fixed_points_are_fixed(rule in binary_rule(1, 0)) {
        let r = renorm::fixed_points(&rule).unwrap();
        for fp in &r.points {
            prop_assert!((renorm::site_map(&rule, fp.p) - fp.p).abs() < 1e-9);
        }
    }
}

/// Exact P(a^n_0 = 1 for from <= n <= depth) by enumerating `[-S_depth, S_depth]`.
fn exact_stabilization(rule: &LocalRule, p: f64, from: usize, depth: usize) -> f64 {
    let s = renorm::required_radius(rule, depth).unwrap();
    let sites = (2 * s + 1) as u32;
    let mut total = 0.0;
    for code in 0u64..1 << sites {
        let cells: Vec<usize> = (0..sites).map(|i| ((code >> i) & 1) as usize).collect();
        let ones = cells.iter().sum::<usize>() as i32;
        let weight = p.powi(ones) * (1.0 - p).powi(sites as i32 - ones);
        let trace = renorm::trace_at_zero(&Line::new(s, cells).unwrap(), rule, depth).unwrap().values;
        if trace[from..].iter().all(|&v| v == 1) {
            total += weight;
        }
    }
    total
}

#[test]
fn monte_carlo_agrees_with_exhaustive() {
    let rule = renorm::majority_rule();
    for (i, p) in [0.3, 0.5, 0.62, 0.8].into_iter().enumerate() {
        let exact = exact_stabilization(&rule, p, 1, 2);
        let cfg = StabilizationConfig {
            p,
            depth: 2,
            stabilize_from: 1,
            mc: McConfig::new(8_000, 100 + i as u64).with_workers(3),
        };
        let r = renorm::stabilization_probe(&rule, &cfg).unwrap();
        assert!(
            (r.ones.estimate - exact).abs() <= 5.0 * r.ones.half_width(),
            "p = {p}: estimate {} exact {exact}",
            r.ones.estimate
        );
    }
}
