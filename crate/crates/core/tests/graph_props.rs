use proptest::prelude::*;
use zerone::graph::{self, ConstructionSpec, FiniteGraph, GraphProperty, RandomSpecParams, SubgraphProperty};
use zerone::mc::McConfig;

fn spec() -> impl Strategy<Value = ConstructionSpec> {
    (any::<u64>(), 1usize..=4, 1usize..=3, 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(seed, levels, g0, edge_p, attach_p)| {
        ConstructionSpec::random(
            &RandomSpecParams {
                levels,
                g0_vertices: g0,
                edge_p,
                max_l_vertices: 2,
                attach_p,
                max_cross_pairs: 3,
            },
            seed,
        )
    })
}

/// Edge set check written against the vertex list only.
fn preserves_adjacency(g: &FiniteGraph, theta: &[usize]) -> bool {
    let n = g.vertex_count();
    (0..n).all(|u| (0..n).all(|v| g.has_edge(u, v) == g.has_edge(theta[u], theta[v])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn swaps_preserve_adjacency(spec in spec()) {
        let n = spec.levels.len();
        let g = graph::build(&spec, n).unwrap();
        prop_assume!(g.vertex_count() <= 200);
        for m in 0..n {
            let theta = graph::swap_automorphism(&g, m).unwrap();
            prop_assert!(preserves_adjacency(&g, &theta), "level {}", m);
        }
    }

    #[test]
    fn disjoint_automorphisms_separate(spec in spec(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let n = spec.levels.len();
        let g = graph::build(&spec, n).unwrap();
        let a: Vec<usize> = picks.iter().map(|i| i.index(g.vertex_count())).collect();
        if let Ok((_, theta)) = graph::disjoint_automorphism_for(&g, &a) {
            prop_assert!(a.iter().all(|x| !a.contains(&theta[*x])));
            let j = g.induced_edges(&a);
            let pi = graph::edge_map_of(&g, &theta).unwrap();
            prop_assert!(j.iter().all(|&e| !j.contains(&(pi.eval(e as i64) as usize))));
            let ids: Vec<i64> = (0..g.edge_count() as i64).collect();
            prop_assert!(zerone::symmetry::is_injective_on(&pi, &ids));
        }
    }

    #[test]
    fn properties_invariant_under_swaps(spec in spec(), seed in any::<u64>()) {
        let n = spec.levels.len();
        let g = graph::build(&spec, n).unwrap();
        let theta = graph::swap_automorphism(&g, n - 1).unwrap();
        let keep = graph::sample_subgraph(&g, 0.5, seed).unwrap();
        // Relabel the sample: edge uv is kept in the image iff theta^-1 of it was kept.
        let mut moved = vec![false; keep.len()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            moved[g.edge_id(theta[u], theta[v]).unwrap()] = keep[e];
        }
        for prop in [GraphProperty::HasTriangle, GraphProperty::Connected, GraphProperty::HasIsolatedVertex, GraphProperty::MinDegreeAtLeast(2)] {
            prop_assert_eq!(prop.holds(&g, &keep), prop.holds(&g, &moved));
        }
    }
}

#[test]
fn keep_fraction_concentrates() {
    let spec = ConstructionSpec::random(
        &RandomSpecParams {
            levels: 9,
            g0_vertices: 4,
            edge_p: 0.7,
            max_l_vertices: 3,
            attach_p: 0.8,
            max_cross_pairs: 3,
        },
        5,
    );
    let g = graph::build(&spec, 9).unwrap();
    assert!(g.edge_count() >= 100_000, "only {} edges", g.edge_count());
    let keep = graph::sample_subgraph(&g, 0.3, 17).unwrap();
    let frac = keep.iter().filter(|&&k| k).count() as f64 / keep.len() as f64;
    assert!((frac - 0.3).abs() < 0.01, "fraction {frac}");
}

#[test]
fn single_edge_estimate_matches_p() {
    let spec = ConstructionSpec {
        g0: graph::BaseGraph::new(2, vec![(0, 1)]).unwrap(),
        levels: vec![],
        seed: None,
    };
    let g = graph::build(&spec, 0).unwrap();
    let r = graph::estimate_property(&g, 0.35, &GraphProperty::HasEdge, &McConfig::new(20_000, 8)).unwrap();
    assert!((r.estimate - 0.35).abs() <= 5.0 * r.half_width());
}

#[test]
fn estimates_independent_of_workers() {
    let spec = ConstructionSpec::random(&RandomSpecParams::default(), 3);
    let g = graph::build(&spec, 3).unwrap();
    let base = McConfig::new(3_000, 4);
    let a = graph::estimate_property(&g, 0.4, &GraphProperty::HasTriangle, &base).unwrap();
    let b = graph::estimate_property(&g, 0.4, &GraphProperty::HasTriangle, &base.with_workers(7)).unwrap();
    assert_eq!(a, b);
}
