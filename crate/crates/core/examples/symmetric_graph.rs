//! A recursively built graph, its copy-swapping automorphisms, and a
//! property of its random subgraph.

use zerone::graph::{self, ConstructionSpec, GraphProperty, RandomSpecParams, VertexId};
use zerone::mc::McConfig;

fn main() -> zerone::Result<()> {
    let spec = ConstructionSpec::random(&RandomSpecParams::default(), 7);
    for n in 0..=3 {
        let g = graph::build(&spec, n)?;
        println!("G_{n}: {} vertices, {} edges", g.vertex_count(), g.edge_count());
    }
    let g = graph::build(&spec, 3)?;
    for m in 0..3 {
        let theta = graph::swap_automorphism(&g, m)?;
        println!("swap at level {m} is an automorphism: {}", graph::is_automorphism(&g, &theta));
    }

    // Two G_0 vertices, as embedded in G_3 through the "a" copies.
    let a: Vec<usize> = (0..2)
        .map(|local| g.index_of(&VertexId::new("aaa", 0, local)).expect("G_0 vertex"))
        .collect();
    let (m, theta) = graph::disjoint_automorphism_for(&g, &a)?;
    let moved: Vec<String> = a.iter().map(|&i| g.vertices()[theta[i]].label()).collect();
    println!("vertices {a:?} moved off themselves by the level-{m} swap, onto {moved:?}");

    for n in 1..=3 {
        let g = graph::build(&spec, n)?;
        let r = graph::estimate_property(&g, 0.5, &GraphProperty::HasTriangle, &McConfig::new(5_000, 1))?;
        println!("level {n}: P(triangle) = {:.4} [{:.4}, {:.4}]", r.estimate, r.ci_low, r.ci_high);
    }
    Ok(())
}
