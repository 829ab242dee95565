//! Block geometry and traces of the majority renormalization map.

use zerone::renorm::{self, BlockSpec, Line};
use zerone::symmetry::{self, FnEvent};

fn main() -> zerone::Result<()> {
    let rule = renorm::majority_rule();
    for n in 1..=4 {
        println!("S_{n} = {}", renorm::required_radius(&rule, n)?);
    }

    let line = Line::from_fn(13, |k| usize::from(k.rem_euclid(3) != 1));
    let trace = renorm::trace_at_zero(&line, &rule, 3)?;
    println!("trace at 0: {:?} (read radius {})", trace.values, trace.window_radius_used);

    let block = BlockSpec::new(&rule, 2, 1)?;
    println!("B^2_1 = {block:?}");

    // a^2_0 only depends on [-4, 4] and is invariant under the level-1 block exchange.
    let exchange = renorm::block_exchange(1, &rule)?;
    let a2 = FnEvent::new((-4..=4).collect(), 2, move |v| {
        let line = Line::new(4, v.to_vec()).expect("nine cells");
        renorm::trace_at_zero(&line, &renorm::majority_rule(), 2).expect("radius 4").values[2] == 1
    });
    println!("a^2_0 invariant under block exchange: {}", symmetry::is_positional_symmetry(&a2, &exchange)?);
    Ok(())
}
