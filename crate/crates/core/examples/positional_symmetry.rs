//! Positional maps acting on configurations and cylinder events.

use zerone::info::Alphabet;
use zerone::symmetry::{self, CylinderEvent, PositionalMap};

fn main() -> zerone::Result<()> {
    let config: symmetry::Config = [(0, 1), (1, 0), (2, 1)].into_iter().collect();
    let swap = PositionalMap::transposition(0, 1);
    println!("a^pi for pi = (0 1): {:?}", symmetry::apply_map(&config, &swap, &[0, 1, 2])?);

    let shift = PositionalMap::shift(2);
    let both = symmetry::compose(&swap, &shift);
    println!("compose((0 1), shift 2) sends 0 to {}", both.eval(0));

    let majority = CylinderEvent::from_fn(vec![-1, 0, 1], Alphabet::binary(), |v| v.iter().sum::<usize>() >= 2)?;
    println!("majority event table: {}", majority.hex());
    for map in [PositionalMap::transposition(-1, 1), PositionalMap::transposition(0, 5), PositionalMap::shift(1)] {
        println!("majority symmetric under {map:?}: {}", symmetry::is_positional_symmetry(&majority, &map)?);
    }

    let found = symmetry::find_disjoint_map(&[PositionalMap::shift(1), PositionalMap::shift(-1)], &[-1, 0, 1], 8)?;
    println!("disjoint shift for J = {{-1, 0, 1}}: {found:?}");
    Ok(())
}
