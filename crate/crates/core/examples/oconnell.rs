//! O'Connell's inequality H(V) >= sum I(V:W_i), exact and approximate.

use zerone::info::{self, Dist, JointDist};

fn main() -> zerone::Result<()> {
    // V = (W1, W2) for independent fair bits: the equality case.
    let j = JointDist::from_fn(&[4, 2, 2], |k| if k[0] == 2 * k[1] + k[2] { 0.25 } else { 0.0 })?;
    let r = info::oconnell_report(&j, 0)?;
    println!("equality case: H(V) = {}, terms = {:?}, gap = {:e}", r.entropy_bits, r.mi_terms, r.gap);

    // Correlated W's: the exact inequality can fail, the approximate one holds.
    let w = |a: usize, b: usize| if a == b { 0.45 } else { 0.05 };
    let j = JointDist::from_fn(&[2, 2, 2], |k| if k[0] == k[1] { w(k[1], k[2]) } else { 0.0 })?;
    let r = info::oconnell_report(&j, 0)?;
    println!(
        "correlated: gap = {:.6}, gamma* = {:.6}, exact bound {}, approximate bound {}",
        r.gap,
        r.gamma_star,
        r.independent_bound_holds(),
        r.approximate_bound_holds()
    );

    let product = info::product_dist(&[Dist::bernoulli(0.3)?, Dist::uniform(3)])?;
    println!("product of Bernoulli(0.3) and uniform(3) has {} cells", product.probs().len());
    Ok(())
}
