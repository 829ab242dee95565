//! Dependence coefficient of a joint and total variation of products.

use zerone::info::{self, Dist, JointDist};

fn main() -> zerone::Result<()> {
    let copy = JointDist::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]])?;
    let w = info::sup_dependence_witness(&copy)?;
    println!("sup |P(AxB) - P(A)P(B)| for X = Y: {} (A mask {:b}, B mask {:b})", w.value, w.a_mask, w.b_mask);

    let nats = info::mutual_information(&copy, std::f64::consts::E)?;
    println!("Pinsker bound sqrt(I/2) = {:.6}", (nats / 2.0).sqrt());

    let ps = [Dist::bernoulli(0.5)?, Dist::bernoulli(0.2)?, Dist::uniform(3)];
    let qs = [Dist::bernoulli(0.6)?, Dist::bernoulli(0.25)?, Dist::from_probs(vec![0.5, 0.25, 0.25])?];
    let exact = info::tv_distance_joint(&info::product_dist(&ps)?, &info::product_dist(&qs)?)?;
    let bound: f64 = ps
        .iter()
        .zip(&qs)
        .map(|(p, q)| info::tv_distance(p, q))
        .sum::<zerone::Result<f64>>()?;
    println!("TV of products = {exact:.6} <= sum of factor TVs = {bound:.6}");
    Ok(())
}
