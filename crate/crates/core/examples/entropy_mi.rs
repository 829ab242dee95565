//! Entropy, mutual information and grouping of coordinates.

use zerone::info::{self, Dist, JointDist};

fn main() -> zerone::Result<()> {
    let coin = Dist::uniform(2);
    println!("H(fair coin) = {} bits", info::entropy(&coin, 2.0)?);

    let copy = JointDist::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]])?;
    println!("I(X:X) = {} bits", info::mutual_information(&copy, 2.0)?);

    // X, Y independent bits and Z = X xor Y: pairwise independent, jointly dependent.
    let xor = JointDist::from_fn(&[2, 2, 2], |k| if k[2] == k[0] ^ k[1] { 0.25 } else { 0.0 })?;
    println!("I(X:Z) = {}", xor.mutual_information_between(&[0], &[2], 2.0)?);
    let grouped = info::group(&xor, &[vec![0, 1], vec![2]])?;
    println!("I((X,Y):Z) = {}", info::mutual_information(&grouped, 2.0)?);
    Ok(())
}
