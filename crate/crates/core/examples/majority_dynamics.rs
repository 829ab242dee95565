//! The single-site map f(p) = 3p^2(1-p) + p^3 and its fixed points.

use zerone::renorm;

fn main() -> zerone::Result<()> {
    let rule = renorm::majority_rule();
    for (n, p) in renorm::iterate_dynamics(&rule, 0.6, 6)?.iter().enumerate() {
        println!("f^{n}(0.6) = {p:.12}");
    }
    for fp in renorm::fixed_points(&rule)?.points {
        println!("fixed point {:.6}: f' = {:.6}, {}", fp.p, fp.derivative, fp.stability);
    }
    for name in renorm::BUILTIN_RULES {
        let rule = renorm::builtin_rule(name).expect("listed rule");
        println!("{name}: centre-moving symmetry {:?}", renorm::central_moving_symmetry(&rule)?);
    }
    Ok(())
}
