//! Monte Carlo estimate of P(a^n_0 = s for 3 <= n <= 5) under i.i.d. input.

use zerone::mc::McConfig;
use zerone::renorm::{self, StabilizationConfig};

fn main() -> zerone::Result<()> {
    let rule = renorm::majority_rule();
    for p in [0.3, 0.5, 0.7] {
        let cfg = StabilizationConfig {
            p,
            depth: 5,
            stabilize_from: 3,
            mc: McConfig::new(20_000, 1).with_workers(4),
        };
        let r = renorm::stabilization_probe(&rule, &cfg)?;
        let reference = r.reference.expect("majority is simple");
        println!(
            "p = {p}: P(s=1) = {:.4} [{:.4}, {:.4}], P(s=0) = {:.4}, union bounds {:.4} / {:.4}",
            r.ones.estimate, r.ones.ci_low, r.ones.ci_high, r.zeros.estimate, reference.union_ones, reference.union_zeros
        );
    }
    Ok(())
}
