//! Probabilities of stabilization events drift toward 0 or 1 as the window
//! grows; a single-site event does not.

use zerone::info::Dist;
use zerone::mc::McConfig;
use zerone::probe::{self, EventFamily, IidSampler};
use zerone::renorm;

fn main() -> zerone::Result<()> {
    let cfg = McConfig::new(5_000, 2).with_workers(4);
    let sampler = IidSampler(Dist::bernoulli(0.7)?);
    let stab = EventFamily::stabilization(&renorm::majority_rule(), 1, 1);
    let curve = probe::event_probability_curve(&stab, &sampler, &[1, 2, 3, 4, 5], &cfg)?;
    for pt in &curve.points {
        println!("level {}: P = {:.4}, d_n = {:.4}", pt.level, pt.report.estimate, pt.d_n);
    }
    println!("d_n non-increasing: {}", curve.d_non_increasing);

    let fair = IidSampler(Dist::bernoulli(0.5)?);
    let site = probe::event_probability_curve(&EventFamily::site_equals(0, 1, 2), &fair, &[1, 3, 5], &cfg)?;
    let ds: Vec<f64> = site.points.iter().map(|p| p.d_n).collect();
    println!("a_0 = 1 control: d_n = {ds:?}");
    Ok(())
}
