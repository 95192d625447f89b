use bialgebra::error::Result;
use bialgebra::field::{conservation, system_residuals, FieldConfig};
use bialgebra::verify::{Case, Worst};
use rand::Rng;

/// Samples `points` seeded points in the inner 80% of the chart domain.
pub fn sample_points(cfg: &FieldConfig, seed: u64, points: usize) -> Vec<Vec<f64>> {
    let mut rng = bialgebra::sample::rng(seed);
    (0..points)
        .map(|_| {
            cfg.chart
                .domain()
                .iter()
                .map(|&(lo, hi)| {
                    let pad = 0.1 * (hi - lo);
                    rng.gen_range(lo + pad..hi - pad)
                })
                .collect()
        })
        .collect()
}

/// One case per residual group of the system, plus the conservation identity, each the
/// largest defect over the points. The conservation identity needs the `H`-equations; where
/// they fail by more than `tolerance` its defect is infinite.
pub fn check(cfg: &FieldConfig, points: &[Vec<f64>], tolerance: f64) -> Result<Vec<Case>> {
    let mut groups: Vec<(&'static str, Worst)> = Vec::new();
    let mut cons = Worst::default();
    for p in points {
        let (frame, f) = cfg.local(p, 2)?;
        let r = system_residuals(&frame, &f)?;
        for (k, (name, value)) in r.norms().into_iter().enumerate() {
            if groups.len() <= k {
                groups.push((name, Worst::default()));
            }
            groups[k].1.add(value);
        }
        match conservation(&frame, &f, tolerance) {
            Ok(c) => cons.add(c.defect() / c.divergence.norm().max(1.0)),
            Err(_) => cons.add(f64::INFINITY),
        }
    }
    let mut cases: Vec<Case> = groups
        .into_iter()
        .map(|(name, w)| Case::new(format!("field_check/{name}"), w.0, tolerance))
        .collect();
    cases.push(Case::new("field_check/conservation", cons.0, tolerance));
    Ok(cases)
}
