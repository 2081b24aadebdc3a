//! Gauss–Legendre rules.

use gauss_quad::legendre::GaussLegendre;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`, ascending nodes.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n > 0, "rule needs at least one node");
    if n == 1 {
        return vec![(0.0, 2.0)];
    }
    let rule = GaussLegendre::new(n).expect("degree at least 2");
    let mut out = rule.as_node_weight_pairs().to_vec();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Composite rule on `[lo, hi]`: `panels` equal panels with `order` nodes each.
pub fn composite(lo: f64, hi: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(order);
    let width = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let left = lo + p as f64 * width;
        for &(x, w) in &rule {
            out.push((left + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    out
}
