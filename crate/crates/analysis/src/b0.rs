//! Checks of the two generator-class conditions on a rendered generator:
//! polynomial spatial decay with exponent `α` and the frequency envelope.

use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};
use crate::generator::{frequency_bound, ShearletGenerator};
use crate::grid::GridFunction;

pub const MIN_GRID: usize = 1024;
pub const MIN_HALF_EXTENT: f64 = 32.0;
/// Largest accepted growth of the spatial constant when the extent doubles.
pub const SPATIAL_STABILITY: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B0Spec {
    /// Half extent of the first rendering; the second uses `2l` with `2n` samples.
    pub l: f64,
    pub n: usize,
    /// Validation nodes per axis for the frequency envelope.
    pub validation: usize,
    /// Exponent used in the spatial fit; the generator's own `α` when `None`.
    pub alpha: Option<f64>,
}

impl Default for B0Spec {
    fn default() -> Self {
        B0Spec { l: MIN_HALF_EXTENT, n: MIN_GRID, validation: 1000, alpha: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B0Report {
    pub alpha: f64,
    /// `max |ψ(x)| (1 + ‖x‖∞²)^α` at extent `l` and `2l`.
    pub c_spatial: f64,
    pub c_spatial_wide: f64,
    pub spatial_growth: f64,
    /// `min (bound - |ψ̂|)` over the validation grid.
    pub frequency_margin: f64,
    /// `min (1 - |ψ̂| / bound)` over validation nodes inside the support.
    pub relative_margin: f64,
    pub spatial_pass: bool,
    pub frequency_pass: bool,
    /// True when `α` differs from the generator's, in which case the spatial verdict is informational.
    pub report_only_alpha: bool,
    pub pass: bool,
}

fn spatial_constant(f: &GridFunction, alpha: f64) -> f64 {
    let n = f.n();
    let mut best = 0.0f64;
    for i2 in 0..n {
        let x2 = f.x(i2).abs();
        for i1 in 0..n {
            let r = f.x(i1).abs().max(x2);
            let v = f.space()[i2 * n + i1].norm() * (1.0 + r * r).powf(alpha);
            best = best.max(v);
        }
    }
    best
}

/// Minimum of `bound - |ψ̂|` and of `1 - |ψ̂|/bound` on a midpoint grid of the half support `ξ₁ > 0`.
pub fn frequency_margin(gen: &ShearletGenerator, nodes: usize) -> (f64, f64) {
    let p = gen.params();
    let mut abs_m = f64::INFINITY;
    let mut rel_m = f64::INFINITY;
    for i in 0..nodes {
        let x1 = p.a0 + (p.a1 - p.a0) * (i as f64 + 0.5) / nodes as f64;
        for k in 0..nodes {
            let x2 = -p.b + 2.0 * p.b * (k as f64 + 0.5) / nodes as f64;
            let v = gen.psi_hat([x1, x2]).abs();
            let bound = frequency_bound(p.beta, [x1, x2]);
            abs_m = abs_m.min(bound - v);
            if v > 0.0 {
                rel_m = rel_m.min(1.0 - v / bound);
            }
        }
    }
    (abs_m, rel_m)
}

pub fn b0_check(gen: &ShearletGenerator, spec: &B0Spec) -> Result<B0Report> {
    if spec.n < MIN_GRID || spec.l < MIN_HALF_EXTENT {
        return Err(AnalysisError::InvalidParameter(format!(
            "generator check needs at least {MIN_GRID} samples per axis and half extent {MIN_HALF_EXTENT}, got n={} l={}",
            spec.n, spec.l
        )));
    }
    if spec.validation < 16 {
        return Err(AnalysisError::InvalidParameter("validation grid needs at least 16 nodes per axis".into()));
    }
    let alpha = spec.alpha.unwrap_or(gen.params().alpha);
    if !(alpha > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let c_spatial = spatial_constant(&GridFunction::render(spec.l, spec.n, gen)?, alpha);
    let c_spatial_wide = spatial_constant(&GridFunction::render(2.0 * spec.l, 2 * spec.n, gen)?, alpha);
    let spatial_growth = c_spatial_wide / c_spatial;
    let (frequency_margin, relative_margin) = frequency_margin(gen, spec.validation);
    let spatial_pass = spatial_growth <= SPATIAL_STABILITY;
    let frequency_pass = frequency_margin >= 0.0;
    let report_only_alpha = spec.alpha.is_some_and(|a| a != gen.params().alpha);
    Ok(B0Report {
        alpha,
        c_spatial,
        c_spatial_wide,
        spatial_growth,
        frequency_margin,
        relative_margin,
        spatial_pass,
        frequency_pass,
        report_only_alpha,
        pass: frequency_pass && (spatial_pass || report_only_alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::GeneratorParams;

    #[test]
    fn margin_sign_tracks_amplitude() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let (m, rel) = frequency_margin(&gen, 200);
        assert!(m >= 0.0 && rel > 0.0);
        let loud = gen.clone().with_kappa(10.0 * gen.kappa());
        assert!(frequency_margin(&loud, 200).0 < 0.0);
    }

    #[test]
    fn small_grids_are_rejected() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let spec = B0Spec { n: 512, ..B0Spec::default() };
        assert!(matches!(b0_check(&gen, &spec), Err(AnalysisError::InvalidParameter(_))));
    }
}
