//! Spatial and frequency decay envelopes of `|T(f, g)|` and the fit of their constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shearlet_core::GroupElement;

use crate::error::{AnalysisError, Result};
use crate::generator::GeneratorParams;
use crate::transform::{center_of, QuadratureTransform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    Spatial,
    Frequency,
}

/// `d² = (2 + s²/a) max{1/a², 1/a}`.
pub fn d_squared(a: f64, s: f64) -> f64 {
    (2.0 + s * s / a) * (1.0 / (a * a)).max(1.0 / a)
}

/// Envelope value with unit constant.
///
/// Spatial: `a^{3/4} max{1,d²} / [1 + ‖M⁻¹t / max{1,d}‖∞²]^{α-1/2}`.
/// Frequency: `a^{3/4} a^{3β/2} / [(1+a²)^β (√a+|s|)^β]`.
pub fn decay_bound(params: &GeneratorParams, g: &GroupElement, variant: Envelope) -> f64 {
    let (a, s) = (g.a(), g.s());
    let ln_a = g.ln_a();
    match variant {
        Envelope::Spatial => {
            let d2 = d_squared(a, s);
            let m = d2.sqrt().max(1.0);
            let c = center_of(a, s, g.t());
            let r = (c[0].abs().max(c[1].abs())) / m;
            (0.75 * ln_a + d2.max(1.0).ln() - (params.alpha - 0.5) * (r * r).ln_1p()).exp()
        }
        Envelope::Frequency => {
            let b = params.beta;
            let ln = 0.75 * ln_a + 1.5 * b * ln_a - b * (a * a).ln_1p() - b * (a.sqrt() + s.abs()).ln();
            ln.exp()
        }
    }
}

/// Tensor grid in `(ln a, s, t₁, t₂)`: `ln a` and `s` include their endpoints, `t` too.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayGrid {
    pub a_range: (f64, f64),
    pub s_max: f64,
    pub t_max: f64,
    pub n_a: usize,
    pub n_s: usize,
    pub n_t: usize,
}

impl Default for DecayGrid {
    fn default() -> Self {
        DecayGrid { a_range: (0.25, 4.0), s_max: 2.0, t_max: 4.0, n_a: 20, n_s: 20, n_t: 10 }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl DecayGrid {
    pub fn refined(&self) -> Self {
        DecayGrid { n_a: 2 * self.n_a, n_s: 2 * self.n_s, n_t: 2 * self.n_t, ..*self }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.a_range;
        if !(lo > 0.0 && hi > lo) || !(self.s_max >= 0.0) || !(self.t_max >= 0.0) {
            return Err(AnalysisError::InvalidParameter(format!("invalid decay grid {self:?}")));
        }
        if self.n_a == 0 || self.n_s == 0 || self.n_t == 0 {
            return Err(AnalysisError::InvalidParameter("decay grid needs at least one node per axis".into()));
        }
        Ok(())
    }

    pub fn scales(&self) -> Vec<f64> {
        linspace(self.a_range.0.ln(), self.a_range.1.ln(), self.n_a).into_iter().map(f64::exp).collect()
    }

    pub fn shears(&self) -> Vec<f64> {
        linspace(-self.s_max, self.s_max, self.n_s)
    }

    pub fn translations(&self) -> Vec<f64> {
        linspace(-self.t_max, self.t_max, self.n_t)
    }

    pub fn len(&self) -> usize {
        self.n_a * self.n_s * self.n_t * self.n_t
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Fitted constants `C = max |T| / envelope` over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c_spatial: f64,
    pub c_frequency: f64,
    pub points: usize,
    /// Points with a nonzero transform value.
    pub nonzero: usize,
}

pub fn fit_decay(q: &QuadratureTransform<'_>, params: &GeneratorParams, grid: &DecayGrid) -> Result<DecayFit> {
    grid.validate()?;
    let ts = grid.translations();
    let cells: Vec<(f64, f64)> = grid.scales().into_iter().flat_map(|a| grid.shears().into_iter().map(move |s| (a, s))).collect();
    let partial: Vec<(f64, f64, usize)> = cells
        .par_iter()
        .map(|&(a, s)| {
            let vals = q.grid(a, s, &ts, &ts);
            let mut out = (0.0f64, 0.0f64, 0usize);
            for (idx, v) in vals.iter().enumerate() {
                let m = v.norm();
                if m == 0.0 {
                    continue;
                }
                let t = [ts[idx % ts.len()], ts[idx / ts.len()]];
                let g = GroupElement::new(a, s, t).expect("grid point");
                out.0 = out.0.max(m / decay_bound(params, &g, Envelope::Spatial));
                out.1 = out.1.max(m / decay_bound(params, &g, Envelope::Frequency));
                out.2 += 1;
            }
            out
        })
        .collect();
    let (c_spatial, c_frequency, nonzero) =
        partial.iter().fold((0.0f64, 0.0f64, 0usize), |acc, p| (acc.0.max(p.0), acc.1.max(p.1), acc.2 + p.2));
    if !c_spatial.is_finite() || !c_frequency.is_finite() {
        return Err(AnalysisError::Diagnostic("fitted decay constant is not finite".into()));
    }
    Ok(DecayFit { c_spatial, c_frequency, points: grid.len(), nonzero })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub coarse: DecayFit,
    pub refined: DecayFit,
    /// `C_refined / C_coarse` per envelope.
    pub growth_spatial: f64,
    pub growth_frequency: f64,
    /// Constants used for dominance checks: the larger of the two fits.
    pub c_fit_spatial: f64,
    pub c_fit_frequency: f64,
    pub stable: bool,
}

/// Fits on `grid` and on its 2× refinement; stable when neither constant more than doubles.
pub fn decay_study(q: &QuadratureTransform<'_>, params: &GeneratorParams, grid: &DecayGrid) -> Result<DecayReport> {
    let coarse = fit_decay(q, params, grid)?;
    let refined = fit_decay(q, params, &grid.refined())?;
    if coarse.nonzero == 0 {
        return Err(AnalysisError::Diagnostic("transform vanishes on the whole fitting grid".into()));
    }
    let growth_spatial = refined.c_spatial / coarse.c_spatial;
    let growth_frequency = refined.c_frequency / coarse.c_frequency;
    Ok(DecayReport {
        coarse,
        refined,
        growth_spatial,
        growth_frequency,
        c_fit_spatial: coarse.c_spatial.max(refined.c_spatial),
        c_fit_frequency: coarse.c_frequency.max(refined.c_frequency),
        stable: growth_spatial <= 2.0 && growth_frequency <= 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dominance {
    pub samples: usize,
    pub violations: usize,
    /// Largest `|T| / (min of the two scaled envelopes)`; at most 1 when dominance holds.
    pub worst_ratio: f64,
}

/// Checks `|T(g)| ≤ min(C_s env_s(g), C_f env_f(g))` on seeded random points of the grid's box.
pub fn held_out_dominance(
    q: &QuadratureTransform<'_>,
    params: &GeneratorParams,
    report: &DecayReport,
    grid: &DecayGrid,
    samples: usize,
    seed: u64,
) -> Result<Dominance> {
    grid.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l0, l1) = (grid.a_range.0.ln(), grid.a_range.1.ln());
    let points: Vec<GroupElement> = (0..samples)
        .map(|_| {
            let la = rng.gen_range(l0..=l1);
            let s = rng.gen_range(-grid.s_max..=grid.s_max);
            let t = [rng.gen_range(-grid.t_max..=grid.t_max), rng.gen_range(-grid.t_max..=grid.t_max)];
            GroupElement::from_log(la, s, t).expect("finite sample")
        })
        .collect();
    let ratios: Vec<f64> = points
        .par_iter()
        .map(|g| {
            let v = q.point(g).norm();
            let env = (report.c_fit_spatial * decay_bound(params, g, Envelope::Spatial))
                .min(report.c_fit_frequency * decay_bound(params, g, Envelope::Frequency));
            if v == 0.0 {
                0.0
            } else {
                v / env
            }
        })
        .collect();
    Ok(Dominance {
        samples,
        violations: ratios.iter().filter(|&&r| r > 1.0).count(),
        worst_ratio: ratios.iter().copied().fold(0.0, f64::max),
    })
}
