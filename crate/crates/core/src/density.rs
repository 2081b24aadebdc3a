//! Upper and lower weighted density estimates from box counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxes::{brute_force_count, enumerate_rows, family_count, BoxSpec, Count, DEFAULT_ROW_BUDGET};
use crate::error::CoreError;
use crate::group::GroupElement;
use crate::params::{FamilyKind, FamilySpec, ParamSet};

/// How box centers are drawn for each `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterSpec {
    /// `ln x` uniform in `[-2h, 2h]`, shear and translations uniform in `[-4h, 4h]`.
    Random { count: usize, seed: u64 },
    /// Fixed `ln x` values; each gets the plain center `(x, 0, 0)` plus
    /// `per_scale` random shear/translation draws in `[-4h, 4h]`.
    Ladder { ln_x: Vec<f64>, per_scale: usize, seed: u64 },
    Explicit(Vec<GroupElement>),
}

impl CenterSpec {
    pub fn centers(&self, h: f64, h_index: usize) -> Vec<GroupElement> {
        let stream = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(h_index as u64);
            rng
        };
        match self {
            CenterSpec::Random { count, seed } => {
                let mut rng = stream(*seed);
                (0..*count)
                    .map(|_| {
                        let ln_x = rng.gen_range(-2.0 * h..=2.0 * h);
                        let s = rng.gen_range(-4.0 * h..=4.0 * h);
                        let t = [rng.gen_range(-4.0 * h..=4.0 * h), rng.gen_range(-4.0 * h..=4.0 * h)];
                        GroupElement::from_log(ln_x, s, t).expect("finite center")
                    })
                    .collect()
            }
            CenterSpec::Ladder { ln_x, per_scale, seed } => {
                let mut rng = stream(*seed);
                let mut out = Vec::with_capacity(ln_x.len() * (per_scale + 1));
                for &l in ln_x {
                    out.push(GroupElement::from_log(l, 0.0, [0.0, 0.0]).expect("finite center"));
                    for _ in 0..*per_scale {
                        let s = rng.gen_range(-4.0 * h..=4.0 * h);
                        let t = [rng.gen_range(-4.0 * h..=4.0 * h), rng.gen_range(-4.0 * h..=4.0 * h)];
                        out.push(GroupElement::from_log(l, s, t).expect("finite center"));
                    }
                }
                out
            }
            CenterSpec::Explicit(v) => v.clone(),
        }
    }
}

/// What is being counted.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Family(&'a FamilySpec),
    Points(&'a ParamSet),
}

impl Source<'_> {
    /// Weighted count inside `bx`. Raw lists carrying their generating window are
    /// checked for containment of every index row the box needs.
    pub fn count(&self, bx: &BoxSpec) -> Result<Count, CoreError> {
        match self {
            Source::Family(f) => family_count(f, bx),
            Source::Points(ps) => {
                if let (Some(f), Some(w)) = (&ps.family, &ps.window) {
                    let mut bad = None;
                    enumerate_rows(f, bx, DEFAULT_ROW_BUDGET, |j, k, m2, lo, hi| {
                        let inside = (w.j_range.0..=w.j_range.1).contains(&j)
                            && (w.k_range.0..=w.k_range.1).contains(&k)
                            && (w.m2_range.0..=w.m2_range.1).contains(&m2)
                            && lo >= w.m1_range.0
                            && hi <= w.m1_range.1;
                        if !inside && bad.is_none() {
                            bad = Some((j, k, m2, lo, hi));
                        }
                    })?;
                    if let Some((j, k, m2, lo, hi)) = bad {
                        return Err(CoreError::WindowTooSmall(format!(
                            "box at {} with h={} needs j={j}, k={k}, m2={m2}, m1 in {lo}..={hi}",
                            bx.center, bx.h
                        )));
                    }
                }
                Ok(brute_force_count(&ps.points, bx))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub h: f64,
    pub min_norm_count: f64,
    pub max_norm_count: f64,
    pub centers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub h_ladder: Vec<f64>,
    pub rows: Vec<DensityRow>,
    /// Largest-h maximum of normalized counts.
    pub upper_density: f64,
    /// Largest-h minimum of normalized counts.
    pub lower_density: f64,
    /// Size of the `O(h³)/h⁴` remainder at the largest `h`, taken as `4/h` relative.
    pub finite_size_correction: f64,
    pub center_sample_size: usize,
}

impl DensityEstimate {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,min_norm_count,max_norm_count,centers\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.h, r.min_norm_count, r.max_norm_count, r.centers));
        }
        out
    }
}

/// Normalized (by `h⁴`) weighted counts at every center.
pub fn normalized_counts(source: Source<'_>, h: f64, centers: &[GroupElement]) -> Result<Vec<f64>, CoreError> {
    let h4 = h.powi(4);
    centers
        .par_iter()
        .map(|c| source.count(&BoxSpec::new(*c, h)?).map(|n| n.weighted / h4))
        .collect()
}

pub fn estimate_density(source: Source<'_>, h_ladder: &[f64], centers: &CenterSpec) -> Result<DensityEstimate, CoreError> {
    if h_ladder.is_empty() {
        return Err(CoreError::InvalidParameter("empty h ladder".into()));
    }
    if h_ladder.windows(2).any(|w| !(w[0] < w[1])) || h_ladder.iter().any(|h| !(*h > 0.0)) {
        return Err(CoreError::InvalidParameter("h ladder must be positive and increasing".into()));
    }
    let mut rows = Vec::with_capacity(h_ladder.len());
    let mut size = 0;
    for (i, &h) in h_ladder.iter().enumerate() {
        let cs = centers.centers(h, i);
        if cs.is_empty() {
            return Err(CoreError::InvalidParameter("no centers".into()));
        }
        size = cs.len();
        let counts = normalized_counts(source, h, &cs)?;
        let min = counts.iter().copied().fold(f64::INFINITY, f64::min);
        let max = counts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        rows.push(DensityRow { h, min_norm_count: min, max_norm_count: max, centers: cs.len() });
    }
    let last = rows.last().expect("nonempty ladder");
    let h_max = last.h;
    Ok(DensityEstimate {
        h_ladder: h_ladder.to_vec(),
        upper_density: last.max_norm_count,
        lower_density: last.min_norm_count,
        finite_size_correction: 4.0 / h_max * last.max_norm_count,
        center_sample_size: size,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AnalyticDensity {
    Uniform { value: f64 },
    /// Upper density infinite, lower density zero.
    Extreme,
    /// Uniformity fails for the density built on the other group law.
    NonUniform,
}

pub fn analytic_density(family: &FamilySpec) -> Result<AnalyticDensity, CoreError> {
    family.validate()?;
    Ok(match family.kind {
        FamilyKind::Regular | FamilyKind::OversampledDiagonal | FamilyKind::OversampledShear => {
            AnalyticDensity::Uniform { value: 1.0 / (family.b * family.c * family.c * family.a.ln()) }
        }
        FamilyKind::Coshearlet => AnalyticDensity::Extreme,
        FamilyKind::TildeRegular => AnalyticDensity::NonUniform,
    })
}

/// Verdicts on finiteness of the upper density and positivity of the lower density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub upper_finite: bool,
    pub lower_positive: bool,
}

/// Verdict from counts at a single `h`, over a nested pair of center ladders.
///
/// The supremum is judged bounded when widening the ladder from the inner to the
/// full range at most doubles the maximum; the infimum is judged positive when the
/// minimum over the full ladder is positive.
pub fn verdict_at(source: Source<'_>, h: f64, inner: &CenterSpec, full: &CenterSpec) -> Result<DensityVerdict, CoreError> {
    let ci = normalized_counts(source, h, &inner.centers(h, 0))?;
    let cf = normalized_counts(source, h, &full.centers(h, 0))?;
    let max_i = ci.iter().copied().fold(0.0, f64::max);
    let max_f = cf.iter().copied().fold(0.0, f64::max);
    let min_f = cf.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DensityVerdict { upper_finite: max_f <= 2.0 * max_i, lower_positive: min_f > 0.0 })
}

/// Verdict from the density estimates along an `h` ladder: the largest-`h` row decides.
pub fn ladder_verdict(source: Source<'_>, h_ladder: &[f64], inner: &CenterSpec, full: &CenterSpec) -> Result<DensityVerdict, CoreError> {
    let ei = estimate_density(source, h_ladder, inner)?;
    let ef = estimate_density(source, h_ladder, full)?;
    Ok(DensityVerdict {
        upper_finite: ef.upper_density <= 2.0 * ei.upper_density,
        lower_positive: ef.lower_density > 0.0,
    })
}
