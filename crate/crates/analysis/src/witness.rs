//! Constructive witness against an upper frame bound: a unit-norm `g` whose
//! coefficient energy exceeds `N δ²` wherever the family piles up points.

use serde::{Deserialize, Serialize};
use shearlet_core::boxes::{family_count, for_each_in_box, BoxSpec};
use shearlet_core::{FamilySpec, GroupElement};

use crate::error::{AnalysisError, Result};
use crate::generator::{BumpSpectrum, ShearletGenerator, Spectrum};
use crate::transform::QuadratureTransform;

/// Search settings for the witness: centres `(a^{-i}, 0, 0)` for `i = 0..=max_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpec {
    /// Nodes per axis when sampling `|T(η, ·)|` over `Q_h(p)`, corners included.
    pub samples_per_axis: usize,
    pub max_steps: usize,
    /// Largest point count for which the energy is evaluated.
    pub max_points: u64,
}

impl Default for WitnessSpec {
    fn default() -> Self {
        WitnessSpec { samples_per_axis: 5, max_steps: 24, max_points: 200_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub step: usize,
    pub x: f64,
    pub count: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub h: f64,
    pub target: f64,
    /// Sampled infimum of `|T(η, ·)|` over `Q_h(p)`.
    pub delta: f64,
    pub p: GroupElement,
    pub ladder: Vec<LadderStep>,
    pub reached: bool,
    /// Centre `(x, y, z)` of the chosen box and the witness element `(x,y,z)·p⁻¹`.
    pub center: GroupElement,
    pub witness: GroupElement,
    pub count: f64,
    pub best_count: f64,
    /// `Σ_{λ ∈ Λ ∩ Q_h(x,y,z)} w |⟨g, σ(λ)ψ⟩|²`, a lower bound for the full energy.
    pub energy: f64,
    pub energy_ratio: f64,
}

/// The unit-norm one-sided bump on `(1, 2) × (-1, 1)`.
pub fn unit_probe() -> Result<BumpSpectrum> {
    let raw = BumpSpectrum::new((1.0, 2.0), (-1.0, 1.0), false, 1.0)?;
    let n = QuadratureTransform::norm_sq_of(&raw, 16.0, 12).sqrt();
    BumpSpectrum::new((1.0, 2.0), (-1.0, 1.0), false, 1.0 / n)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Sampled `inf |T(η, g)|` over `g ∈ Q_h(p)`.
pub fn sampled_infimum(q: &QuadratureTransform<'_>, p: &GroupElement, h: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(AnalysisError::InvalidParameter("need at least two samples per axis".into()));
    }
    // the upper faces are open; stay just inside them
    let e = h * 1e-9;
    let u = linspace(-h / 2.0, h / 2.0 - e, n);
    let mut gs = Vec::with_capacity(n.pow(4));
    for &la in &u {
        for &s in &u {
            for &t1 in &u {
                for &t2 in &u {
                    gs.push(p.compose(&GroupElement::from_log(la, s, [t1, t2])?));
                }
            }
        }
    }
    Ok(q.batch(&gs).iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min))
}

pub fn upper_bound_witness(
    gen: &ShearletGenerator,
    eta: &dyn Spectrum,
    family: &FamilySpec,
    p: &GroupElement,
    h: f64,
    target: f64,
    spec: &WitnessSpec,
) -> Result<WitnessReport> {
    family.validate()?;
    if !(h > 0.0) || !(target >= 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("need h > 0 and target ≥ 0, got h={h} target={target}")));
    }
    let q = QuadratureTransform::new(gen, eta);
    let delta = sampled_infimum(&q, p, h, spec.samples_per_axis)?;
    if !(delta > 0.0) {
        return Err(AnalysisError::Diagnostic(format!("|T(η, ·)| vanishes on the sampled box Q_{h}(p); shrink h or move p")));
    }
    let mut ladder = Vec::new();
    let mut chosen = None;
    for i in 0..=spec.max_steps {
        let x = family.a.powi(-(i as i32));
        let center = GroupElement::new(x, 0.0, [0.0, 0.0])?;
        let count = family_count(family, &BoxSpec::new(center, h)?)?.weighted;
        ladder.push(LadderStep { step: i, x, count });
        if count >= target {
            chosen = Some((center, count));
            break;
        }
    }
    let best = ladder.iter().copied().fold(ladder[0], |b, s| if s.count > b.count { s } else { b });
    let reached = chosen.is_some();
    let (center, count) = chosen.unwrap_or((GroupElement::new(best.x, 0.0, [0.0, 0.0])?, best.count));
    let bx = BoxSpec::new(center, h)?;
    let points = family_count(family, &bx)?.points;
    if points > spec.max_points {
        return Err(AnalysisError::InvalidParameter(format!("box holds {points} points, more than the budget {}", spec.max_points)));
    }
    // ⟨g, σ(λ)ψ⟩ = T(η, p·x⁻¹·λ) for g = σ(x·p⁻¹)η
    let shift = p.compose(&center.inverse());
    let mut gs = Vec::new();
    let mut ws = Vec::new();
    for_each_in_box(family, &bx, |_, _, _, wp| {
        gs.push(shift.compose(&wp.g));
        ws.push(wp.w);
    })?;
    let energy: f64 = q.batch(&gs).iter().zip(&ws).map(|(v, w)| w * v.norm_sqr()).sum();
    let floor = count * delta * delta;
    Ok(WitnessReport {
        h,
        target,
        delta,
        p: *p,
        ladder,
        reached,
        center,
        witness: center.compose(&p.inverse()),
        count,
        best_count: best.count,
        energy,
        energy_ratio: if floor > 0.0 { energy / floor } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::GeneratorParams;
    use shearlet_core::FamilyKind;

    fn gen() -> ShearletGenerator {
        ShearletGenerator::new(GeneratorParams::default()).unwrap()
    }

    #[test]
    fn probe_has_unit_norm() {
        let eta = unit_probe().unwrap();
        assert!((QuadratureTransform::norm_sq_of(&eta, 16.0, 12) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_target_is_met_at_the_first_centre() {
        let fam = FamilySpec::new(FamilyKind::Coshearlet, 2.0, 1.0, 1.0).unwrap();
        let eta = unit_probe().unwrap();
        let r = upper_bound_witness(&gen(), &eta, &fam, &GroupElement::IDENTITY, 0.5, 0.0, &WitnessSpec::default()).unwrap();
        assert!(r.reached && r.ladder.len() == 1 && r.energy >= 0.0);
    }

    #[test]
    fn coshearlet_counts_grow_and_energy_follows() {
        let fam = FamilySpec::new(FamilyKind::Coshearlet, 2.0, 1.0, 1.0).unwrap();
        let eta = unit_probe().unwrap();
        let spec = WitnessSpec::default();
        let base = upper_bound_witness(&gen(), &eta, &fam, &GroupElement::IDENTITY, 0.5, 0.0, &spec).unwrap();
        let target = 10.0 * base.count.max(1.0);
        let r = upper_bound_witness(&gen(), &eta, &fam, &GroupElement::IDENTITY, 0.5, target, &spec).unwrap();
        assert!(r.reached && r.count >= target);
        assert!(r.energy_ratio >= 0.9, "{}", r.energy_ratio);
    }

    #[test]
    fn regular_family_cannot_reach_a_large_target() {
        let fam = FamilySpec::new(FamilyKind::Regular, 2.0, 1.0, 1.0).unwrap();
        let eta = unit_probe().unwrap();
        let spec = WitnessSpec { max_steps: 12, ..WitnessSpec::default() };
        let r = upper_bound_witness(&gen(), &eta, &fam, &GroupElement::IDENTITY, 0.5, 1000.0, &spec).unwrap();
        assert!(!r.reached && r.best_count < 1000.0);
    }
}
