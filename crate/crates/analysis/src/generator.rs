//! Band-limited shearlet generators and closed-form spectra.
//!
//! Fourier convention: `f̂(ξ) = ∫ f(x) e^{-2πi⟨x,ξ⟩} dx`. A group element acts by
//! `σ(a,s,t)f(x) = a^{3/4} f(S_s A_a x - t)`, so
//! `(σ(g)f)^(ξ) = a^{-3/4} e^{-2πi⟨M⁻¹t,ξ⟩} f̂(M^{-T}ξ)` with `M = S_s A_a`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use shearlet_core::quad::composite;
use shearlet_core::{GroupElement, Vec2};

use crate::error::{AnalysisError, Result};

/// `M^{-T}ξ = (ξ₁/a, (ξ₂ - sξ₁/√a)/√a)`.
#[inline]
pub fn warp_frequency(a: f64, s: f64, xi: Vec2) -> Vec2 {
    let sa = a.sqrt();
    [xi[0] / a, (xi[1] - s * xi[0] / sa) / sa]
}

/// `M^T η = (aη₁, √a(sη₁ + η₂))`, the inverse of [`warp_frequency`].
#[inline]
pub fn unwarp_frequency(a: f64, s: f64, eta: Vec2) -> Vec2 {
    [a * eta[0], a.sqrt() * (s * eta[0] + eta[1])]
}

/// Smooth bump `exp(4 - 1/(x(1-x)))` on `x = (u-lo)/(hi-lo) ∈ (0,1)`, peak value 1.
///
/// It is the product of the two transitions `e^{-1/x}` and `e^{-1/(1-x)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
}

impl Bump {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(AnalysisError::InvalidParameter(format!("bump needs lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Bump { lo, hi })
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let x = (u - self.lo) / (self.hi - self.lo);
        if x <= 0.0 || x >= 1.0 {
            return 0.0;
        }
        (4.0 - 1.0 / (x * (1.0 - x))).exp()
    }

    #[inline]
    pub fn ln_eval(&self, u: f64) -> f64 {
        let x = (u - self.lo) / (self.hi - self.lo);
        if x <= 0.0 || x >= 1.0 {
            return f64::NEG_INFINITY;
        }
        4.0 - 1.0 / (x * (1.0 - x))
    }
}

/// A frequency-side description of a band-limited function.
pub trait Spectrum: Send + Sync {
    fn eval(&self, xi: Vec2) -> Complex64;
    /// Signed `ξ₁` intervals covering the support.
    fn xi1_intervals(&self) -> Vec<(f64, f64)>;
    /// Bounding rectangle `[(ξ₁ lo, hi), (ξ₂ lo, hi)]` of the support.
    fn bounding_box(&self) -> [(f64, f64); 2];
}

impl<T: Spectrum + ?Sized> Spectrum for &T {
    fn eval(&self, xi: Vec2) -> Complex64 {
        (**self).eval(xi)
    }
    fn xi1_intervals(&self) -> Vec<(f64, f64)> {
        (**self).xi1_intervals()
    }
    fn bounding_box(&self) -> [(f64, f64); 2] {
        (**self).bounding_box()
    }
}

impl<T: Spectrum + ?Sized> Spectrum for Box<T> {
    fn eval(&self, xi: Vec2) -> Complex64 {
        (**self).eval(xi)
    }
    fn xi1_intervals(&self) -> Vec<(f64, f64)> {
        (**self).xi1_intervals()
    }
    fn bounding_box(&self) -> [(f64, f64); 2] {
        (**self).bounding_box()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub a0: f64,
    pub a1: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams { a0: 1.0, a1: 2.0, b: 1.0, alpha: 2.0, beta: 11.0 }
    }
}

impl GeneratorParams {
    /// Checks the class constraints. `allow_weak_beta` relaxes `β > 4α + 2` to `β > 4α`.
    pub fn validate(&self, allow_weak_beta: bool) -> Result<()> {
        let p = self;
        let bad = |m: String| Err(AnalysisError::InvalidParameter(m));
        if ![p.a0, p.a1, p.b, p.alpha, p.beta].iter().all(|v| v.is_finite()) {
            return bad("generator parameters must be finite".into());
        }
        if !(p.a0 > 0.0) {
            return bad(format!("requires 0 < a0, got a0 = {}", p.a0));
        }
        if !(p.a0 < p.a1) {
            return bad(format!("requires a0 < a1, got a0 = {}, a1 = {}", p.a0, p.a1));
        }
        if !(p.b > 0.0) {
            return bad(format!("requires b > 0, got b = {}", p.b));
        }
        if !(p.alpha > 1.5) {
            return bad(format!("requires alpha > 3/2, got alpha = {}", p.alpha));
        }
        if allow_weak_beta {
            if !(p.beta > 4.0 * p.alpha) {
                return bad(format!("requires beta > 4*alpha, got beta = {}, 4*alpha = {}", p.beta, 4.0 * p.alpha));
            }
        } else if !(p.beta > 4.0 * p.alpha + 2.0) {
            return bad(format!(
                "requires beta > 4*alpha + 2, got beta = {}, 4*alpha + 2 = {}",
                p.beta,
                4.0 * p.alpha + 2.0
            ));
        }
        Ok(())
    }
}

/// Frequency envelope `|ξ₁|^{2β} / (1 + ‖ξ‖∞²)^{2β}`.
pub fn frequency_bound(beta: f64, xi: Vec2) -> f64 {
    ln_frequency_bound(beta, xi).exp()
}

fn ln_frequency_bound(beta: f64, xi: Vec2) -> f64 {
    let ninf = xi[0].abs().max(xi[1].abs());
    2.0 * beta * (xi[0].abs().ln() - (1.0 + ninf * ninf).ln())
}

/// Grid used to calibrate the amplitude.
pub const KAPPA_GRID: usize = 512;
pub const KAPPA_SAFETY: f64 = 0.9;

/// `ψ̂(ξ) = κ·B₁(|ξ₁|)·B₂(ξ₂)`, real and even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShearletGenerator {
    params: GeneratorParams,
    kappa: f64,
    band1: Bump,
    band2: Bump,
}

impl ShearletGenerator {
    pub fn new(params: GeneratorParams) -> Result<Self> {
        Self::with_options(params, false)
    }

    pub fn with_options(params: GeneratorParams, allow_weak_beta: bool) -> Result<Self> {
        params.validate(allow_weak_beta)?;
        let band1 = Bump::new(params.a0, params.a1)?;
        let band2 = Bump::new(-params.b, params.b)?;
        let mut gen = ShearletGenerator { params, kappa: 1.0, band1, band2 };
        gen.kappa = KAPPA_SAFETY * gen.min_envelope_ratio(KAPPA_GRID);
        Ok(gen)
    }

    /// Same profile with a different amplitude.
    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self
    }

    pub fn params(&self) -> &GeneratorParams {
        &self.params
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Minimum of envelope/profile over cell midpoints of an `n × n` grid on the positive support.
    fn min_envelope_ratio(&self, n: usize) -> f64 {
        let p = &self.params;
        let (d1, d2) = ((p.a1 - p.a0) / n as f64, 2.0 * p.b / n as f64);
        let mut best = f64::INFINITY;
        for i in 0..n {
            let x1 = p.a0 + (i as f64 + 0.5) * d1;
            let l1 = self.band1.ln_eval(x1);
            for j in 0..n {
                let x2 = -p.b + (j as f64 + 0.5) * d2;
                let ln_profile = l1 + self.band2.ln_eval(x2);
                best = best.min(ln_frequency_bound(p.beta, [x1, x2]) - ln_profile);
            }
        }
        best.exp()
    }

    /// Unit-amplitude profile `B₁(|ξ₁|)B₂(ξ₂)`.
    #[inline]
    pub fn profile(&self, xi: Vec2) -> f64 {
        let b1 = self.band1.eval(xi[0].abs());
        if b1 == 0.0 {
            return 0.0;
        }
        b1 * self.band2.eval(xi[1])
    }

    #[inline]
    pub fn psi_hat(&self, xi: Vec2) -> f64 {
        self.kappa * self.profile(xi)
    }

    /// `ψ̂` of the shearlet at `g`, without the translation phase and the `a^{-3/4}` factor.
    #[inline]
    pub fn warped(&self, a: f64, s: f64, xi: Vec2) -> f64 {
        self.psi_hat(warp_frequency(a, s, xi))
    }

    /// Full spectrum of `σ(g)ψ`.
    pub fn shearlet_hat(&self, g: &GroupElement, xi: Vec2) -> Complex64 {
        let v = self.warped(g.a(), g.s(), xi);
        if v == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let c = g.center();
        let phase = -2.0 * PI * (c[0] * xi[0] + c[1] * xi[1]);
        Complex64::from_polar(g.a().powf(-0.75) * v, phase)
    }

    /// Bounding rectangle of the support of `ψ̂(M^{-T}·)` at `(a, s)`.
    pub fn warped_bounding_box(&self, a: f64, s: f64) -> [(f64, f64); 2] {
        let p = &self.params;
        let x1 = (a * p.a0, a * p.a1);
        let sa = a.sqrt();
        let reach = s.abs() * x1.1 / sa + p.b * sa;
        [(-x1.1, x1.1), (-reach, reach)]
    }

    pub fn spatial_tables(&self, range1: f64, range2: f64, step: f64) -> Result<SpatialTables> {
        if !(range1 > 0.0 && range2 > 0.0 && step > 0.0) {
            return Err(AnalysisError::InvalidParameter("table ranges and step must be positive".into()));
        }
        let p = &self.params;
        // φ₁(y) = 2∫ B₁(u) cos(2πyu) du over [a0, a1], φ₂(y) = ∫ B₂(v) cos(2πyv) dv over [-b, b]
        let phi1 = HermiteTable::build(self.band1, p.a0, p.a1, 2.0, range1, step);
        let phi2 = HermiteTable::build(self.band2, -p.b, p.b, 1.0, range2, step);
        Ok(SpatialTables { kappa: self.kappa, phi1, phi2 })
    }
}

impl Spectrum for ShearletGenerator {
    fn eval(&self, xi: Vec2) -> Complex64 {
        Complex64::new(self.psi_hat(xi), 0.0)
    }
    fn xi1_intervals(&self) -> Vec<(f64, f64)> {
        vec![(-self.params.a1, -self.params.a0), (self.params.a0, self.params.a1)]
    }
    fn bounding_box(&self) -> [(f64, f64); 2] {
        [(-self.params.a1, self.params.a1), (-self.params.b, self.params.b)]
    }
}

/// Separable bump `amp·B(ξ₁)·B(ξ₂)`, optionally mirrored to `ξ₁ < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BumpSpectrum {
    pub xi1: Bump,
    pub xi2: Bump,
    pub mirrored: bool,
    pub amp: f64,
}

impl BumpSpectrum {
    pub fn new(xi1: (f64, f64), xi2: (f64, f64), mirrored: bool, amp: f64) -> Result<Self> {
        let b1 = Bump::new(xi1.0, xi1.1)?;
        if mirrored && xi1.0 < 0.0 {
            return Err(AnalysisError::InvalidParameter("mirrored bump needs a positive ξ₁ band".into()));
        }
        Ok(BumpSpectrum { xi1: b1, xi2: Bump::new(xi2.0, xi2.1)?, mirrored, amp })
    }
}

impl Spectrum for BumpSpectrum {
    fn eval(&self, xi: Vec2) -> Complex64 {
        let mut v = self.xi1.eval(xi[0]);
        if self.mirrored {
            v += self.xi1.eval(-xi[0]);
        }
        Complex64::new(self.amp * v * self.xi2.eval(xi[1]), 0.0)
    }
    fn xi1_intervals(&self) -> Vec<(f64, f64)> {
        let mut v = vec![(self.xi1.lo, self.xi1.hi)];
        if self.mirrored {
            v.insert(0, (-self.xi1.hi, -self.xi1.lo));
        }
        v
    }
    fn bounding_box(&self) -> [(f64, f64); 2] {
        let lo = if self.mirrored { -self.xi1.hi } else { self.xi1.lo };
        [(lo, self.xi1.hi), (self.xi2.lo, self.xi2.hi)]
    }
}

/// `σ(g)f` for a closed-form `f`.
#[derive(Debug, Clone)]
pub struct Warped<S> {
    pub base: S,
    pub g: GroupElement,
}

impl<S: Spectrum> Spectrum for Warped<S> {
    fn eval(&self, xi: Vec2) -> Complex64 {
        let (a, s) = (self.g.a(), self.g.s());
        let v = self.base.eval(warp_frequency(a, s, xi));
        if v == Complex64::new(0.0, 0.0) {
            return v;
        }
        let c = self.g.center();
        v * Complex64::from_polar(a.powf(-0.75), -2.0 * PI * (c[0] * xi[0] + c[1] * xi[1]))
    }
    fn xi1_intervals(&self) -> Vec<(f64, f64)> {
        let a = self.g.a();
        self.base.xi1_intervals().into_iter().map(|(l, h)| (a * l, a * h)).collect()
    }
    fn bounding_box(&self) -> [(f64, f64); 2] {
        let [(l1, h1), (l2, h2)] = self.base.bounding_box();
        let (a, s) = (self.g.a(), self.g.s());
        let corners = [[l1, l2], [l1, h2], [h1, l2], [h1, h2]].map(|e| unwarp_frequency(a, s, e));
        let fold = |i: usize| {
            corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c[i]), hi.max(c[i])))
        };
        [fold(0), fold(1)]
    }
}

/// Cubic Hermite table of an even function on `[0, range]`, zero beyond.
#[derive(Debug, Clone)]
pub struct HermiteTable {
    step: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl HermiteTable {
    /// Tabulates `y ↦ factor·∫ B(u) cos(2πyu) du` over `[lo, hi]`.
    fn build(bump: Bump, lo: f64, hi: f64, factor: f64, range: f64, step: f64) -> Self {
        let n = (range / step).ceil() as usize + 1;
        let width = hi - lo;
        let panels = (width * (8.0 + 2.0 * range * hi.abs().max(lo.abs()))).ceil() as usize;
        let nodes: Vec<(f64, f64)> = composite(lo, hi, panels.max(8), 12)
            .into_iter()
            .map(|(u, w)| (u, w * bump.eval(u)))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        let mut values = vec![0.0; n];
        let mut derivs = vec![0.0; n];
        for i in 0..n {
            let y = i as f64 * step;
            let (mut v, mut d) = (0.0, 0.0);
            for &(u, w) in &nodes {
                let (sn, cs) = (2.0 * PI * y * u).sin_cos();
                v += w * cs;
                d -= w * 2.0 * PI * u * sn;
            }
            values[i] = factor * v;
            derivs[i] = factor * d;
        }
        HermiteTable { step, values, derivs }
    }

    pub fn range(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        let y = y.abs();
        let pos = y / self.step;
        let i = pos as usize;
        if i + 1 >= self.values.len() {
            return 0.0;
        }
        let u = pos - i as f64;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.values[i]
            + h10 * self.step * self.derivs[i]
            + h01 * self.values[i + 1]
            + h11 * self.step * self.derivs[i + 1]
    }
}

/// Tabulated spatial form `ψ(x) = κ φ₁(x₁) φ₂(x₂)`.
#[derive(Debug, Clone)]
pub struct SpatialTables {
    kappa: f64,
    pub phi1: HermiteTable,
    pub phi2: HermiteTable,
}

impl SpatialTables {
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    #[inline]
    pub fn psi(&self, x: Vec2) -> f64 {
        let p2 = self.phi2.eval(x[1]);
        if p2 == 0.0 {
            return 0.0;
        }
        self.kappa * self.phi1.eval(x[0]) * p2
    }
}

/// Table ranges beyond which the spatial factors are treated as zero.
pub const DEFAULT_TABLE_RANGE: (f64, f64) = (32.0, 24.0);
pub const DEFAULT_TABLE_STEP: f64 = 1.0 / 256.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_generator_is_valid() {
        let g = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        assert!(g.kappa() > 0.0);
        assert_eq!(g.psi_hat([0.5, 0.0]), 0.0);
        assert_eq!(g.psi_hat([1.5, 1.0]), 0.0);
        assert!(g.psi_hat([1.5, 0.0]) > 0.0);
        assert_eq!(g.psi_hat([1.3, 0.2]), g.psi_hat([-1.3, -0.2]));
    }

    #[test]
    fn beta_constraint_is_strict() {
        let p = GeneratorParams { beta: 10.0, ..GeneratorParams::default() };
        let err = ShearletGenerator::new(p).unwrap_err();
        assert!(err.to_string().contains("beta > 4*alpha + 2"), "{err}");
        assert!(ShearletGenerator::with_options(p, true).is_ok());
        let p = GeneratorParams { beta: 8.0, ..GeneratorParams::default() };
        assert!(ShearletGenerator::with_options(p, true).is_err());
        let p = GeneratorParams { alpha: 1.5, ..GeneratorParams::default() };
        assert!(ShearletGenerator::new(p).unwrap_err().to_string().contains("alpha > 3/2"));
    }

    #[test]
    fn envelope_holds_on_calibration_grid() {
        let g = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let p = g.params();
        let n = KAPPA_GRID;
        for i in 0..n {
            for j in 0..n {
                let xi = [p.a0 + (i as f64 + 0.5) / n as f64, -1.0 + 2.0 * (j as f64 + 0.5) / n as f64];
                assert!(g.psi_hat(xi) <= frequency_bound(p.beta, xi));
            }
        }
    }

    #[test]
    fn warp_round_trip() {
        let xi = [1.3, -0.4];
        let e = warp_frequency(2.5, -0.7, xi);
        let back = unwarp_frequency(2.5, -0.7, e);
        assert!((back[0] - xi[0]).abs() < 1e-14 && (back[1] - xi[1]).abs() < 1e-14);
    }

    #[test]
    fn warped_spectrum_matches_shearlet_formula() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let g = GroupElement::new(1.7, 0.4, [0.3, -1.1]).unwrap();
        let w = Warped { base: gen.clone(), g };
        for xi in [[2.0, 0.5], [-2.4, 1.0], [3.0, 0.0]] {
            assert!((w.eval(xi) - gen.shearlet_hat(&g, xi)).norm() < 1e-20);
        }
        let [(l1, h1), _] = w.bounding_box();
        assert!((l1 + 3.4).abs() < 1e-12 && (h1 - 3.4).abs() < 1e-12);
    }

    #[test]
    fn spatial_table_matches_direct_integral() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let tab = gen.spatial_tables(8.0, 8.0, 1.0 / 128.0).unwrap();
        let direct = |y: f64| {
            let nodes = composite(1.0, 2.0, 200, 10);
            2.0 * nodes.iter().map(|&(u, w)| w * Bump::new(1.0, 2.0).unwrap().eval(u) * (2.0 * PI * y * u).cos()).sum::<f64>()
        };
        for y in [0.0, 0.3337, 1.71, -2.05, 5.5] {
            assert!((tab.phi1.eval(y) - direct(y)).abs() < 1e-7, "y={y}");
        }
        assert_eq!(tab.phi1.eval(9.0), 0.0);
    }
}
