//! Frame operator of a weighted shearlet system restricted to a band of DFT modes.
//!
//! Coordinates: a band-limited `f` on the torus `[-L, L)²` is the vector
//! `y_k = f̂(ξ_k) Δξ` over the band modes, so `⟨f, g⟩ = Σ y_k conj(z_k)`.
//! The shearlet `ψ_λ` enters as `v_λ(k) = √w ψ̂_λ(ξ_k) Δξ`, which is its
//! periodization projected onto the band.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use shearlet_core::{FamilyKind, FamilySpec, GroupElement, ParamSet, Vec2, WeightedPoint};

use crate::error::{AnalysisError, Result};
use crate::generator::{ShearletGenerator, Spectrum};
use crate::grid::GridFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `a0 ≤ |ξ₁| ≤ a1`, `|ξ₂| ≤ b` in frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub xi1_min: f64,
    pub xi1_max: f64,
    pub xi2_max: f64,
}

#[derive(Debug, Clone)]
pub struct Surrogate {
    l: f64,
    n: usize,
    dxi: f64,
    band: Band,
    /// Integer frequencies `(k₁, k₂)` of the band modes, row-major in `k₂`.
    modes: Vec<[i64; 2]>,
    k2_range: (i64, i64),
    /// Position of `(k₁, k₂)` in `modes`, dense over the bounding box.
    lookup: Vec<Option<usize>>,
    k1_max: i64,
}

impl Surrogate {
    pub fn new(l: f64, n: usize, band: Band) -> Result<Self> {
        if !(l > 0.0) || n < 4 || n % 2 != 0 {
            return Err(AnalysisError::InvalidParameter(format!("invalid surrogate grid l={l}, n={n}")));
        }
        if !(band.xi1_min >= 0.0 && band.xi1_max > band.xi1_min && band.xi2_max >= 0.0) {
            return Err(AnalysisError::InvalidParameter(format!("invalid band {band:?}")));
        }
        let dxi = 1.0 / (2.0 * l);
        let nyq = n as f64 * dxi / 2.0;
        if band.xi1_max >= nyq || band.xi2_max >= nyq {
            return Err(AnalysisError::Coverage(format!("band {band:?} exceeds the frequency window ±{nyq}")));
        }
        let eps = 1e-9;
        let k1_max = (band.xi1_max / dxi + eps).floor() as i64;
        let k1_min = (band.xi1_min / dxi - eps).ceil() as i64;
        let k2_max = (band.xi2_max / dxi + eps).floor() as i64;
        let width = (2 * k1_max + 1) as usize;
        let mut lookup = vec![None; width * (2 * k2_max + 1) as usize];
        let mut modes = Vec::new();
        for k2 in -k2_max..=k2_max {
            for k1 in -k1_max..=k1_max {
                if k1.abs() >= k1_min {
                    lookup[((k2 + k2_max) as usize) * width + (k1 + k1_max) as usize] = Some(modes.len());
                    modes.push([k1, k2]);
                }
            }
        }
        if modes.is_empty() {
            return Err(AnalysisError::InvalidParameter(format!("band {band:?} holds no grid modes")));
        }
        Ok(Surrogate { l, n, dxi, band, modes, k2_range: (-k2_max, k2_max), lookup, k1_max })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> Band {
        self.band
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn xi(&self, i: usize) -> Vec2 {
        let [k1, k2] = self.modes[i];
        [k1 as f64 * self.dxi, k2 as f64 * self.dxi]
    }

    fn position(&self, k1: i64, k2: i64) -> Option<usize> {
        if k1.abs() > self.k1_max || k2 < self.k2_range.0 || k2 > self.k2_range.1 {
            return None;
        }
        let width = (2 * self.k1_max + 1) as usize;
        self.lookup[((k2 - self.k2_range.0) as usize) * width + (k1 + self.k1_max) as usize]
    }

    /// Band coordinates of a closed-form spectrum.
    pub fn coords(&self, f: &dyn Spectrum) -> DVector<Complex64> {
        DVector::from_iterator(self.dim(), (0..self.dim()).map(|i| f.eval(self.xi(i)) * self.dxi))
    }

    /// Band coordinates of a sampled function on the same torus.
    pub fn coords_grid(&self, f: &GridFunction) -> Result<DVector<Complex64>> {
        if f.n() != self.n || (f.l() - self.l).abs() > 1e-12 * self.l {
            return Err(AnalysisError::InvalidParameter("grid function does not match the surrogate torus".into()));
        }
        let h = (self.n / 2) as i64;
        Ok(DVector::from_iterator(
            self.dim(),
            self.modes.iter().map(|&[k1, k2]| f.freq_at((k1 + h) as usize, (k2 + h) as usize) * self.dxi),
        ))
    }

    /// Nonzero entries of `v_λ`, the band projection of `√w σ(g)ψ`.
    pub fn vector(&self, gen: &ShearletGenerator, g: &GroupElement, w: f64) -> Vec<(usize, Complex64)> {
        let (a, s) = (g.a(), g.s());
        let p = gen.params();
        let sa = a.sqrt();
        let mut out = Vec::new();
        let amp = w.sqrt() * self.dxi;
        for sign in [-1.0, 1.0] {
            // ξ₁ = a η₁ with |η₁| ∈ [a0, a1]
            let lo = ((a * p.a0 / self.dxi).floor() as i64).max(0);
            let hi = ((a * p.a1 / self.dxi).ceil() as i64).min(self.k1_max);
            for kk in lo..=hi {
                let k1 = if sign < 0.0 { -kk } else { kk };
                if k1 == 0 && sign < 0.0 {
                    continue;
                }
                let xi1 = k1 as f64 * self.dxi;
                // ξ₂ = √a (η₂ + s ξ₁/a) with |η₂| ≤ b
                let mid = s * xi1 / sa;
                let r = p.b * sa;
                let k2_lo = (((mid - r) / self.dxi).floor() as i64).max(self.k2_range.0);
                let k2_hi = (((mid + r) / self.dxi).ceil() as i64).min(self.k2_range.1);
                for k2 in k2_lo..=k2_hi {
                    let Some(pos) = self.position(k1, k2) else { continue };
                    let v = gen.shearlet_hat(g, [xi1, k2 as f64 * self.dxi]);
                    if v != ZERO {
                        out.push((pos, v * amp));
                    }
                }
            }
        }
        out
    }

    /// `S = Σ w v_λ v_λ^*` over the points.
    pub fn frame_operator(&self, gen: &ShearletGenerator, points: &[WeightedPoint]) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut s = DMatrix::from_element(d, d, ZERO);
        for p in points {
            let v = self.vector(gen, &p.g, p.w);
            for &(i, vi) in &v {
                for &(k, vk) in &v {
                    s[(i, k)] += vi * vk.conj();
                }
            }
        }
        s
    }

    /// `⟨y, v_λ⟩` for every point.
    pub fn coefficients(&self, gen: &ShearletGenerator, points: &[WeightedPoint], y: &DVector<Complex64>) -> Vec<Complex64> {
        points
            .iter()
            .map(|p| self.vector(gen, &p.g, p.w).iter().fold(ZERO, |acc, &(i, v)| acc + y[i] * v.conj()))
            .collect()
    }

    /// Points of `family` whose shearlets meet the band, with translations folded so the
    /// centres `M⁻¹t` lie in the torus `[-L, L)²`.
    pub fn family_points(&self, gen: &ShearletGenerator, family: &FamilySpec) -> Result<ParamSet> {
        family.validate()?;
        if family.kind == FamilyKind::TildeRegular {
            return Err(AnalysisError::InvalidParameter(
                "tilde_regular points are not of the form T m and cannot be folded onto the torus".into(),
            ));
        }
        let p = gen.params();
        let ln_a = family.a.ln();
        let j_lo = ((self.band.xi1_min.max(self.dxi) / p.a1).ln() / ln_a).floor() as i64;
        let j_hi = ((self.band.xi1_max / p.a0).ln() / ln_a).ceil() as i64;
        let mut points = Vec::new();
        for j in j_lo..=j_hi {
            let a = family.ln_scale(j).exp();
            let sa = a.sqrt();
            // |ξ₂| = √a |η₂ + s η₁| ≤ xi2_max needs |s| a0 - b ≤ xi2_max / √a
            let s_max = (self.band.xi2_max / sa + p.b) / p.a0;
            let k_max = (s_max / family.b).ceil() as i64 + 1;
            for k in -k_max..=k_max {
                let probe = family.point(j, k, [0, 0]).g;
                if self.vector(gen, &probe, 1.0).is_empty() {
                    continue;
                }
                let s = probe.s();
                let tm = family.translation_matrix(j, k);
                // centre = M⁻¹ T m = [[t11/a, (t12 - s t22)/a], [0, t22/√a]] m
                let (p11, p12, p22) = (tm.t11 / a, (tm.t12 - s * tm.t22) / a, tm.t22 / sa);
                let m2_lo = (-self.l / p22).ceil() as i64;
                let m2_hi = (self.l / p22).ceil() as i64 - 1;
                for m2 in m2_lo..=m2_hi {
                    let off = p12 * m2 as f64;
                    let m1_lo = ((-self.l - off) / p11).ceil() as i64;
                    let m1_hi = ((self.l - off) / p11).ceil() as i64 - 1;
                    for m1 in m1_lo..=m1_hi {
                        let pt = family.point(j, k, [m1, m2]);
                        let c = pt.g.center();
                        if c[0] >= -self.l && c[0] < self.l && c[1] >= -self.l && c[1] < self.l {
                            points.push(pt);
                        }
                    }
                }
            }
        }
        Ok(ParamSet { family: Some(family.clone()), window: None, points })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationBudget {
    pub max_iter: usize,
    /// Relative change of the eigenvalue estimate at which iteration stops.
    pub tol: f64,
    /// Random test vectors for the lower-bound Rayleigh quotients.
    pub samples: usize,
    pub seed: u64,
}

impl Default for IterationBudget {
    fn default() -> Self {
        IterationBudget { max_iter: 5000, tol: 1e-12, samples: 64, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameEstimate {
    pub a_est: f64,
    pub b_est: f64,
    pub dim: usize,
    pub b_iterations: usize,
    pub b_residual: f64,
    pub b_converged: bool,
    pub a_iterations: usize,
    pub a_residual: f64,
    pub a_converged: bool,
    /// Smallest Rayleigh quotient over the random test vectors.
    pub a_random_min: f64,
    /// False when the Cholesky factorization failed and `A` was set to 0.
    pub positive_definite: bool,
}

impl FrameEstimate {
    pub fn converged(&self) -> bool {
        self.b_converged && self.a_converged
    }
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> DVector<Complex64> {
    DVector::from_iterator(
        d,
        (0..d).map(|_| Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))),
    )
}

fn rayleigh(s: &DMatrix<Complex64>, x: &DVector<Complex64>) -> f64 {
    (x.dotc(&(s * x))).re / x.norm_squared()
}

/// Upper bound by power iteration, lower bound by random Rayleigh quotients refined with
/// inverse iteration at shift 0.
pub fn frame_bounds(s: &DMatrix<Complex64>, budget: &IterationBudget) -> Result<FrameEstimate> {
    let d = s.nrows();
    if d == 0 || s.ncols() != d {
        return Err(AnalysisError::InvalidParameter("frame operator must be a nonempty square matrix".into()));
    }
    if budget.max_iter == 0 || budget.samples == 0 {
        return Err(AnalysisError::InvalidParameter("iteration budget must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);

    let mut x = random_vector(&mut rng, d);
    x /= Complex64::from(x.norm());
    let mut lam = 0.0;
    let mut b_iterations = 0;
    let mut b_converged = false;
    for it in 1..=budget.max_iter {
        let y = s * &x;
        let nl = x.dotc(&y).re;
        let ny = y.norm();
        b_iterations = it;
        if ny == 0.0 {
            lam = 0.0;
            b_converged = true;
            break;
        }
        x = y / Complex64::from(ny);
        if it > 1 && (nl - lam).abs() <= budget.tol * nl.abs() {
            lam = nl;
            b_converged = true;
            break;
        }
        lam = nl;
    }
    let b_est = rayleigh(s, &x).max(lam);
    let b_residual = (s * &x - &x * Complex64::from(b_est)).norm();

    let mut a_random_min = f64::INFINITY;
    for _ in 0..budget.samples {
        a_random_min = a_random_min.min(rayleigh(s, &random_vector(&mut rng, d)));
    }

    let (a_est, a_iterations, a_residual, a_converged, positive_definite) = match s.clone().cholesky() {
        None => (0.0, 0, 0.0, true, false),
        Some(ch) => {
            let mut x = random_vector(&mut rng, d);
            x /= Complex64::from(x.norm());
            let mut mu = rayleigh(s, &x);
            let mut iters = 0;
            let mut conv = false;
            for it in 1..=budget.max_iter {
                let y = ch.solve(&x);
                let ny = y.norm();
                x = y / Complex64::from(ny);
                let nm = rayleigh(s, &x);
                iters = it;
                if (nm - mu).abs() <= budget.tol * nm.abs() {
                    mu = nm;
                    conv = true;
                    break;
                }
                mu = nm;
            }
            let res = (s * &x - &x * Complex64::from(mu)).norm();
            if mu > 0.0 {
                (mu.min(a_random_min), iters, res, conv, true)
            } else {
                (0.0, iters, res, conv, false)
            }
        }
    };
    Ok(FrameEstimate {
        a_est: a_est.clamp(0.0, b_est),
        b_est,
        dim: d,
        b_iterations,
        b_residual,
        b_converged,
        a_iterations,
        a_residual,
        a_converged,
        a_random_min,
        positive_definite,
    })
}
