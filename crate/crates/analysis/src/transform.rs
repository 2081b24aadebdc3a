//! The continuous shearlet transform `T(f, g) = ⟨f, σ(g)ψ⟩`.
//!
//! Three evaluation paths:
//! * grid path: `Σ_k f̂_k conj(ψ̂_g(ξ_k)) Δξ²` over the warped support, the primary one;
//! * spatial oracle: `Σ_n f(x_n) ψ_g(x_n) dx²` with `ψ_g` periodized over the torus;
//! * quadrature path for closed-form spectra, `a^{3/4} ∫ f̂(M^Tη) ψ̂(η) e^{2πi⟨t,η⟩} dη`
//!   over the support of `ψ̂`, with no periodization at all.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use shearlet_core::quad::composite;
use shearlet_core::{GroupElement, Vec2};

use crate::error::{AnalysisError, Result};
use crate::generator::{unwarp_frequency, warp_frequency, ShearletGenerator, SpatialTables, Spectrum};
use crate::grid::GridFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `M⁻¹t` for `M = S_s A_a`.
#[inline]
pub fn center_of(a: f64, s: f64, t: Vec2) -> Vec2 {
    [(t[0] - s * t[1]) / a, t[1] / a.sqrt()]
}

/// `M c`, the translation whose shearlet is centred at `c`.
#[inline]
pub fn translation_of(a: f64, s: f64, c: Vec2) -> Vec2 {
    let sa = a.sqrt();
    [a * c[0] + s * sa * c[1], sa * c[1]]
}

fn check_coverage(gen: &ShearletGenerator, f: &GridFunction, a: f64, s: f64) -> Result<()> {
    let [(l1, h1), (l2, h2)] = gen.warped_bounding_box(a, s);
    let lim = f.nyquist();
    if l1 < -lim || h1 >= lim || l2 < -lim || h2 >= lim {
        return Err(AnalysisError::Coverage(format!(
            "warped support at a={a}, s={s} spans [{l1:.4}, {h1:.4}] x [{l2:.4}, {h2:.4}], window is [-{lim}, {lim})"
        )));
    }
    Ok(())
}

/// Nonzero products `f̂_k ψ̂(M^{-T}ξ_k)` with their frequencies.
fn products(gen: &ShearletGenerator, f: &GridFunction, a: f64, s: f64) -> Result<Vec<(Vec2, Complex64)>> {
    check_coverage(gen, f, a, s)?;
    let p = gen.params();
    let dxi = f.dxi();
    let sa = a.sqrt();
    let mut out = Vec::new();
    let k_lo = (a * p.a0 / dxi).floor() as i64;
    let k_hi = (a * p.a1 / dxi).ceil() as i64;
    for sign in [-1i64, 1] {
        for kk in k_lo..=k_hi {
            let k1 = sign * kk;
            let Some(i1) = f.freq_index(k1) else { continue };
            let xi1 = f.xi(i1);
            let mid = s * xi1 / sa;
            let r = p.b * sa;
            let (lo, hi) = (((mid - r) / dxi).floor() as i64, ((mid + r) / dxi).ceil() as i64);
            for k2 in lo..=hi {
                let Some(i2) = f.freq_index(k2) else { continue };
                let fv = f.freq_at(i1, i2);
                if fv == ZERO {
                    continue;
                }
                let xi = [xi1, f.xi(i2)];
                let w = gen.warped(a, s, xi);
                if w != 0.0 {
                    out.push((xi, fv * w));
                }
            }
        }
    }
    Ok(out)
}

#[inline]
fn sum_at(prods: &[(Vec2, Complex64)], c: Vec2) -> Complex64 {
    let mut acc = ZERO;
    for &(xi, v) in prods {
        acc += v * Complex64::from_polar(1.0, 2.0 * PI * (c[0] * xi[0] + c[1] * xi[1]));
    }
    acc
}

/// Grid-path transform at one group element.
pub fn transform_point(gen: &ShearletGenerator, f: &GridFunction, g: &GroupElement) -> Result<Complex64> {
    let prods = products(gen, f, g.a(), g.s())?;
    let d = f.dxi();
    Ok(sum_at(&prods, g.center()) * (g.a().powf(-0.75) * d * d))
}

/// Grid-path transform at fixed `(a, s)` for every translation in `ts`, sharing one pass over the support.
pub fn transform_slice(gen: &ShearletGenerator, f: &GridFunction, a: f64, s: f64, ts: &[Vec2]) -> Result<Vec<Complex64>> {
    if !(a > 0.0 && a.is_finite() && s.is_finite()) {
        return Err(AnalysisError::InvalidParameter(format!("invalid scale/shear ({a}, {s})")));
    }
    let prods = products(gen, f, a, s)?;
    let d = f.dxi();
    let scale = a.powf(-0.75) * d * d;
    Ok(ts.par_iter().map(|&t| sum_at(&prods, center_of(a, s, t)) * scale).collect())
}

/// Transform at fixed `(a, s)` for all translations whose centres `M⁻¹t` sit on the sample grid.
///
/// Returns values in the sample layout of `f`; the translation of entry `(i1, i2)` is
/// `translation_of(a, s, [x(i1), x(i2)])`.
pub fn transform_centers(gen: &ShearletGenerator, f: &GridFunction, a: f64, s: f64) -> Result<Vec<Complex64>> {
    let prods = products(gen, f, a, s)?;
    let n = f.n();
    let mut q = vec![ZERO; n * n];
    let h = (n / 2) as f64;
    let scale = a.powf(-0.75);
    for (xi, v) in prods {
        let i1 = (xi[0] / f.dxi() + h).round() as usize;
        let i2 = (xi[1] / f.dxi() + h).round() as usize;
        q[i2 * n + i1] = v * scale;
    }
    Ok(GridFunction::from_spectrum(f.l(), n, q)?.space().to_vec())
}

/// `∫ |f̂(ξ)|² |ψ̂(M^{-T}ξ)|² dξ` on the grid, which equals `∫ |T(f,(a,s,t))|² dt`.
pub fn column_energy(gen: &ShearletGenerator, f: &GridFunction, a: f64, s: f64) -> Result<f64> {
    let d = f.dxi();
    Ok(products(gen, f, a, s)?.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>() * d * d)
}

/// Spatial oracle: direct quadrature of `Σ_n f(x_n) ψ_g(x_n) dx²` with periodized, tabulated `ψ`.
pub fn transform_spatial(tables: &SpatialTables, f: &GridFunction, g: &GroupElement) -> Complex64 {
    let (a, s, t) = (g.a(), g.s(), g.t());
    let sa = a.sqrt();
    let (r1, r2) = (tables.phi1.range(), tables.phi2.range());
    let n = f.n();
    let period = 2.0 * f.l();
    let dx = f.dx();
    let samples = f.space();
    let total: Complex64 = (0..n)
        .into_par_iter()
        .map(|i2| {
            let x2 = f.x(i2);
            let mut row = ZERO;
            // y₂ = √a(x₂ + 2Lν₂) - t₂ must lie in [-r2, r2]
            let v2_lo = (((-r2 + t[1]) / sa - x2) / period).ceil() as i64;
            let v2_hi = (((r2 + t[1]) / sa - x2) / period).floor() as i64;
            for v2 in v2_lo..=v2_hi {
                let xx2 = x2 + period * v2 as f64;
                let p2 = tables.phi2.eval(sa * xx2 - t[1]);
                if p2 == 0.0 {
                    continue;
                }
                let base = s * sa * xx2 - t[0];
                let mut acc = ZERO;
                for i1 in 0..n {
                    let ax1 = a * f.x(i1);
                    let v1_lo = ((-r1 - base - ax1) / (a * period)).ceil() as i64;
                    let v1_hi = ((r1 - base - ax1) / (a * period)).floor() as i64;
                    let mut p1 = 0.0;
                    for v1 in v1_lo..=v1_hi {
                        p1 += tables.phi1.eval(ax1 + a * period * v1 as f64 + base);
                    }
                    acc += samples[i2 * n + i1] * p1;
                }
                row += acc * p2;
            }
            row
        })
        .sum();
    total * (tables.kappa() * a.powf(0.75) * dx * dx)
}

/// Quadrature nodes for the closed-form path at fixed `(a, s)`.
#[derive(Debug, Clone)]
pub struct EtaNodes {
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    /// Row-major in `η₁`: `w[q1 * eta2.len() + q2]`, including `a^{3/4}`.
    pub w: Vec<Complex64>,
}

/// Transform of a closed-form spectrum by tensor Gauss–Legendre over the support of `ψ̂`.
pub struct QuadratureTransform<'a> {
    gen: &'a ShearletGenerator,
    f: &'a dyn Spectrum,
    /// Panels per unit length before the oscillation term.
    pub base_density: f64,
    pub order: usize,
}

impl<'a> QuadratureTransform<'a> {
    pub fn new(gen: &'a ShearletGenerator, f: &'a dyn Spectrum) -> Self {
        QuadratureTransform { gen, f, base_density: 6.0, order: 10 }
    }

    /// Whether `T(f, (a, s, ·))` can be nonzero, judged per half-plane from bounding boxes.
    pub fn may_overlap(&self, a: f64, s: f64) -> bool {
        let p = self.gen.params();
        let sa = a.sqrt();
        let [_, (fl2, fh2)] = self.f.bounding_box();
        let bands = self.f.xi1_intervals();
        [(-p.a1, -p.a0), (p.a0, p.a1)].iter().any(|&(lo, hi)| {
            // ξ = (a η₁, √a (η₂ + s η₁)) over η₁ ∈ [lo, hi], |η₂| ≤ b
            let (x1, x2) = (a * lo, a * hi);
            let (e1, e2) = ((s * lo).min(s * hi), (s * lo).max(s * hi));
            let (y1, y2) = (sa * (e1 - p.b), sa * (e2 + p.b));
            fl2 < y2 && y1 < fh2 && bands.iter().any(|&(bl, bh)| bl < x2 && x1 < bh)
        })
    }

    /// Nodes resolving phases `e^{2πi⟨t,η⟩}` for `|t_i| ≤ tmax[i]`.
    pub fn nodes(&self, a: f64, s: f64, tmax: Vec2) -> EtaNodes {
        let p = self.gen.params();
        let mut eta1 = Vec::new();
        let mut wt1 = Vec::new();
        for (lo, hi) in [(-p.a1, -p.a0), (p.a0, p.a1)] {
            for (fl, fh) in self.f.xi1_intervals() {
                let (l, h) = (lo.max(fl / a), hi.min(fh / a));
                if l < h {
                    let panels = ((h - l) * (self.base_density + tmax[0])).ceil().max(1.0) as usize;
                    for (x, w) in composite(l, h, panels, self.order) {
                        eta1.push(x);
                        wt1.push(w);
                    }
                }
            }
        }
        let panels2 = (2.0 * p.b * (self.base_density + tmax[1])).ceil().max(1.0) as usize;
        let (eta2, wt2): (Vec<f64>, Vec<f64>) = composite(-p.b, p.b, panels2, self.order).into_iter().unzip();
        let amp = a.powf(0.75);
        let mut w = vec![ZERO; eta1.len() * eta2.len()];
        w.par_chunks_mut(eta2.len().max(1)).enumerate().for_each(|(q1, row)| {
            for (q2, slot) in row.iter_mut().enumerate() {
                let eta = [eta1[q1], eta2[q2]];
                let psi = self.gen.psi_hat(eta);
                if psi != 0.0 {
                    *slot = self.f.eval(unwarp_frequency(a, s, eta)) * (psi * wt1[q1] * wt2[q2] * amp);
                }
            }
        });
        EtaNodes { eta1, eta2, w }
    }

    /// Values on rows of constant `t₂`: `rows[i] = (t₂, [t₁ ...])`.
    pub fn rows(&self, a: f64, s: f64, rows: &[(f64, Vec<f64>)]) -> Vec<Vec<Complex64>> {
        let tmax = rows.iter().fold([0.0f64, 0.0f64], |m, (t2, t1s)| {
            [t1s.iter().fold(m[0], |x, v| x.max(v.abs())), m[1].max(t2.abs())]
        });
        let nodes = self.nodes(a, s, tmax);
        self.rows_with(&nodes, rows)
    }

    pub fn rows_with(&self, nodes: &EtaNodes, rows: &[(f64, Vec<f64>)]) -> Vec<Vec<Complex64>> {
        let n2 = nodes.eta2.len();
        rows.par_iter()
            .map(|(t2, t1s)| {
                let e2: Vec<Complex64> = nodes.eta2.iter().map(|&e| Complex64::from_polar(1.0, 2.0 * PI * t2 * e)).collect();
                let g: Vec<Complex64> = nodes
                    .w
                    .chunks(n2.max(1))
                    .map(|row| row.iter().zip(&e2).fold(ZERO, |acc, (w, e)| acc + w * e))
                    .collect();
                t1s.iter()
                    .map(|&t1| {
                        nodes.eta1.iter().zip(&g).fold(ZERO, |acc, (&e, gv)| acc + gv * Complex64::from_polar(1.0, 2.0 * PI * t1 * e))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn point(&self, g: &GroupElement) -> Complex64 {
        if !self.may_overlap(g.a(), g.s()) {
            return ZERO;
        }
        let t = g.t();
        self.rows(g.a(), g.s(), &[(t[1], vec![t[0]])])[0][0]
    }

    /// Values on the tensor grid `t1s × t2s`, row-major in `t₂`.
    pub fn grid(&self, a: f64, s: f64, t1s: &[f64], t2s: &[f64]) -> Vec<Complex64> {
        if !self.may_overlap(a, s) {
            return vec![ZERO; t1s.len() * t2s.len()];
        }
        let rows: Vec<(f64, Vec<f64>)> = t2s.iter().map(|&t2| (t2, t1s.to_vec())).collect();
        self.rows(a, s, &rows).into_iter().flatten().collect()
    }

    /// Values at arbitrary group elements, batched by shared `(a, s)` and `t₂`.
    pub fn batch(&self, gs: &[GroupElement]) -> Vec<Complex64> {
        let mut groups: BTreeMap<(u64, u64), BTreeMap<u64, Vec<usize>>> = BTreeMap::new();
        for (i, g) in gs.iter().enumerate() {
            groups
                .entry((g.a().to_bits(), g.s().to_bits()))
                .or_default()
                .entry(g.t()[1].to_bits())
                .or_default()
                .push(i);
        }
        let groups: Vec<_> = groups.into_iter().collect();
        let parts: Vec<Vec<(usize, Complex64)>> = groups
            .par_iter()
            .map(|((ab, sb), rows)| {
                let (a, s) = (f64::from_bits(*ab), f64::from_bits(*sb));
                if !self.may_overlap(a, s) {
                    return Vec::new();
                }
                let spec: Vec<(f64, Vec<f64>)> =
                    rows.iter().map(|(t2, ids)| (f64::from_bits(*t2), ids.iter().map(|&i| gs[i].t()[0]).collect())).collect();
                let vals = self.rows(a, s, &spec);
                rows.values().zip(vals).flat_map(|(ids, v)| ids.iter().copied().zip(v)).collect()
            })
            .collect();
        let mut out = vec![ZERO; gs.len()];
        for (i, v) in parts.into_iter().flatten() {
            out[i] = v;
        }
        out
    }

    /// `∫ |f̂|² dξ` by the same quadrature, for normalization.
    pub fn norm_sq_of(f: &dyn Spectrum, panels_per_unit: f64, order: usize) -> f64 {
        let mut total = 0.0;
        let [_, (l2, h2)] = f.bounding_box();
        let p2 = ((h2 - l2) * panels_per_unit).ceil().max(1.0) as usize;
        let nodes2 = composite(l2, h2, p2, order);
        for (l1, h1) in f.xi1_intervals() {
            let p1 = ((h1 - l1) * panels_per_unit).ceil().max(1.0) as usize;
            for (x1, w1) in composite(l1, h1, p1, order) {
                for &(x2, w2) in &nodes2 {
                    total += w1 * w2 * f.eval([x1, x2]).norm_sqr();
                }
            }
        }
        total
    }
}

/// Transform of a closed-form spectrum on a lattice of translations at fixed `(a, s)`.
///
/// With centres `c = P m + c₀`, `P = M⁻¹T`, the substitution `u = Pᵀξ` turns the
/// frequency integral into a Fourier series in `m`. A Riemann sum on `u ∈ ℤ²/N`
/// folded modulo 1 is then one inverse FFT; its only error is aliasing from
/// centres at distance at least `N p` from the wanted ones.
pub struct LatticeValues {
    n1: usize,
    n2: usize,
    values: Vec<Complex64>,
}

impl LatticeValues {
    /// Value at lattice index `m`; exact up to aliasing while `‖c‖∞ ≤ reach`.
    pub fn at(&self, m1: i64, m2: i64) -> Complex64 {
        let i1 = m1.rem_euclid(self.n1 as i64) as usize;
        let i2 = m2.rem_euclid(self.n2 as i64) as usize;
        self.values[i2 * self.n1 + i1]
    }
}

/// `T(f, (a, s, T m + d))` for all `m` whose centre lies within `reach`; aliases sit at
/// least `reach + guard` away. `tm = (t11, t12, t22)` with `t11, t22 > 0`.
pub fn lattice_transform(
    gen: &ShearletGenerator,
    f: &dyn Spectrum,
    a: f64,
    s: f64,
    tm: (f64, f64, f64),
    d: Vec2,
    reach: f64,
    guard: f64,
) -> Result<LatticeValues> {
    let (t11, t12, t22) = tm;
    if !(t11 > 0.0 && t22 > 0.0 && a > 0.0 && reach > 0.0 && guard > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("invalid lattice ({t11}, {t12}, {t22}) at a={a}")));
    }
    let sa = a.sqrt();
    let (p11, p12, p22) = (t11 / a, (t12 - s * t22) / a, t22 / sa);
    let c0 = center_of(a, s, d);
    let span = 2.0 * reach + guard;
    let n1 = (span / p11).ceil() as usize;
    let n2 = (span / p22).ceil() as usize;
    if n1.saturating_mul(n2) > 1 << 26 {
        return Err(AnalysisError::InvalidParameter(format!("lattice FFT of {n1}x{n2} is too large")));
    }
    let p = gen.params();
    let [_, (f2l, f2h)] = f.bounding_box();
    let mut bins = vec![ZERO; n1 * n2];
    let (fn1, fn2) = (n1 as f64, n2 as f64);
    for (lo, hi) in [(-p.a1, -p.a0), (p.a0, p.a1)] {
        for (bl, bh) in f.xi1_intervals() {
            let (x_lo, x_hi) = ((a * lo).max(bl), (a * hi).min(bh));
            if x_lo >= x_hi {
                continue;
            }
            let i1_lo = (fn1 * p11 * x_lo).ceil() as i64;
            let i1_hi = (fn1 * p11 * x_hi).floor() as i64;
            for i1 in i1_lo..=i1_hi {
                let xi1 = i1 as f64 / (fn1 * p11);
                let mid = s * xi1 / sa;
                let (y_lo, y_hi) = ((mid - p.b * sa).max(f2l), (mid + p.b * sa).min(f2h));
                if y_lo >= y_hi {
                    continue;
                }
                let col = i1.rem_euclid(n1 as i64) as usize;
                let i2_lo = (fn2 * (p12 * xi1 + p22 * y_lo)).ceil() as i64;
                let i2_hi = (fn2 * (p12 * xi1 + p22 * y_hi)).floor() as i64;
                for i2 in i2_lo..=i2_hi {
                    let xi2 = (i2 as f64 / fn2 - p12 * xi1) / p22;
                    let w = gen.warped(a, s, [xi1, xi2]);
                    if w == 0.0 {
                        continue;
                    }
                    let fv = f.eval([xi1, xi2]);
                    if fv == ZERO {
                        continue;
                    }
                    let phase = Complex64::from_polar(1.0, 2.0 * PI * (c0[0] * xi1 + c0[1] * xi2));
                    bins[i2.rem_euclid(n2 as i64) as usize * n1 + col] += fv * w * phase;
                }
            }
        }
    }
    let mut planner = FftPlanner::new();
    let f1 = planner.plan_fft_inverse(n1);
    let f2 = planner.plan_fft_inverse(n2);
    for row in bins.chunks_mut(n1) {
        f1.process(row);
    }
    let mut col = vec![ZERO; n2];
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            col[i2] = bins[i2 * n1 + i1];
        }
        f2.process(&mut col);
        for i2 in 0..n2 {
            bins[i2 * n1 + i1] = col[i2];
        }
    }
    let scale = a.powf(-0.75) / (fn1 * fn2 * p11 * p22);
    bins.iter_mut().for_each(|v| *v *= scale);
    Ok(LatticeValues { n1, n2, values: bins })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityConstants {
    pub c_minus: f64,
    pub c_plus: f64,
}

/// Smallest accepted number of nodes per axis.
pub const ADMISSIBILITY_MIN_NODES: usize = 16;

/// `C± = ∫∫_{±ξ₁ > 0} |ψ̂(ξ)|²/ξ₁² dξ` by tensor Gauss–Legendre with `nodes` points per axis.
pub fn admissibility(gen: &ShearletGenerator, nodes: usize) -> Result<AdmissibilityConstants> {
    if nodes < ADMISSIBILITY_MIN_NODES {
        return Err(AnalysisError::InvalidParameter(format!(
            "admissibility quadrature needs at least {ADMISSIBILITY_MIN_NODES} nodes per axis, got {nodes}"
        )));
    }
    let p = gen.params();
    let order = 8;
    let panels = nodes.div_ceil(order);
    let r2 = composite(-p.b, p.b, panels, order);
    let half = |lo: f64, hi: f64| {
        let mut acc = 0.0;
        for (x1, w1) in composite(lo, hi, panels, order) {
            let mut inner = 0.0;
            for &(x2, w2) in &r2 {
                let v = gen.psi_hat([x1, x2]);
                inner += w2 * v * v;
            }
            acc += w1 * inner / (x1 * x1);
        }
        acc
    };
    Ok(AdmissibilityConstants { c_minus: half(-p.a1, -p.a0), c_plus: half(p.a0, p.a1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometrySpec {
    /// Gauss–Legendre nodes in `ln a`.
    pub ln_a_nodes: usize,
    /// Gauss–Legendre nodes in `s` for each scale.
    pub s_nodes: usize,
    pub admissibility_nodes: usize,
}

impl Default for IsometrySpec {
    fn default() -> Self {
        IsometrySpec { ln_a_nodes: 64, s_nodes: 64, admissibility_nodes: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub constants: AdmissibilityConstants,
    pub energy_neg: f64,
    pub energy_pos: f64,
    pub ln_a_range: (f64, f64),
}

/// Compares `∫_𝕊 |T(f,g)|² dμ(g)` with `C⁻‖f̂⁻‖² + C⁺‖f̂⁺‖²`.
///
/// The translation integral is done exactly by Plancherel, leaving a nested
/// quadrature over `(ln a, s)` whose domain is read off the band of `f`.
pub fn isometry_check(gen: &ShearletGenerator, f: &GridFunction, spec: &IsometrySpec) -> Result<IsometryReport> {
    let p = *gen.params();
    let (lo, hi, m2) = f
        .band()
        .ok_or_else(|| AnalysisError::InvalidParameter("test function is identically zero".into()))?;
    if lo == 0.0 {
        return Err(AnalysisError::Coverage("test function has energy on the axis ξ₁ = 0".into()));
    }
    if hi >= f.nyquist() - f.dxi() || m2 >= f.nyquist() - f.dxi() {
        return Err(AnalysisError::Coverage("test function band reaches the edge of the frequency window".into()));
    }
    let (la_lo, la_hi) = ((lo / p.a1).ln(), (hi / p.a0).ln());
    let d = f.dxi();
    let modes: Vec<(Vec2, f64)> = (0..f.n() * f.n())
        .filter_map(|idx| {
            let (i1, i2) = (idx % f.n(), idx / f.n());
            let e = f.freq_at(i1, i2).norm_sqr();
            (e > 0.0).then(|| ([f.xi(i1), f.xi(i2)], e))
        })
        .collect();
    let order = 8;
    let ln_nodes = composite(la_lo, la_hi, spec.ln_a_nodes.div_ceil(order), order);
    let lhs: f64 = ln_nodes
        .par_iter()
        .map(|&(la, wa)| {
            let a = la.exp();
            let sa = a.sqrt();
            let s_max = (a / lo) * (m2 / sa + p.b);
            let mut acc = 0.0;
            for (s, ws) in composite(-s_max, s_max, spec.s_nodes.div_ceil(order), order) {
                let mut col = 0.0;
                for &(xi, e) in &modes {
                    let v = gen.psi_hat(warp_frequency(a, s, xi));
                    col += e * v * v;
                }
                acc += ws * col;
            }
            wa * acc
        })
        .sum::<f64>()
        * d
        * d;
    let constants = admissibility(gen, spec.admissibility_nodes)?;
    let (energy_neg, energy_pos) = f.half_plane_energy();
    let rhs = constants.c_minus * energy_neg + constants.c_plus * energy_pos;
    Ok(IsometryReport {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE),
        constants,
        energy_neg,
        energy_pos,
        ln_a_range: (la_lo, la_hi),
    })
}
