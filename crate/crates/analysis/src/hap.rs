//! Homogeneous approximation experiments: tail energies of the transform outside
//! `Q_R(p)`, finite-dimensional distances to the spans indexed by `Q_R(p)`, and
//! the comparison factor between a test and a reference system.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shearlet_core::boxes::PreparedBox;
use shearlet_core::{FamilyKind, FamilySpec, GroupElement, WeightedPoint};

use crate::error::{AnalysisError, Result};
use crate::frame::{frame_bounds, FrameEstimate, IterationBudget, Surrogate};
use crate::generator::{ShearletGenerator, Spectrum};
use crate::transform::{center_of, lattice_transform, QuadratureTransform};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Seeded sampler of group elements, `ln a`, `s` and both translations uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementSampler {
    pub ln_a: (f64, f64),
    pub s: (f64, f64),
    pub t: (f64, f64),
}

impl ElementSampler {
    pub fn sample(&self, count: usize, seed: u64) -> Vec<GroupElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let la = rng.gen_range(self.ln_a.0..=self.ln_a.1);
                let s = rng.gen_range(self.s.0..=self.s.1);
                let t = [rng.gen_range(self.t.0..=self.t.1), rng.gen_range(self.t.0..=self.t.1)];
                GroupElement::from_log(la, s, t).expect("finite sample")
            })
            .collect()
    }
}

/// Truncation of the infinite family for tail sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    /// Points `λ` are kept while the centre of `p⁻¹λ` satisfies `‖M⁻¹t‖∞ ≤ reach`.
    pub reach: f64,
    /// Width of the outer shell whose energy certifies the truncation.
    pub shell: f64,
    /// Largest accepted shell energy relative to `‖f‖² ‖ψ‖²`.
    pub floor: f64,
}

impl Default for TailSpec {
    fn default() -> Self {
        TailSpec { reach: 32.0, shell: 2.0, floor: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub r_ladder: Vec<f64>,
    /// `Σ_{λ : p⁻¹λ ∉ Q_R} w |T(f, p⁻¹λ)|²` per radius.
    pub tails: Vec<f64>,
    /// The same sum over every enumerated point.
    pub total: f64,
    pub shell_energy: f64,
    /// `‖f‖² ‖ψ‖²`.
    pub scale: f64,
    pub points: usize,
}

/// Guard band between the kept centres and the aliases of the lattice FFT.
const ALIAS_GUARD: f64 = 16.0;

/// The points `p⁻¹λ` with weights and transform values, for every `λ` of the
/// family whose transform can be nonzero and whose centre lies within `reach`.
fn relative_points(
    gen: &ShearletGenerator,
    f: &dyn Spectrum,
    family: &FamilySpec,
    p: &GroupElement,
    reach: f64,
) -> Result<Vec<(GroupElement, f64, Complex64)>> {
    family.validate()?;
    if family.kind == FamilyKind::TildeRegular {
        return Err(AnalysisError::InvalidParameter("tail sums need a family of the form (a^j, s_jk, T_jk m)".into()));
    }
    let gp = gen.params();
    let bands = f.xi1_intervals();
    let lo = bands.iter().map(|b| b.0.abs().min(b.1.abs())).fold(f64::INFINITY, f64::min);
    let hi = bands.iter().map(|b| b.0.abs().max(b.1.abs())).fold(0.0, f64::max);
    if !(lo > 0.0) {
        return Err(AnalysisError::Coverage("test spectrum touches ξ₁ = 0".into()));
    }
    let [_, (f2l, f2h)] = f.bounding_box();
    let f2 = f2l.abs().max(f2h.abs());
    let pinv = p.inverse();
    let (a_p, s_p) = (pinv.a(), pinv.s());
    let ln_base = family.a.ln();
    let q = QuadratureTransform::new(gen, f);
    // a = a^j a_p must lie in (lo / a1, hi / a0)
    let j_lo = (((lo / gp.a1) / a_p).ln() / ln_base).floor() as i64;
    let j_hi = (((hi / gp.a0) / a_p).ln() / ln_base).ceil() as i64;
    let mut cells = Vec::new();
    for j in j_lo..=j_hi {
        let a_l = family.ln_scale(j).exp();
        let a = a_l * a_p;
        let s_bound = (f2 / a.sqrt() + gp.b) / gp.a0;
        let shift = s_p * a_l.sqrt();
        let k_lo = ((-s_bound - shift) / family.b).floor() as i64 - 1;
        let k_hi = ((s_bound - shift) / family.b).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let g0 = pinv.compose(&family.point(j, k, [0, 0]).g);
            if q.may_overlap(a, g0.s()) {
                cells.push((j, k, g0));
            }
        }
    }
    let parts: Vec<Result<Vec<(GroupElement, f64, Complex64)>>> = cells
        .par_iter()
        .map(|&(j, k, g0)| {
            let (a, s) = (g0.a(), g0.s());
            // t = T m + d with d the translation of p⁻¹λ at m = 0
            let d = g0.t();
            let tm = family.translation_matrix(j, k);
            let lat = lattice_transform(gen, f, a, s, (tm.t11, tm.t12, tm.t22), d, reach, ALIAS_GUARD)?;
            let sa = a.sqrt();
            let (p11, p12, p22) = (tm.t11 / a, (tm.t12 - s * tm.t22) / a, tm.t22 / sa);
            let c0 = center_of(a, s, d);
            let m2_lo = ((-reach - c0[1]) / p22).ceil() as i64;
            let m2_hi = ((reach - c0[1]) / p22).floor() as i64;
            let mut out = Vec::new();
            for m2 in m2_lo..=m2_hi {
                let off = c0[0] + p12 * m2 as f64;
                let m1_lo = ((-reach - off) / p11).ceil() as i64;
                let m1_hi = ((reach - off) / p11).floor() as i64;
                for m1 in m1_lo..=m1_hi {
                    let lam = family.point(j, k, [m1, m2]);
                    out.push((pinv.compose(&lam.g), lam.w, lat.at(m1, m2)));
                }
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Tail energies for every radius of `r_ladder` at one `p`.
pub fn hap_tail(
    gen: &ShearletGenerator,
    f: &dyn Spectrum,
    family: &FamilySpec,
    p: &GroupElement,
    r_ladder: &[f64],
    spec: &TailSpec,
) -> Result<TailReport> {
    if r_ladder.iter().any(|r| !(*r > 0.0)) {
        return Err(AnalysisError::InvalidParameter("radii must be positive".into()));
    }
    if !(spec.reach > spec.shell && spec.shell > 0.0) {
        return Err(AnalysisError::InvalidParameter(format!("invalid tail truncation {spec:?}")));
    }
    let pts = relative_points(gen, f, family, p, spec.reach)?;
    let boxes: Vec<PreparedBox> = r_ladder.iter().map(|&r| PreparedBox::new(GroupElement::IDENTITY, r)).collect();
    let mut tails = vec![0.0; r_ladder.len()];
    let (mut total, mut shell_energy) = (0.0, 0.0);
    let inner = spec.reach - spec.shell;
    for (g, w, v) in &pts {
        let e = w * v.norm_sqr();
        if e == 0.0 {
            continue;
        }
        total += e;
        let c = g.center();
        if c[0].abs().max(c[1].abs()) > inner {
            shell_energy += e;
        }
        for (b, t) in boxes.iter().zip(tails.iter_mut()) {
            if !b.contains(g) {
                *t += e;
            }
        }
    }
    let scale = QuadratureTransform::norm_sq_of(f, 16.0, 12) * QuadratureTransform::norm_sq_of(gen, 16.0, 12);
    if shell_energy > spec.floor * scale {
        return Err(AnalysisError::Coverage(format!(
            "truncation at reach {} leaves shell energy {:.3e} > {:.1e} of ‖f‖²‖ψ‖²",
            spec.reach,
            shell_energy / scale,
            spec.floor
        )));
    }
    Ok(TailReport { r_ladder: r_ladder.to_vec(), tails, total, shell_energy, scale, points: pts.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanKind {
    /// `span{S⁻¹ v_λ}`, the surrogate of the dual-frame span.
    Dual,
    /// `span{v_λ}`.
    Primal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: f64,
    pub norm: f64,
    pub members: usize,
    pub effective_rank: usize,
    /// Smallest kept over largest eigenvalue of the member Gram operator.
    pub conditioning: f64,
    /// `Σ_{λ ∉ Q_R(p)} |⟨y, v_λ⟩|²` in the surrogate.
    pub tail: f64,
    /// `sqrt(tail / A)`, which bounds the dual-span distance.
    pub tail_bound: f64,
}

/// Relative eigenvalue threshold for the effective rank of a span.
pub const RANK_TOL: f64 = 1e-10;

/// A weighted system on a surrogate band together with its frame operator.
pub struct HapSystem {
    pub surrogate: Surrogate,
    pub points: Vec<WeightedPoint>,
    vectors: Vec<Vec<(usize, Complex64)>>,
    pub operator: DMatrix<Complex64>,
    chol: Option<Cholesky<Complex64, Dyn>>,
    pub frame: FrameEstimate,
}

impl HapSystem {
    pub fn new(surrogate: Surrogate, gen: &ShearletGenerator, points: Vec<WeightedPoint>, budget: &IterationBudget) -> Result<Self> {
        let vectors: Vec<_> = points.par_iter().map(|p| surrogate.vector(gen, &p.g, p.w)).collect();
        let operator = gram(surrogate.dim(), vectors.iter());
        let frame = frame_bounds(&operator, budget)?;
        let chol = operator.clone().cholesky();
        Ok(HapSystem { surrogate, points, vectors, operator, chol, frame })
    }

    pub fn coefficient(&self, i: usize, y: &DVector<Complex64>) -> Complex64 {
        self.vectors[i].iter().fold(ZERO, |acc, &(k, v)| acc + y[k] * v.conj())
    }

    /// Distance from `y` to the span indexed by `Q_R(p)`.
    pub fn distance(&self, y: &DVector<Complex64>, p: &GroupElement, r: f64, kind: SpanKind) -> Result<DistanceReport> {
        if !(r > 0.0) {
            return Err(AnalysisError::InvalidParameter(format!("radius must be positive, got {r}")));
        }
        let bx = PreparedBox::new(*p, r);
        let member: Vec<bool> = self.points.iter().map(|pt| bx.contains(&pt.g)).collect();
        let mut tail = 0.0;
        for (i, &m) in member.iter().enumerate() {
            if !m {
                tail += self.coefficient(i, y).norm_sqr();
            }
        }
        let members = member.iter().filter(|&&m| m).count();
        let norm = y.norm();
        let a = self.frame.a_est;
        let tail_bound = if a > 0.0 { (tail / a).sqrt() } else { f64::INFINITY };
        let d = self.surrogate.dim();
        let gq = gram(d, self.vectors.iter().zip(&member).filter(|(_, &m)| m).map(|(v, _)| v));
        let eig = SymmetricEigen::new(gq);
        let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..d).filter(|&i| top > 0.0 && eig.eigenvalues[i] > RANK_TOL * top).collect();
        let conditioning = keep.iter().map(|&i| eig.eigenvalues[i]).fold(f64::INFINITY, f64::min) / top;
        if keep.is_empty() {
            return Ok(DistanceReport { distance: norm, norm, members, effective_rank: 0, conditioning: 0.0, tail, tail_bound });
        }
        let u = DMatrix::from_fn(d, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
        let basis = match kind {
            SpanKind::Primal => u,
            SpanKind::Dual => {
                let ch = self.chol.as_ref().ok_or_else(|| {
                    AnalysisError::Diagnostic("frame operator is singular on the band; the dual span is undefined".into())
                })?;
                ch.solve(&u).qr().q()
            }
        };
        let coeff = basis.ad_mul(y);
        let distance = (y - &basis * coeff).norm();
        Ok(DistanceReport { distance, norm, members, effective_rank: keep.len(), conditioning, tail, tail_bound })
    }
}

fn gram<'a>(d: usize, vectors: impl Iterator<Item = &'a Vec<(usize, Complex64)>>) -> DMatrix<Complex64> {
    let mut s = DMatrix::from_element(d, d, ZERO);
    for v in vectors {
        for &(i, vi) in v {
            for &(k, vk) in v {
                s[(i, k)] += vi * vk.conj();
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HapProfile {
    pub r_ladder: Vec<f64>,
    pub eps_max: Vec<f64>,
    /// Worst dual-span distance per radius, when a surrogate system was supplied.
    pub dist_max: Option<Vec<f64>>,
    /// Worst `distance / tail_bound` over all samples and radii.
    pub bound_ratio_max: Option<f64>,
    pub samples: usize,
}

impl HapProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,eps_max,dist_max\n");
        for (i, r) in self.r_ladder.iter().enumerate() {
            let d = self.dist_max.as_ref().map(|d| format!("{:e}", d[i])).unwrap_or_default();
            out.push_str(&format!("{r},{:e},{d}\n", self.eps_max[i]));
        }
        out
    }

    /// Non-increasing in `R` up to `rel` of the first value.
    pub fn eps_nonincreasing(&self, rel: f64) -> bool {
        let tol = rel * self.eps_max.first().copied().unwrap_or(0.0);
        self.eps_max.windows(2).all(|w| w[1] <= w[0] + tol)
    }

    /// Same for the distances; `true` when they were not computed.
    pub fn dist_nonincreasing(&self, rel: f64) -> bool {
        let Some(d) = &self.dist_max else { return true };
        let tol = rel * d.first().copied().unwrap_or(0.0);
        d.windows(2).all(|w| w[1] <= w[0] + tol)
    }
}

/// Tail and distance profiles over the sampled `p`.
pub fn hap_profile(
    gen: &ShearletGenerator,
    f: &dyn Spectrum,
    family: &FamilySpec,
    ps: &[GroupElement],
    r_ladder: &[f64],
    spec: &TailSpec,
    system: Option<(&HapSystem, SpanKind)>,
) -> Result<HapProfile> {
    let mut eps_max = vec![0.0f64; r_ladder.len()];
    let mut dist_max = system.map(|_| vec![0.0f64; r_ladder.len()]);
    let mut ratio_max: Option<f64> = system.map(|_| 0.0);
    for p in ps {
        let rep = hap_tail(gen, f, family, p, r_ladder, spec)?;
        for (m, t) in eps_max.iter_mut().zip(&rep.tails) {
            *m = m.max(*t);
        }
        if let (Some((sys, kind)), Some(dm)) = (system, dist_max.as_mut()) {
            let y = sys.surrogate.coords(&crate::generator::Warped { base: f, g: *p });
            for (i, &r) in r_ladder.iter().enumerate() {
                let d = sys.distance(&y, p, r, kind)?;
                dm[i] = dm[i].max(d.distance);
                if let Some(rm) = ratio_max.as_mut() {
                    if d.distance > 0.0 {
                        *rm = rm.max(d.distance / d.tail_bound);
                    }
                }
            }
        }
    }
    Ok(HapProfile { r_ladder: r_ladder.to_vec(), eps_max, dist_max, bound_ratio_max: ratio_max, samples: ps.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonFactor {
    /// `C(C-ε) / (B (e^{R/2} + R e^{R/2})⁴)`.
    pub statement: f64,
    /// `C(C-ε) / (B (e^{R/2} + R e^{R/4})⁴)`.
    pub proof: f64,
}

pub fn comparison_constant(b: f64, c: f64, eps: f64, r: f64) -> Result<ComparisonFactor> {
    if !(b > 0.0 && c > 0.0 && eps > 0.0 && eps < c && r > 0.0) || !b.is_finite() || !c.is_finite() || !r.is_finite() {
        return Err(AnalysisError::InvalidParameter(format!(
            "comparison factor needs B > 0, C > 0, 0 < eps < C, R > 0; got B={b}, C={c}, eps={eps}, R={r}"
        )));
    }
    let num = c * (c - eps) / b;
    let e2 = (r / 2.0).exp();
    Ok(ComparisonFactor { statement: num / (e2 + r * e2).powi(4), proof: num / (e2 + r * (r / 4.0).exp()).powi(4) })
}
