//! Group boxes `Q_h(x,y,z) = (x,y,z)·Q_h`, weighted counting, covering
//! certificates and box separation geometry.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::GroupElement;
use crate::params::{FamilySpec, WeightedPoint};

/// The box `Q_h(center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub center: GroupElement,
    pub h: f64,
}

impl BoxSpec {
    pub fn new(center: GroupElement, h: f64) -> Result<Self, CoreError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(CoreError::NonPositiveSize(h));
        }
        Ok(BoxSpec { center, h })
    }

    pub fn prepare(&self) -> PreparedBox {
        PreparedBox::new(self.center, self.h)
    }
}

/// A box with its center inverse and scale bounds precomputed.
#[derive(Debug, Clone, Copy)]
pub struct PreparedBox {
    pub center: GroupElement,
    pub inv: GroupElement,
    pub h: f64,
    a_lo: f64,
    a_hi: f64,
}

impl PreparedBox {
    pub fn new(center: GroupElement, h: f64) -> Self {
        PreparedBox { center, inv: center.inverse(), h, a_lo: (-h / 2.0).exp(), a_hi: (h / 2.0).exp() }
    }

    #[inline]
    pub fn residual(&self, g: &GroupElement) -> GroupElement {
        self.inv.compose(g)
    }

    #[inline]
    pub fn scale_ok(&self, r: &GroupElement) -> bool {
        r.a() >= self.a_lo && r.a() < self.a_hi
    }

    #[inline]
    fn half_open(&self, v: f64) -> bool {
        v >= -self.h / 2.0 && v < self.h / 2.0
    }

    #[inline]
    pub fn shear_ok(&self, r: &GroupElement) -> bool {
        self.half_open(r.s())
    }

    #[inline]
    pub fn t1_ok(&self, r: &GroupElement) -> bool {
        self.half_open(r.t()[0])
    }

    #[inline]
    pub fn t2_ok(&self, r: &GroupElement) -> bool {
        self.half_open(r.t()[1])
    }

    #[inline]
    pub fn contains(&self, g: &GroupElement) -> bool {
        let r = self.residual(g);
        self.scale_ok(&r) && self.shear_ok(&r) && self.t1_ok(&r) && self.t2_ok(&r)
    }
}

/// Membership of `g` in `Q_h(center)`: lower bounds closed, upper bounds open.
pub fn box_contains(center: &GroupElement, h: f64, g: &GroupElement) -> bool {
    PreparedBox::new(*center, h).contains(g)
}

pub fn weighted_count(points: &[WeightedPoint], bx: &BoxSpec) -> f64 {
    let pb = bx.prepare();
    points.iter().filter(|p| pb.contains(&p.g)).map(|p| p.w).sum()
}

/// Number of points and their weight inside a box.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Count {
    pub points: u64,
    pub weighted: f64,
}

pub fn brute_force_count(points: &[WeightedPoint], bx: &BoxSpec) -> Count {
    let pb = bx.prepare();
    let mut c = Count::default();
    for p in points.iter().filter(|p| pb.contains(&p.g)) {
        c.points += 1;
        c.weighted += p.w;
    }
    c
}

/// Integer candidates for `{n : lo ≤ n·step + off < hi}` widened by one on each side.
fn candidate_range(lo: f64, hi: f64) -> Option<(i64, i64)> {
    if !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let (p, q) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if p < -9.0e15 || q > 9.0e15 {
        return None;
    }
    Some((p.ceil() as i64 - 1, q.floor() as i64 + 1))
}

/// Index ranges of a family inside a box, row by row.
///
/// The callback receives `(j, k, m2, m1_lo, m1_hi)` for every nonempty row; all
/// `m1` in `m1_lo..=m1_hi` belong to the box. Candidate ranges come from the
/// per-index inequalities and their endpoints are confirmed with the same
/// membership predicate used by brute-force counting.
pub fn enumerate_rows<F>(family: &FamilySpec, bx: &BoxSpec, row_budget: u64, mut f: F) -> Result<(), CoreError>
where
    F: FnMut(i64, i64, i64, i64, i64),
{
    let pb = bx.prepare();
    let h = bx.h;
    let ln_a = family.a.ln();
    let x_ln = bx.center.ln_a();
    let (jl, jh) = candidate_range((x_ln - h / 2.0) / ln_a, (x_ln + h / 2.0) / ln_a)
        .ok_or_else(|| CoreError::Diagnostic("scale index out of range".into()))?;
    let inv = pb.inv;
    let mut rows = 0u64;
    for j in jl..=jh {
        let r0 = pb.residual(&family.point(j, 0, [0, 0]).g);
        if !pb.scale_ok(&r0) {
            continue;
        }
        // residual shear = b k + s_inv √(a^j / 1)
        let sq_aj = (0.5 * family.ln_scale(j)).exp();
        let shift = inv.s() * sq_aj;
        let (kl, kh) = candidate_range((-h / 2.0 - shift) / family.b, (h / 2.0 - shift) / family.b)
            .ok_or_else(|| CoreError::Diagnostic("shear index out of range".into()))?;
        for k in kl..=kh {
            let rk = pb.residual(&family.point(j, k, [0, 0]).g);
            if !pb.shear_ok(&rk) {
                continue;
            }
            let tm = family.translation_matrix(j, k);
            // residual translation = τ + v with v the residual of m = 0
            let v = rk.t();
            let (ml, mh) = candidate_range((-h / 2.0 - v[1]) / tm.t22, (h / 2.0 - v[1]) / tm.t22)
                .ok_or_else(|| CoreError::Diagnostic("translation index out of range".into()))?;
            rows += (mh - ml + 1) as u64;
            if rows > row_budget {
                return Err(CoreError::Diagnostic(format!("row budget {row_budget} exceeded")));
            }
            for m2 in ml..=mh {
                let off = tm.t12 * m2 as f64;
                let guess_lo = (-h / 2.0 - v[0] - off) / tm.t11;
                let guess_hi = (h / 2.0 - v[0] - off) / tm.t11;
                let mid = (0.5 * (guess_lo + guess_hi)).round();
                let mid = if mid.is_finite() { mid as i64 } else { 0 };
                let rr = pb.residual(&family.point(j, k, [mid, m2]).g);
                if !pb.t2_ok(&rr) {
                    continue;
                }
                let inside = |m1: i64| pb.contains(&family.point(j, k, [m1, m2]).g);
                let Some((mut lo, mut hi)) = candidate_range(guess_lo, guess_hi) else {
                    return Err(CoreError::Diagnostic("translation index out of range".into()));
                };
                while inside(lo - 1) {
                    lo -= 1;
                }
                while lo <= hi && !inside(lo) {
                    lo += 1;
                }
                while inside(hi + 1) {
                    hi += 1;
                }
                while hi >= lo && !inside(hi) {
                    hi -= 1;
                }
                if lo <= hi {
                    f(j, k, m2, lo, hi);
                }
            }
        }
    }
    Ok(())
}

/// Default cap on enumerated rows per box.
pub const DEFAULT_ROW_BUDGET: u64 = 200_000_000;

/// Exact weighted count of a closed-form family inside a box.
pub fn family_count(family: &FamilySpec, bx: &BoxSpec) -> Result<Count, CoreError> {
    let mut c = Count::default();
    enumerate_rows(family, bx, DEFAULT_ROW_BUDGET, |j, k, _m2, lo, hi| {
        let n = (hi - lo + 1) as u64;
        c.points += n;
        c.weighted += family.weight(j, k) * n as f64;
    })?;
    Ok(c)
}

/// Calls `f` for every family point inside the box.
pub fn for_each_in_box<F>(family: &FamilySpec, bx: &BoxSpec, mut f: F) -> Result<(), CoreError>
where
    F: FnMut(i64, i64, [i64; 2], WeightedPoint),
{
    enumerate_rows(family, bx, DEFAULT_ROW_BUDGET, |j, k, m2, lo, hi| {
        for m1 in lo..=hi {
            f(j, k, [m1, m2], family.point(j, k, [m1, m2]));
        }
    })
}

/// Point of the covering lattice `X = {(e^{jh}, h e^{-h/4} k, h e^{-h/2} m)}`.
pub fn lattice_point(j: i64, k: i64, m: [i64; 2], h: f64) -> GroupElement {
    let step_s = h * (-h / 4.0).exp();
    let step_t = h * (-h / 2.0).exp();
    GroupElement::from_log(j as f64 * h, step_s * k as f64, [step_t * m[0] as f64, step_t * m[1] as f64])
        .expect("finite lattice point")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverIndex {
    pub j: i64,
    pub k: i64,
    pub m: [i64; 2],
    pub residual: GroupElement,
}

/// Finds the covering lattice box containing `g`, following the constructive
/// interval selection for `j`, then `k`, `m2` and `m1`.
pub fn locate_in_cover(g: &GroupElement, h: f64) -> Result<CoverIndex, CoreError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoreError::NonPositiveSize(h));
    }
    let (y, z) = (g.s(), g.t());
    let j = (g.ln_a() / h + 0.5).floor() as i64;
    let a = (g.ln_a() - j as f64 * h).exp();
    let sa = a.sqrt();
    let eq = (h / 4.0).exp();
    let eh = (h / 2.0).exp();
    let k = (y * eq / (h * sa) - eq / (2.0 * sa)).ceil() as i64;
    let s = y - h / eq * k as f64 * sa;
    let m2 = (z[1] * eh / (h * sa) - eh / (2.0 * sa)).ceil() as i64;
    let t2 = z[1] - m2 as f64 * h * sa / eh;
    let m1 = ((z[0] - s * z[1] + s * t2) * eh / (h * a) - eh / (2.0 * a)).ceil() as i64;
    let pick = |j: i64, k: i64, m: [i64; 2]| -> Option<CoverIndex> {
        let l = lattice_point(j, k, m, h);
        if box_contains(&l, h, g) {
            Some(CoverIndex { j, k, m, residual: l.inverse().compose(g) })
        } else {
            None
        }
    };
    if let Some(c) = pick(j, k, [m1, m2]) {
        return Ok(c);
    }
    // Rounding at an interval endpoint: the neighbouring index carries the point.
    for dj in [0, -1, 1] {
        for dk in [0, -1, 1] {
            for d2 in [0, -1, 1] {
                for d1 in -2..=2 {
                    if let Some(c) = pick(j + dj, k + dk, [m1 + d1, m2 + d2]) {
                        return Ok(c);
                    }
                }
            }
        }
    }
    Err(CoreError::Diagnostic(format!("no covering box found for {g} at h={h}")))
}

/// Covering bounds `(N_r, Ñ_r)`.
pub fn cover_bounds(r: f64, h: f64) -> Result<(f64, f64), CoreError> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(CoreError::InvalidParameter(format!("r >= 1 required, got {r}")));
    }
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoreError::NonPositiveSize(h));
    }
    let q = 1.0 / (r + 1.0);
    let n = (r + 2.0)
        * (r + 1.0).powi(3)
        * ((h / 2.0).exp() + q)
        * (h.exp() + q)
        * ((0.75 * h).exp() + q);
    let n_tilde = r * (r + 1.0).powi(3) * (2.25 * h).exp();
    Ok((n, n_tilde))
}

/// A bound on `σ` of the form `(p2 u² + p1 u + p0) / u`.
#[derive(Clone, Copy)]
struct Rational {
    p2: f64,
    p1: f64,
    p0: f64,
}

impl Rational {
    #[inline]
    fn eval(&self, u: f64) -> f64 {
        (self.p2 * u * u + self.p1 * u + self.p0) / u
    }
}

fn quadratic_roots(c2: f64, c1: f64, c0: f64, out: &mut Vec<f64>) {
    let scale = c2.abs().max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return;
    }
    if c2.abs() <= 1e-14 * scale {
        if c1 != 0.0 {
            out.push(-c0 / c1);
        }
        return;
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (c1 + c1.signum() * sq);
    if q != 0.0 {
        out.push(q / c2);
        out.push(c0 / q);
    } else {
        out.push(0.0);
    }
}

/// Whether `Q_{h1}(c1)` and `Q_{h2}(c2)` share an interior point.
///
/// With `g = c2⁻¹ c1` the question is whether some `q ∈ Q_{h1}` has
/// `g·q ∈ Q_{h2}`. Writing `u = √a_q` and `σ = s_q`, the translation part
/// reduces to bounds on `σ` that are rational in `u`, so feasibility only
/// changes at roots of quadratics; testing one point per root interval is exact.
pub fn boxes_intersect(c1: &GroupElement, h1: f64, c2: &GroupElement, h2: f64) -> bool {
    let g = c2.inverse().compose(c1);
    let (ag, sg, tg) = (g.a(), g.s(), g.t());
    let big_h = 0.5 * (h1 + h2);
    let mut u_lo = (-h1 / 4.0).exp().max((-h2 / 4.0).exp() / ag.sqrt());
    let mut u_hi = (h1 / 4.0).exp().min((h2 / 4.0).exp() / ag.sqrt());
    if tg[1] != 0.0 {
        u_hi = u_hi.min(big_h / tg[1].abs());
    } else if tg[0] != 0.0 {
        u_hi = u_hi.min((big_h / tg[0].abs()).sqrt());
    }
    if !(u_lo < u_hi) {
        return false;
    }
    u_lo = u_lo.max(f64::MIN_POSITIVE);
    let mut lower = vec![Rational { p2: 0.0, p1: -h1 / 2.0, p0: 0.0 }, Rational { p2: -sg, p1: -h2 / 2.0, p0: 0.0 }];
    let mut upper = vec![Rational { p2: 0.0, p1: h1 / 2.0, p0: 0.0 }, Rational { p2: -sg, p1: h2 / 2.0, p0: 0.0 }];
    if tg[1] != 0.0 {
        let p2 = -tg[0] / tg[1];
        let p0 = big_h / tg[1].abs();
        lower.push(Rational { p2, p1: 0.0, p0: -p0 });
        upper.push(Rational { p2, p1: 0.0, p0 });
    }
    let mut crit = vec![u_lo, u_hi];
    for l in &lower {
        for up in &upper {
            let mut roots = Vec::new();
            quadratic_roots(up.p2 - l.p2, up.p1 - l.p1, up.p0 - l.p0, &mut roots);
            crit.extend(roots.into_iter().filter(|r| *r > u_lo && *r < u_hi));
        }
    }
    crit.sort_by(f64::total_cmp);
    crit.windows(2).any(|w| {
        let u = 0.5 * (w[0] + w[1]);
        if !(u > w[0] && u < w[1]) {
            return false;
        }
        let max_l = lower.iter().map(|b| b.eval(u)).fold(f64::NEG_INFINITY, f64::max);
        let min_u = upper.iter().map(|b| b.eval(u)).fold(f64::INFINITY, f64::min);
        max_l < min_u
    })
}

/// Number of covering lattice boxes `Q_h(x_i)` meeting `Q_{rh}(c)`.
///
/// Candidate indices come from interval bounds on `ℓ = c·q·q'⁻¹`; each candidate is
/// decided with [`boxes_intersect`].
pub fn cover_intersection_count(c: &GroupElement, r: f64, h: f64) -> u64 {
    cover_intersection_count_with_margin(c, r, h, 1)
}

/// As [`cover_intersection_count`] with every candidate index range widened by `margin`.
pub fn cover_intersection_count_with_margin(c: &GroupElement, r: f64, h: f64, margin: i64) -> u64 {
    let big = r * h;
    let hh = 0.5 * (r + 1.0) * h;
    let (x_ln, y, z) = (c.ln_a(), c.s(), c.t());
    let cs = h * (-h / 4.0).exp();
    let ct = h * (-h / 2.0).exp();
    let j_lo = ((x_ln - hh) / h).floor() as i64 - margin;
    let j_hi = ((x_ln + hh) / h).ceil() as i64 + margin;
    let mut count = 0;
    for j in j_lo..=j_hi {
        let ln_l = j as f64 * h;
        // a_q ∈ [e^{-rh/2}, e^{rh/2}) and a_p = a_l/(x a_q) ∈ (e^{-h/2}, e^{h/2}]
        let lq_lo = (-big / 2.0).max(ln_l - x_ln - h / 2.0);
        let lq_hi = (big / 2.0).min(ln_l - x_ln + h / 2.0);
        if lq_lo > lq_hi + 1e-12 && margin <= 1 {
            continue;
        }
        let ratio = (ln_l - x_ln).exp();
        let sqrt_ap_max = (h / 4.0).exp().min(((ln_l - x_ln) / 2.0 - lq_lo / 2.0).exp());
        let ap_max = sqrt_ap_max * sqrt_ap_max;
        let s_mid = y * ratio.sqrt();
        let s_rad = sqrt_ap_max * hh;
        let k_lo = ((s_mid - s_rad) / cs).floor() as i64 - margin;
        let k_hi = ((s_mid + s_rad) / cs).ceil() as i64 + margin;
        // m = S_{s_p} A_{a_p} (t_u - t') / (h e^{-h/2}) with p = q'⁻¹
        let m2_mid = ratio.sqrt() * z[1] / ct;
        let m2_rad = sqrt_ap_max * hh / ct;
        let m1_mid = ratio * z[0] / ct;
        let m1_rad = (ap_max * hh * (1.0 + h / 2.0) + sqrt_ap_max * ratio.sqrt() * z[1].abs() * hh) / ct;
        let m2_lo = (m2_mid - m2_rad).floor() as i64 - margin;
        let m2_hi = (m2_mid + m2_rad).ceil() as i64 + margin;
        let m1_lo = (m1_mid - m1_rad).floor() as i64 - margin;
        let m1_hi = (m1_mid + m1_rad).ceil() as i64 + margin;
        for k in k_lo..=k_hi {
            for m2 in m2_lo..=m2_hi {
                for m1 in m1_lo..=m1_hi {
                    if boxes_intersect(&lattice_point(j, k, [m1, m2], h), h, c, big) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub separated: bool,
    /// Greedy partition into separated subsets (indices into the input).
    pub partition: Vec<Vec<usize>>,
}

/// Checks pairwise disjointness of `x_i·Q_h`; otherwise partitions greedily.
pub fn separation_check(points: &[WeightedPoint], h: f64) -> Result<SeparationReport, CoreError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoreError::NonPositiveSize(h));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].g.ln_a().total_cmp(&points[j].g.ln_a()));
    let clash = |i: usize, j: usize| {
        (points[i].g.ln_a() - points[j].g.ln_a()).abs() < h && boxes_intersect(&points[i].g, h, &points[j].g, h)
    };
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match classes.iter_mut().find(|cls| cls.iter().rev().take_while(|&&j| points[i].g.ln_a() - points[j].g.ln_a() < h).all(|&j| !clash(i, j))) {
            Some(cls) => cls.push(i),
            None => classes.push(vec![i]),
        }
    }
    for cls in &mut classes {
        cls.sort_unstable();
    }
    Ok(SeparationReport { separated: classes.len() <= 1, partition: classes })
}

/// The radius `R = (1+δ/2)² e^δ R′ + δ(1+δ/2)² e^δ + δ`.
pub fn hap_radius(delta: f64, r_prime: f64) -> Result<f64, CoreError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(CoreError::InvalidParameter(format!("delta > 0 required, got {delta}")));
    }
    if !(r_prime > 1.0) || !r_prime.is_finite() {
        return Err(CoreError::InvalidParameter(format!("R' > 1 required, got {r_prime}")));
    }
    let f = (1.0 + delta / 2.0).powi(2) * delta.exp();
    Ok(f * r_prime + delta * f + delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{generate, FamilyKind, Window};

    fn e(a: f64, s: f64, t1: f64, t2: f64) -> GroupElement {
        GroupElement::new(a, s, [t1, t2]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let id = GroupElement::IDENTITY;
        assert!(box_contains(&id, 1.0, &id));
        assert!(!box_contains(&id, 1.0, &e(std::f64::consts::E, 0.0, 0.0, 0.0)));
        assert!(box_contains(&id, 1.0, &e(1.0, -0.5, -0.5, -0.5)));
        assert!(!box_contains(&id, 1.0, &e(1.0, 0.5, 0.0, 0.0)));
    }

    #[test]
    fn counting_examples() {
        let bx = BoxSpec::new(e(3.0, 1.0, 2.0, -1.0), 1.0).unwrap();
        assert_eq!(weighted_count(&[], &bx), 0.0);
        let p = WeightedPoint::new(bx.center, 2.5).unwrap();
        assert_eq!(weighted_count(&[p], &bx), 2.5);
    }

    #[test]
    fn locate_examples() {
        let c = locate_in_cover(&GroupElement::IDENTITY, 1.0).unwrap();
        assert_eq!((c.j, c.k, c.m), (0, 0, [0, 0]));
        let c = locate_in_cover(&e(2f64.exp(), 0.0, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(c.j, 2);
        assert!((c.residual.a() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cover_bound_values() {
        let (n, nt) = cover_bounds(1.0, 1.0).unwrap();
        let e1 = std::f64::consts::E;
        let want = 24.0 * (e1.sqrt() + 0.5) * (e1 + 0.5) * (e1.powf(0.75) + 0.5);
        assert!((n - want).abs() < 1e-9 * want);
        assert!((nt - 8.0 * e1.powf(2.25)).abs() < 1e-9 * nt);
        assert!(cover_bounds(0.5, 1.0).is_err());
    }

    #[test]
    fn hap_radius_values() {
        let r = hap_radius(1.0, 2.0).unwrap();
        let e1 = std::f64::consts::E;
        assert!((r - (2.25 * e1 * 2.0 + 2.25 * e1 + 1.0)).abs() < 1e-12);
        assert!((hap_radius(1e-8, 3.0).unwrap() - 3.0).abs() < 1e-6);
        assert!(hap_radius(1.0, 1.0).is_err());
    }

    #[test]
    fn intersect_self_and_far() {
        let c = e(2.0, 0.3, 1.0, -2.0);
        assert!(boxes_intersect(&c, 1.0, &c, 0.1));
        assert!(!boxes_intersect(&c, 1.0, &e(20.0, 0.3, 1.0, -2.0), 1.0));
        assert!(!boxes_intersect(&c, 1.0, &e(2.0, 0.3, 50.0, -2.0), 1.0));
    }

    #[test]
    fn intersect_matches_sampling() {
        // Sampled witnesses must never contradict a "disjoint" verdict.
        let c1 = GroupElement::IDENTITY;
        for (i, c2) in [e(1.5, 0.4, 0.3, 0.2), e(0.7, -0.9, 0.8, -0.6), e(1.0, 0.0, 0.9, 0.0)].iter().enumerate() {
            let mut witness = false;
            let n = 7;
            for ia in 0..n {
                for is in 0..n {
                    for i1 in 0..n {
                        for i2 in 0..n {
                            let f = |i: usize| -0.5 + (i as f64 + 0.5) / n as f64;
                            let q = GroupElement::new(f(ia).exp(), f(is), [f(i1), f(i2)]).unwrap();
                            if box_contains(c2, 1.0, &c1.compose(&q)) {
                                witness = true;
                            }
                        }
                    }
                }
            }
            if witness {
                assert!(boxes_intersect(&c1, 1.0, c2, 1.0), "case {i}");
            }
        }
    }

    #[test]
    fn family_count_regular_exact_h8() {
        let f = FamilySpec::new(FamilyKind::Regular, std::f64::consts::E, 1.0, 1.0).unwrap();
        let ps = generate(&f, &Window::new((-5, 5), (-8, 8), (-40, 40), (-12, 12)).unwrap()).unwrap();
        let bx = BoxSpec::new(e(1.3, 0.2, 0.1, -0.05), 8.0).unwrap();
        let fast = family_count(&f, &bx).unwrap();
        let slow = brute_force_count(&ps.points, &bx);
        assert_eq!(fast.points, slow.points);
        assert_eq!(fast.points, 4096);
    }

    #[test]
    fn separation_examples() {
        let p = WeightedPoint::new(GroupElement::IDENTITY, 1.0).unwrap();
        assert!(separation_check(&[p], 1.0).unwrap().separated);
        let q = WeightedPoint::new(e(1.01, 0.01, 0.01, 0.0), 1.0).unwrap();
        let rep = separation_check(&[p, q], 1.0).unwrap();
        assert!(!rep.separated);
        assert_eq!(rep.partition.len(), 2);
    }
}
