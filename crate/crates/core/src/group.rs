//! The shearlet group and its isomorphic twin.
//!
//! Elements are triples `(a, s, t)` with scale `a > 0`, shear `s` and
//! translation `t`. The product is
//! `(a,s,t)·(a',s',t') = (a'a, s' + s√a', t' + S_{s'} A_{a'} t)` with
//! `A_a = diag(a, √a)` and `S_s = [[1, s], [0, 1]]`.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::quad::gauss_legendre;

pub type Vec2 = [f64; 2];

/// `A_a x`.
#[inline]
pub fn scale_vec(a: f64, x: Vec2) -> Vec2 {
    [a * x[0], a.sqrt() * x[1]]
}

/// `S_s x`.
#[inline]
pub fn shear_vec(s: f64, x: Vec2) -> Vec2 {
    [x[0] + s * x[1], x[1]]
}

/// `S_s A_a x`, computed with a precomputed `√a`.
#[inline]
fn shear_scale(a: f64, sqrt_a: f64, s: f64, x: Vec2) -> Vec2 {
    [a * x[0] + s * sqrt_a * x[1], sqrt_a * x[1]]
}

/// Element of the shearlet group 𝕊.
///
/// The scale is stored both directly and as its logarithm; the two are kept
/// consistent by every constructor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct GroupElement {
    a: f64,
    ln_a: f64,
    s: f64,
    t: Vec2,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    a: f64,
    s: f64,
    t: Vec2,
}

impl TryFrom<RawElement> for GroupElement {
    type Error = CoreError;
    fn try_from(r: RawElement) -> Result<Self, CoreError> {
        GroupElement::new(r.a, r.s, r.t)
    }
}

impl From<GroupElement> for RawElement {
    fn from(g: GroupElement) -> Self {
        RawElement { a: g.a, s: g.s, t: g.t }
    }
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 1.0, ln_a: 0.0, s: 0.0, t: [0.0, 0.0] };

    pub fn new(a: f64, s: f64, t: Vec2) -> Result<Self, CoreError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::NonPositiveScale(a));
        }
        if !s.is_finite() || !t[0].is_finite() || !t[1].is_finite() {
            return Err(CoreError::NonFinite);
        }
        Ok(GroupElement { a, ln_a: a.ln(), s, t })
    }

    /// Builds an element from `ln a`; exact for scales outside the `f64` range of `a`.
    pub fn from_log(ln_a: f64, s: f64, t: Vec2) -> Result<Self, CoreError> {
        if !ln_a.is_finite() {
            return Err(CoreError::NonFinite);
        }
        let a = ln_a.exp();
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::NonPositiveScale(a));
        }
        if !s.is_finite() || !t[0].is_finite() || !t[1].is_finite() {
            return Err(CoreError::NonFinite);
        }
        Ok(GroupElement { a, ln_a, s, t })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }
    #[inline]
    pub fn ln_a(&self) -> f64 {
        self.ln_a
    }
    #[inline]
    pub fn s(&self) -> f64 {
        self.s
    }
    #[inline]
    pub fn t(&self) -> Vec2 {
        self.t
    }

    /// The group product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let (ap, sp) = (other.a, other.s);
        let sq = ap.sqrt();
        let st = shear_scale(ap, sq, sp, self.t);
        let out = GroupElement {
            a: ap * self.a,
            ln_a: self.ln_a + other.ln_a,
            s: sp + self.s * sq,
            t: [other.t[0] + st[0], other.t[1] + st[1]],
        };
        debug_assert!(out.scale_consistent());
        out
    }

    pub fn inverse(&self) -> GroupElement {
        let inv_a = 1.0 / self.a;
        let sq = inv_a.sqrt();
        let s_inv = -self.s * sq;
        let st = shear_scale(inv_a, sq, s_inv, self.t);
        GroupElement { a: inv_a, ln_a: -self.ln_a, s: s_inv, t: [-st[0], -st[1]] }
    }

    /// The argument map of `σ(g)`: `x ↦ S_s A_a x − t`.
    pub fn act(&self, x: Vec2) -> Vec2 {
        let y = shear_scale(self.a, self.a.sqrt(), self.s, x);
        [y[0] - self.t[0], y[1] - self.t[1]]
    }

    /// `M⁻¹ t` with `M = S_s A_a`: the spatial center of the shearlet `σ(g)ψ`.
    pub fn center(&self) -> Vec2 {
        let w = [self.t[0] - self.s * self.t[1], self.t[1]];
        [w[0] / self.a, w[1] / self.a.sqrt()]
    }

    pub fn phi(&self) -> TildeElement {
        let inv_a = 1.0 / self.a;
        let s_new = -self.s / self.a.sqrt();
        let t = shear_vec(s_new, scale_vec(inv_a, self.t));
        TildeElement { a: inv_a, s: s_new, t }
    }

    /// True when `a` and `exp(ln a)` agree to rounding.
    pub fn scale_consistent(&self) -> bool {
        let e = self.ln_a.exp();
        if e.is_finite() && e > 0.0 {
            (e - self.a).abs() <= 1e-9 * self.a.max(e)
        } else {
            true
        }
    }

    /// Largest componentwise relative deviation, with an absolute floor of 1 on each component.
    pub fn rel_diff(&self, other: &GroupElement) -> f64 {
        let d = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
        d(self.a, other.a)
            .max(d(self.s, other.s))
            .max(d(self.t[0], other.t[0]))
            .max(d(self.t[1], other.t[1]))
    }

    /// Parses `"a,s,t1,t2"`.
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(CoreError::Parse(format!("expected \"a,s,t1,t2\", got {text:?}")));
        }
        let mut v = [0.0; 4];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| CoreError::Parse(format!("not a number: {p:?}")))?;
        }
        GroupElement::new(v[0], v[1], [v[2], v[3]])
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.s, self.t[0], self.t[1])
    }
}

/// Element of 𝕊̃ with product `(a,s,t)⊙(a',s',t') = (aa', s + s'√a, t + S_s A_a t')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeElement {
    pub a: f64,
    pub s: f64,
    pub t: Vec2,
}

impl TildeElement {
    pub fn new(a: f64, s: f64, t: Vec2) -> Result<Self, CoreError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoreError::NonPositiveScale(a));
        }
        Ok(TildeElement { a, s, t })
    }

    pub fn compose(&self, other: &TildeElement) -> TildeElement {
        let sq = self.a.sqrt();
        let st = shear_scale(self.a, sq, self.s, other.t);
        TildeElement { a: self.a * other.a, s: self.s + other.s * sq, t: [self.t[0] + st[0], self.t[1] + st[1]] }
    }

    pub fn phi_inv(&self) -> GroupElement {
        let a = 1.0 / self.a;
        let s = -self.s * a.sqrt();
        let t = scale_vec(a, shear_vec(-self.s, self.t));
        GroupElement { a, ln_a: -self.a.ln(), s, t }
    }

    pub fn rel_diff(&self, other: &TildeElement) -> f64 {
        let d = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(1.0);
        d(self.a, other.a)
            .max(d(self.s, other.s))
            .max(d(self.t[0], other.t[0]))
            .max(d(self.t[1], other.t[1]))
    }
}

/// Haar volume of `Q_h`; `h⁴` for the left Haar measure `da ds dt / a`.
pub fn haar_box_volume(h: f64) -> Result<f64, CoreError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(CoreError::NonPositiveSize(h));
    }
    Ok(h.powi(4))
}

/// Numerical Haar measure of the translated box `g · Q_h`.
///
/// The box is parameterized by `q ∈ Q_h` and the integrand is the Haar density
/// `1/a` at `g·q` times the Jacobian determinant of `q ↦ g·q`, obtained by central
/// finite differences of [`GroupElement::compose`]. Tensor Gauss–Legendre with
/// `nodes` points per axis, and `nodes·⌈h⌉` along the scale axis where `1/a` varies
/// over `[e^{-h/2}, e^{h/2}]`.
pub fn haar_measure_of_translate(g: &GroupElement, h: f64, nodes: usize) -> Result<f64, CoreError> {
    haar_box_volume(h)?;
    let (a_lo, a_hi) = ((-h / 2.0).exp(), (h / 2.0).exp());
    let rules = [gauss_legendre(nodes * (h.ceil() as usize).max(1)), gauss_legendre(nodes)];
    let map = |x: [f64; 4]| -> [f64; 4] {
        let q = GroupElement { a: x[0], ln_a: x[0].ln(), s: x[1], t: [x[2], x[3]] };
        let p = g.compose(&q);
        [p.a, p.s, p.t[0], p.t[1]]
    };
    let lo = [a_lo, -h / 2.0, -h / 2.0, -h / 2.0];
    let hi = [a_hi, h / 2.0, h / 2.0, h / 2.0];
    let mut total = 0.0;
    let mut comp = 0.0;
    let (na, n) = (rules[0].len(), rules[1].len());
    for i0 in 0..na {
        for i1 in 0..n {
            for i2 in 0..n {
                for i3 in 0..n {
                    let idx = [i0, i1, i2, i3];
                    let mut x = [0.0; 4];
                    let mut w = 1.0;
                    for d in 0..4 {
                        let (node, weight) = rules[usize::from(d > 0)][idx[d]];
                        let half = 0.5 * (hi[d] - lo[d]);
                        x[d] = lo[d] + half * (node + 1.0);
                        w *= weight * half;
                    }
                    let y = map(x);
                    let mut jac = [[0.0; 4]; 4];
                    for d in 0..4 {
                        let step = 1e-6 * x[d].abs().max(1e-3);
                        let mut xp = x;
                        let mut xm = x;
                        xp[d] += step;
                        xm[d] -= step;
                        let (yp, ym) = (map(xp), map(xm));
                        for r in 0..4 {
                            jac[r][d] = (yp[r] - ym[r]) / (2.0 * step);
                        }
                    }
                    let term = w * det4(&jac).abs() / y[0];
                    // Kahan summation keeps the 4-D sum order-stable.
                    let yk = term - comp;
                    let tk = total + yk;
                    comp = (tk - total) - yk;
                    total = tk;
                }
            }
        }
    }
    Ok(total)
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: f64, s: f64, t1: f64, t2: f64) -> GroupElement {
        GroupElement::new(a, s, [t1, t2]).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(GroupElement::IDENTITY.compose(&g(4.0, 1.0, 2.0, 3.0)), g(4.0, 1.0, 2.0, 3.0));
        let p = g(4.0, 1.0, 0.0, 0.0).compose(&g(1.0, 0.0, 1.0, 0.0));
        assert!(p.rel_diff(&g(4.0, 1.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(GroupElement::IDENTITY.inverse(), GroupElement::IDENTITY);
        let i = g(4.0, 2.0, 0.0, 0.0).inverse();
        assert!(i.rel_diff(&g(0.25, -1.0, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn act_example() {
        assert_eq!(g(4.0, 1.0, 0.0, 0.0).act([1.0, 1.0]), [6.0, 2.0]);
        assert_eq!(GroupElement::IDENTITY.act([3.0, -2.0]), [3.0, -2.0]);
    }

    #[test]
    fn phi_examples() {
        let p = g(4.0, 2.0, 1.0, 0.0).phi();
        assert!(p.rel_diff(&TildeElement::new(0.25, -1.0, [0.25, 0.0]).unwrap()) < 1e-15);
        let back = TildeElement::new(0.25, -1.0, [0.25, 0.0]).unwrap().phi_inv();
        assert!(back.rel_diff(&g(4.0, 2.0, 1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(GroupElement::new(0.0, 0.0, [0.0, 0.0]).is_err());
        assert!(GroupElement::new(-1.0, 0.0, [0.0, 0.0]).is_err());
        assert!(haar_box_volume(0.0).is_err());
    }

    #[test]
    fn haar_volume_closed_form() {
        assert_eq!(haar_box_volume(2.0).unwrap(), 16.0);
        assert_eq!(haar_box_volume(1.0).unwrap(), 1.0);
        let q = haar_measure_of_translate(&GroupElement::IDENTITY, 0.5, 8).unwrap();
        assert!((q - 0.0625).abs() / 0.0625 < 1e-3);
    }

    #[test]
    fn parse_roundtrip() {
        let e = GroupElement::parse("4,1,2,3").unwrap();
        assert_eq!(e.to_string(), "4,1,2,3");
        assert!(GroupElement::parse("1,2,3").is_err());
    }
}
