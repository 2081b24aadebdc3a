//! Truncated amalgam norm `Σ_{j,k,m} sup_{x·Q₁} |T|` over the unit lattice
//! `x = (e^j, e^{-1/4} k, e^{-1/2} m)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AnalysisError, Result};
use crate::transform::QuadratureTransform;

/// Sample offsets per axis inside `Q₁`; the midpoint 0 gives the box center.
pub const BOX_OFFSETS: [f64; 3] = [-1.0 / 3.0, 0.0, 1.0 / 3.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmalgamReport {
    pub index_radius: usize,
    /// `partial_sums[ρ]` sums the boxes with `max(|j|, |k|, |m₁|, |m₂|) ≤ ρ`.
    pub partial_sums: Vec<f64>,
    /// `increments[0] = partial_sums[0]`, then successive differences.
    pub increments: Vec<f64>,
    pub samples_per_box: usize,
    /// Boxes whose `(a, s)` range can meet the spectrum of `f`.
    pub active_boxes: usize,
}

impl AmalgamReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,partial_sum,increment\n");
        for (r, (p, i)) in self.partial_sums.iter().zip(&self.increments).enumerate() {
            out.push_str(&format!("{r},{p:e},{i:e}\n"));
        }
        out
    }
}

pub fn amalgam_norm(q: &QuadratureTransform<'_>, index_radius: usize) -> Result<AmalgamReport> {
    if index_radius > 64 {
        return Err(AnalysisError::InvalidParameter(format!("index radius {index_radius} exceeds 64")));
    }
    let r = index_radius as i64;
    let side = 2 * index_radius + 1;
    let idx = |v: i64| (v + r) as usize;
    let e_q = (-0.25f64).exp();
    let e_h = (-0.5f64).exp();
    // Each (j, u, k, v) fixes (a, s); rows are indexed by (m₂, w₂), columns by (m₁, w₁).
    let mut cells = Vec::new();
    for j in -r..=r {
        for &u in &BOX_OFFSETS {
            for k in -r..=r {
                for &v in &BOX_OFFSETS {
                    cells.push((j, u, k, v));
                }
            }
        }
    }
    let results: Vec<Option<(i64, i64, Vec<f64>)>> = cells
        .par_iter()
        .map(|&(j, u, k, v)| {
            let a_q = u.exp();
            let sq = a_q.sqrt();
            let a = (j as f64 + u).exp();
            let s = v + e_q * k as f64 * sq;
            if !q.may_overlap(a, s) {
                return None;
            }
            let mut rows = Vec::with_capacity(side * 3);
            for m2 in -r..=r {
                for &w2 in &BOX_OFFSETS {
                    let t2 = w2 + e_h * sq * m2 as f64;
                    let mut t1s = Vec::with_capacity(side * 3);
                    for m1 in -r..=r {
                        for &w1 in &BOX_OFFSETS {
                            t1s.push(w1 + e_h * (a_q * m1 as f64 + v * sq * m2 as f64));
                        }
                    }
                    rows.push((t2, t1s));
                }
            }
            let vals = q.rows(a, s, &rows);
            // per-m box maxima, m-major layout [m2][m1]
            let mut best = vec![0.0f64; side * side];
            for (ri, row) in vals.iter().enumerate() {
                let m2 = ri / 3;
                for (ci, z) in row.iter().enumerate() {
                    let m1 = ci / 3;
                    let slot = &mut best[m2 * side + m1];
                    *slot = slot.max(z.norm());
                }
            }
            Some((j, k, best))
        })
        .collect();
    let mut sup = vec![0.0f64; side * side * side * side];
    let mut active = std::collections::BTreeSet::new();
    for (j, k, best) in results.into_iter().flatten() {
        active.insert((j, k));
        let base = (idx(j) * side + idx(k)) * side * side;
        for (i, v) in best.into_iter().enumerate() {
            let slot = &mut sup[base + i];
            *slot = slot.max(v);
        }
    }
    let mut shells = vec![0.0f64; index_radius + 1];
    for j in -r..=r {
        for k in -r..=r {
            let base = (idx(j) * side + idx(k)) * side * side;
            for m2 in -r..=r {
                for m1 in -r..=r {
                    let shell = j.abs().max(k.abs()).max(m1.abs()).max(m2.abs()) as usize;
                    shells[shell] += sup[base + idx(m2) * side + idx(m1)];
                }
            }
        }
    }
    let mut partial_sums = Vec::with_capacity(shells.len());
    let mut acc = 0.0;
    for v in &shells {
        acc += v;
        partial_sums.push(acc);
    }
    Ok(AmalgamReport {
        index_radius,
        partial_sums,
        increments: shells,
        samples_per_box: BOX_OFFSETS.len().pow(4),
        active_boxes: active.len() * side * side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{GeneratorParams, ShearletGenerator};
    use shearlet_core::GroupElement;

    #[test]
    fn radius_zero_is_the_sampled_sup_of_the_origin_box() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let q = QuadratureTransform::new(&gen, &gen);
        let rep = amalgam_norm(&q, 0).unwrap();
        assert_eq!(rep.partial_sums.len(), 1);
        let mut best = 0.0f64;
        for &u in &BOX_OFFSETS {
            for &v in &BOX_OFFSETS {
                for &w1 in &BOX_OFFSETS {
                    for &w2 in &BOX_OFFSETS {
                        let g = GroupElement::from_log(u, v, [w1, w2]).unwrap();
                        best = best.max(q.point(&g).norm());
                    }
                }
            }
        }
        assert!((rep.partial_sums[0] - best).abs() <= 1e-9 * best);
        // the box center is the identity, where T(ψ, e) = ‖ψ‖²
        assert!(best >= q.point(&GroupElement::IDENTITY).norm());
    }

    #[test]
    fn partial_sums_are_nondecreasing() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        let q = QuadratureTransform::new(&gen, &gen);
        let rep = amalgam_norm(&q, 2).unwrap();
        assert!(rep.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        assert!(rep.increments.iter().all(|&v| v >= 0.0));
    }
}
