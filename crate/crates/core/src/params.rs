//! Parameter set families and the plain-text parameter file format.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::group::{GroupElement, TildeElement};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub g: GroupElement,
    pub w: f64,
}

impl WeightedPoint {
    pub fn new(g: GroupElement, w: f64) -> Result<Self, CoreError> {
        if !(w > 0.0) || !w.is_finite() {
            return Err(CoreError::InvalidParameter(format!("weight must be positive, got {w}")));
        }
        Ok(WeightedPoint { g, w })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Regular,
    OversampledDiagonal,
    OversampledShear,
    Coshearlet,
    TildeRegular,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Regular,
        FamilyKind::OversampledDiagonal,
        FamilyKind::OversampledShear,
        FamilyKind::Coshearlet,
        FamilyKind::TildeRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Regular => "regular",
            FamilyKind::OversampledDiagonal => "oversampled_diagonal",
            FamilyKind::OversampledShear => "oversampled_shear",
            FamilyKind::Coshearlet => "coshearlet",
            FamilyKind::TildeRegular => "tilde_regular",
        }
    }

    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let norm = text.trim().to_ascii_lowercase().replace('-', "_");
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| CoreError::InvalidParameter(format!("unknown family {text:?}")))
    }
}

/// Diagonal oversampling entries `R_{jk} = diag(r1, r2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalRule {
    Constant { r1: f64, r2: f64 },
    /// Explicit entries for listed `(j, k)`, `default` elsewhere.
    PerIndex { entries: Vec<DiagonalEntry>, default: (f64, f64) },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagonalEntry {
    pub j: i64,
    pub k: i64,
    pub r1: f64,
    pub r2: f64,
}

impl DiagonalRule {
    pub fn entries(&self, j: i64, k: i64) -> (f64, f64) {
        match self {
            DiagonalRule::Constant { r1, r2 } => (*r1, *r2),
            DiagonalRule::PerIndex { entries, default } => entries
                .iter()
                .find(|e| e.j == j && e.k == k)
                .map(|e| (e.r1, e.r2))
                .unwrap_or(*default),
        }
    }

    fn validate(&self) -> Result<(), CoreError> {
        let check = |r1: f64, r2: f64| {
            let det = r1 * r2;
            if !(det > 0.0) || !det.is_finite() {
                Err(CoreError::InvalidParameter(format!(
                    "diagonal rule needs positive determinant, got diag({r1}, {r2})"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            DiagonalRule::Constant { r1, r2 } => check(*r1, *r2),
            DiagonalRule::PerIndex { entries, default } => {
                check(default.0, default.1)?;
                entries.iter().try_for_each(|e| check(e.r1, e.r2))
            }
        }
    }

    fn is_variable(&self) -> bool {
        matches!(self, DiagonalRule::PerIndex { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub diagonal: DiagonalRule,
}

/// Translation part of a family at fixed `(j, k)`: `τ = T m` with `T = [[t11, t12], [0, t22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TranslationMatrix {
    pub t11: f64,
    pub t12: f64,
    pub t22: f64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, a: f64, b: f64, c: f64) -> Result<Self, CoreError> {
        let spec = FamilySpec { kind, a, b, c, diagonal: DiagonalRule::Constant { r1: 1.0, r2: 1.0 } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_diagonal(mut self, rule: DiagonalRule) -> Result<Self, CoreError> {
        rule.validate()?;
        self.diagonal = rule;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.a > 1.0) || !self.a.is_finite() {
            return Err(CoreError::InvalidParameter(format!("a > 1 required, got {}", self.a)));
        }
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(CoreError::InvalidParameter(format!("b > 0 required, got {}", self.b)));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(CoreError::InvalidParameter(format!("c > 0 required, got {}", self.c)));
        }
        self.diagonal.validate()
    }

    /// Scale `a^j` as a log.
    pub fn ln_scale(&self, j: i64) -> f64 {
        j as f64 * self.a.ln()
    }

    pub fn weight(&self, j: i64, k: i64) -> f64 {
        match self.kind {
            FamilyKind::OversampledDiagonal => {
                let (r1, r2) = self.diagonal.entries(j, k);
                1.0 / (r1 * r2).abs()
            }
            _ => 1.0,
        }
    }

    /// Whether all `(j, k)` carry the same weight (used by fast counting).
    pub fn has_uniform_weight(&self) -> bool {
        !(self.kind == FamilyKind::OversampledDiagonal && self.diagonal.is_variable())
    }

    pub fn translation_matrix(&self, j: i64, k: i64) -> TranslationMatrix {
        let c = self.c;
        match self.kind {
            FamilyKind::Regular | FamilyKind::TildeRegular => TranslationMatrix { t11: c, t12: 0.0, t22: c },
            FamilyKind::OversampledDiagonal => {
                let (r1, r2) = self.diagonal.entries(j, k);
                TranslationMatrix { t11: c / r1, t12: 0.0, t22: c / r2 }
            }
            FamilyKind::OversampledShear => {
                let bk = self.b * k as f64;
                TranslationMatrix { t11: c, t12: -c * bk, t22: c }
            }
            FamilyKind::Coshearlet => {
                let aj = self.ln_scale(j).exp();
                let bk = self.b * k as f64;
                let sq = aj.sqrt();
                TranslationMatrix { t11: c * aj, t12: c * bk * sq, t22: c * sq }
            }
        }
    }

    /// The point of Λ with index `(j, k, m)`.
    pub fn point(&self, j: i64, k: i64, m: [i64; 2]) -> WeightedPoint {
        let (m1, m2) = (m[0] as f64, m[1] as f64);
        let w = self.weight(j, k);
        let g = match self.kind {
            FamilyKind::TildeRegular => {
                let ln_inv = -self.ln_scale(j);
                let a_inv = ln_inv.exp();
                let s_t = -self.b * k as f64 * a_inv.sqrt();
                // c S_{s̃} A_{a^{-j}} m
                let am = [a_inv * m1, a_inv.sqrt() * m2];
                let t = [self.c * (am[0] + s_t * am[1]), self.c * am[1]];
                let tilde = TildeElement { a: a_inv, s: s_t, t };
                let g = tilde.phi_inv();
                GroupElement::from_log(-ln_inv, g.s(), g.t()).expect("finite tilde point")
            }
            _ => {
                let tm = self.translation_matrix(j, k);
                let t = [tm.t11 * m1 + tm.t12 * m2, tm.t22 * m2];
                GroupElement::from_log(self.ln_scale(j), self.b * k as f64, t).expect("finite family point")
            }
        };
        WeightedPoint { g, w }
    }

    /// 𝕊̃ coordinates of the tilde family point `(a^{-j}, -bk a^{-j/2}, c S_{-bk a^{-j/2}} A_{a^{-j}} m)`.
    pub fn tilde_coordinates(&self, j: i64, k: i64, m: [i64; 2]) -> TildeElement {
        let a_inv = (-self.ln_scale(j)).exp();
        let s_t = -self.b * k as f64 * a_inv.sqrt();
        let am = [a_inv * m[0] as f64, a_inv.sqrt() * m[1] as f64];
        TildeElement { a: a_inv, s: s_t, t: [self.c * (am[0] + s_t * am[1]), self.c * am[1]] }
    }
}

/// Index window `j ∈ j_range`, `k ∈ k_range`, `m ∈ m1_range × m2_range` (inclusive bounds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub j_range: (i64, i64),
    pub k_range: (i64, i64),
    pub m1_range: (i64, i64),
    pub m2_range: (i64, i64),
}

impl Window {
    pub fn new(j_range: (i64, i64), k_range: (i64, i64), m1_range: (i64, i64), m2_range: (i64, i64)) -> Result<Self, CoreError> {
        for (name, r) in [("j", j_range), ("k", k_range), ("m1", m1_range), ("m2", m2_range)] {
            if r.0 > r.1 {
                return Err(CoreError::InvalidParameter(format!("empty {name} range {r:?}")));
            }
        }
        Ok(Window { j_range, k_range, m1_range, m2_range })
    }

    /// `[-r, r]` on every index.
    pub fn symmetric(r: i64) -> Self {
        let r = r.abs();
        Window { j_range: (-r, r), k_range: (-r, r), m1_range: (-r, r), m2_range: (-r, r) }
    }

    pub fn len(&self) -> u64 {
        let span = |r: (i64, i64)| (r.1 - r.0 + 1) as u64;
        span(self.j_range) * span(self.k_range) * span(self.m1_range) * span(self.m2_range)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A finite weighted parameter set together with where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub family: Option<FamilySpec>,
    pub window: Option<Window>,
    pub points: Vec<WeightedPoint>,
}

impl ParamSet {
    pub fn from_points(points: Vec<WeightedPoint>) -> Self {
        ParamSet { family: None, window: None, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn generate(family: &FamilySpec, window: &Window) -> Result<ParamSet, CoreError> {
    family.validate()?;
    let mut points = Vec::with_capacity(window.len() as usize);
    for j in window.j_range.0..=window.j_range.1 {
        for k in window.k_range.0..=window.k_range.1 {
            for m1 in window.m1_range.0..=window.m1_range.1 {
                for m2 in window.m2_range.0..=window.m2_range.1 {
                    points.push(family.point(j, k, [m1, m2]));
                }
            }
        }
    }
    Ok(ParamSet { family: Some(family.clone()), window: Some(*window), points })
}

/// Writes one `a s t1 t2 w` line per point with 17 significant digits.
pub fn write_paramset<W: Write>(ps: &ParamSet, mut sink: W) -> Result<(), CoreError> {
    writeln!(sink, "# a s t1 t2 w")?;
    if let Some(f) = &ps.family {
        writeln!(sink, "# family {} a={} b={} c={}", f.kind.name(), f.a, f.b, f.c)?;
    }
    for p in &ps.points {
        let t = p.g.t();
        writeln!(sink, "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e}", p.g.a(), p.g.s(), t[0], t[1], p.w)?;
    }
    Ok(())
}

pub fn read_paramset<R: BufRead>(source: R) -> Result<ParamSet, CoreError> {
    let mut points = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(CoreError::Line { line: line_no, msg: format!("expected 5 fields, found {}", fields.len()) });
        }
        let mut v = [0.0; 5];
        for (slot, f) in v.iter_mut().zip(&fields) {
            *slot = f
                .parse()
                .map_err(|_| CoreError::Line { line: line_no, msg: format!("not a number: {f:?}") })?;
        }
        let g = GroupElement::new(v[0], v[1], [v[2], v[3]])
            .map_err(|e| CoreError::Line { line: line_no, msg: e.to_string() })?;
        let p = WeightedPoint::new(g, v[4]).map_err(|e| CoreError::Line { line: line_no, msg: e.to_string() })?;
        points.push(p);
    }
    Ok(ParamSet::from_points(points))
}

/// CSV rows `a,s,t1,t2` for scatter plots of the parameter geometry.
pub fn scatter_csv<W: Write>(ps: &ParamSet, mut sink: W) -> Result<(), CoreError> {
    writeln!(sink, "a,s,t1,t2")?;
    for p in &ps.points {
        let t = p.g.t();
        writeln!(sink, "{},{},{},{}", p.g.a(), p.g.s(), t[0], t[1])?;
    }
    Ok(())
}
