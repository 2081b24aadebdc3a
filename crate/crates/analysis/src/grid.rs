//! Functions sampled on a periodic square grid, with their spectra.
//!
//! Samples live at `x_n = -L + n·dx`, `dx = 2L/N`, rows indexed by `x₂`.
//! Frequencies are `ξ_k = k/(2L)` for `k ∈ [-N/2, N/2)`, stored with the
//! zero frequency at index `N/2`. The spectrum approximates the continuum
//! transform: `f̂_k = dx² Σ_n f(x_n) e^{-2πi⟨x_n, ξ_k⟩}`.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use shearlet_core::Vec2;

use crate::error::{AnalysisError, Result};
use crate::generator::Spectrum;

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    l: f64,
    n: usize,
    space: Vec<Complex64>,
    freq: Vec<Complex64>,
}

fn check_shape(l: f64, n: usize, len: usize) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(AnalysisError::InvalidParameter(format!("grid extent must be positive, got {l}")));
    }
    if n < 2 || n % 2 != 0 {
        return Err(AnalysisError::InvalidParameter(format!("grid resolution must be even and at least 2, got {n}")));
    }
    if len != n * n {
        return Err(AnalysisError::InvalidParameter(format!("expected {} samples, got {len}", n * n)));
    }
    Ok(())
}

/// In-place 2-D FFT of a row-major `n × n` array.
fn fft2(data: &mut [Complex64], n: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft: Arc<dyn Fft<f64>> = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let run_rows = |d: &mut [Complex64]| {
        d.par_chunks_mut(n).for_each_init(
            || vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    };
    run_rows(data);
    transpose(data, n);
    run_rows(data);
    transpose(data, n);
}

fn transpose(d: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            d.swap(i * n + j, j * n + i);
        }
    }
}

/// `(-1)^{k₁+k₂}` for the signed frequency indices of stored position `(i1, i2)`.
#[inline]
fn parity(i1: usize, i2: usize) -> f64 {
    // k = i - n/2 with n even, so k and i share parity
    if (i1 + i2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl GridFunction {
    pub fn from_space(l: f64, n: usize, space: Vec<Complex64>) -> Result<Self> {
        check_shape(l, n, space.len())?;
        let dx = 2.0 * l / n as f64;
        let mut work = space.clone();
        fft2(&mut work, n, false);
        let mut freq = vec![Complex64::new(0.0, 0.0); n * n];
        let h = n / 2;
        for i2 in 0..n {
            for i1 in 0..n {
                let src = ((i2 + h) % n) * n + (i1 + h) % n;
                freq[i2 * n + i1] = work[src] * (dx * dx * parity(i1, i2));
            }
        }
        Ok(GridFunction { l, n, space, freq })
    }

    pub fn from_spectrum(l: f64, n: usize, freq: Vec<Complex64>) -> Result<Self> {
        check_shape(l, n, freq.len())?;
        let dxi = 1.0 / (2.0 * l);
        let h = n / 2;
        let mut work = vec![Complex64::new(0.0, 0.0); n * n];
        for i2 in 0..n {
            for i1 in 0..n {
                let dst = ((i2 + h) % n) * n + (i1 + h) % n;
                work[dst] = freq[i2 * n + i1] * parity(i1, i2);
            }
        }
        fft2(&mut work, n, true);
        let scale = dxi * dxi;
        work.iter_mut().for_each(|v| *v *= scale);
        Ok(GridFunction { l, n, space: work, freq })
    }

    /// Samples a closed-form spectrum on the frequency grid; the support must fit the window.
    pub fn render(l: f64, n: usize, f: &dyn Spectrum) -> Result<Self> {
        check_shape(l, n, n * n)?;
        let lim = n as f64 / (4.0 * l);
        let [(l1, h1), (l2, h2)] = f.bounding_box();
        if !(l1 > -lim && h1 < lim && l2 > -lim && h2 < lim) {
            return Err(AnalysisError::Coverage(format!(
                "support [{l1}, {h1}] x [{l2}, {h2}] exceeds the frequency window (-{lim}, {lim})"
            )));
        }
        let dxi = 1.0 / (2.0 * l);
        let h = n as i64 / 2;
        let freq: Vec<Complex64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i1, i2) = ((idx % n) as i64, (idx / n) as i64);
                f.eval([(i1 - h) as f64 * dxi, (i2 - h) as f64 * dxi])
            })
            .collect();
        Self::from_spectrum(l, n, freq)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        1.0 / (2.0 * self.l)
    }

    /// Largest represented frequency magnitude per axis.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (4.0 * self.l)
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.dx()
    }

    /// Frequency of stored index `i`.
    pub fn xi(&self, i: usize) -> f64 {
        (i as f64 - (self.n / 2) as f64) * self.dxi()
    }

    /// Stored index of the signed frequency index `k`, if represented.
    pub fn freq_index(&self, k: i64) -> Option<usize> {
        let i = k + (self.n / 2) as i64;
        (0..self.n as i64).contains(&i).then_some(i as usize)
    }

    pub fn space(&self) -> &[Complex64] {
        &self.space
    }

    pub fn freq(&self) -> &[Complex64] {
        &self.freq
    }

    pub fn freq_at(&self, i1: usize, i2: usize) -> Complex64 {
        self.freq[i2 * self.n + i1]
    }

    /// `‖f‖² = Σ|f̂_k|² Δξ²`.
    pub fn norm_sq(&self) -> f64 {
        let d = self.dxi();
        self.freq.iter().map(|v| v.norm_sqr()).sum::<f64>() * d * d
    }

    /// `Σ|f(x_n)|² dx²`; equals [`Self::norm_sq`] up to rounding.
    pub fn space_norm_sq(&self) -> f64 {
        let d = self.dx();
        self.space.iter().map(|v| v.norm_sqr()).sum::<f64>() * d * d
    }

    /// Energy in the half-planes `ξ₁ < 0` and `ξ₁ > 0`.
    pub fn half_plane_energy(&self) -> (f64, f64) {
        let d = self.dxi();
        let (mut neg, mut pos) = (0.0, 0.0);
        for i2 in 0..self.n {
            for i1 in 0..self.n {
                let e = self.freq_at(i1, i2).norm_sqr();
                match self.xi(i1).partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Less) => neg += e,
                    Some(std::cmp::Ordering::Greater) => pos += e,
                    _ => {}
                }
            }
        }
        (neg * d * d, pos * d * d)
    }

    /// Frequency extent of the nonzero modes: `(min |ξ₁|, max |ξ₁|, max |ξ₂|)`.
    pub fn band(&self) -> Option<(f64, f64, f64)> {
        let mut out: Option<(f64, f64, f64)> = None;
        for i2 in 0..self.n {
            for i1 in 0..self.n {
                if self.freq_at(i1, i2) != Complex64::new(0.0, 0.0) {
                    let (x1, x2) = (self.xi(i1).abs(), self.xi(i2).abs());
                    out = Some(match out {
                        None => (x1, x1, x2),
                        Some((lo, hi, m2)) => (lo.min(x1), hi.max(x1), m2.max(x2)),
                    });
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        GridFunction {
            l: self.l,
            n: self.n,
            space: self.space.iter().map(|v| v * c).collect(),
            freq: self.freq.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sample_point(&self, i1: usize, i2: usize) -> Vec2 {
        [self.x(i1), self.x(i2)]
    }

    /// Binary export: header line `"L N"`, then `N²` little-endian `(re, im)` pairs of space samples.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.l, self.n)?;
        let mut buf = Vec::with_capacity(16 * self.space.len());
        for v in &self.space {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: BufRead>(mut r: R) -> Result<Self> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let mut parts = header.split_whitespace();
        let bad = |m: &str| AnalysisError::InvalidParameter(format!("grid header: {m}"));
        let l: f64 = parts.next().ok_or_else(|| bad("missing L"))?.parse().map_err(|_| bad("bad L"))?;
        let n: usize = parts.next().ok_or_else(|| bad("missing N"))?.parse().map_err(|_| bad("bad N"))?;
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        check_shape(l, n, n * n)?;
        let mut bytes = vec![0u8; 16 * n * n];
        r.read_exact(&mut bytes)?;
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
        let space = bytes.chunks_exact(16).map(|c| Complex64::new(f(&c[..8]), f(&c[8..]))).collect();
        Self::from_space(l, n, space)
    }

    /// CSV export of the space samples: `x1,x2,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x1,x2,re,im")?;
        for i2 in 0..self.n {
            for i1 in 0..self.n {
                let v = self.space[i2 * self.n + i1];
                writeln!(w, "{:e},{:e},{:e},{:e}", self.x(i1), self.x(i2), v.re, v.im)?;
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, l: f64, n: usize) -> Result<Self> {
        let mut space = Vec::with_capacity(n * n);
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(AnalysisError::InvalidParameter(format!("line {}: expected 4 columns", i + 1)));
            }
            let p = |s: &str| {
                s.trim().parse::<f64>().map_err(|_| AnalysisError::InvalidParameter(format!("line {}: bad number {s:?}", i + 1)))
            };
            space.push(Complex64::new(p(cols[2])?, p(cols[3])?));
        }
        Self::from_space(l, n, space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{BumpSpectrum, GeneratorParams, ShearletGenerator};

    fn gaussian_grid(l: f64, n: usize) -> GridFunction {
        let dx = 2.0 * l / n as f64;
        let space = (0..n * n)
            .map(|idx| {
                let (x1, x2) = (-l + (idx % n) as f64 * dx, -l + (idx / n) as f64 * dx);
                Complex64::new((-std::f64::consts::PI * (x1 * x1 + x2 * x2)).exp(), 0.1 * x1 * (-x2 * x2).exp())
            })
            .collect();
        GridFunction::from_space(l, n, space).unwrap()
    }

    #[test]
    fn spectrum_of_gaussian_matches_closed_form() {
        // e^{-π|x|²} is its own transform
        let g = gaussian_grid(6.0, 64);
        let re_only = GridFunction::from_space(6.0, 64, g.space().iter().map(|v| Complex64::new(v.re, 0.0)).collect()).unwrap();
        for (i1, i2) in [(32, 32), (35, 30), (40, 41)] {
            let (x1, x2) = (re_only.xi(i1), re_only.xi(i2));
            let want = (-std::f64::consts::PI * (x1 * x1 + x2 * x2)).exp();
            assert!((re_only.freq_at(i1, i2).re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        for (l, n) in [(4.0, 32), (6.0, 66)] {
            let g = gaussian_grid(l, n);
            let back = GridFunction::from_spectrum(l, n, g.freq().to_vec()).unwrap();
            let num: f64 = back.space().iter().zip(g.space()).map(|(a, b)| (a - b).norm_sqr()).sum();
            let den: f64 = g.space().iter().map(|v| v.norm_sqr()).sum();
            assert!((num / den).sqrt() < 1e-10);
            assert!((g.norm_sq() - g.space_norm_sq()).abs() < 1e-12 * g.norm_sq());
        }
    }

    #[test]
    fn render_checks_window() {
        let gen = ShearletGenerator::new(GeneratorParams::default()).unwrap();
        assert!(matches!(GridFunction::render(8.0, 32, &gen), Err(AnalysisError::Coverage(_))));
        let f = GridFunction::render(8.0, 128, &gen).unwrap();
        let (lo, hi, m2) = f.band().unwrap();
        assert!(lo > 1.0 && hi < 2.0 && m2 < 1.0);
        let one = GridFunction::render(8.0, 128, &BumpSpectrum::new((1.0, 2.0), (-1.0, 1.0), false, 1.0).unwrap()).unwrap();
        let (neg, pos) = one.half_plane_energy();
        assert_eq!(neg, 0.0);
        assert!(pos > 0.0);
    }

    #[test]
    fn binary_and_csv_round_trip() {
        let g = gaussian_grid(3.0, 16);
        let mut buf = Vec::new();
        g.write_binary(&mut buf).unwrap();
        assert!(buf.starts_with(b"3 16\n"));
        let back = GridFunction::read_binary(buf.as_slice()).unwrap();
        assert_eq!(back.space(), g.space());
        let mut csv = Vec::new();
        g.write_csv(&mut csv).unwrap();
        let back = GridFunction::read_csv(csv.as_slice(), 3.0, 16).unwrap();
        let err: f64 = back.space().iter().zip(g.space()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-15);
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(GridFunction::from_space(1.0, 3, vec![Complex64::new(0.0, 0.0); 9]).is_err());
        assert!(GridFunction::from_space(-1.0, 4, vec![Complex64::new(0.0, 0.0); 16]).is_err());
        assert!(GridFunction::read_binary(&b"2 4\n\x00"[..]).is_err());
    }
}
