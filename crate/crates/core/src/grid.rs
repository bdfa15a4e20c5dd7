//! Periodic grids, complex sample fields, unitary DFTs and Riemann-sum quadrature.
//!
//! The torus `[-L, L)^n` stands in for `R^n`. Samples sit at `x_i = -L + i*Δ`
//! with `Δ = 2L/N`, stored row-major with axis 0 (the real direction) outermost.
//! Frequencies are `k/(2L)` with `k` in DFT order, so index `k >= N/2` carries
//! the negative frequency `(k - N)/(2L)`.

use std::cell::RefCell;
use std::io::{Read, Write};
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{LabError, Result};

/// A point of the computational domain. One-dimensional grids leave the
/// second coordinate at zero.
pub type Point = [f64; 2];

const CFLD_MAGIC: &[u8; 5] = b"CFLD1";

/// Periodic computational domain and its frequency lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    dim: usize,
    points_per_axis: usize,
    half_width: f64,
}

impl GridSpec {
    /// Validates `dim ∈ {1,2}`, `N ≥ 8` a power of two and `L > 0`.
    pub fn new(dim: usize, points_per_axis: usize, half_width: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(LabError::InvalidGrid(format!(
                "dimension {dim} not in {{1,2}}"
            )));
        }
        if points_per_axis < 8 || !points_per_axis.is_power_of_two() {
            return Err(LabError::InvalidGrid(format!(
                "{points_per_axis} points per axis is not a power of two ≥ 8"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(LabError::InvalidGrid(format!(
                "half width {half_width} must be positive"
            )));
        }
        Ok(Self {
            dim,
            points_per_axis,
            half_width,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Sample spacing `Δ = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points_per_axis as f64
    }

    /// Quadrature weight `Δ^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of sample `i` along one axis.
    pub fn axis_coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    /// Signed lattice index of DFT slot `k`, in `[-N/2, N/2)`.
    pub fn signed_index(&self, k: usize) -> i64 {
        let n = self.points_per_axis as i64;
        let k = k as i64;
        if k < n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Frequency `k/(2L)` of DFT slot `k` along one axis.
    pub fn axis_frequency(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 / (2.0 * self.half_width)
    }

    /// Per-axis indices of a flat index.
    pub fn axis_indices(&self, index: usize) -> [usize; 2] {
        if self.dim == 1 {
            [index, 0]
        } else {
            [index / self.points_per_axis, index % self.points_per_axis]
        }
    }

    /// Flat index of per-axis indices (second ignored in one dimension).
    pub fn flat_index(&self, i0: usize, i1: usize) -> usize {
        if self.dim == 1 {
            i0
        } else {
            i0 * self.points_per_axis + i1
        }
    }

    /// Physical location of a flat index.
    pub fn point(&self, index: usize) -> Point {
        let [i0, i1] = self.axis_indices(index);
        if self.dim == 1 {
            [self.axis_coord(i0), 0.0]
        } else {
            [self.axis_coord(i0), self.axis_coord(i1)]
        }
    }

    /// Frequency vector of a flat DFT index.
    pub fn frequency(&self, index: usize) -> Point {
        let [k0, k1] = self.axis_indices(index);
        if self.dim == 1 {
            [self.axis_frequency(k0), 0.0]
        } else {
            [self.axis_frequency(k0), self.axis_frequency(k1)]
        }
    }

    /// Euclidean length of the signed offset `index` interpreted as a
    /// displacement of lattice steps, i.e. the nearest-image distance.
    pub fn offset_length(&self, index: usize) -> f64 {
        let [a, b] = self.axis_indices(index);
        let h = self.spacing();
        let x = self.signed_index(a) as f64 * h;
        let y = if self.dim == 2 {
            self.signed_index(b) as f64 * h
        } else {
            0.0
        };
        x.hypot(y)
    }
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ComplexField {
    /// Checks the sample count and rejects NaN or infinite samples.
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(LabError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for outputs of finite arithmetic.
    pub(crate) fn from_raw(grid: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn constant(grid: GridSpec, c: Complex64) -> Self {
        Self::from_raw(grid, vec![c; grid.len()])
    }

    /// Samples `f` at every grid point. Non-finite values are rejected.
    pub fn from_fn(grid: GridSpec, f: impl Fn(Point) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self::new(grid, values)
    }

    /// Samples a real-valued function.
    pub fn from_real_fn(grid: GridSpec, f: impl Fn(Point) -> f64) -> Result<Self> {
        Self::from_fn(grid, |p| Complex64::new(f(p), 0.0))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination. Panics if the grids differ.
    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_raw(self.grid, values)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Arithmetic mean of the samples (the normalized zero mode).
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `f - mean(f)`.
    pub fn remove_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// `max |f|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Quadrature L² norm.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// Quadrature inner product `∫ conj(f) g`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.cell_volume()
    }

    /// Real and imaginary parts as separate real vectors.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

impl Add for &ComplexField {
    type Output = ComplexField;
    fn add(self, rhs: &ComplexField) -> ComplexField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexField {
    type Output = ComplexField;
    fn sub(self, rhs: &ComplexField) -> ComplexField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: &ComplexField) -> ComplexField {
        self.zip_map(rhs, |a, b| a * b)
    }
}

impl Mul<Complex64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: Complex64) -> ComplexField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: f64) -> ComplexField {
        self.map(|v| v * rhs)
    }
}

impl Neg for &ComplexField {
    type Output = ComplexField;
    fn neg(self) -> ComplexField {
        self.map(|v| -v)
    }
}

/// Unitary DFT coefficients indexed like the grid (DFT order per axis).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coefficients: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: GridSpec, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(LabError::LengthMismatch {
                expected: grid.len(),
                found: coefficients.len(),
            });
        }
        Ok(Self { grid, coefficients })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// ℓ² norm of the coefficient vector.
    pub fn l2_norm(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized in-place DFT over every axis (sign `-` forward, `+` inverse).
pub(crate) fn fft_in_place(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let n = grid.points_per_axis();
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    });
    plan.process(data);
    if grid.dim() == 2 {
        transpose_square(data, n);
        plan.process(data);
        transpose_square(data, n);
    }
}

/// Unitary forward DFT: `F(ξ) = N^{-n/2} Σ f(x) e^{-2πi x·ξ}` up to the phase
/// of the grid origin, which cancels in every multiplier.
pub fn to_spectral(f: &ComplexField) -> SpectralField {
    let grid = *f.grid();
    let mut data = f.values().to_vec();
    fft_in_place(&grid, &mut data, false);
    let s = 1.0 / (grid.len() as f64).sqrt();
    data.iter_mut().for_each(|c| *c *= s);
    SpectralField {
        grid,
        coefficients: data,
    }
}

/// Inverse of [`to_spectral`].
pub fn to_physical(spec: &SpectralField) -> ComplexField {
    let grid = *spec.grid();
    let mut data = spec.coefficients().to_vec();
    fft_in_place(&grid, &mut data, true);
    let s = 1.0 / (grid.len() as f64).sqrt();
    data.iter_mut().for_each(|c| *c *= s);
    ComplexField::from_raw(grid, data)
}

/// Quadrature `L^p` norm, `p ∈ [1, ∞]` (`f64::INFINITY` for the sup norm).
pub fn lp_norm(f: &ComplexField, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(LabError::InvalidParameter {
            name: "p",
            value: p,
            reason: "must be ≥ 1",
        });
    }
    if p.is_infinite() {
        return Ok(f.sup_norm());
    }
    if p == 2.0 {
        return Ok(f.l2_norm());
    }
    // Scaling by the maximum keeps large exponents from overflowing.
    let m = f.sup_norm();
    if m == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = f.values().iter().map(|v| (v.norm() / m).powf(p)).sum();
    Ok(m * (sum * f.grid().cell_volume()).powf(1.0 / p))
}

/// Periodic shift by whole lattice steps: `result(x) = f(x + steps·Δ)`.
pub fn translate_steps(f: &ComplexField, steps: [i64; 2]) -> ComplexField {
    let grid = *f.grid();
    let n = grid.points_per_axis() as i64;
    let s0 = steps[0].rem_euclid(n) as usize;
    let s1 = if grid.dim() == 2 {
        steps[1].rem_euclid(n) as usize
    } else {
        0
    };
    let nn = grid.points_per_axis();
    let src = f.values();
    let values = (0..grid.len())
        .map(|i| {
            let [a, b] = grid.axis_indices(i);
            src[grid.flat_index((a + s0) % nn, (b + s1) % nn)]
        })
        .collect();
    ComplexField::from_raw(grid, values)
}

/// Periodic shift by a physical vector that must be a lattice multiple.
pub fn translate(f: &ComplexField, h: Point) -> Result<ComplexField> {
    let delta = f.grid().spacing();
    let mut steps = [0i64; 2];
    for axis in 0..f.grid().dim() {
        let s = h[axis] / delta;
        let r = s.round();
        if (s - r).abs() > 1e-9 * s.abs().max(1.0) {
            return Err(LabError::NonLatticeShift(h[axis]));
        }
        steps[axis] = r as i64;
    }
    Ok(translate_steps(f, steps))
}

/// Writes the little-endian `CFLD1` dump.
pub fn write_cfld1<W: Write>(f: &ComplexField, mut w: W) -> Result<()> {
    let g = f.grid();
    w.write_all(CFLD_MAGIC)?;
    w.write_all(&(g.dim() as u32).to_le_bytes())?;
    w.write_all(&(g.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&g.half_width().to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * g.len());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a `CFLD1` dump, validating the header and every sample.
pub fn read_cfld1<R: Read>(mut r: R) -> Result<ComplexField> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != CFLD_MAGIC {
        return Err(LabError::Format("bad magic".into()));
    }
    let mut u = [0u8; 4];
    r.read_exact(&mut u)?;
    let dim = u32::from_le_bytes(u) as usize;
    r.read_exact(&mut u)?;
    let n = u32::from_le_bytes(u) as usize;
    let mut d = [0u8; 8];
    r.read_exact(&mut d)?;
    let half_width = f64::from_le_bytes(d);
    let grid = GridSpec::new(dim, n, half_width)?;
    let mut buf = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut buf)?;
    let values = buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8-byte chunk"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8-byte chunk"));
            Complex64::new(re, im)
        })
        .collect();
    ComplexField::new(grid, values)
}

pub fn save_cfld1(f: &ComplexField, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_cfld1(f, std::io::BufWriter::new(file))
}

pub fn load_cfld1(path: &Path) -> Result<ComplexField> {
    let file = std::fs::File::open(path)?;
    read_cfld1(std::io::BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Direct O(N^{2n}) unitary DFT used as an independent oracle.
    fn naive_dft(f: &ComplexField) -> Vec<Complex64> {
        let g = f.grid();
        let n = g.points_per_axis() as f64;
        (0..g.len())
            .map(|k| {
                let [k0, k1] = g.axis_indices(k);
                let mut acc = c(0.0, 0.0);
                for (j, v) in f.values().iter().enumerate() {
                    let [j0, j1] = g.axis_indices(j);
                    let phase =
                        -2.0 * std::f64::consts::PI * ((k0 * j0) as f64 + (k1 * j1) as f64) / n;
                    acc += v * Complex64::from_polar(1.0, phase);
                }
                acc / (g.len() as f64).sqrt()
            })
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(3, 16, 1.0).is_err());
        assert!(GridSpec::new(2, 12, 1.0).is_err());
        assert!(GridSpec::new(2, 4, 1.0).is_err());
        assert!(GridSpec::new(1, 16, 0.0).is_err());
        let g = GridSpec::new(2, 16, 3.0).unwrap();
        assert_eq!(g.spacing() * 16.0, 6.0);
        assert_eq!(g.len(), 256);
    }

    #[test]
    fn frequency_lattice_symmetric_except_nyquist() {
        let g = GridSpec::new(1, 8, 2.0).unwrap();
        let ks: Vec<i64> = (0..8).map(|k| g.signed_index(k)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        assert_eq!(g.axis_frequency(1), 0.25);
    }

    #[test]
    fn dc_coefficient_of_constant() {
        for dim in [1, 2] {
            let g = GridSpec::new(dim, 8, 1.0).unwrap();
            let s = to_spectral(&ComplexField::constant(g, c(1.0, 0.0)));
            let dc = (g.len() as f64).sqrt();
            assert!((s.coefficients()[0] - c(dc, 0.0)).norm() < 1e-12);
            assert!(s.coefficients()[1..].iter().all(|v| v.norm() < 1e-12));
        }
    }

    #[test]
    fn lattice_exponential_has_single_coefficient() {
        let g = GridSpec::new(2, 8, 1.5).unwrap();
        let (k0, k1) = (3usize, 6usize);
        let xi = g.frequency(g.flat_index(k0, k1));
        let f = ComplexField::from_fn(g, |p| {
            Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * (p[0] * xi[0] + p[1] * xi[1]),
            )
        })
        .unwrap();
        let s = to_spectral(&f);
        for (i, v) in s.coefficients().iter().enumerate() {
            if i == g.flat_index(k0, k1) {
                assert!((v.norm() - 8.0).abs() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12, "leak at {i}: {v}");
            }
        }
        let back = to_physical(&s);
        assert!((&back - &f).sup_norm() < 1e-12);
    }

    #[test]
    fn matches_direct_summation_oracle() {
        for dim in [1, 2] {
            let g = GridSpec::new(dim, 8, 1.0).unwrap();
            let f = ComplexField::from_fn(g, |p| c((3.0 * p[0]).sin() + p[1], p[0] * p[1] - 0.2))
                .unwrap();
            let fast = to_spectral(&f);
            for (a, b) in fast.coefficients().iter().zip(naive_dft(&f)) {
                assert!((a - b).norm() < 1e-12);
            }
            let rel = (fast.l2_norm()
                - f.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
            .abs()
                / fast.l2_norm();
            assert!(rel < 1e-12);
        }
    }

    #[test]
    fn delta_spectrum_is_lattice_exponential() {
        let g = GridSpec::new(1, 16, 2.0).unwrap();
        let k = 13;
        let mut coeffs = vec![c(0.0, 0.0); 16];
        coeffs[k] = c(1.0, 0.0);
        let f = to_physical(&SpectralField::new(g, coeffs).unwrap());
        let xi = g.axis_frequency(k);
        for (i, v) in f.values().iter().enumerate() {
            let x = g.axis_coord(i);
            // The grid origin sits at -L, which contributes a constant phase.
            let expected = Complex64::from_polar(0.25, 2.0 * std::f64::consts::PI * xi * (x + 2.0));
            assert!((v - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn indicator_square_norm() {
        let g = GridSpec::new(2, 256, 2.0).unwrap();
        let f = ComplexField::from_real_fn(g, |p| {
            if (0.0..1.0).contains(&p[0]) && (0.0..1.0).contains(&p[1]) {
                1.0
            } else {
                0.0
            }
        })
        .unwrap();
        assert!((lp_norm(&f, 2.0).unwrap() - 1.0).abs() < 2.0 * g.spacing());
        assert!(lp_norm(&f, 0.5).is_err());
        assert_eq!(lp_norm(&ComplexField::zeros(g), 3.0).unwrap(), 0.0);
    }

    #[test]
    fn translation_rules() {
        let g = GridSpec::new(2, 16, 1.0).unwrap();
        let f = ComplexField::from_fn(g, |p| c(p[0] * p[0], p[1])).unwrap();
        assert_eq!(translate(&f, [0.0, 0.0]).unwrap(), f);
        assert_eq!(translate(&f, [2.0, -2.0]).unwrap(), f);
        assert!(translate(&f, [0.3 * g.spacing(), 0.0]).is_err());
        let t = translate(&f, [g.spacing(), 0.0]).unwrap();
        // result(x) = f(x + Δ e1)
        assert_eq!(
            t.values()[g.flat_index(3, 5)],
            f.values()[g.flat_index(4, 5)]
        );
    }

    #[test]
    fn non_finite_rejected() {
        let g = GridSpec::new(1, 8, 1.0).unwrap();
        let mut v = vec![c(0.0, 0.0); 8];
        v[3] = c(f64::NAN, 0.0);
        assert!(matches!(
            ComplexField::new(g, v),
            Err(LabError::NonFinite { index: 3 })
        ));
        assert!(ComplexField::new(g, vec![c(0.0, 0.0); 7]).is_err());
    }

    #[test]
    fn cfld1_round_trip_and_layout() {
        let g = GridSpec::new(2, 8, 1.25).unwrap();
        let f = ComplexField::from_fn(g, |p| c(p[0], -p[1])).unwrap();
        let mut buf = Vec::new();
        write_cfld1(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 5 + 4 + 4 + 8 + 16 * 64);
        assert_eq!(&buf[..5], b"CFLD1");
        assert_eq!(u32::from_le_bytes(buf[5..9].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(buf[9..13].try_into().unwrap()), 8);
        assert_eq!(f64::from_le_bytes(buf[13..21].try_into().unwrap()), 1.25);
        assert_eq!(read_cfld1(buf.as_slice()).unwrap(), f);
        buf[0] = b'X';
        assert!(read_cfld1(buf.as_slice()).is_err());
    }
}
