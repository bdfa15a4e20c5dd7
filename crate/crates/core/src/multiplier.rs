//! Fourier multipliers on the periodic grid.
//!
//! Convention: `f̂(ξ) = ∫ f(x) e^{-2πi x·ξ} dx`, so a derivative `∂/∂x_j` has
//! symbol `2πiξ_j` and the fractional Laplacian `D^β = (-Δ)^{β/2}` has symbol
//! `(2π|ξ|)^β`. In the plane `ξ = ξ₁ + iξ₂` is treated as a complex number.
//!
//! | operator | symbol | zero mode |
//! |---|---|---|
//! | `D^β` | `(2π|ξ|)^β` | annihilated |
//! | `I_β` | `(2π|ξ|)^{-β}` | annihilated |
//! | `R_j` | `-iξ_j/|ξ|` | annihilated |
//! | `B` | `ξ̄/ξ` | annihilated |
//! | `C` | `1/(πiξ)` | annihilated |
//! | `∂̄` | `πiξ` | zero |
//! | `∂` | `πiξ̄` | zero |

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::{fft_in_place, ComplexField, GridSpec, Point};

/// What a multiplier does to the zero frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroModePolicy {
    /// Set to 0 (used by every singular or homogeneous symbol).
    Annihilate,
    /// Set to 1.
    Identity,
}

/// A Fourier multiplier: a symbol on nonzero frequencies plus a zero-mode rule.
#[derive(Clone)]
pub struct MultiplierSymbol {
    evaluate: Arc<dyn Fn(Point) -> Complex64 + Send + Sync>,
    zero_mode: ZeroModePolicy,
}

impl std::fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("zero_mode", &self.zero_mode)
            .finish_non_exhaustive()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie in (0, 1)",
        })
    }
}

fn require_plane(grid: &GridSpec) -> Result<()> {
    if grid.dim() == 2 {
        Ok(())
    } else {
        Err(LabError::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        })
    }
}

fn radius(xi: Point) -> f64 {
    xi[0].hypot(xi[1])
}

fn cplx(xi: Point) -> Complex64 {
    Complex64::new(xi[0], xi[1])
}

impl MultiplierSymbol {
    pub fn new(
        zero_mode: ZeroModePolicy,
        evaluate: impl Fn(Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            evaluate: Arc::new(evaluate),
            zero_mode,
        }
    }

    pub fn zero_mode(&self) -> ZeroModePolicy {
        self.zero_mode
    }

    /// Symbol value at a lattice frequency, applying the zero-mode rule at `ξ = 0`.
    pub fn value(&self, xi: Point) -> Complex64 {
        if xi == [0.0, 0.0] {
            match self.zero_mode {
                ZeroModePolicy::Annihilate => Complex64::new(0.0, 0.0),
                ZeroModePolicy::Identity => Complex64::new(1.0, 0.0),
            }
        } else {
            (self.evaluate)(xi)
        }
    }

    pub fn identity() -> Self {
        Self::new(ZeroModePolicy::Identity, |_| Complex64::new(1.0, 0.0))
    }

    /// `(2π|ξ|)^s` for any real `s`; negative orders give Riesz potentials.
    pub fn power(order: f64) -> Self {
        Self::new(ZeroModePolicy::Annihilate, move |xi| {
            Complex64::new((2.0 * PI * radius(xi)).powf(order), 0.0)
        })
    }

    /// Riesz transform `-iξ_j/|ξ|` along axis `j ∈ {1,2}`.
    pub fn riesz(axis: usize) -> Self {
        Self::new(ZeroModePolicy::Annihilate, move |xi| {
            Complex64::new(0.0, -xi[axis - 1] / radius(xi))
        })
    }

    /// Beurling transform `ξ̄/ξ`.
    pub fn beurling() -> Self {
        Self::new(ZeroModePolicy::Annihilate, |xi| {
            let z = cplx(xi);
            z.conj() / z
        })
    }

    /// Solid Cauchy transform `1/(πiξ)`, the right inverse of `∂̄`.
    pub fn cauchy() -> Self {
        Self::new(ZeroModePolicy::Annihilate, |xi| {
            1.0 / (Complex64::new(0.0, PI) * cplx(xi))
        })
    }

    /// `∂̄ = ½(∂ₓ + i∂_y)`, symbol `πiξ`.
    pub fn dbar() -> Self {
        Self::new(ZeroModePolicy::Annihilate, |xi| {
            Complex64::new(0.0, PI) * cplx(xi)
        })
    }

    /// `∂ = ½(∂ₓ − i∂_y)`, symbol `πiξ̄`.
    pub fn dz() -> Self {
        Self::new(ZeroModePolicy::Annihilate, |xi| {
            Complex64::new(0.0, PI) * cplx(xi).conj()
        })
    }

    /// Partial derivative `∂/∂x_j`, symbol `2πiξ_j`.
    pub fn partial(axis: usize) -> Self {
        Self::new(ZeroModePolicy::Annihilate, move |xi| {
            Complex64::new(0.0, 2.0 * PI * xi[axis - 1])
        })
    }

    /// One-dimensional Hilbert transform `-i sgn ξ`.
    pub fn hilbert() -> Self {
        Self::new(ZeroModePolicy::Annihilate, |xi| {
            Complex64::new(0.0, -xi[0].signum())
        })
    }

    /// Evaluates the symbol on every lattice frequency of `grid`.
    pub fn tabulate(&self, grid: &GridSpec) -> SymbolTable {
        let values = (0..grid.len())
            .map(|i| self.value(grid.frequency(i)))
            .collect();
        SymbolTable {
            grid: *grid,
            values,
        }
    }
}

/// A symbol sampled on one grid's frequency lattice, for repeated application.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl SymbolTable {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise product of two tables (operator composition).
    pub fn compose(&self, other: &SymbolTable) -> SymbolTable {
        assert_eq!(self.grid, other.grid, "symbol tables on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        SymbolTable {
            grid: self.grid,
            values,
        }
    }

    /// Applies the multiplier. Panics if `f` lives on a different grid.
    pub fn apply(&self, f: &ComplexField) -> ComplexField {
        assert_eq!(
            &self.grid,
            f.grid(),
            "symbol table and field on different grids"
        );
        let mut data = f.values().to_vec();
        fft_in_place(&self.grid, &mut data, false);
        let s = 1.0 / self.grid.len() as f64;
        for (d, m) in data.iter_mut().zip(&self.values) {
            *d *= m * s;
        }
        fft_in_place(&self.grid, &mut data, true);
        ComplexField::from_raw(self.grid, data)
    }
}

/// Multiplies the spectrum of `f` by `sym`.
pub fn apply_multiplier(sym: &MultiplierSymbol, f: &ComplexField) -> ComplexField {
    sym.tabulate(f.grid()).apply(f)
}

/// `D^β f`, symbol `(2π|ξ|)^β`.
pub fn frac_laplacian(f: &ComplexField, beta: f64) -> Result<ComplexField> {
    check_beta(beta)?;
    Ok(apply_multiplier(&MultiplierSymbol::power(beta), f))
}

/// `I_β f`, symbol `(2π|ξ|)^{-β}`.
pub fn riesz_potential(f: &ComplexField, beta: f64) -> Result<ComplexField> {
    check_beta(beta)?;
    Ok(apply_multiplier(&MultiplierSymbol::power(-beta), f))
}

/// `R_j f` for `j ∈ {1, 2}` in the plane.
pub fn riesz_transform(f: &ComplexField, axis: usize) -> Result<ComplexField> {
    require_plane(f.grid())?;
    if axis != 1 && axis != 2 {
        return Err(LabError::InvalidParameter {
            name: "axis",
            value: axis as f64,
            reason: "must be 1 or 2",
        });
    }
    Ok(apply_multiplier(&MultiplierSymbol::riesz(axis), f))
}

/// Beurling transform `B f`.
pub fn beurling(f: &ComplexField) -> Result<ComplexField> {
    require_plane(f.grid())?;
    Ok(apply_multiplier(&MultiplierSymbol::beurling(), f))
}

/// `conj(B f)`.
pub fn conj_beurling(f: &ComplexField) -> Result<ComplexField> {
    Ok(beurling(f)?.conj())
}

/// Solid Cauchy transform `C h`.
pub fn cauchy_transform(h: &ComplexField) -> Result<ComplexField> {
    require_plane(h.grid())?;
    Ok(apply_multiplier(&MultiplierSymbol::cauchy(), h))
}

pub fn dbar(f: &ComplexField) -> Result<ComplexField> {
    require_plane(f.grid())?;
    Ok(apply_multiplier(&MultiplierSymbol::dbar(), f))
}

pub fn dz(f: &ComplexField) -> Result<ComplexField> {
    require_plane(f.grid())?;
    Ok(apply_multiplier(&MultiplierSymbol::dz(), f))
}

/// One-dimensional Hilbert transform.
pub fn hilbert_transform(f: &ComplexField) -> Result<ComplexField> {
    if f.grid().dim() != 1 {
        return Err(LabError::DimensionMismatch {
            expected: 1,
            found: f.grid().dim(),
        });
    }
    Ok(apply_multiplier(&MultiplierSymbol::hilbert(), f))
}

/// Spectral gradient, one component per axis.
pub fn gradient(f: &ComplexField) -> Vec<ComplexField> {
    (1..=f.grid().dim())
        .map(|j| apply_multiplier(&MultiplierSymbol::partial(j), f))
        .collect()
}

/// `D^{1-α}(R₁ + iR₂)D^α f`, the Riesz-transform route to `∂̄` up to a constant.
pub fn riesz_representation(f: &ComplexField, alpha: f64) -> Result<ComplexField> {
    check_beta(alpha)?;
    require_plane(f.grid())?;
    let grid = f.grid();
    let r = MultiplierSymbol::riesz(1).tabulate(grid);
    let r2 = MultiplierSymbol::riesz(2).tabulate(grid);
    let combined: Vec<Complex64> = r
        .values()
        .iter()
        .zip(r2.values())
        .map(|(a, b)| a + Complex64::i() * b)
        .collect();
    let riesz_pair = SymbolTable {
        grid: *grid,
        values: combined,
    };
    let table = MultiplierSymbol::power(1.0 - alpha)
        .tabulate(grid)
        .compose(&riesz_pair)
        .compose(&MultiplierSymbol::power(alpha).tabulate(grid));
    Ok(table.apply(f))
}

/// Least-squares constant relating `∂̄` to the Riesz representation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RieszConstant {
    pub alpha: f64,
    pub c_re: f64,
    pub c_im: f64,
    /// `‖∂̄f − c·rep(f)‖₂ / ‖∂̄f‖₂`.
    pub residual: f64,
}

/// Measures `c` in `∂̄f = c·D^{1-α}(R₁+iR₂)D^α f` by least squares on `f`.
pub fn measure_riesz_constant(f: &ComplexField, alpha: f64) -> Result<RieszConstant> {
    let rep = riesz_representation(f, alpha)?;
    let direct = dbar(f)?;
    let denom = rep.inner(&rep);
    if denom.norm() == 0.0 {
        return Err(LabError::DegenerateRatio {
            numerator: direct.l2_norm(),
        });
    }
    let c = rep.inner(&direct) / denom;
    let residual = (&direct - &rep.scale(c)).l2_norm() / direct.l2_norm();
    Ok(RieszConstant {
        alpha,
        c_re: c.re,
        c_im: c.im,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn bump(grid: GridSpec) -> ComplexField {
        ComplexField::from_fn(grid, |p| {
            let r2 = p[0] * p[0] + p[1] * p[1];
            Complex64::new(
                (-r2).exp() * (1.0 + 0.3 * p[0]),
                0.2 * (-(2.0 * r2)).exp() * p[1],
            )
        })
        .unwrap()
    }

    fn mode(grid: GridSpec, index: usize) -> (ComplexField, Point) {
        let xi = grid.frequency(index);
        let f = ComplexField::from_fn(grid, |p| {
            Complex64::from_polar(1.0, 2.0 * PI * (p[0] * xi[0] + p[1] * xi[1]))
        })
        .unwrap();
        (f, xi)
    }

    #[test]
    fn trivial_symbols() {
        let g = GridSpec::new(2, 16, 2.0).unwrap();
        let f = bump(g);
        assert!((&apply_multiplier(&MultiplierSymbol::identity(), &f) - &f).sup_norm() < 1e-14);
        let neg = MultiplierSymbol::new(ZeroModePolicy::Identity, |_| Complex64::new(-1.0, 0.0));
        let f0 = f.remove_mean();
        assert!((&apply_multiplier(&neg, &f0) + &f0).sup_norm() < 1e-14);
    }

    #[test]
    fn power_then_inverse_removes_mean() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let f = bump(g);
        let back = riesz_potential(&frac_laplacian(&f, 0.4).unwrap(), 0.4).unwrap();
        assert!((&back - &f.remove_mean()).sup_norm() < 1e-12);
        assert!(frac_laplacian(&f, 1.0).is_err());
        assert!(riesz_potential(&f, 0.0).is_err());
    }

    #[test]
    fn eigenfunctions() {
        let g = GridSpec::new(2, 16, 2.0).unwrap();
        let (f, xi) = mode(g, g.flat_index(3, 14));
        let lam = (2.0 * PI * radius(xi)).powf(0.3);
        assert!((&frac_laplacian(&f, 0.3).unwrap() - &(&f * lam)).sup_norm() < 1e-12);
        assert!((&riesz_potential(&f, 0.3).unwrap() - &(&f * (1.0 / lam))).sup_norm() < 1e-12);
        let c = frac_laplacian(&ComplexField::constant(g, Complex64::new(2.0, 1.0)), 0.5).unwrap();
        assert!(c.sup_norm() < 1e-14);
    }

    #[test]
    fn riesz_and_beurling_on_axis_modes() {
        let g = GridSpec::new(2, 16, 2.0).unwrap();
        let (real_mode, _) = mode(g, g.flat_index(13, 0));
        let r1 = riesz_transform(&real_mode, 1).unwrap();
        // ξ₁ < 0 here, so −i·sign(ξ₁) = +i.
        assert!((&r1 - &real_mode.scale(Complex64::i())).sup_norm() < 1e-12);
        assert!(riesz_transform(&real_mode, 2).unwrap().sup_norm() < 1e-12);
        assert!(riesz_transform(&real_mode, 3).is_err());
        assert!((&beurling(&real_mode).unwrap() - &real_mode).sup_norm() < 1e-12);
        let (imag_mode, _) = mode(g, g.flat_index(0, 5));
        assert!((&beurling(&imag_mode).unwrap() + &imag_mode).sup_norm() < 1e-12);
        let cb = conj_beurling(&real_mode).unwrap();
        assert!((&cb - &real_mode.conj()).sup_norm() < 1e-12);
    }

    #[test]
    fn plane_only_operators_reject_lines() {
        let g = GridSpec::new(1, 16, 2.0).unwrap();
        let f = ComplexField::zeros(g);
        assert!(beurling(&f).is_err());
        assert!(cauchy_transform(&f).is_err());
        assert!(dz(&f).is_err());
        assert!(hilbert_transform(&f).is_ok());
    }

    #[test]
    fn cauchy_transform_of_disk() {
        // C(χ_𝔻) = z̄ inside the unit disk and 1/z outside.
        let mut prev = f64::INFINITY;
        for n in [128, 256] {
            let g = GridSpec::new(2, n, 4.0).unwrap();
            let disk =
                ComplexField::from_real_fn(g, |p| if p[0].hypot(p[1]) < 1.0 { 1.0 } else { 0.0 })
                    .unwrap();
            let cf = cauchy_transform(&disk).unwrap();
            // The torus forces a zero-mean displacement; compare after removing the
            // constant offset fixed by the interior annulus.
            let mut err: f64 = 0.0;
            let mut offset = Complex64::new(0.0, 0.0);
            let mut count = 0.0;
            for (i, v) in cf.values().iter().enumerate() {
                let p = g.point(i);
                if p[0].hypot(p[1]) < 0.7 {
                    offset += v - Complex64::new(p[0], -p[1]);
                    count += 1.0;
                }
            }
            offset /= count;
            for (i, v) in cf.values().iter().enumerate() {
                let p = g.point(i);
                if p[0].hypot(p[1]) < 0.7 {
                    err = err.max((v - offset - Complex64::new(p[0], -p[1])).norm());
                }
            }
            assert!(err < prev);
            assert!(err < 0.05, "N={n}: {err}");
            prev = err;
        }
    }

    #[test]
    fn derivative_of_windowed_ramp() {
        let g = GridSpec::new(2, 128, 4.0).unwrap();
        let w = |r: f64| (-(r / 1.5).powi(8)).exp();
        let ramp =
            ComplexField::from_fn(g, |p| Complex64::new(p[0], p[1]) * w(p[0].hypot(p[1]))).unwrap();
        let d = dz(&ramp).unwrap();
        let db = dbar(&ramp).unwrap();
        for (i, (a, b)) in d.values().iter().zip(db.values()).enumerate() {
            let p = g.point(i);
            if p[0].hypot(p[1]) < 0.5 {
                assert!((a - 1.0).norm() < 1e-3);
                assert!(b.norm() < 1e-3);
            }
        }
    }

    #[test]
    fn riesz_representation_constant_is_minus_half() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let f = bump(g).remove_mean();
        for alpha in [0.6, 0.75] {
            let rc = measure_riesz_constant(&f, alpha).unwrap();
            assert!((rc.c_re + 0.5).abs() < 1e-12 && rc.c_im.abs() < 1e-12);
            assert!(rc.residual < 1e-12);
        }
    }
}
