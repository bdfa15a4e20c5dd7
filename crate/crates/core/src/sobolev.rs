//! Fractional Sobolev, BMO and VMO diagnostics.

use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::{lp_norm, ComplexField};
use crate::lattice::PeriodicKernel;
use crate::multiplier::frac_laplacian;

/// Largest grids for the dense Gagliardo double sum.
pub const MAX_GAGLIARDO_LINE: usize = 4096;
pub const MAX_GAGLIARDO_PLANE: usize = 96;

fn check_alpha_p(alpha: f64, p: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1)",
        });
    }
    if !(p > 1.0 && p.is_finite()) {
        return Err(LabError::InvalidParameter {
            name: "p",
            value: p,
            reason: "must lie in (1, ∞)",
        });
    }
    Ok(())
}

/// `‖D^α f‖_p`.
pub fn homogeneous_seminorm(f: &ComplexField, alpha: f64, p: f64) -> Result<f64> {
    check_alpha_p(alpha, p)?;
    lp_norm(&frac_laplacian(f, alpha)?, p)
}

/// `‖f‖_p + ‖D^α f‖_p`, the Bessel-potential norm of `W^{α,p}`.
pub fn sobolev_norm(f: &ComplexField, alpha: f64, p: f64) -> Result<f64> {
    Ok(lp_norm(f, p)? + homogeneous_seminorm(f, alpha, p)?)
}

/// `(ΣΣ |f(x) − f(y)|^p K(x − y) Δ^{2n})^{1/p}` with `K` the periodized
/// kernel `Σ_m |z + 2Lm|^{−(n+αp)}`, the torus form of the Gagliardo seminorm.
pub fn gagliardo_seminorm(f: &ComplexField, alpha: f64, p: f64) -> Result<f64> {
    check_alpha_p(alpha, p)?;
    let g = *f.grid();
    let n = g.points_per_axis();
    let bound = if g.dim() == 1 {
        MAX_GAGLIARDO_LINE
    } else {
        MAX_GAGLIARDO_PLANE
    };
    if n > bound {
        return Err(LabError::SizeBound(format!(
            "Gagliardo sum limited to N ≤ {bound}"
        )));
    }
    let kernel = PeriodicKernel::new(&g, g.dim() as f64 + alpha * p);
    let v = f.values();
    let m = g.len();
    let mut total = 0.0;
    for x in 0..m {
        for y in 0..m {
            if x != y {
                total += (v[x] - v[y]).norm().powf(p) * kernel.value(kernel.offset_index(x, y));
            }
        }
    }
    Ok((total * g.cell_volume() * g.cell_volume()).powf(1.0 / p))
}

/// Largest mean oscillation `⨍_Q |f − f_Q|` over dyadic cells of `side` samples.
pub fn dyadic_oscillation(f: &ComplexField, side: usize) -> f64 {
    let g = f.grid();
    let n = g.points_per_axis();
    assert!(
        side.is_power_of_two() && side <= n,
        "cell side must be a power of two within the grid"
    );
    let v = f.values();
    let cells = n / side;
    let rows = if g.dim() == 1 { 1 } else { cells };
    let inner = if g.dim() == 1 { 1 } else { side };
    let mut best: f64 = 0.0;
    let mut members = Vec::with_capacity(side * inner);
    for c0 in 0..cells {
        for c1 in 0..rows {
            members.clear();
            for a in 0..side {
                for b in 0..inner {
                    members.push(v[g.flat_index(c0 * side + a, c1 * side + b)]);
                }
            }
            let mean = members.iter().sum::<num_complex::Complex64>() / members.len() as f64;
            let osc = members.iter().map(|z| (z - mean).norm()).sum::<f64>() / members.len() as f64;
            best = best.max(osc);
        }
    }
    best
}

/// Dyadic BMO norm: sup of the mean oscillation over every dyadic cell.
pub fn bmo_norm(f: &ComplexField) -> f64 {
    let n = f.grid().points_per_axis();
    (1..=n.trailing_zeros())
        .map(|j| dyadic_oscillation(f, 1 << j))
        .fold(0.0, f64::max)
}

/// One point of a VMO modulus curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusPoint {
    /// Cell side length.
    pub scale: f64,
    /// Largest mean oscillation over cells of exactly this side.
    pub oscillation: f64,
    /// Largest mean oscillation over the requested scales `≤ scale`.
    pub modulus: f64,
}

/// VMO modulus on dyadic scales `r = 2^j Δ ≤ L/2`, sorted ascending.
pub fn vmo_modulus(f: &ComplexField, scales: &[f64]) -> Result<Vec<ModulusPoint>> {
    let g = f.grid();
    let h = g.spacing();
    let mut sides = Vec::with_capacity(scales.len());
    for &r in scales {
        let s = (r / h).round();
        let valid = s >= 1.0 && (r / h - s).abs() < 1e-9 * s && (s as usize).is_power_of_two();
        if !valid || r > g.half_width() / 2.0 * (1.0 + 1e-12) {
            return Err(LabError::InvalidParameter {
                name: "scale",
                value: r,
                reason: "must be 2^j·Δ ≤ L/2",
            });
        }
        sides.push(s as usize);
    }
    sides.sort_unstable();
    sides.dedup();
    let mut running: f64 = 0.0;
    Ok(sides
        .into_iter()
        .map(|s| {
            let oscillation = dyadic_oscillation(f, s);
            running = running.max(oscillation);
            ModulusPoint {
                scale: s as f64 * h,
                oscillation,
                modulus: running,
            }
        })
        .collect())
}

/// Dyadic scales `2Δ, 4Δ, …` up to `max_scale`.
pub fn dyadic_scales(f: &ComplexField, max_scale: f64) -> Vec<f64> {
    let h = f.grid().spacing();
    let mut out = Vec::new();
    let mut r = 2.0 * h;
    while r <= max_scale * (1.0 + 1e-12) {
        out.push(r);
        r *= 2.0;
    }
    out
}

/// All norms of one field.
#[derive(Debug, Clone, Serialize)]
pub struct NormReport {
    pub alpha: f64,
    pub p: f64,
    pub lp: f64,
    pub homogeneous: f64,
    pub full: f64,
    /// Absent when the grid exceeds the dense double-sum bound.
    pub gagliardo: Option<f64>,
    pub bmo: f64,
    pub vmo_modulus: Vec<ModulusPoint>,
}

pub fn norm_report(f: &ComplexField, alpha: f64, p: f64) -> Result<NormReport> {
    let lp = lp_norm(f, p)?;
    let homogeneous = homogeneous_seminorm(f, alpha, p)?;
    let gagliardo = match gagliardo_seminorm(f, alpha, p) {
        Ok(v) => Some(v),
        Err(LabError::SizeBound(_)) => None,
        Err(e) => return Err(e),
    };
    let scales = dyadic_scales(f, f.grid().half_width() / 2.0);
    Ok(NormReport {
        alpha,
        p,
        lp,
        homogeneous,
        full: lp + homogeneous,
        gagliardo,
        bmo: bmo_norm(f),
        vmo_modulus: vmo_modulus(f, &scales)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn constants_have_zero_seminorms() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let c = ComplexField::constant(g, Complex64::new(1.0, 2.0));
        assert!(homogeneous_seminorm(&c, 0.5, 2.0).unwrap() < 1e-13);
        assert_eq!(gagliardo_seminorm(&c, 0.5, 2.0).unwrap(), 0.0);
        assert!(bmo_norm(&c) < 1e-14);
    }

    #[test]
    fn eigenfunction_seminorm() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let xi = g.frequency(g.flat_index(2, 29));
        let f = ComplexField::from_fn(g, |p| {
            Complex64::from_polar(1.0, 2.0 * PI * (p[0] * xi[0] + p[1] * xi[1]))
        })
        .unwrap();
        let expected = (2.0 * PI * xi[0].hypot(xi[1])).powf(0.4) * f.l2_norm();
        assert!((homogeneous_seminorm(&f, 0.4, 2.0).unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn parameter_ranges() {
        let g = GridSpec::new(1, 16, 2.0).unwrap();
        let f = ComplexField::zeros(g);
        assert!(homogeneous_seminorm(&f, 1.0, 2.0).is_err());
        assert!(homogeneous_seminorm(&f, 0.5, 1.0).is_err());
        let big = ComplexField::zeros(GridSpec::new(2, 128, 2.0).unwrap());
        assert!(matches!(
            gagliardo_seminorm(&big, 0.5, 2.0),
            Err(LabError::SizeBound(_))
        ));
        assert!(vmo_modulus(&f, &[3.0 * g.spacing()]).is_err());
        assert!(vmo_modulus(&f, &[2.0]).is_err());
    }

    #[test]
    fn bmo_scaling_and_shift() {
        let g = GridSpec::new(2, 64, 2.0).unwrap();
        let f = ComplexField::from_real_fn(g, |p| (p[0] * 3.0).sin() * p[1]).unwrap();
        let b = bmo_norm(&f);
        let shifted = f.map(|v| v + Complex64::new(4.0, -1.0));
        assert!((bmo_norm(&shifted) - b).abs() < 1e-12);
        assert!((bmo_norm(&(&f * Complex64::new(0.0, -3.0))) - 3.0 * b).abs() < 1e-12);
    }

    #[test]
    fn modulus_is_running_maximum() {
        let g = GridSpec::new(1, 256, 2.0).unwrap();
        let f = ComplexField::from_real_fn(g, |p| (5.0 * p[0]).cos()).unwrap();
        let curve = vmo_modulus(&f, &dyadic_scales(&f, 1.0)).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].modulus >= w[0].modulus && w[1].scale > w[0].scale);
        }
    }
}
