//! The commutator `C_b = [b, D^β]`: spectral application, explicit kernel
//! matrix, and numerical Fréchet–Kolmogorov diagnostics.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::grid::{lp_norm, ComplexField, GridSpec};
use crate::lattice::PeriodicKernel;
use crate::linalg;
use crate::multiplier::{beurling, frac_laplacian, gradient, hilbert_transform};
use crate::pv::{pv_constant, sphere_area};

/// Largest dense grids: `N ≤ 4096` on a line, `N ≤ 48` in the plane.
pub const MAX_DENSE_LINE: usize = 4096;
pub const MAX_DENSE_PLANE: usize = 48;

/// Samples with modulus below this count as outside the support.
const SUPPORT_THRESHOLD: f64 = 1e-12;

/// `b·D^β f − D^β(b·f)`.
pub fn commutator_apply(b: &ComplexField, f: &ComplexField, beta: f64) -> Result<ComplexField> {
    if b.grid() != f.grid() {
        return Err(LabError::GridMismatch);
    }
    let left = b * &frac_laplacian(f, beta)?;
    let right = frac_laplacian(&(b * f), beta)?;
    Ok(&left - &right)
}

/// Dense quadrature of the commutator kernel
/// `𝒦(x,y) = C_{n,β}(b(y) − b(x)) Σ_m |x − y + 2Lm|^{−(n+β)}`, weighted by `Δ^n`.
///
/// The periodic images are summed so that `K·f` reproduces the torus operator;
/// the nearest image alone misses several percent of the kernel mass.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    grid: GridSpec,
    beta: f64,
    symbol_b: ComplexField,
    entries: Vec<Complex64>,
}

fn check_dense(grid: &GridSpec) -> Result<()> {
    let n = grid.points_per_axis();
    let ok = match grid.dim() {
        1 => n <= MAX_DENSE_LINE,
        _ => n <= MAX_DENSE_PLANE,
    };
    if ok {
        Ok(())
    } else {
        Err(LabError::SizeBound(format!(
            "{n} points per axis in dimension {}",
            grid.dim()
        )))
    }
}

/// Assembles the kernel matrix of `[b, D^β]` on `grid`.
pub fn build_kernel_matrix(b: &ComplexField, beta: f64, grid: &GridSpec) -> Result<KernelMatrix> {
    if b.grid() != grid {
        return Err(LabError::GridMismatch);
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(LabError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must lie in (0, 1)",
        });
    }
    check_dense(grid)?;
    let m = grid.len();
    let kernel = PeriodicKernel::new(grid, grid.dim() as f64 + beta);
    let scale = pv_constant(grid.dim(), beta) * grid.cell_volume();
    let bv = b.values();
    let mut entries = vec![Complex64::new(0.0, 0.0); m * m];
    for x in 0..m {
        let row = &mut entries[x * m..(x + 1) * m];
        for (y, e) in row.iter_mut().enumerate() {
            if x != y {
                *e = (bv[y] - bv[x]) * (scale * kernel.value(kernel.offset_index(x, y)));
            }
        }
    }
    Ok(KernelMatrix {
        grid: *grid,
        beta,
        symbol_b: b.clone(),
        entries,
    })
}

impl KernelMatrix {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn symbol_b(&self) -> &ComplexField {
        &self.symbol_b
    }

    /// Number of rows (`N^n`).
    pub fn size(&self) -> usize {
        self.grid.len()
    }

    pub fn entry(&self, x: usize, y: usize) -> Complex64 {
        self.entries[x * self.size() + y]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `(K f)(x) = Σ_y K(x,y) f(y)`.
    pub fn apply(&self, f: &ComplexField) -> Result<ComplexField> {
        if f.grid() != &self.grid {
            return Err(LabError::GridMismatch);
        }
        let m = self.size();
        let fv = f.values();
        let values = (0..m)
            .map(|x| {
                self.entries[x * m..(x + 1) * m]
                    .iter()
                    .zip(fv)
                    .map(|(k, v)| k * v)
                    .sum()
            })
            .collect();
        Ok(ComplexField::from_raw(self.grid, values))
    }
}

/// Row-mass bound of the kernel.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AEstimate {
    /// `max_x Σ_y |K(x,y)|`.
    pub a_estimate: f64,
    /// `C_{n,β} ω_n (‖∇b‖_∞/(1−β) + 2‖b‖_∞/β)`.
    pub a_bound: f64,
    pub gradient_sup: f64,
    pub sup: f64,
}

/// Largest row `L¹` norm against the near/far split bound: `|b(y) − b(x)| ≤
/// ‖∇b‖_∞|x − y|` on the unit ball and `≤ 2‖b‖_∞` outside it.
pub fn estimate_a(k: &KernelMatrix) -> AEstimate {
    let m = k.size();
    let a_estimate = (0..m)
        .map(|x| {
            k.entries[x * m..(x + 1) * m]
                .iter()
                .map(|v| v.norm())
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    let grad = gradient(&k.symbol_b);
    let gradient_sup = (0..m)
        .map(|i| {
            grad.iter()
                .map(|g| g.values()[i].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let sup = k.symbol_b.sup_norm();
    let dim = k.grid.dim();
    let beta = k.beta;
    let a_bound = pv_constant(dim, beta)
        * sphere_area(dim)
        * (gradient_sup / (1.0 - beta) + 2.0 * sup / beta);
    AEstimate {
        a_estimate,
        a_bound,
        gradient_sup,
        sup,
    }
}

/// Largest distance from the origin of a sample where `|f|` is not negligible.
pub fn support_radius(f: &ComplexField) -> f64 {
    let g = f.grid();
    let m = f.sup_norm();
    if m == 0.0 {
        return 0.0;
    }
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() > SUPPORT_THRESHOLD * m.max(1.0))
        .map(|(i, _)| {
            let p = g.point(i);
            p[0].hypot(p[1])
        })
        .fold(0.0, f64::max)
}

/// Tail profile of `C_b f` outside growing balls.
#[derive(Debug, Clone, Serialize)]
pub struct TailCurve {
    /// `(R, max over probes of ‖C_b f · χ_{|x|>R}‖_p)`.
    pub norm_curve: Vec<(f64, f64)>,
    /// `(|x|, max over probes of |C_b f(x)|)` on `3R₀ < |x| < L/2`.
    pub envelope: Vec<(f64, f64)>,
    /// Least-squares slope of `log envelope` against `log |x|`.
    pub envelope_slope: f64,
    pub support_radius: f64,
}

/// Free-space evaluation `C_{n,β} Σ_y (b(y) − b(x)) f(y) |x − y|^{−(n+β)} Δ^n`
/// over the support of `f`, i.e. the operator on `R^n` for data inside the cell.
fn free_space_commutator(b: &ComplexField, f: &ComplexField, beta: f64) -> Vec<Complex64> {
    let g = f.grid();
    let dim = g.dim();
    let scale = pv_constant(dim, beta) * g.cell_volume();
    let exponent = dim as f64 + beta;
    let fmax = f.sup_norm();
    let sources: Vec<(usize, [f64; 2])> = (0..g.len())
        .filter(|&y| f.values()[y].norm() > SUPPORT_THRESHOLD * fmax)
        .map(|y| (y, g.point(y)))
        .collect();
    let bv = b.values();
    let fv = f.values();
    (0..g.len())
        .map(|x| {
            let px = g.point(x);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(y, py) in &sources {
                if y != x {
                    let r = (px[0] - py[0]).hypot(px[1] - py[1]);
                    acc += (bv[y] - bv[x]) * fv[y] * r.powf(-exponent);
                }
            }
            acc * scale
        })
        .collect()
}

/// Tail decay of `C_b f` over a probe family.
///
/// Probes are normalized in `L^{np/(n−βp)}` internally. The pointwise envelope
/// should decay like `|x|^{−(n+β)}` beyond `3R₀`.
pub fn tail_decay_probe(
    b: &ComplexField,
    beta: f64,
    p: f64,
    probes: &[ComplexField],
    radii: &[f64],
) -> Result<TailCurve> {
    let g = *b.grid();
    let dim = g.dim() as f64;
    let half = g.half_width() / 2.0;
    if let Some(&r) = radii.iter().find(|&&r| r > half || r < 0.0) {
        return Err(LabError::InvalidParameter {
            name: "radius",
            value: r,
            reason: "must lie in [0, L/2]",
        });
    }
    if !(p > 1.0 && p < dim / beta) {
        return Err(LabError::InvalidParameter {
            name: "p",
            value: p,
            reason: "must satisfy 1 < p < n/β",
        });
    }
    let r0 = support_radius(b);
    if r0 > g.half_width() / 8.0 {
        return Err(LabError::InvalidParameter {
            name: "support radius",
            value: r0,
            reason: "b must be supported within L/8",
        });
    }
    let q = dim * p / (dim - beta * p);
    let mut norm_curve: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 0.0)).collect();
    let mut envelope = vec![0.0; g.len()];
    for probe in probes {
        if probe.grid() != &g {
            return Err(LabError::GridMismatch);
        }
        let norm = lp_norm(probe, q)?;
        if norm == 0.0 {
            continue;
        }
        let values = free_space_commutator(b, &probe.map(|v| v / norm), beta);
        for (e, v) in envelope.iter_mut().zip(&values) {
            *e = f64::max(*e, v.norm());
        }
        for (r, best) in norm_curve.iter_mut() {
            let outside: Vec<Complex64> = values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let x = g.point(i);
                    if x[0].hypot(x[1]) > *r {
                        *v
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            *best = best.max(lp_norm(&ComplexField::from_raw(g, outside), p)?);
        }
    }
    let mut radial: Vec<(f64, f64)> = (0..g.len())
        .filter_map(|i| {
            let x = g.point(i);
            let r = x[0].hypot(x[1]);
            (r > 3.0 * r0 && r < half && envelope[i] > 0.0).then_some((r, envelope[i]))
        })
        .collect();
    radial.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Pointwise envelope as a function of |x| alone: maximum over each radius.
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (r, v) in radial {
        match merged.last_mut() {
            Some(last) if (last.0 - r).abs() < 1e-12 => last.1 = last.1.max(v),
            _ => merged.push((r, v)),
        }
    }
    let logs: Vec<(f64, f64)> = merged.iter().map(|(r, v)| (r.ln(), v.ln())).collect();
    let envelope_slope = linalg::line_fit(&logs).map(|(s, _)| s).unwrap_or(0.0);
    Ok(TailCurve {
        norm_curve,
        envelope: merged,
        envelope_slope,
        support_radius: r0,
    })
}

/// `B(h) = max_y Σ_x |K(x+h, y) − K(x, y)|` for each lattice shift (in steps).
pub fn translate_modulus(k: &KernelMatrix, shifts: &[[i64; 2]]) -> Vec<(f64, f64)> {
    let g = k.grid;
    let n = g.points_per_axis() as i64;
    let m = k.size();
    let h = g.spacing();
    shifts
        .iter()
        .map(|s| {
            let len = (s[0] as f64 * h).hypot(if g.dim() == 2 { s[1] as f64 * h } else { 0.0 });
            let shifted: Vec<usize> = (0..m)
                .map(|x| {
                    let [a, b] = g.axis_indices(x);
                    let a = (a as i64 + s[0]).rem_euclid(n) as usize;
                    let b = if g.dim() == 2 {
                        (b as i64 + s[1]).rem_euclid(n) as usize
                    } else {
                        0
                    };
                    g.flat_index(a, b)
                })
                .collect();
            let mut column = vec![0.0; m];
            for x in 0..m {
                let row = &k.entries[x * m..(x + 1) * m];
                let row_shift = &k.entries[shifted[x] * m..(shifted[x] + 1) * m];
                for ((c, a), b) in column.iter_mut().zip(row_shift).zip(row) {
                    *c += (a - b).norm();
                }
            }
            (len, column.into_iter().fold(0.0, f64::max))
        })
        .collect()
}

/// `‖[b, D^β] f‖_p / (‖D^β b‖_{n/β} ‖f‖_{np/(n−βp)})`.
pub fn kpv_ratio(b: &ComplexField, f: &ComplexField, beta: f64, p: f64) -> Result<f64> {
    let dim = b.grid().dim() as f64;
    if !(p > 1.0 && p < dim / beta) {
        return Err(LabError::InvalidParameter {
            name: "p",
            value: p,
            reason: "must satisfy 1 < p < n/β",
        });
    }
    let numerator = lp_norm(&commutator_apply(b, f, beta)?, p)?;
    let db = lp_norm(&frac_laplacian(b, beta)?, dim / beta)?;
    let fq = lp_norm(f, dim * p / (dim - beta * p))?;
    // Relative thresholds: spectral round-off leaves ~1e-16 relative residue.
    let b_scale = b.sup_norm().max(f64::MIN_POSITIVE);
    let f_scale = f.sup_norm();
    let db_zero = db <= 1e-12 * b_scale;
    let fq_zero = f_scale == 0.0;
    if db_zero || fq_zero {
        if numerator <= 1e-11 * b_scale * f_scale.max(1.0) {
            return Ok(0.0);
        }
        return Err(LabError::DegenerateRatio { numerator });
    }
    Ok(numerator / (db * fq))
}

/// Leading singular values of the weighted kernel matrix (the `L²` operator).
pub fn compactness_spectrum(k: &KernelMatrix, count: usize) -> Vec<f64> {
    let m = k.size();
    let mut sv = linalg::singular_values(m, m, k.entries());
    sv.truncate(count);
    sv
}

/// Dense matrix of the non-compact comparison operator `f ↦ b·M f` where `M`
/// is the Hilbert transform on a line and the Beurling transform in the plane.
pub fn comparison_matrix(b: &ComplexField) -> Result<Vec<Complex64>> {
    let g = *b.grid();
    check_dense(&g)?;
    let m = g.len();
    let mut entries = vec![Complex64::new(0.0, 0.0); m * m];
    for y in 0..m {
        let mut unit = vec![Complex64::new(0.0, 0.0); m];
        unit[y] = Complex64::new(1.0, 0.0);
        let e = ComplexField::from_raw(g, unit);
        let col = if g.dim() == 1 {
            hilbert_transform(&e)?
        } else {
            beurling(&e)?
        };
        for (x, v) in col.values().iter().enumerate() {
            entries[x * m + y] = b.values()[x] * v;
        }
    }
    Ok(entries)
}

/// Smallest `k` with `σ_{k+1}/σ₁ < ε` (singular values sorted descending).
pub fn eps_rank(singular_values: &[f64], eps: f64) -> usize {
    let Some(&top) = singular_values.first() else {
        return 0;
    };
    if top == 0.0 {
        return 0;
    }
    singular_values
        .iter()
        .position(|&s| s / top < eps)
        .unwrap_or(singular_values.len())
}

/// Summary of the compactness diagnostics for one commutator.
#[derive(Debug, Clone, Serialize)]
pub struct CompactnessReport {
    pub a_estimate: f64,
    pub a_bound: f64,
    pub tail_curve: Vec<(f64, f64)>,
    pub tail_envelope_slope: f64,
    pub translate_curve: Vec<(f64, f64)>,
    pub sv_decay: Vec<f64>,
    pub kpv_ratios: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bump(g: GridSpec, radius: f64) -> ComplexField {
        ComplexField::from_real_fn(g, |p| {
            let r2 = (p[0] * p[0] + p[1] * p[1]) / (radius * radius);
            if r2 < 1.0 {
                (1.0 - 1.0 / (1.0 - r2)).exp()
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn trivial_commutators() {
        let g = GridSpec::new(2, 32, 2.0).unwrap();
        let f = bump(g, 0.5);
        let b = ComplexField::constant(g, Complex64::new(2.0, 0.0));
        assert!(commutator_apply(&b, &f, 0.4).unwrap().sup_norm() < 1e-12);
        // f constant: C_b(c) = −c·D^β b.
        let c = Complex64::new(0.0, 3.0);
        let lhs = commutator_apply(&f, &ComplexField::constant(g, c), 0.4).unwrap();
        let rhs = frac_laplacian(&f, 0.4).unwrap().scale(-c);
        assert!((&lhs - &rhs).sup_norm() < 1e-12);
    }

    #[test]
    fn two_point_entry_matches_hand_formula() {
        let g = GridSpec::new(1, 8, 2.0).unwrap();
        let b = ComplexField::from_real_fn(g, |p| p[0] * p[0]).unwrap();
        let beta = 0.5;
        let k = build_kernel_matrix(&b, beta, &g).unwrap();
        let (x, y) = (1usize, 4usize);
        let d = g.spacing() * 3.0;
        // Σ over images plus the continuum remainder beyond |m| > 10⁶.
        let mut images: f64 = (-1_000_000i64..=1_000_000)
            .map(|m| (d + 4.0 * m as f64).abs().powf(-1.5))
            .sum();
        images += 2.0 * (4.0 * 1_000_000.5f64).powf(-0.5) / (4.0 * 0.5);
        let expected =
            pv_constant(1, beta) * (b.values()[y].re - b.values()[x].re) * images * g.spacing();
        assert!((k.entry(x, y).re - expected).abs() < 1e-6 * expected.abs());
        assert_eq!(k.entry(3, 3), Complex64::new(0.0, 0.0));
        // Antisymmetric numerator with a symmetric kernel.
        assert!((k.entry(x, y) + k.entry(y, x)).norm() < 1e-14);
    }

    #[test]
    fn zero_and_constant_symbols() {
        let g = GridSpec::new(1, 64, 2.0).unwrap();
        let zero = build_kernel_matrix(&ComplexField::zeros(g), 0.3, &g).unwrap();
        assert!(zero.entries().iter().all(|v| v.norm() == 0.0));
        assert_eq!(estimate_a(&zero).a_estimate, 0.0);
        assert!(compactness_spectrum(&zero, 5).iter().all(|&s| s == 0.0));
        let one = build_kernel_matrix(
            &ComplexField::constant(g, Complex64::new(1.0, 0.0)),
            0.3,
            &g,
        )
        .unwrap();
        assert_eq!(estimate_a(&one).a_estimate, 0.0);
        assert_eq!(translate_modulus(&one, &[[0, 0], [3, 0]])[1].1, 0.0);
    }

    #[test]
    fn kernel_matches_spectral_commutator() {
        let mut errs = Vec::new();
        for n in [512usize, 1024] {
            let g = GridSpec::new(1, n, 4.0).unwrap();
            let b = bump(g, 1.0);
            let f = ComplexField::from_real_fn(g, |p| (-(p[0] - 0.3).powi(2) * 4.0).exp()).unwrap();
            let k = build_kernel_matrix(&b, 0.5, &g).unwrap();
            let spectral = commutator_apply(&b, &f, 0.5).unwrap();
            let dense = k.apply(&f).unwrap();
            errs.push((&dense - &spectral).l2_norm() / spectral.l2_norm());
        }
        assert!(errs[1] < 1e-2, "{errs:?}");
        assert!(errs[1] < errs[0], "{errs:?}");
    }

    #[test]
    fn size_bounds() {
        let g = GridSpec::new(2, 64, 2.0).unwrap();
        assert!(matches!(
            build_kernel_matrix(&ComplexField::zeros(g), 0.5, &g),
            Err(LabError::SizeBound(_))
        ));
    }

    #[test]
    fn a_estimate_below_bound() {
        let g = GridSpec::new(1, 1024, 4.0).unwrap();
        let b = bump(g, 0.5);
        let est = estimate_a(&build_kernel_matrix(&b, 0.3, &g).unwrap());
        assert!(est.a_estimate > 0.0 && est.a_estimate <= est.a_bound);
    }

    #[test]
    fn eps_rank_definition() {
        assert_eq!(eps_rank(&[1.0, 0.5, 0.05, 0.001], 0.1), 2);
        assert_eq!(eps_rank(&[1.0, 0.5], 0.1), 2);
        assert_eq!(eps_rank(&[0.0, 0.0], 0.1), 0);
    }

    #[test]
    fn kpv_degenerate_and_invariant() {
        let g = GridSpec::new(2, 64, 4.0).unwrap();
        let f = bump(g, 0.8);
        let b = bump(g, 0.6);
        let konst = ComplexField::constant(g, Complex64::new(1.0, 0.0));
        assert_eq!(kpv_ratio(&konst, &f, 0.4, 1.5).unwrap(), 0.0);
        let r = kpv_ratio(&b, &f, 0.4, 1.5).unwrap();
        let r_scaled = kpv_ratio(&b, &(&f * 3.0), 0.4, 1.5).unwrap();
        let r_shift = kpv_ratio(&(&b + &konst), &f, 0.4, 1.5).unwrap();
        assert!((r - r_scaled).abs() < 1e-12 * r);
        assert!((r - r_shift).abs() < 1e-10 * r);
        assert!(kpv_ratio(&b, &f, 0.4, 5.0).is_err());
    }
}
