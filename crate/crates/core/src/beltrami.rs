//! Generalized Beltrami equations `∂̄f − μ∂f − ν conj(∂f) = g`.
//!
//! Writing `h = ∂̄f` and `∂f = B h` turns the equation into the integral
//! equation `(Id − μB − νB̄) h = g`, which is a contraction with factor
//! `k = ‖|μ| + |ν|‖_∞` because the discrete Beurling symbol has unit modulus.

use num_complex::Complex64;
use serde::Serialize;

use crate::commutator::{commutator_apply, support_radius};
use crate::error::{LabError, Result};
use crate::grid::{to_physical, to_spectral, ComplexField, SpectralField};
use crate::linalg;
use crate::multiplier::{
    beurling, cauchy_transform, dz, frac_laplacian, riesz_potential, MultiplierSymbol, SymbolTable,
};
use crate::sobolev::sobolev_norm;

/// Largest grid for the dense `T_μ` probe.
pub const MAX_T_MU_DENSE: usize = 32;

/// Slack on the support-radius check, in units of the grid spacing.
const SUPPORT_SLACK: f64 = 1e-9;

/// A coefficient `μ` with `‖μ‖_∞ < 1` supported in the disk of radius `L/4`.
#[derive(Debug, Clone)]
pub struct BeltramiCoefficient {
    field: ComplexField,
    sup_bound: f64,
    support_radius: f64,
}

impl BeltramiCoefficient {
    pub fn new(field: ComplexField) -> Result<Self> {
        let g = field.grid();
        if g.dim() != 2 {
            return Err(LabError::DimensionMismatch {
                expected: 2,
                found: g.dim(),
            });
        }
        let sup_bound = field.sup_norm();
        if sup_bound >= 1.0 {
            return Err(LabError::NotBeltrami(format!(
                "sup norm {sup_bound} is not below 1"
            )));
        }
        let support_radius = support_radius(&field);
        if support_radius > g.half_width() / 4.0 + SUPPORT_SLACK * g.spacing() {
            return Err(LabError::NotBeltrami(format!(
                "support radius {support_radius} exceeds L/4 = {}",
                g.half_width() / 4.0
            )));
        }
        Ok(Self {
            field,
            sup_bound,
            support_radius,
        })
    }

    pub fn zero(grid: crate::grid::GridSpec) -> Result<Self> {
        Self::new(ComplexField::zeros(grid))
    }

    pub fn field(&self) -> &ComplexField {
        &self.field
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }
}

/// `‖|μ| + |ν|‖_∞` after checking that the pair is admissible.
pub fn pair_bound(mu: &BeltramiCoefficient, nu: &BeltramiCoefficient) -> Result<f64> {
    if mu.field.grid() != nu.field.grid() {
        return Err(LabError::GridMismatch);
    }
    let k = mu
        .field
        .values()
        .iter()
        .zip(nu.field.values())
        .map(|(a, b)| a.norm() + b.norm())
        .fold(0.0, f64::max);
    if k >= 1.0 {
        return Err(LabError::NotBeltrami(format!(
            "‖|μ|+|ν|‖_∞ = {k} is not below 1"
        )));
    }
    Ok(k)
}

/// `h − μ·Bh − ν·conj(Bh)`.
pub fn apply_beltrami_operator(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    h: &ComplexField,
) -> Result<ComplexField> {
    if h.grid() != mu.field.grid() || h.grid() != nu.field.grid() {
        return Err(LabError::GridMismatch);
    }
    let bh = beurling(h)?;
    Ok(combine(mu, nu, h, &bh, -1.0))
}

/// `h + sign·(μ·bh + ν·conj(bh))`.
fn combine(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    h: &ComplexField,
    bh: &ComplexField,
    sign: f64,
) -> ComplexField {
    let values = h
        .values()
        .iter()
        .zip(bh.values())
        .zip(mu.field.values().iter().zip(nu.field.values()))
        .map(|((&hv, &b), (&m, &n))| hv + sign * (m * b + n * b.conj()))
        .collect();
    ComplexField::from_raw(*h.grid(), values)
}

/// Iteration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    /// Neumann series up to `k ≤ krylov_threshold`, GMRES beyond.
    Auto,
    Neumann,
    Krylov,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub method: SolveMethod,
    /// Contraction factor above which `Auto` switches to GMRES.
    pub krylov_threshold: f64,
    pub restart: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200,
            method: SolveMethod::Auto,
            krylov_threshold: 0.7,
            restart: 40,
        }
    }
}

/// Convergence record of one solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub method: SolveMethod,
    pub iterations: usize,
    /// Relative residual `‖A h_m − g‖/‖g‖` of each iterate.
    pub residual_curve: Vec<f64>,
    /// Geometric-mean residual reduction per iteration.
    pub contraction_estimate: f64,
    pub converged: bool,
    pub contraction_bound: f64,
}

fn geometric_rate(curve: &[f64]) -> f64 {
    match (curve.first(), curve.last()) {
        (Some(&first), Some(&last)) if curve.len() > 1 && first > 0.0 => {
            (last / first).powf(1.0 / (curve.len() - 1) as f64)
        }
        _ => 0.0,
    }
}

/// Solves `(Id − μB − νB̄) h = g`.
pub fn solve_integral_equation(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    g: &ComplexField,
    opts: &SolveOptions,
) -> Result<(ComplexField, SolveReport)> {
    if !(opts.tol > 0.0) {
        return Err(LabError::InvalidParameter {
            name: "tol",
            value: opts.tol,
            reason: "must be positive",
        });
    }
    let k = pair_bound(mu, nu)?;
    if g.grid() != mu.field.grid() {
        return Err(LabError::GridMismatch);
    }
    let method = match opts.method {
        SolveMethod::Auto if k > opts.krylov_threshold => SolveMethod::Krylov,
        SolveMethod::Auto => SolveMethod::Neumann,
        m => m,
    };
    let gnorm = g.l2_norm();
    if gnorm == 0.0 {
        let report = SolveReport {
            method,
            iterations: 0,
            residual_curve: vec![0.0],
            contraction_estimate: 0.0,
            converged: true,
            contraction_bound: k,
        };
        return Ok((ComplexField::zeros(*g.grid()), report));
    }
    let table = MultiplierSymbol::beurling().tabulate(g.grid());
    let (h, curve) = match method {
        SolveMethod::Krylov => gmres(mu, nu, g, &table, opts),
        _ => neumann(mu, nu, g, &table, opts),
    };
    let last = *curve.last().expect("at least one residual");
    let report = SolveReport {
        method,
        iterations: curve.len() - 1,
        contraction_estimate: geometric_rate(&curve),
        converged: last <= opts.tol,
        residual_curve: curve,
        contraction_bound: k,
    };
    Ok((h, report))
}

/// Fixed point `h ← g + μBh + νconj(Bh)` from `h₀ = g`. The residual of `h_m`
/// is `‖h_{m+1} − h_m‖`, so the iterate returned is the last one measured.
fn neumann(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    g: &ComplexField,
    table: &SymbolTable,
    opts: &SolveOptions,
) -> (ComplexField, Vec<f64>) {
    let gnorm = g.l2_norm();
    let mut h = g.clone();
    let mut curve = Vec::new();
    for _ in 0..=opts.max_iter {
        let bh = table.apply(&h);
        let next = combine(mu, nu, g, &bh, 1.0);
        let residual = (&next - &h).l2_norm() / gnorm;
        curve.push(residual);
        if residual <= opts.tol || curve.len() > opts.max_iter {
            break;
        }
        h = next;
    }
    (h, curve)
}

fn realify(f: &ComplexField) -> Vec<f64> {
    let mut out: Vec<f64> = f.values().iter().map(|v| v.re).collect();
    out.extend(f.values().iter().map(|v| v.im));
    out
}

fn complexify(grid: crate::grid::GridSpec, x: &[f64]) -> ComplexField {
    let m = x.len() / 2;
    ComplexField::from_raw(
        grid,
        (0..m).map(|i| Complex64::new(x[i], x[m + i])).collect(),
    )
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Restarted GMRES on the real form of the operator, which is only
/// ℝ-linear when `ν ≠ 0`.
fn gmres(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    g: &ComplexField,
    table: &SymbolTable,
    opts: &SolveOptions,
) -> (ComplexField, Vec<f64>) {
    let grid = *g.grid();
    let op = |x: &[f64]| -> Vec<f64> {
        let h = complexify(grid, x);
        realify(&combine(mu, nu, &h, &table.apply(&h), -1.0))
    };
    let b = realify(g);
    let bnorm = norm(&b);
    let dim = b.len();
    let mut x = vec![0.0; dim];
    let mut curve = Vec::new();
    let mut total = 0;
    let restart = opts.restart.max(1);
    loop {
        let ax = op(&x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
        let beta = norm(&r);
        let rel = beta / bnorm;
        match curve.last() {
            // Keep the curve monotone: the restart residual equals the last
            // estimate up to round-off.
            Some(&prev) if rel >= prev => {}
            _ => curve.push(rel),
        }
        if rel <= opts.tol || total >= opts.max_iter {
            if let Some(last) = curve.last_mut() {
                *last = rel.min(*last);
            }
            break;
        }
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut hess = vec![vec![0.0; restart]; restart + 1];
        let (mut cs, mut sn) = (vec![0.0; restart], vec![0.0; restart]);
        let mut s = vec![0.0; restart + 1];
        s[0] = beta;
        let mut cols = 0;
        for j in 0..restart {
            let mut w = op(&basis[j]);
            total += 1;
            for (i, v) in basis.iter().enumerate() {
                let hij = dot(&w, v);
                hess[i][j] = hij;
                w.iter_mut().zip(v).for_each(|(a, b)| *a -= hij * b);
            }
            let wn = norm(&w);
            hess[j + 1][j] = wn;
            for i in 0..j {
                let t = cs[i] * hess[i][j] + sn[i] * hess[i + 1][j];
                hess[i + 1][j] = -sn[i] * hess[i][j] + cs[i] * hess[i + 1][j];
                hess[i][j] = t;
            }
            let d = hess[j][j].hypot(hess[j + 1][j]);
            cs[j] = hess[j][j] / d;
            sn[j] = hess[j + 1][j] / d;
            hess[j][j] = d;
            hess[j + 1][j] = 0.0;
            s[j + 1] = -sn[j] * s[j];
            s[j] *= cs[j];
            cols = j + 1;
            let est = s[j + 1].abs() / bnorm;
            curve.push(est);
            if est <= opts.tol || total >= opts.max_iter || wn <= 1e-300 {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        let mut y = vec![0.0; cols];
        for i in (0..cols).rev() {
            let acc: f64 = ((i + 1)..cols).map(|l| hess[i][l] * y[l]).sum();
            y[i] = (s[i] - acc) / hess[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(a, b)| *a += yi * b);
        }
    }
    (complexify(grid, &x), curve)
}

/// Derivatives and displacement of the principal solution `φ = z + C h`.
#[derive(Debug, Clone)]
pub struct PrincipalSolution {
    pub phi_displacement: ComplexField,
    pub dphi: ComplexField,
    pub dbarphi: ComplexField,
    pub report: SolveReport,
}

/// Solves `(Id − μB) h = μ` and assembles `φ = z + C h`, `∂φ = 1 + Bh`, `∂̄φ = h`.
pub fn principal_solution(
    mu: &BeltramiCoefficient,
    opts: &SolveOptions,
) -> Result<PrincipalSolution> {
    let grid = *mu.field.grid();
    let nu = BeltramiCoefficient::zero(grid)?;
    let (h, report) = solve_integral_equation(mu, &nu, &mu.field, opts)?;
    let dphi = beurling(&h)?.map(|v| v + 1.0);
    Ok(PrincipalSolution {
        phi_displacement: cauchy_transform(&h)?,
        dphi,
        dbarphi: h,
        report,
    })
}

/// `g = log ∂φ` obtained from `∂̄g − μ∂g = ∂μ` without a pointwise logarithm.
#[derive(Debug, Clone)]
pub struct LogDerivative {
    pub g: ComplexField,
    /// `‖exp(g) − ∂φ‖₂ / ‖∂φ‖₂` against the principal solution.
    pub consistency_error: f64,
    pub report: SolveReport,
}

/// Largest tolerated disagreement between `exp(g)` and `∂φ`.
pub const CONSISTENCY_LIMIT: f64 = 1e-2;

/// Solves `(Id − μB) F = ∂μ`, sets `g = C F` and fixes the additive constant
/// by `mean(e^g) = 1`, the torus form of `∂φ → 1` at infinity.
pub fn log_derivative(mu: &BeltramiCoefficient, opts: &SolveOptions) -> Result<LogDerivative> {
    let grid = *mu.field.grid();
    let nu = BeltramiCoefficient::zero(grid)?;
    let rhs = dz(&mu.field)?;
    let (f, report) = solve_integral_equation(mu, &nu, &rhs, opts)?;
    let raw = cauchy_transform(&f)?;
    let shift = raw.map(|v| v.exp()).mean().ln();
    let g = raw.map(|v| v - shift);
    let principal = principal_solution(mu, opts)?;
    let consistency_error =
        (&g.map(|v| v.exp()) - &principal.dphi).l2_norm() / principal.dphi.l2_norm();
    if !(consistency_error <= CONSISTENCY_LIMIT) {
        return Err(LabError::Consistency(consistency_error));
    }
    Ok(LogDerivative {
        g,
        consistency_error,
        report,
    })
}

fn check_alpha_half(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha < 1.0 {
        Ok(())
    } else {
        Err(LabError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (1/2, 1)",
        })
    }
}

/// `T_μ F = P(F − μBF) + I_{1−α}[D^{1−α}, μ] BF`, with `P` the mean removal.
pub fn apply_t_mu(mu: &BeltramiCoefficient, alpha: f64, f: &ComplexField) -> Result<ComplexField> {
    check_alpha_half(alpha)?;
    let bf = beurling(f)?;
    let local = (f - &(&mu.field * &bf)).remove_mean();
    // [D, μ] = −[μ, D].
    let comm = -&commutator_apply(&mu.field, &bf, 1.0 - alpha)?;
    Ok(&local + &riesz_potential(&comm, 1.0 - alpha)?)
}

/// `I_{1−α}(Id − μB) D^{1−α} F` by direct composition.
pub fn t_mu_composition(
    mu: &BeltramiCoefficient,
    alpha: f64,
    f: &ComplexField,
) -> Result<ComplexField> {
    check_alpha_half(alpha)?;
    let d = frac_laplacian(f, 1.0 - alpha)?;
    let inner = &d - &(&mu.field * &beurling(&d)?);
    riesz_potential(&inner, 1.0 - alpha)
}

/// Singular values (descending) of `T_μ` on the mean-zero subspace, from the
/// dense matrix in the unitary Fourier basis.
pub fn t_mu_singular_values(mu: &BeltramiCoefficient, alpha: f64) -> Result<Vec<f64>> {
    check_alpha_half(alpha)?;
    let grid = *mu.field.grid();
    if grid.points_per_axis() > MAX_T_MU_DENSE {
        return Err(LabError::SizeBound(format!(
            "dense T_μ limited to N ≤ {MAX_T_MU_DENSE}"
        )));
    }
    let m = grid.len();
    let dim = m - 1;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
        coeffs[col + 1] = Complex64::new(1.0, 0.0);
        let basis = to_physical(&SpectralField::new(grid, coeffs)?);
        let image = to_spectral(&apply_t_mu(mu, alpha, &basis)?);
        for row in 0..dim {
            entries[row * dim + col] = image.coefficients()[row + 1];
        }
    }
    Ok(linalg::singular_values(dim, dim, &entries))
}

/// Outcome of the a priori estimate check.
#[derive(Debug, Clone, Serialize)]
pub struct AprioriReport {
    pub alpha: f64,
    pub p: f64,
    /// `‖g‖_{W^{α,p}}`.
    pub input_norm: f64,
    /// `‖∂f‖_{W^{α,p}} + ‖∂̄f‖_{W^{α,p}}`.
    pub output_norm: f64,
    pub ratio: f64,
    pub solve: SolveReport,
}

/// Solves for `h = ∂̄f`, sets `∂f = Bh` and compares Sobolev norms.
pub fn apriori_check(
    mu: &BeltramiCoefficient,
    nu: &BeltramiCoefficient,
    alpha: f64,
    p: f64,
    g: &ComplexField,
    opts: &SolveOptions,
) -> Result<AprioriReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in (0, 1)",
        });
    }
    if !(p > 1.0 && p < 2.0 / alpha) {
        return Err(LabError::InvalidParameter {
            name: "p",
            value: p,
            reason: "must satisfy 1 < p < 2/α",
        });
    }
    let (h, solve) = solve_integral_equation(mu, nu, g, opts)?;
    let input_norm = sobolev_norm(g, alpha, p)?;
    if input_norm == 0.0 {
        return Ok(AprioriReport {
            alpha,
            p,
            input_norm,
            output_norm: 0.0,
            ratio: 0.0,
            solve,
        });
    }
    let output_norm = sobolev_norm(&beurling(&h)?, alpha, p)? + sobolev_norm(&h, alpha, p)?;
    Ok(AprioriReport {
        alpha,
        p,
        input_norm,
        output_norm,
        ratio: output_norm / input_norm,
        solve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn smooth(g: GridSpec, k: f64) -> BeltramiCoefficient {
        BeltramiCoefficient::new(
            ComplexField::from_fn(g, |p| {
                let r2 = p[0] * p[0] + p[1] * p[1];
                if r2 < 1.0 {
                    Complex64::from_polar(k * (1.0 - 1.0 / (1.0 - r2)).exp(), 2.0 * p[0] + p[1])
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .unwrap(),
        )
        .unwrap()
    }

    fn rhs(g: GridSpec) -> ComplexField {
        ComplexField::from_fn(g, |p| {
            let r2 = (p[0] - 0.2).powi(2) + p[1] * p[1];
            Complex64::new((-4.0 * r2).exp(), 0.5 * p[1] * (-3.0 * r2).exp())
        })
        .unwrap()
    }

    #[test]
    fn admissibility() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let big = ComplexField::from_real_fn(g, |p| if p[0].hypot(p[1]) < 0.5 { 1.0 } else { 0.0 })
            .unwrap();
        assert!(BeltramiCoefficient::new(big).is_err());
        let wide =
            ComplexField::from_real_fn(g, |p| if p[0].hypot(p[1]) < 1.8 { 0.5 } else { 0.0 })
                .unwrap();
        assert!(BeltramiCoefficient::new(wide).is_err());
        let mu = smooth(g, 0.6);
        assert!(pair_bound(&mu, &mu).is_err());
        assert!(
            BeltramiCoefficient::new(ComplexField::zeros(GridSpec::new(1, 32, 4.0).unwrap()))
                .is_err()
        );
    }

    #[test]
    fn zero_coefficients_give_identity() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let zero = BeltramiCoefficient::zero(g).unwrap();
        let f = rhs(g);
        assert_eq!(apply_beltrami_operator(&zero, &zero, &f).unwrap(), f);
        let (h, rep) = solve_integral_equation(&zero, &zero, &f, &SolveOptions::default()).unwrap();
        assert_eq!(h, f);
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged);
    }

    #[test]
    fn neumann_and_krylov_agree() {
        let g = GridSpec::new(2, 64, 4.0).unwrap();
        let mu = smooth(g, 0.5);
        let nu =
            BeltramiCoefficient::new(mu.field().map(|v| v * Complex64::new(0.0, 0.6))).unwrap();
        let f = rhs(g);
        let n_opts = SolveOptions {
            method: SolveMethod::Neumann,
            ..Default::default()
        };
        let k_opts = SolveOptions {
            method: SolveMethod::Krylov,
            ..Default::default()
        };
        let (hn, rn) = solve_integral_equation(&mu, &nu, &f, &n_opts).unwrap();
        let (hk, rk) = solve_integral_equation(&mu, &nu, &f, &k_opts).unwrap();
        assert!(rn.converged && rk.converged);
        assert!(rk.iterations < rn.iterations);
        assert!((&hn - &hk).l2_norm() < 1e-8 * hn.l2_norm());
        for curve in [&rn.residual_curve, &rk.residual_curve] {
            assert!(curve.windows(2).all(|w| w[1] <= w[0]));
        }
        assert!(rn.contraction_estimate <= rn.contraction_bound + 0.05);
        let res = (&apply_beltrami_operator(&mu, &nu, &hk).unwrap() - &f).l2_norm() / f.l2_norm();
        assert!(res < 1e-9);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let mu = smooth(g, 0.9);
        let zero = BeltramiCoefficient::zero(g).unwrap();
        let opts = SolveOptions {
            max_iter: 3,
            method: SolveMethod::Neumann,
            ..Default::default()
        };
        let (_, rep) = solve_integral_equation(&mu, &zero, &rhs(g), &opts).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 3);
    }

    #[test]
    fn principal_solution_of_zero_is_identity() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let sol = principal_solution(
            &BeltramiCoefficient::zero(g).unwrap(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(sol.phi_displacement.sup_norm() == 0.0 && sol.dbarphi.sup_norm() == 0.0);
        assert!(
            (&sol.dphi - &ComplexField::constant(g, Complex64::new(1.0, 0.0))).sup_norm() == 0.0
        );
        let ld = log_derivative(
            &BeltramiCoefficient::zero(g).unwrap(),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(ld.g.sup_norm() == 0.0);
    }

    #[test]
    fn beltrami_relation_holds() {
        let g = GridSpec::new(2, 64, 4.0).unwrap();
        let mu = smooth(g, 0.5);
        let opts = SolveOptions::default();
        let sol = principal_solution(&mu, &opts).unwrap();
        let rel = (&sol.dbarphi - &(mu.field() * &sol.dphi)).l2_norm() / sol.dphi.l2_norm();
        assert!(rel <= 10.0 * opts.tol);
    }

    #[test]
    fn t_mu_routes_agree() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let mu = smooth(g, 0.5);
        let f = rhs(g).remove_mean();
        let a = apply_t_mu(&mu, 0.75, &f).unwrap();
        let b = t_mu_composition(&mu, 0.75, &f).unwrap();
        assert!((&a - &b).l2_norm() < 1e-12 * f.l2_norm());
        let zero = BeltramiCoefficient::zero(g).unwrap();
        assert!(
            (&apply_t_mu(&zero, 0.75, &rhs(g)).unwrap() - &rhs(g).remove_mean()).sup_norm() < 1e-13
        );
        assert!(apply_t_mu(&mu, 0.4, &f).is_err());
    }

    #[test]
    fn apriori_zero_data() {
        let g = GridSpec::new(2, 32, 4.0).unwrap();
        let mu = smooth(g, 0.5);
        let zero = BeltramiCoefficient::zero(g).unwrap();
        let rep = apriori_check(
            &mu,
            &zero,
            0.6,
            2.0,
            &ComplexField::zeros(g),
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.ratio, 0.0);
        assert!(apriori_check(&mu, &zero, 0.6, 3.5, &rhs(g), &SolveOptions::default()).is_err());
    }
}
