//! Small dense linear-algebra helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Singular values of a row-major matrix, sorted descending. Purely real
/// matrices take the cheaper real SVD.
pub fn singular_values(rows: usize, cols: usize, entries: &[Complex64]) -> Vec<f64> {
    assert_eq!(entries.len(), rows * cols);
    let mut sv: Vec<f64> = if entries.iter().all(|v| v.im == 0.0) {
        let real: Vec<f64> = entries.iter().map(|v| v.re).collect();
        DMatrix::from_row_slice(rows, cols, &real)
            .singular_values()
            .iter()
            .copied()
            .collect()
    } else {
        DMatrix::from_row_slice(rows, cols, entries)
            .singular_values()
            .iter()
            .copied()
            .collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Ordinary least-squares line `y = slope·x + intercept`; `None` for fewer than
/// two distinct abscissae.
pub fn line_fit(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Nonnegative least squares for two basis columns: minimizes
/// `‖c₁u + c₂v − y‖₂` over `c ≥ 0`. Returns the coefficients and the relative
/// residual `‖c₁u + c₂v − y‖/‖y‖`.
pub fn nnls2(u: &[f64], v: &[f64], y: &[f64]) -> ([f64; 2], f64) {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, z)| x * z).sum::<f64>();
    let (uu, uv, vv, uy, vy) = (dot(u, u), dot(u, v), dot(v, v), dot(u, y), dot(v, y));
    let residual = |c: [f64; 2]| {
        let r: f64 = (0..y.len())
            .map(|i| (c[0] * u[i] + c[1] * v[i] - y[i]).powi(2))
            .sum();
        r.sqrt()
    };
    let mut candidates = vec![[0.0, 0.0]];
    if uu > 0.0 {
        candidates.push([(uy / uu).max(0.0), 0.0]);
    }
    if vv > 0.0 {
        candidates.push([0.0, (vy / vv).max(0.0)]);
    }
    let det = uu * vv - uv * uv;
    if det.abs() > 1e-14 * uu * vv {
        let c = [(uy * vv - vy * uv) / det, (vy * uu - uy * uv) / det];
        if c[0] >= 0.0 && c[1] >= 0.0 {
            candidates.push(c);
        }
    }
    let best = candidates
        .into_iter()
        .min_by(|a, b| residual(*a).total_cmp(&residual(*b)))
        .expect("at least one candidate");
    let norm = dot(y, y).sqrt();
    (
        best,
        if norm > 0.0 {
            residual(best) / norm
        } else {
            0.0
        },
    )
}
