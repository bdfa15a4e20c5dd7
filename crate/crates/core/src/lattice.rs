//! Periodized power kernels `Σ_m |z + P m|^{-s}` over the period lattice.
//!
//! On the torus every translation-invariant singular integral sees all periodic
//! images of its kernel, so quadratures that should reproduce a Fourier
//! multiplier must use the periodized kernel rather than the nearest image.

use std::f64::consts::PI;

use crate::grid::GridSpec;

const EXPLICIT: i64 = 64;
const OUTER_EXPLICIT: i64 = 200;
const NEAR_COLUMNS: i64 = 3;

/// `Σ_{m > M} (P m + a)^{-s}` by Euler–Maclaurin from `m = M`.
fn tail_1d(a: f64, period: f64, s: f64, m0: i64) -> f64 {
    let t = period * m0 as f64 + a;
    let integral = t.powf(1.0 - s) / (period * (s - 1.0));
    let f = t.powf(-s);
    let d1 = -s * period * t.powf(-s - 1.0);
    let d3 = -s * (s + 1.0) * (s + 2.0) * period.powi(3) * t.powf(-s - 3.0);
    integral - 0.5 * f - d1 / 12.0 + d3 / 720.0
}

/// `Σ_{m∈ℤ} |z + P m|^{-s}` for `s > 1` and `z ∉ Pℤ`.
pub fn periodic_sum_1d(z: f64, period: f64, s: f64) -> f64 {
    let z = z - period * (z / period).round();
    let explicit: f64 = (-EXPLICIT..=EXPLICIT)
        .map(|m| (z + period * m as f64).abs().powf(-s))
        .sum();
    explicit + tail_1d(z, period, s, EXPLICIT) + tail_1d(-z, period, s, EXPLICIT)
}

/// `∫_T^∞ (x² + t²)^{-s/2} dt` for `T ≫ |x|`, as a binomial series in `x²/T²`.
fn column_tail_integral(x: f64, t: f64, s: f64) -> f64 {
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for k in 0..8 {
        let kf = k as f64;
        sum += coeff * x.powi(2 * k) * t.powf(1.0 - s - 2.0 * kf) / (s + 2.0 * kf - 1.0);
        coeff *= (-s / 2.0 - kf) / (kf + 1.0);
    }
    sum
}

/// `Σ_{m > M} g(P m + a)` with `g(t) = (x² + t²)^{-s/2}`.
fn column_tail(x: f64, a: f64, period: f64, s: f64) -> f64 {
    let t = period * EXPLICIT as f64 + a;
    let g = (x * x + t * t).powf(-s / 2.0);
    let dg = -s * t * (x * x + t * t).powf(-s / 2.0 - 1.0);
    column_tail_integral(x, t, s) / period - 0.5 * g - period * dg / 12.0
}

/// `Σ_{m∈ℤ²} |z + P m|^{-s}` for `s > 2` and `z ∉ Pℤ²`.
///
/// Columns `|m₁| ≤ 3` are summed explicitly in `m₂` with an Euler–Maclaurin
/// tail. Farther columns are replaced by their Poisson leading term
/// `√π Γ((s−1)/2)/(Γ(s/2) P) |x|^{1−s}`, whose correction is `O(e^{-2π·3.5})`.
pub fn periodic_sum_2d(z: [f64; 2], period: f64, s: f64) -> f64 {
    let x = z[0] - period * (z[0] / period).round();
    let y = z[1] - period * (z[1] / period).round();
    let mut total = 0.0;
    for m1 in -NEAR_COLUMNS..=NEAR_COLUMNS {
        let xx = x + period * m1 as f64;
        for m2 in -EXPLICIT..=EXPLICIT {
            let yy = y + period * m2 as f64;
            let r2 = xx * xx + yy * yy;
            if r2 > 0.0 {
                total += r2.powf(-s / 2.0);
            }
        }
        total += column_tail(xx, y, period, s) + column_tail(xx, -y, period, s);
    }
    let column_const = PI.sqrt() * libm::tgamma((s - 1.0) / 2.0) / (libm::tgamma(s / 2.0) * period);
    let s1 = s - 1.0;
    let start = NEAR_COLUMNS + 1;
    let mut outer: f64 = (start..=OUTER_EXPLICIT)
        .map(|m| {
            let pm = period * m as f64;
            (pm + x).powf(-s1) + (pm - x).powf(-s1)
        })
        .sum();
    outer += tail_1d(x, period, s1, OUTER_EXPLICIT) + tail_1d(-x, period, s1, OUTER_EXPLICIT);
    total + column_const * outer
}

/// Periodized kernel `Σ_m |z + 2L m|^{-s}` tabulated at every lattice offset
/// of a grid (offset index laid out like the grid; value 0 at the origin).
#[derive(Debug, Clone)]
pub struct PeriodicKernel {
    grid: GridSpec,
    exponent: f64,
    values: Vec<f64>,
}

impl PeriodicKernel {
    /// Requires `exponent > dim` so the lattice sum converges.
    pub fn new(grid: &GridSpec, exponent: f64) -> Self {
        assert!(exponent > grid.dim() as f64, "lattice sum diverges");
        let n = grid.points_per_axis();
        let h = grid.spacing();
        let period = 2.0 * grid.half_width();
        let mut values = vec![0.0; grid.len()];
        let wrap = |k: usize| (n - k) % n;
        if grid.dim() == 1 {
            for a in 1..=n / 2 {
                let v = periodic_sum_1d(a as f64 * h, period, exponent);
                values[a] = v;
                values[wrap(a)] = v;
            }
        } else {
            for a in 0..=n / 2 {
                for b in 0..=a {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let v = periodic_sum_2d([a as f64 * h, b as f64 * h], period, exponent);
                    for (p, q) in [(a, b), (b, a)] {
                        for pp in [p, wrap(p)] {
                            for qq in [q, wrap(q)] {
                                values[pp * n + qq] = v;
                            }
                        }
                    }
                }
            }
        }
        Self {
            grid: *grid,
            exponent,
            values,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Kernel value at a flat offset index.
    pub fn value(&self, offset: usize) -> f64 {
        self.values[offset]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Flat offset index of `y - x` for flat indices `x`, `y`.
    pub fn offset_index(&self, x: usize, y: usize) -> usize {
        let n = self.grid.points_per_axis();
        let [x0, x1] = self.grid.axis_indices(x);
        let [y0, y1] = self.grid.axis_indices(y);
        self.grid.flat_index((y0 + n - x0) % n, (y1 + n - x1) % n)
    }
}
