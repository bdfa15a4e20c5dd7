//! Coefficient families and test-field generators.
//!
//! Mollified members are sampled from the exact convolution `μ ∗ ρ_ε` rather
//! than convolved on the grid: every profile here has the form
//! `e^{imθ} a(|z|)`, a form preserved by a radial mollifier, so the mollified
//! radial profile is tabulated once by quadrature and then interpolated. This
//! keeps `‖μ_ε‖_∞ ≤ k` and the support bound exact and makes members
//! independent of the grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::beltrami::BeltramiCoefficient;
use crate::error::{LabError, Result};
use crate::grid::{ComplexField, GridSpec, Point};

const PROFILE_SAMPLES: usize = 4096;
const RADIAL_NODES: usize = 32;
const ANGULAR_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `k·exp(1 − 1/(1 − |z|²/R²))` on the disk of radius `R`.
    SmoothBump,
    /// `k·χ_{|z|<R} ∗ ρ_ε`.
    MollifiedDisk,
    /// `(z/(2z̄))/(log|z/s| − ½)`, smoothly cut off where its modulus reaches `k`.
    LogExample,
    /// Seeded band-limited field under a smooth window, rescaled to sup norm `k`.
    RandomBandlimited,
}

fn default_count() -> usize {
    1
}

/// Parameters of a coefficient family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub k: f64,
    /// Mollification scales, one member per entry; empty means unmollified.
    #[serde(default)]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Support radius of the unmollified profile. Defaults to 1 for the bump
    /// and disk, to the natural cut-off radius for the log example and to
    /// `L/4` for random fields.
    #[serde(default)]
    pub radius: Option<f64>,
    /// Number of random members.
    #[serde(default = "default_count")]
    pub count: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, k: f64) -> Self {
        Self {
            kind,
            k,
            eps: Vec::new(),
            seed: None,
            radius: None,
            count: 1,
        }
    }

    pub fn with_eps(mut self, eps: &[f64]) -> Self {
        self.eps = eps.to_vec();
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k >= 0.0 && self.k < 1.0) {
            return Err(LabError::InvalidParameter {
                name: "k",
                value: self.k,
                reason: "must lie in [0, 1)",
            });
        }
        if let Some(&e) = self.eps.iter().find(|&&e| !(e > 0.0 && e.is_finite())) {
            return Err(LabError::InvalidParameter {
                name: "eps",
                value: e,
                reason: "must be positive",
            });
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(LabError::InvalidParameter {
                    name: "radius",
                    value: r,
                    reason: "must be positive",
                });
            }
        }
        match self.kind {
            FamilyKind::MollifiedDisk if self.eps.is_empty() => Err(LabError::Config(
                "mollified_disk needs at least one eps".into(),
            )),
            FamilyKind::RandomBandlimited if self.seed.is_none() => {
                Err(LabError::Config("random_bandlimited needs a seed".into()))
            }
            FamilyKind::RandomBandlimited if self.count == 0 => Err(LabError::Config(
                "random_bandlimited needs count ≥ 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Radius where the log example's modulus reaches `k`: `exp(½ − 1/(2k))`.
pub fn log_example_natural_radius(k: f64) -> f64 {
    (0.5 - 0.5 / k).exp()
}

/// Modulus of the unwindowed log example: `1/(2|log r − ½|)`.
pub fn log_example_modulus(r: f64) -> f64 {
    0.5 / (r.ln() - 0.5).abs()
}

/// `C^∞` step: 1 on `t ≤ a`, 0 on `t ≥ b`.
pub fn smooth_step(t: f64, a: f64, b: f64) -> f64 {
    if t <= a {
        return 1.0;
    }
    if t >= b {
        return 0.0;
    }
    let u = (t - a) / (b - a);
    let f = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    f(1.0 - u) / (f(1.0 - u) + f(u))
}

/// `exp(1 − 1/(1 − t²))` on `|t| < 1`, the standard bump with value 1 at 0.
pub fn bump_profile(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

/// Radially symmetric bump `amplitude·exp(1 − 1/(1 − |x|²/R²))` centred at `center`.
pub fn bump_field(grid: GridSpec, radius: f64, amplitude: f64, center: Point) -> ComplexField {
    ComplexField::from_real_fn(grid, |p| {
        amplitude * bump_profile((p[0] - center[0]).hypot(p[1] - center[1]) / radius)
    })
    .expect("bump samples are finite")
}

/// `e^{imθ} a(r)`.
#[derive(Clone, Copy)]
enum Profile {
    Bump { k: f64, radius: f64 },
    Disk { k: f64, radius: f64 },
    Log { k: f64, scale: f64 },
}

impl Profile {
    fn order(&self) -> i32 {
        match self {
            Profile::Log { .. } => 2,
            _ => 0,
        }
    }

    fn outer_radius(&self) -> f64 {
        match *self {
            Profile::Bump { radius, .. } | Profile::Disk { radius, .. } => radius,
            Profile::Log { k, scale } => scale * log_example_natural_radius(k),
        }
    }

    fn radial(&self, r: f64) -> f64 {
        match *self {
            Profile::Bump { k, radius } => k * bump_profile(r / radius),
            Profile::Disk { k, radius } => {
                if r < radius {
                    k
                } else {
                    0.0
                }
            }
            Profile::Log { k, scale } => {
                let t = r / scale;
                let rmax = log_example_natural_radius(k);
                if t <= 0.0 || t >= rmax {
                    0.0
                } else {
                    smooth_step(t, 0.5 * rmax, rmax) * 0.5 / (t.ln() - 0.5)
                }
            }
        }
    }

    fn value(&self, z: Complex64) -> Complex64 {
        let r = z.norm();
        let a = self.radial(r);
        if a == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match self.order() {
            0 => Complex64::new(a, 0.0),
            m => Complex64::from_polar(a, m as f64 * z.arg()),
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Mollified radial profile `ã(r)` with `(μ ∗ ρ_ε)(re^{iθ}) = e^{imθ} ã(r)`.
struct MollifiedProfile {
    step: f64,
    table: Vec<Complex64>,
}

impl MollifiedProfile {
    fn new(profile: Profile, eps: f64) -> Self {
        let outer = profile.outer_radius() + eps;
        let step = outer / (PROFILE_SAMPLES - 1) as f64;
        let rule = gauss_legendre(RADIAL_NODES);
        // Nodes t ∈ (a, b) with weights t·ρ(t)·dt.
        let radial_nodes = |a: f64, b: f64| -> Vec<(f64, f64)> {
            rule.iter()
                .map(|&(x, w)| {
                    let t = a + 0.5 * (b - a) * (x + 1.0);
                    (t, 0.5 * (b - a) * w * t * bump_profile(t / eps))
                })
                .collect()
        };
        let whole = radial_nodes(0.0, eps);
        let dpsi = 2.0 * PI / ANGULAR_NODES as f64;
        let mass: f64 = whole.iter().map(|(_, w)| w).sum::<f64>() * 2.0 * PI;
        let table = (0..PROFILE_SAMPLES)
            .map(|j| {
                let r = j as f64 * step;
                let mut acc = Complex64::new(0.0, 0.0);
                match profile {
                    Profile::Disk { k, radius } => {
                        // The arc fraction of the circle |w| = t inside the disk has a
                        // square-root kink at t = |r − R|; split the radial rule there.
                        let kink = (r - radius).abs();
                        let pieces = if kink > 0.0 && kink < eps {
                            [radial_nodes(0.0, kink), radial_nodes(kink, eps)].concat()
                        } else {
                            whole.clone()
                        };
                        for (t, w) in pieces {
                            let inside = if r == 0.0 {
                                if t < radius {
                                    PI
                                } else {
                                    0.0
                                }
                            } else {
                                ((r * r + t * t - radius * radius) / (2.0 * r * t))
                                    .clamp(-1.0, 1.0)
                                    .acos()
                            };
                            acc += 2.0 * k * inside * w;
                        }
                    }
                    _ => {
                        for &(t, w) in &whole {
                            let angular = (0..ANGULAR_NODES)
                                .map(|i| {
                                    let psi = (i as f64 + 0.5) * dpsi;
                                    profile.value(
                                        Complex64::new(r, 0.0) - Complex64::from_polar(t, psi),
                                    )
                                })
                                .sum::<Complex64>();
                            acc += angular * dpsi * w;
                        }
                    }
                }
                acc / mass
            })
            .collect();
        Self { step, table }
    }

    fn radial(&self, r: f64) -> Complex64 {
        let x = r / self.step;
        let j = x.floor() as usize;
        if j + 1 >= self.table.len() {
            return Complex64::new(0.0, 0.0);
        }
        let f = x - j as f64;
        self.table[j] * (1.0 - f) + self.table[j + 1] * f
    }
}

fn sample_profile(grid: GridSpec, profile: Profile, eps: Option<f64>) -> Result<ComplexField> {
    let m = profile.order();
    match eps {
        None => ComplexField::from_fn(grid, |p| profile.value(Complex64::new(p[0], p[1]))),
        Some(eps) => {
            let table = MollifiedProfile::new(profile, eps);
            ComplexField::from_fn(grid, |p| {
                let z = Complex64::new(p[0], p[1]);
                let a = table.radial(z.norm());
                if m == 0 || z.norm() == 0.0 {
                    if m == 0 {
                        a
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                } else {
                    a * Complex64::from_polar(1.0, m as f64 * z.arg())
                }
            })
        }
    }
}

/// Seeded band-limited field with frequencies `|ξ| ≤ cutoff`, times a bump
/// window of the given radius, rescaled to sup norm `k`.
pub fn random_bandlimited(
    grid: GridSpec,
    k: f64,
    radius: f64,
    cutoff: f64,
    seed: u64,
) -> Result<ComplexField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(Point, Complex64)> = (0..24)
        .map(|_| {
            let r = cutoff * rng.random::<f64>().sqrt();
            let th = 2.0 * PI * rng.random::<f64>();
            let xi = if grid.dim() == 2 {
                [r * th.cos(), r * th.sin()]
            } else {
                [r * th.cos(), 0.0]
            };
            let amp = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            (xi, amp)
        })
        .collect();
    let raw = ComplexField::from_fn(grid, |p| {
        let window = bump_profile(p[0].hypot(p[1]) / radius);
        if window == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        modes
            .iter()
            .map(|(xi, a)| a * Complex64::from_polar(1.0, 2.0 * PI * (xi[0] * p[0] + xi[1] * p[1])))
            .sum::<Complex64>()
            * window
    })?;
    let sup = raw.sup_norm();
    Ok(if sup > 0.0 {
        raw.map(|v| v * (k / sup))
    } else {
        raw
    })
}

/// Generates the family described by `spec` on `grid` (which must be planar).
pub fn generate_family(spec: &FamilySpec, grid: GridSpec) -> Result<Vec<BeltramiCoefficient>> {
    spec.validate()?;
    if grid.dim() != 2 {
        return Err(LabError::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    let k = spec.k;
    let scales: Vec<Option<f64>> = if spec.eps.is_empty() {
        vec![None]
    } else {
        spec.eps.iter().map(|&e| Some(e)).collect()
    };
    let profile = match spec.kind {
        FamilyKind::SmoothBump => Profile::Bump {
            k,
            radius: spec.radius.unwrap_or(1.0),
        },
        FamilyKind::MollifiedDisk => Profile::Disk {
            k,
            radius: spec.radius.unwrap_or(1.0),
        },
        FamilyKind::LogExample => {
            let natural = log_example_natural_radius(k.max(f64::MIN_POSITIVE));
            Profile::Log {
                k,
                scale: spec.radius.map_or(1.0, |r| r / natural),
            }
        }
        FamilyKind::RandomBandlimited => {
            let seed = spec.seed.expect("validated");
            let radius = spec.radius.unwrap_or(grid.half_width() / 4.0);
            return (0..spec.count)
                .map(|i| {
                    let f = random_bandlimited(grid, k, radius, 1.5, seed.wrapping_add(i as u64))?;
                    BeltramiCoefficient::new(f)
                })
                .collect();
        }
    };
    scales
        .into_iter()
        .map(|eps| {
            if k == 0.0 {
                return BeltramiCoefficient::zero(grid);
            }
            BeltramiCoefficient::new(sample_profile(grid, profile, eps)?)
        })
        .collect()
}

/// Random sum of Gaussian bumps `Σ a_j exp(−|x − c_j|²/(2w_j²))` with widths in
/// `[0.25, 0.6]` and centres in the ball of radius 0.5.
pub fn random_gaussian_sum(grid: GridSpec, rng: &mut ChaCha8Rng) -> ComplexField {
    let terms: Vec<(Point, f64, Complex64)> = (0..3)
        .map(|_| {
            let r = 0.5 * rng.random::<f64>().sqrt();
            let th = 2.0 * PI * rng.random::<f64>();
            let c = if grid.dim() == 2 {
                [r * th.cos(), r * th.sin()]
            } else {
                [r * th.cos(), 0.0]
            };
            let w = 0.25 + 0.35 * rng.random::<f64>();
            let a = Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            );
            (c, w, a)
        })
        .collect();
    ComplexField::from_fn(grid, |p| {
        terms
            .iter()
            .map(|(c, w, a)| {
                let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
                a * (-d2 / (2.0 * w * w)).exp()
            })
            .sum()
    })
    .expect("gaussian samples are finite")
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(2, 128, 4.0).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let q = gauss_legendre(8);
        let s: f64 = q.iter().map(|(x, w)| w * x.powi(14)).sum();
        assert!((s - 2.0 / 15.0).abs() < 1e-14);
        assert!((q.iter().map(|(_, w)| w).sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_k_gives_zero_coefficient() {
        for kind in [FamilyKind::SmoothBump, FamilyKind::LogExample] {
            let fam = generate_family(&FamilySpec::new(kind, 0.0), grid()).unwrap();
            assert_eq!(fam[0].sup_bound(), 0.0);
        }
    }

    #[test]
    fn mollified_disk_bounds() {
        let grid = || GridSpec::new(2, 128, 8.0).unwrap();
        let spec = FamilySpec::new(FamilyKind::MollifiedDisk, 0.5).with_eps(&[0.2, 0.1]);
        for (mu, eps) in generate_family(&spec, grid())
            .unwrap()
            .iter()
            .zip([0.2, 0.1])
        {
            assert!(mu.sup_bound() <= 0.5 + 1e-15);
            assert!(mu.support_radius() <= 1.0 + eps);
            // Far from the collar the disk value is reproduced exactly.
            let g = mu.field().grid();
            for (i, v) in mu.field().values().iter().enumerate() {
                let p = g.point(i);
                if p[0].hypot(p[1]) < 1.0 - eps {
                    assert!((v.re - 0.5).abs() < 1e-12 && v.im.abs() < 1e-15);
                }
            }
        }
        assert!(generate_family(&FamilySpec::new(FamilyKind::MollifiedDisk, 0.5), grid()).is_err());
    }

    #[test]
    fn mollified_disk_matches_direct_convolution() {
        // Direct 2D midpoint quadrature of χ ∗ ρ_ε at a point in the collar.
        let eps = 0.2;
        let z = [0.93, 0.11];
        let n = 1200;
        let h = 2.0 * eps / n as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let w = [-eps + (i as f64 + 0.5) * h, -eps + (j as f64 + 0.5) * h];
                let rho = bump_profile(w[0].hypot(w[1]) / eps);
                den += rho;
                if (z[0] - w[0]).hypot(z[1] - w[1]) < 1.0 {
                    num += rho;
                }
            }
        }
        let expected = 0.5 * num / den;
        let table = MollifiedProfile::new(
            Profile::Disk {
                k: 0.5,
                radius: 1.0,
            },
            eps,
        );
        let got = table.radial(z[0].hypot(z[1])).re;
        assert!((got - expected).abs() < 1e-4, "{got} vs {expected}");
    }

    #[test]
    fn log_example_modulus_matches_formula() {
        let k = 0.9;
        let spec = FamilySpec::new(FamilyKind::LogExample, k);
        let mu = &generate_family(&spec, grid()).unwrap()[0];
        let rmax = log_example_natural_radius(k);
        let g = mu.field().grid();
        let mut checked = 0;
        for (i, v) in mu.field().values().iter().enumerate() {
            let p = g.point(i);
            let r = p[0].hypot(p[1]);
            if r > 0.0 && r <= 0.5 * rmax {
                assert!((v.norm() - log_example_modulus(r)).abs() < 1e-12);
                let z = Complex64::new(p[0], p[1]);
                let exact = z / (2.0 * z.conj()) / (r.ln() - 0.5);
                assert!((v - exact).norm() < 1e-12);
                checked += 1;
            }
        }
        assert!(checked > 10);
        assert!(mu.sup_bound() <= k);
        assert!(mu.support_radius() <= rmax);
    }

    #[test]
    fn random_family_is_deterministic_and_admissible() {
        let spec = FamilySpec {
            count: 2,
            ..FamilySpec::new(FamilyKind::RandomBandlimited, 0.5).with_seed(7)
        };
        let a = generate_family(&spec, grid()).unwrap();
        let b = generate_family(&spec, grid()).unwrap();
        assert_eq!(a[0].field(), b[0].field());
        assert_ne!(a[0].field(), a[1].field());
        assert!((a[0].sup_bound() - 0.5).abs() < 1e-12);
        let unseeded = FamilySpec::new(FamilyKind::RandomBandlimited, 0.5);
        assert!(generate_family(&unseeded, grid()).is_err());
        assert!(generate_family(&FamilySpec::new(FamilyKind::SmoothBump, 1.0), grid()).is_err());
    }
}
