//! Pinned acceptance tolerances.

/// Lattice-exact operator identities.
pub const OPERATOR_IDENTITY: f64 = 1e-10;
/// Relative `L²` gap between the PV quadrature and the multiplier.
pub const PV_MULTIPLIER: f64 = 1e-3;
/// Least-squares residual of the Riesz representation and the spread of `c`.
pub const RIESZ_REPRESENTATION: f64 = 1e-10;
/// Relative drift of the largest KPV ratio under grid refinement.
pub const KPV_STABILITY: f64 = 0.20;
/// Allowed deviation of the tail envelope slope from `−(n+β)`.
pub const TAIL_SLOPE: f64 = 0.15;
/// Relative residual of the nonnegative two-term fit of `B(h)`.
pub const TRANSLATE_FIT: f64 = 0.10;
/// Commutator ε-rank threshold.
pub const EPS_RANK: f64 = 1e-2;
/// Relative `L²` gap of `∂φ` against the closed form for the disk.
pub const DISK_ORACLE: f64 = 0.02;
/// Relative slack on the geometric Neumann bound `k^{m+1}`.
pub const NEUMANN_SLACK: f64 = 1e-9;
/// Absolute floor under which Neumann residuals are round-off.
pub const NEUMANN_FLOOR: f64 = 1e-14;
/// Relative `L²` gap between `exp(g)` and `1 + Bh`.
pub const LOG_EXPONENTIAL: f64 = 1e-4;
/// `(max − min)/min` of `‖D^α g‖_{2/α}` across mollification levels.
pub const LOG_REGULARITY_VARIATION: f64 = 0.30;
/// Relative drift of the a priori ratio under grid refinement.
pub const APRIORI_STABILITY: f64 = 0.25;
/// VMO: finest-scale modulus of `μ` relative to its coarsest value.
pub const VMO_DECAY: f64 = 1.0 / 3.0;
/// BMO: finest-scale oscillation of `∂φ` relative to its coarsest value.
pub const BMO_PERSISTENCE: f64 = 2.0 / 3.0;
/// Lower bound on `σ_min(T_μ)`, namely `(1 − k)/2` at `k = 1/2`.
pub const T_MU_LOWER: f64 = 0.25;
