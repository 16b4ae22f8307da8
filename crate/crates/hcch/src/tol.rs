//! Centralized numeric tolerances, each with its origin.
//!
//! Every threshold used by the library, the verification suite, and the
//! default experiment configuration lives here so that no module carries
//! ad-hoc magic numbers. Three scales recur:
//!
//! * machine scale — f64 roundoff accumulated through FFTs and dense
//!   factorizations, ~1e−13 … 1e−15;
//! * solver scale — what polished Newton/quadrature iterations actually
//!   reach on the default N = 256 grid, ~1e−9 … 1e−12;
//! * physics scale — the smallest physically meaningful magnitudes at the
//!   default domain (spectral gap ≈ 0.18, leading instability ≈ 0.094).

// ---------------------------------------------------------------------------
// Root finding and admissibility
// ---------------------------------------------------------------------------

/// Relative residual |P_c(root)| demanded after quartic root polishing.
///
/// Two Newton corrections from companion-matrix seeds reach machine
/// precision for simple roots; 1e−12 leaves slack for nearly-double roots.
pub const QUARTIC_RESIDUAL: f64 = 1e-12;

/// Roots closer than `ROOT_MERGE * (1 + |root|)` are treated as one double
/// root. Matches the polish accuracy: closed-form discrimination below
/// 1e−7 separation is meaningless after the companion eigensolve.
pub const ROOT_MERGE: f64 = 1e-7;

/// Domain half-width of the boundary curve r(c₂): c₂ ∈ [−1/4, 0].
pub const C2_MIN: f64 = -0.25;

/// Convergence of the damped 2D Newton iteration for r(c₂).
pub const BOUNDARY_NEWTON: f64 = 1e-13;

// ---------------------------------------------------------------------------
// Orbit quadratures and the steady-parameter solve
// ---------------------------------------------------------------------------

/// Relative agreement between successive Gauss–Legendre orders at which the
/// doubling quadrature for g₁, g₂ stops.
pub const QUAD_TOL: f64 = 1e-12;

/// Smallest and largest Gauss–Legendre node counts tried by the doubling
/// strategy. The integrand is smooth after the trigonometric substitution,
/// so 4096 nodes is reached only within ~1e−4 of the double-root boundary.
pub const QUAD_N_MIN: usize = 16;
pub const QUAD_N_MAX: usize = 4096;

/// |g₁ − L/2| < `STEADY_G1 * L` and |g₂| < `STEADY_G2` for every parameter
/// pair returned by the steady-parameter solve.
pub const STEADY_G1: f64 = 1e-9;
pub const STEADY_G2: f64 = 1e-9;

/// Parameter-space distance below which two polished steady parameters are
/// considered duplicates of one solution.
pub const PARAM_MERGE: f64 = 1e-7;

/// |L − 2kπ| below this flags the domain length as degenerate (the trivial
/// state's linearization acquires a two-dimensional kernel there).
pub const DEGENERATE_L: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Fields and profiles
// ---------------------------------------------------------------------------

/// Zero-mean enforcement: |mean| of any constructed profile or field.
pub const MEAN_TOL: f64 = 1e-10;

/// Steady residual ‖G(0, u)‖_{L²} required of a reconstructed profile
/// (coefficient-space Newton polish reaches ~1e−14; 1e−9 is the contract).
pub const PROFILE_RESIDUAL: f64 = 1e-9;

/// Sample-level agreement of profile symmetry checks (u(−x) = u(x) about
/// the minimum, max ≈ −min for the symmetric branch).
pub const PROFILE_SYMMETRY: f64 = 1e-8;

// ---------------------------------------------------------------------------
// Linearization spectra
// ---------------------------------------------------------------------------

/// Default |λ| threshold for counting kernel eigenvalues, and the Re λ
/// threshold for counting unstable ones.
///
/// Absolute, not relative: the spectral radius of the assembled operator is
/// dominated by the −q⁶ tail (≈ 2.7e5 at L = 10, N = 256), so any relative
/// threshold large enough to swallow it would also swallow the physical
/// scales it must separate — the gap eigenvalue ≈ −0.1826 and the trivial
/// state's instability ≈ +0.0943. Kernel eigenvalue noise stays below
/// ~1e−5 up to N = 512, two orders under this threshold.
pub const ZERO_TOL: f64 = 1e-3;

/// Realness verdict for δ = 0 spectra: max |Im λ| relative to the spectral
/// radius.
pub const REALNESS: f64 = 1e-6;

/// u_x-alignment of the kernel eigenvector demanded at nontrivial
/// equilibria.
pub const KERNEL_ALIGNMENT: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Continuation
// ---------------------------------------------------------------------------

/// ‖G(δ, u)‖_{L²} required of a continued representative.
pub const CONTINUED_RESIDUAL: f64 = 1e-9;

/// Interior Newton convergence target (kept below `CONTINUED_RESIDUAL` so
/// the returned residual clears the contract with margin).
pub const NEWTON_TOL: f64 = 1e-11;

/// Maximum Newton iterations per continuation step; two consecutive steps
/// hitting it abort the path (empirical continuation limit).
pub const NEWTON_MAX_ITERS: usize = 12;

/// |u_x(0)| below this makes the pin row u(0) = 0 ill-posed.
pub const PIN_DEGENERACY: f64 = 1e-6;

/// |u(0)| accepted as "pinned" for continued representatives.
pub const PIN_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Time stepping and ω-limit classification
// ---------------------------------------------------------------------------

/// Default step-size rule dt = `DT_SAFETY` · (L/N)²: empirical stability
/// margin ≈ 3× for the explicit cubic term at N = 256 (the flow blows up
/// near 4× this step).
pub const DT_SAFETY: f64 = 0.1;

/// |mean(u)| allowed over a whole trajectory (the right-hand side is a
/// perfect x-derivative; the zero mode is projected out every step).
pub const MEAN_DRIFT: f64 = 1e-11;

/// Per-recorded-pair slack allowed in the δ = 0 energy-dissipation check
/// F(t_{n+1}) ≤ F(t_n) + slack.
pub const ENERGY_SLACK: f64 = 1e-10;

/// ω-limit classification: shift-minimized H² distance to a family below
/// which (together with the velocity test) a trajectory counts as
/// converged. Two orders above the long-run distance floor.
pub const OMEGA_DIST: f64 = 1e-6;

/// ω-limit classification: terminal velocity ‖u_t‖_{L²} threshold. The
/// stationary noise floor of the stepper at the default dt is ≈ 6e−9.
pub const OMEGA_VEL: f64 = 1e-8;

/// A run whose velocity stays above `OMEGA_VEL * OMEGA_NONSTATIONARY_FACTOR`
/// over its entire final quarter is classified NonStationary rather than
/// Undecided.
pub const OMEGA_NONSTATIONARY_FACTOR: f64 = 10.0;

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Significant digits written for every floating-point value in CSV output;
/// 17 digits round-trips f64 exactly.
pub const CSV_DIGITS: usize = 17;
