//! Orbit quadratures, the steady-parameter solve, family enumeration, and
//! profile reconstruction.
//!
//! For admissible c the closed orbit between the inner roots u_m < 0 < u_M
//! of P_c carries the two quadratures
//!
//! ```text
//!     g₁(c) = ∫_{u_m}^{u_M} du /√P_c(u),   g₂(c) = ∫_{u_m}^{u_M} u du /√P_c(u).
//! ```
//!
//! A steady zero-mean profile of principal period L exists exactly when
//! g₁ = L/2 and g₂ = 0: the orbit's half-period must fit the domain and its
//! first moment must vanish. The endpoint square-root singularities are
//! removed by the trigonometric substitution u(θ) = u_m cos²θ + u_M sin²θ,
//! under which du/√((u−u_m)(u_M−u)) = 2dθ and, with
//! Q(u) = (u−u₁)(u₂−u) collecting the outer roots,
//!
//! ```text
//!     g = 2√2 ∫₀^{π/2} (1 | u(θ)) / √Q(u(θ)) dθ,
//! ```
//!
//! a smooth integrand handled by Gauss–Legendre with order doubling.
//! (Equivalently: the Euler substitution y = √((u−u_m)/(u_M−u)) followed by
//! y = tan θ.)
//!
//! Profiles are reconstructed by integrating the monotone phase map
//! dθ/dx = √Q(u(θ))/(2√2) with a fixed fine RK4 grid, mirroring across the
//! extremum (steady orbits are even about their turning points), and then
//! polishing in coefficient space with a phase-gauged Newton iteration to
//! the spectral equilibrium.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::continuation::{newton_bordered, Gauge};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::potential::{
    boundary_r, classify_admissible, quartic_roots, Admissibility, PhaseParams,
};
use crate::spectral::{rhs, Field, SpectralGrid};
use crate::tol;

/// 2√2·π: no subharmonic of principal period below this length is admitted
/// by the family enumeration (the period gate L/k ≥ 2√2π).
pub const PERIOD_GATE: f64 = 8.885765876316732;

/// Default steady-parameter scan resolution (c₁ × c₂ cells).
pub const DEFAULT_SCAN: (usize, usize) = (400, 400);

/// Default collocation resolution for reconstructed profiles.
pub const DEFAULT_N: usize = 256;

const SQRT8: f64 = 2.8284271247461903; // 2√2

/// Result of the orbit quadratures.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureResult {
    /// Half-period ∫ du/√P_c.
    pub g1: f64,
    /// First moment ∫ u du/√P_c.
    pub g2: f64,
    /// Difference between the last two quadrature orders.
    pub estimated_error: f64,
    /// Set when the doubling strategy exhausted its largest order without
    /// meeting the requested tolerance (happens only within ~1e−4 of the
    /// double-root boundary).
    pub warning: bool,
}

/// A steady-state candidate on the full domain [0, L).
///
/// `field` holds samples and coefficients on the (L, N) grid; `k` counts
/// how many principal periods are packed into L (0 for the trivial zero
/// profile, whose `c` slot is meaningless); `family_id` is the index
/// assigned by [`enumerate_families`] (0 = trivial).
#[derive(Debug, Clone)]
pub struct Profile {
    pub field: Field,
    pub c: PhaseParams,
    pub k: u32,
    pub family_id: i64,
}

impl Profile {
    pub fn l(&self) -> f64 {
        self.field.grid().l()
    }

    pub fn n(&self) -> usize {
        self.field.grid().n()
    }

    pub fn samples(&self) -> &[f64] {
        self.field.values()
    }

    /// δ=0 steady residual ‖Δ³u − Δ²(W'(u))‖_{L²} via the exact-convolution
    /// evaluator.
    pub fn steady_residual(&self) -> Result<f64> {
        Ok(rhs(&self.field, 0.0)?.l2_norm())
    }
}

/// Families found at one domain length.
#[derive(Debug, Clone)]
pub struct FamilyEnumeration {
    pub families: Vec<Profile>,
    /// |L − 2kπ| < tolerance for some integer k: the trivial state's
    /// linearization is degenerate there (two-dimensional kernel).
    pub degenerate_l: bool,
}

// ---------------------------------------------------------------------------
// Gauss–Legendre nodes
// ---------------------------------------------------------------------------

/// Node-count ladder used by the doubling quadrature, plus the two fixed
/// scan orders.
const GL_LEVELS: [usize; 11] = [16, 32, 64, 96, 128, 256, 512, 1024, 2048, 4096, 8192];

fn gl_tables() -> &'static Vec<(Vec<f64>, Vec<f64>)> {
    static TABLES: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    TABLES.get_or_init(|| GL_LEVELS.iter().map(|&n| gauss_legendre(n)).collect())
}

/// Nodes and weights on [−1, 1] by Newton iteration on P_n from the
/// asymptotic initial guess; standard three-term recurrence evaluation.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
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
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Evaluate (g1, g2) with a fixed Gauss–Legendre order on θ ∈ [0, π/2].
fn quad_fixed(roots: &(f64, f64, f64, f64), level_idx: usize) -> (f64, f64) {
    let (u1, um, uma, u2) = *roots;
    let (nodes, weights) = &gl_tables()[level_idx];
    let half_pi = 0.5 * std::f64::consts::PI;
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        let th = 0.5 * half_pi * (x + 1.0);
        let s = th.sin();
        let u = um + (uma - um) * s * s;
        let q = (u - u1) * (u2 - u);
        let f = 0.5 * half_pi * w * SQRT8 / q.sqrt();
        g1 += f;
        g2 += f * u;
    }
    (g1, g2)
}

/// The orbit quadratures g₁, g₂ for admissible c, with order doubling until
/// two successive Gauss–Legendre orders agree to `tol` (absolute).
pub fn quad_g(c: PhaseParams, tol: f64) -> Result<QuadratureResult> {
    let q = quartic_roots(c)?;
    if !q.admissible {
        return Err(Error::Domain(format!(
            "quad_g: c = ({}, {}) is not admissible",
            c.c1, c.c2
        )));
    }
    let (u1, u2) = q.outer();
    let (um, uma) = q.inner();
    let roots = (u1, um, uma, u2);

    // level_idx 0,1,2 are 16,32,64; skip 96 (index 3) in the doubling ladder.
    let doubling: [usize; 9] = [0, 1, 2, 4, 5, 6, 7, 8, 9];
    let (mut g1p, mut g2p) = quad_fixed(&roots, doubling[0]);
    let mut err = f64::INFINITY;
    for &idx in &doubling[1..] {
        let (g1, g2) = quad_fixed(&roots, idx);
        err = (g1 - g1p).abs().max((g2 - g2p).abs());
        if err < tol {
            return Ok(QuadratureResult { g1, g2, estimated_error: err, warning: false });
        }
        g1p = g1;
        g2p = g2;
    }
    Ok(QuadratureResult { g1: g1p, g2: g2p, estimated_error: err, warning: true })
}

// ---------------------------------------------------------------------------
// Steady-parameter solve
// ---------------------------------------------------------------------------

/// All parameter pairs in the admissible cone with g₁ = L/2 and g₂ = 0.
///
/// The cone slice c₂ ∈ [−0.249, −0.001], |c₁| < r(c₂) is scanned on a
/// `scan.0 × scan.1` cell-centre grid: the c₁ = 0 axis (where g₂ vanishes
/// identically, by the u → −u symmetry) is searched for sign changes of
/// g₁ − L/2 and polished by 1D Newton in c₂; off-axis cells whose corners
/// show simultaneous sign changes of g₁ − L/2 and g₂ seed a 2D Newton
/// polish with finite-difference Jacobian. Duplicates are merged, u → −u
/// reflections of every off-axis solution are included, and the result is
/// sorted by (c₂, c₁).
pub fn find_steady_params(l: f64, scan: (usize, usize)) -> Result<Vec<PhaseParams>> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Domain(format!("find_steady_params: L = {l} must be positive")));
    }
    let target = 0.5 * l;
    let (n_c1, n_c2) = scan;
    let c2_lo = -0.249;
    let c2_hi = -0.001;

    let mut solutions: Vec<PhaseParams> = Vec::new();

    // --- axis pass: g2 ≡ 0 on c1 = 0; locate g1 = L/2 by sign change ----
    let axis_vals: Vec<(f64, f64)> = {
        let c2s: Vec<f64> = (0..n_c2)
            .map(|i| c2_lo + (c2_hi - c2_lo) * i as f64 / (n_c2 - 1) as f64)
            .collect();
        par_map(&c2s, |&c2| {
            let c = PhaseParams::new(0.0, c2);
            match quad_g(c, 1e-10) {
                Ok(r) => (c2, r.g1 - target),
                Err(_) => (c2, f64::NAN),
            }
        })
    };
    for w in axis_vals.windows(2) {
        let (a2, fa) = w[0];
        let (b2, fb) = w[1];
        if fa.is_nan() || fb.is_nan() || fa * fb > 0.0 {
            continue;
        }
        if let Some(c2) = polish_axis(a2, b2, fa, fb, target) {
            solutions.push(PhaseParams::new(0.0, c2));
        }
    }

    // --- off-axis pass: cells with sign changes in both g1 − L/2 and g2 --
    // Corner values on the (n_c1+1) × (n_c2+1) lattice of cell boundaries.
    let lattice: Vec<(f64, f64)> = {
        let mut pts = Vec::with_capacity((n_c1 + 1) * (n_c2 + 1));
        for i2 in 0..=n_c2 {
            let c2 = c2_lo + (c2_hi - c2_lo) * i2 as f64 / n_c2 as f64;
            let r = boundary_r(c2)?;
            for i1 in 0..=n_c1 {
                let c1 = -r + 2.0 * r * i1 as f64 / n_c1 as f64;
                pts.push((c1, c2));
            }
        }
        pts
    };
    let corner_vals: Vec<Option<(f64, f64)>> = par_map(&lattice, |&(c1, c2)| {
        let c = PhaseParams::new(c1, c2);
        match classify_admissible(c) {
            Ok(Admissibility::Admissible) => {
                quad_g(c, 1e-10).ok().map(|r| (r.g1 - target, r.g2))
            }
            _ => None,
        }
    });
    let at = |i1: usize, i2: usize| corner_vals[i2 * (n_c1 + 1) + i1];
    for i2 in 0..n_c2 {
        for i1 in 0..n_c1 {
            let quad = [at(i1, i2), at(i1 + 1, i2), at(i1, i2 + 1), at(i1 + 1, i2 + 1)];
            if quad.iter().any(|v| v.is_none()) {
                continue;
            }
            let f1: Vec<f64> = quad.iter().map(|v| v.unwrap().0).collect();
            let f2: Vec<f64> = quad.iter().map(|v| v.unwrap().1).collect();
            let sign_change = |f: &[f64]| {
                f.iter().any(|&v| v > 0.0) && f.iter().any(|&v| v < 0.0)
            };
            if !(sign_change(&f1) && sign_change(&f2)) {
                continue;
            }
            let (c1a, c2a) = lattice[i2 * (n_c1 + 1) + i1];
            let (c1b, c2b) = lattice[(i2 + 1) * (n_c1 + 1) + i1 + 1];
            let seed = PhaseParams::new(0.5 * (c1a + c1b), 0.5 * (c2a + c2b));
            if let Some(c) = polish_2d(seed, target) {
                solutions.push(c);
                solutions.push(c.reflected());
            }
        }
    }

    // --- merge duplicates, sort ----------------------------------------
    solutions.sort_by(|a, b| {
        (a.c2, a.c1).partial_cmp(&(b.c2, b.c1)).unwrap()
    });
    let mut merged: Vec<PhaseParams> = Vec::new();
    for c in solutions {
        let dup = merged.iter().any(|m| {
            (m.c1 - c.c1).abs() < tol::PARAM_MERGE && (m.c2 - c.c2).abs() < tol::PARAM_MERGE
        });
        if !dup {
            merged.push(c);
        }
    }
    // Contract check: every survivor meets the residual tolerances.
    merged.retain(|&c| match quad_g(c, tol::QUAD_TOL) {
        Ok(r) => (r.g1 - target).abs() < tol::STEADY_G1 * l && r.g2.abs() < tol::STEADY_G2,
        Err(_) => false,
    });
    Ok(merged)
}

/// 1D polish on the axis: secant from the bracketing pair, bisection
/// fallback, to |g1 − L/2| < 1e−9·L.
fn polish_axis(mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, target: f64) -> Option<f64> {
    let l = 2.0 * target;
    let f = |c2: f64| -> Option<f64> {
        quad_g(PhaseParams::new(0.0, c2), tol::QUAD_TOL)
            .ok()
            .map(|r| r.g1 - target)
    };
    for _ in 0..200 {
        // Secant proposal, clamped into the bracket; fall back to midpoint.
        let mut x = if (fb - fa).abs() > 1e-300 {
            b - fb * (b - a) / (fb - fa)
        } else {
            0.5 * (a + b)
        };
        if !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx.abs() < tol::STEADY_G1 * l {
            return Some(x);
        }
        if fa * fx <= 0.0 {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
        if (b - a).abs() < 1e-16 {
            return (fx.abs() < 1e-6).then_some(x);
        }
    }
    None
}

/// 2D Newton with finite-difference Jacobian on (g1 − L/2, g2).
fn polish_2d(mut c: PhaseParams, target: f64) -> Option<PhaseParams> {
    let l = 2.0 * target;
    let eval = |c: PhaseParams| -> Option<(f64, f64)> {
        let r = quad_g(c, tol::QUAD_TOL).ok()?;
        Some((r.g1 - target, r.g2))
    };
    for _ in 0..40 {
        let (f1, f2) = eval(c)?;
        if f1.abs() < tol::STEADY_G1 * l && f2.abs() < tol::STEADY_G2 {
            // Off-axis solutions collapse onto the axis when c1 underflows
            // the merge tolerance; report them as exactly on-axis.
            if c.c1.abs() < tol::PARAM_MERGE {
                return Some(PhaseParams::new(0.0, c.c2));
            }
            return Some(c);
        }
        let h1 = 1e-6 * (1.0 + c.c1.abs());
        let h2 = 1e-6 * (1.0 + c.c2.abs());
        let (f1p, f2p) = eval(PhaseParams::new(c.c1 + h1, c.c2))?;
        let (f1q, f2q) = eval(PhaseParams::new(c.c1, c.c2 + h2))?;
        let j11 = (f1p - f1) / h1;
        let j12 = (f1q - f1) / h2;
        let j21 = (f2p - f2) / h1;
        let j22 = (f2q - f2) / h2;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return None;
        }
        c.c1 -= (f1 * j22 - f2 * j12) / det;
        c.c2 -= (j11 * f2 - j21 * f1) / det;
    }
    None
}

// ---------------------------------------------------------------------------
// Criterion-style admissible scan
// ---------------------------------------------------------------------------

/// Summary of a fixed-box admissible scan of the parameter cone.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n_total: usize,
    pub n_admissible: usize,
    pub min_g1: f64,
    pub argmin_c1: f64,
    pub argmin_c2: f64,
}

/// Scan an `n_c1 × n_c2` inclusive lattice of the box
/// c₁ ∈ [−r(−0.249), r(−0.249)], c₂ ∈ [−0.249, −0.001], classify each
/// point, and record the minimum of g₁ over the admissible ones
/// (fixed order-96 quadrature: scan accuracy ~1e−10, far below the
/// features of interest).
pub fn scan_min_g1(n_c1: usize, n_c2: usize) -> Result<ScanSummary> {
    let rmax = boundary_r(-0.249)?;
    let pts: Vec<(f64, f64)> = {
        let mut v = Vec::with_capacity(n_c1 * n_c2);
        for i2 in 0..n_c2 {
            let c2 = -0.249 + (0.249 - 0.001) * i2 as f64 / (n_c2 - 1) as f64;
            for i1 in 0..n_c1 {
                let c1 = -rmax + 2.0 * rmax * i1 as f64 / (n_c1 - 1) as f64;
                v.push((c1, c2));
            }
        }
        v
    };
    let results: Vec<Option<f64>> = par_map(&pts, |&(c1, c2)| {
        let c = PhaseParams::new(c1, c2);
        match classify_admissible(c) {
            Ok(Admissibility::Admissible) => {
                let q = quartic_roots(c).ok()?;
                if !q.admissible {
                    return None;
                }
                let (u1, u2) = q.outer();
                let (um, uma) = q.inner();
                // GL_LEVELS[3] = 96
                Some(quad_fixed(&(u1, um, uma, u2), 3).0)
            }
            _ => None,
        }
    });
    let mut summary = ScanSummary {
        n_total: pts.len(),
        n_admissible: 0,
        min_g1: f64::INFINITY,
        argmin_c1: f64::NAN,
        argmin_c2: f64::NAN,
    };
    for (res, &(c1, c2)) in results.iter().zip(pts.iter()) {
        if let Some(g1) = res {
            summary.n_admissible += 1;
            if *g1 < summary.min_g1 {
                summary.min_g1 = *g1;
                summary.argmin_c1 = c1;
                summary.argmin_c2 = c2;
            }
        }
    }
    Ok(summary)
}

// ---------------------------------------------------------------------------
// Profile reconstruction
// ---------------------------------------------------------------------------

/// Reconstruct the steady profile for a parameter pair solving g₁ = L/2,
/// g₂ = 0, sampled on N uniform points of [0, L), positioned so
/// u(0) = u_m (minimum at the origin, even about it).
///
/// The phase map x(θ) = ∫₀^θ 2√2/√Q dθ' is integrated as the ODE
/// dθ/dx = √Q(u(θ))/(2√2) by RK4 on a 16× refined grid (the integrand is
/// smooth and strictly positive on admissible orbits, so the map is
/// strictly monotone — a non-positive Q en route is reported as an
/// inversion failure). The sampled half-orbit is mirrored and the result
/// polished in coefficient space (phase-gauged Newton) to the spectral
/// equilibrium, which leaves the samples within the RK4 discretization
/// error (~1e−9) of the quadrature values while driving the steady
/// residual to the Newton floor.
pub fn reconstruct_profile(c: PhaseParams, l: f64, n: usize) -> Result<Profile> {
    let quad = quad_g(c, tol::QUAD_TOL)?;
    if (quad.g1 - 0.5 * l).abs() > 1e-6 * l {
        return Err(Error::Domain(format!(
            "reconstruct_profile: g1(c) = {} is not L/2 = {}",
            quad.g1,
            0.5 * l
        )));
    }
    let q = quartic_roots(c)?;
    let (u1, u2) = q.outer();
    let (um, uma) = q.inner();

    // RK4 on theta(x) across the rising half-orbit [0, L/2].
    let half_n = n / 2;
    let sub = 16usize;
    let h = 0.5 * l / (half_n * sub) as f64;
    let dtheta_dx = |th: f64| -> Result<f64> {
        let s = th.sin();
        let u = um + (uma - um) * s * s;
        let qv = (u - u1) * (u2 - u);
        if qv <= 0.0 {
            return Err(Error::Inversion(format!(
                "Q(u(θ)) = {qv} ≤ 0 at θ = {th}; orbit quadrature inconsistent"
            )));
        }
        Ok(qv.sqrt() / SQRT8)
    };
    let mut theta = 0.0f64;
    let mut samples = vec![0.0f64; n];
    samples[0] = um;
    for j in 1..=half_n {
        for _ in 0..sub {
            let k1 = dtheta_dx(theta)?;
            let k2 = dtheta_dx(theta + 0.5 * h * k1)?;
            let k3 = dtheta_dx(theta + 0.5 * h * k2)?;
            let k4 = dtheta_dx(theta + h * k3)?;
            theta += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        let s = theta.sin();
        let u = um + (uma - um) * s * s;
        if j < half_n {
            samples[j] = u;
            samples[n - j] = u; // even reflection about the minimum
        } else {
            samples[j] = u;
        }
    }
    if (theta - 0.5 * std::f64::consts::PI).abs() > 1e-6 {
        return Err(Error::Inversion(format!(
            "phase integration ended at θ = {theta}, expected π/2; \
             x(u) inversion inconsistent with g1"
        )));
    }

    // Exact zero mean before the spectral polish (the analytic mean is
    // g2/g1 = 0; the sampled mean carries only discretization error).
    let mean = samples.iter().sum::<f64>() / n as f64;
    for v in samples.iter_mut() {
        *v -= mean;
    }

    let grid = SpectralGrid::new(l, n)?;
    let rough = Field::from_values(grid.clone(), samples)?;
    // Phase-gauged polish: the natural pin u(0) = const is degenerate here
    // (u_x(0) = 0 at the extremum), so the translation direction is fixed
    // by ⟨u_x, δu⟩ = 0 instead.
    let polished = newton_bordered(&rough, 0.0, Gauge::Phase, tol::NEWTON_TOL)?;

    Ok(Profile { field: polished.state, c, k: 1, family_id: -1 })
}

// ---------------------------------------------------------------------------
// Family enumeration
// ---------------------------------------------------------------------------

/// One representative profile per equilibrium family at domain length L:
/// the trivial zero profile (family 0) plus, for each k ≥ 1 passing the
/// period gate L/k ≥ 2√2π, every solution of the steady-parameter system
/// at principal period L/k, tiled k times across [0, L).
pub fn enumerate_families(l: f64, n: usize, scan: (usize, usize)) -> Result<FamilyEnumeration> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::Domain(format!("enumerate_families: L = {l} must be positive")));
    }
    let grid = SpectralGrid::new(l, n)?;
    let mut families = vec![Profile {
        field: Field::zero(grid.clone()),
        c: PhaseParams::new(0.0, 0.0),
        k: 0,
        family_id: 0,
    }];

    let mut k = 1u32;
    while l / k as f64 >= PERIOD_GATE {
        if n % (k as usize) == 0 {
            let lp = l / k as f64;
            let np = n / k as usize;
            if np >= 16 && np % 2 == 0 {
                for c in find_steady_params(lp, scan)? {
                    let principal = reconstruct_profile(c, lp, np)?;
                    // Tile in coefficient space: mode m of the principal
                    // is mode k·m on the full grid. This is exact, unlike
                    // a values round-trip, which would scramble the
                    // near-Nyquist coefficients the polish tuned to hold
                    // the q⁶-amplified residual at its Newton floor.
                    let pc = principal.field.coeffs();
                    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
                    for (m, &z) in pc.iter().enumerate() {
                        let signed = if m <= np / 2 {
                            m as i64
                        } else {
                            m as i64 - np as i64
                        };
                        let full = signed * k as i64;
                        coeffs[((full + n as i64) % n as i64) as usize] = z;
                    }
                    let field = Field::from_coeffs(grid.clone(), coeffs)?;
                    let family_id = families.len() as i64;
                    families.push(Profile { field, c, k, family_id });
                }
            }
        }
        k += 1;
    }

    let degenerate_l = {
        let two_pi = 2.0 * std::f64::consts::PI;
        let k_near = (l / two_pi).round();
        k_near >= 1.0 && (l - two_pi * k_near).abs() < tol::DEGENERATE_L
    };

    Ok(FamilyEnumeration { families, degenerate_l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // Order-n GL is exact through degree 2n−1.
        let (x, w) = gauss_legendre(16);
        let int_x2: f64 = x.iter().zip(w.iter()).map(|(xi, wi)| wi * xi * xi).sum();
        assert_abs_diff_eq!(int_x2, 2.0 / 3.0, epsilon = 1e-14);
        let int_x8: f64 = x.iter().zip(w.iter()).map(|(xi, wi)| wi * xi.powi(8)).sum();
        assert_abs_diff_eq!(int_x8, 2.0 / 9.0, epsilon = 1e-14);
        let int_cos: f64 = x.iter().zip(w.iter()).map(|(xi, wi)| wi * xi.cos()).sum();
        assert_abs_diff_eq!(int_cos, 2.0 * 1.0f64.sin(), epsilon = 1e-14);
    }

    #[test]
    fn quad_symmetric_orbit() {
        // Frozen oracle (independent desingularized quadrature):
        // g1(0, −0.125) = 3.562300792226616, g2 = 0 by symmetry.
        let r = quad_g(PhaseParams::new(0.0, -0.125), tol::QUAD_TOL).unwrap();
        assert_abs_diff_eq!(r.g1, 3.562300792226616, epsilon = 1e-10);
        assert!(r.g2.abs() < 1e-12);
        assert!(!r.warning);
    }

    #[test]
    fn quad_axis_frozen_values() {
        for &(c2, g1) in &[
            (-0.2499, 3.141828324595),
            (-0.249, 3.143954016473),
            (-0.2, 3.274381909037),
            (-0.05, 4.150271045541),
            (-0.01, 5.238749876721),
            (-0.001, 6.848409849119),
        ] {
            let r = quad_g(PhaseParams::new(0.0, c2), tol::QUAD_TOL).unwrap();
            assert_abs_diff_eq!(r.g1, g1, epsilon = 1e-9);
        }
    }

    #[test]
    fn quad_rejects_inadmissible() {
        assert!(quad_g(PhaseParams::new(0.0, 0.1), 1e-10).is_err());
        assert!(quad_g(PhaseParams::new(0.0, -0.25), 1e-10).is_err());
    }

    #[test]
    fn quad_reflection_symmetry() {
        for &(c1, c2) in &[(0.05, -0.1), (0.1, -0.2), (0.02, -0.05)] {
            let a = quad_g(PhaseParams::new(c1, c2), tol::QUAD_TOL).unwrap();
            let b = quad_g(PhaseParams::new(-c1, c2), tol::QUAD_TOL).unwrap();
            assert_abs_diff_eq!(a.g1, b.g1, epsilon = 1e-11);
            assert_abs_diff_eq!(a.g2, -b.g2, epsilon = 1e-11);
        }
    }

    #[test]
    fn steady_params_l10_axis_point() {
        let sols = find_steady_params(10.0, (80, 80)).unwrap();
        assert!(!sols.is_empty());
        let axis: Vec<_> = sols.iter().filter(|c| c.c1 == 0.0).collect();
        assert_eq!(axis.len(), 1, "one axis solution expected, got {sols:?}");
        assert_abs_diff_eq!(axis[0].c2, -0.014149038607286, epsilon = 1e-9);
        // Reflection completeness.
        for c in &sols {
            assert!(
                sols.iter().any(|d| (d.c1 + c.c1).abs() < 1e-9 && (d.c2 - c.c2).abs() < 1e-9),
                "missing reflection partner of {c:?}"
            );
        }
    }

    #[test]
    fn steady_params_l8_reports_the_axis_solution() {
        // The principal-period equation is solvable on the axis down to
        // L/2 → π; the family gate (2√2π) is applied by enumerate_families,
        // not here.
        let sols = find_steady_params(8.0, (60, 60)).unwrap();
        let axis: Vec<_> = sols.iter().filter(|c| c.c1 == 0.0).collect();
        assert_eq!(axis.len(), 1);
        assert_abs_diff_eq!(axis[0].c2, -0.062915498842114, epsilon = 1e-9);
    }
}
