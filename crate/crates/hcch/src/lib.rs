//! Numerical laboratory for the 1D sixth-order convective Cahn–Hilliard
//! equation on a periodic zero-mean domain:
//!
//! ```text
//!     u_t = (δ/2)(u²)_x + Δ²(Δu − W'(u)),      W(v) = ¼(v² − 1)²,
//! ```
//!
//! for x on the circle of circumference L and ∫u dx = 0. At δ = 0 this is
//! the H⁻²-gradient flow of F[u] = ½∫|u_x|² + ∫W(u); the quadratic
//! convective term (δ/2)(u²)_x breaks the gradient structure while, for
//! small δ, the long-time behaviour — convergence of every trajectory to a
//! (shifted) equilibrium — survives. The crate provides the pieces needed
//! to see all of this happen numerically:
//!
//! * [`potential`] — exact algebra of the double well W and the orbit
//!   polynomial P_c(u) = 2(W(u) + c₁u + c₂): evaluation, quartic roots,
//!   admissibility, and the boundary curve r(c₂) of the admissible cone.
//! * [`phase_plane`] — the half-period and first-moment quadratures g₁, g₂
//!   over admissible orbits, solution of g₁ = L/2, g₂ = 0, enumeration of
//!   equilibrium families for a given L, and profile reconstruction.
//! * [`spectral`] — Fourier representation of zero-mean periodic fields,
//!   derivatives, the inverse Laplacian, dealiased products, Sobolev norms,
//!   and the PDE right-hand side evaluated with exact truncated
//!   convolutions.
//! * [`linearization`] — dense assembly of the linearized operator
//!   w ↦ δ(uw)_x + Δ³w − Δ²(W''(u)w) in the zero-mean Fourier basis, its
//!   full spectrum, kernel dimension, and u_x-alignment diagnostics.
//! * [`continuation`] — pinned bordered Newton on the steady equation
//!   G(δ,u) = 0, δ-continuation of the δ=0 families, and shift-minimized /
//!   Hausdorff distances between families.
//! * [`evolution`] — fourth-order exponential (ETDRK4, Krogstad tableau)
//!   time stepping with the stiff linear symbol −q⁶ + q⁴ treated exactly,
//!   energy/Lyapunov tracking, and ω-limit classification.
//! * [`init`] — seeded random zero-mean initial data with prescribed
//!   spectral decay.
//! * [`config`], [`io`], [`sweep`] — experiment configuration, run-directory
//!   persistence (CSV/JSON), and deterministic (L, δ, seed) sweep grids.
//! * [`acceptance`] — the built-in verification suite: twelve numbered
//!   criteria, each returning a pass/fail report with the measured numbers.
//!
//! # Conventions
//!
//! Fields are real, periodic, zero-mean. Fourier coefficients are stored in
//! standard FFT layout (k = 0, 1, …, N/2−1, −N/2, …, −1) normalized so that
//! u(x) = Σ_k û_k e^{i q_k x} with q_k = 2πk/L; the k = 0 and Nyquist
//! coefficients are identically zero for every state this crate produces.
//! The discrete Sobolev norm of order m is ‖u‖_{H^m} = (Σ_k (1+q_k²)^m
//! |û_k|²)^{1/2} and the L² norm carries the domain factor,
//! ‖u‖² = L Σ_k |û_k|².
//!
//! With the `parallel` feature (default) embarrassingly parallel work —
//! parameter-plane scans and sweep cells — runs on a rayon pool; without it
//! the identical code paths run sequentially.

pub mod acceptance;
pub mod config;
pub mod continuation;
pub mod conv;
pub mod error;
pub mod evolution;
pub mod init;
pub mod io;
pub mod linearization;
pub mod par;
pub mod phase_plane;
pub mod potential;
pub mod spectral;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
