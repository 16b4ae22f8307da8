//! Exact algebra of the double-well potential and the orbit polynomial.
//!
//! The steady equation integrates twice down to the first-order phase-plane
//! relation ½u_x² = W(u) + c₁u + c₂ with W(v) = ¼(v²−1)². Writing
//!
//! ```text
//!     P_c(u) = 2(W(u) + c₁u + c₂) = ½(u²−1)² + 2c₁u + 2c₂,
//! ```
//!
//! closed orbits live where P_c has four distinct real roots
//! u₁ < u_m < 0 < u_M < u₂ and the motion oscillates between the inner
//! pair. This module evaluates W and P_c, solves the quartic (companion
//! matrix plus Newton polish), classifies parameter pairs as admissible /
//! boundary / inadmissible, and computes the boundary curve r(c₂): the
//! |c₁| at which P_c acquires a double root and the orbit degenerates.

use ndarray::Array2;
use ndarray_linalg::Eig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// The constant pair c = (c₁, c₂) selecting a phase-plane orbit.
///
/// c₁ tilts the effective potential (breaking the u → −u symmetry of W);
/// c₂ shifts its energy level. Admissibility is always decided by
/// [`classify_admissible`], never assumed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub c1: f64,
    pub c2: f64,
}

impl PhaseParams {
    pub fn new(c1: f64, c2: f64) -> Self {
        Self { c1, c2 }
    }

    /// The u → −u reflection partner (−c₁, c₂); W is even, so the orbit of
    /// the partner is the negated, reversed orbit.
    pub fn reflected(self) -> Self {
        Self { c1: -self.c1, c2: self.c2 }
    }
}

/// Real roots of P_c with multiplicities.
///
/// For an admissible pair the four roots are simple and ordered
/// u₁ < u_m < 0 < u_M < u₂; `roots` always lists every real root found
/// (ascending), `multiplicity` the merged multiplicity of each, and
/// `n_complex` how many roots (counted with multiplicity) are complex.
#[derive(Debug, Clone, PartialEq)]
pub struct RootQuartet {
    pub roots: Vec<f64>,
    pub multiplicity: Vec<u32>,
    pub n_complex: usize,
    pub admissible: bool,
}

impl RootQuartet {
    /// The inner pair (u_m, u_M) bracketing the orbit. Only meaningful when
    /// `admissible` is set.
    pub fn inner(&self) -> (f64, f64) {
        (self.roots[1], self.roots[2])
    }

    /// The outer pair (u₁, u₂). Only meaningful when `admissible` is set.
    pub fn outer(&self) -> (f64, f64) {
        (self.roots[0], self.roots[3])
    }
}

/// Verdict of [`classify_admissible`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Admissibility {
    /// Four simple real roots ordered u₁ < u_m < 0 < u_M < u₂.
    Admissible,
    /// A double root is present: |c₁| = r(c₂) within the merge tolerance.
    Boundary,
    /// Fewer than four real roots, or the ordering fails.
    Inadmissible,
}

/// W(v) = ¼(v² − 1)².
pub fn eval_w(v: f64) -> f64 {
    let s = v * v - 1.0;
    0.25 * s * s
}

/// W'(v) = v³ − v.
pub fn eval_w_prime(v: f64) -> f64 {
    v * v * v - v
}

/// W''(v) = 3v² − 1.
pub fn eval_w_second(v: f64) -> f64 {
    3.0 * v * v - 1.0
}

/// P_c(u) = 2(W(u) + c₁u + c₂) = ½(u²−1)² + 2c₁u + 2c₂.
pub fn eval_pc(c: PhaseParams, u: f64) -> f64 {
    let s = u * u - 1.0;
    0.5 * s * s + 2.0 * c.c1 * u + 2.0 * c.c2
}

/// dP_c/du = 2(W'(u) + c₁).
pub fn eval_pc_prime(c: PhaseParams, u: f64) -> f64 {
    2.0 * (eval_w_prime(u) + c.c1)
}

/// d²P_c/du² = 2 W''(u).
pub fn eval_pc_second(_c: PhaseParams, u: f64) -> f64 {
    2.0 * eval_w_second(u)
}

/// All real roots of P_c, multiplicity-merged and polished.
///
/// The monic form is u⁴ − 2u² + 4c₁u + (1 + 4c₂); its 4×4 companion matrix
/// is eigensolved, each near-real eigenvalue is polished by two Newton
/// corrections on P_c, and roots closer than the merge tolerance are
/// collapsed into one with summed multiplicity. Robust near double roots,
/// where closed-form resolvent formulas lose half the digits.
pub fn quartic_roots(c: PhaseParams) -> Result<RootQuartet> {
    if !c.c1.is_finite() || !c.c2.is_finite() {
        return Err(Error::Domain(format!(
            "non-finite phase parameters ({}, {})",
            c.c1, c.c2
        )));
    }
    // Companion matrix of u^4 + 0·u^3 − 2u^2 + 4c1·u + (1+4c2).
    let a = [0.0, -2.0, 4.0 * c.c1, 1.0 + 4.0 * c.c2];
    let mut m = Array2::<f64>::zeros((4, 4));
    for i in 0..3 {
        m[[i + 1, i]] = 1.0;
    }
    for i in 0..4 {
        m[[i, 3]] = -a[3 - i];
    }
    let (eigs, _) = m
        .eig()
        .map_err(|e| Error::Eigen(format!("companion matrix: {e}")))?;

    // Scale against which "real" and residuals are judged.
    let scale = 1.0 + eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut real_roots: Vec<f64> = Vec::with_capacity(4);
    let mut n_complex = 0usize;
    for z in eigs.iter() {
        if z.im.abs() < 1e-8 * scale {
            real_roots.push(z.re);
        } else {
            n_complex += 1;
        }
    }

    // Two Newton polish steps per root; a vanishing derivative means the
    // root is (near) double and already accurate to sqrt(eps).
    for r in real_roots.iter_mut() {
        for _ in 0..2 {
            let p = eval_pc(c, *r);
            let dp = eval_pc_prime(c, *r);
            if dp.abs() > 1e-9 * scale {
                *r -= p / dp;
            }
        }
    }
    real_roots.sort_by(|x, y| x.partial_cmp(y).unwrap());

    // Merge clusters closer than the tolerance.
    let mut roots: Vec<f64> = Vec::new();
    let mut multiplicity: Vec<u32> = Vec::new();
    for &r in &real_roots {
        match roots.last() {
            Some(&prev) if (r - prev).abs() < tol::ROOT_MERGE * (1.0 + r.abs()) => {
                // Weighted merge keeps the cluster centroid.
                let m = *multiplicity.last().unwrap();
                let centroid = (prev * m as f64 + r) / (m as f64 + 1.0);
                *roots.last_mut().unwrap() = centroid;
                *multiplicity.last_mut().unwrap() = m + 1;
            }
            _ => {
                roots.push(r);
                multiplicity.push(1);
            }
        }
    }

    let admissible = roots.len() == 4
        && multiplicity.iter().all(|&m| m == 1)
        && roots[1] < 0.0
        && roots[2] > 0.0;

    Ok(RootQuartet { roots, multiplicity, n_complex, admissible })
}

/// Classify a parameter pair by the root structure of P_c.
pub fn classify_admissible(c: PhaseParams) -> Result<Admissibility> {
    let q = quartic_roots(c)?;
    if q.admissible {
        return Ok(Admissibility::Admissible);
    }
    if q.multiplicity.iter().any(|&m| m > 1) {
        return Ok(Admissibility::Boundary);
    }
    Ok(Admissibility::Inadmissible)
}

/// The boundary curve r(c₂) ≥ 0 at which P_{(r(c₂), c₂)} acquires a double
/// root, for c₂ ∈ [−¼, 0].
///
/// Solves P_c(u) = 0, P_c'(u) = 0 simultaneously by a damped 2D Newton
/// iteration in (u, c₁), seeded from the exact corner values at c₂ = −¼
/// (double root at u₀ = √(2/3), c₁ = (1/3)√(2/3)) and continued toward the
/// requested c₂ in short arcs so every Newton start is close. r is strictly
/// decreasing with r(0) = 0.
pub fn boundary_r(c2: f64) -> Result<f64> {
    if !(tol::C2_MIN..=0.0).contains(&c2) {
        return Err(Error::Domain(format!(
            "boundary_r: c2 = {c2} outside [{}, 0]",
            tol::C2_MIN
        )));
    }
    // Exact endpoints need no iteration.
    if c2 == 0.0 {
        return Ok(0.0);
    }
    let u0 = (2.0f64 / 3.0).sqrt();
    let c1_corner = u0 / 3.0;
    if c2 == tol::C2_MIN {
        return Ok(c1_corner);
    }

    // Continuation from c2 = −1/4 toward the target in ≤ 0.01-wide arcs.
    let mut u = u0;
    let mut c1 = c1_corner;
    let start = tol::C2_MIN;
    let n_arcs = ((c2 - start).abs() / 0.01).ceil().max(1.0) as usize;
    for i in 1..=n_arcs {
        let c2_i = start + (c2 - start) * i as f64 / n_arcs as f64;
        newton_double_root(&mut u, &mut c1, c2_i)?;
    }
    Ok(c1.max(0.0))
}

/// One damped Newton solve of (P, P')(u, c₁) = 0 at fixed c₂.
fn newton_double_root(u: &mut f64, c1: &mut f64, c2: f64) -> Result<()> {
    for _ in 0..60 {
        let c = PhaseParams::new(*c1, c2);
        let p = eval_pc(c, *u);
        let dp = eval_pc_prime(c, *u);
        if p.abs() < tol::BOUNDARY_NEWTON && dp.abs() < tol::BOUNDARY_NEWTON {
            return Ok(());
        }
        // Jacobian of (P, P') with respect to (u, c1):
        //   dP/du = P',      dP/dc1  = 2u,
        //   dP'/du = P'',    dP'/dc1 = 2.
        let j11 = dp;
        let j12 = 2.0 * *u;
        let j21 = eval_pc_second(c, *u);
        let j22 = 2.0;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-300 {
            return Err(Error::LinearSolve(format!(
                "boundary_r Newton: singular Jacobian at c2 = {c2}"
            )));
        }
        let du = (p * j22 - dp * j12) / det;
        let dc1 = (j11 * dp - j21 * p) / det;
        // Damp long steps; the curve is mild, so this rarely triggers.
        let norm = du.hypot(dc1);
        let damp = if norm > 0.1 { 0.1 / norm } else { 1.0 };
        *u -= damp * du;
        *c1 -= damp * dc1;
    }
    let c = PhaseParams::new(*c1, c2);
    if eval_pc(c, *u).abs() < 1e-10 && eval_pc_prime(c, *u).abs() < 1e-10 {
        return Ok(()); // converged to slack tolerance
    }
    Err(Error::NewtonDiverged {
        delta_reached: c2,
        detail: "boundary_r double-root Newton stalled".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn well_bottoms_and_barrier() {
        assert_eq!(eval_w(1.0), 0.0);
        assert_eq!(eval_w(-1.0), 0.0);
        assert_eq!(eval_w(0.0), 0.25);
        assert_eq!(eval_w_prime(1.0), 0.0);
        assert_eq!(eval_w_prime(-1.0), 0.0);
        assert_eq!(eval_w_second(1.0), 2.0);
        assert_eq!(eval_w_second(0.0), -1.0);
    }

    #[test]
    fn pc_direct_values() {
        assert_abs_diff_eq!(
            eval_pc(PhaseParams::new(0.0, 0.0), 0.0),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            eval_pc(PhaseParams::new(0.0, -0.25), 0.0),
            0.0,
            epsilon = 1e-15
        );
        // Double root of the tilted well at the corner of the admissible cone:
        // u0 = sqrt(2/3), c1 = (1/3) sqrt(2/3), c2 = -1/4.
        let u0 = (2.0f64 / 3.0).sqrt();
        let c = PhaseParams::new(u0 / 3.0, -0.25);
        assert_abs_diff_eq!(eval_pc(c, u0), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(eval_pc_prime(c, u0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn quartic_closed_form_simple() {
        // (u^2-1)^2 = 1/2 at c = (0, -1/8): u^2 = 1 ± 1/sqrt(2).
        let q = quartic_roots(PhaseParams::new(0.0, -0.125)).unwrap();
        assert!(q.admissible);
        let inner = (1.0f64 - 0.5f64.sqrt()).sqrt();
        let outer = (1.0f64 + 0.5f64.sqrt()).sqrt();
        let expect = [-outer, -inner, inner, outer];
        for (r, e) in q.roots.iter().zip(expect.iter()) {
            assert_abs_diff_eq!(r, e, epsilon = 1e-12);
        }
        // Residual contract.
        for &r in &q.roots {
            assert!(eval_pc(PhaseParams::new(0.0, -0.125), r).abs() < tol::QUARTIC_RESIDUAL);
        }
    }

    #[test]
    fn quartic_double_root_center() {
        // (u^2-1)^2 = 1 at c = (0, -1/4): roots -sqrt(2), 0 (double), sqrt(2).
        let q = quartic_roots(PhaseParams::new(0.0, -0.25)).unwrap();
        assert!(!q.admissible);
        assert_eq!(q.roots.len(), 3);
        assert_eq!(q.multiplicity, vec![1, 2, 1]);
        assert_abs_diff_eq!(q.roots[0], -(2.0f64.sqrt()), epsilon = 1e-7);
        assert_abs_diff_eq!(q.roots[1], 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(q.roots[2], 2.0f64.sqrt(), epsilon = 1e-7);
    }

    #[test]
    fn quartic_untilted_well_is_all_double() {
        let q = quartic_roots(PhaseParams::new(0.0, 0.0)).unwrap();
        assert_eq!(q.roots.len(), 2);
        assert_eq!(q.multiplicity, vec![2, 2]);
        assert_abs_diff_eq!(q.roots[0], -1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(q.roots[1], 1.0, epsilon = 1e-7);
    }

    #[test]
    fn classification_matches_examples() {
        use Admissibility::*;
        assert_eq!(classify_admissible(PhaseParams::new(0.0, -0.1)).unwrap(), Admissible);
        let u0 = (2.0f64 / 3.0).sqrt();
        assert_eq!(
            classify_admissible(PhaseParams::new(u0 / 3.0, -0.25)).unwrap(),
            Boundary
        );
        assert_eq!(classify_admissible(PhaseParams::new(0.0, 0.1)).unwrap(), Inadmissible);
    }

    #[test]
    fn boundary_r_endpoints_and_closed_form() {
        // Closed form for comparison: with w = (1 + 2 sqrt(1+3c2))/3,
        // the double root sits at u = ±sqrt(w) and r = sqrt(w)(1−w).
        let closed = |c2: f64| {
            let w = (1.0 + 2.0 * (1.0 + 3.0 * c2).sqrt()) / 3.0;
            w.sqrt() * (1.0 - w)
        };
        assert_abs_diff_eq!(
            boundary_r(-0.25).unwrap(),
            (2.0f64 / 3.0).sqrt() / 3.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(boundary_r(0.0).unwrap(), 0.0, epsilon = 1e-15);
        for &(c2, frozen) in &[
            (-0.2, 0.212903882200027),
            (-0.1, 0.1027935991289455),
            (-0.05, 0.050658709521062),
            (-0.01, 0.010025253656673),
        ] {
            assert_abs_diff_eq!(boundary_r(c2).unwrap(), closed(c2), epsilon = 1e-10);
            assert_abs_diff_eq!(boundary_r(c2).unwrap(), frozen, epsilon = 1e-10);
        }
    }

    #[test]
    fn boundary_r_monotone_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let c2 = -0.25 + 0.25 * i as f64 / 100.0;
            let r = boundary_r(c2).unwrap();
            assert!(r < prev, "r({c2}) = {r} not below {prev}");
            prev = r;
        }
    }

    #[test]
    fn boundary_r_rejects_out_of_domain() {
        assert!(boundary_r(-0.3).is_err());
        assert!(boundary_r(0.1).is_err());
    }
}
