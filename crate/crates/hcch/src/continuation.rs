//! Newton correction of equilibria and continuation in the convective
//! strength δ, plus translation-quotient distances between states.
//!
//! Equilibria come in translation families: if G(u) = 0 then every
//! translate of u is also a zero, so the Fourier-side Jacobian is
//! singular along û_x. The Newton systems here are *bordered*: the
//! unknown vector is extended by a scalar μ multiplying the translation
//! direction, and one gauge row is appended to fix the translate —
//! either a point pin u(0) = const (natural along the continuation,
//! where states are pinned at a rising zero crossing) or the phase
//! condition ⟨u_x, δu⟩ = 0 (needed when polishing profiles pinned at an
//! extremum, where u_x(0) = 0 makes the point pin degenerate). The
//! bordered matrix is nonsingular precisely because the gauge row cuts
//! the translation direction; the converged μ is a rank-completion
//! artifact and is discarded.
//!
//! Everything is realified: for active modes k = 1..N/2−1 the unknowns
//! are (Re û_k, Im û_k), giving a dense real system of size N−1
//! (2·(N/2−1) mode unknowns + μ). Conjugate modes are reconstructed by
//! Hermitian symmetry and the mean stays exactly zero throughout.

use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linearization::OperatorBand;
use crate::phase_plane::Profile;
use crate::spectral::{rhs, rhs_coeffs, Field};
use crate::tol;

/// How the translation gauge is fixed in the bordered Newton system.
#[derive(Debug, Clone, Copy)]
pub enum Gauge {
    /// Hold u(0) at the given value. Degenerate when u_x(0) ≈ 0.
    Pin(f64),
    /// Hold the update orthogonal to the translation direction u_x.
    Phase,
}

/// A converged bordered-Newton solve.
#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub state: Field,
    /// Linear solves performed.
    pub iterations: usize,
    /// Final ‖G(u)‖_{L²}.
    pub residual: f64,
}

/// The steady-state residual G(u) = (δ/2)(u²)_x + Δ³u − Δ²W'(u), by the
/// exact-convolution evaluator. Identical to the instantaneous velocity
/// of the evolution module up to roundoff (the two use different but
/// alias-free product paths).
pub fn eval_g(u: &Field, delta: f64) -> Result<Field> {
    rhs(u, delta)
}

/// Bordered Newton correction of an approximate equilibrium at fixed δ.
///
/// Iterates until ‖G‖_{L²} < `tol`, at most [`tol::NEWTON_MAX_ITERS`]
/// linear solves; the gauge row keeps the translate fixed. The Nyquist
/// and mean modes are projected out of the start state (they are not
/// unknowns; equilibria carry no content there).
pub fn newton_bordered(u0: &Field, delta: f64, gauge: Gauge, tol: f64) -> Result<NewtonOutcome> {
    let grid = u0.grid().clone();
    let n = grid.n();
    let l = grid.l();
    let half = n / 2 - 1;
    let dim = n - 1; // 2·half mode unknowns + μ
    let q = grid.q().to_vec();

    let mut coeffs = u0.coeffs().to_vec();
    coeffs[0] = Complex64::new(0.0, 0.0);
    coeffs[n / 2] = Complex64::new(0.0, 0.0);
    let mut state = Field::from_coeffs(grid.clone(), coeffs)?;

    if let Gauge::Pin(_) = gauge {
        let ux0 = state.derivative(1)?.at(0.0);
        if ux0.abs() < tol::PIN_DEGENERACY {
            return Err(Error::PinDegenerate { ux0, tol: tol::PIN_DEGENERACY });
        }
    }

    let mut iterations = 0usize;
    loop {
        let g = rhs_coeffs(&grid, state.coeffs(), delta);
        let residual = (l * g.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
        if residual < tol {
            return Ok(NewtonOutcome { state, iterations, residual });
        }
        if iterations >= tol::NEWTON_MAX_ITERS {
            return Err(Error::NewtonDiverged {
                delta_reached: delta,
                detail: format!(
                    "residual {residual:.3e} after {iterations} iterations (target {tol:.1e})"
                ),
            });
        }

        let band = OperatorBand::new(&state);
        let mut m = Array2::<f64>::zeros((dim, dim));
        let mut b = Array1::<f64>::zeros(dim);
        for ki in 1..=half {
            let k = ki as i64;
            let row_re = 2 * (ki - 1);
            let row_im = row_re + 1;
            for ji in 1..=half {
                let j = ji as i64;
                let app = band.entry(k, j, delta);
                let apm = band.entry(k, -j, delta);
                let bb = app + apm;
                let cc = Complex64::i() * (app - apm);
                let col_a = 2 * (ji - 1);
                m[(row_re, col_a)] = bb.re;
                m[(row_re, col_a + 1)] = cc.re;
                m[(row_im, col_a)] = bb.im;
                m[(row_im, col_a + 1)] = cc.im;
            }
            // Border column: translation direction û_x = iq û.
            let uxk = Complex64::new(0.0, q[ki]) * state.coeffs()[ki];
            m[(row_re, dim - 1)] = uxk.re;
            m[(row_im, dim - 1)] = uxk.im;
            b[row_re] = -g[ki].re;
            b[row_im] = -g[ki].im;
        }
        let gauge_row = dim - 1;
        match gauge {
            Gauge::Pin(target) => {
                // u(0) = Σ_k û_k = Σ_{k>0} 2 Re û_k on zero-mean states.
                for ji in 1..=half {
                    m[(gauge_row, 2 * (ji - 1))] = 2.0;
                }
                b[gauge_row] = -(state.at(0.0) - target);
            }
            Gauge::Phase => {
                for ji in 1..=half {
                    let uxj = Complex64::new(0.0, q[ji]) * state.coeffs()[ji];
                    m[(gauge_row, 2 * (ji - 1))] = 2.0 * uxj.re;
                    m[(gauge_row, 2 * (ji - 1) + 1)] = 2.0 * uxj.im;
                }
                b[gauge_row] = 0.0;
            }
        }

        let dx = m
            .solve_into(b)
            .map_err(|e| Error::LinearSolve(format!("bordered Newton solve failed: {e}")))?;
        let mut coeffs = state.coeffs().to_vec();
        for ki in 1..=half {
            let dz = Complex64::new(dx[2 * (ki - 1)], dx[2 * (ki - 1) + 1]);
            coeffs[ki] += dz;
            coeffs[n - ki] = coeffs[ki].conj();
        }
        // dx[dim-1] is μ — rank completion only, deliberately unused.
        state = Field::from_coeffs(grid.clone(), coeffs)?;
        iterations += 1;
    }
}

/// Translate a state so that x = 0 sits on a rising zero crossing
/// (u(0) = 0, u_x(0) > 0) — the gauge in which continuation pins states.
pub fn shift_to_pin(u: &Field) -> Result<Field> {
    let n = u.grid().n();
    let l = u.grid().l();
    let vals = u.values();
    let mut bracket = None;
    for j in 0..n {
        let a = vals[j];
        let b = vals[(j + 1) % n];
        if a < 0.0 && b >= 0.0 {
            bracket = Some((u.grid().x(j), u.grid().x(j) + l / n as f64));
            break;
        }
    }
    let (mut xa, mut xb) = bracket.ok_or_else(|| {
        Error::Domain("shift_to_pin: state has no rising zero crossing".into())
    })?;
    for _ in 0..100 {
        let xm = 0.5 * (xa + xb);
        if u.at(xm) < 0.0 {
            xa = xm;
        } else {
            xb = xm;
        }
        if xb - xa < 1e-15 * l {
            break;
        }
    }
    let x0 = 0.5 * (xa + xb);
    // τ_s u with s = −x0 evaluates to u(x + x0): the crossing moves to 0.
    Ok(u.shifted(-x0))
}

/// A state continued to finite δ.
#[derive(Debug, Clone)]
pub struct Continued {
    /// The continued state; `c`, `k`, `family_id` are inherited from the
    /// δ = 0 source profile.
    pub profile: Profile,
    pub delta: f64,
    /// Final ‖G‖_{L²} at the target.
    pub residual: f64,
    /// Newton targets solved (ladder steps plus any inserted midpoints).
    pub steps_taken: usize,
    /// Total Newton iterations across all targets.
    pub newton_iters: usize,
}

/// Continue a δ = 0 equilibrium to `delta_target` through a uniform
/// δ-ladder of `steps` increments with a secant predictor.
///
/// Each ladder point is corrected by the pin-gauged bordered Newton. If a
/// correction exceeds the iteration budget, the increment is bisected
/// once; a second consecutive failure aborts with the last δ reached.
pub fn continue_to(delta_target: f64, u0: &Profile, steps: usize) -> Result<Continued> {
    if steps == 0 {
        return Err(Error::Domain("continue_to: steps must be ≥ 1".into()));
    }
    // The trivial state is an equilibrium for every δ.
    if u0.k == 0 || u0.field.l2_norm() < 1e-14 {
        return Ok(Continued {
            profile: u0.clone(),
            delta: delta_target,
            residual: 0.0,
            steps_taken: 0,
            newton_iters: 0,
        });
    }

    let mut cur = shift_to_pin(&u0.field)?;
    let mut cur_delta = 0.0f64;
    let mut prev: Option<(Field, f64)> = None;
    let mut residual = 0.0f64;

    let mut pending: Vec<f64> = (1..=steps)
        .rev()
        .map(|i| delta_target * i as f64 / steps as f64)
        .collect();
    let mut failures = 0usize;
    let mut steps_taken = 0usize;
    let mut newton_iters = 0usize;

    while let Some(&target) = pending.last() {
        let predictor = match &prev {
            Some((p, pd)) if (cur_delta - pd).abs() > 1e-300 => {
                let f = (target - cur_delta) / (cur_delta - pd);
                let coeffs: Vec<Complex64> = cur
                    .coeffs()
                    .iter()
                    .zip(p.coeffs().iter())
                    .map(|(a, b)| a + (a - b) * f)
                    .collect();
                Field::from_coeffs(cur.grid().clone(), coeffs)?
            }
            _ => cur.clone(),
        };
        match newton_bordered(&predictor, target, Gauge::Pin(0.0), tol::NEWTON_TOL) {
            Ok(out) => {
                prev = Some((cur, cur_delta));
                cur = out.state;
                cur_delta = target;
                residual = out.residual;
                pending.pop();
                failures = 0;
                steps_taken += 1;
                newton_iters += out.iterations;
            }
            Err(Error::NewtonDiverged { .. }) if failures == 0 => {
                failures = 1;
                pending.push(0.5 * (cur_delta + target));
            }
            Err(Error::NewtonDiverged { detail, .. }) => {
                return Err(Error::NewtonDiverged { delta_reached: cur_delta, detail });
            }
            Err(e) => return Err(e),
        }
    }

    Ok(Continued {
        profile: Profile { field: cur, c: u0.c, k: u0.k, family_id: u0.family_id },
        delta: delta_target,
        residual,
        steps_taken,
        newton_iters,
    })
}

/// Distance between two states modulo translation:
/// min over s of ‖u − τ_s v‖ in the H^m spectral norm (weights
/// (1+q²)^m, no domain factor — the convention of [`Field::h_norm`]).
///
/// The correlation R(s) = Re Σ_k w_k û_k* v̂_k e^{−iq_k s} is maximized
/// on a 4N-point shift grid and refined by golden-section search; the
/// returned shift lies in [0, L). The Nyquist mode does not rotate
/// cleanly under translation and enters only the constant term (states
/// keep that slot at zero).
pub fn shift_distance(u: &Field, v: &Field, norm_order: i32) -> Result<(f64, f64)> {
    if !u.grid().same(v.grid()) {
        return Err(Error::GridMismatch(format!(
            "shift_distance: {:?} vs {:?}",
            u.grid(),
            v.grid()
        )));
    }
    let n = u.grid().n();
    let l = u.grid().l();
    let q = u.grid().q();
    let w: Vec<f64> = q.iter().map(|&qk| (1.0 + qk * qk).powi(norm_order)).collect();

    // Correlation coefficients C_k = w_k û_k* v̂_k over non-Nyquist modes.
    let c: Vec<Complex64> = (0..n)
        .map(|k| {
            if k == n / 2 {
                Complex64::new(0.0, 0.0)
            } else {
                w[k] * u.coeffs()[k].conj() * v.coeffs()[k]
            }
        })
        .collect();
    let corr = |s: f64| -> f64 {
        (0..n)
            .map(|k| (c[k] * Complex64::new(0.0, -q[k] * s).exp()).re)
            .sum()
    };

    let m = 4 * n;
    let mut best_i = 0;
    let mut best_r = f64::NEG_INFINITY;
    for i in 0..m {
        let r = corr(l * i as f64 / m as f64);
        if r > best_r {
            best_r = r;
            best_i = i;
        }
    }
    let a = l * (best_i as f64 - 1.0) / m as f64;
    let b = l * (best_i as f64 + 1.0) / m as f64;
    let (mut ga, mut gb) = (a, b);
    let phi = 0.5 * (3.0 - 5.0f64.sqrt());
    let mut x1 = ga + phi * (gb - ga);
    let mut x2 = gb - phi * (gb - ga);
    let mut f1 = corr(x1);
    let mut f2 = corr(x2);
    for _ in 0..40 {
        if f1 > f2 {
            gb = x2;
            x2 = x1;
            f2 = f1;
            x1 = ga + phi * (gb - ga);
            f1 = corr(x1);
        } else {
            ga = x1;
            x1 = x2;
            f1 = f2;
            x2 = gb - phi * (gb - ga);
            f2 = corr(x2);
        }
    }
    let mut s = 0.5 * (ga + gb);
    // Golden section stalls once |R(x1) − R(x2)| reaches roundoff (the
    // maximum is locally flat); a few Newton steps on R'(s) = 0, whose
    // zero crossing is linear and noise-robust, restore full precision.
    {
        let dcorr = |s: f64, order: u32| -> f64 {
            (0..n)
                .map(|k| {
                    let f = Complex64::new(0.0, -q[k]).powu(order);
                    (f * c[k] * Complex64::new(0.0, -q[k] * s).exp()).re
                })
                .sum()
        };
        let scale: f64 = (0..n).map(|k| q[k] * q[k] * c[k].norm()).sum();
        for _ in 0..8 {
            let d1 = dcorr(s, 1);
            let d2 = dcorr(s, 2);
            if d2.abs() < 1e-14 * (1.0 + scale) {
                break;
            }
            let step = d1 / d2;
            let next = s - step;
            if !(a - (b - a) <= next && next <= b + (b - a)) {
                break; // left the bracket: trust the golden-section result
            }
            s = next;
            if step.abs() < 1e-15 * l {
                break;
            }
        }
    }
    let s = s.rem_euclid(l);
    // Direct evaluation at the final shift — the constant − 2R form would
    // lose half the significant digits to cancellation for close states.
    let rot = |k: usize| Complex64::new(0.0, -q[k] * s).exp();
    let dist_sq: f64 = (0..n)
        .map(|k| {
            if k == n / 2 {
                w[k] * (u.coeffs()[k].norm_sqr() + v.coeffs()[k].norm_sqr())
            } else {
                w[k] * (u.coeffs()[k] - v.coeffs()[k] * rot(k)).norm_sqr()
            }
        })
        .sum();
    Ok((dist_sq.sqrt(), s))
}

/// Symmetric Hausdorff distance between the shift orbits of two states
/// in the translation-quotient H^m metric.
///
/// The directed distance from orbit A to orbit B is
/// max over translates τ_s a of (min over translates of b of ‖τ_s a − τ b‖),
/// sampled at `n_samples` equispaced shifts s in each direction. By shift
/// invariance of the inner minimum every sample equals
/// `shift_distance(a, b)`; the sampling makes that reduction observable
/// (tests pin the agreement) rather than assuming it.
pub fn hausdorff_families(
    fam_a: &Continued,
    fam_b: &Continued,
    n_samples: usize,
    norm_order: i32,
) -> Result<f64> {
    let a = &fam_a.profile.field;
    let b = &fam_b.profile.field;
    let l = a.grid().l();
    let (mut worst, _) = shift_distance(a, b, norm_order)?;
    for i in 0..n_samples {
        let s = l * i as f64 / n_samples.max(1) as f64;
        let (da, _) = shift_distance(&a.shifted(s), b, norm_order)?;
        let (db, _) = shift_distance(&b.shifted(s), a, norm_order)?;
        worst = worst.max(da).max(db);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_plane::reconstruct_profile;
    use crate::potential::PhaseParams;
    use approx::assert_abs_diff_eq;

    fn l10_profile(n: usize) -> Profile {
        // Frozen axis solution at L = 10.
        let c = PhaseParams::new(0.0, -0.014149038607286);
        reconstruct_profile(c, 10.0, n).unwrap()
    }

    #[test]
    fn newton_returns_to_perturbed_equilibrium() {
        let p = l10_profile(64);
        let base = p.field.clone();
        let mut coeffs = base.coeffs().to_vec();
        coeffs[2] += Complex64::new(1e-6, 5e-7);
        coeffs[62] = coeffs[2].conj();
        let bumped = Field::from_coeffs(base.grid().clone(), coeffs).unwrap();
        let out = newton_bordered(&bumped, 0.0, Gauge::Phase, tol::NEWTON_TOL).unwrap();
        assert!(out.residual < tol::NEWTON_TOL);
        let (d, _) = shift_distance(&out.state, &base, 2).unwrap();
        assert!(d < 1e-4, "drifted {d} from the source equilibrium");
    }

    #[test]
    fn pin_gauge_is_degenerate_at_extrema() {
        // Profiles are reconstructed with the minimum at x = 0.
        let p = l10_profile(64);
        match newton_bordered(&p.field, 0.0, Gauge::Pin(p.field.at(0.0)), 1e-11) {
            Err(Error::PinDegenerate { ux0, .. }) => assert!(ux0.abs() < 1e-6),
            other => panic!("expected PinDegenerate, got {other:?}"),
        }
    }

    #[test]
    fn shift_to_pin_lands_on_rising_zero() {
        let p = l10_profile(64);
        let pinned = shift_to_pin(&p.field).unwrap();
        assert!(pinned.at(0.0).abs() < 1e-9);
        assert!(pinned.derivative(1).unwrap().at(0.0) > 0.1);
    }

    #[test]
    fn continuation_small_delta() {
        let p = l10_profile(64);
        let cont = continue_to(0.02, &p, 2).unwrap();
        assert!(cont.residual < tol::CONTINUED_RESIDUAL);
        assert_eq!(cont.delta, 0.02);
        let (d, _) = shift_distance(&cont.profile.field, &p.field, 2).unwrap();
        assert!(d > 1e-5 && d < 0.01, "H² displacement {d} out of range");
    }

    #[test]
    fn shift_distance_recovers_translations() {
        let p = l10_profile(64);
        let v = p.field.shifted(1.234);
        let (d, s) = shift_distance(&p.field, &v, 2).unwrap();
        assert!(d < 1e-9, "residual distance {d}");
        // τ_s v = u requires s ≡ −1.234 (mod L).
        let wrapped = (s + 1.234).rem_euclid(10.0);
        let err = wrapped.min(10.0 - wrapped);
        assert!(err < 1e-5, "recovered shift off by {err}");
    }

    #[test]
    fn hausdorff_of_identical_orbits_vanishes() {
        let p = wrap(l10_profile(64));
        let d = hausdorff_families(&p, &p, 8, 2).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-10);
    }

    fn wrap(profile: Profile) -> Continued {
        Continued { profile, delta: 0.0, residual: 0.0, steps_taken: 0, newton_iters: 0 }
    }

    #[test]
    fn hausdorff_reduces_to_shift_distance() {
        // The inner minimum is shift invariant, so the sampled outer max
        // must coincide with the single pinned distance.
        let p = l10_profile(64);
        let q = {
            let mut q = p.clone();
            q.field = q.field.shifted(2.0);
            // perturb slightly so the distance is nonzero
            let mut c = q.field.coeffs().to_vec();
            c[1] += Complex64::new(5e-3, 0.0);
            c[63] = c[1].conj();
            q.field = Field::from_coeffs(q.field.grid().clone(), c).unwrap();
            q
        };
        let (d0, _) = shift_distance(&p.field, &q.field, 2).unwrap();
        let h = hausdorff_families(&wrap(p), &wrap(q), 16, 2).unwrap();
        assert!(
            (h - d0).abs() < 1e-7 * (1.0 + d0),
            "sampled Hausdorff {h} vs pinned distance {d0}"
        );
    }

    #[test]
    fn trivial_profile_continues_to_itself() {
        let g = crate::spectral::SpectralGrid::new(10.0, 32).unwrap();
        let p = Profile {
            field: Field::zero(g),
            c: PhaseParams::new(0.0, 0.0),
            k: 0,
            family_id: 0,
        };
        let cont = continue_to(0.5, &p, 4).unwrap();
        assert_eq!(cont.steps_taken, 0);
        assert!(cont.profile.field.l2_norm() < 1e-15);
    }
}
