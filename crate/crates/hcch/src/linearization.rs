//! Dense Fourier-side linearization about a state and its spectrum.
//!
//! Linearizing u_t = (δ/2)(u²)_x + Δ²(Δu − W'(u)) about u and expanding
//! the perturbation in Fourier modes gives, for coefficients v_k,
//!
//! ```text
//!     v̇_k = Σ_j A_{kj} v_j,
//!     A_{kj} = δ·iq_k·û_{k−j} − q_k⁶ δ_{kj} − q_k⁴ ĝ_{k−j},
//! ```
//!
//! where ĝ are the exact Fourier coefficients of W''(u) = 3u² − 1. The
//! zero mode is dropped (the flow preserves the mean and the mode is
//! decoupled at the linear level on the zero-mean subspace), leaving the
//! N−1 modes k ∈ {−N/2, …, −1} ∪ {1, …, N/2−1}. The Nyquist mode −N/2 is
//! retained with a vanishing convective factor — its odd-derivative image
//! (the sine partner) is not representable on the grid — while the real
//! even symbols q⁴, q⁶ act on it normally. Coefficient bands are read off
//! exact convolutions; offsets beyond the stored support contribute zero.

use ndarray::{Array1, Array2};
use ndarray_linalg::Eig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conv::{conv_offsets, fft_index};
use crate::error::{Error, Result};
use crate::spectral::Field;

/// Band access to the linearized operator entries A(k, j) for one state.
///
/// Shared by the dense assembly here and the bordered Newton systems in
/// the continuation module (same formula, different index sets).
pub(crate) struct OperatorBand {
    uh: Vec<Complex64>,
    /// Coefficients of 3u² − 1, offset-indexed with width n − 2.
    ghat: Vec<Complex64>,
    n: usize,
    q1: f64,
}

impl OperatorBand {
    pub(crate) fn new(u: &Field) -> Self {
        let n = u.grid().n();
        let mut ghat = conv_offsets(u.coeffs(), u.coeffs());
        for z in ghat.iter_mut() {
            *z *= 3.0;
        }
        let width = n - 2;
        ghat[width] -= 1.0; // offset 0 picks up the −1 of W'' = 3u² − 1
        Self {
            uh: u.coeffs().to_vec(),
            ghat,
            n,
            q1: 2.0 * std::f64::consts::PI / u.grid().l(),
        }
    }

    fn uhat_off(&self, m: i64) -> Complex64 {
        let half = (self.n / 2 - 1) as i64;
        if m.abs() > half {
            Complex64::new(0.0, 0.0)
        } else {
            self.uh[fft_index(m, self.n)]
        }
    }

    fn ghat_off(&self, m: i64) -> Complex64 {
        let w = (self.n - 2) as i64;
        if m.abs() > w {
            Complex64::new(0.0, 0.0)
        } else {
            self.ghat[(m + w) as usize]
        }
    }

    /// A(k, j) = δ·iq_k·û_{k−j} − q_k⁶ δ_{kj} − q_k⁴ ĝ_{k−j}, with the
    /// convective iq_k read as zero on the Nyquist row.
    pub(crate) fn entry(&self, k: i64, j: i64, delta: f64) -> Complex64 {
        let qk = self.q1 * k as f64;
        let iq = if k == -(self.n as i64) / 2 { 0.0 } else { qk };
        let m = k - j;
        let mut a = Complex64::new(0.0, delta * iq) * self.uhat_off(m)
            - qk.powi(4) * self.ghat_off(m);
        if k == j {
            a -= qk.powi(6);
        }
        a
    }
}

/// The dense linearization on the zero-mean mode set.
#[derive(Debug, Clone)]
pub struct AssembledOperator {
    /// (N−1) × (N−1), rows and columns ordered as `ks`.
    pub matrix: Array2<Complex64>,
    /// Mode list [−N/2, …, −1, 1, …, N/2−1].
    pub ks: Vec<i64>,
    pub delta: f64,
    pub l: f64,
    pub n: usize,
    /// u_x coefficients in the same basis (translation direction).
    ux: Vec<Complex64>,
}

/// Assemble the linearization about `u` at convective strength `delta`.
pub fn assemble(u: &Field, delta: f64) -> Result<AssembledOperator> {
    u.check_zero_mean()?;
    let n = u.grid().n();
    let band = OperatorBand::new(u);
    let ks: Vec<i64> = (-(n as i64) / 2..0)
        .chain(1..(n as i64) / 2)
        .collect();
    let dim = ks.len();
    let mut matrix = Array2::zeros((dim, dim));
    for (r, &k) in ks.iter().enumerate() {
        for (s, &j) in ks.iter().enumerate() {
            matrix[(r, s)] = band.entry(k, j, delta);
        }
    }
    let ux_field = u.derivative(1)?;
    let ux: Vec<Complex64> = ks
        .iter()
        .map(|&k| ux_field.coeffs()[fft_index(k, n)])
        .collect();
    Ok(AssembledOperator { matrix, ks, delta, l: u.grid().l(), n, ux })
}

/// Eigen-summary of an assembled linearization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub l: f64,
    pub n: usize,
    pub delta: f64,
    pub family_id: i64,
    pub zero_tol: f64,
    /// Eigenvalues sorted by descending real part (ties by imaginary part).
    pub eigenvalues_re: Vec<f64>,
    pub eigenvalues_im: Vec<f64>,
    /// Count of eigenvalues with |λ| < zero_tol.
    pub kernel_dim: usize,
    /// Count of eigenvalues with Re λ > zero_tol.
    pub n_unstable: usize,
    /// |⟨v₀, û_x⟩| / (‖v₀‖‖û_x‖) for the eigenvector v₀ of smallest |λ|;
    /// `None` when the state has no translation direction (trivial state).
    pub kernel_alignment: Option<f64>,
}

/// Full eigen-decomposition of the operator with kernel bookkeeping.
///
/// `zero_tol` is an absolute threshold separating the numerical kernel
/// from the physical spectrum; [`tol::ZERO_TOL`] is the tuned default.
pub fn spectrum(op: &AssembledOperator, zero_tol: f64, family_id: i64) -> Result<SpectrumReport> {
    let (vals, vecs): (Array1<Complex64>, Array2<Complex64>) = op
        .matrix
        .eig()
        .map_err(|e| Error::Eigen(format!("eigen-decomposition failed: {e}")))?;

    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| {
        (vals[b].re, vals[b].im)
            .partial_cmp(&(vals[a].re, vals[a].im))
            .unwrap()
    });
    let eigenvalues_re: Vec<f64> = order.iter().map(|&i| vals[i].re).collect();
    let eigenvalues_im: Vec<f64> = order.iter().map(|&i| vals[i].im).collect();

    let kernel_dim = vals.iter().filter(|z| z.norm() < zero_tol).count();
    let n_unstable = vals.iter().filter(|z| z.re > zero_tol).count();

    let i0 = (0..vals.len())
        .min_by(|&a, &b| vals[a].norm().partial_cmp(&vals[b].norm()).unwrap())
        .expect("nonempty spectrum");
    let v0 = vecs.column(i0);
    let ux_norm: f64 = op.ux.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let kernel_alignment = if ux_norm < 1e-300 {
        None
    } else {
        let v0_norm: f64 = v0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let inner: Complex64 = v0
            .iter()
            .zip(op.ux.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        Some(inner.norm() / (v0_norm * ux_norm))
    };

    Ok(SpectrumReport {
        l: op.l,
        n: op.n,
        delta: op.delta,
        family_id,
        zero_tol,
        eigenvalues_re,
        eigenvalues_im,
        kernel_dim,
        n_unstable,
        kernel_alignment,
    })
}

/// Largest |Im λ| in a report — a consistency probe, since the δ = 0
/// operator is similar to a self-adjoint one and must have a real
/// spectrum up to roundoff.
pub fn max_imag(report: &SpectrumReport) -> f64 {
    report
        .eigenvalues_im
        .iter()
        .fold(0.0f64, |m, &v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;
    use crate::tol;
    use approx::assert_abs_diff_eq;

    fn grid(l: f64, n: usize) -> std::sync::Arc<SpectralGrid> {
        SpectralGrid::new(l, n).unwrap()
    }

    #[test]
    fn trivial_state_is_diagonal_with_symbol() {
        // About u ≡ 0: ĝ = −δ offset, so A = diag(−q⁶ + q⁴).
        let g = grid(10.0, 64);
        let u = Field::zero(g.clone());
        let op = assemble(&u, 0.7).unwrap();
        for (r, &k) in op.ks.iter().enumerate() {
            for (s, _) in op.ks.iter().enumerate() {
                let a = op.matrix[(r, s)];
                if r == s {
                    let q = 2.0 * std::f64::consts::PI / 10.0 * k as f64;
                    assert_abs_diff_eq!(a.re, -q.powi(6) + q.powi(4), epsilon = 1e-12);
                    assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);
                } else {
                    assert_eq!(a, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn trivial_spectrum_l10() {
        // Frozen: at L = 10 the trivial state has exactly one unstable
        // pair, λ(±1) = q⁴ − q⁶ = +0.0943…, and an empty kernel.
        let g = grid(10.0, 64);
        let u = Field::zero(g);
        let op = assemble(&u, 0.0).unwrap();
        let rep = spectrum(&op, tol::ZERO_TOL, 0).unwrap();
        assert_eq!(rep.n_unstable, 2);
        assert_eq!(rep.kernel_dim, 0);
        assert!(rep.kernel_alignment.is_none());
        let q = 2.0 * std::f64::consts::PI / 10.0;
        let lambda = q.powi(4) - q.powi(6);
        assert!(lambda > 0.094 && lambda < 0.095);
        assert_abs_diff_eq!(rep.eigenvalues_re[0], lambda, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.eigenvalues_re[1], lambda, epsilon = 1e-12);
        assert!(max_imag(&rep) < 1e-12);
    }

    #[test]
    fn coupling_entries_match_hand_formula() {
        // u = a sin(q₁x): 3u² − 1 has ĝ₀ = 3a²/2 − 1, ĝ_{±2} = −3a²/4,
        // û_{±1} = ∓ia/2.
        let l = 10.0;
        let n = 32;
        let g = grid(l, n);
        let a = 0.1;
        let q1 = 2.0 * std::f64::consts::PI / l;
        let vals: Vec<f64> = (0..n).map(|j| a * (q1 * g.x(j)).sin()).collect();
        let u = Field::from_values(g, vals).unwrap();
        let op = assemble(&u, 1.0).unwrap();
        let idx = |k: i64| op.ks.iter().position(|&m| m == k).unwrap();

        // A(1,3) = −q₁⁴ ĝ_{−2} = q₁⁴·(3a²/4).
        let a13 = op.matrix[(idx(1), idx(3))];
        assert_abs_diff_eq!(a13.re, q1.powi(4) * 0.75 * a * a, epsilon = 1e-12);
        assert_abs_diff_eq!(a13.im, 0.0, epsilon = 1e-12);

        // A(1,2) = δ·iq₁·û_{−1} = iq₁·(ia/2) = −q₁ a/2.
        let a12 = op.matrix[(idx(1), idx(2))];
        assert_abs_diff_eq!(a12.re, -q1 * a / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a12.im, 0.0, epsilon = 1e-12);

        // Nyquist row: convective factor suppressed, diagonal real.
        let rny = idx(-(n as i64) / 2);
        let qny = q1 * (n as f64) / 2.0;
        let any = op.matrix[(rny, rny)];
        assert_abs_diff_eq!(
            any.re,
            -qny.powi(6) - qny.powi(4) * (3.0 * a * a / 2.0 - 1.0),
            epsilon = 1e-10
        );
        // The ~1e−17 Hermitian roundoff of the forward FFT is amplified
        // by q⁴ ≈ 10⁴ on the Nyquist row.
        assert_abs_diff_eq!(any.im, 0.0, epsilon = 1e-11);
    }

    #[test]
    fn report_roundtrips_through_json() {
        let g = grid(10.0, 32);
        let op = assemble(&Field::zero(g), 0.0).unwrap();
        let rep = spectrum(&op, tol::ZERO_TOL, 0).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: SpectrumReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.n_unstable, rep.n_unstable);
        assert_eq!(back.eigenvalues_re.len(), rep.eigenvalues_re.len());
        assert!(text.contains("\"kernel_alignment\":null"));
    }
}
