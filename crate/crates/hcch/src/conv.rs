//! Exact truncated convolutions of Fourier coefficient vectors.
//!
//! A zero-mean state on an N-point grid is a trigonometric polynomial with
//! modes |k| ≤ N/2 − 1. Its square and cube are polynomials of degree
//! 2(N/2−1) and 3(N/2−1); the first N/2−1 modes of those products can be
//! computed *exactly* by direct convolution of the coefficient sequences —
//! no grid, no aliasing, no padding heuristics. The steady-state residual
//! G(δ,u), its Jacobian, and the public PDE right-hand side all go through
//! these routines, which is what lets Newton polish residuals down to
//! ~1e−15 instead of stalling on the ~1e−5 aliasing floor a collocation
//! product would impose.
//!
//! Cost is O(N²) per product — irrelevant at N ≤ 512 for per-solve use.
//! (The time stepper, which evaluates millions of nonlinearities, uses the
//! padded-FFT product from [`crate::spectral`] instead; the two agree to
//! roundoff for states whose spectrum has decayed by |k| ≈ N/3.)
//!
//! Layout: inputs and outputs are length-N vectors in standard FFT order
//! (k = 0..N/2−1 then −N/2..−1); the Nyquist slot is ignored on input and
//! zero on output. [`conv_offsets`] returns the *full* product support as
//! an offset-indexed vector for Toeplitz assembly of multiplication
//! operators.

use num_complex::Complex64;

/// Index of mode k in a length-n FFT-layout vector.
#[inline]
pub fn fft_index(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Full linear convolution of the mode sequences of `a` and `b`
/// (both FFT layout, support |k| ≤ n/2 − 1), returned as a vector indexed
/// by offset: entry `[m + (n − 2)]` is the coefficient of mode m, for
/// m ∈ [−(n−2), n−2].
pub fn conv_offsets(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let half = n / 2 - 1; // largest retained mode
    let width = 2 * half; // largest output offset magnitude
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * width + 1];
    for j in -(half as i64)..=(half as i64) {
        let aj = a[fft_index(j, n)];
        if aj.norm_sqr() == 0.0 {
            continue;
        }
        for l in -(half as i64)..=(half as i64) {
            let bl = b[fft_index(l, n)];
            out[(j + l + width as i64) as usize] += aj * bl;
        }
    }
    out
}

/// Exact coefficients of the product a·b, truncated to the retained band
/// |k| ≤ n/2 − 1, in FFT layout (zero mode kept; Nyquist zero).
pub fn conv_trunc(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let half = n / 2 - 1;
    let full = conv_offsets(a, b);
    let width = 2 * half;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for m in -(half as i64)..=(half as i64) {
        out[fft_index(m, n)] = full[(m + width as i64) as usize];
    }
    out
}

/// Exact coefficients of the cube a³, truncated to |k| ≤ n/2 − 1.
///
/// The intermediate square is kept at its full support 2(n/2 − 1) before
/// the final convolution — truncating it early would discard pairs of
/// high modes whose sum folds back into the retained band.
pub fn conv_cube_trunc(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let half = (n / 2 - 1) as i64;
    let sq = conv_offsets(a, a); // offsets −2·half ..= 2·half
    let w2 = 2 * half;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for m in -half..=half {
        let mut s = Complex64::new(0.0, 0.0);
        // m = (square offset p) + (mode l of a)
        for l in -half..=half {
            let p = m - l;
            if p.abs() <= w2 {
                s += sq[(p + w2) as usize] * a[fft_index(l, n)];
            }
        }
        out[fft_index(m, n)] = s;
    }
    out
}
