//! Unitary discrete sine transform (DST-I) for complex vectors.
//!
//! The sine basis sampled on the interior grid `x_j = jL/(N+1)`,
//! `j = 1..N`, forms the involutory orthogonal matrix
//! `U_kj = √(2/(N+1)) sin[(k+1)(j+1)π/(N+1)]`, which maps basis coefficients
//! to (scaled) grid samples and back. The split-operator propagator applies it
//! twice per step, so it is computed through a length-`2(N+1)` complex FFT of
//! the odd extension rather than by the O(N²) matrix product.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Planned unitary DST-I of a fixed size.
pub struct DstPlan {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    buffer: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl DstPlan {
    pub fn new(n: usize) -> Self {
        let m = 2 * (n + 1);
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Self { n, fft, buffer: vec![Complex64::new(0.0, 0.0); m], scratch }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Applies the unitary transform in place. The transform is an
    /// involution: applying it twice returns the input.
    pub fn apply(&mut self, v: &mut [Complex64]) {
        assert_eq!(v.len(), self.n);
        let n = self.n;
        let m = 2 * (n + 1);
        // Odd extension: [0, v, 0, -reverse(v)].
        self.buffer[0] = Complex64::new(0.0, 0.0);
        self.buffer[n + 1] = Complex64::new(0.0, 0.0);
        for j in 0..n {
            self.buffer[j + 1] = v[j];
            self.buffer[m - 1 - j] = -v[j];
        }
        self.fft.process_with_scratch(&mut self.buffer, &mut self.scratch);
        // FFT of the odd extension gives Y_k = −2i Σ v_j sin(π(j+1)(k)/(N+1)),
        // so the sine sum is i·Y/2; the √(2/(N+1)) factor makes it unitary.
        let scale = (2.0 / (n + 1) as f64).sqrt() * 0.5;
        for k in 0..n {
            let y = self.buffer[k + 1];
            v[k] = Complex64::new(-y.im, y.re) * scale;
        }
    }
}
