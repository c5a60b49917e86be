//! Collocation transforms between Fourier coefficients and equispaced
//! samples at x_p = 2πp/P, used by the pseudospectral time steppers.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::FourierError;
use crate::fourier::FourierSeries;

/// FFT pair for a fixed number of collocation points.
pub struct SpectralGrid {
    points: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl SpectralGrid {
    pub fn new(points: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            points,
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Sample positions 2πp/P.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points)
            .map(|p| std::f64::consts::TAU * p as f64 / self.points as f64)
            .collect()
    }

    /// Coefficients -> samples. Frequencies beyond the grid Nyquist band
    /// must be absent; callers keep P > 2N to stay exact.
    pub fn synthesize(&self, f: &FourierSeries<f64>) -> Vec<Complex64> {
        let p = self.points;
        let mut buf = vec![Complex64::new(0.0, 0.0); p];
        for (j, c) in f.iter() {
            let slot = j.rem_euclid(p as i64) as usize;
            buf[slot] += c;
        }
        // unnormalized inverse FFT computes Σ_k s_k e^{+2πi kp/P}
        self.inverse.process(&mut buf);
        buf
    }

    /// Samples -> coefficients up to `max_freq`.
    pub fn analyze(&self, samples: &[Complex64], max_freq: i64) -> Result<FourierSeries<f64>, FourierError> {
        let p = self.points;
        let required = (2 * max_freq + 1) as usize;
        if p < required {
            return Err(FourierError::ResolutionTooLow {
                max_freq,
                required,
                requested: p,
            });
        }
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / p as f64;
        let coeffs = (-max_freq..=max_freq)
            .map(|j| buf[j.rem_euclid(p as i64) as usize] * scale)
            .collect();
        FourierSeries::new(max_freq, coeffs)
    }
}

/// One-shot coefficient-to-sample transform.
pub fn to_grid(f: &FourierSeries<f64>, points: usize) -> Vec<Complex64> {
    SpectralGrid::new(points).synthesize(f)
}

/// One-shot sample-to-coefficient transform; errors when the grid cannot
/// resolve the requested bandwidth.
pub fn from_grid(samples: &[Complex64], max_freq: i64) -> Result<FourierSeries<f64>, FourierError> {
    SpectralGrid::new(samples.len()).analyze(samples, max_freq)
}
