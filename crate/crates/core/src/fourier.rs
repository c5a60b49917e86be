//! Truncated Fourier series on the circle of period 2π.
//!
//! A `FourierSeries` stores complex coefficients c_j for j = -N..N and
//! represents x ↦ Σ_j c_j e^{ijx}. Both the vector fields on the circle and
//! the densities in the regular dual live in this type; only trig polynomials
//! are representable. Values are immutable after construction.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::FourierError;
use crate::scalar::{abs_f64, c_re, derivative_symbol, Scalar, C};

/// Tolerance used to detect conjugate symmetry in floating-point mode.
const REAL_DETECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries<S: Scalar> {
    max_freq: i64,
    coeffs: Vec<C<S>>,
    real: bool,
}

impl<S: Scalar> FourierSeries<S> {
    /// Build a series from the coefficient vector ordered j = -N..N.
    pub fn new(max_freq: i64, coeffs: Vec<C<S>>) -> Result<Self, FourierError> {
        if max_freq < 0 {
            return Err(FourierError::NegativeMaxFreq(max_freq));
        }
        let expected = (2 * max_freq + 1) as usize;
        if coeffs.len() != expected {
            return Err(FourierError::CoefficientCount {
                max_freq,
                expected,
                got: coeffs.len(),
            });
        }
        let real = detect_real(max_freq, &coeffs);
        Ok(Self {
            max_freq,
            coeffs,
            real,
        })
    }

    pub fn zero(max_freq: i64) -> Self {
        let coeffs = vec![C::<S>::zero(); (2 * max_freq.max(0) + 1) as usize];
        Self {
            max_freq: max_freq.max(0),
            coeffs,
            real: true,
        }
    }

    pub fn constant(value: S) -> Self {
        Self::new(0, vec![c_re(value)]).expect("single coefficient")
    }

    /// The exponential `amplitude * e^{i freq x}`.
    pub fn exponential(freq: i64, amplitude: C<S>) -> Self {
        let n = freq.abs();
        let mut coeffs = vec![C::<S>::zero(); (2 * n + 1) as usize];
        coeffs[(freq + n) as usize] = amplitude;
        Self::new(n, coeffs).expect("sized above")
    }

    /// `amplitude * cos(freq x)`.
    pub fn cosine(freq: i64, amplitude: S) -> Self {
        if freq == 0 {
            return Self::constant(amplitude);
        }
        let half = amplitude / S::from_int(2);
        let n = freq.abs();
        let mut coeffs = vec![C::<S>::zero(); (2 * n + 1) as usize];
        coeffs[(freq + n) as usize] = c_re(half.clone());
        coeffs[(-freq + n) as usize] = c_re(half);
        Self::new(n, coeffs).expect("sized above")
    }

    /// `amplitude * sin(freq x)`.
    pub fn sine(freq: i64, amplitude: S) -> Self {
        if freq == 0 {
            return Self::zero(0);
        }
        let half = amplitude / S::from_int(2);
        let n = freq.abs();
        let mut coeffs = vec![C::<S>::zero(); (2 * n + 1) as usize];
        coeffs[(freq + n) as usize] = Complex::new(S::zero(), -half.clone());
        coeffs[(-freq + n) as usize] = Complex::new(S::zero(), half);
        Self::new(n, coeffs).expect("sized above")
    }

    pub fn max_freq(&self) -> i64 {
        self.max_freq
    }

    /// Coefficient at frequency `j`; zero outside the stored band.
    pub fn coeff(&self, j: i64) -> C<S> {
        if j.abs() > self.max_freq {
            C::<S>::zero()
        } else {
            self.coeffs[(j + self.max_freq) as usize].clone()
        }
    }

    /// Iterate `(frequency, coefficient)` pairs over the stored band.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &C<S>)> {
        let n = self.max_freq;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - n, c))
    }

    /// True when the coefficients are conjugate-symmetric, i.e. the series
    /// takes real values on the circle.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.max_freq.max(other.max_freq);
        let coeffs = (-n..=n).map(|j| self.coeff(j) + other.coeff(j)).collect();
        Self::new(n, coeffs).expect("sized above")
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.max_freq.max(other.max_freq);
        let coeffs = (-n..=n).map(|j| self.coeff(j) - other.coeff(j)).collect();
        Self::new(n, coeffs).expect("sized above")
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c.clone()).collect();
        Self {
            max_freq: self.max_freq,
            coeffs,
            real: self.real,
        }
    }

    pub fn scale(&self, factor: &C<S>) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect();
        Self::new(self.max_freq, coeffs).expect("same size")
    }

    pub fn scale_real(&self, factor: &S) -> Self {
        let f = c_re(factor.clone());
        let coeffs = self.coeffs.iter().map(|c| c.clone() * f.clone()).collect();
        Self {
            max_freq: self.max_freq,
            coeffs,
            real: self.real,
        }
    }

    /// Pointwise product, truncated to `|j| <= out_max_freq`. Exact when
    /// `out_max_freq >= N_f + N_g`.
    pub fn multiply(&self, other: &Self, out_max_freq: i64) -> Self {
        let n = out_max_freq.max(0);
        let mut coeffs = vec![C::<S>::zero(); (2 * n + 1) as usize];
        for (p, a) in self.iter() {
            if a.is_zero() {
                continue;
            }
            let lo = (-n - p).max(-other.max_freq);
            let hi = (n - p).min(other.max_freq);
            for q in lo..=hi {
                let b = other.coeff(q);
                if b.is_zero() {
                    continue;
                }
                let idx = (p + q + n) as usize;
                coeffs[idx] = coeffs[idx].clone() + a.clone() * b;
            }
        }
        let real = self.real && other.real;
        let mut out = Self::new(n, coeffs).expect("sized above");
        // conjugate symmetry of a convolution of symmetric inputs is exact
        out.real = real || out.real;
        out
    }

    /// Pointwise product at full bandwidth `N_f + N_g` (no truncation).
    pub fn product(&self, other: &Self) -> Self {
        self.multiply(other, self.max_freq + other.max_freq)
    }

    /// Derivative of the given order: c_j ↦ (i j)^order c_j.
    pub fn derivative(&self, order: u32) -> Self {
        let coeffs = self
            .iter()
            .map(|(j, c)| c.clone() * derivative_symbol::<S>(j, order))
            .collect();
        let mut out = Self::new(self.max_freq, coeffs).expect("same size");
        out.real = self.real || out.real;
        out
    }

    /// Apply a Fourier multiplier `c_j ↦ symbol(j) c_j`.
    pub fn apply_symbol(&self, symbol: impl Fn(i64) -> C<S>) -> Self {
        let coeffs = self.iter().map(|(j, c)| c.clone() * symbol(j)).collect();
        Self::new(self.max_freq, coeffs).expect("same size")
    }

    /// Complex-bilinear L² pairing `∫ fg dx = 2π Σ_j c_j(f) c_{-j}(g)`.
    ///
    /// No conjugation: the pairing is bilinear, not hermitian.
    pub fn l2_pair(&self, other: &Self) -> C<S> {
        self.l2_pair_normalized(other) * c_re(S::tau())
    }

    /// The pairing with the 2π factor divided out: `Σ_j c_j(f) c_{-j}(g)`.
    pub fn l2_pair_normalized(&self, other: &Self) -> C<S> {
        let n = self.max_freq.min(other.max_freq);
        let mut acc = C::<S>::zero();
        for j in -n..=n {
            let a = self.coeff(j);
            if a.is_zero() {
                continue;
            }
            acc = acc + a * other.coeff(-j);
        }
        acc
    }

    /// `∫ f dx` over the circle (= 2π c_0).
    pub fn integral(&self) -> C<S> {
        self.coeff(0) * c_re(S::tau())
    }

    /// Re-band the series to `new_max_freq`, zero-padding or truncating.
    pub fn truncated(&self, new_max_freq: i64) -> Self {
        let n = new_max_freq.max(0);
        let coeffs = (-n..=n).map(|j| self.coeff(j)).collect();
        Self::new(n, coeffs).expect("sized above")
    }

    /// Drop trailing zero frequencies (never below bandwidth 0).
    pub fn compacted(&self) -> Self {
        let mut n = self.max_freq;
        while n > 0 && self.coeff(n).is_zero() && self.coeff(-n).is_zero() {
            n -= 1;
        }
        self.truncated(n)
    }

    /// Evaluate `Σ_j c_j e^{ijx}` at a point (floating-point).
    pub fn evaluate(&self, x: f64) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (j, c) in self.iter() {
            let phase = Complex::from_polar(1.0, j as f64 * x);
            acc += Complex::new(c.re.as_f64(), c.im.as_f64()) * phase;
        }
        acc
    }

    /// Largest coefficient magnitude, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(abs_f64).fold(0.0, f64::max)
    }

    /// Largest coefficient difference `max_j |c_j(self) - c_j(other)|` as `f64`.
    pub fn distance_max(&self, other: &Self) -> f64 {
        let n = self.max_freq.max(other.max_freq);
        (-n..=n)
            .map(|j| abs_f64(&(self.coeff(j) - other.coeff(j))))
            .fold(0.0, f64::max)
    }

    /// Convert coefficients to `f64` (for reports and plotting).
    pub fn as_f64(&self) -> FourierSeries<f64> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Complex::new(c.re.as_f64(), c.im.as_f64()))
            .collect();
        FourierSeries::new(self.max_freq, coeffs).expect("same size")
    }
}

fn detect_real<S: Scalar>(max_freq: i64, coeffs: &[C<S>]) -> bool {
    let scale = coeffs.iter().map(abs_f64).fold(0.0, f64::max);
    for j in 0..=max_freq {
        let a = &coeffs[(j + max_freq) as usize];
        let b = &coeffs[(-j + max_freq) as usize];
        let diff = a.clone() - b.clone().conj();
        if S::EXACT {
            if !diff.is_zero() {
                return false;
            }
        } else if abs_f64(&diff) > REAL_DETECT_TOL * (1.0 + scale) {
            return false;
        }
    }
    true
}

/// JSON form of a floating-point series: `{"N": n, "coeffs": [[re, im], ...]}`
/// with coefficients ordered j = -N..N.
#[derive(Debug, Serialize, Deserialize)]
pub struct FourierSeriesJson {
    #[serde(rename = "N")]
    pub n: i64,
    pub coeffs: Vec<[f64; 2]>,
}

impl FourierSeries<f64> {
    pub fn to_json(&self) -> FourierSeriesJson {
        FourierSeriesJson {
            n: self.max_freq,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn from_json(json: &FourierSeriesJson) -> Result<Self, FourierError> {
        let coeffs = json.coeffs.iter().map(|&[re, im]| Complex::new(re, im)).collect();
        Self::new(json.n, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Quadrature oracle: recover coefficient j of a pointwise function by
    /// trapezoidal integration of f(x) e^{-ijx} / 2π, spectrally exact for
    /// trig polynomials once the grid resolves all frequencies.
    fn coeff_by_quadrature(f: impl Fn(f64) -> Complex64, j: i64, points: usize) -> Complex64 {
        let mut acc = c64(0.0, 0.0);
        for p in 0..points {
            let x = std::f64::consts::TAU * p as f64 / points as f64;
            acc += f(x) * Complex64::from_polar(1.0, -(j as f64) * x);
        }
        acc / points as f64
    }

    #[test]
    fn constructor_rejects_wrong_length() {
        let err = FourierSeries::<f64>::new(1, vec![c64(1.0, 0.0)]).unwrap_err();
        assert_eq!(
            err,
            FourierError::CoefficientCount {
                max_freq: 1,
                expected: 3,
                got: 1
            }
        );
    }

    #[test]
    fn multiply_unit_is_identity() {
        let one = FourierSeries::<f64>::constant(1.0);
        let prod = one.multiply(&one, 0);
        assert_eq!(prod.coeff(0), c64(1.0, 0.0));
    }

    #[test]
    fn multiply_cosines_gives_product_to_sum() {
        // cos x * cos x = 1/2 + 1/2 cos 2x; frozen from the quadrature oracle.
        let cosx = FourierSeries::<f64>::cosine(1, 1.0);
        let sq = cosx.product(&cosx);
        for j in -2..=2 {
            let oracle = coeff_by_quadrature(|x| c64(x.cos() * x.cos(), 0.0), j, 64);
            assert_relative_eq!(sq.coeff(j).re, oracle.re, epsilon = 1e-13);
            assert_relative_eq!(sq.coeff(j).im, oracle.im, epsilon = 1e-13);
        }
        assert_relative_eq!(sq.coeff(0).re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(sq.coeff(2).re, 0.25, epsilon = 1e-15);
        assert_relative_eq!(sq.coeff(-2).re, 0.25, epsilon = 1e-15);
        assert!(sq.is_real());
    }

    #[test]
    fn multiply_exponentials_adds_frequencies() {
        let e1 = FourierSeries::<f64>::exponential(1, c64(1.0, 0.0));
        let e2 = FourierSeries::<f64>::exponential(2, c64(1.0, 0.0));
        let prod = e1.product(&e2);
        assert_eq!(prod.coeff(3), c64(1.0, 0.0));
        assert!(prod.coeff(1).is_zero() && prod.coeff(2).is_zero());
    }

    #[test]
    fn multiply_truncation_drops_high_modes() {
        let e1 = FourierSeries::<f64>::exponential(1, c64(1.0, 0.0));
        let e2 = FourierSeries::<f64>::exponential(2, c64(1.0, 0.0));
        let truncated = e1.multiply(&e2, 2);
        assert!(truncated.is_zero());
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let sinx = FourierSeries::<f64>::sine(1, 1.0);
        let cosx = FourierSeries::<f64>::cosine(1, 1.0);
        assert!(sinx.derivative(1).distance_max(&cosx) < 1e-15);
    }

    #[test]
    fn third_derivative_of_second_harmonic() {
        // (e^{2ix})''' = (2i)^3 e^{2ix} = -8i e^{2ix}
        let e2 = FourierSeries::<f64>::exponential(2, c64(1.0, 0.0));
        let d3 = e2.derivative(3);
        assert_eq!(d3.coeff(2), c64(0.0, -8.0));
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let five = FourierSeries::<f64>::constant(5.0);
        assert!(five.derivative(1).is_zero());
    }

    #[test]
    fn derivative_preserves_realness() {
        let m = FourierSeries::<f64>::cosine(3, 2.0).add(&FourierSeries::sine(1, -0.5));
        assert!(m.is_real());
        assert!(m.derivative(1).is_real());
    }

    #[test]
    fn l2_pair_selects_cancelling_frequencies() {
        let ep = FourierSeries::<f64>::exponential(1, c64(1.0, 0.0));
        let em = FourierSeries::<f64>::exponential(-1, c64(1.0, 0.0));
        // <e^{ix}, e^{-ix}> = 2π; <e^{ix}, e^{ix}> = 0 (bilinear, not hermitian)
        assert_relative_eq!(ep.l2_pair(&em).re, std::f64::consts::TAU, epsilon = 1e-14);
        assert!(ep.l2_pair(&ep).is_zero());
    }

    #[test]
    fn l2_pair_of_cosines_is_pi() {
        let cosx = FourierSeries::<f64>::cosine(1, 1.0);
        let oracle = {
            // trapezoid quadrature of ∫ cos² over the circle
            let pts = 256;
            (0..pts)
                .map(|p| {
                    let x = std::f64::consts::TAU * p as f64 / pts as f64;
                    x.cos() * x.cos()
                })
                .sum::<f64>()
                * std::f64::consts::TAU
                / pts as f64
        };
        assert_relative_eq!(oracle, std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(cosx.l2_pair(&cosx).re, oracle, epsilon = 1e-12);
    }

    #[test]
    fn l2_pair_is_exactly_symmetric_in_rational_mode() {
        let f = FourierSeries::<Rat>::sine(2, Rat::from_ratio(3, 7))
            .add(&FourierSeries::cosine(1, Rat::from_ratio(-1, 3)));
        let g = FourierSeries::<Rat>::cosine(2, Rat::from_ratio(5, 11))
            .add(&FourierSeries::constant(Rat::from_int(2)));
        assert_eq!(f.l2_pair(&g), g.l2_pair(&f));
    }

    #[test]
    fn rational_product_is_exact() {
        // cos x * cos x = 1/2 + 1/2 cos 2x with exact rational coefficients
        let cosx = FourierSeries::<Rat>::cosine(1, Rat::from_int(1));
        let sq = cosx.product(&cosx);
        assert_eq!(sq.coeff(0).re, Rat::from_ratio(1, 2));
        assert_eq!(sq.coeff(2).re, Rat::from_ratio(1, 4));
        assert!(sq.coeff(1).is_zero());
    }

    #[test]
    fn evaluation_matches_definition() {
        let f = FourierSeries::<f64>::cosine(2, 1.5).add(&FourierSeries::sine(1, 0.25));
        let x: f64 = 0.8;
        let direct = 1.5 * (2.0 * x).cos() + 0.25 * x.sin();
        assert_relative_eq!(f.evaluate(x).re, direct, epsilon = 1e-14);
        assert!(f.evaluate(x).im.abs() < 1e-14);
    }

    #[test]
    fn json_round_trip_preserves_schema() {
        let f = FourierSeries::<f64>::sine(2, 0.3).add(&FourierSeries::constant(1.0));
        let json = serde_json::to_string(&f.to_json()).unwrap();
        assert!(json.starts_with("{\"N\":2,\"coeffs\":[["));
        let back: FourierSeriesJson = serde_json::from_str(&json).unwrap();
        let g = FourierSeries::from_json(&back).unwrap();
        assert!(f.distance_max(&g) == 0.0);
    }
}
