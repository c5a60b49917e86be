//! Dense matrices for linear operators on the truncated exponential basis
//! e^{ijx}, |j| <= N, together with the adjoint for the complex-bilinear
//! L² pairing and symmetry diagnostics.
//!
//! Entry `[j, l]` is the coefficient of e^{ijx} in Op(e^{ilx}). Products of
//! the stored band with a multiplication operator are truncated at |j| = N;
//! callers pick N large enough that truncation cannot reach the entries they
//! compare against closed forms.

use num_traits::{One, Zero};

use crate::error::OperatorError;
use crate::fourier::FourierSeries;
use crate::scalar::{abs_f64, derivative_symbol, Scalar, C};

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<S: Scalar> {
    max_freq: i64,
    size: usize,
    entries: Vec<C<S>>, // row-major, (2N+1) x (2N+1)
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zero(max_freq: i64) -> Self {
        let size = (2 * max_freq.max(0) + 1) as usize;
        Self {
            max_freq: max_freq.max(0),
            size,
            entries: vec![C::<S>::zero(); size * size],
        }
    }

    pub fn identity(max_freq: i64) -> Self {
        let mut out = Self::zero(max_freq);
        for i in 0..out.size {
            let idx = i * out.size + i;
            out.entries[idx] = C::<S>::one();
        }
        out
    }

    pub fn max_freq(&self) -> i64 {
        self.max_freq
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn idx(&self, row_freq: i64, col_freq: i64) -> usize {
        let r = (row_freq + self.max_freq) as usize;
        let c = (col_freq + self.max_freq) as usize;
        r * self.size + c
    }

    pub fn entry(&self, row_freq: i64, col_freq: i64) -> &C<S> {
        &self.entries[self.idx(row_freq, col_freq)]
    }

    pub fn set_entry(&mut self, row_freq: i64, col_freq: i64, value: C<S>) {
        let idx = self.idx(row_freq, col_freq);
        self.entries[idx] = value;
    }

    /// Diagonal operator from a Fourier-multiplier symbol.
    pub fn fourier_multiplier(max_freq: i64, symbol: impl Fn(i64) -> C<S>) -> Self {
        let mut out = Self::zero(max_freq);
        for j in -max_freq..=max_freq {
            let idx = out.idx(j, j);
            out.entries[idx] = symbol(j);
        }
        out
    }

    /// Diagonal operator with symbol `1/symbol(j)`; errors on a vanishing value.
    pub fn inverse_fourier_multiplier(
        max_freq: i64,
        symbol: impl Fn(i64) -> C<S>,
    ) -> Result<Self, OperatorError> {
        let mut out = Self::zero(max_freq);
        for j in -max_freq..=max_freq {
            let s = symbol(j);
            if s.is_zero() {
                return Err(OperatorError::ZeroSymbol { freq: j });
            }
            let idx = out.idx(j, j);
            out.entries[idx] = C::<S>::one() / s;
        }
        Ok(out)
    }

    /// The derivative operator D^order with symbol (ij)^order.
    pub fn derivative(max_freq: i64, order: u32) -> Self {
        Self::fourier_multiplier(max_freq, |j| derivative_symbol(j, order))
    }

    /// Multiplication by a fixed series: the Toeplitz matrix `[j, l] = c_{j-l}(m)`.
    pub fn multiplication(m: &FourierSeries<S>, max_freq: i64) -> Self {
        let mut out = Self::zero(max_freq);
        for j in -max_freq..=max_freq {
            for l in -max_freq..=max_freq {
                let c = m.coeff(j - l);
                if !c.is_zero() {
                    let idx = out.idx(j, l);
                    out.entries[idx] = c;
                }
            }
        }
        out
    }

    /// `self ∘ diag(symbol)`: scales column l by symbol(l). O(N²).
    pub fn scale_columns(&self, symbol: impl Fn(i64) -> C<S>) -> Self {
        let mut out = self.clone();
        for l in -self.max_freq..=self.max_freq {
            let s = symbol(l);
            for j in -self.max_freq..=self.max_freq {
                let idx = out.idx(j, l);
                out.entries[idx] = out.entries[idx].clone() * s.clone();
            }
        }
        out
    }

    /// `diag(symbol) ∘ self`: scales row j by symbol(j). O(N²).
    pub fn scale_rows(&self, symbol: impl Fn(i64) -> C<S>) -> Self {
        let mut out = self.clone();
        for j in -self.max_freq..=self.max_freq {
            let s = symbol(j);
            for l in -self.max_freq..=self.max_freq {
                let idx = out.idx(j, l);
                out.entries[idx] = out.entries[idx].clone() * s.clone();
            }
        }
        out
    }

    pub fn scale(&self, factor: &C<S>) -> Self {
        let entries = self.entries.iter().map(|e| e.clone() * factor.clone()).collect();
        Self {
            max_freq: self.max_freq,
            size: self.size,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, OperatorError> {
        self.check_size(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            max_freq: self.max_freq,
            size: self.size,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OperatorError> {
        self.check_size(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self {
            max_freq: self.max_freq,
            size: self.size,
            entries,
        })
    }

    /// Linear combination Σ scalar_i * op_i.
    pub fn combine(parts: &[(C<S>, &Self)]) -> Result<Self, OperatorError> {
        let first = parts.first().ok_or(OperatorError::EmptyCombination)?;
        let mut acc = first.1.scale(&first.0);
        for (s, op) in &parts[1..] {
            acc = acc.add(&op.scale(s))?;
        }
        Ok(acc)
    }

    /// Matrix product: `compose(A, B)` acts as A after B. O(N³).
    pub fn compose(&self, rhs: &Self) -> Result<Self, OperatorError> {
        self.check_size(rhs)?;
        let n = self.size;
        let mut out = Self::zero(self.max_freq);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k].clone();
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &rhs.entries[k * n + c];
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[r * n + c] = out.entries[r * n + c].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Adjoint for the complex-bilinear pairing: `P*[j, l] = P[-l, -j]`,
    /// characterized by `<P f, g> = <f, P* g>`.
    pub fn bilinear_adjoint(&self) -> Self {
        let mut out = Self::zero(self.max_freq);
        for j in -self.max_freq..=self.max_freq {
            for l in -self.max_freq..=self.max_freq {
                let idx = out.idx(j, l);
                out.entries[idx] = self.entry(-l, -j).clone();
            }
        }
        out
    }

    /// Largest entry magnitude of `P - P*`; zero iff the operator is
    /// symmetric for the bilinear pairing on the truncated band.
    pub fn symmetry_defect(&self) -> f64 {
        let adj = self.bilinear_adjoint();
        self.sub(&adj).expect("same size").max_abs_entry()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(abs_f64).fold(0.0, f64::max)
    }

    /// Apply to a series of bandwidth <= N; the result lives on the band.
    pub fn apply(&self, f: &FourierSeries<S>) -> Result<FourierSeries<S>, OperatorError> {
        if f.max_freq() > self.max_freq {
            return Err(OperatorError::BandwidthExceeded {
                series: f.max_freq(),
                operator: self.max_freq,
            });
        }
        let n = self.max_freq;
        let coeffs = (-n..=n)
            .map(|j| {
                let mut acc = C::<S>::zero();
                for (l, c) in f.iter() {
                    if c.is_zero() {
                        continue;
                    }
                    acc = acc + self.entry(j, l).clone() * c.clone();
                }
                acc
            })
            .collect();
        Ok(FourierSeries::new(n, coeffs).expect("sized above"))
    }

    /// Row-major CSV dump with "re,im" cells, for debugging only.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.size {
            let row: Vec<String> = (0..self.size)
                .map(|c| {
                    let e = &self.entries[r * self.size + c];
                    format!("{},{}", e.re.as_f64(), e.im.as_f64())
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn check_size(&self, other: &Self) -> Result<(), OperatorError> {
        if self.max_freq != other.max_freq {
            return Err(OperatorError::SizeMismatch {
                left: self.max_freq,
                right: other.max_freq,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{c_int, Rat};
    use num_complex::Complex64;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn derivative_symbolizes_to_diagonal() {
        let d = OperatorMatrix::<f64>::derivative(2, 1);
        for j in -2i64..=2 {
            assert_eq!(*d.entry(j, j), c64(0.0, j as f64));
        }
        assert!(d.entry(1, 0).is_zero());
    }

    #[test]
    fn multiplication_by_one_is_identity() {
        let one = FourierSeries::<f64>::constant(1.0);
        let m = OperatorMatrix::multiplication(&one, 3);
        assert_eq!(m, OperatorMatrix::identity(3));
    }

    #[test]
    fn multiplication_by_cosine_has_half_offdiagonals() {
        let cosx = FourierSeries::<f64>::cosine(1, 1.0);
        let m = OperatorMatrix::multiplication(&cosx, 1);
        assert_eq!(*m.entry(1, 0), c64(0.5, 0.0));
        assert_eq!(*m.entry(-1, 0), c64(0.5, 0.0));
        assert!(m.entry(0, 0).is_zero());
    }

    #[test]
    fn multiplication_by_exponential_is_a_shift() {
        let e1 = FourierSeries::<f64>::exponential(1, c64(1.0, 0.0));
        let m = OperatorMatrix::multiplication(&e1, 2);
        for j in -2i64..=2 {
            for l in -2i64..=2 {
                let expected = if j == l + 1 { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
                assert_eq!(*m.entry(j, l), expected);
            }
        }
    }

    #[test]
    fn multiplication_action_agrees_with_series_product() {
        let m = FourierSeries::<f64>::cosine(2, 0.7).add(&FourierSeries::sine(1, 1.3));
        let v = FourierSeries::<f64>::sine(2, -0.4).add(&FourierSeries::constant(0.9));
        let n = 6;
        let matrix_route = OperatorMatrix::multiplication(&m, n).apply(&v.truncated(n)).unwrap();
        let series_route = m.multiply(&v, n);
        assert!(matrix_route.distance_max(&series_route) < 1e-14);
    }

    #[test]
    fn compose_squares_the_derivative() {
        let d = OperatorMatrix::<f64>::derivative(3, 1);
        let d2 = OperatorMatrix::<f64>::derivative(3, 2);
        assert!(d.compose(&d).unwrap().sub(&d2).unwrap().max_abs_entry() == 0.0);
    }

    #[test]
    fn combine_rejects_mismatched_sizes() {
        let a = OperatorMatrix::<f64>::identity(2);
        let b = OperatorMatrix::<f64>::identity(3);
        assert!(matches!(a.add(&b), Err(OperatorError::SizeMismatch { .. })));
    }

    #[test]
    fn adjoint_of_derivative_is_minus_derivative() {
        let d = OperatorMatrix::<f64>::derivative(4, 1);
        let minus_d = d.scale(&c64(-1.0, 0.0));
        assert!(d.bilinear_adjoint().sub(&minus_d).unwrap().max_abs_entry() == 0.0);
    }

    #[test]
    fn adjoint_of_multiplication_is_itself() {
        let m = FourierSeries::<f64>::cosine(1, 2.0).add(&FourierSeries::sine(2, -0.5));
        let op = OperatorMatrix::multiplication(&m, 4);
        assert_eq!(op.symmetry_defect(), 0.0);
    }

    #[test]
    fn symmetry_defect_of_derivative_at_band_one() {
        // D - D* = 2D has entries ±2i on the band |j| <= 1
        let d = OperatorMatrix::<f64>::derivative(1, 1);
        assert_eq!(d.symmetry_defect(), 2.0);
    }

    #[test]
    fn derivative_commutes_with_even_multiplier() {
        // [D, A_1] = 0: both are Fourier multipliers
        let n = 5;
        let d = OperatorMatrix::<f64>::derivative(n, 1);
        let a1 = OperatorMatrix::fourier_multiplier(n, |j| c64(1.0 + (j * j) as f64, 0.0));
        let comm = d.compose(&a1).unwrap().sub(&a1.compose(&d).unwrap()).unwrap();
        assert_eq!(comm.max_abs_entry(), 0.0);
        assert_eq!(comm.symmetry_defect(), 0.0);
    }

    #[test]
    fn inverse_multiplier_requires_nonvanishing_symbol() {
        let err = OperatorMatrix::<f64>::inverse_fourier_multiplier(2, |j| c64(j as f64, 0.0));
        assert!(matches!(err, Err(OperatorError::ZeroSymbol { freq: 0 })));

        let a1 = OperatorMatrix::<f64>::fourier_multiplier(2, |j| c64(1.0 + (j * j) as f64, 0.0));
        let a1_inv =
            OperatorMatrix::<f64>::inverse_fourier_multiplier(2, |j| c64(1.0 + (j * j) as f64, 0.0))
                .unwrap();
        let prod = a1.compose(&a1_inv).unwrap();
        assert!(prod.sub(&OperatorMatrix::identity(2)).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn rational_adjoint_pairing_identity_is_exact() {
        let m = FourierSeries::<Rat>::cosine(1, Rat::from_int(3));
        let p = OperatorMatrix::multiplication(&m, 3)
            .compose(&OperatorMatrix::derivative(3, 1))
            .unwrap();
        let f = FourierSeries::<Rat>::exponential(2, c_int(1, 1));
        let g = FourierSeries::<Rat>::exponential(-3, c_int(0, 5));
        let lhs = p.apply(&f.truncated(3)).unwrap().l2_pair(&g.truncated(3));
        let rhs = f
            .truncated(3)
            .l2_pair(&p.bilinear_adjoint().apply(&g.truncated(3)).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_rejects_wide_series() {
        let d = OperatorMatrix::<f64>::derivative(2, 1);
        let wide = FourierSeries::<f64>::cosine(5, 1.0);
        assert!(matches!(
            d.apply(&wide),
            Err(OperatorError::BandwidthExceeded { .. })
        ));
    }

    #[test]
    fn csv_dump_has_one_row_per_band_entry() {
        let d = OperatorMatrix::<f64>::derivative(1, 1);
        let csv = d.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 6);
    }
}
