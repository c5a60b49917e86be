//! The H^k machinery: multiplier symbols f_k, the operators A_k, the
//! Hamiltonians h_k with gradient A_k⁻¹m, the fields X_k and their Fréchet
//! derivatives, and the second Hamiltonians of the k = 0, 1 flows.
//!
//! A_k = 1 - ∂² + ... + (-1)^k ∂^{2k} acts on e^{irx} as f_k(r) e^{irx}
//! with f_k(r) = Σ_{i=0}^{k} r^{2i}. The sum form is used everywhere: it is
//! valid at r = ±1 where the quotient form (r^{2k+2}-1)/(r²-1) degenerates.

use crate::fourier::FourierSeries;
use crate::operator::OperatorMatrix;
use crate::poisson::RegularFunctional;
use crate::scalar::{c_re, derivative_symbol, Scalar};

/// Multiplier symbol of A_k: `f_k(r) = Σ_{i=0}^{k} r^{2i}`, always >= 1.
pub fn f_k(k: u32, r: i64) -> i128 {
    let r2 = (r as i128) * (r as i128);
    let mut acc = 0i128;
    let mut power = 1i128;
    for _ in 0..=k {
        acc += power;
        power *= r2;
    }
    acc
}

pub fn f_k_scalar<S: Scalar>(k: u32, r: i64) -> S {
    S::from_int(f_k(k, r))
}

/// Apply A_k coefficientwise.
pub fn apply_ak<S: Scalar>(f: &FourierSeries<S>, k: u32) -> FourierSeries<S> {
    f.apply_symbol(|j| c_re(f_k_scalar::<S>(k, j)))
}

/// Apply A_k⁻¹ coefficientwise (f_k never vanishes).
pub fn apply_ak_inverse<S: Scalar>(f: &FourierSeries<S>, k: u32) -> FourierSeries<S> {
    f.apply_symbol(|j| c_re(S::one() / f_k_scalar::<S>(k, j)))
}

/// Matrix of A_k on the band |j| <= max_freq.
pub fn ak_operator<S: Scalar>(k: u32, max_freq: i64) -> OperatorMatrix<S> {
    OperatorMatrix::fourier_multiplier(max_freq, |j| c_re(f_k_scalar::<S>(k, j)))
}

/// Matrix of A_k⁻¹ on the band |j| <= max_freq.
pub fn ak_inverse_operator<S: Scalar>(k: u32, max_freq: i64) -> OperatorMatrix<S> {
    OperatorMatrix::fourier_multiplier(max_freq, |j| c_re(S::one() / f_k_scalar::<S>(k, j)))
}

/// Sobolev inner product by its defining sum `Σ_i ∫ (∂^i u)(∂^i v) dx`.
pub fn sobolev_inner<S: Scalar>(u: &FourierSeries<S>, v: &FourierSeries<S>, k: u32) -> S {
    let mut acc = S::zero();
    for i in 0..=k {
        acc = acc + u.derivative(i).l2_pair(&v.derivative(i)).re;
    }
    acc
}

/// The same inner product computed through the multiplier: `∫ A_k(u) v dx`.
pub fn sobolev_inner_via_multiplier<S: Scalar>(
    u: &FourierSeries<S>,
    v: &FourierSeries<S>,
    k: u32,
) -> S {
    apply_ak(u, k).l2_pair(v).re
}

/// Value and gradient of `h_k(m) = ½ ∫ m (A_k⁻¹ m) dx`; the gradient is
/// `A_k⁻¹ m`.
pub fn h_k_eval<S: Scalar>(m: &FourierSeries<S>, k: u32) -> (S, FourierSeries<S>) {
    let u = apply_ak_inverse(m, k);
    let value = m.l2_pair(&u).re / S::from_int(2);
    (value, u)
}

/// `h_k` packaged as a regular functional.
pub fn h_k_functional<S: Scalar>(k: u32) -> RegularFunctional<S> {
    RegularFunctional::new(
        format!("h_{k}"),
        move |m| h_k_eval(m, k).0,
        move |m| apply_ak_inverse(m, k),
    )
}

/// The Hamiltonian field `X_k(m) = (mD + Dm)(A_k⁻¹m) = 2 m u_x + u m_x`
/// with u = A_k⁻¹m, at full product bandwidth.
pub fn x_k_field<S: Scalar>(m: &FourierSeries<S>, k: u32) -> FourierSeries<S> {
    let u = apply_ak_inverse(m, k);
    let two = S::from_int(2);
    m.product(&u.derivative(1))
        .scale_real(&two)
        .add(&u.product(&m.derivative(1)))
}

/// Fréchet derivative of X_k at m as a matrix on the band |j| <= max_freq:
/// `dX_k(m) = 2u_x I + uD + 2m D A_k⁻¹ + m_x A_k⁻¹`.
pub fn dx_k_operator<S: Scalar>(
    m: &FourierSeries<S>,
    k: u32,
    max_freq: i64,
) -> OperatorMatrix<S> {
    let u = apply_ak_inverse(m, k);
    let two = c_re(S::from_int(2));
    let inv = |j: i64| c_re(S::one() / f_k_scalar::<S>(k, j));

    let t1 = OperatorMatrix::multiplication(&u.derivative(1), max_freq).scale(&two);
    let t2 = OperatorMatrix::multiplication(&u, max_freq)
        .scale_columns(|j| derivative_symbol(j, 1));
    let t3 = OperatorMatrix::multiplication(m, max_freq)
        .scale_columns(|j| derivative_symbol::<S>(j, 1) * inv(j))
        .scale(&two);
    let t4 = OperatorMatrix::multiplication(&m.derivative(1), max_freq).scale_columns(inv);

    t1.add(&t2)
        .and_then(|s| s.add(&t3))
        .and_then(|s| s.add(&t4))
        .expect("same band")
}

/// Value and gradient of the second Hamiltonian of the k-th flow, defined
/// for k = 0 and k = 1:
///
/// - k = 0: `h̃₀(m) = ½ ∫ m³ dx` with gradient `(3/2) m²`;
/// - k = 1: `h̃₁(m) = ½ ∫ (u³ + u u_x²) dx`, u = A_1⁻¹m, with gradient
///   `A_1⁻¹((3/2)u² - ½u_x² - u u_xx)` (variational derivative through
///   δu = A_1⁻¹δm, locked in by the finite-difference audit).
pub fn second_hamiltonian_eval<S: Scalar>(
    m: &FourierSeries<S>,
    k: u32,
) -> Option<(S, FourierSeries<S>)> {
    let half = S::one() / S::from_int(2);
    match k {
        0 => {
            let m2 = m.product(m);
            let value = m2.l2_pair(m).re * half;
            let grad = m2.scale_real(&S::from_ratio(3, 2));
            Some((value, grad))
        }
        1 => {
            let u = apply_ak_inverse(m, 1);
            let ux = u.derivative(1);
            let u2 = u.product(&u);
            let ux2 = ux.product(&ux);
            let value = (u2.l2_pair(&u).re + u.l2_pair(&ux2).re) * half.clone();
            let density = u2
                .scale_real(&S::from_ratio(3, 2))
                .sub(&ux2.scale_real(&half))
                .sub(&u.product(&u.derivative(2)));
            Some((value, apply_ak_inverse(&density, 1)))
        }
        _ => None,
    }
}

/// The second Hamiltonian packaged as a regular functional (k = 0 or 1).
pub fn second_hamiltonian_functional<S: Scalar>(k: u32) -> Option<RegularFunctional<S>> {
    if k > 1 {
        return None;
    }
    Some(RegularFunctional::new(
        format!("h_tilde_{k}"),
        move |m: &FourierSeries<S>| second_hamiltonian_eval(m, k).expect("k <= 1").0,
        move |m: &FourierSeries<S>| second_hamiltonian_eval(m, k).expect("k <= 1").1,
    ))
}

/// The constant-coefficient operator pairing with the second Hamiltonian:
/// D for k = 0 and D - D³ for k = 1, applied coefficientwise.
pub fn companion_structure_apply<S: Scalar>(
    f: &FourierSeries<S>,
    k: u32,
) -> Option<FourierSeries<S>> {
    match k {
        0 => Some(f.derivative(1)),
        1 => Some(f.derivative(1).sub(&f.derivative(3))),
        _ => None,
    }
}
