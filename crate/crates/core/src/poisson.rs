//! Lie bracket on vector fields, canonical and modified Lie-Poisson
//! structures on the regular dual, cocycle verification, and Poisson
//! brackets / Hamiltonian fields of regular functionals.
//!
//! The canonical structure is J(m) = mD + Dm. A modified structure adds a
//! differential 2-cocycle K = m₀D + Dm₀ + βD³; every operator of that form
//! satisfies the cyclic cocycle identity, which `verify_cocycle` checks on
//! exponential triples.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{OperatorError, StructureError};
use crate::fourier::FourierSeries;
use crate::operator::OperatorMatrix;
use crate::scalar::{c_re, derivative_symbol, Scalar, C};

/// Lie bracket of vector fields on the circle: `[u, v] = u v_x - u_x v`.
pub fn lie_bracket<S: Scalar>(u: &FourierSeries<S>, v: &FourierSeries<S>) -> FourierSeries<S> {
    u.product(&v.derivative(1)).sub(&u.derivative(1).product(v))
}

/// Matrix of the canonical Lie-Poisson operator `J(m) = mD + Dm`,
/// acting as `v ↦ 2 m v_x + m_x v`.
pub fn lie_poisson_operator<S: Scalar>(m: &FourierSeries<S>, max_freq: i64) -> OperatorMatrix<S> {
    let mult = OperatorMatrix::multiplication(m, max_freq);
    let m_d = mult.scale_columns(|j| derivative_symbol(j, 1));
    let d_m = mult.scale_rows(|j| derivative_symbol(j, 1));
    m_d.add(&d_m).expect("same band")
}

/// Datum of a modified Lie-Poisson structure: the operator
/// `K = m₀D + Dm₀ + βD³` with a real coboundary density m₀ and β ∈ ℝ.
#[derive(Debug, Clone)]
pub struct CocycleSpec<S: Scalar> {
    m0: FourierSeries<S>,
    beta: S,
}

impl<S: Scalar> CocycleSpec<S> {
    pub fn new(m0: FourierSeries<S>, beta: S) -> Result<Self, StructureError> {
        if !m0.is_real() {
            return Err(StructureError::DensityNotReal);
        }
        Ok(Self { m0, beta })
    }

    /// Pure coboundary `m₀D + Dm₀`.
    pub fn coboundary(m0: FourierSeries<S>) -> Result<Self, StructureError> {
        Self::new(m0, S::zero())
    }

    /// Central term `βD³` alone.
    pub fn central(beta: S) -> Self {
        Self {
            m0: FourierSeries::zero(0),
            beta,
        }
    }

    /// Constant coboundary density written as α = 2m₀.
    pub fn from_alpha_beta(alpha: S, beta: S) -> Self {
        Self {
            m0: FourierSeries::constant(alpha / S::from_int(2)),
            beta,
        }
    }

    pub fn m0(&self) -> &FourierSeries<S> {
        &self.m0
    }

    pub fn beta(&self) -> &S {
        &self.beta
    }

    /// `α = 2 m₀` when the density is constant (reporting convention).
    pub fn alpha(&self) -> S {
        self.m0.coeff(0).re * S::from_int(2)
    }

    pub fn is_constant_density(&self) -> bool {
        self.m0.compacted().max_freq() == 0
    }

    pub fn density_bandwidth(&self) -> i64 {
        self.m0.compacted().max_freq()
    }

    /// Matrix realization on the band |j| <= max_freq.
    pub fn operator(&self, max_freq: i64) -> OperatorMatrix<S> {
        let mult = OperatorMatrix::multiplication(&self.m0, max_freq);
        let m_d = mult.scale_columns(|j| derivative_symbol(j, 1));
        let d_m = mult.scale_rows(|j| derivative_symbol(j, 1));
        let d3 = OperatorMatrix::fourier_multiplier(max_freq, |j| {
            derivative_symbol::<S>(j, 3) * c_re(self.beta.clone())
        });
        m_d.add(&d_m).and_then(|s| s.add(&d3)).expect("same band")
    }
}

/// Cyclic cocycle defect `<[u,v], Kw> + <[v,w], Ku> + <[w,u], Kv>` on the
/// exponential triple `u = e^{iax}, v = e^{ibx}, w = e^{icx}`.
///
/// Zero for every valid 2-cocycle. The normalized pairings are accumulated
/// first and scaled by 2π once, so exact cancellations stay exact.
pub fn jacobi_defect<S: Scalar>(
    k_op: &OperatorMatrix<S>,
    a: i64,
    b: i64,
    c: i64,
) -> Result<C<S>, StructureError> {
    let n = k_op.max_freq();
    let fits = |f: i64| f.abs() <= n;
    if !(fits(a) && fits(b) && fits(c) && fits(a + b) && fits(b + c) && fits(c + a)) {
        return Err(StructureError::TripleOutOfRange {
            a,
            b,
            c,
            max_freq: n,
        });
    }
    let basis = |f: i64| FourierSeries::<S>::exponential(f, C::<S>::one());
    let mut acc = C::<S>::zero();
    for (p, q, r) in [(a, b, c), (b, c, a), (c, a, b)] {
        let bracket = lie_bracket(&basis(p), &basis(q));
        let k_r = k_op.apply(&basis(r))?;
        acc = acc + bracket.l2_pair_normalized(&k_r);
    }
    Ok(acc * c_re(S::tau()))
}

/// Result of scanning the cocycle identity over all exponential triples.
#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub operator_max_freq: i64,
    pub triple_max_freq: i64,
    pub max_defect: f64,
    pub triples_checked: usize,
}

/// Check the cyclic identity for all `|a|, |b|, |c| <= triple_max_freq`.
pub fn verify_cocycle<S: Scalar>(
    k_op: &OperatorMatrix<S>,
    triple_max_freq: i64,
) -> Result<CocycleReport, StructureError> {
    let f = triple_max_freq;
    let mut max_defect = 0.0f64;
    let mut count = 0usize;
    for a in -f..=f {
        for b in -f..=f {
            for c in -f..=f {
                let defect = jacobi_defect(k_op, a, b, c)?;
                max_defect = max_defect.max(crate::scalar::abs_f64(&defect));
                count += 1;
            }
        }
    }
    Ok(CocycleReport {
        operator_max_freq: k_op.max_freq(),
        triple_max_freq: f,
        max_defect,
        triples_checked: count,
    })
}

/// A functional on the regular dual together with its declared L²-gradient,
/// i.e. `df(m)M = ∫ M δf(m) dx`.
pub struct RegularFunctional<S: Scalar> {
    name: String,
    value: Box<dyn Fn(&FourierSeries<S>) -> S + Send + Sync>,
    gradient: Box<dyn Fn(&FourierSeries<S>) -> FourierSeries<S> + Send + Sync>,
}

impl<S: Scalar> RegularFunctional<S> {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(&FourierSeries<S>) -> S + Send + Sync + 'static,
        gradient: impl Fn(&FourierSeries<S>) -> FourierSeries<S> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Box::new(value),
            gradient: Box::new(gradient),
        }
    }

    /// Linear functional `f_u(m) = ∫ u m dx` with constant gradient u.
    pub fn linear(u: FourierSeries<S>) -> Self {
        let grad = u.clone();
        Self::new(
            "linear",
            move |m| u.l2_pair(m).re,
            move |_| grad.clone(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, m: &FourierSeries<S>) -> S {
        (self.value)(m)
    }

    pub fn gradient(&self, m: &FourierSeries<S>) -> FourierSeries<S> {
        (self.gradient)(m)
    }
}

/// Poisson bracket `{f, g}(m) = ∫ δf(m) · (structure · δg(m)) dx` for a
/// skew structure operator evaluated at m.
pub fn poisson_bracket<S: Scalar>(
    f: &RegularFunctional<S>,
    g: &RegularFunctional<S>,
    m: &FourierSeries<S>,
    structure: &OperatorMatrix<S>,
) -> Result<S, OperatorError> {
    let gf = f.gradient(m);
    let gg = g.gradient(m);
    Ok(gf.l2_pair(&structure.apply(&gg)?).re)
}

/// Hamiltonian vector field `X_f(m) = J(m) δf(m)` for a structure given as
/// a map m ↦ operator matrix.
pub fn hamiltonian_field<S: Scalar>(
    f: &RegularFunctional<S>,
    structure_at: impl Fn(&FourierSeries<S>) -> OperatorMatrix<S>,
    m: &FourierSeries<S>,
) -> Result<FourierSeries<S>, OperatorError> {
    let op = structure_at(m);
    op.apply(&f.gradient(m))
}

/// Default probe directions {1, sin x, cos x, sin 2x, cos 2x}.
pub fn default_directions() -> Vec<FourierSeries<f64>> {
    vec![
        FourierSeries::constant(1.0),
        FourierSeries::sine(1, 1.0),
        FourierSeries::cosine(1, 1.0),
        FourierSeries::sine(2, 1.0),
        FourierSeries::cosine(2, 1.0),
    ]
}

/// Relative residual between the central finite difference of the value and
/// the pairing against the declared gradient, in one direction.
pub fn directional_derivative_residual(
    f: &RegularFunctional<f64>,
    m: &FourierSeries<f64>,
    dir: &FourierSeries<f64>,
    step: f64,
) -> f64 {
    let plus = f.value(&m.add(&dir.scale_real(&step)));
    let minus = f.value(&m.sub(&dir.scale_real(&step)));
    let fd = (plus - minus) / (2.0 * step);
    let declared = dir.l2_pair(&f.gradient(m)).re;
    (fd - declared).abs() / (1.0 + fd.abs().max(declared.abs()))
}

/// Max asymmetry of the finite-difference gradient derivative over direction
/// pairs: `max |<dδf(m)·M, N> - <dδf(m)·N, M>|`.
///
/// Small values certify that the declared gradient map is plausibly a
/// gradient; a genuinely non-symmetric derivative (e.g. the map m ↦ m_x)
/// produces an O(1) defect.
pub fn gradient_symmetry_defect(
    f: &RegularFunctional<f64>,
    m: &FourierSeries<f64>,
    dirs: &[FourierSeries<f64>],
    step: f64,
) -> f64 {
    let fd_grad: Vec<FourierSeries<f64>> = dirs
        .iter()
        .map(|d| {
            let plus = f.gradient(&m.add(&d.scale_real(&step)));
            let minus = f.gradient(&m.sub(&d.scale_real(&step)));
            plus.sub(&minus).scale_real(&(0.5 / step))
        })
        .collect();
    let mut worst = 0.0f64;
    for i in 0..dirs.len() {
        for j in (i + 1)..dirs.len() {
            let lhs = fd_grad[i].l2_pair(&dirs[j]).re;
            let rhs = fd_grad[j].l2_pair(&dirs[i]).re;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}
