//! Symmetry-defect machinery for the bi-Hamiltonian classification.
//!
//! For a candidate structure K = m₀D + Dm₀ + βD³ the operator
//! P(m) = dX_k(m) ∘ K must be symmetric for the bilinear pairing whenever
//! X_k is Hamiltonian with respect to K. On exponential data
//! m = A_k e^{iax}, M = e^{ibx}, N = e^{icx} (a + b + c = 0, constant m₀,
//! α = 2m₀) both pairings have closed forms; their difference at the triple
//! (n, -2n, n) is linear in (α, β) and its kernel over all n classifies the
//! admissible structures per k. Nonconstant m₀ is excluded separately by the
//! degree-(4k+1) leading term of A_k (P(1) - P(1)*) A_k on e^{irx}.
//!
//! `crosscheck_matrix` recomputes the closed-form pairings by explicit
//! matrix action and is the anti-drift oracle for `pairing_closed_form`.

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::ObstructionError;
use crate::fourier::FourierSeries;
use crate::operator::OperatorMatrix;
use crate::poisson::CocycleSpec;
use crate::scalar::{abs_f64, c_re, Scalar, C};
use crate::sobolev::{dx_k_operator, f_k, f_k_scalar};

/// `P(m) = dX_k(m) ∘ K` on the band |j| <= max_freq.
///
/// Callers pick the band so truncation cannot reach the tested entries;
/// `recommended_band` implements the rule of thumb.
pub fn p_operator<S: Scalar>(
    m: &FourierSeries<S>,
    k: u32,
    spec: &CocycleSpec<S>,
    max_freq: i64,
) -> OperatorMatrix<S> {
    dx_k_operator(m, k, max_freq)
        .compose(&spec.operator(max_freq))
        .expect("same band")
}

/// Band large enough that truncation cannot touch pairings with test
/// frequencies up to `max_test_freq` and a density of the given bandwidth.
pub fn recommended_band(max_test_freq: i64, density_bandwidth: i64) -> i64 {
    4 * max_test_freq + density_bandwidth + 2
}

/// Closed forms of `(<P(m)M, N>, <M, P(m)N>) / 2π` for m = A_k e^{iax},
/// M = e^{ibx}, N = e^{icx}, constant m₀ with α = 2m₀.
///
/// Both vanish unless a + b + c = 0.
pub fn pairing_closed_form<S: Scalar>(
    k: u32,
    alpha: &S,
    beta: &S,
    a: i64,
    b: i64,
    c: i64,
) -> (C<S>, C<S>) {
    if a + b + c != 0 {
        return (C::<S>::zero(), C::<S>::zero());
    }
    let bracket = |t: i64| -> S {
        // (2at³ + t⁴)β - (2at + t²)α + [(at³ + 2t⁴)β - (at + 2t²)α] f_k(a)/f_k(t)
        let (a, t) = (a as i128, t as i128);
        let direct = beta.clone() * S::from_int(2 * a * t.pow(3) + t.pow(4))
            - alpha.clone() * S::from_int(2 * a * t + t * t);
        let through = beta.clone() * S::from_int(a * t.pow(3) + 2 * t.pow(4))
            - alpha.clone() * S::from_int(a * t + 2 * t * t);
        direct + through * f_k_scalar::<S>(k, a as i64) / f_k_scalar::<S>(k, t as i64)
    };
    (c_re(bracket(b)), c_re(bracket(c)))
}

/// `<M, P(m)N> - <P(m)M, N>` (per 2π) at the triple (a, b, c) = (n, -2n, n):
/// `(6n⁴β - 6n²α) - (24n⁴β - 6n²α) f_k(n)/f_k(2n)`, linear in (α, β).
pub fn defect_n<S: Scalar>(k: u32, alpha: &S, beta: &S, n: u32) -> S {
    let (lhs, rhs) = pairing_closed_form(k, alpha, beta, n as i64, -2 * (n as i64), n as i64);
    (rhs - lhs).re
}

/// Large-n limit of `defect_n(k, 0, 1, n)/n⁴`, namely `6 (1 - 4·2^{-2k})`.
/// Vanishes exactly at k = 1; that is why β ≠ 0 forces k = 1.
pub fn asymptotic_defect_ratio(k: u32) -> f64 {
    6.0 * (1.0 - 4.0 * 0.25f64.powi(k as i32))
}

/// Kernel of the defect system in the (α, β) plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelSpace {
    /// Every (α, β) passes: no obstruction at this k.
    Plane,
    /// One-dimensional solution space.
    Line { equation: String },
    /// Only the trivial structure α = β = 0.
    Point,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessDefect {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationResult {
    pub k: u32,
    pub n_max: u32,
    pub kernel: KernelSpace,
    pub witnesses: Vec<WitnessDefect>,
}

/// Singular-value threshold for kernel detection in floating-point mode.
pub const KERNEL_SV_THRESHOLD: f64 = 1e-9;

/// Assemble the linear map `(α, β) ↦ (defect_n(k, α, β, n))_{n=1..n_max}`
/// and return its kernel: exact elimination over rationals, singular values
/// with threshold `KERNEL_SV_THRESHOLD` in floating point.
pub fn classify_k<S: Scalar>(k: u32, n_max: u32) -> Result<ClassificationResult, ObstructionError> {
    if n_max < 2 {
        return Err(ObstructionError::NMaxTooSmall(n_max));
    }
    let one = S::one();
    let zero = S::zero();
    let rows: Vec<(S, S)> = (1..=n_max)
        .map(|n| (defect_n(k, &one, &zero, n), defect_n(k, &zero, &one, n)))
        .collect();

    let kernel = if S::EXACT {
        exact_kernel(&rows)
    } else {
        float_kernel(&rows)
    };

    let mut witnesses = Vec::new();
    for (i, (ca, cb)) in rows.iter().enumerate() {
        let n = i as u32 + 1;
        witnesses.push(WitnessDefect {
            n,
            alpha: 1.0,
            beta: 0.0,
            defect: ca.as_f64(),
        });
        witnesses.push(WitnessDefect {
            n,
            alpha: 0.0,
            beta: 1.0,
            defect: cb.as_f64(),
        });
    }
    if matches!(kernel, KernelSpace::Line { .. }) {
        // one on-line witness per n: the defect evaluated on the kernel direction
        if let Some((da, db)) = line_direction(&rows) {
            for n in 1..=n_max {
                witnesses.push(WitnessDefect {
                    n,
                    alpha: da.as_f64(),
                    beta: db.as_f64(),
                    defect: defect_n(k, &da, &db, n).as_f64(),
                });
            }
        }
    }

    Ok(ClassificationResult {
        k,
        n_max,
        kernel,
        witnesses,
    })
}

/// Kernel direction (α, β) of a rank-one row system.
fn line_direction<S: Scalar>(rows: &[(S, S)]) -> Option<(S, S)> {
    rows.iter()
        .find(|(a, b)| !a.is_zero() || !b.is_zero())
        .map(|(a, b)| (b.clone(), -a.clone()))
}

fn exact_kernel<S: Scalar>(rows: &[(S, S)]) -> KernelSpace {
    let nonzero: Vec<&(S, S)> = rows
        .iter()
        .filter(|(a, b)| !a.is_zero() || !b.is_zero())
        .collect();
    let Some(pivot) = nonzero.first() else {
        return KernelSpace::Plane;
    };
    for row in &nonzero[1..] {
        let cross = pivot.0.clone() * row.1.clone() - pivot.1.clone() * row.0.clone();
        if !cross.is_zero() {
            return KernelSpace::Point;
        }
    }
    KernelSpace::Line {
        equation: line_equation(&pivot.0, &pivot.1),
    }
}

fn float_kernel<S: Scalar>(rows: &[(S, S)]) -> KernelSpace {
    let rows: Vec<(f64, f64)> = rows.iter().map(|(a, b)| (a.as_f64(), b.as_f64())).collect();
    let (mut g11, mut g12, mut g22) = (0.0f64, 0.0, 0.0);
    for (a, b) in &rows {
        g11 += a * a;
        g12 += a * b;
        g22 += b * b;
    }
    // eigenvalues of the 2x2 Gram matrix; singular values are their roots
    let trace = g11 + g22;
    let det = g11 * g22 - g12 * g12;
    let gap = (trace * trace - 4.0 * det).max(0.0).sqrt();
    let lambda_max = 0.5 * (trace + gap);
    let lambda_min = (0.5 * (trace - gap)).max(0.0);
    let sigma_max = lambda_max.sqrt();
    let sigma_min = lambda_min.sqrt();

    if sigma_max <= KERNEL_SV_THRESHOLD {
        return KernelSpace::Plane;
    }
    if sigma_min <= KERNEL_SV_THRESHOLD * sigma_max {
        // dominant right singular vector = normal of the kernel line
        let (na, nb) = if (lambda_max - g11).abs() > (lambda_max - g22).abs() {
            (g12, lambda_max - g11)
        } else {
            (lambda_max - g22, g12)
        };
        return KernelSpace::Line {
            equation: line_equation(&na, &nb),
        };
    }
    KernelSpace::Point
}

/// Pretty equation `cα·α + cβ·β = 0` from a normal vector.
fn line_equation<S: Scalar>(na: &S, nb: &S) -> String {
    let near = |x: f64, y: f64| (x - y).abs() <= 1e-9 * (1.0 + y.abs());
    let a = na.as_f64();
    let b = nb.as_f64();
    let scale = a.abs().max(b.abs());
    if a.abs() <= 1e-12 * scale {
        return "beta = 0".to_string();
    }
    if b.abs() <= 1e-12 * scale {
        return "alpha = 0".to_string();
    }
    let ratio = nb.clone() / na.clone();
    let r = ratio.as_f64();
    if near(r, 1.0) {
        "alpha + beta = 0".to_string()
    } else if near(r, -1.0) {
        "alpha - beta = 0".to_string()
    } else if r < 0.0 {
        format!("alpha - {}*beta = 0", format_ratio(&-ratio))
    } else {
        format!("alpha + {}*beta = 0", format_ratio(&ratio))
    }
}

fn format_ratio<S: Scalar>(r: &S) -> String {
    if S::EXACT {
        format!("{r}")
    } else {
        format!("{:.12}", r.as_f64())
    }
}

/// Both pairings `(<P(m)M, N>, <M, P(m)N>) / 2π` computed by explicit
/// matrix action on exponentials: the independent oracle for
/// `pairing_closed_form`. Exact in rational mode.
pub fn crosscheck_matrix<S: Scalar>(
    k: u32,
    spec: &CocycleSpec<S>,
    a: i64,
    b: i64,
    c: i64,
    max_freq: i64,
) -> Result<(C<S>, C<S>), ObstructionError> {
    let need = (a.abs() + b.abs())
        .max(a.abs() + c.abs())
        .max(a.abs().max(b.abs()).max(c.abs()));
    if need > max_freq {
        return Err(ObstructionError::PairingOutOfRange { a, b, c, max_freq });
    }
    // m = A_k e^{iax} = f_k(a) e^{iax}
    let m = FourierSeries::exponential(a, c_re(f_k_scalar::<S>(k, a))).truncated(max_freq);
    let dx = dx_k_operator(&m, k, max_freq);
    let k_op = spec.operator(max_freq);

    let m_dir = FourierSeries::<S>::exponential(b, C::<S>::one()).truncated(max_freq);
    let n_dir = FourierSeries::<S>::exponential(c, C::<S>::one()).truncated(max_freq);

    let p_m = dx.apply(&k_op.apply(&m_dir)?)?;
    let p_n = dx.apply(&k_op.apply(&n_dir)?)?;

    let lhs = p_m.l2_pair_normalized(&n_dir);
    let rhs = m_dir.l2_pair_normalized(&p_n);
    Ok((lhs, rhs))
}

/// One row of the verification scan at the triple (n, -2n, n).
#[derive(Debug, Clone, Serialize)]
pub struct ScanCell {
    pub k: u32,
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
    pub matrix_lhs: f64,
    pub matrix_rhs: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanOutcome {
    pub cells: Vec<ScanCell>,
    pub max_discrepancy: f64,
}

/// Evaluate closed form and matrix oracle over a (k, n, (α, β)) grid.
/// Cells are independent and processed in parallel; output order is fixed.
pub fn scan_grid<S: Scalar>(
    ks: &[u32],
    ns: &[u32],
    pairs: &[(S, S)],
) -> Result<ScanOutcome, ObstructionError> {
    let mut jobs = Vec::new();
    for &k in ks {
        for &n in ns {
            for (alpha, beta) in pairs {
                jobs.push((k, n, alpha.clone(), beta.clone()));
            }
        }
    }
    let cells: Result<Vec<ScanCell>, ObstructionError> = jobs
        .par_iter()
        .map(|(k, n, alpha, beta)| scan_cell(*k, *n, alpha, beta))
        .collect();
    let cells = cells?;
    let max_discrepancy = cells.iter().map(|c| c.discrepancy).fold(0.0, f64::max);
    Ok(ScanOutcome {
        cells,
        max_discrepancy,
    })
}

fn scan_cell<S: Scalar>(k: u32, n: u32, alpha: &S, beta: &S) -> Result<ScanCell, ObstructionError> {
    let (a, b, c) = (n as i64, -2 * n as i64, n as i64);
    let (lhs, rhs) = pairing_closed_form(k, alpha, beta, a, b, c);
    let spec = CocycleSpec::from_alpha_beta(alpha.clone(), beta.clone());
    let band = recommended_band(n as i64, 0);
    let (mlhs, mrhs) = crosscheck_matrix(k, &spec, a, b, c, band)?;
    let rel = |x: &C<S>, y: &C<S>| {
        let diff = x.clone() - y.clone();
        abs_f64(&diff) / (1.0 + abs_f64(x))
    };
    let discrepancy = rel(&lhs, &mlhs).max(rel(&rhs, &mrhs));
    let defect = (rhs.re.clone() - lhs.re.clone()).as_f64();
    Ok(ScanCell {
        k,
        n,
        alpha: alpha.as_f64(),
        beta: beta.as_f64(),
        lhs: lhs.re.as_f64(),
        rhs: rhs.re.as_f64(),
        defect,
        matrix_lhs: mlhs.re.as_f64(),
        matrix_rhs: mrhs.re.as_f64(),
        discrepancy,
    })
}

/// Scan CSV with the fixed header `k,n,alpha,beta,lhs,rhs,defect`.
pub fn scan_csv(outcome: &ScanOutcome) -> String {
    let mut out = String::from("k,n,alpha,beta,lhs,rhs,defect\n");
    for c in &outcome.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.k, c.n, c.alpha, c.beta, c.lhs, c.rhs, c.defect
        ));
    }
    out.push_str(&format!(
        "# max_oracle_discrepancy,{}\n",
        outcome.max_discrepancy
    ));
    out
}

/// Outcome of the nonconstant-m₀ leading-term fit.
#[derive(Debug, Clone, Serialize)]
pub struct LeadingTerm {
    /// Degree of the fitted polynomial in r (-1 for the zero polynomial).
    pub degree: i64,
    /// Coefficient of the top power, expected 2i·m₀'(x) at degree 4k+1.
    pub leading_re: f64,
    pub leading_im: f64,
}

impl LeadingTerm {
    pub fn leading(&self) -> Complex64 {
        Complex64::new(self.leading_re, self.leading_im)
    }
}

/// Sample `g(r) = e^{-irx} · [A_k (P(1) - P(1)*) A_k e^{irx}](x)` and fit the
/// interpolating polynomial in r, returning its monomial coefficients.
///
/// For nonconstant m₀ the result has degree 4k+1 with top coefficient
/// 2i·m₀'(x); for constant m₀ it is identically zero (the β part of P(1) is
/// symmetric and drops out of the difference).
pub fn leading_term_polynomial(
    k: u32,
    m0: &FourierSeries<f64>,
    x: f64,
    r_list: &[i64],
) -> Result<Vec<Complex64>, ObstructionError> {
    let required = (4 * k + 3) as usize;
    let mut sorted = r_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < required || sorted.iter().any(|r| r.abs() < 2) {
        return Err(ObstructionError::TooFewSamples {
            required,
            got: sorted.len(),
        });
    }
    let bw = m0.compacted().max_freq();
    let band = sorted.iter().map(|r| r.abs()).max().unwrap() + bw + 2;
    let spec = CocycleSpec::coboundary(m0.clone())?;
    let one = FourierSeries::constant(1.0);
    let p1 = p_operator(&one, k, &spec, band);
    let skew = p1.sub(&p1.bilinear_adjoint()).expect("same band");
    let fk = |j: i64| Complex64::new(f_k(k, j) as f64, 0.0);
    let sandwiched = skew.scale_rows(fk).scale_columns(fk);

    let values: Vec<Complex64> = sorted
        .iter()
        .map(|&r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in -bw..=bw {
                acc += *sandwiched.entry(r + s, r) * Complex64::from_polar(1.0, s as f64 * x);
            }
            acc
        })
        .collect();
    let nodes: Vec<f64> = sorted.iter().map(|&r| r as f64).collect();
    Ok(interpolate_monomials(&nodes, &values))
}

/// Fit the leading-term polynomial and report `(degree, top coefficient)`.
///
/// Errors with `DegenerateFit` when the fitted degree falls below the
/// expected 4k+1 while m₀ is constant (the fit carries no m₀' information).
pub fn m0_leading_term(
    k: u32,
    m0: &FourierSeries<f64>,
    x: f64,
    r_list: &[i64],
) -> Result<LeadingTerm, ObstructionError> {
    let poly = leading_term_polynomial(k, m0, x, r_list)?;
    let fit = trim_polynomial(&poly);
    let expected = (4 * k + 1) as i64;
    if fit.degree < expected && m0.compacted().max_freq() == 0 {
        return Err(ObstructionError::DegenerateFit {
            expected: expected as usize,
            fitted: fit.degree,
        });
    }
    Ok(fit)
}

/// Numeric degree and top coefficient of a monomial coefficient vector.
fn trim_polynomial(poly: &[Complex64]) -> LeadingTerm {
    let scale = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 1e-6 * (1.0 + scale);
    match poly.iter().rposition(|c| c.norm() > tol) {
        Some(d) => LeadingTerm {
            degree: d as i64,
            leading_re: poly[d].re,
            leading_im: poly[d].im,
        },
        None => LeadingTerm {
            degree: -1,
            leading_re: 0.0,
            leading_im: 0.0,
        },
    }
}

/// Monomial coefficients of the unique interpolating polynomial through
/// `(xs[i], ys[i])`, via Newton divided differences.
fn interpolate_monomials(xs: &[f64], ys: &[Complex64]) -> Vec<Complex64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / Complex64::new(xs[i] - xs[i - j], 0.0);
        }
    }
    // Horner expansion of the Newton form into monomials
    let mut poly = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (p, coeff) in poly.iter().enumerate() {
            next[p + 1] += coeff;
            next[p] -= coeff * xs[i];
        }
        next[0] += dd[i];
        poly = next;
    }
    poly
}
