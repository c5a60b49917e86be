//! Pseudospectral time integration of the geodesic equations
//! m_t = -X_k(m) with invariant monitoring and wave-breaking detection.
//!
//! k = 0 is the inviscid Burgers equation m_t + 3 m m_x = 0; k = 1 is the
//! Camassa-Holm equation in momentum form m_t + u m_x + 2 u_x m = 0 with
//! m = u - u_xx. The sign convention m_t = -X_k(m) is fixed by expanding
//! X_k(m) = 2 m u_x + u m_x: for k = 1 this reproduces exactly the u-form
//! u_t + u u_x + ∂_x (1 - ∂_x²)^{-1} (u² + ½u_x²) = 0.
//!
//! Time stepping is classical 4-stage Runge-Kutta on collocation samples
//! with spectral differentiation and A_k⁻¹ applied in coefficient space.
//! Quadratic products are evaluated on the grid and truncated back to the
//! lowest third of the modes, which realizes the 2/3 dealiasing rule.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::FlowError;
use crate::fourier::FourierSeries;
use crate::grid::SpectralGrid;
use crate::scalar::Scalar;
use crate::sobolev::{apply_ak_inverse, h_k_eval, second_hamiltonian_eval, x_k_field};

/// Right-hand side of the geodesic equation in coefficient space:
/// `-X_k(m) = -(2 m u_x + u m_x)` at full product bandwidth.
pub fn flow_rhs<S: Scalar>(m: &FourierSeries<S>, k: u32) -> FourierSeries<S> {
    x_k_field(m, k).neg()
}

/// Right-hand side of the Camassa-Holm equation in velocity form:
/// `-u u_x - ∂_x (1 - ∂_x²)^{-1} (u² + ½u_x²)`.
///
/// Satisfies `A_1 ∘ (this) = flow_rhs(A_1 u, 1)` identically.
pub fn ch_u_form_rhs<S: Scalar>(u: &FourierSeries<S>) -> FourierSeries<S> {
    let half = S::one() / S::from_int(2);
    let ux = u.derivative(1);
    let source = u.product(u).add(&ux.product(&ux).scale_real(&half));
    u.product(&ux)
        .neg()
        .sub(&apply_ak_inverse(&source, 1).derivative(1))
}

/// Parameters of a pseudospectral run.
#[derive(Debug, Clone, Serialize)]
pub struct FlowParams {
    pub k: u32,
    pub t_final: f64,
    pub dt: f64,
    pub grid_points: usize,
    /// Integration halts cleanly once max|u_x| exceeds this slope.
    pub breaking_threshold: f64,
}

impl FlowParams {
    pub fn new(k: u32, t_final: f64, dt: f64, grid_points: usize) -> Self {
        Self {
            k,
            t_final,
            dt,
            grid_points,
            breaking_threshold: 1e3,
        }
    }
}

/// Monitored quantities at one time level.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantSample {
    pub t: f64,
    /// h_k(m), the flow's own Hamiltonian.
    pub energy: f64,
    /// Second Hamiltonian for k = 0, 1; absent otherwise.
    pub second: Option<f64>,
    /// ∫ m dx.
    pub mean: f64,
    /// max |u_x| over the collocation grid.
    pub max_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum HaltReason {
    Completed,
    WaveBreaking { time: f64, max_slope: f64 },
}

/// Trajectory of m with per-step invariant records.
#[derive(Debug, Clone)]
pub struct FlowTrace {
    pub k: u32,
    pub times: Vec<f64>,
    pub states: Vec<FourierSeries<f64>>,
    pub invariants: Vec<InvariantSample>,
    pub halt: HaltReason,
}

/// Worst per-invariant excursions along a trace, normalized by
/// max(|initial value|, 1) so that identically-zero invariants are judged
/// on an absolute scale.
#[derive(Debug, Clone, Serialize)]
pub struct DriftSummary {
    pub energy: f64,
    pub second: Option<f64>,
    pub mean: f64,
    pub max_slope_seen: f64,
}

impl FlowTrace {
    pub fn drift_summary(&self) -> DriftSummary {
        let drift = |pick: &dyn Fn(&InvariantSample) -> f64| -> f64 {
            let first = pick(&self.invariants[0]);
            let scale = first.abs().max(1.0);
            self.invariants
                .iter()
                .map(|s| (pick(s) - first).abs() / scale)
                .fold(0.0, f64::max)
        };
        let second = self.invariants[0]
            .second
            .map(|_| drift(&|s| s.second.unwrap_or(f64::NAN)));
        DriftSummary {
            energy: drift(&|s| s.energy),
            second,
            mean: drift(&|s| s.mean),
            max_slope_seen: self
                .invariants
                .iter()
                .map(|s| s.max_slope)
                .fold(0.0, f64::max),
        }
    }

    pub fn final_state(&self) -> &FourierSeries<f64> {
        self.states.last().expect("trace never empty")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trace never empty")
    }

    /// CSV export: `t,h_k,h_tilde,mean,max_ux` plus optional coefficient
    /// columns (re/im per mode) when `dump_coeffs` is set.
    pub fn to_csv(&self, dump_coeffs: bool) -> String {
        let mut out = String::from("t,h_k,h_tilde,mean,max_ux");
        let band = self.states[0].max_freq();
        if dump_coeffs {
            for j in -band..=band {
                out.push_str(&format!(",c{j}_re,c{j}_im"));
            }
        }
        out.push('\n');
        for (i, s) in self.invariants.iter().enumerate() {
            let second = s.second.map(|v| v.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}",
                s.t, s.energy, second, s.mean, s.max_slope
            ));
            if dump_coeffs {
                for j in -band..=band {
                    let c = self.states[i].coeff(j);
                    out.push_str(&format!(",{},{}", c.re, c.im));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Integrate m_t = -X_k(m) from the given initial momentum.
///
/// The state is kept at the dealiased bandwidth floor(P/3); each stage
/// evaluates the quadratic terms pointwise on the P-point grid and truncates
/// the result back to the state band. The step count is chosen so that a
/// uniform step lands exactly on t_final.
pub fn evolve(m0: &FourierSeries<f64>, params: &FlowParams) -> Result<FlowTrace, FlowError> {
    validate(m0, params)?;
    let grid = SpectralGrid::new(params.grid_points);
    let band = (params.grid_points / 3) as i64;
    let steps = (params.t_final / params.dt - 1e-9).ceil().max(1.0) as usize;
    let dt = params.t_final / steps as f64;

    let mut state = m0.truncated(band);
    let mut times = vec![0.0];
    let mut states = vec![state.clone()];
    let mut invariants = vec![observe(&state, params.k, &grid, 0.0)];
    let mut halt = HaltReason::Completed;

    if invariants[0].max_slope > params.breaking_threshold {
        return Err(FlowError::InvalidParameter(
            "initial slope already exceeds the breaking threshold".into(),
        ));
    }

    for step in 1..=steps {
        let t = step as f64 * dt;
        let k1 = rhs_on_grid(&state, params.k, &grid, band)?;
        let k2 = rhs_on_grid(&state.add(&k1.scale_real(&(dt / 2.0))), params.k, &grid, band)?;
        let k3 = rhs_on_grid(&state.add(&k2.scale_real(&(dt / 2.0))), params.k, &grid, band)?;
        let k4 = rhs_on_grid(&state.add(&k3.scale_real(&dt)), params.k, &grid, band)?;
        let update = k1
            .add(&k2.scale_real(&2.0))
            .add(&k3.scale_real(&2.0))
            .add(&k4)
            .scale_real(&(dt / 6.0));
        state = state.add(&update);

        if !finite(&state) {
            return Err(FlowError::Unstable { time: t });
        }

        let sample = observe(&state, params.k, &grid, t);
        let slope = sample.max_slope;
        times.push(t);
        states.push(state.clone());
        invariants.push(sample);

        if slope > params.breaking_threshold {
            halt = HaltReason::WaveBreaking {
                time: t,
                max_slope: slope,
            };
            break;
        }
    }

    Ok(FlowTrace {
        k: params.k,
        times,
        states,
        invariants,
        halt,
    })
}

fn validate(m0: &FourierSeries<f64>, params: &FlowParams) -> Result<(), FlowError> {
    if !(params.dt > 0.0 && params.dt.is_finite()) {
        return Err(FlowError::InvalidParameter(format!(
            "dt must be positive and finite, got {}",
            params.dt
        )));
    }
    if !(params.t_final > 0.0 && params.t_final.is_finite()) {
        return Err(FlowError::InvalidParameter(format!(
            "t_final must be positive and finite, got {}",
            params.t_final
        )));
    }
    if !(params.breaking_threshold > 0.0) {
        return Err(FlowError::InvalidParameter(
            "breaking threshold must be positive".into(),
        ));
    }
    let p = params.grid_points;
    if !p.is_power_of_two() || p < 8 {
        return Err(FlowError::InvalidParameter(format!(
            "grid_points must be a power of two >= 8, got {p}"
        )));
    }
    let needed = 4 * m0.compacted().max_freq().max(1) as usize;
    if p < needed {
        return Err(FlowError::InvalidParameter(format!(
            "grid_points {p} < 4x initial bandwidth ({needed})"
        )));
    }
    if !m0.is_real() {
        return Err(FlowError::InvalidParameter(
            "initial momentum must be real-valued".into(),
        ));
    }
    Ok(())
}

/// One evaluation of -X_k on the grid: u, u_x, m_x differentiate in
/// coefficient space; the products form pointwise; the transform back
/// truncates to the dealiased band.
fn rhs_on_grid(
    m: &FourierSeries<f64>,
    k: u32,
    grid: &SpectralGrid,
    band: i64,
) -> Result<FourierSeries<f64>, FlowError> {
    let u = apply_ak_inverse(m, k);
    let g_m = grid.synthesize(m);
    let g_mx = grid.synthesize(&m.derivative(1));
    let g_u = grid.synthesize(&u);
    let g_ux = grid.synthesize(&u.derivative(1));
    let samples: Vec<Complex64> = (0..grid.points())
        .map(|p| -(2.0 * g_m[p] * g_ux[p] + g_u[p] * g_mx[p]))
        .collect();
    Ok(grid.analyze(&samples, band)?)
}

fn observe(m: &FourierSeries<f64>, k: u32, grid: &SpectralGrid, t: f64) -> InvariantSample {
    let (energy, u) = h_k_eval(m, k);
    let second = second_hamiltonian_eval(m, k).map(|(v, _)| v);
    let slope = grid
        .synthesize(&u.derivative(1))
        .iter()
        .map(|s| s.re.abs())
        .fold(0.0, f64::max);
    InvariantSample {
        t,
        energy,
        second,
        mean: m.integral().re,
        max_slope: slope,
    }
}

fn finite(f: &FourierSeries<f64>) -> bool {
    f.iter().all(|(_, c)| c.re.is_finite() && c.im.is_finite())
}

/// Reference solution of the Burgers flow u_t + 3 u u_x = 0 by the method of
/// characteristics: u(x, t) = u₀(x₀) where x = x₀ + 3 t u₀(x₀), solved by
/// fixed-point iteration at each requested point. Converges strictly before
/// wave breaking.
pub fn burgers_characteristics(
    u0: &FourierSeries<f64>,
    t: f64,
    points: &[f64],
) -> Result<Vec<f64>, FlowError> {
    points
        .iter()
        .map(|&x| {
            let mut x0 = x;
            for _ in 0..500 {
                let next = x - 3.0 * t * u0.evaluate(x0).re;
                if (next - x0).abs() < 1e-14 * (1.0 + x.abs()) {
                    return Ok(u0.evaluate(next).re);
                }
                x0 = next;
            }
            Err(FlowError::CharacteristicsDiverged { time: t })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::to_grid;
    use crate::scalar::Rat;
    use crate::sobolev::apply_ak;
    use approx::assert_relative_eq;

    #[test]
    fn constant_momentum_is_a_fixed_point() {
        for k in 0..=2 {
            assert!(flow_rhs(&FourierSeries::<f64>::constant(0.3), k).is_zero());
        }
        assert!(ch_u_form_rhs(&FourierSeries::<f64>::constant(0.3)).is_zero());
    }

    #[test]
    fn burgers_rhs_of_sine() {
        let rhs = flow_rhs(&FourierSeries::<f64>::sine(1, 1.0), 0);
        assert!(rhs.distance_max(&FourierSeries::sine(2, -1.5)) < 1e-15);
    }

    #[test]
    fn camassa_holm_rhs_of_two_cosines() {
        let rhs = flow_rhs(&FourierSeries::<f64>::cosine(1, 2.0), 1);
        assert!(rhs.distance_max(&FourierSeries::sine(2, 3.0)) < 1e-15);
    }

    #[test]
    fn u_form_matches_momentum_form_exactly_over_rationals() {
        let u = FourierSeries::<Rat>::cosine(1, Rat::from_int(1))
            .add(&FourierSeries::sine(2, Rat::from_ratio(2, 7)));
        let m = apply_ak(&u, 1);
        let lhs = apply_ak(&ch_u_form_rhs(&u), 1);
        let rhs = flow_rhs(&m, 1);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn u_form_of_sine_evaluates_both_ways() {
        // -sin x cos x - D A_1⁻¹(sin²x + ½cos²x) = -(3/5) sin 2x
        let u = FourierSeries::<f64>::sine(1, 1.0);
        let direct = ch_u_form_rhs(&u);
        assert!(direct.distance_max(&FourierSeries::sine(2, -0.6)) < 1e-15);
        let via_momentum = apply_ak_inverse(&flow_rhs(&apply_ak(&u, 1), 1), 1);
        assert!(direct.distance_max(&via_momentum) < 1e-12);
    }

    #[test]
    fn grid_rhs_equals_coefficient_rhs_when_unaliased() {
        let m = FourierSeries::<f64>::cosine(1, 0.8)
            .add(&FourierSeries::sine(3, 0.2))
            .add(&FourierSeries::constant(0.1));
        let grid = SpectralGrid::new(32);
        for k in 0..=1 {
            let band = 10;
            let by_grid = rhs_on_grid(&m, k, &grid, band).unwrap();
            let exact = flow_rhs(&m, k).truncated(band);
            assert!(by_grid.distance_max(&exact) < 1e-13, "k={k}");
        }
    }

    #[test]
    fn constant_initial_data_stays_constant() {
        let m0 = FourierSeries::constant(0.3);
        let trace = evolve(&m0, &FlowParams::new(1, 1.0, 1e-2, 16)).unwrap();
        assert_eq!(trace.halt, HaltReason::Completed);
        let drifts = trace.drift_summary();
        assert!(drifts.energy < 1e-14);
        assert!(drifts.mean < 1e-14);
        assert!(trace.final_state().distance_max(&m0.truncated(5)) < 1e-14);
    }

    #[test]
    fn burgers_matches_characteristics_before_breaking() {
        let m0 = FourierSeries::sine(1, 0.1);
        let trace = evolve(&m0, &FlowParams::new(0, 1.0, 1e-3, 128)).unwrap();
        assert_eq!(trace.halt, HaltReason::Completed);
        let grid = SpectralGrid::new(128);
        let reference = burgers_characteristics(&m0, 1.0, &grid.nodes()).unwrap();
        let computed = to_grid(trace.final_state(), 128);
        let sup = reference
            .iter()
            .zip(&computed)
            .map(|(r, c)| (r - c.re).abs())
            .fold(0.0, f64::max);
        assert!(sup < 1e-6, "sup-norm error {sup}");
    }

    #[test]
    fn camassa_holm_conserves_its_invariants() {
        let m0 = FourierSeries::cosine(1, 2.0);
        let trace = evolve(&m0, &FlowParams::new(1, 1.0, 1e-3, 128)).unwrap();
        let drifts = trace.drift_summary();
        assert!(drifts.energy < 1e-6, "h_1 drift {}", drifts.energy);
        assert!(drifts.second.unwrap() < 1e-6);
        assert!(drifts.mean < 1e-10);
    }

    #[test]
    fn fourth_order_convergence_window() {
        let m0 = FourierSeries::cosine(1, 2.0);
        let reference = evolve(&m0, &FlowParams::new(1, 0.5, 0.02 / 8.0, 64)).unwrap();
        let coarse = evolve(&m0, &FlowParams::new(1, 0.5, 0.02, 64)).unwrap();
        let fine = evolve(&m0, &FlowParams::new(1, 0.5, 0.01, 64)).unwrap();
        let err_coarse = coarse.final_state().distance_max(reference.final_state());
        let err_fine = fine.final_state().distance_max(reference.final_state());
        assert!(
            err_coarse / err_fine >= 8.0 * 0.8,
            "ratio {}",
            err_coarse / err_fine
        );
    }

    #[test]
    fn steep_burgers_run_halts_on_breaking() {
        let m0 = FourierSeries::sine(1, 1.0);
        let mut params = FlowParams::new(0, 2.0, 1e-2, 64);
        params.breaking_threshold = 1.2;
        let trace = evolve(&m0, &params).unwrap();
        match trace.halt {
            HaltReason::WaveBreaking { time, max_slope } => {
                assert!(time < 0.2, "halt time {time}");
                assert!(max_slope > 1.2);
            }
            HaltReason::Completed => panic!("expected a breaking halt"),
        }
        assert!(trace.final_time() < 2.0);
    }

    #[test]
    fn non_finite_states_error_out() {
        let m0 = FourierSeries::sine(1, 1e200);
        let err = evolve(&m0, &FlowParams::new(0, 0.5, 0.1, 16)).unwrap_err();
        assert!(matches!(err, FlowError::Unstable { .. }));
    }

    #[test]
    fn parameter_validation_rejects_bad_runs() {
        let m0 = FourierSeries::cosine(1, 1.0);
        assert!(matches!(
            evolve(&m0, &FlowParams::new(1, 1.0, -1.0, 64)),
            Err(FlowError::InvalidParameter(_))
        ));
        assert!(matches!(
            evolve(&m0, &FlowParams::new(1, 1.0, 1e-2, 24)),
            Err(FlowError::InvalidParameter(_))
        ));
        let wide = FourierSeries::cosine(5, 1.0);
        assert!(matches!(
            evolve(&wide, &FlowParams::new(1, 1.0, 1e-2, 16)),
            Err(FlowError::InvalidParameter(_))
        ));
    }

    #[test]
    fn trace_csv_has_invariant_columns() {
        let m0 = FourierSeries::cosine(1, 1.0);
        let trace = evolve(&m0, &FlowParams::new(1, 0.05, 1e-2, 16)).unwrap();
        let csv = trace.to_csv(false);
        assert!(csv.starts_with("t,h_k,h_tilde,mean,max_ux\n"));
        assert_eq!(csv.lines().count(), trace.times.len() + 1);
        let dumped = trace.to_csv(true);
        let band = trace.states[0].max_freq();
        let expected_cols = 5 + 2 * (2 * band + 1) as usize;
        assert_eq!(
            dumped.lines().next().unwrap().split(',').count(),
            expected_cols
        );
    }

    #[test]
    fn characteristics_report_breaking_as_divergence() {
        let u0 = FourierSeries::sine(1, 1.0);
        // breaking time 1/3; far beyond it the fixed point has no contraction
        let err = burgers_characteristics(&u0, 2.0, &[1.5]);
        assert!(matches!(
            err,
            Err(FlowError::CharacteristicsDiverged { .. })
        ));
    }
}
