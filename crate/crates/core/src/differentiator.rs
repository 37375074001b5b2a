//! Causal numerical differentiation by adaptive input and state estimation.
//!
//! A sampled signal `y_k` is modelled as the output of a discrete-time
//! integrator driven by an unknown input `d_k`:
//!
//! ```text
//! x_{k+1} = A x_k + B d_k
//! y_k     = C x_k + noise
//! ```
//!
//! With the single integrator (`A = 1`, `B = Ts`, `C = 1`) the unknown input is
//! the first derivative of `y`; with the double integrator it is the second.
//! Each step runs a Kalman forecast / data-assimilation pair around this model
//! and estimates `d_k` with an exactly proper input-estimation filter whose
//! coefficients are tuned online by recursive least squares on a retrospective
//! cost. The process and sensor noise covariances fed to the Kalman filter are
//! themselves adapted every step so that the predicted residual variance
//! tracks the sample variance of the residuals.
//!
//! Per-step schedule of [`Differentiator::step`]:
//!
//! 1. residual `z_k = C x_fc,k - y_k`
//! 2. running residual statistics (sample variance `S_k`)
//! 3. covariance adaptation: pick `V1 = eta I`, `V2` and with them `P_f,k`
//! 4. Kalman gain, data-assimilation state and covariance
//! 5. regressor `Phi_k`, input estimate `d_k = Phi_k theta_k`
//! 6. filtered regressors through the closed-loop Markov parameters
//! 7. RLS update `theta_k -> theta_{k+1}`
//! 8. forecast `x_fc,k+1 = A x_da,k + B d_k`
//!
//! `P_f,0 = 0`, `theta_0 = 0`, and all histories are zero-filled, so the first
//! estimate is exactly zero. The forecast starts at the first sample
//! (`C x_fc,0 = y_0`) rather than at the origin, so `z_0 = 0` and a large
//! initial offset does not inflate the residual variance for the rest of the
//! run.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::error::{Error, Result};

/// Minimum eigenvalue tolerated on a covariance before it counts as indefinite.
pub const PSD_TOL: f64 = -1e-10;

/// Which derivative a [`Differentiator`] estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Known part of the discrete-time integrator model.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorModel {
    order: DerivativeOrder,
    sample_time: f64,
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
}

impl IntegratorModel {
    /// `A = 1`, `B = Ts`, `C = 1`.
    pub fn single(sample_time: f64) -> Result<Self> {
        Self::new(DerivativeOrder::First, sample_time)
    }

    /// `A = [[1, Ts], [0, 1]]`, `B = [Ts^2 / 2, Ts]`, `C = [1, 0]`.
    pub fn double(sample_time: f64) -> Result<Self> {
        Self::new(DerivativeOrder::Second, sample_time)
    }

    pub fn new(order: DerivativeOrder, sample_time: f64) -> Result<Self> {
        if !(sample_time.is_finite() && sample_time > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sample time must be positive and finite, got {sample_time}"
            )));
        }
        let ts = sample_time;
        let (a, b, c) = match order {
            DerivativeOrder::First => (
                DMatrix::from_element(1, 1, 1.0),
                DVector::from_element(1, ts),
                DVector::from_element(1, 1.0),
            ),
            DerivativeOrder::Second => (
                DMatrix::from_row_slice(2, 2, &[1.0, ts, 0.0, 1.0]),
                DVector::from_column_slice(&[0.5 * ts * ts, ts]),
                DVector::from_column_slice(&[1.0, 0.0]),
            ),
        };
        Ok(Self {
            order,
            sample_time,
            a,
            b,
            c,
        })
    }

    pub fn order(&self) -> DerivativeOrder {
        self.order
    }

    pub fn sample_time(&self) -> f64 {
        self.sample_time
    }

    /// State dimension `n`.
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// Output map as a column vector; the row `C` is its transpose.
    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    /// `C M C^T` for an `n x n` matrix `M`.
    fn c_quad(&self, m: &DMatrix<f64>) -> f64 {
        (m * &self.c).dot(&self.c)
    }
}

/// Weights and orders of the retrospective-cost input estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct RlsConfig {
    /// Input-estimator order `n_e`.
    pub estimator_order: usize,
    /// Number of Markov parameters `n_f` in the regressor filter.
    pub filter_length: usize,
    /// Residual weight `R_z`.
    pub r_z: f64,
    /// Input-magnitude weight `R_d`.
    pub r_d: f64,
    /// Regularization `R_theta = r_theta_scale * I`.
    pub r_theta_scale: f64,
}

impl RlsConfig {
    /// Length of the coefficient vector, `2 n_e + 1`.
    pub fn coeff_len(&self) -> usize {
        2 * self.estimator_order + 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.estimator_order == 0 {
            return bad("estimator order n_e must be positive".into());
        }
        if self.filter_length == 0 {
            return bad("filter length n_f must be positive".into());
        }
        for (name, v) in [
            ("R_z", self.r_z),
            ("R_d", self.r_d),
            ("R_theta", self.r_theta_scale),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive and finite, got {v}"));
            }
        }
        Ok(())
    }
}

/// Spacing of the process-noise search grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EtaSpacing {
    #[default]
    Linear,
    Log,
}

/// Covariance adaptation settings.
#[derive(Clone, Debug, PartialEq)]
pub struct AseConfig {
    pub eta_low: f64,
    pub eta_high: f64,
    pub grid_points: usize,
    pub alpha: f64,
    pub spacing: EtaSpacing,
}

impl AseConfig {
    pub fn new(eta_low: f64, eta_high: f64) -> Self {
        Self {
            eta_low,
            eta_high,
            grid_points: 100,
            alpha: 0.5,
            spacing: EtaSpacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.eta_low.is_finite() && self.eta_high.is_finite()) {
            return bad("eta bounds must be finite".into());
        }
        if !(0.0 <= self.eta_low && self.eta_low < self.eta_high) {
            return bad(format!(
                "need 0 <= eta_low < eta_high, got [{}, {}]",
                self.eta_low, self.eta_high
            ));
        }
        if self.grid_points < 2 {
            return bad(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad(format!("alpha must lie in [0, 1], got {}", self.alpha));
        }
        if self.spacing == EtaSpacing::Log && self.eta_low <= 0.0 {
            return bad("log-spaced eta grid needs eta_low > 0".into());
        }
        Ok(())
    }

    /// The candidate values of `eta`, ascending.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.grid_points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.eta_high;
                }
                let frac = i as f64 / last;
                match self.spacing {
                    EtaSpacing::Linear => self.eta_low + frac * (self.eta_high - self.eta_low),
                    EtaSpacing::Log => {
                        let (lo, hi) = (self.eta_low.ln(), self.eta_high.ln());
                        (lo + frac * (hi - lo)).exp()
                    }
                }
            })
            .collect()
    }
}

/// One-pass running mean and sample variance of the residual.
///
/// After `k + 1` samples the variance is normalized by `k`; with a single
/// sample it is defined as zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualStats {
    count: usize,
    mean: f64,
    sum_sq_dev: f64,
}

impl ResidualStats {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `z` and returns `(S_hat, z_bar)`.
    pub fn push(&mut self, z: f64) -> (f64, f64) {
        self.count += 1;
        let delta = z - self.mean;
        self.mean += delta / self.count as f64;
        self.sum_sq_dev += delta * (z - self.mean);
        (self.variance(), self.mean)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.sum_sq_dev / (self.count - 1) as f64
        }
    }
}

/// Which branch of the covariance adaptation produced `(V1, V2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AseCase {
    /// Step 0: `P_f,0 = 0` is fixed, `V2 = 0`.
    Initial,
    /// Some grid point left a positive variance gap; `V2` absorbs it.
    Positive,
    /// No grid point left a positive gap; `V2 = 0`.
    Empty,
}

/// Result of one covariance adaptation.
#[derive(Clone, Debug, PartialEq)]
pub struct AseOutcome {
    pub case: AseCase,
    /// Chosen process-noise scale; `V1 = eta I`.
    pub eta: f64,
    pub v2: f64,
    /// Forecast covariance `A P_da A^T + eta I` at the chosen grid point.
    pub p_f: DMatrix<f64>,
    /// `S_hat - C P_f C^T` at the chosen grid point.
    pub gap: f64,
}

/// Index of the entry of `values` closest to `target`; ties go to the first.
fn argmin_distance(values: &[f64], target: f64) -> usize {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (i, v) in values.iter().enumerate() {
        let d = (v - target).abs();
        if d < best_dist {
            best = i;
            best_dist = d;
        }
    }
    best
}

/// Picks `V1 = eta I` and `V2` so that the Kalman-predicted residual variance
/// `C P_f C^T + V2` matches the sample variance `s_hat`.
///
/// Every grid value of `eta` is tried against `P_f(eta) = A p_da_prev A^T + eta I`.
pub fn ase_adapt(
    model: &IntegratorModel,
    cfg: &AseConfig,
    p_da_prev: &DMatrix<f64>,
    s_hat: f64,
) -> AseOutcome {
    let n = model.dim();
    let propagated = model.a() * p_da_prev * model.a().transpose();
    let base = model.c_quad(&propagated);
    let cc = model.c().dot(model.c());

    let grid = cfg.grid();
    let gaps: Vec<f64> = grid.iter().map(|eta| s_hat - (base + eta * cc)).collect();

    let (lo, hi) = gaps
        .iter()
        .filter(|g| **g > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| {
            (lo.min(*g), hi.max(*g))
        });

    let (case, idx) = if lo.is_finite() {
        let target = cfg.alpha * lo + (1.0 - cfg.alpha) * hi;
        (AseCase::Positive, argmin_distance(&gaps, target))
    } else {
        (AseCase::Empty, argmin_distance(&gaps, 0.0))
    };

    let eta = grid[idx];
    let gap = gaps[idx];
    let v2 = match case {
        AseCase::Positive => gap,
        _ => 0.0,
    };
    let p_f = symmetrize(propagated + DMatrix::identity(n, n) * eta);
    AseOutcome {
        case,
        eta,
        v2,
        p_f,
        gap,
    }
}

/// Recursive least-squares minimizer of the retrospective cost.
///
/// Each update folds one step of data into
///
/// ```text
/// sum_i [ R_z (z_i - d_f,i + Phi_f,i th)^2 + R_d (Phi_i th)^2 ] + th^T R_theta th
/// ```
///
/// and leaves its exact minimizer in [`theta`](Self::theta).
#[derive(Clone, Debug)]
pub struct RlsEstimator {
    theta: DVector<f64>,
    p: DMatrix<f64>,
    r_tilde_inv: Matrix2<f64>,
}

impl RlsEstimator {
    pub fn new(cfg: &RlsConfig) -> Result<Self> {
        cfg.validate()?;
        let l = cfg.coeff_len();
        Ok(Self {
            theta: DVector::zeros(l),
            p: DMatrix::identity(l, l) / cfg.r_theta_scale,
            r_tilde_inv: Matrix2::new(1.0 / cfg.r_z, 0.0, 0.0, 1.0 / cfg.r_d),
        })
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Folds in one step. `phi_f` and `phi` are the filtered and raw
    /// regressors (length `l_theta`).
    pub fn update(
        &mut self,
        z: f64,
        phi_f: &DVector<f64>,
        d_hat_f: f64,
        phi: &DVector<f64>,
    ) -> Result<()> {
        // P Phi~^T as two columns
        let p_phi_f = &self.p * phi_f;
        let p_phi = &self.p * phi;

        let m = self.r_tilde_inv
            + Matrix2::new(
                phi_f.dot(&p_phi_f),
                phi_f.dot(&p_phi),
                phi.dot(&p_phi_f),
                phi.dot(&p_phi),
            );
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if !(det.is_finite() && det.abs() > f64::MIN_POSITIVE) {
            return Err(Error::Numerical(format!(
                "RLS gain matrix is singular (det = {det})"
            )));
        }
        let gamma = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det;

        let innovation = Vector2::new(z - d_hat_f + phi_f.dot(&self.theta), phi.dot(&self.theta));
        let w = gamma * innovation;
        self.theta -= &p_phi_f * w[0] + &p_phi * w[1];

        // P -= (P Phi~^T) Gamma (P Phi~^T)^T
        let g = gamma;
        self.p.ger(-g[(0, 0)], &p_phi_f, &p_phi_f, 1.0);
        self.p.ger(-g[(0, 1)], &p_phi_f, &p_phi, 1.0);
        self.p.ger(-g[(1, 0)], &p_phi, &p_phi_f, 1.0);
        self.p.ger(-g[(1, 1)], &p_phi, &p_phi, 1.0);
        symmetrize_in_place(&mut self.p);
        Ok(())
    }
}

/// Markov parameters `H_1..H_nf` of the closed-loop forecast dynamics.
///
/// `abar_recent[j]` is `A_bar_{k-1-j}` (most recent first). `H_1 = C B` for
/// `k >= 1`, `H_i = C A_bar_{k-1} ... A_bar_{k-i+1} B` for `2 <= i <= k`, and
/// `H_i = 0` for `i > k`.
pub fn markov_parameters(
    model: &IntegratorModel,
    abar_recent: &[DMatrix<f64>],
    k: usize,
    filter_length: usize,
) -> Vec<f64> {
    let mut h = vec![0.0; filter_length];
    // row vector C A_bar_{k-1} ... A_bar_{k-i+1}, built left to right
    let mut row = model.c().transpose();
    for (i, slot) in h.iter_mut().enumerate() {
        let i1 = i + 1;
        if i1 > k {
            break;
        }
        if i1 >= 2 {
            row *= &abar_recent[i1 - 2];
        }
        *slot = (&row * model.b())[(0, 0)];
    }
    h
}

/// Per-step record exposed for trace output.
#[derive(Clone, Debug, PartialEq)]
pub struct StepTrace {
    pub k: usize,
    pub z: f64,
    pub d_hat: f64,
    pub s_hat: f64,
    pub eta: f64,
    pub v2: f64,
    pub case: AseCase,
    /// `C P_f C^T` with the adapted forecast covariance.
    pub predicted_var: f64,
}

/// Output of one [`Differentiator::step`].
#[derive(Clone, Debug)]
pub struct StepOutput {
    /// Derivative estimate at this step.
    pub d_hat: f64,
    /// Data-assimilation state estimate.
    pub x_da: DVector<f64>,
    pub trace: StepTrace,
}

/// Complete adaptive differentiator for one scalar signal.
#[derive(Clone, Debug)]
pub struct Differentiator {
    model: IntegratorModel,
    rls_cfg: RlsConfig,
    ase_cfg: AseConfig,
    k: usize,
    x_fc: DVector<f64>,
    x_da: DVector<f64>,
    p_f: DMatrix<f64>,
    p_da: DMatrix<f64>,
    rls: RlsEstimator,
    stats: ResidualStats,
    /// `d_{k-1}, d_{k-2}, ...`
    d_hist: VecDeque<f64>,
    /// `z_{k-1}, z_{k-2}, ...` (the current residual is prepended when forming `Phi_k`)
    z_hist: VecDeque<f64>,
    /// `Phi_{k-1}, Phi_{k-2}, ...`
    phi_hist: VecDeque<DVector<f64>>,
    /// `A_bar_{k-1}, A_bar_{k-2}, ...`
    abar_hist: VecDeque<DMatrix<f64>>,
    v1_eta: f64,
    v2: f64,
}

impl Differentiator {
    pub fn new(model: IntegratorModel, rls_cfg: RlsConfig, ase_cfg: AseConfig) -> Result<Self> {
        rls_cfg.validate()?;
        ase_cfg.validate()?;
        let n = model.dim();
        let l = rls_cfg.coeff_len();
        let n_e = rls_cfg.estimator_order;
        let n_f = rls_cfg.filter_length;
        Ok(Self {
            rls: RlsEstimator::new(&rls_cfg)?,
            k: 0,
            x_fc: DVector::zeros(n),
            x_da: DVector::zeros(n),
            p_f: DMatrix::zeros(n, n),
            p_da: DMatrix::zeros(n, n),
            stats: ResidualStats::new(),
            d_hist: VecDeque::from(vec![0.0; n_e.max(n_f)]),
            z_hist: VecDeque::from(vec![0.0; n_e]),
            phi_hist: VecDeque::from(vec![DVector::zeros(l); n_f]),
            abar_hist: VecDeque::from(vec![DMatrix::zeros(n, n); n_f]),
            v1_eta: 0.0,
            v2: 0.0,
            model,
            rls_cfg,
            ase_cfg,
        })
    }

    pub fn model(&self) -> &IntegratorModel {
        &self.model
    }

    /// Number of samples processed so far (the index of the next step).
    pub fn steps_taken(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> &DVector<f64> {
        self.rls.theta()
    }

    pub fn rls_covariance(&self) -> &DMatrix<f64> {
        self.rls.covariance()
    }

    /// Forecast covariance `P_f` used at the most recent step.
    pub fn forecast_covariance(&self) -> &DMatrix<f64> {
        &self.p_f
    }

    pub fn assimilation_covariance(&self) -> &DMatrix<f64> {
        &self.p_da
    }

    /// Current `(eta, V2)`, where `V1 = eta I`.
    pub fn noise_covariances(&self) -> (f64, f64) {
        (self.v1_eta, self.v2)
    }

    /// Filtered regressor and filtered input estimate for the current step,
    /// from the Markov parameters of the stored closed-loop history.
    fn filtered_regressors(&self) -> (DVector<f64>, f64) {
        let n_f = self.rls_cfg.filter_length;
        let abar: Vec<DMatrix<f64>> = self.abar_hist.iter().cloned().collect();
        let h = markov_parameters(&self.model, &abar, self.k, n_f);
        let mut phi_f = DVector::zeros(self.rls_cfg.coeff_len());
        let mut d_f = 0.0;
        for (i, hi) in h.iter().enumerate() {
            if *hi != 0.0 {
                phi_f.axpy(*hi, &self.phi_hist[i], 1.0);
                d_f += hi * self.d_hist[i];
            }
        }
        (phi_f, d_f)
    }

    /// `Phi_k = [d_{k-1} .. d_{k-n_e}, z_k .. z_{k-n_e}]`.
    fn regressor(&self, z: f64) -> DVector<f64> {
        let n_e = self.rls_cfg.estimator_order;
        let mut phi = DVector::zeros(self.rls_cfg.coeff_len());
        for i in 0..n_e {
            phi[i] = self.d_hist[i];
        }
        phi[n_e] = z;
        for i in 0..n_e {
            phi[n_e + 1 + i] = self.z_hist[i];
        }
        phi
    }

    /// Processes one sample and returns the derivative estimate for it.
    pub fn step(&mut self, y: f64) -> Result<StepOutput> {
        let k = self.k;
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sample {k} is not finite: {y}"
            )));
        }
        let n = self.model.dim();
        if k == 0 {
            // anchor the forecast at the first sample; the whole recursion is
            // invariant to a constant output offset since A e1 = e1 and C e1 = 1
            self.x_fc[0] = y;
        }

        let y_fc = self.model.c().dot(&self.x_fc);
        let z = y_fc - y;
        let (s_hat, _) = self.stats.push(z);

        let ase = if k == 0 {
            AseOutcome {
                case: AseCase::Initial,
                eta: self.ase_cfg.eta_low,
                v2: 0.0,
                p_f: DMatrix::zeros(n, n),
                gap: s_hat,
            }
        } else {
            ase_adapt(&self.model, &self.ase_cfg, &self.p_da, s_hat)
        };
        self.p_f = ase.p_f.clone();
        self.v1_eta = ase.eta;
        self.v2 = ase.v2;

        // K = -P_f C^T (C P_f C^T + V2)^-1, zero when the predicted variance vanishes
        let p_f_c = &self.p_f * self.model.c();
        let predicted_var = p_f_c.dot(self.model.c());
        let innovation_var = predicted_var + self.v2;
        let gain = if innovation_var > 0.0 {
            -p_f_c / innovation_var
        } else {
            DVector::zeros(n)
        };
        self.x_da = &self.x_fc + &gain * z;
        let closed_loop = DMatrix::identity(n, n) + &gain * self.model.c().transpose();
        self.p_da = symmetrize(&closed_loop * &self.p_f);

        let phi = self.regressor(z);
        let d_hat = phi.dot(self.rls.theta());

        let (phi_f, d_f) = self.filtered_regressors();
        self.rls.update(z, &phi_f, d_f, &phi)?;

        let abar = self.model.a() * &closed_loop;
        push_bounded(&mut self.abar_hist, abar);
        push_bounded(&mut self.phi_hist, phi);
        push_bounded(&mut self.d_hist, d_hat);
        push_bounded(&mut self.z_hist, z);

        self.x_fc = self.model.a() * &self.x_da + self.model.b() * d_hat;

        self.check_finite(d_hat)?;
        self.k += 1;

        Ok(StepOutput {
            d_hat,
            x_da: self.x_da.clone(),
            trace: StepTrace {
                k,
                z,
                d_hat,
                s_hat,
                eta: ase.eta,
                v2: ase.v2,
                case: ase.case,
                predicted_var,
            },
        })
    }

    fn check_finite(&self, d_hat: f64) -> Result<()> {
        let diverged = |what: &str| {
            Err(Error::Diverged {
                step: self.k,
                what: what.to_string(),
            })
        };
        if !d_hat.is_finite() {
            return diverged("input estimate");
        }
        if !self
            .x_fc
            .iter()
            .chain(self.x_da.iter())
            .all(|v| v.is_finite())
        {
            return diverged("state estimate");
        }
        if !self.p_da.iter().all(|v| v.is_finite()) {
            return diverged("state covariance");
        }
        if !self.rls.theta().iter().all(|v| v.is_finite()) {
            return diverged("estimator coefficients");
        }
        if !self.rls.covariance().iter().all(|v| v.is_finite()) {
            return diverged("estimator covariance");
        }
        Ok(())
    }
}

fn push_bounded<T>(buf: &mut VecDeque<T>, item: T) {
    if buf.is_empty() {
        return;
    }
    buf.pop_back();
    buf.push_front(item);
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let mut m = m;
    symmetrize_in_place(&mut m);
    m
}

fn symmetrize_in_place(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    m.clone().symmetric_eigenvalues().min()
}
