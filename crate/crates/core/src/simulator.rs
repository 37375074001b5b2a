//! Figure-8 ground truth, noisy sensor synthesis, and fault injection.
//!
//! The vehicle position relative to the radar target (the Earth-frame origin)
//! is
//!
//! ```text
//! x(t) = 2 + sin(2t)
//! y(t) = 2 + sin(2t) cos(2t) = 2 + sin(4t) / 2
//! ```
//!
//! sampled at `t = k Ts`. All derivatives are closed form. The vehicle is
//! level, so its attitude is the single azimuth `theta`, and the `z` channels
//! of every physical vector are identically zero.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kinematics::{rotation_about_z, Vec3};

/// Standard gravity used to convert `g`-denominated accelerometer figures.
pub const G: f64 = 9.8;

/// How the body `x` axis is oriented along the trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeadingMode {
    /// Body `x` along the velocity (`theta = atan2(y', x')`).
    #[default]
    Velocity,
    /// Body `x` along the line from the radar target to the vehicle
    /// (`theta = atan2(y, x)`), so the radar reads `r = (|R|, 0, 0)`.
    LineOfSight,
}

impl HeadingMode {
    pub fn name(&self) -> &'static str {
        match self {
            HeadingMode::Velocity => "velocity",
            HeadingMode::LineOfSight => "line_of_sight",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "velocity" => Some(HeadingMode::Velocity),
            "line_of_sight" => Some(HeadingMode::LineOfSight),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryConfig {
    pub sample_time: f64,
    pub k_start: usize,
    pub k_end: usize,
    pub heading: HeadingMode,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        Self {
            sample_time: 0.01,
            k_start: 1,
            k_end: 6000,
            heading: HeadingMode::Velocity,
        }
    }
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_time.is_finite() && self.sample_time > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sample time must be positive, got {}",
                self.sample_time
            )));
        }
        if self.k_end < self.k_start {
            return Err(Error::InvalidConfig(format!(
                "empty step range [{}, {}]",
                self.k_start, self.k_end
            )));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        self.k_end - self.k_start + 1
    }
}

/// Exact kinematic state at one step.
#[derive(Clone, Debug, PartialEq)]
pub struct TruthSample {
    pub k: usize,
    pub t: f64,
    /// `R|_E`, position of the vehicle relative to the target.
    pub position: Vec3,
    /// `R'|_E`
    pub velocity: Vec3,
    /// `R''|_E`
    pub acceleration: Vec3,
    /// Unwrapped azimuth.
    pub heading: f64,
    pub heading_rate: f64,
    pub heading_accel: f64,
    /// `r|_B`
    pub r_body: Vec3,
    /// `r'|_B`, derivative taken in the body frame.
    pub r_dot_body: Vec3,
    /// `r''|_B`, second derivative taken in the body frame.
    pub r_ddot_body: Vec3,
    /// `A|_B = O_B/E R''`
    pub accel_body: Vec3,
}

impl TruthSample {
    pub fn omega(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.heading_rate)
    }

    pub fn omega_dot(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, self.heading_accel)
    }
}

/// Position and its first three time derivatives in the Earth frame.
fn figure8_earth(t: f64) -> [Vec3; 4] {
    let (s2, c2) = (2.0 * t).sin_cos();
    let (s4, c4) = (4.0 * t).sin_cos();
    [
        Vec3::new(2.0 + s2, 2.0 + s2 * c2, 0.0),
        Vec3::new(2.0 * c2, 2.0 * c4, 0.0),
        Vec3::new(-4.0 * s2, -8.0 * s4, 0.0),
        Vec3::new(-8.0 * c2, -32.0 * c4, 0.0),
    ]
}

/// Wrapped angle of the reference vector plus its first two derivatives.
fn heading_of(b: &Vec3, b_dot: &Vec3, b_ddot: &Vec3) -> Option<(f64, f64, f64)> {
    let den = b.x * b.x + b.y * b.y;
    if den <= f64::EPSILON {
        return None;
    }
    let num = b.x * b_dot.y - b.y * b_dot.x;
    let num_dot = b.x * b_ddot.y - b.y * b_ddot.x;
    let den_dot = 2.0 * (b.x * b_dot.x + b.y * b_dot.y);
    let rate = num / den;
    let accel = (num_dot * den - num * den_dot) / (den * den);
    Some((b.y.atan2(b.x), rate, accel))
}

fn unwrap_near(angle: f64, reference: f64) -> f64 {
    angle + TAU * ((reference - angle) / TAU).round()
}

fn truth_with_heading(
    k: usize,
    cfg: &TrajectoryConfig,
    previous: Option<f64>,
) -> Result<TruthSample> {
    let t = k as f64 * cfg.sample_time;
    let [pos, vel, acc, jerk] = figure8_earth(t);
    let (wrapped, rate, accel) = match cfg.heading {
        HeadingMode::Velocity => heading_of(&vel, &acc, &jerk),
        HeadingMode::LineOfSight => heading_of(&pos, &vel, &acc),
    }
    .ok_or(Error::DegenerateHeading { step: k })?;
    let heading = previous.map_or(wrapped, |p| unwrap_near(wrapped, p));

    // r = M R with M = O_B/E(theta); dM/dtheta = M', d2M/dtheta2 = -M
    let (s, c) = heading.sin_cos();
    let m = |v: &Vec3| Vec3::new(c * v.x + s * v.y, -s * v.x + c * v.y, v.z);
    let m_prime = |v: &Vec3| Vec3::new(-s * v.x + c * v.y, -c * v.x - s * v.y, 0.0);

    let r_body = m(&pos);
    let r_dot_body = rate * m_prime(&pos) + m(&vel);
    let r_ddot_body =
        accel * m_prime(&pos) - rate * rate * m(&pos) + 2.0 * rate * m_prime(&vel) + m(&acc);
    let accel_body = m(&acc);

    Ok(TruthSample {
        k,
        t,
        position: pos,
        velocity: vel,
        acceleration: acc,
        heading,
        heading_rate: rate,
        heading_accel: accel,
        r_body,
        r_dot_body,
        r_ddot_body,
        accel_body,
    })
}

/// Ground truth at step `k`.
///
/// The heading is unwrapped continuously from `k = 0`, so this walks the
/// trajectory once; use [`Figure8`] to generate a whole run.
pub fn figure8_truth(k: usize, cfg: &TrajectoryConfig) -> Result<TruthSample> {
    cfg.validate()?;
    let mut previous = None;
    for j in 0..k {
        previous = Some(truth_with_heading(j, cfg, previous)?.heading);
    }
    truth_with_heading(k, cfg, previous)
}

/// Sequential generator over `k_start..=k_end` with a continuous heading.
#[derive(Clone, Debug)]
pub struct Figure8 {
    cfg: TrajectoryConfig,
    next_k: usize,
    previous: Option<f64>,
}

impl Figure8 {
    pub fn new(cfg: TrajectoryConfig) -> Result<Self> {
        cfg.validate()?;
        let mut previous = None;
        for j in 0..cfg.k_start {
            previous = Some(truth_with_heading(j, &cfg, previous)?.heading);
        }
        Ok(Self {
            next_k: cfg.k_start,
            cfg,
            previous,
        })
    }
}

impl Iterator for Figure8 {
    type Item = Result<TruthSample>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_k > self.cfg.k_end {
            return None;
        }
        let out = truth_with_heading(self.next_k, &self.cfg, self.previous);
        if let Ok(ref s) = out {
            self.previous = Some(s.heading);
        }
        self.next_k += 1;
        Some(out)
    }
}

/// White Gaussian noise levels (standard deviations).
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseConfig {
    /// Radar, per horizontal axis, m.
    pub sigma_r: f64,
    /// `z` rate gyro, rad/s.
    pub sigma_omega: f64,
    /// Accelerometer, per horizontal axis, in multiples of [`G`].
    pub sigma_accel_g: f64,
    /// Compass, rad.
    pub sigma_theta: f64,
    pub seed: u64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            sigma_r: 0.01,
            sigma_omega: 0.001,
            sigma_accel_g: 0.1,
            sigma_theta: 0.0,
            seed: 0,
        }
    }
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self {
            sigma_r: 0.0,
            sigma_omega: 0.0,
            sigma_accel_g: 0.0,
            sigma_theta: 0.0,
            seed: 0,
        }
    }

    pub fn sigma_accel(&self) -> f64 {
        self.sigma_accel_g * G
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sigma_r", self.sigma_r),
            ("sigma_omega", self.sigma_omega),
            ("sigma_accel_g", self.sigma_accel_g),
            ("sigma_theta", self.sigma_theta),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// One step of on-board measurements.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorSample {
    pub k: usize,
    pub t: f64,
    /// Compass azimuth, rad.
    pub theta: f64,
    /// Radar, m, body frame.
    pub r: Vec3,
    /// Rate gyro, rad/s, body frame.
    pub omega: Vec3,
    /// Accelerometer, m/s^2, body frame.
    pub accel: Vec3,
}

impl SensorSample {
    /// The measurement an ideal sensor suite would report.
    pub fn exact(truth: &TruthSample) -> Self {
        Self {
            k: truth.k,
            t: truth.t,
            theta: truth.heading,
            r: Vec3::new(truth.r_body.x, truth.r_body.y, 0.0),
            omega: Vec3::new(0.0, 0.0, truth.heading_rate),
            accel: Vec3::new(truth.accel_body.x, truth.accel_body.y, 0.0),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite()
            && self
                .r
                .iter()
                .chain(self.omega.iter())
                .chain(self.accel.iter())
                .all(|v| v.is_finite())
    }
}

/// Seeded sensor-noise source.
///
/// Six standard normals are drawn per step in a fixed order (compass, radar
/// x/y, gyro, accelerometer x/y) whatever the noise levels, so changing one
/// sigma never shifts the noise stream of another channel.
#[derive(Clone, Debug)]
pub struct SensorSuite {
    noise: NoiseConfig,
    rng: ChaCha8Rng,
}

impl SensorSuite {
    pub fn new(noise: NoiseConfig) -> Result<Self> {
        noise.validate()?;
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(noise.seed),
            noise,
        })
    }

    fn draw(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn measure(&mut self, truth: &TruthSample) -> SensorSample {
        let n: [f64; 6] = std::array::from_fn(|_| self.draw());
        let sa = self.noise.sigma_accel();
        let mut s = SensorSample::exact(truth);
        s.theta += self.noise.sigma_theta * n[0];
        s.r.x += self.noise.sigma_r * n[1];
        s.r.y += self.noise.sigma_r * n[2];
        s.omega.z += self.noise.sigma_omega * n[3];
        s.accel.x += sa * n[4];
        s.accel.y += sa * n[5];
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sensor {
    Compass,
    Radar,
    ZGyro,
    XAccel,
    YAccel,
}

impl Sensor {
    pub const ALL: [Sensor; 5] = [
        Sensor::Compass,
        Sensor::Radar,
        Sensor::ZGyro,
        Sensor::XAccel,
        Sensor::YAccel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Sensor::Compass => "compass",
            Sensor::Radar => "radar",
            Sensor::ZGyro => "z_gyro",
            Sensor::XAccel => "x_accel",
            Sensor::YAccel => "y_accel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultKind {
    /// Constant offset from `start_time` on.
    Bias,
    /// Offset growing linearly from zero at `start_time`.
    Drift,
}

impl FaultKind {
    pub fn name(&self) -> &'static str {
        match self {
            FaultKind::Bias => "bias",
            FaultKind::Drift => "drift",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "bias" => Some(FaultKind::Bias),
            "drift" => Some(FaultKind::Drift),
            _ => None,
        }
    }
}

/// A single-sensor fault.
///
/// `magnitude` is in the sensor's units (per second for drift). Accelerometer
/// magnitudes are in multiples of [`G`]; radar faults offset both horizontal
/// axes.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultSpec {
    pub sensor: Sensor,
    pub kind: FaultKind,
    pub magnitude: f64,
    pub start_time: f64,
}

impl FaultSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.magnitude.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "fault magnitude must be finite, got {}",
                self.magnitude
            )));
        }
        if !(self.start_time.is_finite() && self.start_time >= 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fault start time must be non-negative, got {}",
                self.start_time
            )));
        }
        Ok(())
    }

    /// Additive offset at time `t`, in the sensor's native units.
    pub fn offset_at(&self, t: f64) -> f64 {
        if t < self.start_time {
            return 0.0;
        }
        let scale = match self.sensor {
            Sensor::XAccel | Sensor::YAccel => G,
            _ => 1.0,
        };
        let value = match self.kind {
            FaultKind::Bias => self.magnitude,
            FaultKind::Drift => self.magnitude * (t - self.start_time),
        };
        value * scale
    }
}

/// Applies `fault` to a measurement. Only the faulted channel changes.
pub fn inject_fault(sample: &SensorSample, fault: &FaultSpec) -> SensorSample {
    let mut out = sample.clone();
    let offset = fault.offset_at(sample.t);
    if offset == 0.0 {
        return out;
    }
    match fault.sensor {
        Sensor::Compass => out.theta += offset,
        Sensor::Radar => {
            out.r.x += offset;
            out.r.y += offset;
        }
        Sensor::ZGyro => out.omega.z += offset,
        Sensor::XAccel => out.accel.x += offset,
        Sensor::YAccel => out.accel.y += offset,
    }
    out
}

/// Applies the rotation `theta` to a body vector. Shorthand used by tests.
pub fn earth_from_body(theta: f64, v: &Vec3) -> Vec3 {
    rotation_about_z(theta)
        .map(|m| m.apply(v))
        .unwrap_or_else(|_| Vec3::from_element(f64::NAN))
}
