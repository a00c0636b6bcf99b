//! Kinematics and light-sensor model of the two-wheeled robot.
//!
//! Everything here is a pure function of its inputs; the controller is
//! unknown to this module. Body dynamics are integrated with a fixed-step
//! Euler scheme (reproducibility over accuracy).

use crate::scalar::{lit, Scalar};
use crate::{Result, SimError};

/// Which side of the robot a sensor or motor sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    /// Index into `[left, right]` pairs.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// Robot pose. The heading accumulates without wrapping: trigonometric
/// consumers are wrap-invariant and unwrapped headings keep turn counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState<T> {
    pub x: T,
    pub y: T,
    pub alpha: T,
}

impl<T: Scalar> RobotState<T> {
    pub fn new(x: T, y: T, alpha: T) -> Self {
        Self { x, y, alpha }
    }

    /// Pose at the origin facing `alpha`.
    pub fn at_origin(alpha: T) -> Self {
        Self::new(T::zero(), T::zero(), alpha)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.alpha.is_finite()
    }
}

/// Fixed physical parameters of the robot and its environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldConfig<T> {
    /// Robot radius.
    pub radius: T,
    /// Environmental intensity factor of the light.
    pub epsilon: T,
    /// Euler integration step.
    pub dt: T,
    /// Angular sensor offsets from the heading, `[left, right]`.
    pub sensor_offsets: [T; 2],
}

impl<T: Scalar> Default for WorldConfig<T> {
    fn default() -> Self {
        Self {
            radius: lit(0.25),
            epsilon: lit(5.0),
            dt: lit(0.01),
            sensor_offsets: [lit(std::f64::consts::FRAC_PI_3), lit(-std::f64::consts::FRAC_PI_3)],
        }
    }
}

impl<T: Scalar> WorldConfig<T> {
    pub fn sensor_offset(&self, side: Side) -> T {
        self.sensor_offsets[side.index()]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > T::zero()) {
            return Err(SimError::InvalidConfig("world radius must be > 0".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon > T::zero()) {
            return Err(SimError::InvalidConfig("world epsilon must be > 0".into()));
        }
        if !(self.dt.is_finite() && self.dt > T::zero()) {
            return Err(SimError::InvalidConfig("world dt must be > 0".into()));
        }
        if self.sensor_offsets.iter().any(|o| !o.is_finite()) {
            return Err(SimError::InvalidConfig("sensor offsets must be finite".into()));
        }
        Ok(())
    }
}

/// Position of the single light source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightPosition<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> LightPosition<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Squared distance from `(x, y)` to the light.
    pub fn distance_sq(&self, x: T, y: T) -> T {
        let dx = self.x - x;
        let dy = self.y - y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, x: T, y: T) -> T {
        self.distance_sq(x, y).sqrt()
    }
}

/// One Euler step of the body dynamics.
///
/// The summed motor values drive translation along the heading; their
/// difference, scaled by the radius, drives rotation.
pub fn step_kinematics<T: Scalar>(
    state: &RobotState<T>,
    m_left: T,
    m_right: T,
    cfg: &WorldConfig<T>,
) -> Result<RobotState<T>> {
    if !state.is_finite() || !m_left.is_finite() || !m_right.is_finite() {
        return Err(SimError::NonFinite("kinematics input"));
    }
    let forward = m_left + m_right;
    let (sin_a, cos_a) = state.alpha.sin_cos();
    Ok(RobotState {
        x: state.x + forward * cos_a * cfg.dt,
        y: state.y + forward * sin_a * cfg.dt,
        alpha: state.alpha + (m_right - m_left) * cfg.radius * cfg.dt,
    })
}

/// World coordinates of the sensor mounted on the perimeter at the given
/// angular offset from the heading.
pub fn sensor_position<T: Scalar>(state: &RobotState<T>, offset: T, cfg: &WorldConfig<T>) -> (T, T) {
    let a = state.alpha + offset;
    (state.x + a.cos() * cfg.radius, state.y + a.sin() * cfg.radius)
}

/// Environmental activation of the sensor at `offset`.
///
/// The cosine between the sensor's outward facing and the direction to the
/// light (negative values clamped to zero) is attenuated by the squared
/// sensor-light distance and scaled by the intensity factor. A light sitting
/// exactly on the sensor point saturates the sensor at `epsilon`.
pub fn env_sensor_activation<T: Scalar>(
    state: &RobotState<T>,
    offset: T,
    light: &LightPosition<T>,
    cfg: &WorldConfig<T>,
) -> T {
    let (sx, sy) = sensor_position(state, offset, cfg);
    let cx = light.x - sx;
    let cy = light.y - sy;
    let dist_sq = cx * cx + cy * cy;
    if dist_sq == T::zero() {
        return cfg.epsilon;
    }
    let a = state.alpha + offset;
    let (sin_a, cos_a) = a.sin_cos();
    let facing = (cos_a * cx + sin_a * cy) / dist_sq.sqrt();
    if facing <= T::zero() {
        T::zero()
    } else {
        facing / (T::one() + dist_sq) * cfg.epsilon
    }
}
