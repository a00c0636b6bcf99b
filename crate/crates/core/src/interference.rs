//! Motor-driven sensor interference: the three function families, the null
//! control, and the mixing of interference with environmental input.
//!
//! Interference is ipsilateral: each motor perturbs the sensor on its own
//! side. All functions map motor values in [-1, 1] into [0, 1] and are even
//! in the motor value (the sinusoidal variant through |m| in its phase rate).

use crate::scalar::{lit, Scalar};
use crate::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceKind {
    Null,
    Sigmoidal,
    Squared,
    Sinusoidal,
}

impl InterferenceKind {
    pub fn name(self) -> &'static str {
        match self {
            InterferenceKind::Null => "null",
            InterferenceKind::Sigmoidal => "sigmoidal",
            InterferenceKind::Squared => "squared",
            InterferenceKind::Sinusoidal => "sinusoidal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "null" => Some(InterferenceKind::Null),
            "sigmoidal" => Some(InterferenceKind::Sigmoidal),
            "squared" => Some(InterferenceKind::Squared),
            "sinusoidal" => Some(InterferenceKind::Sinusoidal),
            _ => None,
        }
    }
}

/// Which interference function runs, its constants, and the mixing weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceSpec<T> {
    pub kind: InterferenceKind,
    /// Steepness of the sigmoidal transition.
    pub k: T,
    /// Midpoint of the sigmoidal transition.
    pub p: T,
    /// Base phase rate of the sinusoidal variant.
    pub b: T,
    /// Frequency range of the sinusoidal variant.
    pub r_freq: T,
    /// Weight of interference vs environmental signal in the mixed input.
    pub lambda: T,
}

impl<T: Scalar> Default for InterferenceSpec<T> {
    fn default() -> Self {
        Self {
            kind: InterferenceKind::Null,
            k: lit(50.0),
            p: lit(0.5),
            b: lit(0.1),
            r_freq: lit(8.0),
            lambda: T::zero(),
        }
    }
}

impl<T: Scalar> InterferenceSpec<T> {
    /// Default constants with the given kind and mixing weight.
    pub fn new(kind: InterferenceKind, lambda: T) -> Self {
        Self { kind, lambda, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= T::zero() && self.lambda <= T::one()) {
            return Err(SimError::InvalidConfig("interference lambda must be in [0, 1]".into()));
        }
        if !(self.k.is_finite() && self.k > T::zero()) {
            return Err(SimError::InvalidConfig("interference k must be > 0".into()));
        }
        if !self.p.is_finite() {
            return Err(SimError::InvalidConfig("interference p must be finite".into()));
        }
        if !(self.r_freq.is_finite() && self.r_freq > T::zero()) {
            return Err(SimError::InvalidConfig("interference r_freq must be > 0".into()));
        }
        if !(self.b.is_finite() && self.b >= T::zero()) {
            return Err(SimError::InvalidConfig("interference b must be >= 0".into()));
        }
        Ok(())
    }

    /// Interference for one side given that side's motor value and current
    /// sinusoid phase. Motor values are the post-scaling outputs that drive
    /// the wheels.
    #[inline]
    pub fn psi(&self, m: T, phase: T) -> T {
        match self.kind {
            InterferenceKind::Null => T::zero(),
            InterferenceKind::Sigmoidal => eval_sigmoid(m, self.k, self.p),
            InterferenceKind::Squared => eval_squared(m),
            InterferenceKind::Sinusoidal => sinusoid_value(phase),
        }
    }

    /// Advance the sinusoid phases one Euler step; other kinds keep the
    /// state untouched (held at zero).
    #[inline]
    pub fn advance(
        &self,
        state: &InterferenceState<T>,
        m_left: T,
        m_right: T,
        dt: T,
    ) -> InterferenceState<T> {
        match self.kind {
            InterferenceKind::Sinusoidal => InterferenceState {
                c_left: advance_phase(state.c_left, m_left, self.b, self.r_freq, dt),
                c_right: advance_phase(state.c_right, m_right, self.b, self.r_freq, dt),
            },
            _ => *state,
        }
    }
}

/// Sinusoid phase per side; unused (held at zero) for non-sinusoidal kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceState<T> {
    pub c_left: T,
    pub c_right: T,
}

impl<T: Scalar> Default for InterferenceState<T> {
    fn default() -> Self {
        Self { c_left: T::zero(), c_right: T::zero() }
    }
}

/// Threshold-style interference: near zero below the midpoint |m| = p,
/// near one above it.
#[inline]
pub fn eval_sigmoid<T: Scalar>(m: T, k: T, p: T) -> T {
    T::one() / (T::one() + (-k * (m.abs() - p)).exp())
}

/// Unavoidable interference growing with motor magnitude.
#[inline]
pub fn eval_squared<T: Scalar>(m: T) -> T {
    m * m
}

/// Sine shifted into [0, 1].
#[inline]
pub fn sinusoid_value<T: Scalar>(c: T) -> T {
    (c.sin() + T::one()) / lit::<T>(2.0)
}

/// One Euler step of the phase, advancing faster with motor magnitude.
#[inline]
pub fn advance_phase<T: Scalar>(c: T, m: T, b: T, r_freq: T, dt: T) -> T {
    c + (b + m.abs()) * r_freq * dt
}

/// Sample both sides at the entry phase, then advance the phase with the
/// given motor values. Returns the advanced state and the sampled values.
pub fn step_sinusoid<T: Scalar>(
    state: &InterferenceState<T>,
    m_left: T,
    m_right: T,
    b: T,
    r_freq: T,
    dt: T,
) -> (InterferenceState<T>, T, T) {
    let psi_left = sinusoid_value(state.c_left);
    let psi_right = sinusoid_value(state.c_right);
    let next = InterferenceState {
        c_left: advance_phase(state.c_left, m_left, b, r_freq, dt),
        c_right: advance_phase(state.c_right, m_right, b, r_freq, dt),
    };
    (next, psi_left, psi_right)
}

/// Mixed sensor value: interference weighted by lambda against the
/// environmental activation. Additive and non-saturating: for lambda < 1 a
/// change in `s` always changes the result.
#[inline]
pub fn mix_input<T: Scalar>(s: T, psi: T, lambda: T) -> T {
    lambda * psi + (T::one() - lambda) * s
}
