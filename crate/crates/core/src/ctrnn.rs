//! Continuous-time recurrent neural network: leaky-integrator state update,
//! motor output scaling, and centre-crossing bias initialisation.

use crate::scalar::{lit, Scalar};
use crate::{Result, SimError};

/// Time-constant floor. The paper-style bound is open at zero; Euler with
/// dt=0.01 needs dt/tau < 1 with margin, and 0.05 gives dt/tau = 0.2.
pub const TAU_MIN: f64 = 0.05;
pub const TAU_MAX: f64 = 3.0;
pub const BIAS_BOUND: f64 = 5.0;
pub const WEIGHT_BOUND: f64 = 5.0;
pub const DEFAULT_NEURONS: usize = 10;
pub const DEFAULT_OMEGA_MAX: f64 = 5.0;
pub const DEFAULT_OMEGA_INPUT: f64 = 5.0;

/// Dense connection weights. `get(from, to)` is the influence of neuron
/// `from` on neuron `to`; storage is contiguous per destination row.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<T> {
    n: usize,
    w: Vec<T>,
}

impl<T: Scalar> WeightMatrix<T> {
    pub fn zeroed(n: usize) -> Self {
        Self { n, w: vec![T::zero(); n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, from: usize, to: usize) -> T {
        self.w[to * self.n + from]
    }

    pub fn set(&mut self, from: usize, to: usize, value: T) {
        self.w[to * self.n + from] = value;
    }

    /// Contiguous weights into neuron `to`, indexed by source.
    #[inline]
    pub fn incoming(&self, to: usize) -> &[T] {
        &self.w[to * self.n..(to + 1) * self.n]
    }

    pub fn incoming_mut(&mut self, to: usize) -> &mut [T] {
        &mut self.w[to * self.n..(to + 1) * self.n]
    }

    pub fn incoming_sum(&self, to: usize) -> T {
        self.incoming(to).iter().fold(T::zero(), |acc, &w| acc + w)
    }
}

/// Standard increasing logistic.
#[inline]
pub fn sigma<T: Scalar>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

/// Motor output scaling: odd sigmoid mapping an activation into (-1, 1).
#[inline]
pub fn output_scale<T: Scalar>(y: T, omega_max: T) -> T {
    lit::<T>(2.0) / (T::one() + (-y / omega_max.sqrt()).exp()) - T::one()
}

/// Per-neuron parameters plus the fixed wiring.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams<T> {
    pub tau: Vec<T>,
    pub beta: Vec<T>,
    pub weights: WeightMatrix<T>,
    /// Scale constant of the motor output sigmoid.
    pub omega_max: T,
    /// Gain applied to the mixed sensor value before it enters an input neuron.
    pub omega_input: T,
    /// Zero-based indices of the sensor-driven neurons, `[left, right]`.
    pub input_ids: [usize; 2],
    /// Zero-based indices of the motor neurons, `[left, right]`.
    pub output_ids: [usize; 2],
}

impl<T: Scalar> NetworkParams<T> {
    /// Default wiring for `n` neurons: the first two neurons take the
    /// sensor inputs, the last two drive the motors.
    pub fn default_wiring(n: usize) -> ([usize; 2], [usize; 2]) {
        ([0, 1], [n - 2, n - 1])
    }

    /// Blank network: unit time constants, zero biases and weights.
    pub fn zeroed(n: usize) -> Self {
        let (input_ids, output_ids) = Self::default_wiring(n);
        Self {
            tau: vec![T::one(); n],
            beta: vec![T::zero(); n],
            weights: WeightMatrix::zeroed(n),
            omega_max: lit(DEFAULT_OMEGA_MAX),
            omega_input: lit(DEFAULT_OMEGA_INPUT),
            input_ids,
            output_ids,
        }
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 4 {
            return Err(SimError::InvalidConfig(
                "network needs at least 4 neurons (2 inputs, 2 outputs)".into(),
            ));
        }
        if self.beta.len() != n || self.weights.n() != n {
            return Err(SimError::InvalidConfig("network parameter sizes disagree".into()));
        }
        let (tau_min, tau_max) = (lit::<T>(TAU_MIN), lit::<T>(TAU_MAX));
        for (i, &t) in self.tau.iter().enumerate() {
            if !(t.is_finite() && t >= tau_min && t <= tau_max) {
                return Err(SimError::InvalidConfig(format!(
                    "tau[{i}] = {t} outside [{TAU_MIN}, {TAU_MAX}]"
                )));
            }
        }
        let bias_bound = lit::<T>(BIAS_BOUND);
        for (i, &b) in self.beta.iter().enumerate() {
            if !(b.is_finite() && b.abs() <= bias_bound) {
                return Err(SimError::InvalidConfig(format!(
                    "beta[{i}] = {b} outside [-{BIAS_BOUND}, {BIAS_BOUND}]"
                )));
            }
        }
        let weight_bound = lit::<T>(WEIGHT_BOUND);
        for to in 0..n {
            for from in 0..n {
                let w = self.weights.get(from, to);
                if !(w.is_finite() && w.abs() <= weight_bound) {
                    return Err(SimError::InvalidConfig(format!(
                        "weight {from}->{to} = {w} outside [-{WEIGHT_BOUND}, {WEIGHT_BOUND}]"
                    )));
                }
            }
        }
        if !(self.omega_max.is_finite() && self.omega_max > T::zero()) {
            return Err(SimError::InvalidConfig("omega_max must be > 0".into()));
        }
        if !self.omega_input.is_finite() {
            return Err(SimError::InvalidConfig("omega_input must be finite".into()));
        }
        for &i in &self.input_ids {
            if i >= n {
                return Err(SimError::InvalidConfig(format!("input neuron {i} out of range")));
            }
            if self.weights.incoming(i).iter().any(|&w| w != T::zero()) {
                return Err(SimError::InvalidConfig(format!(
                    "input neuron {i} must have all incoming weights zero"
                )));
            }
        }
        for &o in &self.output_ids {
            if o >= n {
                return Err(SimError::InvalidConfig(format!("output neuron {o} out of range")));
            }
        }
        Ok(())
    }
}

/// Live activation vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState<T> {
    pub y: Vec<T>,
}

impl<T: Scalar> NetworkState<T> {
    pub fn zeroed(n: usize) -> Self {
        Self { y: vec![T::zero(); n] }
    }

    pub fn is_finite(&self) -> bool {
        self.y.iter().all(|v| v.is_finite())
    }
}

/// One Euler step of the network dynamics.
///
/// `inputs` is the per-neuron external drive; it must be zero outside the
/// input neurons.
pub fn step_network<T: Scalar>(
    state: &NetworkState<T>,
    params: &NetworkParams<T>,
    inputs: &[T],
    dt: T,
) -> Result<NetworkState<T>> {
    params.validate()?;
    if !(dt.is_finite() && dt > T::zero()) {
        return Err(SimError::InvalidConfig("dt must be > 0".into()));
    }
    if state.y.len() != params.n() || inputs.len() != params.n() {
        return Err(SimError::InvalidConfig("state/input length mismatch".into()));
    }
    let mut next = state.clone();
    let mut sig = vec![T::zero(); params.n()];
    step_into(state, params, inputs, dt, &mut sig, &mut next);
    Ok(next)
}

/// Allocation-free step for hot loops. `params` must already be validated
/// and all slice lengths must agree.
#[inline]
pub(crate) fn step_into<T: Scalar>(
    state: &NetworkState<T>,
    params: &NetworkParams<T>,
    inputs: &[T],
    dt: T,
    sig: &mut [T],
    next: &mut NetworkState<T>,
) {
    let n = params.n();
    for j in 0..n {
        sig[j] = sigma(state.y[j] + params.beta[j]);
    }
    for i in 0..n {
        let incoming = params.weights.incoming(i);
        let mut sum = inputs[i] - state.y[i];
        for j in 0..n {
            sum = sum + incoming[j] * sig[j];
        }
        next.y[i] = state.y[i] + dt / params.tau[i] * sum;
    }
}

/// Biases placing each neuron's equilibrium at the centre of its activation
/// range: half the negated incoming weight sum, clamped to the bias bounds.
pub fn centre_crossing_biases<T: Scalar>(weights: &WeightMatrix<T>) -> Vec<T> {
    let bound = lit::<T>(BIAS_BOUND);
    (0..weights.n())
        .map(|i| {
            let b = -weights.incoming_sum(i) / lit::<T>(2.0);
            num_traits::clamp(b, -bound, bound)
        })
        .collect()
}
