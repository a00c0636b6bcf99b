//! Closed-loop rollout coupling body, controller, and interference, plus
//! the trial fitness measure and the clock-face probe lights.
//!
//! Tick order is sense -> mix -> network -> motor -> move. Interference at
//! tick k is computed from the motor values produced at tick k-1 (at k=0,
//! from the motors implied by the initial network state), which avoids an
//! algebraic loop between motors and sensors.

use crate::ctrnn::{output_scale, step_into, NetworkState, DEFAULT_NEURONS, DEFAULT_OMEGA_INPUT, DEFAULT_OMEGA_MAX};
use crate::evolution::{decode, NetworkGenome};
use crate::interference::{mix_input, InterferenceSpec, InterferenceState};
use crate::scalar::{lit, Scalar};
use crate::trial_log::{LogRow, TrialLog};
use crate::world::{env_sensor_activation, step_kinematics, LightPosition, RobotState, WorldConfig};
use crate::{Result, SimError};

/// Network structure the trial decodes genomes against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSettings<T> {
    pub neurons: usize,
    pub omega_max: T,
    pub omega_input: T,
}

impl<T: Scalar> Default for NetworkSettings<T> {
    fn default() -> Self {
        Self {
            neurons: DEFAULT_NEURONS,
            omega_max: lit(DEFAULT_OMEGA_MAX),
            omega_input: lit(DEFAULT_OMEGA_INPUT),
        }
    }
}

/// Artificial sensor drive: a baseline, a linear rise to a spike, a linear
/// fall to a plateau, and the plateau held for the remainder of the trial.
/// With `plateau_level == baseline` this is a lone spike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StimulusScript<T> {
    pub baseline: T,
    pub spike_time: T,
    pub rise_width: T,
    pub spike_level: T,
    pub plateau_level: T,
}

impl<T: Scalar> StimulusScript<T> {
    /// Constant-zero stimulus.
    pub fn zero() -> Self {
        Self {
            baseline: T::zero(),
            spike_time: T::zero(),
            rise_width: T::zero(),
            spike_level: T::zero(),
            plateau_level: T::zero(),
        }
    }

    pub fn value_at(&self, t: T) -> T {
        let t0 = self.spike_time - self.rise_width;
        let t2 = self.spike_time + self.rise_width;
        if t < t0 {
            self.baseline
        } else if t < self.spike_time {
            self.baseline + (self.spike_level - self.baseline) * (t - t0) / self.rise_width
        } else if t < t2 {
            self.spike_level + (self.plateau_level - self.spike_level) * (t - self.spike_time) / self.rise_width
        } else {
            self.plateau_level
        }
    }

    pub fn validate(&self, duration: T) -> Result<()> {
        for (name, v) in [
            ("baseline", self.baseline),
            ("spike_time", self.spike_time),
            ("rise_width", self.rise_width),
            ("spike_level", self.spike_level),
            ("plateau_level", self.plateau_level),
        ] {
            if !v.is_finite() {
                return Err(SimError::InvalidConfig(format!("script {name} must be finite")));
            }
        }
        if self.baseline < T::zero() || self.spike_level < T::zero() || self.plateau_level < T::zero() {
            return Err(SimError::InvalidConfig("script levels must be >= 0".into()));
        }
        if self.rise_width < T::zero() {
            return Err(SimError::InvalidConfig("script rise_width must be >= 0".into()));
        }
        if self.spike_time - self.rise_width < T::zero() || self.spike_time + self.rise_width > duration {
            return Err(SimError::InvalidConfig(format!(
                "script times outside trial duration (spike {} +/- {} vs duration {})",
                self.spike_time, self.rise_width, duration
            )));
        }
        Ok(())
    }
}

/// Optional modifications applied to a rollout. The default is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec<T> {
    /// Multipliers on the interference per side `[left, right]`; 0 removes it.
    pub interference_gain: [T; 2],
    /// A disabled sensor reads an environmental value of zero.
    pub sensor_enabled: [bool; 2],
    /// A scripted side replaces its environmental reading entirely
    /// (including a disabled sensor's forced zero).
    pub script: [Option<StimulusScript<T>>; 2],
}

impl<T: Scalar> Default for PerturbationSpec<T> {
    fn default() -> Self {
        Self {
            interference_gain: [T::one(); 2],
            sensor_enabled: [true; 2],
            script: [None, None],
        }
    }
}

impl<T: Scalar> PerturbationSpec<T> {
    pub fn validate(&self, duration: T) -> Result<()> {
        for g in self.interference_gain {
            if !(g.is_finite() && g >= T::zero()) {
                return Err(SimError::InvalidConfig("interference gain must be >= 0".into()));
            }
        }
        for script in self.script.iter().flatten() {
            script.validate(duration)?;
        }
        Ok(())
    }
}

/// Everything defining one rollout.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig<T> {
    /// Trial length in time units.
    pub duration: T,
    /// Light position; `None` runs a dark world (scripted-stimulus mode).
    pub light: Option<LightPosition<T>>,
    pub initial_state: RobotState<T>,
    /// Starting sinusoid phases (zero unless overridden).
    pub initial_phase: InterferenceState<T>,
    pub world: WorldConfig<T>,
    pub network: NetworkSettings<T>,
    pub interference: InterferenceSpec<T>,
    pub perturbation: PerturbationSpec<T>,
    /// Record a full per-step trace.
    pub log: bool,
}

impl<T: Scalar> Default for TrialConfig<T> {
    fn default() -> Self {
        Self {
            duration: lit(10.0),
            light: None,
            initial_state: RobotState::at_origin(lit(std::f64::consts::FRAC_PI_2)),
            initial_phase: InterferenceState::default(),
            world: WorldConfig::default(),
            network: NetworkSettings::default(),
            interference: InterferenceSpec::default(),
            perturbation: PerturbationSpec::default(),
            log: false,
        }
    }
}

impl<T: Scalar> TrialConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.world.validate()?;
        self.interference.validate()?;
        self.perturbation.validate(self.duration)?;
        if !(self.duration.is_finite() && self.duration > T::zero()) {
            return Err(SimError::InvalidConfig("trial duration must be > 0".into()));
        }
        let ratio = self.duration / self.world.dt;
        let rounded = ratio.round();
        if (ratio - rounded).abs() > lit(1e-6) || rounded < T::one() {
            return Err(SimError::InvalidConfig(format!(
                "trial duration {} is not a whole number of dt={} steps",
                self.duration, self.world.dt
            )));
        }
        if let Some(light) = &self.light {
            if !light.is_finite() {
                return Err(SimError::InvalidConfig("light position must be finite".into()));
            }
        }
        if !self.initial_state.is_finite() {
            return Err(SimError::InvalidConfig("initial robot state must be finite".into()));
        }
        if !(self.initial_phase.c_left.is_finite() && self.initial_phase.c_right.is_finite()) {
            return Err(SimError::InvalidConfig("initial phase must be finite".into()));
        }
        if self.network.neurons < 4 {
            return Err(SimError::InvalidConfig("network needs at least 4 neurons".into()));
        }
        if !(self.network.omega_max.is_finite() && self.network.omega_max > T::zero()) {
            return Err(SimError::InvalidConfig("omega_max must be > 0".into()));
        }
        if !self.network.omega_input.is_finite() {
            return Err(SimError::InvalidConfig("omega_input must be finite".into()));
        }
        Ok(())
    }

    /// Number of Euler moves; the trace has `steps() + 1` samples.
    pub fn steps(&self) -> usize {
        (self.duration / self.world.dt)
            .round()
            .to_usize()
            .expect("validated step count fits in usize")
    }
}

/// Time-weighted mean squared distance of one rollout (lower is better).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessRecord<T> {
    pub value: T,
    pub light: LightPosition<T>,
    pub genome_id: u64,
}

/// Output of one rollout. `fitness` is present exactly when a light was.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult<T> {
    pub fitness: Option<FitnessRecord<T>>,
    pub log: Option<TrialLog<T>>,
    pub final_state: RobotState<T>,
}

/// Run one closed-loop rollout of a genome.
pub fn run_trial<T: Scalar>(genome: &NetworkGenome<T>, cfg: &TrialConfig<T>) -> Result<TrialResult<T>> {
    cfg.validate()?;
    let n = cfg.network.neurons;
    let mut params = decode(genome, n)?;
    params.omega_max = cfg.network.omega_max;
    params.omega_input = cfg.network.omega_input;
    params.validate()?;

    let dt = cfg.world.dt;
    let steps = cfg.steps();
    let [in_left, in_right] = params.input_ids;
    let [out_left, out_right] = params.output_ids;
    let lambda = cfg.interference.lambda;
    let gains = cfg.perturbation.interference_gain;

    let mut robot = cfg.initial_state;
    let mut phase = cfg.initial_phase;
    let mut net = NetworkState::zeroed(n);
    let mut scratch = NetworkState::zeroed(n);
    let mut sig = vec![T::zero(); n];
    let mut inputs = vec![T::zero(); n];

    // motors driving the interference of tick 0 come from the initial state
    let mut m_left = output_scale(net.y[out_left], params.omega_max);
    let mut m_right = output_scale(net.y[out_right], params.omega_max);

    let mut weighted = T::zero();
    let mut weight_sum = T::zero();
    let mut rows = if cfg.log { Vec::with_capacity(steps + 1) } else { Vec::new() };

    for k in 0..=steps {
        let step_index = T::from(k).expect("step index fits in scalar");
        let t = step_index * dt;

        if let Some(light) = &cfg.light {
            weighted = weighted + light.distance_sq(robot.x, robot.y) * step_index;
            weight_sum = weight_sum + step_index;
        }

        // 1. environmental sensor values (scripts replace, lesions force zero)
        let mut s = [T::zero(); 2];
        for side in 0..2 {
            s[side] = if let Some(script) = &cfg.perturbation.script[side] {
                script.value_at(t)
            } else if !cfg.perturbation.sensor_enabled[side] {
                T::zero()
            } else if let Some(light) = &cfg.light {
                env_sensor_activation(&robot, cfg.world.sensor_offsets[side], light, &cfg.world)
            } else {
                T::zero()
            };
        }

        // 2. interference from previous-tick motors, then mix
        let psi_left = cfg.interference.psi(m_left, phase.c_left) * gains[0];
        let psi_right = cfg.interference.psi(m_right, phase.c_right) * gains[1];
        let sprime_left = mix_input(s[0], psi_left, lambda);
        let sprime_right = mix_input(s[1], psi_right, lambda);

        // 3. network step
        inputs[in_left] = params.omega_input * sprime_left;
        inputs[in_right] = params.omega_input * sprime_right;
        step_into(&net, &params, &inputs, dt, &mut sig, &mut scratch);
        std::mem::swap(&mut net, &mut scratch);

        // 4. motor outputs
        m_left = output_scale(net.y[out_left], params.omega_max);
        m_right = output_scale(net.y[out_right], params.omega_max);

        if !(net.is_finite() && m_left.is_finite() && m_right.is_finite()) {
            return Err(SimError::Divergence {
                t: t.to_f64().unwrap_or(f64::NAN),
                detail: "non-finite network state or motor output".into(),
            });
        }

        if cfg.log {
            rows.push(LogRow {
                t,
                x: robot.x,
                y: robot.y,
                alpha: robot.alpha,
                s_left: s[0],
                s_right: s[1],
                psi_left,
                psi_right,
                sprime_left,
                sprime_right,
                m_left,
                m_right,
                activations: net.y.clone(),
            });
        }

        // 5. move and advance the interference phase (not after the last sample)
        if k < steps {
            robot = step_kinematics(&robot, m_left, m_right, &cfg.world)?;
            if !robot.is_finite() {
                return Err(SimError::Divergence {
                    t: t.to_f64().unwrap_or(f64::NAN),
                    detail: "non-finite robot state".into(),
                });
            }
            phase = cfg.interference.advance(&phase, m_left, m_right, dt);
        }
    }

    let fitness = cfg.light.map(|light| FitnessRecord {
        value: weighted / weight_sum,
        light,
        genome_id: genome.id,
    });
    let log = cfg.log.then(|| TrialLog { dt, light: cfg.light, rows });
    Ok(TrialResult { fitness, log, final_state: robot })
}

/// Time-weighted mean of a squared-distance sequence; the weight is the
/// step index, so the first sample carries no weight at all.
pub fn fitness_from_trajectory<T: Scalar>(squared_distances: &[T]) -> Result<T> {
    if squared_distances.len() < 2 {
        return Err(SimError::InvalidConfig(
            "fitness needs at least two samples (all weights zero otherwise)".into(),
        ));
    }
    let mut weighted = T::zero();
    let mut weight_sum = T::zero();
    for (k, &d2) in squared_distances.iter().enumerate() {
        let w = T::from(k).expect("step index fits in scalar");
        weighted = weighted + d2 * w;
        weight_sum = weight_sum + w;
    }
    Ok(weighted / weight_sum)
}

/// Light at one clock position (1..=count), clock-face style: position
/// `count` sits at (0, radius) and positions advance clockwise.
pub fn clock_light<T: Scalar>(position: usize, radius: T, count: usize) -> LightPosition<T> {
    let idx = position % count;
    let angle = lit::<T>(std::f64::consts::TAU) * T::from(idx).unwrap() / T::from(count).unwrap();
    LightPosition::new(radius * angle.sin(), radius * angle.cos())
}

/// All probe lights in clock order (index i holds clock position i+1).
pub fn probe_lights_clock<T: Scalar>(radius: T, count: usize) -> Vec<LightPosition<T>> {
    (1..=count).map(|p| clock_light(p, radius, count)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{random_genome, NetworkGenome};
    use crate::interference::InterferenceKind;
    use approx::assert_relative_eq;

    /// All genes 0.5: zero weights and biases everywhere, motors pinned at 0.
    pub(crate) fn stationary_genome(n: usize) -> NetworkGenome<f64> {
        NetworkGenome { genes: vec![0.5; n * (n + 2)], id: 0, lineage: None }
    }

    fn base_cfg() -> TrialConfig<f64> {
        TrialConfig { light: Some(LightPosition::new(0.0, 3.0)), ..TrialConfig::default() }
    }

    #[test]
    fn stationary_genome_scores_squared_distance() {
        let cfg = base_cfg();
        let result = run_trial(&stationary_genome(10), &cfg).unwrap();
        let fitness = result.fitness.unwrap();
        assert_relative_eq!(fitness.value, 9.0, epsilon = 1e-9);
        assert_eq!(result.final_state.x, 0.0);
        assert_eq!(result.final_state.y, 0.0);
    }

    #[test]
    fn fitness_examples() {
        assert_eq!(fitness_from_trajectory(&[4.0; 7]).unwrap(), 4.0);
        assert_eq!(fitness_from_trajectory(&[123.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_relative_eq!(
            fitness_from_trajectory(&[9.0, 9.0, 1.0]).unwrap(),
            11.0 / 3.0,
            max_relative = 1e-15
        );
        assert!(fitness_from_trajectory(&[5.0]).is_err());
        assert!(fitness_from_trajectory::<f64>(&[]).is_err());
    }

    #[test]
    fn first_sample_carries_no_weight() {
        let a = fitness_from_trajectory(&[0.0, 2.0, 3.0]).unwrap();
        let b = fitness_from_trajectory(&[1e6, 2.0, 3.0]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fitness_invariant_to_time_rescaling() {
        // weighting by k or by k*dt cancels in the ratio
        let d2 = [9.0, 4.0, 1.0, 0.25, 4.0];
        let by_index = fitness_from_trajectory(&d2).unwrap();
        let dt = 0.01;
        let weighted: f64 = d2.iter().enumerate().map(|(k, v)| v * k as f64 * dt).sum();
        let weights: f64 = (0..d2.len()).map(|k| k as f64 * dt).sum();
        assert_relative_eq!(by_index, weighted / weights, max_relative = 1e-15);
    }

    #[test]
    fn probe_light_positions() {
        let lights = probe_lights_clock::<f64>(3.0, 12);
        assert_eq!(lights.len(), 12);
        // position 12 exactly at (0, 3)
        assert_eq!((lights[11].x, lights[11].y), (0.0, 3.0));
        // position 6 at (0, -3)
        assert_relative_eq!(lights[5].x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(lights[5].y, -3.0, max_relative = 1e-12);
        // position 3 at (3, 0), a clockwise quarter turn from 12
        assert_relative_eq!(lights[2].x, 3.0, max_relative = 1e-12);
        assert_relative_eq!(lights[2].y, 0.0, epsilon = 1e-12);
        for l in &lights {
            assert_relative_eq!((l.x * l.x + l.y * l.y).sqrt(), 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn log_has_one_row_per_sample() {
        let mut cfg = base_cfg();
        cfg.log = true;
        cfg.duration = 2.0;
        let result = run_trial(&stationary_genome(10), &cfg).unwrap();
        let log = result.log.unwrap();
        assert_eq!(log.rows.len(), 201);
        assert_eq!(log.rows[0].t, 0.0);
        assert!(log.rows.iter().all(|r| {
            r.t.is_finite()
                && r.x.is_finite()
                && r.alpha.is_finite()
                && r.activations.iter().all(|v| v.is_finite())
        }));
    }

    #[test]
    fn identity_perturbation_changes_nothing() {
        let mut rng = crate::rng::derive(5, &[0]);
        let genome = random_genome(&mut rng, 10, true);
        let mut cfg = base_cfg();
        cfg.log = true;
        cfg.duration = 2.0;
        cfg.interference = InterferenceSpec::new(InterferenceKind::Squared, 0.5);
        let plain = run_trial(&genome, &cfg).unwrap();
        cfg.perturbation = PerturbationSpec {
            interference_gain: [1.0, 1.0],
            sensor_enabled: [true, true],
            script: [None, None],
        };
        let explicit = run_trial(&genome, &cfg).unwrap();
        assert_eq!(plain, explicit);
    }

    #[test]
    fn lambda_rescaling_matches_doubled_input_weight() {
        // lambda=0 equals lambda=0.5 with null interference and omega_input doubled
        let mut rng = crate::rng::derive(6, &[0]);
        let genome = random_genome(&mut rng, 10, true);

        let mut plain = base_cfg();
        plain.log = true;
        plain.duration = 2.0;
        plain.interference.lambda = 0.0;

        let mut rescaled = plain.clone();
        rescaled.interference = InterferenceSpec::new(InterferenceKind::Null, 0.5);
        rescaled.network.omega_input = 2.0 * plain.network.omega_input;

        let a = run_trial(&genome, &plain).unwrap();
        let b = run_trial(&genome, &rescaled).unwrap();
        let (la, lb) = (a.log.unwrap(), b.log.unwrap());
        for (ra, rb) in la.rows.iter().zip(&lb.rows) {
            assert_eq!((ra.x, ra.y, ra.alpha), (rb.x, rb.y, rb.alpha));
            assert_eq!(ra.activations, rb.activations);
        }
    }

    #[test]
    fn script_shape_and_validation() {
        let script = StimulusScript {
            baseline: 0.25,
            spike_time: 5.0,
            rise_width: 1.0,
            spike_level: 2.0,
            plateau_level: 0.75,
        };
        assert_eq!(script.value_at(0.0), 0.25);
        assert_eq!(script.value_at(4.0), 0.25);
        assert_relative_eq!(script.value_at(4.5), 0.25 + 1.75 * 0.5, max_relative = 1e-15);
        assert_eq!(script.value_at(5.0), 2.0);
        assert_relative_eq!(script.value_at(5.5), 2.0 - 1.25 * 0.5, max_relative = 1e-15);
        assert_eq!(script.value_at(6.0), 0.75);
        assert_eq!(script.value_at(9.0), 0.75);

        assert!(script.validate(10.0).is_ok());
        assert!(script.validate(5.5).is_err()); // fall ends after the trial
        let early = StimulusScript { spike_time: 0.5, ..script };
        assert!(early.validate(10.0).is_err()); // rise starts before t=0
    }

    #[test]
    fn zero_script_equals_dark_world() {
        let mut rng = crate::rng::derive(7, &[0]);
        let genome = random_genome(&mut rng, 10, true);
        let mut dark = TrialConfig::<f64>::default();
        dark.duration = 2.0;
        dark.log = true;
        dark.interference = InterferenceSpec::new(InterferenceKind::Sinusoidal, 0.5);

        let mut scripted = dark.clone();
        scripted.perturbation.script = [Some(StimulusScript::zero()), Some(StimulusScript::zero())];

        let a = run_trial(&genome, &dark).unwrap();
        let b = run_trial(&genome, &scripted).unwrap();
        assert_eq!(a.log.unwrap().rows, b.log.unwrap().rows);
        assert!(a.fitness.is_none());
    }

    #[test]
    fn displacement_per_step_is_bounded() {
        let mut rng = crate::rng::derive(8, &[0]);
        let genome = random_genome(&mut rng, 10, false);
        let mut cfg = base_cfg();
        cfg.duration = 3.0;
        cfg.log = true;
        let log = run_trial(&genome, &cfg).unwrap().log.unwrap();
        let bound = 2.0 * log.dt * (1.0 + 1e-12);
        for pair in log.rows.windows(2) {
            let dx = pair[1].x - pair[0].x;
            let dy = pair[1].y - pair[0].y;
            assert!((dx * dx + dy * dy).sqrt() <= bound);
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let mut rng = crate::rng::derive(9, &[0]);
        let genome = random_genome(&mut rng, 10, true);
        let mut cfg = base_cfg();
        cfg.duration = 3.0;
        cfg.log = true;
        cfg.interference = InterferenceSpec::new(InterferenceKind::Sinusoidal, 0.5);
        let a = run_trial(&genome, &cfg).unwrap();
        let b = run_trial(&genome, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.log.unwrap().to_text(), b.log.unwrap().to_text());
    }

    #[test]
    fn genome_size_mismatch_is_an_error() {
        let cfg = base_cfg();
        let genome = stationary_genome(8);
        assert!(matches!(run_trial(&genome, &cfg), Err(SimError::GenomeLength { .. })));
    }

    #[test]
    fn fractional_step_count_is_rejected() {
        let mut cfg = base_cfg();
        cfg.duration = 10.005;
        assert!(cfg.validate().is_err());
    }
}
