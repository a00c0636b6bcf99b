//! Simulator and neuroevolution toolkit for a two-wheeled light-seeking
//! robot whose sensors can be stimulated by its own motor activity.
//!
//! The crate couples three pure pieces — body kinematics with a directional
//! light sensor model ([`world`]), a continuous-time recurrent network
//! controller ([`ctrnn`]), and motor-driven sensor interference
//! ([`interference`]) — into deterministic closed-loop rollouts
//! ([`trial`]), evolves controllers with a generational microbial GA
//! ([`evolution`]), and analyses the resulting traces ([`analysis`]).
//!
//! All math is generic over the scalar type (see [`scalar::Scalar`]);
//! the `*64` aliases below name the double-precision instantiations the
//! command-line tools work with.

pub mod analysis;
pub mod config;
pub mod ctrnn;
pub mod evolution;
pub mod interference;
pub mod persist;
pub mod rng;
pub mod scalar;
pub mod trial;
pub mod trial_log;
pub mod world;

use thiserror::Error;

/// Errors surfaced by the simulator and its file formats.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("genome has {actual} genes, expected {expected}")]
    GenomeLength { expected: usize, actual: usize },
    #[error("numerical divergence at t = {t}: {detail}")]
    Divergence { t: f64, detail: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Analysis(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;

pub use scalar::Scalar;

/// Double-precision aliases used by the command-line tools.
pub type RobotState64 = world::RobotState<f64>;
pub type WorldConfig64 = world::WorldConfig<f64>;
pub type LightPosition64 = world::LightPosition<f64>;
pub type NetworkParams64 = ctrnn::NetworkParams<f64>;
pub type NetworkState64 = ctrnn::NetworkState<f64>;
pub type InterferenceSpec64 = interference::InterferenceSpec<f64>;
pub type TrialConfig64 = trial::TrialConfig<f64>;
pub type TrialLog64 = trial_log::TrialLog<f64>;
pub type NetworkGenome64 = evolution::NetworkGenome<f64>;
pub type Population64 = evolution::Population<f64>;
pub type EvolutionConfig64 = evolution::EvolutionConfig<f64>;
pub type MotorStats64 = analysis::MotorStats<f64>;
