//! Flat key-value configuration text with one section per subsystem.
//!
//! Lines are `key = value` under `[section]` headers; `#` starts a comment.
//! Parsing starts from the defaults and overrides key by key, so partial
//! files are valid. Errors carry the offending line number. Emission is
//! canonical (fixed section and key order, shortest round-trip decimals),
//! so emitted text is byte-stable.

use crate::evolution::EvolutionConfig;
use crate::interference::InterferenceKind;
use crate::scalar::Scalar;
use crate::{Result, SimError};

/// One meaningful config line.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Item<'a> {
    Section(&'a str),
    Pair(&'a str, &'a str),
}

/// Split text into numbered sections and pairs, dropping comments/blanks.
pub(crate) fn scan(text: &str) -> Result<Vec<(usize, Item<'_>)>> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| SimError::Parse {
                line: line_no,
                msg: format!("unterminated section header `{line}`"),
            })?;
            items.push((line_no, Item::Section(name.trim())));
        } else if let Some((key, value)) = line.split_once('=') {
            items.push((line_no, Item::Pair(key.trim(), value.trim())));
        } else {
            return Err(SimError::Parse {
                line: line_no,
                msg: format!("expected `key = value` or `[section]`, found `{line}`"),
            });
        }
    }
    Ok(items)
}

pub(crate) fn parse_value<T: Scalar>(value: &str, line: usize) -> Result<T> {
    value.parse::<T>().map_err(|_| SimError::Parse {
        line,
        msg: format!("invalid number `{value}`"),
    })
}

pub(crate) fn parse_int<I: std::str::FromStr>(value: &str, line: usize) -> Result<I> {
    value.parse::<I>().map_err(|_| SimError::Parse {
        line,
        msg: format!("invalid integer `{value}`"),
    })
}

pub(crate) fn parse_bool(value: &str, line: usize) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(SimError::Parse { line, msg: format!("invalid boolean `{value}`") }),
    }
}

/// Apply one `section.key = value` override onto a config.
pub(crate) fn apply_pair<T: Scalar>(
    cfg: &mut EvolutionConfig<T>,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
) -> Result<()> {
    let unknown_key = || SimError::Parse {
        line,
        msg: format!("unknown key `{key}` in section [{section}]"),
    };
    match section {
        "world" => {
            let world = &mut cfg.trial.world;
            match key {
                "radius" => world.radius = parse_value(value, line)?,
                "epsilon" => world.epsilon = parse_value(value, line)?,
                "dt" => world.dt = parse_value(value, line)?,
                "sensor_offset_left" => world.sensor_offsets[0] = parse_value(value, line)?,
                "sensor_offset_right" => world.sensor_offsets[1] = parse_value(value, line)?,
                _ => return Err(unknown_key()),
            }
        }
        "network" => match key {
            "neurons" => cfg.trial.network.neurons = parse_int(value, line)?,
            "omega_max" => cfg.trial.network.omega_max = parse_value(value, line)?,
            "omega_input" => cfg.trial.network.omega_input = parse_value(value, line)?,
            _ => return Err(unknown_key()),
        },
        "interference" => {
            let spec = &mut cfg.trial.interference;
            match key {
                "kind" => {
                    spec.kind = InterferenceKind::parse(value).ok_or_else(|| SimError::Parse {
                        line,
                        msg: format!(
                            "unknown interference kind `{value}` (null|sigmoidal|squared|sinusoidal)"
                        ),
                    })?
                }
                "k" => spec.k = parse_value(value, line)?,
                "p" => spec.p = parse_value(value, line)?,
                "b" => spec.b = parse_value(value, line)?,
                "r_freq" => spec.r_freq = parse_value(value, line)?,
                "lambda" => spec.lambda = parse_value(value, line)?,
                _ => return Err(unknown_key()),
            }
        }
        "trial" => match key {
            "duration" => cfg.trial.duration = parse_value(value, line)?,
            "x0" => cfg.trial.initial_state.x = parse_value(value, line)?,
            "y0" => cfg.trial.initial_state.y = parse_value(value, line)?,
            "alpha0" => cfg.trial.initial_state.alpha = parse_value(value, line)?,
            "phase_left" => cfg.trial.initial_phase.c_left = parse_value(value, line)?,
            "phase_right" => cfg.trial.initial_phase.c_right = parse_value(value, line)?,
            "log" => cfg.trial.log = parse_bool(value, line)?,
            _ => return Err(unknown_key()),
        },
        "evolution" => match key {
            "population_size" => cfg.population_size = parse_int(value, line)?,
            "generations" => cfg.generations = parse_int(value, line)?,
            "mutation_sigma" => cfg.mutation_sigma = parse_value(value, line)?,
            "mutation_rate" => cfg.mutation_rate = parse_value(value, line)?,
            "lights_per_generation" => cfg.lights_per_generation = parse_int(value, line)?,
            "light_radius" => cfg.light_radius = parse_value(value, line)?,
            "seed" => cfg.seed = parse_int(value, line)?,
            "centre_crossing_init" => cfg.centre_crossing_init = parse_bool(value, line)?,
            _ => return Err(unknown_key()),
        },
        _ => {
            return Err(SimError::Parse {
                line,
                msg: format!("unknown section [{section}]"),
            })
        }
    }
    Ok(())
}

/// Parse a full config file (defaults plus overrides).
pub fn parse_config<T: Scalar>(text: &str) -> Result<EvolutionConfig<T>> {
    let mut cfg = EvolutionConfig::default();
    let mut section: Option<String> = None;
    for (line, item) in scan(text)? {
        match item {
            Item::Section(name) => section = Some(name.to_string()),
            Item::Pair(key, value) => {
                let section = section.as_deref().ok_or_else(|| SimError::Parse {
                    line,
                    msg: format!("key `{key}` appears before any [section]"),
                })?;
                apply_pair(&mut cfg, section, key, value, line)?;
            }
        }
    }
    Ok(cfg)
}

/// Canonical emission of every setting.
pub fn emit_config<T: Scalar>(cfg: &EvolutionConfig<T>) -> String {
    let t = &cfg.trial;
    let mut out = String::new();
    out.push_str("[world]\n");
    out.push_str(&format!("radius = {}\n", t.world.radius));
    out.push_str(&format!("epsilon = {}\n", t.world.epsilon));
    out.push_str(&format!("dt = {}\n", t.world.dt));
    out.push_str(&format!("sensor_offset_left = {}\n", t.world.sensor_offsets[0]));
    out.push_str(&format!("sensor_offset_right = {}\n", t.world.sensor_offsets[1]));
    out.push_str("\n[network]\n");
    out.push_str(&format!("neurons = {}\n", t.network.neurons));
    out.push_str(&format!("omega_max = {}\n", t.network.omega_max));
    out.push_str(&format!("omega_input = {}\n", t.network.omega_input));
    out.push_str("\n[interference]\n");
    out.push_str(&format!("kind = {}\n", t.interference.kind.name()));
    out.push_str(&format!("k = {}\n", t.interference.k));
    out.push_str(&format!("p = {}\n", t.interference.p));
    out.push_str(&format!("b = {}\n", t.interference.b));
    out.push_str(&format!("r_freq = {}\n", t.interference.r_freq));
    out.push_str(&format!("lambda = {}\n", t.interference.lambda));
    out.push_str("\n[trial]\n");
    out.push_str(&format!("duration = {}\n", t.duration));
    out.push_str(&format!("x0 = {}\n", t.initial_state.x));
    out.push_str(&format!("y0 = {}\n", t.initial_state.y));
    out.push_str(&format!("alpha0 = {}\n", t.initial_state.alpha));
    out.push_str(&format!("phase_left = {}\n", t.initial_phase.c_left));
    out.push_str(&format!("phase_right = {}\n", t.initial_phase.c_right));
    out.push_str(&format!("log = {}\n", t.log));
    out.push_str("\n[evolution]\n");
    out.push_str(&format!("population_size = {}\n", cfg.population_size));
    out.push_str(&format!("generations = {}\n", cfg.generations));
    out.push_str(&format!("mutation_sigma = {}\n", cfg.mutation_sigma));
    out.push_str(&format!("mutation_rate = {}\n", cfg.mutation_rate));
    out.push_str(&format!("lights_per_generation = {}\n", cfg.lights_per_generation));
    out.push_str(&format!("light_radius = {}\n", cfg.light_radius));
    out.push_str(&format!("seed = {}\n", cfg.seed));
    out.push_str(&format!("centre_crossing_init = {}\n", cfg.centre_crossing_init));
    out
}

/// The full default configuration as text.
pub fn default_config_text() -> String {
    emit_config(&EvolutionConfig::<f64>::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let text = default_config_text();
        let parsed: EvolutionConfig<f64> = parse_config(&text).unwrap();
        assert_eq!(parsed, EvolutionConfig::<f64>::default());
        assert_eq!(emit_config(&parsed), text);
    }

    #[test]
    fn partial_file_overrides_defaults() {
        let text = "[interference]\nkind = squared\nlambda = 0.5\n\n[trial]\nduration = 20\n";
        let cfg: EvolutionConfig<f64> = parse_config(text).unwrap();
        assert_eq!(cfg.trial.interference.kind, InterferenceKind::Squared);
        assert_eq!(cfg.trial.interference.lambda, 0.5);
        assert_eq!(cfg.trial.duration, 20.0);
        assert_eq!(cfg.population_size, 50);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "# experiment 3\n\n[evolution]\nseed = 9  # master seed\n";
        let cfg: EvolutionConfig<f64> = parse_config(text).unwrap();
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn errors_are_line_anchored() {
        let cases = [
            ("[world]\nradius = fast\n", 2),
            ("[world\nradius = 1\n", 1),
            ("[world]\nwat = 1\n", 2),
            ("[warp]\nspeed = 9\n", 2),
            ("radius = 1\n", 1),
            ("[interference]\nkind = cubic\n", 2),
            ("[world]\njust some words\n", 2),
        ];
        for (text, want_line) in cases {
            match parse_config::<f64>(text) {
                Err(SimError::Parse { line, .. }) => assert_eq!(line, want_line, "for {text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn emitted_floats_round_trip_exactly() {
        let mut cfg = EvolutionConfig::<f64>::default();
        cfg.mutation_sigma = 0.1 + 1e-17; // a value with a long shortest form
        cfg.light_radius = 2.9999999999999996;
        let text = emit_config(&cfg);
        let parsed: EvolutionConfig<f64> = parse_config(&text).unwrap();
        assert_eq!(parsed, cfg);
    }
}
