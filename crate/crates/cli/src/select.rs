//! Selector parsing shared by the commands: members, lights, windows,
//! perturbation sides, and stimulus scripts.

use luxbot_core::evolution::combined_score;
use luxbot_core::trial::{probe_lights_clock, StimulusScript};
use luxbot_core::{EvolutionConfig64, LightPosition64, Population64};
use rayon::prelude::*;

use crate::commands::CliError;

pub const PROBE_LIGHT_COUNT: usize = 12;

/// Resolve a member selector (`best`, an index, or `id:<n>`) to an index.
///
/// `best` is the member with the lowest mean trial cost over the twelve
/// clock probe lights at the evolved trial duration.
pub fn resolve_member(
    pop: &Population64,
    cfg: &EvolutionConfig64,
    selector: &str,
) -> Result<usize, CliError> {
    if selector == "best" {
        let lights = probe_lights_clock(cfg.light_radius, PROBE_LIGHT_COUNT);
        let mut template = cfg.trial.clone();
        template.log = false;
        let scores: Vec<f64> = pop
            .members
            .par_iter()
            .map(|m| combined_score(m, &lights, &template))
            .collect::<luxbot_core::Result<_>>()
            .map_err(CliError::from)?;
        let best = scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite scores"))
            .map(|(i, _)| i)
            .ok_or_else(|| CliError::Usage("population is empty".into()))?;
        eprintln!(
            "selected member index {best} (id {}, mean probe score {})",
            pop.members[best].id, scores[best]
        );
        return Ok(best);
    }
    if let Some(id) = selector.strip_prefix("id:") {
        let id: u64 = id
            .parse()
            .map_err(|_| CliError::Usage(format!("bad member id in `{selector}`")))?;
        return pop
            .members
            .iter()
            .position(|m| m.id == id)
            .ok_or_else(|| CliError::Usage(format!("no member with id {id}")));
    }
    let index: usize = selector
        .parse()
        .map_err(|_| CliError::Usage(format!("bad member selector `{selector}` (best|index|id:<n>)")))?;
    if index >= pop.members.len() {
        return Err(CliError::Usage(format!(
            "member index {index} out of range (population size {})",
            pop.members.len()
        )));
    }
    Ok(index)
}

/// Resolve a lights selector into (clock position, light) pairs.
pub fn resolve_lights(
    selector: &str,
    radius: f64,
) -> Result<Vec<(usize, LightPosition64)>, CliError> {
    let lights = probe_lights_clock(radius, PROBE_LIGHT_COUNT);
    if selector == "all" {
        return Ok((1..=PROBE_LIGHT_COUNT).zip(lights).collect());
    }
    let mut picked = Vec::new();
    for part in selector.split(',') {
        let pos: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad light position `{part}`")))?;
        if !(1..=PROBE_LIGHT_COUNT).contains(&pos) {
            return Err(CliError::Usage(format!(
                "light position {pos} out of range 1-{PROBE_LIGHT_COUNT}"
            )));
        }
        picked.push((pos, lights[pos - 1]));
    }
    Ok(picked)
}

/// Parse `start:end` into a half-open window.
pub fn parse_window(window: &str) -> Result<(f64, f64), CliError> {
    let (start, end) = window
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("bad window `{window}` (expected start:end)")))?;
    let start: f64 = start
        .parse()
        .map_err(|_| CliError::Usage(format!("bad window start `{start}`")))?;
    let end: f64 = end
        .parse()
        .map_err(|_| CliError::Usage(format!("bad window end `{end}`")))?;
    Ok((start, end))
}

/// Parse a side flag into per-side booleans `[left, right]`.
pub fn parse_sides(value: &str) -> Result<[bool; 2], CliError> {
    match value {
        "left" => Ok([true, false]),
        "right" => Ok([false, true]),
        "both" => Ok([true, true]),
        _ => Err(CliError::Usage(format!("bad side `{value}` (left|right|both)"))),
    }
}

/// Parse a script spec: comma-separated `key=value` pairs with keys
/// `spike` (required), `baseline`, `rise`, `peak`, and `plateau`
/// (defaulting to the baseline, which makes a lone spike).
pub fn parse_script(spec: &str) -> Result<StimulusScript<f64>, CliError> {
    let mut baseline = 0.0;
    let mut spike: Option<f64> = None;
    let mut rise = 0.5;
    let mut peak = 1.0;
    let mut plateau: Option<f64> = None;
    for part in spec.split(',') {
        let (key, value) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bad script field `{part}` (key=value)")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad script value `{value}`")))?;
        match key.trim() {
            "baseline" => baseline = value,
            "spike" => spike = Some(value),
            "rise" => rise = value,
            "peak" => peak = value,
            "plateau" => plateau = Some(value),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown script key `{other}` (baseline|spike|rise|peak|plateau)"
                )))
            }
        }
    }
    let spike_time =
        spike.ok_or_else(|| CliError::Usage("script needs a spike time (spike=<t>)".into()))?;
    Ok(StimulusScript {
        baseline,
        spike_time,
        rise_width: rise,
        spike_level: peak,
        plateau_level: plateau.unwrap_or(baseline),
    })
}
