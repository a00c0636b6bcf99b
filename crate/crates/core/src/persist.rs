//! Population and history files.
//!
//! A population file is a versioned structured-text document carrying the
//! config echo, the generation counter, the master seed, and every genome
//! at full precision. Emission is canonical, so identical populations
//! serialize to identical bytes.

use crate::config::{self, Item};
use crate::evolution::{EvolutionConfig, GenerationStats, NetworkGenome, Population};
use crate::scalar::Scalar;
use crate::{Result, SimError};

pub const POPULATION_VERSION: u64 = 1;

/// Serialize a population together with the config that produced it.
pub fn population_to_string<T: Scalar>(pop: &Population<T>, cfg: &EvolutionConfig<T>) -> String {
    let mut out = String::new();
    out.push_str("# luxbot population v1\n");
    out.push_str("[population]\n");
    out.push_str(&format!("version = {POPULATION_VERSION}\n"));
    out.push_str(&format!("generation = {}\n", pop.generation));
    out.push_str(&format!("seed = {}\n", pop.rng_seed));
    out.push_str(&format!("next_id = {}\n", pop.next_id));
    out.push_str(&format!("size = {}\n", pop.members.len()));
    out.push('\n');
    out.push_str(&config::emit_config(cfg));
    for member in &pop.members {
        out.push_str("\n[genome]\n");
        out.push_str(&format!("id = {}\n", member.id));
        match member.lineage {
            Some(parent) => out.push_str(&format!("lineage = {parent}\n")),
            None => out.push_str("lineage = none\n"),
        }
        let genes: Vec<String> = member.genes.iter().map(|g| g.to_string()).collect();
        out.push_str(&format!("genes = {}\n", genes.join(" ")));
    }
    out
}

/// Parse a population file into the population and its config echo.
pub fn parse_population<T: Scalar>(text: &str) -> Result<(Population<T>, EvolutionConfig<T>)> {
    let mut cfg = EvolutionConfig::<T>::default();
    let mut generation = 0u64;
    let mut seed = 0u64;
    let mut next_id: Option<u64> = None;
    let mut size: Option<usize> = None;
    let mut version: Option<u64> = None;

    let mut members: Vec<NetworkGenome<T>> = Vec::new();
    let mut current: Option<(usize, NetworkGenome<T>)> = None;
    let mut section: Option<String> = None;

    let finish = |entry: Option<(usize, NetworkGenome<T>)>,
                  members: &mut Vec<NetworkGenome<T>>|
     -> Result<()> {
        if let Some((line, genome)) = entry {
            if genome.genes.is_empty() {
                return Err(SimError::Parse { line, msg: "genome without genes".into() });
            }
            members.push(genome);
        }
        Ok(())
    };

    for (line, item) in config::scan(text)? {
        match item {
            Item::Section(name) => {
                if name == "genome" {
                    finish(current.take(), &mut members)?;
                    current = Some((line, NetworkGenome { genes: Vec::new(), id: 0, lineage: None }));
                    section = Some("genome".into());
                } else {
                    if current.is_some() {
                        finish(current.take(), &mut members)?;
                    }
                    section = Some(name.to_string());
                }
            }
            Item::Pair(key, value) => {
                let section = section.as_deref().ok_or_else(|| SimError::Parse {
                    line,
                    msg: format!("key `{key}` appears before any [section]"),
                })?;
                match section {
                    "population" => match key {
                        "version" => version = Some(config::parse_int(value, line)?),
                        "generation" => generation = config::parse_int(value, line)?,
                        "seed" => seed = config::parse_int(value, line)?,
                        "next_id" => next_id = Some(config::parse_int(value, line)?),
                        "size" => size = Some(config::parse_int(value, line)?),
                        _ => {
                            return Err(SimError::Parse {
                                line,
                                msg: format!("unknown key `{key}` in [population]"),
                            })
                        }
                    },
                    "genome" => {
                        let (_, genome) = current.as_mut().expect("inside [genome] section");
                        match key {
                            "id" => genome.id = config::parse_int(value, line)?,
                            "lineage" => {
                                genome.lineage = if value == "none" {
                                    None
                                } else {
                                    Some(config::parse_int(value, line)?)
                                }
                            }
                            "genes" => {
                                genome.genes = value
                                    .split_ascii_whitespace()
                                    .map(|g| config::parse_value(g, line))
                                    .collect::<Result<_>>()?
                            }
                            _ => {
                                return Err(SimError::Parse {
                                    line,
                                    msg: format!("unknown key `{key}` in [genome]"),
                                })
                            }
                        }
                    }
                    other => config::apply_pair(&mut cfg, other, key, value, line)?,
                }
            }
        }
    }
    finish(current.take(), &mut members)?;

    match version {
        Some(POPULATION_VERSION) => {}
        Some(v) => {
            return Err(SimError::InvalidConfig(format!("unsupported population version {v}")))
        }
        None => return Err(SimError::InvalidConfig("missing population version".into())),
    }
    if let Some(size) = size {
        if size != members.len() {
            return Err(SimError::InvalidConfig(format!(
                "population declares {size} members but contains {}",
                members.len()
            )));
        }
    }
    let max_id = members.iter().map(|m| m.id).max().unwrap_or(0);
    let pop = Population {
        members,
        generation,
        rng_seed: seed,
        next_id: next_id.unwrap_or(max_id + 1),
    };
    Ok((pop, cfg))
}

/// History of per-generation scores as delimited text.
pub fn history_to_string<T: Scalar>(history: &[GenerationStats<T>]) -> String {
    let mut out = String::from("generation,best,mean,square_angle\n");
    for stats in history {
        out.push_str(&format!(
            "{},{},{},{}\n",
            stats.generation, stats.best, stats.mean, stats.square_angle
        ));
    }
    out
}
