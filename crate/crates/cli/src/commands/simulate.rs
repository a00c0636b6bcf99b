use luxbot_core::config::emit_config;
use luxbot_core::trial::run_trial;

use super::{load_population, CliError, OutDir};
use crate::cli::SimulateArgs;
use crate::select::{parse_sides, resolve_lights, resolve_member};

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let (pop, cfg) = load_population(&args.population)?;
    let member_index = resolve_member(&pop, &cfg, &args.member)?;
    let member = &pop.members[member_index];
    let lights = resolve_lights(&args.lights, cfg.light_radius)?;

    let mut trial = cfg.trial.clone();
    trial.log = true;
    if let Some(duration) = args.duration {
        trial.duration = duration;
    }
    if let Some(sides) = &args.lesion_interference {
        for (i, lesion) in parse_sides(sides)?.iter().enumerate() {
            if *lesion {
                trial.perturbation.interference_gain[i] = 0.0;
            }
        }
    }
    if let Some(sides) = &args.deactivate_sensor {
        for (i, off) in parse_sides(sides)?.iter().enumerate() {
            if *off {
                trial.perturbation.sensor_enabled[i] = false;
            }
        }
    }

    let mut out = OutDir::create(&args.out_dir)?;
    for (position, light) in lights {
        let mut cfg_one = trial.clone();
        cfg_one.light = Some(light);
        let result = run_trial(member, &cfg_one).map_err(CliError::from)?;
        let log = result.log.expect("logging enabled");
        out.write(&format!("log_light_{position:02}.csv"), &log.to_text())?;
        let fitness = result.fitness.expect("light set");
        println!(
            "light {position:>2} at ({}, {}): fitness {} final distance {}",
            light.x,
            light.y,
            fitness.value,
            light.distance(result.final_state.x, result.final_state.y)
        );
    }
    out.finish_manifest("simulate", Some(pop.rng_seed), &emit_config(&cfg))?;
    Ok(())
}
