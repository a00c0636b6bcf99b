use luxbot_core::config::emit_config;
use luxbot_core::trial::run_trial;

use super::{CliError, OutDir};
use crate::cli::ProbeArgs;
use crate::select::{parse_script, parse_sides, resolve_member};

pub fn run(args: ProbeArgs) -> Result<(), CliError> {
    let (pop, cfg) = super::load_population(&args.population)?;
    let member_index = resolve_member(&pop, &cfg, &args.member)?;
    let member = &pop.members[member_index];

    let mut trial = cfg.trial.clone();
    trial.log = true;
    trial.light = None;
    if let Some(duration) = args.duration {
        trial.duration = duration;
    }
    if let Some(spec) = &args.script_left {
        trial.perturbation.script[0] = Some(parse_script(spec)?);
    }
    if let Some(spec) = &args.script_right {
        trial.perturbation.script[1] = Some(parse_script(spec)?);
    }
    if let Some(sides) = &args.lesion_interference {
        for (i, lesion) in parse_sides(sides)?.iter().enumerate() {
            if *lesion {
                trial.perturbation.interference_gain[i] = 0.0;
            }
        }
    }
    // surface script-vs-duration problems as config errors before running
    trial.validate().map_err(CliError::from)?;

    let result = run_trial(member, &trial).map_err(CliError::from)?;
    let log = result.log.expect("logging enabled");
    let mut out = OutDir::create(&args.out_dir)?;
    out.write("probe.csv", &log.to_text())?;
    out.finish_manifest("probe", Some(pop.rng_seed), &emit_config(&cfg))?;
    println!(
        "probe of member id {} for {} time units written ({} rows)",
        member.id,
        trial.duration,
        log.rows.len()
    );
    Ok(())
}
