use luxbot_core::config::{emit_config, parse_config};
use luxbot_core::evolution::evolve_with_progress;
use luxbot_core::persist::{history_to_string, population_to_string};

use super::{anchored, load_population, read_text, CliError, OutDir};
use crate::cli::EvolveArgs;

pub fn run(args: EvolveArgs) -> Result<(), CliError> {
    let config_text = read_text(&args.config)?;
    let cfg = anchored(&args.config, parse_config::<f64>(&config_text))?;
    anchored(&args.config, cfg.validate())?;

    let initial = match &args.from {
        Some(path) => Some(load_population(path)?.0),
        None => None,
    };

    let quiet = args.quiet;
    let generations = cfg.generations;
    let (population, history) = evolve_with_progress(&cfg, initial, |stats| {
        if !quiet && (stats.generation % 100 == 0 || stats.generation + 1 == generations) {
            eprintln!(
                "generation {:>6}  best {:.6}  mean {:.6}",
                stats.generation, stats.best, stats.mean
            );
        }
    })
    .map_err(CliError::from)?;

    let echo = emit_config(&cfg);
    let mut out = OutDir::create(&args.out_dir)?;
    out.write("population.txt", &population_to_string(&population, &cfg))?;
    out.write("history.csv", &history_to_string(&history))?;
    out.finish_manifest("evolve", Some(cfg.seed), &echo)?;

    match history.last() {
        Some(last) => println!(
            "evolved {} generations (population at generation {}), final best {} mean {}",
            history.len(),
            population.generation,
            last.best,
            last.mean
        ),
        None => println!("no generations run; population written unchanged"),
    }
    Ok(())
}
