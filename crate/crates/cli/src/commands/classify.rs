use luxbot_core::analysis::{classify_orbit, OrbitThresholds};
use luxbot_core::trial_log::TrialLog;

use super::{anchored, read_text, CliError};
use crate::cli::ClassifyArgs;
use crate::select::parse_window;

pub fn run(args: ClassifyArgs) -> Result<(), CliError> {
    let (start, end) = parse_window(&args.window)?;
    let text = read_text(&args.log)?;
    let log = anchored(&args.log, TrialLog::<f64>::parse_text(&text))?;
    let label =
        classify_orbit(&log, start, end, &OrbitThresholds::default()).map_err(CliError::from)?;
    println!(
        "{} forward_fraction={} sign_changes={}",
        label.kind.name(),
        label.forward_fraction,
        label.sign_changes
    );
    Ok(())
}
