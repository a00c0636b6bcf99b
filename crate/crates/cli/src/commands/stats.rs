use luxbot_core::analysis::{pooled_motor_samples, summarize, MotorStats};
use luxbot_core::trial_log::TrialLog;

use super::{anchored, read_text, write_atomic, CliError};
use crate::cli::StatsArgs;
use crate::select::parse_window;

pub fn run(args: StatsArgs) -> Result<(), CliError> {
    let (start, end) = parse_window(&args.window)?;
    let mut logs = Vec::new();
    for path in &args.logs {
        let text = read_text(path)?;
        logs.push(anchored(path, TrialLog::<f64>::parse_text(&text))?);
    }
    let refs: Vec<&TrialLog<f64>> = logs.iter().collect();
    let (left, right) = pooled_motor_samples(&refs, start, end).map_err(CliError::from)?;
    let left_stats = summarize(&left).map_err(CliError::from)?;
    let right_stats = summarize(&right).map_err(CliError::from)?;

    let mut text = String::new();
    text.push_str("# luxbot motor stats v1\n");
    text.push_str("# quantiles: linear interpolation between closest ranks\n");
    text.push_str("# whiskers: most extreme samples within 1.5 IQR of the quartiles\n");
    text.push_str(&format!("# window = {start} {end}\n"));
    text.push_str(&format!("# logs = {}\n", args.logs.len()));
    render_motor(&mut text, "m_left", &left_stats);
    render_motor(&mut text, "m_right", &right_stats);

    match &args.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => print!("{text}"),
    }

    if let Some(path) = &args.samples {
        let mut csv = String::from("m_left,m_right\n");
        for (l, r) in left.iter().zip(&right) {
            csv.push_str(&format!("{l},{r}\n"));
        }
        write_atomic(path, csv.as_bytes())?;
    }
    Ok(())
}

fn render_motor(out: &mut String, name: &str, stats: &MotorStats<f64>) {
    out.push_str(&format!("\n[{name}]\n"));
    out.push_str(&format!("count = {}\n", stats.count));
    out.push_str(&format!("min = {}\n", stats.min));
    out.push_str(&format!("q1 = {}\n", stats.q1));
    out.push_str(&format!("median = {}\n", stats.median));
    out.push_str(&format!("mean = {}\n", stats.mean));
    out.push_str(&format!("q3 = {}\n", stats.q3));
    out.push_str(&format!("max = {}\n", stats.max));
    out.push_str(&format!("whisker_low = {}\n", stats.whisker_low));
    out.push_str(&format!("whisker_high = {}\n", stats.whisker_high));
}
