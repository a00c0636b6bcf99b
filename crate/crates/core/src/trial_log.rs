//! Per-step rollout traces and their delimited-text form.
//!
//! The text form is comma-delimited with a header row and shortest
//! round-trip decimals; parsing an emitted log and re-emitting it yields
//! identical bytes.

use std::ops::Range;

use crate::scalar::Scalar;
use crate::world::LightPosition;
use crate::{Result, SimError};

/// One simulation tick. Pose and sensor values are sampled at time `t`;
/// the motor values and activations are those produced at this tick (so
/// `m = output_scale(y[output])` holds within a row) and drive the move
/// to the next row's pose.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow<T> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub alpha: T,
    pub s_left: T,
    pub s_right: T,
    pub psi_left: T,
    pub psi_right: T,
    pub sprime_left: T,
    pub sprime_right: T,
    pub m_left: T,
    pub m_right: T,
    pub activations: Vec<T>,
}

impl<T: Scalar> LogRow<T> {
    pub fn net_motor(&self) -> T {
        self.m_left + self.m_right
    }
}

/// Full time series of one rollout.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialLog<T> {
    pub dt: T,
    pub light: Option<LightPosition<T>>,
    pub rows: Vec<LogRow<T>>,
}

const MAGIC: &str = "# luxbot trial log v1";
const FIXED_COLUMNS: [&str; 12] = [
    "t", "x", "y", "alpha", "s_left", "s_right", "psi_left", "psi_right", "sprime_left",
    "sprime_right", "m_left", "m_right",
];

impl<T: Scalar> TrialLog<T> {
    pub fn neurons(&self) -> usize {
        self.rows.first().map_or(0, |r| r.activations.len())
    }

    /// Row indices covering `start <= t < end`. Index bounds are derived by
    /// rounding `t/dt`, so exact window edges are insensitive to float noise
    /// in the stored times.
    pub fn window_rows(&self, start: T, end: T) -> Result<Range<usize>> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(SimError::Analysis(format!("bad window [{start}, {end})")));
        }
        let to_index = |t: T| -> i64 {
            (t / self.dt).round().to_i64().unwrap_or(i64::MIN)
        };
        let k_start = to_index(start);
        let k_end = to_index(end);
        if k_start < 0 || k_end as usize > self.rows.len() {
            return Err(SimError::Analysis(format!(
                "window [{start}, {end}) outside log range [0, {})",
                self.rows.len()
            )));
        }
        if k_start >= k_end {
            return Err(SimError::Analysis(format!("empty window [{start}, {end})")));
        }
        Ok(k_start as usize..k_end as usize)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        out.push_str(&format!("# dt = {}\n", self.dt));
        if let Some(light) = &self.light {
            out.push_str(&format!("# light = {} {}\n", light.x, light.y));
        }
        out.push_str(&FIXED_COLUMNS.join(","));
        for i in 1..=self.neurons() {
            out.push_str(&format!(",y{i}"));
        }
        out.push('\n');
        for row in &self.rows {
            let mut fields: Vec<String> = vec![
                row.t.to_string(),
                row.x.to_string(),
                row.y.to_string(),
                row.alpha.to_string(),
                row.s_left.to_string(),
                row.s_right.to_string(),
                row.psi_left.to_string(),
                row.psi_right.to_string(),
                row.sprime_left.to_string(),
                row.sprime_right.to_string(),
                row.m_left.to_string(),
                row.m_right.to_string(),
            ];
            fields.extend(row.activations.iter().map(|v| v.to_string()));
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, msg: String| SimError::Parse { line, msg };
        let mut lines = text.lines().enumerate();

        let (ln, first) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty log file".into()))?;
        if first.trim_end() != MAGIC {
            return Err(parse_err(ln + 1, format!("expected `{MAGIC}` header")));
        }

        let mut dt: Option<T> = None;
        let mut light: Option<LightPosition<T>> = None;
        let mut header: Option<(usize, String)> = None;
        for (ln, line) in lines.by_ref() {
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some(v) = rest.strip_prefix("dt = ") {
                    dt = Some(parse_scalar(v, ln + 1)?);
                } else if let Some(v) = rest.strip_prefix("light = ") {
                    let mut parts = v.split(' ');
                    let x = parse_scalar(parts.next().unwrap_or(""), ln + 1)?;
                    let y = parse_scalar(parts.next().unwrap_or(""), ln + 1)?;
                    light = Some(LightPosition::new(x, y));
                } else {
                    return Err(parse_err(ln + 1, format!("unknown metadata `{rest}`")));
                }
            } else {
                header = Some((ln, line.to_string()));
                break;
            }
        }
        let dt = dt.ok_or_else(|| parse_err(2, "missing `# dt = ...` metadata".into()))?;
        let (header_ln, header) =
            header.ok_or_else(|| parse_err(3, "missing column header row".into()))?;

        let names: Vec<&str> = header.trim_end().split(',').collect();
        if names.len() < FIXED_COLUMNS.len() {
            return Err(parse_err(header_ln + 1, "missing motor/sensor columns".into()));
        }
        for (want, got) in FIXED_COLUMNS.iter().zip(&names) {
            if want != got {
                return Err(parse_err(
                    header_ln + 1,
                    format!("expected column `{want}`, found `{got}`"),
                ));
            }
        }
        let neurons = names.len() - FIXED_COLUMNS.len();

        let mut rows = Vec::new();
        for (ln, line) in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != names.len() {
                return Err(parse_err(
                    ln + 1,
                    format!("expected {} fields, found {}", names.len(), fields.len()),
                ));
            }
            let mut it = fields.iter();
            let mut next = |ln: usize| -> Result<T> { parse_scalar(it.next().unwrap(), ln) };
            let row = LogRow {
                t: next(ln + 1)?,
                x: next(ln + 1)?,
                y: next(ln + 1)?,
                alpha: next(ln + 1)?,
                s_left: next(ln + 1)?,
                s_right: next(ln + 1)?,
                psi_left: next(ln + 1)?,
                psi_right: next(ln + 1)?,
                sprime_left: next(ln + 1)?,
                sprime_right: next(ln + 1)?,
                m_left: next(ln + 1)?,
                m_right: next(ln + 1)?,
                activations: (0..neurons)
                    .map(|_| parse_scalar(it.next().unwrap(), ln + 1))
                    .collect::<Result<_>>()?,
            };
            rows.push(row);
        }
        Ok(Self { dt, light, rows })
    }
}

fn parse_scalar<T: Scalar>(s: &str, line: usize) -> Result<T> {
    s.parse::<T>().map_err(|_| SimError::Parse {
        line,
        msg: format!("invalid number `{s}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_log() -> TrialLog<f64> {
        let rows = (0..5)
            .map(|k| {
                let t = k as f64 * 0.01;
                LogRow {
                    t,
                    x: 0.1 * t,
                    y: -0.2 * t,
                    alpha: 1.5707963267948966 + t,
                    s_left: 0.25,
                    s_right: 0.1234567890123456,
                    psi_left: 0.5,
                    psi_right: 0.0,
                    sprime_left: 0.375,
                    sprime_right: 0.0617283945061728,
                    m_left: -0.9,
                    m_right: 0.3,
                    activations: vec![0.0, 1.0 / 3.0, -2.5, 4.0],
                }
            })
            .collect();
        TrialLog { dt: 0.01, light: Some(LightPosition::new(0.0, 3.0)), rows }
    }

    #[test]
    fn round_trips_byte_identically() {
        let log = sample_log();
        let text = log.to_text();
        let parsed = TrialLog::<f64>::parse_text(&text).unwrap();
        assert_eq!(parsed, log);
        assert_eq!(parsed.to_text(), text);
    }

    #[test]
    fn round_trips_without_light() {
        let mut log = sample_log();
        log.light = None;
        let text = log.to_text();
        let parsed = TrialLog::<f64>::parse_text(&text).unwrap();
        assert_eq!(parsed.light, None);
        assert_eq!(parsed.to_text(), text);
    }

    #[test]
    fn window_selection_by_rounded_index() {
        let log = sample_log();
        assert_eq!(log.window_rows(0.0, 0.05).unwrap(), 0..5);
        assert_eq!(log.window_rows(0.01, 0.03).unwrap(), 1..3);
        assert!(log.window_rows(0.02, 0.02).is_err());
        assert!(log.window_rows(0.0, 0.06).is_err());
        assert!(log.window_rows(-0.01, 0.03).is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let log = sample_log();
        let mut text = log.to_text();
        text.push_str("0,0,0\n");
        let err = TrialLog::<f64>::parse_text(&text).unwrap_err();
        match err {
            SimError::Parse { line, .. } => assert_eq!(line, 10),
            other => panic!("unexpected error {other:?}"),
        }

        let bad_header = "# luxbot trial log v1\n# dt = 0.01\nt,x\n";
        assert!(TrialLog::<f64>::parse_text(bad_header).is_err());
    }
}
