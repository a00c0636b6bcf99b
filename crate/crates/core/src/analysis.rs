//! Offline analyses over trial logs: motor statistics, peak detection,
//! and orbit classification.

use crate::scalar::{lit, Scalar};
use crate::trial_log::TrialLog;
use crate::{Result, SimError};

/// Five-number summary plus mean and 1.5-IQR whiskers.
///
/// Quantiles use linear interpolation between closest ranks. Whiskers are
/// the most extreme samples within 1.5 IQR of the quartiles, so they always
/// lie within [min, max].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotorStats<T> {
    pub count: usize,
    pub min: T,
    pub q1: T,
    pub median: T,
    pub mean: T,
    pub q3: T,
    pub max: T,
    pub whisker_low: T,
    pub whisker_high: T,
}

/// Quantile by linear interpolation between closest ranks of a sorted slice.
pub fn quantile_linear<T: Scalar>(sorted: &[T], p: T) -> T {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p * T::from(n - 1).unwrap();
    let lo = h.floor();
    let idx = lo.to_usize().unwrap().min(n - 2);
    let frac = h - lo;
    sorted[idx] + frac * (sorted[idx + 1] - sorted[idx])
}

/// Summary statistics of a sample set.
pub fn summarize<T: Scalar>(samples: &[T]) -> Result<MotorStats<T>> {
    if samples.is_empty() {
        return Err(SimError::Analysis("no samples to summarize".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(SimError::Analysis("non-finite sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));

    let q1 = quantile_linear(&sorted, lit(0.25));
    let median = quantile_linear(&sorted, lit(0.5));
    let q3 = quantile_linear(&sorted, lit(0.75));
    let iqr = q3 - q1;
    let low_fence = q1 - lit::<T>(1.5) * iqr;
    let high_fence = q3 + lit::<T>(1.5) * iqr;
    let whisker_low = *sorted
        .iter()
        .find(|&&v| v >= low_fence)
        .expect("q1 itself is inside the fence");
    let whisker_high = *sorted
        .iter()
        .rev()
        .find(|&&v| v <= high_fence)
        .expect("q3 itself is inside the fence");
    let mean = sorted.iter().fold(T::zero(), |acc, &v| acc + v) / T::from(sorted.len()).unwrap();

    Ok(MotorStats {
        count: sorted.len(),
        min: sorted[0],
        q1,
        median,
        mean,
        q3,
        max: *sorted.last().unwrap(),
        whisker_low,
        whisker_high,
    })
}

/// Pool per-motor samples from the `[start, end)` window of several logs.
pub fn pooled_motor_samples<T: Scalar>(
    logs: &[&TrialLog<T>],
    start: T,
    end: T,
) -> Result<(Vec<T>, Vec<T>)> {
    if logs.is_empty() {
        return Err(SimError::Analysis("no logs given".into()));
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for log in logs {
        let range = log.window_rows(start, end)?;
        for row in &log.rows[range] {
            left.push(row.m_left);
            right.push(row.m_right);
        }
    }
    Ok((left, right))
}

/// Indices of local maxima. A plateau counts once, at its first index.
pub fn find_peaks<T: Scalar>(series: &[T]) -> Vec<usize> {
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 <= series.len().saturating_sub(1) {
        if series[i] > series[i - 1] {
            // scan across any plateau of equal values
            let mut j = i;
            while j + 1 < series.len() && series[j + 1] == series[i] {
                j += 1;
            }
            if j + 1 < series.len() && series[j + 1] < series[i] {
                peaks.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// Mean spacing between consecutive peaks, in time units.
pub fn peak_to_peak_period<T: Scalar>(series: &[T], dt: T) -> Option<T> {
    let peaks = find_peaks(series);
    if peaks.len() < 2 {
        return None;
    }
    let spans = peaks.len() - 1;
    let total = T::from(peaks[spans] - peaks[0]).unwrap();
    Some(total * dt / T::from(spans).unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitKind {
    /// Station-keeping through alternating forward and backward motion.
    Type1,
    /// Continuous forward circling of the light.
    Type2,
    Unclassified,
}

impl OrbitKind {
    pub fn name(self) -> &'static str {
        match self {
            OrbitKind::Type1 => "Type1",
            OrbitKind::Type2 => "Type2",
            OrbitKind::Unclassified => "Unclassified",
        }
    }
}

/// Classifier verdict with its evidence values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitLabel<T> {
    pub kind: OrbitKind,
    /// Fraction of window steps with positive net motor.
    pub forward_fraction: T,
    /// Sign changes of the net motor over the window.
    pub sign_changes: usize,
}

/// Heuristic thresholds; declared approximations of the visually obvious
/// distinction, exposed for tuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitThresholds<T> {
    /// Minimum forward fraction for a forward-circling orbit.
    pub forward_fraction: T,
    /// Minimum net-motor sign changes for a back-and-forth orbit.
    pub min_sign_changes: usize,
    /// Back-and-forth orbits must keep the light distance under this
    /// multiple of the window median.
    pub distance_factor: T,
}

impl<T: Scalar> Default for OrbitThresholds<T> {
    fn default() -> Self {
        Self {
            forward_fraction: lit(0.95),
            min_sign_changes: 4,
            distance_factor: lit(2.0),
        }
    }
}

/// Label the orbit in the `[start, end)` window of a log.
///
/// The distance criterion of the back-and-forth type needs the light
/// position; logs without one can only earn the forward-circling label.
pub fn classify_orbit<T: Scalar>(
    log: &TrialLog<T>,
    start: T,
    end: T,
    thresholds: &OrbitThresholds<T>,
) -> Result<OrbitLabel<T>> {
    if end - start < lit(5.0) {
        return Err(SimError::Analysis(format!(
            "classification window [{start}, {end}) shorter than 5 time units"
        )));
    }
    let range = log.window_rows(start, end)?;
    let rows = &log.rows[range];

    let mut forward = 0usize;
    let mut sign_changes = 0usize;
    let mut last_sign = 0i8;
    for row in rows {
        let net = row.net_motor();
        if net > T::zero() {
            forward += 1;
        }
        let sign = if net > T::zero() {
            1i8
        } else if net < T::zero() {
            -1i8
        } else {
            0i8
        };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                sign_changes += 1;
            }
            last_sign = sign;
        }
    }
    let forward_fraction = T::from(forward).unwrap() / T::from(rows.len()).unwrap();

    let kind = if forward_fraction >= thresholds.forward_fraction {
        OrbitKind::Type2
    } else if sign_changes >= thresholds.min_sign_changes && distance_stays_bounded(log, rows, thresholds) {
        OrbitKind::Type1
    } else {
        OrbitKind::Unclassified
    };
    Ok(OrbitLabel { kind, forward_fraction, sign_changes })
}

fn distance_stays_bounded<T: Scalar>(
    log: &TrialLog<T>,
    rows: &[crate::trial_log::LogRow<T>],
    thresholds: &OrbitThresholds<T>,
) -> bool {
    let Some(light) = &log.light else {
        return false;
    };
    let mut distances: Vec<T> = rows.iter().map(|r| light.distance(r.x, r.y)).collect();
    distances.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let median = quantile_linear(&distances, lit(0.5));
    let max = *distances.last().unwrap();
    max < thresholds.distance_factor * median
}
