use serde::{Deserialize, Serialize};

/// Five-number summary with 1.5·IQR whiskers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxStats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
}

impl BoxStats {
    /// `None` for an empty sample. The mean is a left-to-right sum so the
    /// result only depends on sample order.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let q1 = quantile_sorted(&sorted, 0.25);
        let median = quantile_sorted(&sorted, 0.5);
        let q3 = quantile_sorted(&sorted, 0.75);
        let iqr = q3 - q1;
        let lo_fence = q1 - 1.5 * iqr;
        let hi_fence = q3 + 1.5 * iqr;
        let whisker_low = *sorted.iter().find(|&&v| v >= lo_fence).unwrap_or(&sorted[0]);
        let whisker_high = *sorted
            .iter()
            .rev()
            .find(|&&v| v <= hi_fence)
            .unwrap_or(&sorted[sorted.len() - 1]);
        Some(BoxStats {
            count: samples.len(),
            mean,
            min: sorted[0],
            q1,
            median,
            q3,
            max: sorted[sorted.len() - 1],
            whisker_low,
            whisker_high,
        })
    }
}

/// Linear interpolation between closest ranks.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sample() {
        let s = BoxStats::from_samples(&[4.0, 1.0, 3.0, 2.0, 5.0]).unwrap();
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        assert_eq!(s.mean, 3.0);
        assert_eq!((s.whisker_low, s.whisker_high), (1.0, 5.0));
    }

    #[test]
    fn outlier_outside_whisker() {
        let s = BoxStats::from_samples(&[1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 50.0]).unwrap();
        assert_eq!(s.max, 50.0);
        assert_eq!(s.whisker_high, 4.0);
    }

    #[test]
    fn single_value() {
        let s = BoxStats::from_samples(&[0.7]).unwrap();
        assert_eq!(
            (s.q1, s.median, s.q3, s.whisker_low, s.whisker_high),
            (0.7, 0.7, 0.7, 0.7, 0.7)
        );
        assert!(BoxStats::from_samples(&[]).is_none());
    }

    #[test]
    fn interpolated_quartiles() {
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 0.25), 1.75);
    }
}
