//! Quantitative tracking metrics over a completed run.
//!
//! Estimation quality: MSE of the estimate against truth over all steps and
//! state channels, SNR as truth energy over error energy, PSNR against the
//! largest truth magnitude seen. Detection quality: each step is classified
//! by goal proximity — actually positive iff the truth lies within the
//! detection radius of the goal, predicted positive iff the estimate does —
//! and the confusion counts yield accuracy, sensitivity, and specificity.

use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::trace::TraceRow;

/// Confusion counts of the per-step goal-proximity classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true_positives: u64,
    pub false_positives: u64,
    pub true_negatives: u64,
    pub false_negatives: u64,
}

impl Confusion {
    pub fn total(&self) -> u64 {
        self.true_positives + self.false_positives + self.true_negatives + self.false_negatives
    }
}

/// Summary metrics of one run.
///
/// `snr_db` and `psnr_db` may be infinite (zero error energy); JSON carries
/// those as the strings `"inf"` / `"-inf"`. Degenerate classification classes
/// (no actual positives, or no actual negatives) report the affected rate as
/// 1 when the corresponding error count is 0, else 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mse: f64,
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub snr_db: f64,
    #[serde(serialize_with = "ser_db", deserialize_with = "de_db")]
    pub psnr_db: f64,
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub confusion: Confusion,
    /// Steps on which the monitored speed left `[speed_min, speed_max]`;
    /// monitored only, never enforced.
    pub speed_violations: u64,
}

fn ser_db<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

fn de_db<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    struct DbVisitor;
    impl serde::de::Visitor<'_> for DbVisitor {
        type Value = f64;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            write!(f, "a number or one of \"inf\", \"-inf\", \"nan\"")
        }

        fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }

        fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }

        fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("unexpected level string `{other}`"))),
            }
        }
    }
    d.deserialize_any(DbVisitor)
}

fn goal_distance(state: &[f64], position_states: &[usize], goal: &[f64]) -> f64 {
    position_states
        .iter()
        .zip(goal)
        .map(|(&idx, &g)| {
            let d = state[idx] - g;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

fn degenerate_rate(numerator: u64, denominator: u64, errors: u64) -> f64 {
    if denominator == 0 {
        if errors == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        numerator as f64 / denominator as f64
    }
}

/// Computes the summary metrics of a trace against its scenario.
pub fn compute_metrics(rows: &[TraceRow], scenario: &Scenario) -> MetricsReport {
    assert!(!rows.is_empty(), "metrics require at least one step");
    let channels = rows[0].truth.len();
    let n_samples = (rows.len() * channels) as f64;

    let mut err_energy = 0.0;
    let mut signal_energy = 0.0;
    let mut peak: f64 = 0.0;
    let (mut tp, mut fp, mut tn, mut fneg) = (0u64, 0u64, 0u64, 0u64);
    let mut speed_violations = 0u64;

    for row in rows {
        for (t, e) in row.truth.iter().zip(&row.est_post) {
            let d = e - t;
            err_energy += d * d;
            signal_energy += t * t;
            peak = peak.max(t.abs());
        }
        let actual = goal_distance(&row.truth, &scenario.position_states, &scenario.goal_m)
            <= scenario.detection_radius_m;
        let predicted = goal_distance(&row.est_post, &scenario.position_states, &scenario.goal_m)
            <= scenario.detection_radius_m;
        match (actual, predicted) {
            (true, true) => tp += 1,
            (true, false) => fneg += 1,
            (false, true) => fp += 1,
            (false, false) => tn += 1,
        }
        if !scenario.velocity_states.is_empty() {
            let speed = scenario
                .velocity_states
                .iter()
                .map(|&i| row.truth[i] * row.truth[i])
                .sum::<f64>()
                .sqrt();
            if speed < scenario.speed_min_mps || speed > scenario.speed_max_mps {
                speed_violations += 1;
            }
        }
    }

    let mse = err_energy / n_samples;
    let snr_db = if err_energy == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (signal_energy / err_energy).log10()
    };
    let psnr_db = if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    };

    let total = tp + fp + tn + fneg;
    MetricsReport {
        mse,
        snr_db,
        psnr_db,
        accuracy: (tp + tn) as f64 / total as f64,
        sensitivity: degenerate_rate(tp, tp + fneg, fneg),
        specificity: degenerate_rate(tn, tn + fp, fp),
        confusion: Confusion {
            true_positives: tp,
            false_positives: fp,
            true_negatives: tn,
            false_negatives: fneg,
        },
        speed_violations,
    }
}
