//! Runtime analysis: learns per-observable normal/failure thresholds from
//! evaluation-labeled frames and predicts faults by linear trend
//! extrapolation, with an expected-occurrence interval per prediction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    observable_feature, ApplicationLabel, FeatureId, ObservableId, OBSERVABLE_CATALOG,
    OBSERVABLE_COUNT,
};
use crate::monitor::{History, ObservationFrame};
use crate::sim::{NodeId, Tick};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least 2 points with 2 distinct ticks, got {0}")]
    TooFewPoints(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureSide {
    Below,
    Above,
}

/// One decision stump: the learned boundary for a single observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub tau: f64,
    pub failure_side: FailureSide,
    /// Fraction of labeled samples the stump separates correctly.
    pub confidence: f64,
    pub normal_count: usize,
    pub failure_count: usize,
    /// True when enough labeled samples back this entry; unusable entries
    /// fall back to the bootstrap default in the control loop.
    pub usable: bool,
    pub learned: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdModel {
    pub entries: [ThresholdEntry; OBSERVABLE_COUNT],
}

impl ThresholdModel {
    pub fn entry(&self, id: ObservableId) -> &ThresholdEntry {
        &self.entries[id.index()]
    }

    /// Conservative defaults used before enough labels exist.
    pub fn bootstrap(rssi_tau: f64) -> ThresholdModel {
        let mk = |tau| ThresholdEntry {
            tau,
            failure_side: FailureSide::Below,
            confidence: 0.0,
            normal_count: 0,
            failure_count: 0,
            usable: true,
            learned: false,
        };
        ThresholdModel {
            entries: [mk(rssi_tau), mk(1.0), mk(1.0), mk(10.0)],
        }
    }

    /// Learned entries where usable, bootstrap everywhere else.
    pub fn merged_over(&self, bootstrap: &ThresholdModel) -> ThresholdModel {
        let mut out = bootstrap.clone();
        for (i, e) in self.entries.iter().enumerate() {
            if e.usable {
                out.entries[i] = *e;
            }
        }
        out
    }
}

/// Best decision stump over one observable's labeled values. Candidate cuts
/// are midpoints between consecutive sorted distinct values; ties break
/// toward the cut with the largest margin, then toward the lower tau.
fn learn_stump(normal: &[f64], failure: &[f64]) -> Option<(f64, FailureSide, f64)> {
    if normal.is_empty() || failure.is_empty() {
        return None;
    }
    // single sorted sweep with prefix counts; relearning runs over the full
    // labeled history every cadence, so this must stay O(n log n)
    let mut samples: Vec<(f64, bool)> = normal
        .iter()
        .map(|v| (*v, false))
        .chain(failure.iter().map(|v| (*v, true)))
        .collect();
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total = samples.len() as f64;
    let total_fail = failure.len();
    let total_norm = normal.len();
    let mut best: Option<(f64, FailureSide, f64, f64)> = None; // tau, side, acc, margin
    let mut prefix_fail = 0usize;
    let mut prefix_norm = 0usize;
    for i in 0..samples.len() {
        if i > 0 && samples[i].0 > samples[i - 1].0 {
            let tau = (samples[i - 1].0 + samples[i].0) / 2.0;
            let margin = (samples[i].0 - samples[i - 1].0) / 2.0;
            for side in [FailureSide::Below, FailureSide::Above] {
                // prefix counts cover samples strictly below tau
                let correct = match side {
                    FailureSide::Below => prefix_fail + (total_norm - prefix_norm),
                    FailureSide::Above => (total_fail - prefix_fail) + prefix_norm,
                };
                let acc = correct as f64 / total;
                let better = match &best {
                    None => true,
                    Some((btau, _, bacc, bmargin)) => {
                        acc > *bacc
                            || (acc == *bacc && margin > *bmargin)
                            || (acc == *bacc && margin == *bmargin && tau < *btau)
                    }
                };
                if better {
                    best = Some((tau, side, acc, margin));
                }
            }
        }
        if samples[i].1 {
            prefix_fail += 1;
        } else {
            prefix_norm += 1;
        }
    }
    best.map(|(tau, side, acc, _)| (tau, side, acc))
}

/// Learns a decision stump per observable from labeled frames. Unreachable
/// frames participate too: their carried-forward values are the last known
/// state of a failing node, the most informative failure exemplars there are.
/// Entries without both classes, or with fewer than `min_per_class` samples
/// in either class, are unusable.
/// Mean of the per-class correct-classification rates for a given stump;
/// robust to class imbalance where raw accuracy is not.
pub fn balanced_accuracy(
    normal: &[f64],
    failure: &[f64],
    tau: f64,
    side: FailureSide,
) -> f64 {
    let beyond = |v: f64| match side {
        FailureSide::Below => v < tau,
        FailureSide::Above => v > tau,
    };
    if normal.is_empty() || failure.is_empty() {
        return 0.0;
    }
    let tnr = normal.iter().filter(|v| !beyond(**v)).count() as f64 / normal.len() as f64;
    let tpr = failure.iter().filter(|v| beyond(**v)).count() as f64 / failure.len() as f64;
    (tnr + tpr) / 2.0
}

pub fn learn_thresholds(
    labeled: &[(ObservationFrame, ApplicationLabel)],
    min_per_class: usize,
    min_balanced_accuracy: f64,
) -> ThresholdModel {
    let mut entries = Vec::with_capacity(OBSERVABLE_COUNT);
    for obs in OBSERVABLE_CATALOG {
        let mut normal = Vec::new();
        let mut failure = Vec::new();
        for (frame, label) in labeled {
            match label {
                ApplicationLabel::Normal => normal.push(frame.value(obs)),
                ApplicationLabel::Failure(_) => failure.push(frame.value(obs)),
            }
        }
        let entry = match learn_stump(&normal, &failure) {
            Some((tau, side, acc)) => {
                let balanced = balanced_accuracy(&normal, &failure, tau, side);
                ThresholdEntry {
                    tau,
                    failure_side: side,
                    confidence: acc,
                    normal_count: normal.len(),
                    failure_count: failure.len(),
                    // a boundary that cannot separate the classes is worse
                    // than the bootstrap default it would shadow
                    usable: normal.len() >= min_per_class
                        && failure.len() >= min_per_class
                        && balanced >= min_balanced_accuracy,
                    learned: true,
                }
            }
            None => ThresholdEntry {
                tau: 0.0,
                failure_side: FailureSide::Below,
                confidence: 0.0,
                normal_count: normal.len(),
                failure_count: failure.len(),
                usable: false,
                learned: false,
            },
        };
        entries.push(entry);
    }
    ThresholdModel {
        entries: entries.try_into().expect("catalog-sized"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideFlag {
    NormalSide,
    FailureSide,
    /// Entry not learned or unusable; treated as normal.
    Unlearned,
}

impl SideFlag {
    pub fn is_failure(self) -> bool {
        self == SideFlag::FailureSide
    }
}

/// Per-observable verdicts for one frame. A value exactly at tau is on the
/// normal side.
pub fn classify(frame: &ObservationFrame, model: &ThresholdModel) -> [SideFlag; OBSERVABLE_COUNT] {
    let mut flags = [SideFlag::NormalSide; OBSERVABLE_COUNT];
    for obs in OBSERVABLE_CATALOG {
        let e = model.entry(obs);
        let i = obs.index();
        if !e.usable {
            flags[i] = SideFlag::Unlearned;
            continue;
        }
        let v = frame.value(obs);
        let beyond = match e.failure_side {
            FailureSide::Below => v < e.tau,
            FailureSide::Above => v > e.tau,
        };
        flags[i] = if beyond {
            SideFlag::FailureSide
        } else {
            SideFlag::NormalSide
        };
    }
    flags
}

/// Ordinary least-squares line over a tick/value window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendFit {
    /// Units per tick.
    pub slope: f64,
    /// Fitted value at `start_tick`.
    pub intercept: f64,
    pub residual_sigma: f64,
    /// Standard error of the slope estimate; 0 for an exact fit.
    pub slope_se: f64,
    pub window_len: usize,
    pub start_tick: Tick,
}

impl TrendFit {
    pub fn value_at(&self, tick: f64) -> f64 {
        self.intercept + self.slope * (tick - self.start_tick as f64)
    }
}

pub fn fit_trend(series: &[(Tick, f64)]) -> Result<TrendFit, AnalysisError> {
    let distinct_ticks = {
        let mut t: Vec<Tick> = series.iter().map(|p| p.0).collect();
        t.sort_unstable();
        t.dedup();
        t.len()
    };
    if series.len() < 2 || distinct_ticks < 2 {
        return Err(AnalysisError::TooFewPoints(series.len()));
    }
    let start_tick = series.iter().map(|p| p.0).min().unwrap();
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|p| (p.0 - start_tick) as f64).collect();
    let ys: Vec<f64> = series.iter().map(|p| p.1).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let residual_sigma = (ss_res / n).sqrt();
    Ok(TrendFit {
        slope,
        intercept,
        residual_sigma,
        slope_se: residual_sigma / sxx.sqrt(),
        window_len: series.len(),
        start_tick,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaultType {
    BatteryDepletion,
    ConnectivityLoss,
    MessageLoss,
    NodeUnreachable,
}

impl FaultType {
    pub fn name(self) -> &'static str {
        match self {
            FaultType::BatteryDepletion => "battery_depletion",
            FaultType::ConnectivityLoss => "connectivity_loss",
            FaultType::MessageLoss => "message_loss",
            FaultType::NodeUnreachable => "node_unreachable",
        }
    }

    pub fn from_trigger(trigger: ObservableId) -> FaultType {
        match trigger {
            ObservableId::BatteryLevel => FaultType::BatteryDepletion,
            ObservableId::RssiMean | ObservableId::NeighborCount => FaultType::ConnectivityLoss,
            ObservableId::MessagesReceived => FaultType::MessageLoss,
        }
    }
}

/// The prediction tuple: subject, fault type and expected interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultPrediction {
    pub node: NodeId,
    pub feature: FeatureId,
    pub fault_type: FaultType,
    pub t_min: Tick,
    pub t_max: Tick,
    pub issued_at: Tick,
    pub trigger: ObservableId,
}

/// Tuning knobs for the prediction pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub min_samples_per_class: usize,
    pub relearn_every: Tick,
    pub prediction_window: usize,
    pub horizon: Tick,
    pub unreachable_after: usize,
    pub band_multiplier: f64,
    pub bootstrap_rssi_margin_db: f64,
    /// Minimum |slope| / se(slope) for a trend to be considered real; keeps
    /// shadowing jitter from spawning forecasts whose "fault" then clears on
    /// its own and miscredits whatever action happened to be applied.
    pub slope_t_min: f64,
    /// Learned stumps below this balanced accuracy stay unusable.
    pub min_balanced_accuracy: f64,
    /// How many of a node's trailing live frames are relabeled as failure
    /// exemplars when the node goes dark.
    pub precursor_window: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            min_samples_per_class: 10,
            relearn_every: 50,
            prediction_window: 30,
            horizon: 100,
            unreachable_after: 5,
            band_multiplier: 2.0,
            bootstrap_rssi_margin_db: 3.0,
            slope_t_min: 3.0,
            min_balanced_accuracy: 0.8,
            precursor_window: 20,
        }
    }
}

/// Crossing tick (exact, fractional) of the line `fit ± offset` with `tau`,
/// or None when the line never reaches it going forward.
fn crossing_tick(fit: &TrendFit, offset: f64, tau: f64) -> Option<f64> {
    if fit.slope == 0.0 {
        return None;
    }
    Some(fit.start_tick as f64 + (tau - fit.intercept - offset) / fit.slope)
}

/// Emits predictions for every node and usable observable whose fitted trend
/// reaches its threshold within the horizon, plus NodeUnreachable for nodes
/// stale for `unreachable_after` consecutive instants. Open predictions for
/// the same (node, trigger) are suppressed.
pub fn predict_faults(
    history: &History,
    model: &ThresholdModel,
    cfg: &AnalysisConfig,
    now: Tick,
    open: &[(NodeId, ObservableId)],
) -> Vec<FaultPrediction> {
    let mut out = Vec::new();
    let nodes: Vec<NodeId> = history.nodes().collect();
    for node in nodes {
        if history.trailing_unreachable(node) >= cfg.unreachable_after
            && !open.contains(&(node, ObservableId::NeighborCount))
        {
            out.push(FaultPrediction {
                node,
                feature: FeatureId::Communication,
                fault_type: FaultType::NodeUnreachable,
                t_min: now,
                t_max: now,
                issued_at: now,
                trigger: ObservableId::NeighborCount,
            });
        }
        let frames = match history.window(node, cfg.prediction_window) {
            Ok(f) => f,
            Err(_) => continue,
        };
        for obs in OBSERVABLE_CATALOG {
            let entry = model.entry(obs);
            if !entry.usable || open.contains(&(node, obs)) {
                continue;
            }
            let series: Vec<(Tick, f64)> = frames
                .iter()
                .filter(|f| f.reachable)
                .map(|f| (f.tick, f.value(obs)))
                .collect();
            // a trend is only trusted once a full window of live data exists;
            // short early-run series produce crossings out of pure noise
            if series.len() < cfg.prediction_window {
                continue;
            }
            let Ok(fit) = fit_trend(&series) else { continue };
            let toward_failure = match entry.failure_side {
                FailureSide::Below => fit.slope < 0.0,
                FailureSide::Above => fit.slope > 0.0,
            };
            if !toward_failure {
                continue;
            }
            if fit.slope_se > 0.0 && fit.slope.abs() < cfg.slope_t_min * fit.slope_se {
                continue;
            }
            let Some(central) = crossing_tick(&fit, 0.0, entry.tau) else {
                continue;
            };
            if central <= now as f64 || central > (now + cfg.horizon) as f64 {
                continue;
            }
            let band = cfg.band_multiplier * fit.residual_sigma;
            let a = crossing_tick(&fit, -band, entry.tau).unwrap();
            let b = crossing_tick(&fit, band, entry.tau).unwrap();
            let clip = |t: f64| -> Tick {
                let t = t.ceil();
                let t = if t < now as f64 { now as f64 } else { t };
                let hi = (now + cfg.horizon) as f64;
                (if t > hi { hi } else { t }) as Tick
            };
            let (t_min, t_max) = (clip(a.min(b)), clip(a.max(b)));
            out.push(FaultPrediction {
                node,
                feature: observable_feature(obs),
                fault_type: FaultType::from_trigger(obs),
                t_min,
                t_max,
                issued_at: now,
                trigger: obs,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ViolatedDimension;

    fn frame(tick: Tick, node: NodeId, values: [f64; 4], reachable: bool) -> ObservationFrame {
        ObservationFrame {
            tick,
            node,
            values,
            reachable,
        }
    }

    fn battery_frame(tick: Tick, battery: f64) -> ObservationFrame {
        frame(tick, 0, [-60.0, 2.0, 4.0, battery], true)
    }

    #[test]
    fn stump_separates_battery_example() {
        // Normal {80, 70, 60}, Failure {20, 10} -> tau 40, Below, confidence 1
        let labeled: Vec<(ObservationFrame, ApplicationLabel)> = [80.0, 70.0, 60.0]
            .iter()
            .map(|b| (battery_frame(1, *b), ApplicationLabel::Normal))
            .chain([20.0, 10.0].iter().map(|b| {
                (
                    battery_frame(1, *b),
                    ApplicationLabel::Failure(ViolatedDimension::PresenceSetting),
                )
            }))
            .collect();
        let model = learn_thresholds(&labeled, 1, 0.5);
        let e = model.entry(ObservableId::BatteryLevel);
        assert_eq!(e.tau, 40.0);
        assert_eq!(e.failure_side, FailureSide::Below);
        assert_eq!(e.confidence, 1.0);
        assert!(e.usable);
    }

    #[test]
    fn single_class_is_unusable() {
        let labeled: Vec<_> = [80.0, 70.0]
            .iter()
            .map(|b| (battery_frame(1, *b), ApplicationLabel::Normal))
            .collect();
        let model = learn_thresholds(&labeled, 1, 0.5);
        assert!(!model.entry(ObservableId::BatteryLevel).usable);
    }

    #[test]
    fn empty_input_all_unusable() {
        let model = learn_thresholds(&[], 1, 0.5);
        assert!(model.entries.iter().all(|e| !e.usable));
    }

    #[test]
    fn interleaved_labels_low_confidence() {
        // alternating labels on an interleaved grid: no perfect cut exists
        let mut labeled = Vec::new();
        for (i, v) in [10.0, 20.0, 30.0, 40.0, 50.0, 60.0].iter().enumerate() {
            let label = if i % 2 == 0 {
                ApplicationLabel::Normal
            } else {
                ApplicationLabel::Failure(ViolatedDimension::PresenceSetting)
            };
            labeled.push((battery_frame(1, *v), label));
        }
        let model = learn_thresholds(&labeled, 1, 0.5);
        let e = model.entry(ObservableId::BatteryLevel);
        assert!(e.confidence < 1.0);
    }

    #[test]
    fn classify_boundary_inclusive() {
        let mut model = ThresholdModel::bootstrap(-85.0);
        model.entries[ObservableId::BatteryLevel.index()].tau = 40.0;
        let flags = classify(&battery_frame(1, 30.0), &model);
        assert!(flags[ObservableId::BatteryLevel.index()].is_failure());
        let flags = classify(&battery_frame(1, 40.0), &model);
        assert!(!flags[ObservableId::BatteryLevel.index()].is_failure());
    }

    #[test]
    fn classify_rssi_below() {
        let model = ThresholdModel::bootstrap(-88.0);
        let f = frame(1, 0, [-95.0, 2.0, 4.0, 80.0], true);
        assert!(classify(&f, &model)[ObservableId::RssiMean.index()].is_failure());
    }

    #[test]
    fn classify_unusable_is_unlearned() {
        let model = learn_thresholds(&[], 1, 0.5);
        let flags = classify(&battery_frame(1, 0.0), &model);
        assert!(flags.iter().all(|f| *f == SideFlag::Unlearned));
        assert!(flags.iter().all(|f| !f.is_failure()));
    }

    #[test]
    fn trend_exact_line() {
        let series: Vec<(Tick, f64)> = (0..5).map(|t| (t, 100.0 - 10.0 * t as f64)).collect();
        let fit = fit_trend(&series).unwrap();
        assert!((fit.slope + 10.0).abs() < 1e-9);
        assert!((fit.intercept - 100.0).abs() < 1e-9);
        assert!(fit.residual_sigma < 1e-9);
    }

    #[test]
    fn trend_flat_line() {
        let series = vec![(0, 50.0), (1, 50.0), (2, 50.0)];
        let fit = fit_trend(&series).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.residual_sigma, 0.0);
    }

    #[test]
    fn trend_rejects_single_point() {
        assert!(fit_trend(&[(0, 1.0)]).is_err());
        assert!(fit_trend(&[(3, 1.0), (3, 2.0)]).is_err());
    }

    fn battery_history(values: &[f64]) -> History {
        let mut h = History::new(64);
        for (t, v) in values.iter().enumerate() {
            h.push(&[battery_frame(t as Tick + 1, *v)]).unwrap();
        }
        h
    }

    fn battery_only_model(tau: f64) -> ThresholdModel {
        let mut model = ThresholdModel::bootstrap(-85.0);
        for e in model.entries.iter_mut() {
            e.usable = false;
        }
        let e = &mut model.entries[ObservableId::BatteryLevel.index()];
        e.usable = true;
        e.tau = tau;
        e.failure_side = FailureSide::Below;
        model
    }

    #[test]
    fn linear_decay_prediction_exact() {
        // ticks 1..=5 values 100..60, tau 20 Below: 100 - 10(t-1) = 20 at t = 9
        let h = battery_history(&[100.0, 90.0, 80.0, 70.0, 60.0]);
        let model = battery_only_model(20.0);
        let cfg = AnalysisConfig { prediction_window: 5, ..AnalysisConfig::default() };
        let preds = predict_faults(&h, &model, &cfg, 5, &[]);
        assert_eq!(preds.len(), 1);
        let p = preds[0];
        assert_eq!(p.fault_type, FaultType::BatteryDepletion);
        assert_eq!(p.t_min, 9);
        assert_eq!(p.t_max, 9);
        assert_eq!(p.issued_at, 5);
    }

    #[test]
    fn upward_trend_no_prediction() {
        let h = battery_history(&[60.0, 70.0, 80.0, 90.0, 100.0]);
        let model = battery_only_model(20.0);
        let cfg = AnalysisConfig { prediction_window: 5, ..AnalysisConfig::default() };
        let preds = predict_faults(&h, &model, &cfg, 5, &[]);
        assert!(preds.is_empty());
    }

    #[test]
    fn residual_band_widens_interval() {
        // exact central crossing with synthetic sigma: offset lines at
        // tau +- k*sigma cross 0.4 ticks either side of the center
        let series: Vec<(Tick, f64)> = (0..5).map(|t| (t, 100.0 - 10.0 * t as f64)).collect();
        let fit = fit_trend(&series).unwrap();
        let center = crossing_tick(&fit, 0.0, 20.0).unwrap();
        let lo = crossing_tick(&fit, -4.0, 20.0).unwrap();
        let hi = crossing_tick(&fit, 4.0, 20.0).unwrap();
        assert!((center - 8.0).abs() < 1e-9);
        assert!((lo.min(hi) - 7.6).abs() < 1e-9);
        assert!((lo.max(hi) - 8.4).abs() < 1e-9);
    }

    #[test]
    fn unreachable_node_prediction() {
        let mut h = History::new(64);
        for t in 1..=6u64 {
            h.push(&[frame(t, 4, [-90.0, 0.0, 0.0, 50.0], false)]).unwrap();
        }
        let model = battery_only_model(20.0);
        let cfg = AnalysisConfig::default();
        let preds = predict_faults(&h, &model, &cfg, 6, &[]);
        assert!(preds
            .iter()
            .any(|p| p.fault_type == FaultType::NodeUnreachable && p.t_min == 6 && p.t_max == 6));
    }

    #[test]
    fn open_predictions_suppressed() {
        let h = battery_history(&[100.0, 90.0, 80.0, 70.0, 60.0]);
        let model = battery_only_model(20.0);
        let cfg = AnalysisConfig { prediction_window: 5, ..AnalysisConfig::default() };
        let open = vec![(0u32, ObservableId::BatteryLevel)];
        assert!(predict_faults(&h, &model, &cfg, 5, &open).is_empty());
    }

    #[test]
    fn interval_respects_horizon() {
        // slow decay crossing beyond the horizon is not predicted
        let h = battery_history(&[100.0, 99.9, 99.8, 99.7, 99.6]);
        let model = battery_only_model(20.0);
        let cfg = AnalysisConfig { prediction_window: 5, ..AnalysisConfig::default() };
        assert!(predict_faults(&h, &model, &cfg, 5, &[]).is_empty());
    }
}
