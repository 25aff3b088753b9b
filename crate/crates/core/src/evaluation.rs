//! Evaluation: judges the smart-lighting application against its spec each
//! instant, counts manual interventions, and accumulates dependability
//! metrics (availability, MTBF, prediction precision/recall).

use serde::{Deserialize, Serialize};

use crate::adaptation::{OutcomeResult, PredictionOutcome};
use crate::model::{ApplicationLabel, ViolatedDimension};
use crate::sim::{NodeId, SimError, SimState, Tick};

/// Smart-lighting application requirements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppSpec {
    /// Maximum seconds from an occupancy transition until the light reacts.
    pub max_reaction_delay: f64,
}

impl Default for AppSpec {
    fn default() -> Self {
        AppSpec {
            max_reaction_delay: 10.0,
        }
    }
}

/// Labels the application state at the current instant.
///
/// Inside the grace window after a transition, a mismatched light is judged
/// only by the reaction-delay dimension and is still normal. After the
/// grace window a mismatch fails the presence or absence setting. A
/// transition reflected later than the allowed delay is a ReactionDelay
/// failure until the next transition.
pub fn evaluate_application(state: &SimState, spec: &AppSpec) -> ApplicationLabel {
    let delay_ticks = (spec.max_reaction_delay / state.tick_seconds).ceil() as Tick;
    let Some(transition) = state.last_transition else {
        return if state.light_on == state.occupied {
            ApplicationLabel::Normal
        } else if state.occupied {
            ApplicationLabel::Failure(ViolatedDimension::PresenceSetting)
        } else {
            ApplicationLabel::Failure(ViolatedDimension::AbsenceSetting)
        };
    };
    match state.reflected_at {
        Some(reflected) => {
            if reflected - transition <= delay_ticks {
                ApplicationLabel::Normal
            } else {
                ApplicationLabel::Failure(ViolatedDimension::ReactionDelay)
            }
        }
        None => {
            // still mismatched since the transition
            if state.tick - transition <= delay_ticks {
                ApplicationLabel::Normal
            } else if state.occupied {
                ApplicationLabel::Failure(ViolatedDimension::PresenceSetting)
            } else {
                ApplicationLabel::Failure(ViolatedDimension::AbsenceSetting)
            }
        }
    }
}

/// Counts one manual intervention and schedules the repair; rejected for
/// healthy nodes unless the caller vouches the node is unreachable.
pub fn record_intervention(
    state: &mut SimState,
    acc: &mut MetricsAccumulator,
    node: NodeId,
    repair_delay: Tick,
    allow_unreachable: bool,
) -> Result<(), SimError> {
    if state.schedule_repair(node, repair_delay, allow_unreachable)? {
        acc.manual_interventions += 1;
    }
    Ok(())
}

/// Final dependability report for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub ticks_total: u64,
    pub ticks_normal: u64,
    pub failure_transitions: u64,
    pub availability: f64,
    /// Mean normal ticks between Normal->Failure transitions; None when the
    /// run had no failure transition.
    pub mtbf_ticks: Option<f64>,
    /// Fraction of mission windows (default: the full run) without a failure.
    pub mission_reliability: f64,
    pub manual_interventions: u64,
    pub occurred: u64,
    pub averted: u64,
    pub expired: u64,
    pub unpredicted_failures: u64,
    pub prediction_precision: Option<f64>,
    pub prediction_recall: Option<f64>,
}

/// Streaming accumulator fed once per tick by the control loop.
#[derive(Debug, Clone, Default)]
pub struct MetricsAccumulator {
    pub ticks_total: u64,
    pub ticks_normal: u64,
    pub failure_transitions: u64,
    pub manual_interventions: u64,
    pub occurred: u64,
    pub averted: u64,
    pub expired: u64,
    pub unpredicted_failures: u64,
    prev_normal: Option<bool>,
    labels: Vec<bool>,
}

impl MetricsAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Called exactly once per tick.
    pub fn update(
        &mut self,
        label: ApplicationLabel,
        resolved: &[PredictionOutcome],
        unpredicted_now: u64,
    ) {
        let normal = label.is_normal();
        self.ticks_total += 1;
        if normal {
            self.ticks_normal += 1;
        }
        if self.prev_normal.unwrap_or(true) && !normal {
            self.failure_transitions += 1;
        }
        self.prev_normal = Some(normal);
        self.labels.push(normal);
        for o in resolved {
            match o.result {
                OutcomeResult::Occurred => self.occurred += 1,
                OutcomeResult::Averted => self.averted += 1,
                OutcomeResult::Expired => self.expired += 1,
            }
        }
        self.unpredicted_failures += unpredicted_now;
    }

    /// `mission_window`: window length in ticks, None for the full run.
    pub fn finalize(&self, mission_window: Option<u64>) -> RunMetrics {
        let availability = if self.ticks_total == 0 {
            1.0
        } else {
            self.ticks_normal as f64 / self.ticks_total as f64
        };
        let mtbf_ticks = if self.failure_transitions == 0 {
            None
        } else {
            Some(self.ticks_normal as f64 / self.failure_transitions as f64)
        };
        let window = mission_window
            .unwrap_or(self.ticks_total)
            .min(self.ticks_total)
            .max(1) as usize;
        let mission_reliability = if self.labels.is_empty() {
            1.0
        } else {
            let total = self.labels.len() - window + 1;
            let ok = self
                .labels
                .windows(window)
                .filter(|w| w.iter().all(|n| *n))
                .count();
            ok as f64 / total as f64
        };
        let true_positives = self.occurred + self.averted;
        let prediction_precision = if true_positives + self.expired == 0 {
            None
        } else {
            Some(true_positives as f64 / (true_positives + self.expired) as f64)
        };
        let prediction_recall = if true_positives + self.unpredicted_failures == 0 {
            None
        } else {
            Some(true_positives as f64 / (true_positives + self.unpredicted_failures) as f64)
        };
        RunMetrics {
            ticks_total: self.ticks_total,
            ticks_normal: self.ticks_normal,
            failure_transitions: self.failure_transitions,
            availability,
            mtbf_ticks,
            mission_reliability,
            manual_interventions: self.manual_interventions,
            occurred: self.occurred,
            averted: self.averted,
            expired: self.expired,
            unpredicted_failures: self.unpredicted_failures,
            prediction_precision,
            prediction_recall,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ControlSettings, CpBounds};
    use crate::sim::{EnergyModel, Environment, NodeInit, NodeRole, PresenceEvent};

    fn state() -> SimState {
        let nodes = vec![
            NodeInit {
                id: 0,
                position: (0.0, 0.0),
                role: NodeRole::PresenceSensor,
                initial_battery: 100.0,
                controls: ControlSettings::default(),
            },
            NodeInit {
                id: 1,
                position: (5.0, 0.0),
                role: NodeRole::LightActuator,
                initial_battery: 100.0,
                controls: ControlSettings::default(),
            },
        ];
        SimState::init_network(
            &nodes,
            Environment::default(),
            Vec::new(),
            Vec::new(),
            EnergyModel::default(),
            CpBounds::default(),
            3,
        )
    }

    fn spec(delay: f64) -> AppSpec {
        AppSpec {
            max_reaction_delay: delay,
        }
    }

    #[test]
    fn reaction_within_bound_is_normal() {
        let mut s = state();
        s.tick = 10;
        s.occupied = true;
        s.light_on = true;
        s.last_transition = Some(5);
        s.reflected_at = Some(6); // 1 tick = 1 s, delay 2 s
        assert_eq!(evaluate_application(&s, &spec(2.0)), ApplicationLabel::Normal);
    }

    #[test]
    fn late_reaction_is_reaction_delay_failure() {
        let mut s = state();
        s.tick = 10;
        s.occupied = true;
        s.light_on = true;
        s.last_transition = Some(5);
        s.reflected_at = Some(9);
        assert_eq!(
            evaluate_application(&s, &spec(2.0)),
            ApplicationLabel::Failure(ViolatedDimension::ReactionDelay)
        );
    }

    #[test]
    fn stuck_light_past_grace_is_absence_failure() {
        let mut s = state();
        s.tick = 20;
        s.occupied = false;
        s.light_on = true;
        s.last_transition = Some(5);
        s.reflected_at = None;
        assert_eq!(
            evaluate_application(&s, &spec(2.0)),
            ApplicationLabel::Failure(ViolatedDimension::AbsenceSetting)
        );
    }

    #[test]
    fn mismatch_inside_grace_is_normal() {
        let mut s = state();
        s.tick = 6;
        s.occupied = true;
        s.light_on = false;
        s.last_transition = Some(5);
        s.reflected_at = None;
        assert_eq!(evaluate_application(&s, &spec(2.0)), ApplicationLabel::Normal);
    }

    #[test]
    fn intervention_restores_dead_node() {
        let mut s = state();
        let mut acc = MetricsAccumulator::new();
        s.nodes[0].battery = 0.0;
        s.nodes[0].alive = false;
        record_intervention(&mut s, &mut acc, 0, 20, false).unwrap();
        assert_eq!(acc.manual_interventions, 1);
        // duplicate request while the repair is pending does not double count
        record_intervention(&mut s, &mut acc, 0, 20, false).unwrap();
        assert_eq!(acc.manual_interventions, 1);
        s.presence_script = vec![PresenceEvent { tick: 1, occupied: false }];
        for _ in 0..21 {
            s.step();
        }
        assert!(s.node(0).unwrap().alive);
        // repaired at full battery, minus whatever the post-repair ticks cost
        assert!(s.node(0).unwrap().battery > 95.0);
    }

    #[test]
    fn intervention_on_healthy_node_rejected() {
        let mut s = state();
        let mut acc = MetricsAccumulator::new();
        assert!(record_intervention(&mut s, &mut acc, 0, 20, false).is_err());
        assert_eq!(acc.manual_interventions, 0);
    }

    #[test]
    fn two_dead_nodes_two_interventions() {
        let mut s = state();
        let mut acc = MetricsAccumulator::new();
        for n in s.nodes.iter_mut() {
            n.battery = 0.0;
            n.alive = false;
        }
        record_intervention(&mut s, &mut acc, 0, 20, false).unwrap();
        record_intervention(&mut s, &mut acc, 1, 30, false).unwrap();
        assert_eq!(acc.manual_interventions, 2);
        assert_eq!(s.pending_repairs.len(), 2);
    }

    #[test]
    fn availability_ratio() {
        let mut acc = MetricsAccumulator::new();
        for i in 0..100 {
            let label = if i < 90 {
                ApplicationLabel::Normal
            } else {
                ApplicationLabel::Failure(ViolatedDimension::PresenceSetting)
            };
            acc.update(label, &[], 0);
        }
        let m = acc.finalize(None);
        assert!((m.availability - 0.9).abs() < 1e-12);
    }

    #[test]
    fn mtbf_mean_of_transitions() {
        let mut acc = MetricsAccumulator::new();
        // 3 normal runs of 100 ticks, each ending in one failure tick
        for _ in 0..3 {
            for _ in 0..100 {
                acc.update(ApplicationLabel::Normal, &[], 0);
            }
            acc.update(
                ApplicationLabel::Failure(ViolatedDimension::ReactionDelay),
                &[],
                0,
            );
        }
        let m = acc.finalize(None);
        assert_eq!(m.failure_transitions, 3);
        assert_eq!(m.mtbf_ticks, Some(100.0));
    }

    #[test]
    fn empty_denominators_flagged_undefined() {
        let mut acc = MetricsAccumulator::new();
        acc.update(ApplicationLabel::Normal, &[], 0);
        let m = acc.finalize(None);
        assert_eq!(m.prediction_precision, None);
        assert_eq!(m.prediction_recall, None);
        assert_eq!(m.mtbf_ticks, None);
        assert_eq!(m.mission_reliability, 1.0);
    }
}
