//! Shared domain vocabulary: features, observables, control parameters and
//! application labels used by every other module.

use serde::{Deserialize, Serialize};

/// A monitored system feature: either a resource or a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureId {
    /// Resource feature: remaining energy.
    Battery,
    /// Function feature: ability to exchange messages.
    Communication,
}

impl FeatureId {
    pub fn kind(self) -> FeatureKind {
        match self {
            FeatureId::Battery => FeatureKind::Resource,
            FeatureId::Communication => FeatureKind::Function,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureKind {
    Resource,
    Function,
}

/// One of the four observable parameters sampled every monitoring instant.
///
/// The catalog order is fixed; observation vectors are always indexed in
/// this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ObservableId {
    RssiMean,
    NeighborCount,
    MessagesReceived,
    BatteryLevel,
}

/// Number of observables (m + n): one resource observable, three function
/// observables.
pub const OBSERVABLE_COUNT: usize = 4;

/// The full observable catalog in vector order.
pub const OBSERVABLE_CATALOG: [ObservableId; OBSERVABLE_COUNT] = [
    ObservableId::RssiMean,
    ObservableId::NeighborCount,
    ObservableId::MessagesReceived,
    ObservableId::BatteryLevel,
];

impl ObservableId {
    pub fn index(self) -> usize {
        match self {
            ObservableId::RssiMean => 0,
            ObservableId::NeighborCount => 1,
            ObservableId::MessagesReceived => 2,
            ObservableId::BatteryLevel => 3,
        }
    }

    pub fn unit(self) -> Unit {
        match self {
            ObservableId::RssiMean => Unit::Dbm,
            ObservableId::NeighborCount => Unit::Count,
            ObservableId::MessagesReceived => Unit::CountPerWindow,
            ObservableId::BatteryLevel => Unit::Joules,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObservableId::RssiMean => "rssi_mean",
            ObservableId::NeighborCount => "neighbor_count",
            ObservableId::MessagesReceived => "messages_received",
            ObservableId::BatteryLevel => "battery_level",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Unit {
    Dbm,
    Count,
    CountPerWindow,
    Joules,
}

/// Maps an observable to the feature it monitors.
pub fn observable_feature(id: ObservableId) -> FeatureId {
    match id {
        ObservableId::BatteryLevel => FeatureId::Battery,
        ObservableId::RssiMean | ObservableId::NeighborCount | ObservableId::MessagesReceived => {
            FeatureId::Communication
        }
    }
}

/// A node-local resource that can be switched on or off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActiveResource {
    Radio,
    Sensor,
    Actuator,
}

/// Per-node controllable parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlSettings {
    /// Transmit power in dBm.
    pub tx_power: f64,
    /// Receive sensitivity in dBm; a signal must be at or above this level
    /// to be heard.
    pub rx_sensitivity: f64,
    /// Broadcast slots per round.
    pub tx_schedules: u32,
    /// Listen slots per round.
    pub rx_schedules: u32,
    /// Round duration in seconds.
    pub round_time: f64,
    /// Fraction of each round spent asleep, in [0, 1).
    pub sleep_fraction: f64,
    /// Resources currently powered; sorted for deterministic serialization.
    pub active_resources: Vec<ActiveResource>,
}

impl Default for ControlSettings {
    fn default() -> Self {
        ControlSettings {
            tx_power: 0.0,
            rx_sensitivity: -90.0,
            tx_schedules: 1,
            rx_schedules: 2,
            round_time: 1.0,
            sleep_fraction: 0.0,
            active_resources: vec![
                ActiveResource::Radio,
                ActiveResource::Sensor,
                ActiveResource::Actuator,
            ],
        }
    }
}

impl ControlSettings {
    pub fn has_resource(&self, r: ActiveResource) -> bool {
        self.active_resources.contains(&r)
    }
}

/// Closed interval bound for one controllable field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bound {
    pub lo: f64,
    pub hi: f64,
}

impl Bound {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "malformed bound [{lo}, {hi}]");
        Bound { lo, hi }
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }
}

/// Per-field bounds for controllable parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CpBounds {
    pub tx_power: Bound,
    pub rx_sensitivity: Bound,
    pub tx_schedules: Bound,
    pub rx_schedules: Bound,
    pub round_time: Bound,
    pub sleep_fraction: Bound,
}

impl Default for CpBounds {
    fn default() -> Self {
        CpBounds {
            tx_power: Bound::new(-10.0, 5.0),
            rx_sensitivity: Bound::new(-95.0, -80.0),
            tx_schedules: Bound::new(1.0, 4.0),
            rx_schedules: Bound::new(1.0, 4.0),
            round_time: Bound::new(0.25, 4.0),
            sleep_fraction: Bound::new(0.0, 0.95),
        }
    }
}

impl CpBounds {
    pub fn is_well_formed(&self) -> bool {
        [
            self.tx_power,
            self.rx_sensitivity,
            self.tx_schedules,
            self.rx_schedules,
            self.round_time,
            self.sleep_fraction,
        ]
        .iter()
        .all(|b| b.lo <= b.hi)
    }
}

/// Clamps every controllable field into its bound. Total: fields already in
/// range pass through unchanged.
pub fn clamp_controls(settings: &ControlSettings, bounds: &CpBounds) -> ControlSettings {
    let mut out = settings.clone();
    out.tx_power = bounds.tx_power.clamp(out.tx_power);
    out.rx_sensitivity = bounds.rx_sensitivity.clamp(out.rx_sensitivity);
    out.tx_schedules = bounds.tx_schedules.clamp(out.tx_schedules as f64).round() as u32;
    out.rx_schedules = bounds.rx_schedules.clamp(out.rx_schedules as f64).round() as u32;
    out.round_time = bounds.round_time.clamp(out.round_time);
    out.sleep_fraction = bounds.sleep_fraction.clamp(out.sleep_fraction);
    out
}

/// The dimension of the application spec a failure violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ViolatedDimension {
    PresenceSetting,
    AbsenceSetting,
    ReactionDelay,
}

impl ViolatedDimension {
    pub fn name(self) -> &'static str {
        match self {
            ViolatedDimension::PresenceSetting => "presence_setting",
            ViolatedDimension::AbsenceSetting => "absence_setting",
            ViolatedDimension::ReactionDelay => "reaction_delay",
        }
    }
}

/// Evaluation verdict for the application at one monitoring instant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApplicationLabel {
    Normal,
    Failure(ViolatedDimension),
}

impl ApplicationLabel {
    pub fn is_normal(self) -> bool {
        matches!(self, ApplicationLabel::Normal)
    }
}
