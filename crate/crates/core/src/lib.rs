//! Proactive dependability runtime for a simulated gossip-based wireless
//! sensor network: a discrete-tick simulator, a monitor/analysis/adaptation
//! control loop, and a batch harness for comparing adaptation modes.

pub mod adaptation;
pub mod analysis;
pub mod control;
pub mod evaluation;
pub mod harness;
pub mod model;
pub mod monitor;
pub mod sim;
