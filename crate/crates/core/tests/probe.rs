use depguard::control::{LoopConfig, LoopMode, LoopState};
use depguard::harness;

#[test]
fn probe() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/battery_drain.json"
    ))
    .unwrap();
    let sc = harness::load_scenario_str(&text).unwrap();
    let mut l = LoopState::new(sc.build_sim(1), sc.app_spec.clone(), LoopConfig::default());
    for _t in 1..=2000u64 {
        let out = l.tick(LoopMode::Proactive);
        for p in &out.new_predictions {
            println!(
                "t={} PRED node={} fault={:?} trig={:?} win=[{},{}]",
                out.tick, p.node, p.fault_type, p.trigger, p.t_min, p.t_max
            );
        }
        for (n, a) in &out.actions {
            println!("t={} ACT node={} action={}", out.tick, n, a);
        }
        for r in &out.resolved {
            println!(
                "t={} RES node={} fault={:?} act={:?} -> {:?}",
                out.tick,
                r.prediction.node,
                r.prediction.fault_type,
                r.action.as_ref().map(|a| a.id),
                r.result
            );
        }
        for i in &out.interventions {
            println!("t={} INTV node={}", out.tick, i);
        }
    }
    println!("model: {:#?}", l.model());
    println!("policy: {:#?}", l.policy);
    let m = l.metrics.finalize(None);
    println!("metrics: {:?}", m);
}
