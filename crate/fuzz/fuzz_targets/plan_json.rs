#![no_main]

use libfuzzer_sys::fuzz_target;
use triset_bench::ExperimentPlan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(plan) = ExperimentPlan::from_json(text) {
        let _ = plan.resolve();
        let back = ExperimentPlan::from_json(&plan.to_json()).expect("serialized plans parse");
        // NaN budget scales do not compare equal to themselves
        if plan.budget_scale.is_finite() {
            assert_eq!(back, plan);
        }
    }
});
