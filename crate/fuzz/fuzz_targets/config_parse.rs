#![no_main]

use libfuzzer_sys::fuzz_target;
use triband::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = ExperimentConfig::parse(text) else { return };
    // Anything the parser accepts must generate; keep the run cheap.
    let mut p = cfg.params;
    p.num_flows = p.num_flows.min(8);
    p.frame.num_slots = p.frame.num_slots.min(16);
    let sc = p.generate(cfg.seeds[0]).expect("accepted config must generate");
    for scheme in cfg.schemes {
        let res = scheme.run(&sc);
        assert!(res.completed_count() <= sc.flows().len());
    }
});
