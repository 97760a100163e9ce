#![no_main]

use grover_slocc::experiments::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = ExperimentConfig::from_toml_str(text) {
        // A valid config survives its own canonical form.
        let again = ExperimentConfig::from_toml_str(&cfg.canonical()).expect("canonical config reparses");
        assert_eq!(again, cfg);
        assert_eq!(again.hash(), cfg.hash());
    }
});
