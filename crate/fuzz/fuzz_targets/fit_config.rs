#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(config) = latacc::FitConfig::from_json(text) {
        if let Ok(priors) = config.validate() {
            assert_eq!(priors.prevalences.len(), config.model.n_prevalences());
        }
    }
});
