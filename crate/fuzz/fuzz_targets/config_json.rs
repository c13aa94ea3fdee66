#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::verify::VerifierConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(config) = serde_json::from_slice::<VerifierConfig>(data) else { return };
    let _ = config.params.validate();
    let text = serde_json::to_string(&config).unwrap();
    let back: VerifierConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
});
