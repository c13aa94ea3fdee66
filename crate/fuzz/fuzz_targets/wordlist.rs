#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::distortion::{dvma_mask, dvsa_mask, FrequencyWordList};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(wl) = FrequencyWordList::parse(text) else { return };
    let single = dvsa_mask(text, &wl);
    let multi = dvma_mask(text, &wl);
    assert!(single.chars().count() <= text.chars().count());
    assert_eq!(multi.chars().count(), text.chars().count());
    let k = wl.len().div_ceil(2);
    let _ = wl.with_k(k).expect("k in range");
});
