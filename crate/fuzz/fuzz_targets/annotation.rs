#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::distortion::{choose_k, k_curve, k_curve_tsv, StyleTopicAnnotation};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(ann) = StyleTopicAnnotation::parse(text, None) else { return };
    let rows = k_curve(&ann);
    let _ = k_curve_tsv(&rows);
    match choose_k(&ann) {
        Some(k) => assert!(k >= 1 && k <= ann.labels().len()),
        None => assert!(ann.labels().is_empty()),
    }
});
