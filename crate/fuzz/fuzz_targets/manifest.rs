#![no_main]

use std::path::Path;

use libfuzzer_sys::fuzz_target;
use posnoise::harness::{validate_corpus, CorpusManifest};
use posnoise::verify::Partition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(manifest) = CorpusManifest::parse(text, Path::new("/nonexistent"), "fuzz", Partition::Test) else {
        return;
    };
    for v in validate_corpus(&manifest, &[&manifest]) {
        let _ = v.to_string();
    }
});
