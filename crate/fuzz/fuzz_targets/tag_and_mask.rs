#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::lexicon::PatternLexicon;
use posnoise::posnoise::{posnoise_mask, substitution_symbol, Decision};
use posnoise::text::{LexiconTagger, Tagger};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let doc = LexiconTagger::bundled().tag(text);
    assert_eq!(doc.source(), text);
    let masked = posnoise_mask(&doc, PatternLexicon::bundled());
    let replacements: Vec<String> = doc
        .tokens()
        .iter()
        .zip(&masked.provenance)
        .map(|(t, d)| match d {
            Decision::Substituted(tag) => substitution_symbol(*tag).unwrap().to_string(),
            _ => t.surface.clone(),
        })
        .collect();
    let rebuilt = doc.splice(replacements.iter().map(String::as_str));
    assert_eq!(rebuilt, masked.text);
});
