#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::lexicon::PatternLexicon;
use posnoise::text::tokenize;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(lex) = PatternLexicon::parse(text) else { return };
    let tokens: Vec<&str> = tokenize(text).iter().map(|s| s.slice(text)).collect();
    let mask = lex.mask_tokens(&tokens);
    assert_eq!(mask.len(), tokens.len());
    for p in lex.entries() {
        assert!(!p.tokens.is_empty());
    }
});
