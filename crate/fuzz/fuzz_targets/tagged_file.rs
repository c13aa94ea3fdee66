#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::lexicon::PatternLexicon;
use posnoise::posnoise::posnoise_mask;
use posnoise::text::{parse_tagged, write_tagged};

// raw text and tagged file separated by the first NUL byte
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let (raw, tagged) = s.split_once('\0').unwrap_or((s, ""));
    let Ok(docs) = parse_tagged(raw, tagged) else { return };
    for doc in &docs {
        let masked = posnoise_mask(doc, PatternLexicon::bundled());
        assert_eq!(masked.provenance.len(), doc.len());
    }
    let sources: String = docs.iter().map(|d| d.source()).collect();
    assert_eq!(sources, raw);
    let rewritten = write_tagged(&docs, |_, _| Vec::new());
    let again = parse_tagged(&sources, &rewritten).expect("written tagged file parses");
    let count = |ds: &[posnoise::text::TaggedDocument]| ds.iter().map(|d| d.len()).sum::<usize>();
    assert_eq!(count(&again), count(&docs));
});
