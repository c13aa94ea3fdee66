#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::compress::{CompressionModel, ModelOrder, MAX_ORDER};

// first byte picks the model order, the rest is the stream
fuzz_target!(|data: &[u8]| {
    let Some((&k, stream)) = data.split_first() else { return };
    let order = ModelOrder::new(1 + k as usize % MAX_ORDER).unwrap();
    let model = CompressionModel::new(order);
    if let Ok(out) = model.decompress(stream) {
        let again = model.compress(&out);
        assert_eq!(model.decompress(&again.bytes).unwrap(), out);
    }
});
