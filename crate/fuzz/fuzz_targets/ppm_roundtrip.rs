#![no_main]

use libfuzzer_sys::fuzz_target;
use posnoise::compress::{compressed_size, CompressionModel, ModelOrder, MAX_ORDER};

fuzz_target!(|data: &[u8]| {
    let Some((&k, input)) = data.split_first() else { return };
    let order = ModelOrder::new(1 + k as usize % MAX_ORDER).unwrap();
    let model = CompressionModel::new(order);
    let c = model.compress(input);
    assert_eq!(c.bits, compressed_size(input, order));
    assert_eq!(model.decompress(&c.bytes).unwrap(), input);
});
