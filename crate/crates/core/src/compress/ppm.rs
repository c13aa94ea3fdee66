//! Byte-oriented PPM with escape method D, full exclusion, and an explicit
//! end-of-stream symbol coded in the order −1 context.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use super::coder::{Decoder, Encoder};

/// Highest supported model order.
pub const MAX_ORDER: usize = 15;

const EOS: u16 = 256;
const ALPHABET: u16 = 257;
/// Counts in a context are halved once their sum exceeds this.
const RESCALE_AT: u32 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("model order {0} outside 1..={MAX_ORDER}")]
pub struct InvalidOrder(pub usize);

/// A validated PPM context order.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(try_from = "usize", into = "usize")]
pub struct ModelOrder(usize);

impl ModelOrder {
    pub fn new(order: usize) -> Result<Self, InvalidOrder> {
        if (1..=MAX_ORDER).contains(&order) {
            Ok(ModelOrder(order))
        } else {
            Err(InvalidOrder(order))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl Default for ModelOrder {
    fn default() -> Self {
        ModelOrder(7)
    }
}

impl TryFrom<usize> for ModelOrder {
    type Error = InvalidOrder;

    fn try_from(v: usize) -> Result<Self, InvalidOrder> {
        ModelOrder::new(v)
    }
}

impl From<ModelOrder> for usize {
    fn from(o: ModelOrder) -> usize {
        o.0
    }
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let folded = (v as u64) ^ ((v >> 64) as u64).rotate_left(29);
        self.0 = (folded ^ (folded >> 31)).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    }
}

#[derive(Default)]
struct Context {
    /// (symbol, count) in first-seen order.
    symbols: Vec<(u8, u32)>,
    total: u32,
}

impl Context {
    fn increment(&mut self, sym: u8) {
        match self.symbols.iter_mut().find(|(s, _)| *s == sym) {
            Some((_, c)) => *c += 1,
            None => self.symbols.push((sym, 1)),
        }
        self.total += 1;
        if self.total > RESCALE_AT {
            self.total = 0;
            for (_, c) in &mut self.symbols {
                *c = c.div_ceil(2);
                self.total += *c;
            }
        }
    }
}

/// Adaptive context model shared by the encoder and the decoder.
struct Model {
    order: usize,
    contexts: HashMap<u128, Context, BuildHasherDefault<KeyHasher>>,
}

fn context_key(history: &[u8], k: usize) -> u128 {
    let mut key = (k as u128) << 120;
    for (i, &b) in history[history.len() - k..].iter().enumerate() {
        key |= (b as u128) << (8 * i);
    }
    key
}

impl Model {
    fn new(order: ModelOrder) -> Self {
        Model {
            order: order.get(),
            contexts: HashMap::default(),
        }
    }

    fn max_k(&self, history: &[u8]) -> usize {
        self.order.min(history.len())
    }

    fn update(&mut self, history: &[u8], sym: u8) {
        for k in 0..=self.max_k(history) {
            self.contexts
                .entry(context_key(history, k))
                .or_default()
                .increment(sym);
        }
    }

    fn encode(&self, enc: &mut Encoder, history: &[u8], sym: u16) {
        let mut excluded = [false; 256];
        for k in (0..=self.max_k(history)).rev() {
            let Some(ctx) = self.contexts.get(&context_key(history, k)) else {
                continue;
            };
            let (mut sum, mut distinct, mut hit) = (0u32, 0u32, None);
            for &(s, c) in &ctx.symbols {
                if excluded[s as usize] {
                    continue;
                }
                if s as u16 == sym {
                    hit = Some((sum, 2 * c - 1));
                }
                sum += 2 * c - 1;
                distinct += 1;
            }
            if distinct == 0 {
                continue;
            }
            let total = sum + distinct;
            if let Some((lo, f)) = hit {
                enc.encode(lo, lo + f, total);
                return;
            }
            enc.encode(sum, total, total);
            for &(s, _) in &ctx.symbols {
                excluded[s as usize] = true;
            }
        }
        // order -1: uniform over the symbols not yet excluded
        let idx = (0..sym)
            .filter(|&s| s == EOS || !excluded[s as usize])
            .count() as u32;
        let remaining = (0..ALPHABET)
            .filter(|&s| s == EOS || !excluded[s as usize])
            .count() as u32;
        enc.encode(idx, idx + 1, remaining);
    }

    fn decode(&self, dec: &mut Decoder<'_>, history: &[u8]) -> u16 {
        let mut excluded = [false; 256];
        for k in (0..=self.max_k(history)).rev() {
            let Some(ctx) = self.contexts.get(&context_key(history, k)) else {
                continue;
            };
            let (sum, distinct) = ctx
                .symbols
                .iter()
                .filter(|(s, _)| !excluded[*s as usize])
                .fold((0u32, 0u32), |(sum, d), &(_, c)| (sum + 2 * c - 1, d + 1));
            if distinct == 0 {
                continue;
            }
            let total = sum + distinct;
            let target = dec.target(total);
            if target < sum {
                let mut lo = 0;
                for &(s, c) in &ctx.symbols {
                    if excluded[s as usize] {
                        continue;
                    }
                    let f = 2 * c - 1;
                    if target < lo + f {
                        dec.consume(lo, lo + f, total);
                        return s as u16;
                    }
                    lo += f;
                }
                unreachable!("target below sum always hits a symbol");
            }
            dec.consume(sum, total, total);
            for &(s, _) in &ctx.symbols {
                excluded[s as usize] = true;
            }
        }
        let candidates: Vec<u16> = (0..ALPHABET)
            .filter(|&s| s == EOS || !excluded[s as usize])
            .collect();
        let target = dec.target(candidates.len() as u32) as usize;
        dec.consume(target as u32, target as u32 + 1, candidates.len() as u32);
        candidates[target]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("compressed stream is corrupt or truncated")]
pub struct CorruptStream;

/// Compressed stream together with its exact length in bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compressed {
    pub bytes: Vec<u8>,
    pub bits: u64,
}

/// A single-use PPM compressor of fixed order.
pub struct CompressionModel {
    order: ModelOrder,
}

impl CompressionModel {
    pub fn new(order: ModelOrder) -> Self {
        CompressionModel { order }
    }

    pub fn order(&self) -> ModelOrder {
        self.order
    }

    pub fn compress(&self, data: &[u8]) -> Compressed {
        let mut model = Model::new(self.order);
        let mut enc = Encoder::new();
        for (i, &b) in data.iter().enumerate() {
            model.encode(&mut enc, &data[..i], b as u16);
            model.update(&data[..i], b);
        }
        model.encode(&mut enc, data, EOS);
        let (bytes, bits) = enc.finish();
        Compressed { bytes, bits }
    }

    /// Decodes a stream from [`compress`](Self::compress) with the same order.
    pub fn decompress(&self, bytes: &[u8]) -> Result<Vec<u8>, CorruptStream> {
        let mut model = Model::new(self.order);
        let mut dec = Decoder::new(bytes);
        let mut out = Vec::new();
        loop {
            let sym = model.decode(&mut dec, &out);
            if sym == EOS {
                return Ok(out);
            }
            if dec.overrun() {
                return Err(CorruptStream);
            }
            let b = sym as u8;
            model.update(&out, b);
            out.push(b);
        }
    }
}

/// Compressed length of `data` in bits, including the end-of-stream cost.
pub fn compressed_size(data: &[u8], order: ModelOrder) -> u64 {
    CompressionModel::new(order).compress(data).bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn order(k: usize) -> ModelOrder {
        ModelOrder::new(k).unwrap()
    }

    #[test]
    fn order_bounds() {
        assert!(ModelOrder::new(0).is_err());
        assert!(ModelOrder::new(16).is_err());
        assert_eq!(ModelOrder::default().get(), 7);
    }

    #[test]
    fn round_trip_small_inputs() {
        for data in [
            &b""[..],
            b"a",
            b"abracadabra",
            b"\x00\xff\x00\xff",
            "żółw §µ".as_bytes(),
        ] {
            for k in [1, 3, 7, 15] {
                let m = CompressionModel::new(order(k));
                let c = m.compress(data);
                assert_eq!(m.decompress(&c.bytes).unwrap(), data, "order {k}");
            }
        }
    }

    #[test]
    fn round_trip_random_bytes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data: Vec<u8> = (0..3000).map(|_| rng.random()).collect();
        let m = CompressionModel::new(order(7));
        assert_eq!(m.decompress(&m.compress(&data).bytes).unwrap(), data);
    }

    #[test]
    fn empty_input_has_positive_cost() {
        let bits = compressed_size(b"", order(7));
        // one EOS symbol out of 257 plus flush bits
        assert!(bits > 0 && bits <= 12, "{bits}");
    }

    #[test]
    fn rescaling_keeps_round_trip() {
        let data = vec![b'z'; 200_000];
        let m = CompressionModel::new(order(2));
        let c = m.compress(&data);
        assert!(c.bits < 8 * 2000);
        assert_eq!(m.decompress(&c.bytes).unwrap(), data);
    }

    #[test]
    fn garbage_input_terminates() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = CompressionModel::new(order(3));
        for len in 0..200 {
            let junk: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            if let Ok(out) = m.decompress(&junk) {
                assert!(out.len() <= 8 * len + 64 * 8);
            }
        }
    }

    #[test]
    fn truncated_stream_is_rejected_or_shorter() {
        let data = b"a stream long enough to be cut in half and still say something".to_vec();
        let m = CompressionModel::new(order(4));
        let c = m.compress(&data);
        if let Ok(out) = m.decompress(&c.bytes[..c.bytes.len() / 2]) {
            assert_ne!(out, data);
        }
    }

    #[test]
    fn deterministic() {
        let data = b"the quick brown fox jumps over the lazy dog ".repeat(20);
        assert_eq!(
            compressed_size(&data, order(7)),
            compressed_size(&data, order(7))
        );
    }
}
