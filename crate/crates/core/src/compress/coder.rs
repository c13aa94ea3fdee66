//! Integer arithmetic coder over cumulative frequencies (32-bit code values,
//! carry-less with pending-bit underflow handling).

const CODE_BITS: u32 = 32;
const TOP: u64 = (1 << CODE_BITS) - 1;
const HALF: u64 = 1 << (CODE_BITS - 1);
const QUARTER: u64 = 1 << (CODE_BITS - 2);

/// Largest total frequency the coder accepts.
pub const MAX_TOTAL: u32 = 1 << 24;

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    acc: u8,
    nbits: u8,
    total_bits: u64,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | bit as u8;
        self.nbits += 1;
        self.total_bits += 1;
        if self.nbits == 8 {
            self.bytes.push(self.acc);
            self.acc = 0;
            self.nbits = 0;
        }
    }

    fn finish(mut self) -> (Vec<u8>, u64) {
        if self.nbits > 0 {
            self.bytes.push(self.acc << (8 - self.nbits));
        }
        (self.bytes, self.total_bits)
    }
}

pub struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitWriter,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Encoder {
            low: 0,
            high: TOP,
            pending: 0,
            out: BitWriter::default(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    /// Narrows the interval to `[cum_low, cum_high) / total`.
    pub fn encode(&mut self, cum_low: u32, cum_high: u32, total: u32) {
        debug_assert!(cum_low < cum_high && cum_high <= total && total <= MAX_TOTAL);
        let range = self.high - self.low + 1;
        self.high = self.low + range * cum_high as u64 / total as u64 - 1;
        self.low += range * cum_low as u64 / total as u64;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    /// Flushes the final interval; returns the code bytes and the exact bit count.
    pub fn finish(mut self) -> (Vec<u8>, u64) {
        self.pending += 1;
        let bit = self.low >= QUARTER;
        self.emit(bit);
        self.out.finish()
    }
}

pub struct Decoder<'a> {
    data: &'a [u8],
    pos: u64,
    low: u64,
    high: u64,
    value: u64,
}

impl<'a> Decoder<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        let mut d = Decoder {
            data,
            pos: 0,
            low: 0,
            high: TOP,
            value: 0,
        };
        for _ in 0..CODE_BITS {
            d.value = (d.value << 1) | d.next_bit();
        }
        d
    }

    fn next_bit(&mut self) -> u64 {
        let byte = self.data.get((self.pos / 8) as usize).copied().unwrap_or(0);
        let bit = (byte >> (7 - (self.pos % 8))) & 1;
        self.pos += 1;
        bit as u64
    }

    /// Whether decoding has read well past the end of the data, which a
    /// stream produced by [`Encoder`] never does.
    pub fn overrun(&self) -> bool {
        self.pos > self.data.len() as u64 * 8 + 2 * CODE_BITS as u64
    }

    /// The cumulative frequency the next symbol falls on.
    pub fn target(&self, total: u32) -> u32 {
        let range = self.high - self.low + 1;
        let t = ((self.value - self.low + 1) * total as u64 - 1) / range;
        t.min(total as u64 - 1) as u32
    }

    pub fn consume(&mut self, cum_low: u32, cum_high: u32, total: u32) {
        let range = self.high - self.low + 1;
        self.high = self.low + range * cum_high as u64 / total as u64 - 1;
        self.low += range * cum_low as u64 / total as u64;
        loop {
            if self.high < HALF {
            } else if self.low >= HALF {
                self.low -= HALF;
                self.high -= HALF;
                self.value -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.low -= QUARTER;
                self.high -= QUARTER;
                self.value -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
            self.value = (self.value << 1) | self.next_bit();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_a_fixed_distribution() {
        // symbols 0..4 with frequencies 1, 5, 10, 100
        let freqs = [1u32, 5, 10, 100];
        let cum: Vec<u32> = std::iter::once(0)
            .chain(freqs.iter().scan(0, |s, f| {
                *s += f;
                Some(*s)
            }))
            .collect();
        let total = *cum.last().unwrap();
        let msg: Vec<usize> = (0..5000).map(|i| (i * 7 + i / 3) % 4).collect();
        let mut enc = Encoder::new();
        for &s in &msg {
            enc.encode(cum[s], cum[s + 1], total);
        }
        let (bytes, bits) = enc.finish();
        assert_eq!(bytes.len() as u64, bits.div_ceil(8));

        let mut dec = Decoder::new(&bytes);
        for &s in &msg {
            let t = dec.target(total);
            let got = (0..4).find(|&i| cum[i] <= t && t < cum[i + 1]).unwrap();
            assert_eq!(got, s);
            dec.consume(cum[got], cum[got + 1], total);
        }
    }

    #[test]
    fn empty_stream_costs_flush_bits() {
        let (_, bits) = Encoder::new().finish();
        assert_eq!(bits, 2);
    }
}
