//! PPM compression and the compression-based dissimilarities CDM and CBC.

mod coder;
mod ppm;

pub use ppm::{
    compressed_size, Compressed, CompressionModel, CorruptStream, InvalidOrder, ModelOrder,
    MAX_ORDER,
};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("compression dissimilarity of an empty input")]
pub struct EmptyInput;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DissimilarityKind {
    Cdm,
    Cbc,
}

/// A compression-based dissimilarity value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dissimilarity {
    pub value: f64,
    pub kind: DissimilarityKind,
}

/// Slack beyond `[0, 1]` that coder overhead can push a CBC value.
pub const CBC_SLACK: f64 = 0.05;

fn concat(x: &[u8], y: &[u8]) -> Vec<u8> {
    let mut xy = Vec::with_capacity(x.len() + y.len());
    xy.extend_from_slice(x);
    xy.extend_from_slice(y);
    xy
}

/// Compression-based dissimilarity measure: `C(xy) / (C(x) + C(y))`.
pub fn cdm(x: &[u8], y: &[u8], order: ModelOrder) -> Result<Dissimilarity, EmptyInput> {
    if x.is_empty() || y.is_empty() {
        return Err(EmptyInput);
    }
    let cx = compressed_size(x, order) as f64;
    let cy = compressed_size(y, order) as f64;
    let cxy = compressed_size(&concat(x, y), order) as f64;
    Ok(Dissimilarity {
        value: cxy / (cx + cy),
        kind: DissimilarityKind::Cdm,
    })
}

/// Compression-based cosine, symmetrised over both concatenation orders:
/// `1 − (C(x) + C(y) − Ĉ) / sqrt(C(x)·C(y))` with `Ĉ = (C(xy) + C(yx)) / 2`.
pub fn cbc(x: &[u8], y: &[u8], order: ModelOrder) -> Result<Dissimilarity, EmptyInput> {
    if x.is_empty() || y.is_empty() {
        return Err(EmptyInput);
    }
    let cx = compressed_size(x, order) as f64;
    let cy = compressed_size(y, order) as f64;
    let cxy = compressed_size(&concat(x, y), order) as f64;
    let cyx = compressed_size(&concat(y, x), order) as f64;
    Ok(Dissimilarity {
        value: cbc_from_sizes(cx, cy, (cxy + cyx) / 2.0),
        kind: DissimilarityKind::Cbc,
    })
}

pub(crate) fn cbc_from_sizes(cx: f64, cy: f64, cxy: f64) -> f64 {
    1.0 - (cx + cy - cxy) / (cx * cy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const TEXT: &str = "It was the best of times, it was the worst of times, it was the age of wisdom, \
        it was the age of foolishness, it was the epoch of belief, it was the epoch of incredulity, \
        it was the season of Light, it was the season of Darkness, it was the spring of hope, \
        it was the winter of despair, we had everything before us, we had nothing before us.";

    fn random_bytes(n: usize, seed: u64) -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random_range(b'a'..=b'z')).collect()
    }

    #[test]
    fn empty_inputs_error() {
        let o = ModelOrder::default();
        assert_eq!(cdm(b"", b"x", o), Err(EmptyInput));
        assert_eq!(cbc(b"x", b"", o), Err(EmptyInput));
    }

    #[test]
    fn cdm_prefers_self() {
        let o = ModelOrder::default();
        let x = TEXT.as_bytes();
        let r = random_bytes(x.len(), 1);
        let same = cdm(x, x, o).unwrap().value;
        let other = cdm(x, &r, o).unwrap().value;
        assert!(same < other, "{same} vs {other}");
        assert!(same > 0.5 && other <= 1.1);
    }

    #[test]
    fn cdm_of_constant_run_is_near_half() {
        let a = vec![b'a'; 1000];
        let v = cdm(&a, &a, ModelOrder::default()).unwrap().value;
        assert!(v > 0.5 && v < 0.6, "{v}");
    }

    #[test]
    fn cbc_is_symmetric_and_prefers_self() {
        let o = ModelOrder::default();
        let x = TEXT.as_bytes();
        let y = b"Completely unrelated words about quantum chromodynamics and gluons.";
        assert_eq!(cbc(x, y, o).unwrap().value, cbc(y, x, o).unwrap().value);
        let r = random_bytes(x.len(), 2);
        assert!(cbc(x, x, o).unwrap().value < cbc(x, &r, o).unwrap().value);
    }
}
