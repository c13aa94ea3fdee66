//! Character n-gram profiles (ProfCNG).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::calibration::Calibration;
use super::case::VerificationCase;
use super::VerifyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileDissimilarity {
    D0,
    D1,
    Spi,
}

impl ProfileDissimilarity {
    pub const ALL: [ProfileDissimilarity; 3] = [
        ProfileDissimilarity::D0,
        ProfileDissimilarity::D1,
        ProfileDissimilarity::Spi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileDissimilarity::D0 => "d0",
            ProfileDissimilarity::D1 => "d1",
            ProfileDissimilarity::Spi => "spi",
        }
    }
}

impl fmt::Display for ProfileDissimilarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown profile dissimilarity {0:?} (expected d0, d1 or spi)")]
pub struct UnknownDissimilarity(pub String);

impl FromStr for ProfileDissimilarity {
    type Err = UnknownDissimilarity;

    fn from_str(s: &str) -> Result<Self, UnknownDissimilarity> {
        match s.to_ascii_lowercase().as_str() {
            "d0" => Ok(ProfileDissimilarity::D0),
            "d1" => Ok(ProfileDissimilarity::D1),
            "spi" => Ok(ProfileDissimilarity::Spi),
            _ => Err(UnknownDissimilarity(s.to_string())),
        }
    }
}

/// The `L` most frequent character n-grams of a text with their relative
/// frequencies (count over all n-gram occurrences). Equal counts are ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    /// In rank order, so sums over the profile are reproducible.
    ranked: Vec<(String, f64)>,
    grams: HashMap<String, f64>,
}

impl Profile {
    /// `None` when the text has fewer than `n` characters.
    pub fn build(text: &str, n: usize, size: usize) -> Option<Self> {
        let chars: Vec<char> = text.chars().collect();
        if n == 0 || chars.len() < n || size == 0 {
            return None;
        }
        let mut counts: HashMap<String, usize> = HashMap::new();
        for w in chars.windows(n) {
            *counts.entry(w.iter().collect()).or_default() += 1;
        }
        let total = (chars.len() - n + 1) as f64;
        let mut ranked: Vec<(String, usize)> = counts.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(size);
        let ranked: Vec<(String, f64)> = ranked
            .into_iter()
            .map(|(g, c)| (g, c as f64 / total))
            .collect();
        Some(Profile {
            grams: ranked.iter().cloned().collect(),
            ranked,
        })
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    pub fn frequency(&self, gram: &str) -> f64 {
        self.grams.get(gram).copied().unwrap_or(0.0)
    }

    /// `Σ_{g ∈ self} (2(f_self − f_other) / (f_self + f_other))²`.
    pub fn d0(&self, other: &Profile) -> f64 {
        self.ranked
            .iter()
            .map(|(g, fa)| {
                let fa = *fa;
                let fb = other.frequency(g);
                let t = 2.0 * (fa - fb) / (fa + fb);
                t * t
            })
            .sum()
    }

    /// Number of n-grams the two profiles share.
    pub fn intersection(&self, other: &Profile) -> usize {
        self.ranked
            .iter()
            .filter(|(g, _)| other.grams.contains_key(g))
            .count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProfileParams {
    pub profile_unknown: usize,
    pub profile_known: usize,
    pub n: usize,
    pub dissimilarity: ProfileDissimilarity,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            profile_unknown: 3000,
            profile_known: 3000,
            n: 4,
            dissimilarity: ProfileDissimilarity::D0,
        }
    }
}

/// Similarity-oriented raw score: `−d0`, `−d0 / (4·L_u)`, or the SPI count.
pub fn profcng_raw(case: &VerificationCase, p: &ProfileParams) -> Result<f64, VerifyError> {
    let too_small = |doc: &str| VerifyError::ProfileTooSmall {
        case: case.id.clone(),
        doc: doc.to_string(),
    };
    let unk = Profile::build(&case.unknown.text, p.n, p.profile_unknown)
        .ok_or_else(|| too_small(&case.unknown.id))?;
    let known = Profile::build(&case.known_text(), p.n, p.profile_known)
        .ok_or_else(|| too_small("known documents"))?;
    Ok(match p.dissimilarity {
        ProfileDissimilarity::D0 => -unk.d0(&known),
        ProfileDissimilarity::D1 => -unk.d0(&known) / (4.0 * p.profile_unknown as f64),
        ProfileDissimilarity::Spi => unk.intersection(&known) as f64,
    })
}

pub fn profcng_score(
    case: &VerificationCase,
    p: &ProfileParams,
    calibration: Option<&Calibration>,
) -> Result<f64, VerifyError> {
    let cal = calibration.ok_or(VerifyError::MissingCalibration)?;
    Ok(cal.normalize(profcng_raw(case, p)?))
}
