//! Topic masking and authorship verification toolkit.
//!
//! * [`text`]: tokenization, Universal POS tagging, tagged-file ingestion.
//! * [`lexicon`]: the retention list of function words and phrases.
//! * [`posnoise`]: POSNoise masking.
//! * [`distortion`]: TextDistortion masking and choice of `k`.
//! * [`compress`]: PPM compressor, CDM and CBC.
//! * [`probe`]: topic-leakage probe and residual-token report.
//! * [`verify`]: the verification methods and their calibration.
//! * [`harness`]: corpus manifests, evaluation runs, metrics, grid search.
//! * [`linear`]: logistic regression shared by Unmasking and the topic probe.

pub mod compress;
pub mod distortion;
pub mod harness;
pub mod lexicon;
pub mod linear;
pub mod posnoise;
pub mod probe;
pub mod text;
pub mod verify;
