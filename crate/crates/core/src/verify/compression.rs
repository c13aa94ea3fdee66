//! COAV, OCCAV and NNCD: verifiers built on compressed sizes.

use crate::compress::{cbc, cdm, ModelOrder};

use super::calibration::Calibration;
use super::case::{ImpostorPool, VerificationCase};
use super::VerifyError;

fn empty(case: &VerificationCase) -> VerifyError {
    VerifyError::EmptyDocument {
        case: case.id.clone(),
    }
}

/// Raw COAV score: `1 − cbc(D_unk, D_A)`, larger meaning more similar.
pub fn coav_raw(case: &VerificationCase, order: ModelOrder) -> Result<f64, VerifyError> {
    let known = case.known_text();
    let d = cbc(case.unknown.text.as_bytes(), known.as_bytes(), order).map_err(|_| empty(case))?;
    Ok(1.0 - d.value)
}

pub fn coav_score(
    case: &VerificationCase,
    calibration: Option<&Calibration>,
    order: ModelOrder,
) -> Result<f64, VerifyError> {
    let cal = calibration.ok_or(VerifyError::MissingCalibration)?;
    Ok(cal.normalize(coav_raw(case, order)?))
}

/// With two or more known documents: accepts when the unknown document is on
/// average no farther from the knowns than they are from each other. The
/// similarity is `0.5 + (within − across) / 2`, clamped, with ties accepted.
/// A single known document gives nothing to compare against and is rejected.
pub fn occav_score(case: &VerificationCase, order: ModelOrder) -> Result<f64, VerifyError> {
    if case.known.len() < 2 {
        return Ok(0.0);
    }
    let unk = case.unknown.text.as_bytes();
    let mut across = 0.0;
    for k in &case.known {
        across += cbc(unk, k.text.as_bytes(), order)
            .map_err(|_| empty(case))?
            .value;
    }
    across /= case.known.len() as f64;
    let (mut within, mut pairs) = (0.0, 0usize);
    for (i, a) in case.known.iter().enumerate() {
        for b in &case.known[i + 1..] {
            within += cbc(a.text.as_bytes(), b.text.as_bytes(), order)
                .map_err(|_| empty(case))?
                .value;
            pairs += 1;
        }
    }
    within /= pairs as f64;
    let margin = (within - across) / 2.0;
    Ok(if margin >= 0.0 {
        (0.5 + margin).clamp(0.5 + f64::EPSILON, 1.0)
    } else {
        (0.5 + margin).max(0.0)
    })
}

/// `min_I cdm(D_unk, I) / (min_I cdm(D_unk, I) + cdm(D_unk, D_A))`: above 0.5
/// exactly when D_A is the unique nearest neighbour, 0.5 on a tie.
pub fn nncd_score(
    case: &VerificationCase,
    pool: &ImpostorPool,
    order: ModelOrder,
) -> Result<f64, VerifyError> {
    if pool.is_empty() {
        return Err(VerifyError::EmptyImpostorPool {
            case: case.id.clone(),
        });
    }
    let unk = case.unknown.text.as_bytes();
    let to_known = cdm(unk, case.known_text().as_bytes(), order)
        .map_err(|_| empty(case))?
        .value;
    let mut nearest = f64::INFINITY;
    for imp in &pool.documents {
        let d = cdm(unk, imp.text.as_bytes(), order)
            .map_err(|_| empty(case))?
            .value;
        nearest = nearest.min(d);
    }
    Ok(nearest / (nearest + to_known))
}
