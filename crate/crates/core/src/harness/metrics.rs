use crate::verify::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("AUC needs at least one Y and one N case")]
pub struct UndefinedAuc;

/// Share of labelled cases whose decision matches the label; `None` when no
/// case is labelled.
pub fn accuracy(decisions: &[(Label, Option<Label>)]) -> Option<f64> {
    let labelled: Vec<_> = decisions
        .iter()
        .filter_map(|(d, l)| l.map(|l| (*d, l)))
        .collect();
    if labelled.is_empty() {
        return None;
    }
    let correct = labelled.iter().filter(|(d, l)| d == l).count();
    Some(correct as f64 / labelled.len() as f64)
}

/// Mann–Whitney AUC by exhaustive pair counting: the share of (Y, N) pairs in
/// which the Y case scores higher, ties counting one half.
pub fn auc(scores: &[(f64, Label)]) -> Result<f64, UndefinedAuc> {
    let pos: Vec<f64> = scores
        .iter()
        .filter(|s| s.1 == Label::Y)
        .map(|s| s.0)
        .collect();
    let neg: Vec<f64> = scores
        .iter()
        .filter(|s| s.1 == Label::N)
        .map(|s| s.0)
        .collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(UndefinedAuc);
    }
    // doubled counts
    let mut twice: u64 = 0;
    for &p in &pos {
        for &n in &neg {
            twice += if p > n {
                2
            } else if p == n {
                1
            } else {
                0
            };
        }
    }
    Ok(twice as f64 / (2 * pos.len() * neg.len()) as f64)
}
