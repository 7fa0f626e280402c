//! Predicted-choice position analysis for multiple-choice logs.
//!
//! Questions carry between 2 and 10 options, so raw position counts tilt
//! toward early letters simply because later ones exist less often. The
//! baseline here is availability-weighted: each item contributes `1/n` to
//! every position it actually offers. The bias index is the total-variation
//! distance between the observed frequencies and that baseline.

use crate::corpus::PredictionRecord;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Largest supported option count (positions A..J).
pub const MAX_OPTIONS: usize = 10;

/// Histogram of predicted positions plus how often each position was
/// offered at all.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceDistribution {
    /// Predictions landing on each position.
    pub counts: [u64; MAX_OPTIONS],
    /// Items offering at least position+1 options.
    pub availability: [u64; MAX_OPTIONS],
}

impl ChoiceDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Observed frequencies: counts normalized by the prediction total.
    /// All zeros when the distribution is empty.
    pub fn frequencies(&self) -> [f64; MAX_OPTIONS] {
        let total = self.total();
        let mut out = [0.0; MAX_OPTIONS];
        if total == 0 {
            return out;
        }
        for (slot, &count) in out.iter_mut().zip(&self.counts) {
            *slot = count as f64 / total as f64;
        }
        out
    }

    /// Availability-weighted uniform baseline: every item spreads `1/n`
    /// over its n offered positions.
    pub fn baseline(&self) -> [f64; MAX_OPTIONS] {
        let items = self.availability[0];
        let mut out = [0.0; MAX_OPTIONS];
        if items == 0 {
            return out;
        }
        // Items with exactly n options: availability[n-1] - availability[n].
        for n in 1..=MAX_OPTIONS {
            let above = if n == MAX_OPTIONS { 0 } else { self.availability[n] };
            let exactly_n = self.availability[n - 1] - above;
            if exactly_n == 0 {
                continue;
            }
            let share = exactly_n as f64 / n as f64;
            for position in out.iter_mut().take(n) {
                *position += share;
            }
        }
        for position in &mut out {
            *position /= items as f64;
        }
        out
    }

    pub fn add(&mut self, predicted_index: usize, n_options: usize) {
        self.counts[predicted_index] += 1;
        for position in 0..n_options {
            self.availability[position] += 1;
        }
    }

    /// Associative merge of partial counts.
    pub fn merge(&mut self, other: &ChoiceDistribution) {
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            *mine += theirs;
        }
        for (mine, theirs) in self.availability.iter_mut().zip(&other.availability) {
            *mine += theirs;
        }
    }
}

/// Count predicted positions over `(predicted_index, n_options)` pairs.
pub fn choice_distribution(
    predictions: impl IntoIterator<Item = (usize, usize)>,
) -> Result<ChoiceDistribution> {
    let mut distribution = ChoiceDistribution::default();
    for (index, (predicted, n_options)) in predictions.into_iter().enumerate() {
        if n_options == 0 || n_options > MAX_OPTIONS || predicted >= n_options {
            return Err(Error::PredictionOutOfRange {
                id: format!("#{index}"),
                predicted,
                n_options,
            });
        }
        distribution.add(predicted, n_options);
    }
    Ok(distribution)
}

/// Total-variation distance between observed frequencies and the
/// availability-weighted baseline; 0 means unbiased, 1 maximal.
pub fn bias_index(distribution: &ChoiceDistribution) -> Result<f64> {
    if distribution.total() == 0 {
        return Err(Error::EmptyDistribution);
    }
    let frequencies = distribution.frequencies();
    let baseline = distribution.baseline();
    let distance: f64 = frequencies
        .iter()
        .zip(&baseline)
        .map(|(observed, expected)| (observed - expected).abs())
        .sum();
    Ok(distance / 2.0)
}

/// One distribution per domain; records without a domain fall into
/// "Other". Position-wise, the per-domain counts sum to the global ones.
pub fn per_domain(records: &[PredictionRecord]) -> Result<BTreeMap<String, ChoiceDistribution>> {
    let mut domains: BTreeMap<String, ChoiceDistribution> = BTreeMap::new();
    for record in records {
        record.validate()?;
        domains
            .entry(record.domain_label().to_string())
            .or_default()
            .add(record.predicted_index, record.n_options);
    }
    Ok(domains)
}
