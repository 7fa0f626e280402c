//! Corpus ordering for training.
//!
//! The longest E samples (E = effective batch size) open the corpus in
//! descending length order; the rest follows in ascending length order with
//! the cultural samples lifted out and re-inserted at evenly spaced
//! positions. Ties break by id ascending everywhere, so the permutation is a
//! pure function of (lengths, ids, flags, config).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;

/// How prompt length is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LengthMode {
    /// Ask the scoring backend's tokenizer.
    TokenCountViaBackend,
    /// Split on whitespace. The default: ordering properties hold under any
    /// mode, and this one needs no backend.
    #[default]
    WhitespaceTokens,
    /// UTF-8 byte length.
    Bytes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingConfig {
    pub effective_batch_size: usize,
    pub length_mode: LengthMode,
}

impl Default for OrderingConfig {
    fn default() -> Self {
        OrderingConfig {
            effective_batch_size: 600,
            length_mode: LengthMode::default(),
        }
    }
}

/// Effective batch size: batch size times gradient accumulation steps.
pub fn effective_batch_size(batch: usize, grad_accum: usize) -> usize {
    batch * grad_accum
}

/// Source of backend token counts for [`LengthMode::TokenCountViaBackend`].
pub trait TokenCounter {
    fn count(&self, text: &str) -> Result<u64>;
}

/// Measure a prompt under the configured mode.
pub fn length_of(
    prompt: &str,
    config: &OrderingConfig,
    counter: Option<&dyn TokenCounter>,
) -> Result<u64> {
    match config.length_mode {
        LengthMode::Bytes => Ok(prompt.len() as u64),
        LengthMode::WhitespaceTokens => Ok(prompt.split_whitespace().count() as u64),
        LengthMode::TokenCountViaBackend => match counter {
            Some(counter) => counter.count(prompt),
            None => Err(Error::Config(
                "length mode token_count_via_backend needs a backend".into(),
            )),
        },
    }
}

/// One sample entering the orderer: its resolved length plus flags.
#[derive(Debug, Clone)]
pub struct OrderItem<T> {
    pub id: String,
    pub length: u64,
    pub is_cultural: bool,
    pub payload: T,
}

/// Which region of the ordered corpus a sample landed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    Head,
    Body,
}

/// A sample with its final position.
#[derive(Debug, Clone)]
pub struct PlacedItem<T> {
    pub position: usize,
    pub block: Block,
    pub id: String,
    pub length: u64,
    pub is_cultural: bool,
    pub payload: T,
}

/// JSONL record written by the ordering stage: the original sample plus its
/// position, measured length and block.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OrderedRecord {
    pub position: usize,
    pub block: Block,
    pub length: u64,
    #[serde(flatten)]
    pub sample: crate::corpus::Sample,
}

impl From<PlacedItem<crate::corpus::Sample>> for OrderedRecord {
    fn from(placed: PlacedItem<crate::corpus::Sample>) -> Self {
        OrderedRecord {
            position: placed.position,
            block: placed.block,
            length: placed.length,
            sample: placed.payload,
        }
    }
}

/// Order a corpus. Returns a permutation of the input where:
///
/// 1. the first `min(E, N)` positions hold the globally longest samples in
///    descending length order;
/// 2. the remaining non-cultural samples follow in ascending length order;
/// 3. remaining cultural samples sit at evenly spaced positions across the
///    remainder, displacing (not replacing) the ascending sequence.
pub fn order<T>(items: Vec<OrderItem<T>>, config: &OrderingConfig) -> Vec<PlacedItem<T>> {
    let total = items.len();
    let head_len = config.effective_batch_size.min(total);

    // Longest first; ids break ties so equal lengths order identically on
    // every platform.
    let mut by_length_desc: Vec<OrderItem<T>> = items;
    by_length_desc.sort_by(|a, b| {
        (Reverse(a.length), a.id.as_str()).cmp(&(Reverse(b.length), b.id.as_str()))
    });

    let remainder: Vec<OrderItem<T>> = by_length_desc.split_off(head_len);
    let head = by_length_desc;

    let (mut cultural, mut regular): (Vec<OrderItem<T>>, Vec<OrderItem<T>>) =
        remainder.into_iter().partition(|item| item.is_cultural);
    let ascending = |a: &OrderItem<T>, b: &OrderItem<T>| {
        (a.length, a.id.as_str()).cmp(&(b.length, b.id.as_str()))
    };
    regular.sort_by(ascending);
    cultural.sort_by(ascending);

    let slots = regular.len() + cultural.len();
    let cultural_positions = spread_positions(slots, cultural.len());

    let mut placed = Vec::with_capacity(total);
    for item in head {
        let position = placed.len();
        placed.push(place(item, position, Block::Head));
    }

    let mut cultural_iter = cultural.into_iter();
    let mut regular_iter = regular.into_iter();
    let mut next_cultural = cultural_positions.iter().copied().peekable();
    for slot in 0..slots {
        let item = if next_cultural.peek() == Some(&slot) {
            next_cultural.next();
            cultural_iter.next().expect("one cultural item per reserved slot")
        } else {
            regular_iter.next().expect("one regular item per open slot")
        };
        let position = placed.len();
        placed.push(place(item, position, Block::Body));
    }

    placed
}

fn place<T>(item: OrderItem<T>, position: usize, block: Block) -> PlacedItem<T> {
    PlacedItem {
        position,
        block,
        id: item.id,
        length: item.length,
        is_cultural: item.is_cultural,
        payload: item.payload,
    }
}

/// Evenly spaced slot indices for `count` items over `slots` positions:
/// slot `floor(j * slots / count)` for each `j`. Consecutive gaps are either
/// `floor(slots / count)` or one more.
fn spread_positions(slots: usize, count: usize) -> Vec<usize> {
    (0..count).map(|j| j * slots / count.max(1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn item(id: &str, length: u64, cultural: bool) -> OrderItem<()> {
        OrderItem {
            id: id.into(),
            length,
            is_cultural: cultural,
            payload: (),
        }
    }

    #[test]
    fn effective_batch_size_is_a_product() {
        assert_eq!(effective_batch_size(40, 15), 600);
        assert_eq!(effective_batch_size(1, 1), 1);
        assert_eq!(effective_batch_size(7, 9), 63);
    }

    #[test]
    fn length_modes() {
        let config = OrderingConfig {
            effective_batch_size: 1,
            length_mode: LengthMode::Bytes,
        };
        assert_eq!(length_of("", &config, None).unwrap(), 0);

        let config = OrderingConfig {
            length_mode: LengthMode::WhitespaceTokens,
            ..config
        };
        assert_eq!(length_of("a b c", &config, None).unwrap(), 3);

        let config = OrderingConfig {
            length_mode: LengthMode::TokenCountViaBackend,
            ..config
        };
        assert!(matches!(length_of("x", &config, None), Err(Error::Config(_))));
    }

    #[test]
    fn four_samples_head_two() {
        let items = vec![
            item("a", 1, false),
            item("b", 5, false),
            item("c", 3, false),
            item("d", 4, false),
        ];
        let config = OrderingConfig {
            effective_batch_size: 2,
            length_mode: LengthMode::WhitespaceTokens,
        };
        let ordered: Vec<String> = order(items, &config)
            .into_iter()
            .map(|p| p.id)
            .collect();
        assert_eq!(ordered, vec!["b", "d", "a", "c"]);
    }

    #[test]
    fn all_cultural_is_head_plus_ascending_remainder() {
        let items: Vec<OrderItem<()>> =
            (0..10).map(|i| item(&format!("c{i}"), 10 - i as u64, true)).collect();
        let config = OrderingConfig {
            effective_batch_size: 3,
            length_mode: LengthMode::WhitespaceTokens,
        };
        let placed = order(items, &config);
        let lengths: Vec<u64> = placed.iter().map(|p| p.length).collect();
        assert_eq!(&lengths[..3], &[10, 9, 8]);
        let body = lengths[3..].to_vec();
        let mut sorted = body.clone();
        sorted.sort_unstable();
        assert_eq!(body, sorted);
        assert_eq!(placed.iter().filter(|p| p.block == Block::Head).count(), 3);
    }

    #[test]
    fn corpus_smaller_than_head_becomes_one_block() {
        let items = vec![item("a", 1, true), item("b", 9, false)];
        let config = OrderingConfig::default();
        let placed = order(items, &config);
        assert!(placed.iter().all(|p| p.block == Block::Head));
        assert_eq!(placed[0].id, "b");
    }

    #[test]
    fn positions_are_sequential() {
        let items: Vec<OrderItem<()>> =
            (0..25).map(|i| item(&format!("s{i:02}"), i as u64 % 7, i % 5 == 0)).collect();
        let config = OrderingConfig {
            effective_batch_size: 5,
            length_mode: LengthMode::WhitespaceTokens,
        };
        let placed = order(items, &config);
        for (expected, placed) in placed.iter().enumerate() {
            assert_eq!(placed.position, expected);
        }
    }

    /// Brute-force verification of every ordering guarantee.
    pub(crate) fn check_ordering<T>(original: &[OrderItem<T>], placed: &[PlacedItem<T>], head_size: usize) {
        let total = original.len();
        assert_eq!(placed.len(), total, "permutation keeps the count");

        // Permutation on id multisets.
        let mut input_ids: BTreeMap<&str, usize> = BTreeMap::new();
        for item in original {
            *input_ids.entry(item.id.as_str()).or_default() += 1;
        }
        let mut output_ids: BTreeMap<&str, usize> = BTreeMap::new();
        for item in placed {
            *output_ids.entry(item.id.as_str()).or_default() += 1;
        }
        assert_eq!(input_ids, output_ids, "same id multiset");

        let head_len = head_size.min(total);
        let head = &placed[..head_len];
        let body = &placed[head_len..];

        // Head holds the globally longest samples, descending.
        let mut all_lengths: Vec<u64> = original.iter().map(|i| i.length).collect();
        all_lengths.sort_unstable_by(|a, b| b.cmp(a));
        let head_lengths: Vec<u64> = head.iter().map(|p| p.length).collect();
        assert_eq!(head_lengths, all_lengths[..head_len].to_vec(), "head is the longest set, descending");
        if let (Some(min_head), Some(max_body)) = (
            head.iter().map(|p| p.length).min(),
            body.iter().map(|p| p.length).max(),
        ) {
            assert!(min_head >= max_body, "head dominates body lengths");
        }

        // Non-cultural body subsequence is non-decreasing.
        let regular: Vec<u64> = body
            .iter()
            .filter(|p| !p.is_cultural)
            .map(|p| p.length)
            .collect();
        assert!(
            regular.windows(2).all(|w| w[0] <= w[1]),
            "non-cultural remainder is sorted ascending"
        );

        // Cultural gaps deviate from the ideal stride by at most one.
        let cultural_positions: Vec<usize> = body
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_cultural)
            .map(|(slot, _)| slot)
            .collect();
        if let Some(stride) = body.len().checked_div(cultural_positions.len()) {
            for window in cultural_positions.windows(2) {
                let gap = window[1] - window[0];
                assert!(
                    gap.abs_diff(stride) <= 1,
                    "gap {gap} deviates from stride {stride} by more than 1"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn ordering_invariants_hold(
            spec in proptest::collection::vec((0u64..40, any::<bool>()), 0..120),
            head in 0usize..40,
        ) {
            let items: Vec<OrderItem<()>> = spec
                .iter()
                .enumerate()
                .map(|(i, (len, cultural))| item(&format!("id{i:03}"), *len, *cultural))
                .collect();
            let config = OrderingConfig {
                effective_batch_size: head.max(1),
                length_mode: LengthMode::WhitespaceTokens,
            };
            let placed = order(items.clone(), &config);
            check_ordering(&items, &placed, config.effective_batch_size);

            // Determinism: same input, same output.
            let again = order(items.clone(), &config);
            let first: Vec<&str> = placed.iter().map(|p| p.id.as_str()).collect();
            let second: Vec<&str> = again.iter().map(|p| p.id.as_str()).collect();
            prop_assert_eq!(first, second);
        }
    }
}
