//! Sweep-grid generation: one training attempt per (model, domain-data
//! flag, Hindi ratio) cell.

use serde::{Deserialize, Serialize};

/// One planned fine-tuning attempt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: String,
    pub include_domain_data: bool,
    /// Hindi percentage of the training mix.
    pub hindi_ratio: u8,
    /// Fraction of the full corpus used for the attempt.
    pub data_fraction: f64,
}

/// The standard ratio axis: 10% to 100% in steps of 10.
pub fn default_ratios() -> Vec<u8> {
    (1..=10).map(|step| step * 10).collect()
}

/// Cartesian product in deterministic (model, flag, ratio) order.
pub fn sweep_grid(
    models: &[String],
    ratios: &[u8],
    domain_flags: &[bool],
    data_fraction: f64,
) -> Vec<SweepConfig> {
    let mut grid = Vec::with_capacity(models.len() * domain_flags.len() * ratios.len());
    for model in models {
        for &include_domain_data in domain_flags {
            for &hindi_ratio in ratios {
                grid.push(SweepConfig {
                    model: model.clone(),
                    include_domain_data,
                    hindi_ratio,
                    data_fraction,
                });
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_model_yields_twenty_configs() {
        let grid = sweep_grid(
            &["qwen14b".to_string()],
            &default_ratios(),
            &[false, true],
            0.08,
        );
        assert_eq!(grid.len(), 20);
        // No-domain block first, ratios ascending within each block.
        assert!(!grid[0].include_domain_data);
        assert_eq!(grid[0].hindi_ratio, 10);
        assert_eq!(grid[9].hindi_ratio, 100);
        assert!(grid[10].include_domain_data);
        assert_eq!(grid[19].hindi_ratio, 100);
    }

    #[test]
    fn seven_models_yield_one_forty() {
        let models: Vec<String> = (0..7).map(|i| format!("model{i}")).collect();
        let grid = sweep_grid(&models, &default_ratios(), &[false, true], 0.08);
        assert_eq!(grid.len(), 140);
    }

    #[test]
    fn empty_ratio_list_yields_empty_grid() {
        let grid = sweep_grid(&["m".to_string()], &[], &[false, true], 0.08);
        assert!(grid.is_empty());
    }
}
