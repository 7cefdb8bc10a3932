//! Grid sweep over (ff, fr, knowledge fraction) with max-min model selection.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::IngredientNetwork;
use crate::pipeline::{evaluate, EvalTarget, ModelReport, PipelineConfig};
use crate::recipes::CorpusSplit;
use crate::seed;

/// Sweep settings. A fixed value pins that axis to a single cell, which keeps
/// desk-scale runs tractable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub step: f64,
    pub repetitions: usize,
    pub trials: usize,
    pub seed: u64,
    pub fixed_ff: Option<f64>,
    pub fixed_fr: Option<f64>,
    pub fixed_knowledge: Option<f64>,
}

impl SweepParams {
    pub fn new(step: f64, repetitions: usize, trials: usize, seed: u64) -> Self {
        Self {
            step,
            repetitions,
            trials,
            seed,
            fixed_ff: None,
            fixed_fr: None,
            fixed_knowledge: None,
        }
    }
}

/// Multiples of `step` inside [0, 1]. Values are snapped to 9 decimals so
/// accumulated float error cannot push the top of the grid past 1.
pub fn grid_values(step: f64) -> Vec<f64> {
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let raw = f64::from(k) * step;
        let snapped = (raw * 1e9).round() / 1e9;
        if snapped > 1.0 {
            break;
        }
        values.push(snapped);
        k += 1;
    }
    values
}

/// Evaluate every grid cell on the validation sets and rank the reports:
/// maximize min(sensitivity, specificity), tie-break by their sum, then by
/// smaller ff, fr and knowledge fraction. Cells run in parallel; each derives
/// its RNG stream from its cell index, so the ranking is reproducible
/// regardless of thread count.
pub fn sweep(
    flavour: &IngredientNetwork,
    split_west: &CorpusSplit,
    split_east: &CorpusSplit,
    params: &SweepParams,
) -> Result<Vec<ModelReport>> {
    let axis = |fixed: Option<f64>| fixed.map_or_else(|| grid_values(params.step), |v| vec![v]);
    let ff_axis = axis(params.fixed_ff);
    let fr_axis = axis(params.fixed_fr);
    let knowledge_axis = axis(params.fixed_knowledge);

    let mut cells = Vec::new();
    for &ff in &ff_axis {
        for &fr in &fr_axis {
            for &knowledge in &knowledge_axis {
                cells.push((cells.len() as u64, ff, fr, knowledge));
            }
        }
    }

    let mut reports: Vec<ModelReport> = cells
        .into_par_iter()
        .map(|(index, ff, fr, knowledge_fraction)| {
            let config = PipelineConfig {
                ff,
                fr,
                knowledge_fraction,
                trials: params.trials,
                seed: seed::child_seed(params.seed, "sweep-cell", index),
                step: params.step,
            };
            evaluate(
                flavour,
                split_west,
                split_east,
                &config,
                params.repetitions,
                EvalTarget::Validation,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    reports.sort_by(|x, y| {
        y.min_score()
            .total_cmp(&x.min_score())
            .then((y.sensitivity + y.specificity).total_cmp(&(x.sensitivity + x.specificity)))
            .then(x.config.ff.total_cmp(&y.config.ff))
            .then(x.config.fr.total_cmp(&y.config.fr))
            .then(
                x.config
                    .knowledge_fraction
                    .total_cmp(&y.config.knowledge_fraction),
            )
    });
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_21_values_at_nominal_step() {
        let values = grid_values(0.05);
        assert_eq!(values.len(), 21);
        assert_eq!(values[0], 0.0);
        assert_eq!(values[3], 0.15);
        assert_eq!(*values.last().unwrap(), 1.0);
        assert_eq!(values.len().pow(3), 9261);
    }

    #[test]
    fn grid_at_step_one_is_binary() {
        assert_eq!(grid_values(1.0), vec![0.0, 1.0]);
    }

    #[test]
    fn grid_at_quarter_step_gives_125_cells() {
        let values = grid_values(0.25);
        assert_eq!(values.len(), 5);
        assert_eq!(values.len().pow(3), 125);
    }
}
