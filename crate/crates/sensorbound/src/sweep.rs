//! Parallel Monte Carlo driver.

use rayon::prelude::*;

use sensorbound_core::montecarlo::{run_layout, summarize, LayoutSource, SweepConfig, SweepOutput};

/// Same output as the sequential core driver, computed one layout per task.
pub fn run_sweep_parallel(
    config: &SweepConfig,
    source: &(dyn LayoutSource + Sync),
) -> sensorbound_core::Result<SweepOutput> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = config
        .node_counts
        .iter()
        .flat_map(|&n| (0..config.sampling_for(n).0).map(move |i| (n, i)))
        .collect();
    let per_layout = tasks
        .par_iter()
        .map(|&(n, i)| run_layout(config, source, n, i))
        .collect::<sensorbound_core::Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut redraws = 0;
    for trials in per_layout {
        redraws += trials.redraws;
        records.extend(trials.records);
    }
    if redraws > 0 {
        log::info!("{redraws} degenerate layout draws replaced");
    }
    let summary = summarize(&records)?;
    Ok(SweepOutput {
        records,
        summary,
        redraws,
    })
}
