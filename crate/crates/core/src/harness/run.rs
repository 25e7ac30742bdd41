//! Executing a plan cell by cell.

use std::collections::HashSet;
use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use super::plan::{Cell, Estimator, ExperimentPlan};
use super::records::{write_csv, RecordWriter, RunRecord};
use crate::error::Result;
use crate::simulate::{self, Estimate, McConfig, SeedPlan, StableParams};

#[derive(Debug, Clone)]
pub struct RunSummary {
    /// Every record in the file, in plan order.
    pub records: Vec<RunRecord>,
    pub computed: usize,
    pub skipped: usize,
    pub failed: usize,
}

fn evaluate(plan: &ExperimentPlan, cell: &Cell) -> Result<Estimate> {
    let params = StableParams::new(cell.alpha, plan.domain.dim())?;
    let cfg = McConfig {
        seeds: SeedPlan::new(cell.seed),
        ..plan.mc.clone()
    };
    match cell.estimator {
        Estimator::Shc => simulate::shc(&plan.domain, params, cell.t, &cfg),
        Estimator::Rhc => simulate::rhc(&plan.domain, params, cell.t, &cfg),
        Estimator::Skbm => simulate::skbm_shc(&plan.domain, params, cell.t, &cfg),
        Estimator::Defect => simulate::interaction_defect(&plan.domain, params, cell.t, &cfg),
    }
}

/// Runs every cell of `plan` not already present in its output file.
///
/// Cells run one after another, each parallel inside, so the record file is
/// written in plan order and a resumed run ends with the same bytes as an
/// uninterrupted one. A failing cell is recorded with its error and the run
/// goes on. The CSV projection is rewritten at the end.
pub fn run_plan(plan: &ExperimentPlan, progress: &mut dyn FnMut(&Cell, &RunRecord)) -> Result<RunSummary> {
    plan.validate()?;
    let volume = plan.domain.volume()?;
    let (mut writer, existing) = RecordWriter::open(&plan.output)?;
    let done: HashSet<String> = existing.iter().map(|r| r.cell.clone()).collect();
    let mut records = existing;
    let (mut computed, mut skipped, mut failed) = (0, 0, 0);
    for cell in plan.cells() {
        if done.contains(&cell.digest) {
            skipped += 1;
            continue;
        }
        let start = Instant::now();
        let result = evaluate(plan, &cell);
        let wall = start.elapsed().as_secs_f64();
        let (estimate, error) = match result {
            Ok(e) => (Some(e), None),
            Err(e) => {
                failed += 1;
                (None, Some(format!("{}: {e}", e.name())))
            }
        };
        let record = RunRecord {
            cell: cell.digest.clone(),
            domain: plan.domain.id(),
            alpha: cell.alpha,
            t: cell.t,
            estimator: cell.estimator,
            volume,
            seed: cell.seed,
            estimate,
            error,
        };
        writer.append(&record, wall)?;
        progress(&cell, &record);
        records.push(record);
        computed += 1;
    }
    let order: Vec<String> = plan.cells().into_iter().map(|c| c.digest).collect();
    records.sort_by_key(|r| order.iter().position(|d| *d == r.cell).unwrap_or(usize::MAX));
    write_csv(&records, BufWriter::new(File::create(plan.output.with_extension("csv"))?))?;
    Ok(RunSummary {
        records,
        computed,
        skipped,
        failed,
    })
}
