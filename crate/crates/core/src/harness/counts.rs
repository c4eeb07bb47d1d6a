use std::io::Write;
use std::time::Instant;

use super::{filter_label, HarnessError};
use crate::dg::ModalField2D;
use crate::filtering::{FilterConfig, OpCounters};
use crate::splines::Point2;

const TIMING_RUNS: usize = 5;
/// Each timing run repeats the filter until at least this long has passed.
const MIN_BATCH_SECONDS: f64 = 0.02;

/// Work and wall time to post-process one point with one filter.
#[derive(Debug, Clone, PartialEq)]
pub struct CostRow {
    pub config: FilterConfig,
    pub k: usize,
    pub counters: OpCounters,
    /// Median over 5 runs of the mean time per application.
    pub seconds: f64,
}

/// Counters from the region decomposition plus median-of-5 timing. Each run
/// times a batch of repetitions sized from a calibration pass so that short
/// filters still give stable figures.
pub fn run_counts_timing(field: &ModalField2D, point: Point2, filters: &[FilterConfig]) -> Result<Vec<CostRow>, HarnessError> {
    let mut rows = Vec::with_capacity(filters.len());
    for config in filters {
        let pf = config.build(field)?;
        let (_, counters) = pf.apply(field, point)?;
        let start = Instant::now();
        let mut reps = 0usize;
        while start.elapsed().as_secs_f64() < MIN_BATCH_SECONDS {
            std::hint::black_box(pf.apply(field, point)?);
            reps += 1;
        }
        let mut runs = Vec::with_capacity(TIMING_RUNS);
        for _ in 0..TIMING_RUNS {
            let t = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(pf.apply(std::hint::black_box(field), point)?);
            }
            runs.push(t.elapsed().as_secs_f64() / reps as f64);
        }
        runs.sort_by(f64::total_cmp);
        rows.push(CostRow {
            config: *config,
            k: config.degree.unwrap_or(field.degree()),
            counters,
            seconds: runs[TIMING_RUNS / 2],
        });
    }
    Ok(rows)
}

/// Columns `filter,k,intersection_scans,integrals,quadrature_evals,seconds`.
pub fn write_cost_csv<W: Write>(rows: &[CostRow], mut out: W) -> Result<(), HarnessError> {
    writeln!(out, "filter,k,intersection_scans,integrals,quadrature_evals,seconds")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.6e}",
            filter_label(&r.config),
            r.k,
            r.counters.intersection_scans,
            r.counters.integrals,
            r.counters.quadrature_evals,
            r.seconds
        )?;
    }
    out.flush()?;
    Ok(())
}
