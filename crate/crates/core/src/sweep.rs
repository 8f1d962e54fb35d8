//! Runs a scenario over a grid of MME budgets.

use rayon::prelude::*;

use crate::error::Result;
use crate::protocol::{self, EngineConfig, RunReport};
use crate::scenario::{Scenario, SweepSpec};

/// The run of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub total_rate: f64,
    pub report: RunReport,
}

/// Runs `scenario` at every value of `grid`, giving each domain that budget.
///
/// Points are computed in parallel but returned in grid order, so the output
/// does not depend on the thread count.
pub fn sweep(scenario: &Scenario, cfg: &EngineConfig, grid: &SweepSpec) -> Result<Vec<SweepPoint>> {
    grid.validate()?;
    cfg.validate()?;
    scenario.validate()?;
    grid.values()
        .into_par_iter()
        .map(|total_rate| {
            let report = protocol::run(&scenario.with_total_rate(total_rate), cfg)?;
            Ok(SweepPoint { total_rate, report })
        })
        .collect()
}

/// Reports of `points`, for passing to the CSV writers.
pub fn reports(points: &[SweepPoint]) -> impl Iterator<Item = &RunReport> {
    points.iter().map(|p| &p.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin_table1;

    #[test]
    fn points_follow_grid_order() {
        let grid = SweepSpec { start: 100.0, end: 400.0, step: 150.0 };
        let points = sweep(&builtin_table1(), &EngineConfig::default(), &grid).unwrap();
        let rates: Vec<f64> = points.iter().map(|p| p.total_rate).collect();
        assert_eq!(rates, vec![100.0, 250.0, 400.0]);
        for p in &points {
            assert!(p.report.domains.iter().all(|d| d.total_rate == p.total_rate));
        }
    }
}
