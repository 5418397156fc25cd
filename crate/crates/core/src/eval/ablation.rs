use serde::{Deserialize, Serialize};

use super::sweep::{evaluate, reference_values};
use super::{EvalError, QuerySet, Reference, SweepOptions, SweepReport, SweepRow};
use crate::cost::CostParams;
use crate::geo::GridSpec;
use crate::index::GridIndex;
use crate::ingest::{coverage_subset, spatial_coverage, RoadNetwork, TrajectoryDb};

/// The trajectory subset used at one coverage level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageLevel {
    pub level: f64,
    pub trajectories: usize,
    pub traj_points: usize,
    /// Road coverage the subset actually reaches.
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub report: SweepReport,
    pub levels: Vec<CoverageLevel>,
}

/// Rebuilds the index from a coverage subset per level and runs the query
/// set on each. Reference values come from the full database.
#[allow(clippy::too_many_arguments)]
pub fn coverage_ablation(
    db: &TrajectoryDb,
    net: &RoadNetwork,
    spec: &GridSpec,
    levels: &[f64],
    qs: &QuerySet,
    params: &CostParams,
    reference: &Reference,
    opts: &SweepOptions,
) -> Result<CoverageReport, EvalError> {
    if levels.is_empty() {
        return Err(EvalError::EmptyValues);
    }
    params.validate()?;
    let subsets = levels
        .iter()
        .map(|&l| coverage_subset(db, net, spec, l))
        .collect::<Result<Vec<_>, _>>()?;

    let refs = match reference {
        Reference::None => None,
        _ => {
            let full = GridIndex::build(db.clone(), net.clone(), *spec)?;
            reference_values(&full, qs, params, reference, opts)?
        }
    };

    let mut rows = Vec::with_capacity(levels.len());
    let mut info = Vec::with_capacity(levels.len());
    for (&level, subset) in levels.iter().zip(subsets) {
        info.push(CoverageLevel {
            level,
            trajectories: subset.len(),
            traj_points: subset.point_count(),
            coverage: spatial_coverage(&subset, net, spec),
        });
        let idx = GridIndex::build(subset, net.clone(), *spec)?;
        let (aggregates, outcomes) = evaluate(&idx, qs, params, refs.as_ref(), opts)?;
        rows.push(SweepRow {
            param_value: level,
            aggregates,
            outcomes,
        });
    }
    Ok(CoverageReport {
        report: SweepReport {
            param: "coverage".into(),
            rows,
        },
        levels: info,
    })
}
