//! Movement costs and the search heuristic.
//!
//! Every transition has a *base* cost (physical travel time, summed into the
//! ETA) and a *search* cost (base cost after the road penalty and continuity
//! reward, used to order the search).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{haversine_m, GeoPoint};
use crate::index::{GridIndex, PointRef, SourceKind};

/// 70 mph.
pub const DEFAULT_V_MAX_MPS: f64 = 31.29;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    /// Fixed charge for switching between trajectories or segments (s).
    pub tau_c: f64,
    /// Road legs cost `(1 + r_penalty)` times their travel time in search.
    pub r_penalty: f64,
    /// Continuation legs along one trajectory are scaled by `exp(-rw)`.
    pub rw: f64,
    /// Half-width of the departure time window (s).
    pub w_time: f64,
    /// The search stops at the first point closer than this to the
    /// destination (m).
    pub d_thres: f64,
    /// Speed bound used by the heuristic (m/s).
    pub v_max: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            tau_c: 0.0,
            r_penalty: 0.0,
            rw: 0.0,
            w_time: 1_800.0,
            d_thres: 100.0,
            v_max: DEFAULT_V_MAX_MPS,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), CostError> {
        let fields = [
            ("tau_c", self.tau_c),
            ("r_penalty", self.r_penalty),
            ("rw", self.rw),
            ("w_time", self.w_time),
            ("d_thres", self.d_thres),
            ("v_max", self.v_max),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v < 0.0 {
                return Err(CostError::InvalidParam {
                    name,
                    reason: format!("must be finite and non-negative, got {v}"),
                });
            }
        }
        if self.v_max <= 0.0 {
            return Err(CostError::InvalidParam {
                name: "v_max",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }

    /// Sets a parameter by its config/CLI name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), CostError> {
        match name {
            "tau_c" => self.tau_c = value,
            "r_penalty" => self.r_penalty = value,
            "rw" => self.rw = value,
            "w_time" => self.w_time = value,
            "d_thres" => self.d_thres = value,
            "v_max" => self.v_max = value,
            _ => {
                return Err(CostError::InvalidParam {
                    name: "name",
                    reason: format!("unknown parameter {name}"),
                })
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransitionKind {
    /// From the query origin onto an indexed point in the origin cell, for a
    /// flat `tau_c`.
    Board,
    TrajContinue,
    TrajSwitch,
    RoadContinue,
    RoadSwitch,
    CrossToRoad,
    CrossToTraj,
}

impl TransitionKind {
    pub fn is_switch(self) -> bool {
        matches!(
            self,
            Self::TrajSwitch | Self::RoadSwitch | Self::CrossToRoad | Self::CrossToTraj
        )
    }

    pub fn is_continue(self) -> bool {
        matches!(self, Self::TrajContinue | Self::RoadContinue)
    }

    /// Kind of a non-boarding move between two points, judged from their
    /// sources and adjacency.
    pub fn classify(from: PointRef, to: PointRef) -> Self {
        let continues = from.same_item(&to) && to.point == from.point + 1;
        match (from.kind, to.kind, continues) {
            (SourceKind::Trajectory, SourceKind::Trajectory, true) => Self::TrajContinue,
            (SourceKind::Road, SourceKind::Road, true) => Self::RoadContinue,
            (SourceKind::Trajectory, SourceKind::Trajectory, false) => Self::TrajSwitch,
            (SourceKind::Road, SourceKind::Road, false) => Self::RoadSwitch,
            (SourceKind::Trajectory, SourceKind::Road, _) => Self::CrossToRoad,
            (SourceKind::Road, SourceKind::Trajectory, _) => Self::CrossToTraj,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transition {
    /// `None` only for [`TransitionKind::Board`].
    pub from: Option<PointRef>,
    pub to: PointRef,
    pub kind: TransitionKind,
}

impl Transition {
    pub fn board(to: PointRef) -> Self {
        Self {
            from: None,
            to,
            kind: TransitionKind::Board,
        }
    }

    pub fn between(from: PointRef, to: PointRef) -> Self {
        Self {
            from: Some(from),
            to,
            kind: TransitionKind::classify(from, to),
        }
    }

    /// The physical leg this transition pays for: `from -> to` when
    /// continuing, `predecessor(to) -> to` when switching.
    pub fn charged_leg(&self) -> Option<(PointRef, PointRef)> {
        match self.kind {
            TransitionKind::Board => None,
            k if k.is_continue() => self.from.map(|f| (f, self.to)),
            _ => (self.to.point > 0).then(|| (self.to.with_point(self.to.point - 1), self.to)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostPair {
    /// Physical travel time (s).
    pub base_s: f64,
    /// Penalty/reward-adjusted cost (s).
    pub search_s: f64,
}

fn invalid(msg: impl Into<String>) -> CostError {
    CostError::InvalidTransition(msg.into())
}

/// Trajectory leg cost: the timestamp gap of the leg, plus `tau_c` when the
/// leg starts by switching items.
pub fn cost_traj(kind: TransitionKind, leg_start_ts: i64, leg_end_ts: i64, params: &CostParams) -> Result<f64, CostError> {
    let dt = (leg_end_ts - leg_start_ts).abs() as f64;
    match kind {
        TransitionKind::TrajContinue => Ok(dt),
        TransitionKind::TrajSwitch | TransitionKind::CrossToTraj => Ok(params.tau_c + dt),
        other => Err(invalid(format!("{other:?} does not end on a trajectory"))),
    }
}

/// Road leg cost: haversine length over the segment speed, plus `tau_c` when
/// the leg starts by switching items.
pub fn cost_road(
    kind: TransitionKind,
    leg_start: GeoPoint,
    leg_end: GeoPoint,
    speed_mps: f64,
    params: &CostParams,
) -> Result<f64, CostError> {
    if speed_mps.is_nan() || speed_mps <= 0.0 {
        return Err(invalid(format!("road speed must be positive, got {speed_mps}")));
    }
    let t = haversine_m(leg_start, leg_end) / speed_mps;
    match kind {
        TransitionKind::RoadContinue => Ok(t),
        TransitionKind::RoadSwitch | TransitionKind::CrossToRoad => Ok(params.tau_c + t),
        other => Err(invalid(format!("{other:?} does not end on a road"))),
    }
}

/// Applies the road penalty and continuity reward to a base cost.
pub fn adjust(kind: TransitionKind, to: SourceKind, base_s: f64, params: &CostParams) -> f64 {
    let mut c = base_s;
    if to == SourceKind::Road {
        c *= 1.0 + params.r_penalty;
    }
    if kind == TransitionKind::TrajContinue {
        c *= (-params.rw).exp();
    }
    c
}

fn check_structure(idx: &GridIndex, t: &Transition) -> Result<(), CostError> {
    idx.resolve(t.to).map_err(|e| invalid(e.to_string()))?;
    if let Some(from) = t.from {
        idx.resolve(from).map_err(|e| invalid(e.to_string()))?;
    }
    use SourceKind::{Road, Trajectory};
    use TransitionKind::*;
    let (from_kind, to_kind) = match (t.kind, t.from) {
        (Board, None) => return Ok(()),
        (Board, Some(_)) => return Err(invalid("boarding starts at the query origin")),
        (_, None) => return Err(invalid(format!("{:?} needs a source point", t.kind))),
        (_, Some(from)) => (from.kind, t.to.kind),
    };
    let from = t.from.expect("checked above");
    let expected = match t.kind {
        TrajContinue | TrajSwitch => (Trajectory, Trajectory),
        RoadContinue | RoadSwitch => (Road, Road),
        CrossToRoad => (Trajectory, Road),
        CrossToTraj => (Road, Trajectory),
        Board => unreachable!(),
    };
    if (from_kind, to_kind) != expected {
        return Err(invalid(format!(
            "{:?} cannot go from {from_kind:?} to {to_kind:?}",
            t.kind
        )));
    }
    if t.kind.is_continue() {
        if !(from.same_item(&t.to) && t.to.point == from.point + 1) {
            return Err(invalid("continuation must go to the next point of the same item"));
        }
    } else {
        if from.same_item(&t.to) {
            return Err(invalid("switch must change item"));
        }
        if t.to.point == 0 {
            return Err(invalid("switch target needs a predecessor"));
        }
    }
    Ok(())
}

/// Base and search cost of a transition.
pub fn cost_final(idx: &GridIndex, t: &Transition, params: &CostParams) -> Result<CostPair, CostError> {
    check_structure(idx, t)?;
    transition_cost(idx, t, params)
}

/// [`cost_final`] without the structural checks, for transitions produced by
/// the neighbor generator.
pub(crate) fn transition_cost(idx: &GridIndex, t: &Transition, params: &CostParams) -> Result<CostPair, CostError> {
    let Some((start, end)) = t.charged_leg() else {
        return Ok(CostPair {
            base_s: params.tau_c,
            search_s: params.tau_c,
        });
    };
    let base_s = match end.kind {
        SourceKind::Trajectory => {
            let traj = &idx.trajectories().trajectories[end.item as usize];
            cost_traj(
                t.kind,
                traj.points[start.point as usize].ts,
                traj.points[end.point as usize].ts,
                params,
            )?
        }
        SourceKind::Road => {
            let seg = &idx.roads().segments[end.item as usize];
            cost_road(
                t.kind,
                seg.points[start.point as usize],
                seg.points[end.point as usize],
                seg.speed_mps,
                params,
            )?
        }
    };
    Ok(CostPair {
        base_s,
        search_s: adjust(t.kind, end.kind, base_s, params),
    })
}

/// Straight-line travel time to the destination at `v_max`.
pub fn heuristic(p: GeoPoint, dest: GeoPoint, params: &CostParams) -> f64 {
    haversine_m(p, dest) / params.v_max
}
