//! Evaluation criteria: accessible area, reachable-object count, the human
//! and robot terms, and before/after comparison reports.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{accessible_region, free_space, interaction_value, interaction_window, scene_sdf};
use crate::grouping::FunctionalGroups;
use crate::num::Real;
use crate::objective::{
    human_term_applied, motion_cost_applied, robot_term_applied, ObjectiveConfig, TaskSet,
};
use crate::relations::RelationStats;
use crate::scene::{apply_layout, Layout, Scene};

/// The headline numbers for one layout of a scene.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneMetrics<R> {
    /// Accessible-region cell count times cell area, square meters.
    pub accessible_area: R,
    pub reachable_ids: BTreeSet<String>,
    pub robot_term: R,
    pub human_term: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub motion_cost: Option<R>,
    /// True when the robot cannot be placed anywhere.
    pub no_access: bool,
}

pub(crate) fn reachable_objects_applied<R: Real>(
    scene: &Scene<R>,
    config: &ObjectiveConfig<R>,
) -> Result<BTreeSet<String>> {
    let sdf = scene_sdf(scene, config.resolution)?;
    let free = free_space(&sdf, scene.robot.r_b);
    let region = match accessible_region(&free, scene.robot.seed_hint) {
        Ok(r) => r,
        Err(Error::NoFreeSpace) => return Ok(BTreeSet::new()),
        Err(e) => return Err(e),
    };
    let mut out = BTreeSet::new();
    for obj in &scene.objects {
        let (x0, y0, x1, y1) = interaction_window(obj, scene.robot.d_max, &free);
        'cells: for iy in y0..=y1 {
            for ix in x0..=x1 {
                if region.contains(ix, iy)
                    && interaction_value(obj, scene.robot.d_max, region.cell_center(ix, iy))
                        > R::zero()
                {
                    out.insert(obj.id.clone());
                    break 'cells;
                }
            }
        }
    }
    Ok(out)
}

/// Ids of objects with an interactive face approachable from the accessible
/// region: some accessible cell within arm reach has a positive interaction
/// value.
pub fn reachable_objects<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    config: &ObjectiveConfig<R>,
) -> Result<BTreeSet<String>> {
    let applied = apply_layout(scene, layout)?;
    reachable_objects_applied(&applied, config)
}

pub(crate) fn scene_metrics_applied<R: Real>(
    applied: &Scene<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<SceneMetrics<R>> {
    let sdf = scene_sdf(applied, config.resolution)?;
    let free = free_space(&sdf, applied.robot.r_b);
    let accessible_area = match accessible_region(&free, applied.robot.seed_hint) {
        Ok(region) => region.area(),
        Err(Error::NoFreeSpace) => R::zero(),
        Err(e) => return Err(e),
    };
    let robot = robot_term_applied(applied, config)?;
    let (human, _) = human_term_applied(applied, groups, stats);
    let motion_cost = match tasks {
        Some(t) => Some(motion_cost_applied(applied, t, config)?),
        None => None,
    };
    Ok(SceneMetrics {
        accessible_area,
        reachable_ids: reachable_objects_applied(applied, config)?,
        robot_term: robot.total,
        human_term: human,
        motion_cost,
        no_access: robot.no_access,
    })
}

/// All metrics for one candidate layout.
pub fn scene_metrics<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<SceneMetrics<R>> {
    let applied = apply_layout(scene, layout)?;
    scene_metrics_applied(&applied, groups, stats, config, tasks)
}

/// A percentage change; the before-value-was-zero case is a distinguished
/// token rather than a number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PctDelta<R> {
    Finite(R),
    Infinite(&'static str),
}

pub(crate) fn pct_delta<R: Real>(before: R, after: R) -> PctDelta<R> {
    if before == R::zero() {
        if after == R::zero() {
            PctDelta::Finite(R::zero())
        } else {
            PctDelta::Infinite("∞")
        }
    } else {
        PctDelta::Finite((after - before) / before.abs() * crate::num::real(100.0))
    }
}

impl<R: Real> std::fmt::Display for PctDelta<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PctDelta::Finite(v) => write!(f, "{v:+.2}%"),
            PctDelta::Infinite(s) => write!(f, "{s}"),
        }
    }
}

/// Before/after deltas for one scene.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport<R> {
    pub before: SceneMetrics<R>,
    pub after: SceneMetrics<R>,
    pub accessible_area_pct: PctDelta<R>,
    pub reachable_count_pct: PctDelta<R>,
    pub robot_term_delta: R,
    pub human_term_delta: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub motion_cost_delta: Option<R>,
}

/// Compare two layouts of the same scene. Functional groups are taken from
/// the caller (normally mined from the before layout) so the human terms are
/// directly comparable.
pub fn compare<R: Real>(
    scene: &Scene<R>,
    layout_before: &Layout<R>,
    layout_after: &Layout<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<DeltaReport<R>> {
    let before = scene_metrics(scene, layout_before, groups, stats, config, tasks)?;
    let after = scene_metrics(scene, layout_after, groups, stats, config, tasks)?;
    Ok(DeltaReport {
        accessible_area_pct: pct_delta(before.accessible_area, after.accessible_area),
        reachable_count_pct: pct_delta(
            crate::num::count(before.reachable_ids.len()),
            crate::num::count(after.reachable_ids.len()),
        ),
        robot_term_delta: after.robot_term - before.robot_term,
        human_term_delta: after.human_term - before.human_term,
        motion_cost_delta: match (before.motion_cost, after.motion_cost) {
            (Some(b), Some(a)) => Some(a - b),
            _ => None,
        },
        before,
        after,
    })
}

impl<R: Real> std::fmt::Display for DeltaReport<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "metric              before        after         delta")?;
        writeln!(
            f,
            "accessible area     {:<13.4} {:<13.4} {}",
            self.before.accessible_area, self.after.accessible_area, self.accessible_area_pct
        )?;
        writeln!(
            f,
            "reachable objects   {:<13} {:<13} {}",
            self.before.reachable_ids.len(),
            self.after.reachable_ids.len(),
            self.reachable_count_pct
        )?;
        writeln!(
            f,
            "robot term          {:<13.4} {:<13.4} {:+.4}",
            self.before.robot_term, self.after.robot_term, self.robot_term_delta
        )?;
        write!(
            f,
            "human term          {:<13.4} {:<13.4} {:+.4}",
            self.before.human_term, self.after.human_term, self.human_term_delta
        )?;
        if let (Some(b), Some(a), Some(d)) = (
            self.before.motion_cost,
            self.after.motion_cost,
            self.motion_cost_delta,
        ) {
            write!(f, "\nmotion cost         {b:<13.4} {a:<13.4} {d:+.4}")?;
        }
        Ok(())
    }
}
