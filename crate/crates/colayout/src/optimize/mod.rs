//! Rearrangement solvers: adaptive simulated annealing, CMA-ES, and the
//! two-stage hierarchical driver. Stage one optimizes each functional group
//! as its own sub-scene; stage two freezes group interiors and moves groups
//! rigidly (plus singleton poses) against the full objective.

mod asa;
mod cma;
mod linalg;

pub use asa::{asa_minimize, AsaConfig, AsaSolution, AsaTrace, StopReason};
pub use cma::{cma_minimize, CmaConfig, CmaIter, CmaSolution, CmaTrace};

use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Point2, Pose2};
use crate::grouping::FunctionalGroups;
use crate::metrics::scene_metrics_applied;
use crate::num::{count, real, Real};
use crate::objective::{evaluate_applied, feasible, ObjectiveConfig, TaskSet};
use crate::relations::RelationStats;
use crate::scene::{apply_layout, Layout, Scene, FORMAT_VERSION};

/// Which solver drives each sub-problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Asa,
    Cma,
    /// ASA global phase, then CMA polish from the ASA best.
    AsaCma,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Asa => "asa",
            Strategy::Cma => "cma",
            Strategy::AsaCma => "asa+cma",
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "asa" => Ok(Strategy::Asa),
            "cma" => Ok(Strategy::Cma),
            "asa+cma" | "asa-cma" => Ok(Strategy::AsaCma),
            other => Err(Error::InvalidArgument(format!(
                "unknown strategy `{other}` (expected asa, cma, or asa+cma)"
            ))),
        }
    }
}

/// Driver options; the embedded solver configs act as templates whose seed
/// and budget are filled per sub-problem.
#[derive(Clone, Debug)]
pub struct SolverOptions<R> {
    pub strategy: Strategy,
    pub seed: u64,
    /// Evaluation budget per sub-problem (each stage-one group, and stage two).
    pub max_evals: usize,
    /// ASA share of the budget under the asa+cma strategy.
    pub budget_split: R,
    pub asa: AsaConfig<R>,
    pub cma: CmaConfig<R>,
    /// Snap final headings to multiples of this angle (radians), keeping the
    /// snapped layout only when it stays feasible.
    pub snap_theta: Option<R>,
}

impl<R: Real> Default for SolverOptions<R> {
    fn default() -> Self {
        Self {
            strategy: Strategy::AsaCma,
            seed: 0,
            max_evals: 6_000,
            budget_split: real(0.7),
            asa: AsaConfig::default(),
            cma: CmaConfig::default(),
            snap_theta: None,
        }
    }
}

fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Layout vector coding

enum Entry<R> {
    /// `(x, y, theta)` of one movable object.
    Pose { id: String },
    /// Rigid `(tx, ty, dtheta)` applied to frozen member poses about a pivot.
    Rigid {
        members: Vec<(String, Pose2<R>)>,
        pivot: Point2<R>,
    },
}

/// A flat real vector encoding of the decision variables, three per entry,
/// with box bounds. Decoding is bijective given the entry ordering (headings
/// are wrapped).
pub struct LayoutVector<R> {
    entries: Vec<Entry<R>>,
    bounds: Vec<(R, R)>,
    x0: Vec<R>,
}

impl<R: Real> LayoutVector<R> {
    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    pub fn bounds(&self) -> &[(R, R)] {
        &self.bounds
    }

    pub fn x0(&self) -> &[R] {
        &self.x0
    }

    /// Decode a candidate vector into poses, merged over `base` so objects
    /// outside the encoding keep their base poses.
    pub fn decode(&self, x: &[R], base: &Layout<R>) -> Layout<R> {
        debug_assert_eq!(x.len(), self.dim());
        let mut layout = base.clone();
        let mut k = 0;
        for entry in &self.entries {
            let (a, b, c) = (x[k], x[k + 1], x[k + 2]);
            k += 3;
            match entry {
                Entry::Pose { id } => {
                    layout.poses.insert(id.clone(), Pose2::new(a, b, wrap_angle(c)));
                }
                Entry::Rigid { members, pivot } => {
                    let (s, co) = c.sin_cos();
                    for (id, pose) in members {
                        let rel = pose.position() - *pivot;
                        let rot = Point2::new(co * rel.x - s * rel.y, s * rel.x + co * rel.y);
                        layout.poses.insert(
                            id.clone(),
                            Pose2::new(
                                pivot.x + rot.x + a,
                                pivot.y + rot.y + b,
                                pose.theta + c,
                            ),
                        );
                    }
                }
            }
        }
        layout
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, Serialize)]
pub struct StageReport<R> {
    pub name: String,
    pub solver: String,
    pub evals: usize,
    pub best_f: R,
    /// `(evaluations, best_f)` improvement curve.
    pub curve: Vec<(usize, R)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsSummary<R> {
    pub accessible_area: R,
    pub reachable_count: usize,
    pub human_term: R,
    pub robot_term: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub motion_cost: Option<R>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeReport<R> {
    pub format_version: u32,
    pub seed: u64,
    pub strategy: String,
    pub alpha: R,
    pub beta: R,
    pub gamma: R,
    pub collision_penalty: R,
    pub resolution: R,
    pub max_evals: usize,
    pub budget_split: R,
    pub snap_theta: Option<R>,
    pub stages: Vec<StageReport<R>>,
    pub input_total: R,
    pub final_total: R,
    /// False when no collision-free layout was found; the input layout is
    /// returned unchanged in that case.
    pub feasible: bool,
    pub snapped: bool,
    pub before: MetricsSummary<R>,
    pub after: MetricsSummary<R>,
}

impl<R: Real + Serialize> OptimizeReport<R> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Candidate tracking

struct Tracker<R> {
    best_feasible: Option<(Layout<R>, R)>,
    best_any: Option<(Layout<R>, R)>,
}

impl<R: Real> Tracker<R> {
    fn new() -> Self {
        Self {
            best_feasible: None,
            best_any: None,
        }
    }

    fn consider(&mut self, layout: &Layout<R>, total: R, is_feasible: bool) {
        if !total.is_finite() {
            return;
        }
        if self.best_any.as_ref().is_none_or(|(_, t)| total < *t) {
            self.best_any = Some((layout.clone(), total));
        }
        if is_feasible && self.best_feasible.as_ref().is_none_or(|(_, t)| total < *t) {
            self.best_feasible = Some((layout.clone(), total));
        }
    }
}

// ---------------------------------------------------------------------------
// Solver dispatch

fn run_strategy<R: Real>(
    strategy: Strategy,
    f: &mut impl FnMut(&[R]) -> R,
    coding: &LayoutVector<R>,
    options: &SolverOptions<R>,
    seed: u64,
    budget: usize,
    stage: &str,
    stages_out: &mut Vec<StageReport<R>>,
) -> Result<()> {
    match strategy {
        Strategy::Asa => {
            let config = AsaConfig {
                seed,
                ..options.asa.budgeted(budget, coding.dim())
            };
            let sol = asa_minimize(&mut *f, coding.x0(), coding.bounds(), &config)?;
            stages_out.push(StageReport {
                name: stage.to_string(),
                solver: "asa".into(),
                evals: sol.trace.evals,
                best_f: sol.f,
                curve: sol.trace.curve,
            });
        }
        Strategy::Cma => {
            let config = CmaConfig {
                seed,
                max_evals: budget,
                ..options.cma.clone()
            };
            let sol = cma_minimize(&mut *f, coding.x0(), &config)?;
            stages_out.push(StageReport {
                name: stage.to_string(),
                solver: "cma".into(),
                evals: sol.trace.evals,
                best_f: sol.f,
                curve: sol
                    .trace
                    .iterations
                    .iter()
                    .map(|it| (it.evals, it.best_f))
                    .collect(),
            });
        }
        Strategy::AsaCma => {
            let asa_budget =
                ((count::<R>(budget) * options.budget_split).floor().to_usize()).unwrap_or(budget / 2);
            let asa_budget = asa_budget.clamp(1, budget.saturating_sub(1).max(1));
            let asa_config = AsaConfig {
                seed,
                ..options.asa.budgeted(asa_budget, coding.dim())
            };
            let asa_sol = asa_minimize(&mut *f, coding.x0(), coding.bounds(), &asa_config)?;
            stages_out.push(StageReport {
                name: format!("{stage}/global"),
                solver: "asa".into(),
                evals: asa_sol.trace.evals,
                best_f: asa_sol.f,
                curve: asa_sol.trace.curve,
            });

            let remaining = budget.saturating_sub(asa_sol.trace.evals);
            if remaining > 0 {
                // Polish from the ASA best with a tighter initial step.
                let config = CmaConfig {
                    seed: derive_seed(seed, 0x00C3),
                    max_evals: remaining,
                    sigma0: options.cma.sigma0 * real(0.3),
                    ..options.cma.clone()
                };
                let sol = cma_minimize(&mut *f, &asa_sol.x, &config)?;
                stages_out.push(StageReport {
                    name: format!("{stage}/polish"),
                    solver: "cma".into(),
                    evals: sol.trace.evals,
                    best_f: sol.f,
                    curve: sol
                        .trace
                        .iterations
                        .iter()
                        .map(|it| (it.evals, it.best_f))
                        .collect(),
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Hierarchical driver

fn group_bbox<R: Real>(scene: &Scene<R>, members: &[String]) -> (Point2<R>, Point2<R>) {
    let mut lo = Point2::new(R::infinity(), R::infinity());
    let mut hi = Point2::new(R::neg_infinity(), R::neg_infinity());
    for id in members {
        if let Some(obj) = scene.object(id) {
            let (a, b) = obj.footprint.aabb();
            lo.x = lo.x.min(a.x);
            lo.y = lo.y.min(a.y);
            hi.x = hi.x.max(b.x);
            hi.y = hi.y.max(b.y);
        }
    }
    (lo, hi)
}

fn centroid<R: Real>(scene: &Scene<R>, members: &[String]) -> Point2<R> {
    let mut sum = Point2::new(R::zero(), R::zero());
    let mut n = 0usize;
    for id in members {
        if let Some(obj) = scene.object(id) {
            sum = sum + obj.footprint.center();
            n += 1;
        }
    }
    sum * (R::one() / count::<R>(n.max(1)))
}

/// Working region for a stage-one group: its bounding box inflated by one
/// meter, clamped to the room.
const STAGE1_INFLATION_M: f64 = 1.0;

fn stage1_coding<R: Real>(scene: &Scene<R>, members: &[String]) -> LayoutVector<R> {
    let (lo, hi) = group_bbox(scene, members);
    let margin = real::<R>(STAGE1_INFLATION_M);
    let x_lo = (lo.x - margin).max(R::zero());
    let x_hi = (hi.x + margin).min(scene.room.width);
    let y_lo = (lo.y - margin).max(R::zero());
    let y_hi = (hi.y + margin).min(scene.room.height);
    let pi = R::PI();

    let mut entries = Vec::new();
    let mut bounds = Vec::new();
    let mut x0 = Vec::new();
    for id in members {
        let obj = scene.object(id).expect("member exists");
        if !obj.movable {
            continue;
        }
        entries.push(Entry::Pose { id: id.clone() });
        let p = obj.footprint.pose;
        bounds.push((x_lo, x_hi));
        bounds.push((y_lo, y_hi));
        bounds.push((-pi, pi));
        x0.extend_from_slice(&[p.x, p.y, p.theta]);
    }
    LayoutVector { entries, bounds, x0 }
}

fn stage2_coding<R: Real>(
    scene: &Scene<R>,
    stage1: &Layout<R>,
    groups: &FunctionalGroups<R>,
) -> LayoutVector<R> {
    let applied = apply_layout(scene, stage1).expect("stage-one layout covers the scene");
    let pi = R::PI();
    let mut entries = Vec::new();
    let mut bounds = Vec::new();
    let mut x0 = Vec::new();

    for group in &groups.groups {
        let movable: Vec<&String> = group
            .iter()
            .filter(|id| applied.object(id).map(|o| o.movable) == Some(true))
            .collect();
        if movable.is_empty() {
            continue;
        }
        if group.len() == 1 {
            // Singletons keep their full pose free.
            let id = group[0].clone();
            let p = applied.object(&id).expect("object exists").footprint.pose;
            entries.push(Entry::Pose { id });
            bounds.push((R::zero(), scene.room.width));
            bounds.push((R::zero(), scene.room.height));
            bounds.push((-pi, pi));
            x0.extend_from_slice(&[p.x, p.y, p.theta]);
            continue;
        }
        if movable.len() != group.len() {
            // A pinned member makes the only rigid motion the identity;
            // the group keeps its stage-one poses.
            continue;
        }
        let members: Vec<(String, Pose2<R>)> = group
            .iter()
            .map(|id| {
                (
                    id.clone(),
                    applied.object(id).expect("object exists").footprint.pose,
                )
            })
            .collect();
        let pivot = centroid(&applied, group);
        let (lo, hi) = group_bbox(&applied, group);
        // Translation bounds keep the bbox inside the room and always include
        // the identity; rotation overflow is handled by the penalty.
        let tx_lo = (-lo.x).min(R::zero());
        let tx_hi = (scene.room.width - hi.x).max(R::zero());
        let ty_lo = (-lo.y).min(R::zero());
        let ty_hi = (scene.room.height - hi.y).max(R::zero());
        entries.push(Entry::Rigid { members, pivot });
        bounds.push((tx_lo, tx_hi));
        bounds.push((ty_lo, ty_hi));
        bounds.push((-pi, pi));
        x0.extend_from_slice(&[R::zero(), R::zero(), R::zero()]);
    }
    LayoutVector { entries, bounds, x0 }
}

fn metrics_summary<R: Real>(
    applied: &Scene<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<MetricsSummary<R>> {
    let m = scene_metrics_applied(applied, groups, stats, config, tasks)?;
    Ok(MetricsSummary {
        accessible_area: m.accessible_area,
        reachable_count: m.reachable_ids.len(),
        human_term: m.human_term,
        robot_term: m.robot_term,
        motion_cost: m.motion_cost,
    })
}

/// Snap every heading in `layout` to the nearest multiple of `step`.
fn snap_headings<R: Real>(layout: &Layout<R>, step: R) -> Layout<R> {
    let mut out = layout.clone();
    for pose in out.poses.values_mut() {
        let snapped = (pose.theta / step).round() * step;
        *pose = Pose2::new(pose.x, pose.y, snapped);
    }
    out
}

/// Hierarchically rearrange the scene's movable objects.
///
/// Stage one optimizes each multi-member functional group as a sub-scene
/// containing only its members, inside the group's inflated working region.
/// Stage two freezes group interiors and optimizes one rigid transform per
/// all-movable group plus each singleton's pose against the full objective.
/// The best collision-free layout ever evaluated wins; if none exists the
/// input layout is returned with `feasible = false` in the report.
pub fn optimize_scene<R: Real + Serialize>(
    scene: &Scene<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
    options: &SolverOptions<R>,
) -> Result<(Layout<R>, OptimizeReport<R>)> {
    config.validate()?;
    let input_layout = scene.layout();
    let input_applied = apply_layout(scene, &input_layout)?;
    let input_eval = evaluate_applied(&input_applied, groups, stats, config, tasks)?;

    let mut tracker = Tracker::new();
    tracker.consider(&input_layout, input_eval.total, feasible(&input_applied));
    let mut stages: Vec<StageReport<R>> = Vec::new();

    // Stage one: each functional group with at least two members and a
    // movable member becomes an independent sub-problem over its own
    // sub-scene.
    let mut stage1_layout = input_layout.clone();
    for (gi, group) in groups.groups.iter().enumerate() {
        if group.len() < 2 {
            continue;
        }
        let member_set: BTreeSet<&str> = group.iter().map(String::as_str).collect();
        let mut sub_scene = scene.clone();
        sub_scene
            .objects
            .retain(|o| member_set.contains(o.id.as_str()));
        if !sub_scene.objects.iter().any(|o| o.movable) {
            continue;
        }
        let coding = stage1_coding(&sub_scene, group);
        if coding.dim() == 0 {
            continue;
        }
        let base = sub_scene.layout();
        let seed = derive_seed(options.seed, 0x1000 + gi as u64);
        let stage_name = format!("stage1:{}", group.join("+"));

        let objective = |x: &[R]| -> R {
            let candidate = coding.decode(x, &base);
            match apply_layout(&sub_scene, &candidate) {
                Ok(applied) => match evaluate_applied(&applied, groups, stats, config, None) {
                    Ok(ev) => ev.total,
                    Err(_) => R::infinity(),
                },
                Err(_) => R::infinity(),
            }
        };
        // Feed the solver; its best vector becomes the group's frozen layout.
        let mut best_x: Option<(Vec<R>, R)> = None;
        {
            let mut tracked = |x: &[R]| -> R {
                let v = objective(x);
                if v.is_finite() && best_x.as_ref().is_none_or(|(_, b)| v < *b) {
                    best_x = Some((x.to_vec(), v));
                }
                v
            };
            run_strategy(
                options.strategy,
                &mut tracked,
                &coding,
                options,
                seed,
                options.max_evals,
                &stage_name,
                &mut stages,
            )?;
        }
        if let Some((x, _)) = best_x {
            let group_layout = coding.decode(&x, &base);
            for (id, pose) in group_layout.poses {
                stage1_layout.poses.insert(id, pose);
            }
        }
    }

    // Stage two: rigid transforms per group plus singleton poses, full scene.
    let coding = stage2_coding(scene, &stage1_layout, groups);
    if coding.dim() > 0 {
        let base = stage1_layout.clone();
        let seed = derive_seed(options.seed, 0x2000);
        let mut objective = |x: &[R]| -> R {
            let candidate = coding.decode(x, &base);
            match apply_layout(scene, &candidate) {
                Ok(applied) => match evaluate_applied(&applied, groups, stats, config, tasks) {
                    Ok(ev) => {
                        tracker.consider(&candidate, ev.total, feasible(&applied));
                        ev.total
                    }
                    Err(_) => R::infinity(),
                },
                Err(_) => R::infinity(),
            }
        };
        run_strategy(
            options.strategy,
            &mut objective,
            &coding,
            options,
            seed,
            options.max_evals,
            "stage2",
            &mut stages,
        )?;
    }

    // Optional heading snap, kept only when it stays collision-free.
    let mut snapped = false;
    if let (Some(step), Some((layout, _))) = (options.snap_theta, tracker.best_feasible.clone()) {
        if step > R::zero() {
            let candidate = snap_headings(&layout, step);
            let applied = apply_layout(scene, &candidate)?;
            if feasible(&applied) {
                let ev = evaluate_applied(&applied, groups, stats, config, tasks)?;
                tracker.best_feasible = Some((candidate, ev.total));
                snapped = true;
            }
        }
    }

    let (final_layout, final_total, is_feasible) = match &tracker.best_feasible {
        Some((layout, total)) => (layout.clone(), *total, true),
        None => (input_layout.clone(), input_eval.total, false),
    };

    let final_applied = apply_layout(scene, &final_layout)?;
    let report = OptimizeReport {
        format_version: FORMAT_VERSION,
        seed: options.seed,
        strategy: options.strategy.as_str().to_string(),
        alpha: config.alpha,
        beta: config.beta,
        gamma: config.gamma,
        collision_penalty: config.collision_penalty,
        resolution: config.resolution,
        max_evals: options.max_evals,
        budget_split: options.budget_split,
        snap_theta: options.snap_theta,
        stages,
        input_total: input_eval.total,
        final_total,
        feasible: is_feasible,
        snapped,
        before: metrics_summary(&input_applied, groups, stats, config, tasks)?,
        after: metrics_summary(&final_applied, groups, stats, config, tasks)?,
    };
    Ok((final_layout, report))
}
