//! The layout objective: human term (functional-edge distance quality),
//! robot term (interaction and open-space integral over the accessible
//! region), optional task motion cost, and the collision penalty.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    accessible_region, free_space, interaction_value, interaction_window, scene_sdf,
};
use crate::geometry::{rect_separation, room_protrusion, Point2};
use crate::grouping::FunctionalGroups;
use crate::num::{real, Real};
use crate::relations::RelationStats;
use crate::scene::{apply_layout, check_version, default_version, Layout, Scene, FORMAT_VERSION};

/// Weights and discretization for the combined objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveConfig<R> {
    /// Open-space weight inside the robot term.
    pub alpha: R,
    /// Robot-term weight in the total.
    pub beta: R,
    /// Motion-cost weight; zero disables the term.
    pub gamma: R,
    /// Penalty per meter of penetration depth.
    pub collision_penalty: R,
    /// Analysis grid resolution, meters per cell.
    pub resolution: R,
}

impl<R: Real> Default for ObjectiveConfig<R> {
    fn default() -> Self {
        Self {
            alpha: real(0.1),
            beta: real(1.0),
            gamma: real(0.0),
            collision_penalty: real(10.0),
            resolution: real(0.05),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    #[serde(default = "d_alpha")]
    alpha: f64,
    #[serde(default = "d_beta")]
    beta: f64,
    #[serde(default)]
    gamma: f64,
    #[serde(default = "d_penalty")]
    collision_penalty: f64,
    #[serde(default = "d_resolution")]
    resolution: f64,
}

fn d_alpha() -> f64 {
    0.1
}
fn d_beta() -> f64 {
    1.0
}
fn d_penalty() -> f64 {
    10.0
}
fn d_resolution() -> f64 {
    0.05
}

impl<R: Real> ObjectiveConfig<R> {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Validation(format!("objective config: {what}")));
        if !(self.alpha.is_finite() && self.alpha >= R::zero()) {
            return bad("alpha must be finite and non-negative");
        }
        if !(self.beta.is_finite() && self.beta >= R::zero()) {
            return bad("beta must be finite and non-negative");
        }
        if !(self.gamma.is_finite() && self.gamma >= R::zero()) {
            return bad("gamma must be finite and non-negative");
        }
        if !(self.collision_penalty.is_finite() && self.collision_penalty > R::zero()) {
            return bad("collision_penalty must be finite and positive");
        }
        if !(self.resolution.is_finite() && self.resolution > R::zero()) {
            return bad("resolution must be finite and positive");
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ConfigDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: ConfigDoc) -> Result<Self> {
        check_version(doc.format_version)?;
        let cfg = Self {
            alpha: real(doc.alpha),
            beta: real(doc.beta),
            gamma: real(doc.gamma),
            collision_penalty: real(doc.collision_penalty),
            resolution: real(doc.resolution),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let doc = ConfigDoc {
            format_version: FORMAT_VERSION,
            alpha: crate::scene::to_f64(self.alpha),
            beta: crate::scene::to_f64(self.beta),
            gamma: crate::scene::to_f64(self.gamma),
            collision_penalty: crate::scene::to_f64(self.collision_penalty),
            resolution: crate::scene::to_f64(self.resolution),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("config serializes");
        s.push('\n');
        s
    }
}

pub fn load_config<R: Real>(path: impl AsRef<Path>) -> Result<ObjectiveConfig<R>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    let doc: ConfigDoc = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.into(),
        source,
    })?;
    ObjectiveConfig::from_doc(doc)
}

/// A navigation waypoint: an object to approach or a fixed point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Waypoint {
    Object(String),
    Point([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub name: String,
    pub waypoints: Vec<Waypoint>,
}

/// Named activities, each an ordered list of waypoints.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TaskSet {
    pub tasks: Vec<Task>,
}

#[derive(Serialize, Deserialize)]
struct TaskSetDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    tasks: Vec<Task>,
}

impl TaskSet {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TaskSetDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        check_version(doc.format_version)?;
        Ok(Self { tasks: doc.tasks })
    }

    pub fn to_json(&self) -> String {
        let doc = TaskSetDoc {
            format_version: FORMAT_VERSION,
            tasks: self.tasks.clone(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("tasks serialize");
        s.push('\n');
        s
    }

    /// Every object waypoint must name a scene object.
    pub fn validate<R: Real>(&self, scene: &Scene<R>) -> Result<()> {
        for task in &self.tasks {
            for wp in &task.waypoints {
                if let Waypoint::Object(id) = wp {
                    if scene.object(id).is_none() {
                        return Err(Error::UnknownObject(id.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn load_tasks(path: impl AsRef<Path>) -> Result<TaskSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    TaskSet::from_json(&text).map_err(|e| match e {
        Error::Parse { source, .. } => Error::Parse {
            path: path.into(),
            source,
        },
        other => other,
    })
}

/// Full objective breakdown for one candidate layout.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation<R> {
    pub human: R,
    pub robot: R,
    pub motion: R,
    /// Total penetration depth in meters; zero iff no overlap.
    pub penetration: R,
    pub total: R,
    /// Human-term contribution per functional group.
    pub per_group: Vec<R>,
    /// Robot-term contribution per object id.
    pub per_object: BTreeMap<String, R>,
    /// Set when the robot cannot be placed anywhere (robot term forced to 0).
    pub no_access: bool,
}

/// Human term on an already-applied scene: for every kept functional edge,
/// `1 - P_d(d) / sup P_d`, each summand in `[0, 1]`. Pairs without corpus
/// statistics contribute the neutral 0.5.
pub(crate) fn human_term_applied<R: Real>(
    scene: &Scene<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
) -> (R, Vec<R>) {
    let mut per_group = vec![R::zero(); groups.groups.len()];
    let mut total = R::zero();
    for edge in &groups.kept_edges {
        let (Some(oa), Some(ob)) = (scene.object(&edge.a), scene.object(&edge.b)) else {
            continue;
        };
        let d = oa.footprint.center().distance(ob.footprint.center());
        let summand = match stats.peak_density(&oa.label, &ob.label) {
            Some(sup) if sup > R::zero() => {
                R::one() - stats.density(&oa.label, &ob.label, d) / sup
            }
            _ => real(0.5),
        };
        total = total + summand;
        if let Some(gi) = groups.group_of(&edge.a) {
            per_group[gi] = per_group[gi] + summand;
        }
    }
    (total, per_group)
}

/// Human term for a candidate layout.
pub fn human_term<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
) -> Result<R> {
    let applied = apply_layout(scene, layout)?;
    Ok(human_term_applied(&applied, groups, stats).0)
}

/// Robot term: per object `I_i`, the negated integral of
/// `f_I + alpha * f_R` over the interaction band intersected with the
/// accessible region, as a cell-center Riemann sum.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotTerm<R> {
    pub total: R,
    pub per_object: BTreeMap<String, R>,
    /// True when no cell is accessible; every `I_i` is zero then.
    pub no_access: bool,
}

pub(crate) fn robot_term_applied<R: Real>(
    scene: &Scene<R>,
    config: &ObjectiveConfig<R>,
) -> Result<RobotTerm<R>> {
    let sdf = scene_sdf(scene, config.resolution)?;
    let free = free_space(&sdf, scene.robot.r_b);
    let region = match accessible_region(&free, scene.robot.seed_hint) {
        Ok(r) => r,
        Err(Error::NoFreeSpace) => {
            return Ok(RobotTerm {
                total: R::zero(),
                per_object: scene
                    .objects
                    .iter()
                    .map(|o| (o.id.clone(), R::zero()))
                    .collect(),
                no_access: true,
            });
        }
        Err(e) => return Err(e),
    };

    let cell_area = config.resolution * config.resolution;
    let mut per_object = BTreeMap::new();
    let mut total = R::zero();
    for obj in &scene.objects {
        let (x0, y0, x1, y1) = interaction_window(obj, scene.robot.d_max, &free);
        let mut sum = R::zero();
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                if !region.contains(ix, iy) {
                    continue;
                }
                let q = free.cell_center(ix, iy);
                let fi = interaction_value(obj, scene.robot.d_max, q);
                if fi != R::zero() {
                    sum = sum + fi + config.alpha * free.get(ix, iy);
                }
            }
        }
        let term = -sum * cell_area;
        total = total + term;
        per_object.insert(obj.id.clone(), term);
    }
    Ok(RobotTerm {
        total,
        per_object,
        no_access: false,
    })
}

/// Robot term for a candidate layout.
pub fn robot_term<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    config: &ObjectiveConfig<R>,
) -> Result<RobotTerm<R>> {
    let applied = apply_layout(scene, layout)?;
    robot_term_applied(&applied, config)
}

/// Total navigation distance over all tasks. Object waypoints resolve to the
/// nearest accessible cell inside the object's positive interaction band;
/// unreachable legs cost four room perimeters instead of infinity.
pub(crate) fn motion_cost_applied<R: Real>(
    scene: &Scene<R>,
    tasks: &TaskSet,
    config: &ObjectiveConfig<R>,
) -> Result<R> {
    tasks.validate(scene)?;
    let penalty = scene.room.perimeter() * real(4.0);
    let sdf = scene_sdf(scene, config.resolution)?;
    let free = free_space(&sdf, scene.robot.r_b);
    let region = match accessible_region(&free, scene.robot.seed_hint) {
        Ok(r) => r,
        Err(Error::NoFreeSpace) => {
            // Nothing is reachable: every leg pays the penalty.
            let legs: usize = tasks
                .tasks
                .iter()
                .map(|t| t.waypoints.len().saturating_sub(1))
                .sum();
            return Ok(penalty * real(legs as f64));
        }
        Err(e) => return Err(e),
    };

    let resolve = |wp: &Waypoint| -> Option<Point2<R>> {
        match wp {
            Waypoint::Point(p) => {
                let q = Point2::new(real(p[0]), real(p[1]));
                let (ix, iy) = free.cell_of(q)?;
                region.contains(ix, iy).then(|| region.cell_center(ix, iy))
            }
            Waypoint::Object(id) => {
                let obj = scene.object(id)?;
                let center = obj.footprint.center();
                let (x0, y0, x1, y1) = interaction_window(obj, scene.robot.d_max, &free);
                let mut best: Option<((usize, usize), R)> = None;
                for iy in y0..=y1 {
                    for ix in x0..=x1 {
                        if !region.contains(ix, iy) {
                            continue;
                        }
                        let q = region.cell_center(ix, iy);
                        if interaction_value(obj, scene.robot.d_max, q) > R::zero() {
                            let d = q.distance(center);
                            if best.is_none() || d < best.unwrap().1 {
                                best = Some(((ix, iy), d));
                            }
                        }
                    }
                }
                best.map(|(c, _)| region.cell_center(c.0, c.1))
            }
        }
    };

    let mut total = R::zero();
    for task in &tasks.tasks {
        let resolved: Vec<Option<Point2<R>>> = task.waypoints.iter().map(&resolve).collect();
        for pair in resolved.windows(2) {
            let leg = match (pair[0], pair[1]) {
                (Some(a), Some(b)) => crate::field::shortest_path(&region, a, b).unwrap_or(penalty),
                _ => penalty,
            };
            total = total + leg;
        }
    }
    Ok(total)
}

/// Motion cost for a candidate layout.
pub fn motion_cost<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    tasks: &TaskSet,
    config: &ObjectiveConfig<R>,
) -> Result<R> {
    let applied = apply_layout(scene, layout)?;
    motion_cost_applied(&applied, tasks, config)
}

/// Total penetration depth: overlaps between object pairs plus protrusion
/// beyond the room walls, in meters. Zero iff nothing overlaps.
pub(crate) fn penetration_applied<R: Real>(scene: &Scene<R>) -> R {
    let mut total = R::zero();
    for i in 0..scene.objects.len() {
        for j in (i + 1)..scene.objects.len() {
            let sep = rect_separation(
                &scene.objects[i].footprint,
                &scene.objects[j].footprint,
            );
            total = total + (-sep).max(R::zero());
        }
    }
    for obj in &scene.objects {
        total = total + room_protrusion(&obj.footprint, &scene.room);
    }
    total
}

/// Strict feasibility: every object pair strictly separated and every
/// footprint inside the room (wall contact allowed).
pub fn feasible<R: Real>(scene: &Scene<R>) -> bool {
    for i in 0..scene.objects.len() {
        for j in (i + 1)..scene.objects.len() {
            if rect_separation(&scene.objects[i].footprint, &scene.objects[j].footprint)
                <= R::zero()
            {
                return false;
            }
        }
    }
    scene
        .objects
        .iter()
        .all(|o| room_protrusion(&o.footprint, &scene.room) <= R::zero())
}

pub(crate) fn evaluate_applied<R: Real>(
    applied: &Scene<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<Evaluation<R>> {
    let (human, per_group) = human_term_applied(applied, groups, stats);
    let robot = robot_term_applied(applied, config)?;
    let motion = match tasks {
        Some(t) if config.gamma > R::zero() => motion_cost_applied(applied, t, config)?,
        _ => R::zero(),
    };
    let penetration = penetration_applied(applied);
    let total = human
        + config.beta * robot.total
        + config.gamma * motion
        + config.collision_penalty * penetration;
    Ok(Evaluation {
        human,
        robot: robot.total,
        motion,
        penetration,
        total,
        per_group,
        per_object: robot.per_object,
        no_access: robot.no_access,
    })
}

/// Evaluate the combined objective for a candidate layout:
/// `total = human + beta * robot + gamma * motion + penalty * penetration`.
pub fn evaluate<R: Real>(
    scene: &Scene<R>,
    layout: &Layout<R>,
    groups: &FunctionalGroups<R>,
    stats: &RelationStats<R>,
    config: &ObjectiveConfig<R>,
    tasks: Option<&TaskSet>,
) -> Result<Evaluation<R>> {
    let applied = apply_layout(scene, layout)?;
    evaluate_applied(&applied, groups, stats, config, tasks)
}
