//! Scene data model, JSON serialization, validation, and the layout map the
//! optimizer mutates. Scenes and layouts are immutable values after load.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{room_protrusion, OrientedRect, Point2, Pose2, Room};
use crate::num::{real, Real};

/// Current on-disk format version for every file this crate writes.
pub const FORMAT_VERSION: u32 = 1;

pub(crate) fn default_version() -> u32 {
    FORMAT_VERSION
}

pub(crate) fn check_version(found: u32) -> Result<()> {
    if found != FORMAT_VERSION {
        return Err(Error::FormatVersion {
            found,
            expected: FORMAT_VERSION,
        });
    }
    Ok(())
}

/// A side of an object footprint, in the object's local frame:
/// front = +x (heading), back = -x, left = +y, right = -y.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Front,
    Back,
    Left,
    Right,
}

/// Default interaction sides by label family: storage furniture is approached
/// from the front, seating/sleeping furniture from every side but the back,
/// and tables (or anything unrecognized) from all four sides.
pub fn default_interaction_sides(label: &str) -> BTreeSet<Side> {
    let l = label.to_ascii_lowercase();
    let front_only = ["cabinet", "drawer", "shelf", "wardrobe", "stand", "dresser", "closet"];
    if front_only.iter().any(|k| l.contains(k)) {
        return BTreeSet::from([Side::Front]);
    }
    let three_sided = ["bed", "sofa", "couch"];
    if three_sided.iter().any(|k| l.contains(k)) {
        return BTreeSet::from([Side::Front, Side::Left, Side::Right]);
    }
    BTreeSet::from([Side::Front, Side::Back, Side::Left, Side::Right])
}

/// The robot model: an inflated disc base plus an arm-reach radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobotSpec<R> {
    /// Inflated disc radius (safety margin included), meters.
    pub r_b: R,
    /// Maximum arm reach from the base boundary, meters.
    pub d_max: R,
    /// Preferred start cell for the accessibility flood fill.
    pub seed_hint: Option<Point2<R>>,
}

/// One furniture item: labeled, oriented rectangular footprint with the set
/// of sides a robot can usefully approach. Immovable objects are obstacles
/// the optimizer never touches.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneObject<R> {
    pub id: String,
    pub label: String,
    pub footprint: OrientedRect<R>,
    /// Empty set marks an object the robot never interacts with.
    pub interaction_sides: BTreeSet<Side>,
    pub movable: bool,
}

/// A room, its robot, and an ordered list of furniture objects.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene<R> {
    pub room: Room<R>,
    pub robot: RobotSpec<R>,
    pub objects: Vec<SceneObject<R>>,
}

/// Poses for exactly the movable objects of a scene.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layout<R> {
    pub poses: BTreeMap<String, Pose2<R>>,
}

impl<R: Real> Scene<R> {
    pub fn object(&self, id: &str) -> Option<&SceneObject<R>> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    pub fn movable_ids(&self) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| o.movable)
            .map(|o| o.id.clone())
            .collect()
    }

    /// The current poses of the movable objects, as a layout.
    pub fn layout(&self) -> Layout<R> {
        Layout {
            poses: self
                .objects
                .iter()
                .filter(|o| o.movable)
                .map(|o| (o.id.clone(), o.footprint.pose))
                .collect(),
        }
    }

    /// Check every type invariant, naming the violated one on failure.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));
        if !(self.room.width.is_finite() && self.room.width > R::zero()) {
            return fail("room.width must be finite and positive".into());
        }
        if !(self.room.height.is_finite() && self.room.height > R::zero()) {
            return fail("room.height must be finite and positive".into());
        }
        if !(self.robot.r_b.is_finite() && self.robot.r_b > R::zero()) {
            return fail("robot.r_b must be finite and positive".into());
        }
        if !(self.robot.d_max.is_finite() && self.robot.d_max > R::zero()) {
            return fail("robot.d_max must be finite and positive".into());
        }
        if let Some(h) = self.robot.seed_hint {
            if !h.is_finite() {
                return fail("robot.seed_hint must be finite".into());
            }
        }
        if self.objects.is_empty() {
            return fail("scene must contain at least one object".into());
        }
        let mut seen = BTreeSet::new();
        for obj in &self.objects {
            if !seen.insert(obj.id.as_str()) {
                return fail(format!("duplicate object id `{}`", obj.id));
            }
            let (hx, hy) = obj.footprint.half_extents;
            if !(hx.is_finite() && hx > R::zero() && hy.is_finite() && hy > R::zero()) {
                return fail(format!(
                    "object `{}`: half_extents must be finite and positive",
                    obj.id
                ));
            }
            if !obj.footprint.pose.is_finite() {
                return fail(format!("object `{}`: pose must be finite", obj.id));
            }
            let c = obj.footprint.center();
            if c.x < R::zero() || c.x > self.room.width || c.y < R::zero() || c.y > self.room.height
            {
                return fail(format!("object `{}`: center lies outside the room", obj.id));
            }
            if room_protrusion(&obj.footprint, &self.room) > real(1e-9) {
                return fail(format!(
                    "object `{}`: footprint extends outside the room",
                    obj.id
                ));
            }
        }
        Ok(())
    }
}

/// Return a copy of `scene` with movable poses replaced by `layout`.
/// The layout must cover exactly the movable objects.
pub fn apply_layout<R: Real>(scene: &Scene<R>, layout: &Layout<R>) -> Result<Scene<R>> {
    let movable: BTreeSet<&str> = scene
        .objects
        .iter()
        .filter(|o| o.movable)
        .map(|o| o.id.as_str())
        .collect();
    for id in layout.poses.keys() {
        if !movable.contains(id.as_str()) {
            return Err(Error::LayoutExtra(id.clone()));
        }
    }
    let mut out = scene.clone();
    for obj in &mut out.objects {
        if obj.movable {
            let pose = layout
                .poses
                .get(&obj.id)
                .ok_or_else(|| Error::LayoutMissing(obj.id.clone()))?;
            obj.footprint.pose = Pose2::new(pose.x, pose.y, pose.theta);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON documents. All lengths are meters, angles radians. Numbers pass
// through f64, which round-trips both f32 and f64 scenes exactly.

#[derive(Serialize, Deserialize)]
struct SceneDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    room: RoomDoc,
    robot: RobotDoc,
    objects: Vec<ObjectDoc>,
}

#[derive(Serialize, Deserialize)]
struct RoomDoc {
    width: f64,
    height: f64,
}

#[derive(Serialize, Deserialize)]
struct RobotDoc {
    r_b: f64,
    d_max: f64,
    #[serde(default)]
    seed_hint: Option<[f64; 2]>,
}

fn default_true() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
struct ObjectDoc {
    id: String,
    label: String,
    pose: [f64; 3],
    half_extents: [f64; 2],
    /// Absent means "use the label-based default".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    interaction_sides: Option<Vec<Side>>,
    #[serde(default = "default_true")]
    movable: bool,
}

impl<R: Real> Scene<R> {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SceneDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: SceneDoc) -> Result<Self> {
        check_version(doc.format_version)?;
        let scene = Scene {
            room: Room::new(real(doc.room.width), real(doc.room.height)),
            robot: RobotSpec {
                r_b: real(doc.robot.r_b),
                d_max: real(doc.robot.d_max),
                seed_hint: doc.robot.seed_hint.map(|[x, y]| Point2::new(real(x), real(y))),
            },
            objects: doc
                .objects
                .into_iter()
                .map(|o| {
                    let sides = match o.interaction_sides {
                        Some(list) => list.into_iter().collect(),
                        None => default_interaction_sides(&o.label),
                    };
                    SceneObject {
                        footprint: OrientedRect {
                            pose: Pose2::new(real(o.pose[0]), real(o.pose[1]), real(o.pose[2])),
                            half_extents: (real(o.half_extents[0]), real(o.half_extents[1])),
                        },
                        id: o.id,
                        label: o.label,
                        interaction_sides: sides,
                        movable: o.movable,
                    }
                })
                .collect(),
        };
        scene.validate()?;
        Ok(scene)
    }

    fn to_doc(&self) -> SceneDoc {
        SceneDoc {
            format_version: FORMAT_VERSION,
            room: RoomDoc {
                width: to_f64(self.room.width),
                height: to_f64(self.room.height),
            },
            robot: RobotDoc {
                r_b: to_f64(self.robot.r_b),
                d_max: to_f64(self.robot.d_max),
                seed_hint: self.robot.seed_hint.map(|p| [to_f64(p.x), to_f64(p.y)]),
            },
            objects: self
                .objects
                .iter()
                .map(|o| ObjectDoc {
                    id: o.id.clone(),
                    label: o.label.clone(),
                    pose: [
                        to_f64(o.footprint.pose.x),
                        to_f64(o.footprint.pose.y),
                        to_f64(o.footprint.pose.theta),
                    ],
                    half_extents: [to_f64(o.footprint.half_extents.0), to_f64(o.footprint.half_extents.1)],
                    interaction_sides: Some(o.interaction_sides.iter().copied().collect()),
                    movable: o.movable,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("scene serializes");
        s.push('\n');
        s
    }
}

pub(crate) fn to_f64<R: Real>(x: R) -> f64 {
    x.to_f64().expect("scalar converts to f64")
}

pub fn load_scene<R: Real>(path: impl AsRef<Path>) -> Result<Scene<R>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    let doc: SceneDoc = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.into(),
        source,
    })?;
    Scene::from_doc(doc)
}

pub fn save_scene<R: Real>(scene: &Scene<R>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, scene.to_json()).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    poses: BTreeMap<String, [f64; 3]>,
}

impl<R: Real> Layout<R> {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LayoutDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        check_version(doc.format_version)?;
        Ok(Self::from_doc(doc))
    }

    fn from_doc(doc: LayoutDoc) -> Self {
        Layout {
            poses: doc
                .poses
                .into_iter()
                .map(|(id, [x, y, t])| (id, Pose2::new(real(x), real(y), real(t))))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = LayoutDoc {
            format_version: FORMAT_VERSION,
            poses: self
                .poses
                .iter()
                .map(|(id, p)| (id.clone(), [to_f64(p.x), to_f64(p.y), to_f64(p.theta)]))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("layout serializes");
        s.push('\n');
        s
    }
}

pub fn load_layout<R: Real>(path: impl AsRef<Path>) -> Result<Layout<R>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    let doc: LayoutDoc = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.into(),
        source,
    })?;
    check_version(doc.format_version)?;
    Ok(Layout::from_doc(doc))
}

pub fn save_layout<R: Real>(layout: &Layout<R>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, layout.to_json()).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}
