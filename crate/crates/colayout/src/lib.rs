//! Rearranges 2D indoor furniture layouts so a disc-based mobile robot gains
//! accessible space and reachable objects while human-preferred functional
//! groupings (bed + nightstand, desk + chair, …) stay intact.
//!
//! The pipeline:
//!
//! 1. [`relations`] scores every object pair by semantic strength (offline
//!    table) times spatial co-occurrence (corpus histograms) and normalizes
//!    the products into a weighted scene graph.
//! 2. [`grouping`] clusters the edge weights with a 1-D Gaussian mixture,
//!    prunes weak edges, and reads functional groups off the connected
//!    components.
//! 3. [`field`] discretizes the room: scene SDF, robot free space, the
//!    flood-filled accessible region, and per-object interaction ramps.
//! 4. [`objective`] combines the human term, robot term, optional task
//!    motion cost, and a collision penalty.
//! 5. [`optimize`] searches layouts hierarchically with adaptive simulated
//!    annealing and CMA-ES; [`metrics`] reports before/after deltas.
//!
//! Numeric kernels are generic over the [`Real`] scalar (`f32` or `f64`);
//! the aliases at the crate root fix `f64`, which every bundled file format
//! uses.

pub mod error;
pub mod field;
pub mod geometry;
pub mod grouping;
pub mod metrics;
pub mod num;
pub mod objective;
pub mod optimize;
pub mod relations;
pub mod scene;

pub use error::{Error, Result};
pub use num::{real, Real};

/// Scalar type used by the CLI and the bundled file formats.
pub type Scalar = f64;

pub type Point = geometry::Point2<Scalar>;
pub type Pose = geometry::Pose2<Scalar>;
pub type Rect = geometry::OrientedRect<Scalar>;
pub type Room = geometry::Room<Scalar>;
pub type Scene = scene::Scene<Scalar>;
pub type SceneObject = scene::SceneObject<Scalar>;
pub type RobotSpec = scene::RobotSpec<Scalar>;
pub type Layout = scene::Layout<Scalar>;
pub type SemanticTable = relations::SemanticTable<Scalar>;
pub type RelationStats = relations::RelationStats<Scalar>;
pub type SceneGraph = relations::SceneGraph<Scalar>;
pub type FunctionalGroups = grouping::FunctionalGroups<Scalar>;
pub type FieldGrid = field::FieldGrid<Scalar>;
pub type AccessibleRegion = field::AccessibleRegion<Scalar>;
pub type ObjectiveConfig = objective::ObjectiveConfig<Scalar>;
pub type TaskSet = objective::TaskSet;
pub type Evaluation = objective::Evaluation<Scalar>;
pub type SolverOptions = optimize::SolverOptions<Scalar>;
pub type OptimizeReport = optimize::OptimizeReport<Scalar>;
pub type SceneMetrics = metrics::SceneMetrics<Scalar>;
pub type DeltaReport = metrics::DeltaReport<Scalar>;
