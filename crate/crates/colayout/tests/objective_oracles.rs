//! Monte-Carlo integration oracle for the robot term, plus objective
//! invariants that need whole scenes.

mod common;

use colayout::field::{accessible_region, free_space, interaction_value, scene_sdf};
use colayout::geometry::Point2;
use colayout::grouping::{FunctionalGroups, KeptEdge};
use colayout::objective::{evaluate, robot_term, ObjectiveConfig};
use colayout::relations::RelationStats;
use common::*;
use rand::Rng;

/// Continuous Monte-Carlo version of the robot term over the same accessible
/// mask: the integrand is evaluated analytically at sample points, the domain
/// is the union of mask cells intersected with the interaction band.
fn monte_carlo_robot_term(
    scene: &colayout::Scene,
    config: &ObjectiveConfig<f64>,
    samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<f64> {
    let sdf = scene_sdf(scene, config.resolution).ok()?;
    let free = free_space(&sdf, scene.robot.r_b);
    let region = accessible_region(&free, scene.robot.seed_hint).ok()?;
    let room_area = scene.room.width * scene.room.height;
    let mut total = 0.0;
    for _ in 0..samples {
        let q = Point2::new(
            rng.random_range(0.0..scene.room.width),
            rng.random_range(0.0..scene.room.height),
        );
        let ix = (q.x / config.resolution) as usize;
        let iy = (q.y / config.resolution) as usize;
        if !region.contains(ix, iy) {
            continue;
        }
        // Analytic free-space clearance at the sample point.
        let mut f_b = sd_room_oracle(q, &scene.room);
        for obj in &scene.objects {
            f_b = f_b.min(sd_rect_oracle(q, &obj.footprint));
        }
        let f_r = f_b - scene.robot.r_b;
        for obj in &scene.objects {
            let fi = interaction_value(obj, scene.robot.d_max, q);
            if fi != 0.0 {
                total += fi + config.alpha * f_r;
            }
        }
    }
    Some(-total / samples as f64 * room_area)
}

#[test]
fn robot_term_riemann_sum_matches_monte_carlo() {
    let mut rng = seeded(99);
    let config = ObjectiveConfig {
        alpha: 0.1,
        beta: 1.0,
        gamma: 0.0,
        collision_penalty: 10.0,
        resolution: 0.025,
    };
    let mut tested = 0;
    while tested < 10 {
        let scene = random_scene(&mut rng);
        let Some(mc) = monte_carlo_robot_term(&scene, &config, 1_000_000, &mut rng) else {
            continue;
        };
        // Skip scenes whose integral is too small for a relative comparison.
        if mc.abs() < 0.3 {
            continue;
        }
        let grid = robot_term(&scene, &scene.layout(), &config).unwrap();
        let rel = (grid.total - mc).abs() / mc.abs();
        assert!(
            rel < 0.03,
            "grid {} vs MC {} ({:.2}% off)",
            grid.total,
            mc,
            rel * 100.0
        );
        tested += 1;
    }
}

#[test]
fn human_term_is_rigid_invariant() {
    // Translating the whole scene leaves every pairwise distance, and so the
    // human term, unchanged.
    let scene = colayout::Scene::from_json(
        r#"{
            "room": {"width": 12.0, "height": 12.0},
            "robot": {"r_b": 0.25, "d_max": 0.8},
            "objects": [
                {"id": "a", "label": "bed", "pose": [3.0, 3.0, 0.3], "half_extents": [1.0, 0.7]},
                {"id": "b", "label": "nightstand", "pose": [4.4, 3.2, 0.1], "half_extents": [0.2, 0.2]}
            ]
        }"#,
    )
    .unwrap();
    let groups = FunctionalGroups {
        groups: vec![vec!["a".into(), "b".into()]],
        kept_edges: vec![KeptEdge {
            a: "a".into(),
            b: "b".into(),
            weight: 1.0,
        }],
    };
    let mut stats = RelationStats::new(0.25).unwrap();
    for d in [1.3, 1.4, 1.45, 1.6] {
        stats.record("bed", "nightstand", d);
    }
    let base = colayout::objective::human_term(&scene, &scene.layout(), &groups, &stats).unwrap();
    let mut shifted = scene.layout();
    for pose in shifted.poses.values_mut() {
        *pose = colayout::geometry::Pose2::new(pose.x + 2.0, pose.y + 1.5, pose.theta);
    }
    let moved = colayout::objective::human_term(&scene, &shifted, &groups, &stats).unwrap();
    assert!((base - moved).abs() < 1e-12);
}

#[test]
fn robot_term_improves_when_an_obstacle_is_removed() {
    // A fully interactive table in the open, with and without a big blocker
    // shadowing part of its band. Removing the blocker frees band cells whose
    // integrand is positive, so I decreases.
    let with_blocker = colayout::Scene::from_json(
        r#"{
            "room": {"width": 9.0, "height": 9.0},
            "robot": {"r_b": 0.25, "d_max": 0.8, "seed_hint": [7.5, 7.5]},
            "objects": [
                {"id": "t", "label": "table", "pose": [4.5, 4.5, 0.0], "half_extents": [0.6, 0.4]},
                {"id": "blocker", "label": "wardrobe", "pose": [4.5, 3.0, 0.0], "half_extents": [1.8, 0.5], "movable": false}
            ]
        }"#,
    )
    .unwrap();
    let without: colayout::Scene = {
        let mut s = with_blocker.clone();
        s.objects.retain(|o| o.id != "blocker");
        s
    };
    let config = ObjectiveConfig {
        resolution: 0.05,
        ..ObjectiveConfig::default()
    };
    let with = robot_term(&with_blocker, &with_blocker.layout(), &config).unwrap();
    let free = robot_term(&without, &without.layout(), &config).unwrap();
    assert!(
        free.per_object["t"] < with.per_object["t"],
        "expected improvement: {} vs {}",
        free.per_object["t"],
        with.per_object["t"]
    );
}

#[test]
fn evaluate_matches_windowed_and_full_grid_interaction() {
    // The windowed robot-term accumulation must agree with summing full
    // interaction-field grids cell by cell.
    let mut rng = seeded(5);
    for _ in 0..5 {
        let scene = random_scene(&mut rng);
        let config = ObjectiveConfig {
            resolution: 0.1,
            ..ObjectiveConfig::default()
        };
        let sdf = scene_sdf(&scene, config.resolution).unwrap();
        let free = free_space(&sdf, scene.robot.r_b);
        let Ok(region) = accessible_region(&free, scene.robot.seed_hint) else {
            continue;
        };
        let cell_area = config.resolution * config.resolution;
        let mut expected_total = 0.0;
        for obj in &scene.objects {
            let field = colayout::field::interaction_field(&scene, &obj.id, &free).unwrap();
            let mut sum = 0.0;
            for iy in 0..field.ny() {
                for ix in 0..field.nx() {
                    let v = field.get(ix, iy);
                    if v != 0.0 && region.contains(ix, iy) {
                        sum += v + config.alpha * free.get(ix, iy);
                    }
                }
            }
            expected_total += -sum * cell_area;
        }
        let fast = robot_term(&scene, &scene.layout(), &config).unwrap();
        assert!(
            (fast.total - expected_total).abs() < 1e-12,
            "windowed {} vs full-grid {}",
            fast.total,
            expected_total
        );
    }
}

#[test]
fn evaluation_total_identity_on_random_scenes() {
    let mut rng = seeded(123);
    let stats = RelationStats::new(0.25).unwrap();
    for _ in 0..5 {
        let scene = random_scene(&mut rng);
        let groups = FunctionalGroups {
            groups: scene.objects.iter().map(|o| vec![o.id.clone()]).collect(),
            kept_edges: vec![],
        };
        let config = ObjectiveConfig {
            alpha: 0.1,
            beta: 0.8,
            gamma: 0.0,
            collision_penalty: 10.0,
            resolution: 0.1,
        };
        let ev = evaluate(&scene, &scene.layout(), &groups, &stats, &config, None).unwrap();
        let recomposed =
            ev.human + config.beta * ev.robot + config.gamma * ev.motion
                + config.collision_penalty * ev.penetration;
        assert_eq!(ev.total.to_bits(), recomposed.to_bits());
    }
}
