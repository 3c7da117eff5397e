//! Scratch end-to-end check on the bundled assets (not shipped).

use colayout::grouping::extract_groups;
use colayout::metrics::scene_metrics;
use colayout::objective::{evaluate, ObjectiveConfig};
use colayout::optimize::{optimize_scene, SolverOptions};
use colayout::relations::{build_graph, load_semantic_table, stats_build};
use colayout::scene::load_scene;

fn main() {
    let t0 = std::time::Instant::now();
    let scene_path = std::env::args().nth(2).unwrap_or_else(|| "assets/bedroom_fig1.json".into());
    let scene: colayout::Scene = load_scene(&scene_path).unwrap();
    let table = load_semantic_table("assets/semantic.json").unwrap();
    let mut corpus = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir("assets/corpus")
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    for p in paths {
        corpus.push(load_scene(&p).unwrap());
    }
    let stats = stats_build(&corpus, 0.25).unwrap();
    let graph = build_graph(&scene, &table, &stats).unwrap();
    println!("edges:");
    for e in &graph.edges {
        if e.weight > 1e-6 {
            println!("  {} -- {}: {:.4}", graph.nodes[e.a], graph.nodes[e.b], e.weight);
        }
    }
    let groups = extract_groups(&graph, 2, 0).unwrap();
    println!("groups: {:?}", groups.groups);
    println!(
        "kept edges: {:?}",
        groups
            .kept_edges
            .iter()
            .map(|e| format!("{}-{}:{:.3}", e.a, e.b, e.weight))
            .collect::<Vec<_>>()
    );

    let config = ObjectiveConfig::default();
    let before = scene_metrics(&scene, &scene.layout(), &groups, &stats, &config, None).unwrap();
    println!(
        "before: area {:.3} reach {:?} human {:.3} robot {:.3}",
        before.accessible_area, before.reachable_ids, before.human_term, before.robot_term
    );
    let ev = evaluate(&scene, &scene.layout(), &groups, &stats, &config, None).unwrap();
    println!("input total {:.4} (pen {:.4})", ev.total, ev.penetration);

    let options = SolverOptions {
        seed: 0,
        max_evals: std::env::args()
            .nth(1)
            .and_then(|s| s.parse().ok())
            .unwrap_or(6000),
        ..SolverOptions::default()
    };
    let (layout, report) = optimize_scene(&scene, &groups, &stats, &config, None, &options).unwrap();
    println!(
        "optimize: feasible={} input_total={:.4} final_total={:.4}",
        report.feasible, report.input_total, report.final_total
    );
    let after = scene_metrics(&scene, &layout, &groups, &stats, &config, None).unwrap();
    println!(
        "after:  area {:.3} (+{:.1}%) reach {:?} human {:.3} robot {:.3}",
        after.accessible_area,
        (after.accessible_area / before.accessible_area - 1.0) * 100.0,
        after.reachable_ids,
        after.human_term,
        after.robot_term
    );
    for (id, pose) in &layout.poses {
        println!("  {id}: ({:.2}, {:.2}, {:.2})", pose.x, pose.y, pose.theta);
    }
    // Kept-edge distances vs modal bins.
    let applied = colayout::scene::apply_layout(&scene, &layout).unwrap();
    for e in &groups.kept_edges {
        let a = applied.object(&e.a).unwrap();
        let b = applied.object(&e.b).unwrap();
        let d = a.footprint.center().distance(b.footprint.center());
        let bin = (d / 0.25) as usize;
        let modal = stats.modal_bin(&a.label, &b.label);
        println!("  edge {}-{}: d={:.3} bin={} modal={:?}", e.a, e.b, d, bin, modal);
    }
    println!("elapsed: {:.1?}", t0.elapsed());
}
