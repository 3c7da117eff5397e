//! Scratch harness for tuning ASA schedule parameters (not shipped).

use colayout::optimize::{asa_minimize, AsaConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rastrigin(x: &[f64]) -> f64 {
    let a = 10.0;
    a * x.len() as f64
        + x.iter()
            .map(|&v| v * v - a * (2.0 * std::f64::consts::PI * v).cos())
            .sum::<f64>()
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let t0: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(1.0);
    let cooling: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.95);
    let steps: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(40);
    let interval: usize = args.get(4).map(|s| s.parse().unwrap()).unwrap_or(200);
    let budget: usize = args.get(5).map(|s| s.parse().unwrap()).unwrap_or(50_000);
    let target: f64 = args.get(6).map(|s| s.parse().unwrap()).unwrap_or(0.5);
    let seed_base: u64 = args.get(7).map(|s| s.parse().unwrap()).unwrap_or(0);

    let bounds = vec![(-5.12, 5.12); 2];
    let mut hits = 0;
    let mut results = Vec::new();
    for seed in seed_base..seed_base + 10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let x0: Vec<f64> = (0..2).map(|_| rng.random_range(-5.12..5.12)).collect();
        let config = AsaConfig {
            t0,
            cooling,
            steps_per_temp: steps,
            reanneal_interval: interval,
            target_accept: target,
            seed,
            max_evals: budget,
            ..AsaConfig::default()
        };
        let sol = asa_minimize(rastrigin, &x0, &bounds, &config).unwrap();
        if sol.f < 0.1 {
            hits += 1;
        }
        results.push((sol.f, sol.trace.evals));
    }
    println!("rastrigin t0={t0} cooling={cooling} steps={steps} interval={interval} target={target} budget={budget}: {hits}/10");
    for (f, e) in &results {
        println!("  f={f:10.4e} evals={e}");
    }

    // Sphere n=4 check with the same schedule scaled to 20k.
    let bounds4 = vec![(-5.0, 5.0); 4];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let x0: Vec<f64> = (0..4).map(|_| rng.random_range(-5.0..5.0)).collect();
    let config = AsaConfig {
        t0,
        cooling,
        steps_per_temp: steps,
        reanneal_interval: interval,
        target_accept: target,
        seed: 0,
        max_evals: 20_000,
        ..AsaConfig::default()
    };
    let sol = asa_minimize(sphere, &x0, &bounds4, &config).unwrap();
    println!("sphere4: f={:e} evals={}", sol.f, sol.trace.evals);
}
