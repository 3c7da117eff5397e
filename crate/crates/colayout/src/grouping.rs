//! Functional groups: cluster the scene-graph edge weights with a 1-D
//! Gaussian mixture, keep the strong-relation component, and take connected
//! components of the surviving edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::num::{count, real, Real};
use crate::relations::SceneGraph;

/// Components' means must differ by at least this much before pruning kicks
/// in; below it the graph is treated as one undifferentiated group.
const MEAN_SEPARATION_EPS: f64 = 1e-6;

/// Lower bound on component variances.
const VARIANCE_FLOOR: f64 = 1e-8;

const MAX_ITERATIONS: usize = 500;
const LL_TOLERANCE: f64 = 1e-8;
const RESTARTS: u64 = 5;

/// A one-dimensional Gaussian mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct Gmm1D<R> {
    /// Mixing weights, sum to one.
    pub weights: Vec<R>,
    pub means: Vec<R>,
    /// Variances, each at least the floor.
    pub variances: Vec<R>,
}

impl<R: Real> Gmm1D<R> {
    pub fn k(&self) -> usize {
        self.means.len()
    }

    fn log_component_density(&self, k: usize, x: R) -> R {
        let two = real::<R>(2.0);
        let var = self.variances[k];
        let d = x - self.means[k];
        let log_norm = (two * R::PI() * var).ln() / two;
        -d * d / (two * var) - log_norm
    }

    /// Log of the mixture density at `x`.
    pub fn log_density(&self, x: R) -> R {
        let terms: Vec<R> = (0..self.k())
            .map(|k| self.weights[k].ln() + self.log_component_density(k, x))
            .collect();
        log_sum_exp(&terms)
    }

    /// Posterior component probabilities for `x`; sums to one.
    pub fn responsibilities(&self, x: R) -> Vec<R> {
        let terms: Vec<R> = (0..self.k())
            .map(|k| self.weights[k].ln() + self.log_component_density(k, x))
            .collect();
        let lse = log_sum_exp(&terms);
        terms.iter().map(|&t| (t - lse).exp()).collect()
    }

    /// Index of the component with the largest responsibility (ties: lowest).
    pub fn assign(&self, x: R) -> usize {
        let r = self.responsibilities(x);
        let mut best = 0;
        for k in 1..r.len() {
            if r[k] > r[best] {
                best = k;
            }
        }
        best
    }
}

fn log_sum_exp<R: Real>(terms: &[R]) -> R {
    let mut m = R::neg_infinity();
    for &t in terms {
        m = m.max(t);
    }
    if !m.is_finite() {
        return m;
    }
    let sum: R = terms.iter().map(|&t| (t - m).exp()).sum();
    m + sum.ln()
}

/// A fitted mixture plus the fit diagnostics the tests assert on.
#[derive(Clone, Debug)]
pub struct GmmFit<R> {
    pub model: Gmm1D<R>,
    pub log_likelihood: R,
    /// Log-likelihood after every EM iteration; non-decreasing.
    pub ll_trace: Vec<R>,
    pub iterations: usize,
}

/// Fit a `k`-component 1-D GMM by EM from a k-means++ initialization.
/// Five restarts with derived seeds; the best final likelihood wins.
/// Deterministic for a given seed.
pub fn fit_gmm_1d<R: Real>(samples: &[R], k: usize, seed: u64) -> Result<GmmFit<R>> {
    if k < 1 {
        return Err(Error::InvalidArgument("GMM needs k >= 1".into()));
    }
    if samples.len() < k {
        return Err(Error::InvalidArgument(format!(
            "GMM needs at least k = {k} samples, got {}",
            samples.len()
        )));
    }
    let mut best: Option<GmmFit<R>> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let fit = em_run(samples, k, &mut rng);
        if best.as_ref().is_none_or(|b| fit.log_likelihood > b.log_likelihood) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn kmeans_pp_centers<R: Real>(samples: &[R], k: usize, rng: &mut ChaCha8Rng) -> Vec<R> {
    let mut centers = Vec::with_capacity(k);
    centers.push(samples[rng.random_range(0..samples.len())]);
    while centers.len() < k {
        let d2: Vec<R> = samples
            .iter()
            .map(|&x| {
                centers
                    .iter()
                    .map(|&c| (x - c) * (x - c))
                    .fold(R::infinity(), R::min)
            })
            .collect();
        let total: R = d2.iter().copied().sum();
        let idx = if total > R::zero() {
            let mut target = rng.random_range(R::zero()..R::one()) * total;
            let mut pick = samples.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target = target - w;
            }
            pick
        } else {
            rng.random_range(0..samples.len())
        };
        centers.push(samples[idx]);
    }
    centers
}

fn em_run<R: Real>(samples: &[R], k: usize, rng: &mut ChaCha8Rng) -> GmmFit<R> {
    let n = samples.len();
    let floor = real::<R>(VARIANCE_FLOOR);

    // Hard-assign to the k-means++ centers to seed weights and variances.
    let centers = kmeans_pp_centers(samples, k, rng);
    let mut counts = vec![0usize; k];
    let mut sums = vec![R::zero(); k];
    let mut sq_sums = vec![R::zero(); k];
    for &x in samples {
        let mut nearest = 0;
        for c in 1..k {
            if (x - centers[c]).abs() < (x - centers[nearest]).abs() {
                nearest = c;
            }
        }
        counts[nearest] += 1;
        sums[nearest] = sums[nearest] + x;
        sq_sums[nearest] = sq_sums[nearest] + x * x;
    }
    let mut model = Gmm1D {
        weights: Vec::with_capacity(k),
        means: Vec::with_capacity(k),
        variances: Vec::with_capacity(k),
    };
    for c in 0..k {
        let (w, mean, var) = if counts[c] > 0 {
            let cnt = count::<R>(counts[c]);
            let mean = sums[c] / cnt;
            (count::<R>(counts[c]) / count::<R>(n), mean, sq_sums[c] / cnt - mean * mean)
        } else {
            (R::zero(), centers[c], R::zero())
        };
        model.weights.push(w.max(real(1e-12)));
        model.means.push(mean);
        model.variances.push(var.max(floor));
    }
    normalize_weights(&mut model.weights);

    let mut ll_trace = Vec::new();
    let mut prev_ll = R::neg_infinity();
    let mut iterations = 0;
    for _ in 0..MAX_ITERATIONS {
        iterations += 1;

        // E-step in the log domain; also accumulates the log-likelihood.
        let mut resp = vec![R::zero(); n * k];
        let mut ll = R::zero();
        for (i, &x) in samples.iter().enumerate() {
            let terms: Vec<R> = (0..k)
                .map(|c| model.weights[c].ln() + model.log_component_density(c, x))
                .collect();
            let lse = log_sum_exp(&terms);
            ll = ll + lse;
            for c in 0..k {
                resp[i * k + c] = (terms[c] - lse).exp();
            }
        }
        debug_assert!(
            ll >= prev_ll - real::<R>(1e-9) * (R::one() + prev_ll.abs()),
            "EM log-likelihood decreased"
        );
        ll_trace.push(ll);
        let done = (ll - prev_ll).abs() < real(LL_TOLERANCE);
        prev_ll = ll;

        // M-step.
        for c in 0..k {
            let nk: R = (0..n).map(|i| resp[i * k + c]).sum();
            if nk > R::zero() {
                let mean: R = (0..n).map(|i| resp[i * k + c] * samples[i]).sum::<R>() / nk;
                let var: R = (0..n)
                    .map(|i| {
                        let d = samples[i] - mean;
                        resp[i * k + c] * d * d
                    })
                    .sum::<R>()
                    / nk;
                model.weights[c] = nk / count(n);
                model.means[c] = mean;
                model.variances[c] = var.max(floor);
            } else {
                model.weights[c] = real(1e-12);
            }
        }
        normalize_weights(&mut model.weights);

        if done {
            break;
        }
    }

    GmmFit {
        model,
        log_likelihood: prev_ll,
        ll_trace,
        iterations,
    }
}

fn normalize_weights<R: Real>(weights: &mut [R]) {
    let total: R = weights.iter().copied().sum();
    for w in weights {
        *w = *w / total;
    }
}

/// The partition of object ids into functional groups plus the surviving
/// strong edges.
#[derive(Clone, Debug, PartialEq)]
pub struct KeptEdge<R> {
    pub a: String,
    pub b: String,
    pub weight: R,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalGroups<R> {
    /// Disjoint, non-empty, covers every object id; each group sorted, groups
    /// ordered by their first member.
    pub groups: Vec<Vec<String>>,
    pub kept_edges: Vec<KeptEdge<R>>,
}

impl<R: Real> FunctionalGroups<R> {
    pub fn group_of(&self, id: &str) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.iter().any(|m| m == id))
    }

    /// Kept edges with both endpoints inside group `gi`.
    pub fn edges_within(&self, gi: usize) -> Vec<&KeptEdge<R>> {
        let members: BTreeSet<&str> = self.groups[gi].iter().map(String::as_str).collect();
        self.kept_edges
            .iter()
            .filter(|e| members.contains(e.a.as_str()) && members.contains(e.b.as_str()))
            .collect()
    }
}

/// Default number of mixture components: strong vs weak relations.
pub const DEFAULT_COMPONENTS: usize = 2;

/// Partition the scene graph: fit a `k_components` GMM on edge weights,
/// drop every edge not assigned to the highest-mean component, and take
/// connected components of the survivors. When the component means are
/// indistinguishable all edges are kept and the scene is one group.
pub fn extract_groups<R: Real>(
    graph: &SceneGraph<R>,
    k_components: usize,
    seed: u64,
) -> Result<FunctionalGroups<R>> {
    if graph.edges.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot group a graph with no edges".into(),
        ));
    }
    let weights: Vec<R> = graph.edges.iter().map(|e| e.weight).collect();
    let k = k_components.max(1).min(weights.len());
    let fit = fit_gmm_1d(&weights, k, seed)?;

    let mut lo = R::infinity();
    let mut hi = R::neg_infinity();
    let mut target = 0;
    for (c, &m) in fit.model.means.iter().enumerate() {
        lo = lo.min(m);
        if m > hi {
            hi = m;
            target = c;
        }
    }
    let keep_all = hi - lo < real(MEAN_SEPARATION_EPS);

    let kept: Vec<usize> = graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| keep_all || fit.model.assign(e.weight) == target)
        .map(|(i, _)| i)
        .collect();

    // Connected components over the kept edges; untouched nodes stay singletons.
    let n = graph.nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &ei in &kept {
        let e = &graph.edges[ei];
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    let mut component = vec![usize::MAX; n];
    let mut n_components = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        component[start] = n_components;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if component[w] == usize::MAX {
                    component[w] = n_components;
                    queue.push_back(w);
                }
            }
        }
        n_components += 1;
    }

    let mut by_component: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, &c) in component.iter().enumerate() {
        by_component.entry(c).or_default().push(graph.nodes[i].clone());
    }
    let mut groups: Vec<Vec<String>> = by_component
        .into_values()
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    groups.sort();

    let mut kept_edges: Vec<KeptEdge<R>> = kept
        .iter()
        .map(|&ei| {
            let e = &graph.edges[ei];
            let (a, b) = if graph.nodes[e.a] <= graph.nodes[e.b] {
                (graph.nodes[e.a].clone(), graph.nodes[e.b].clone())
            } else {
                (graph.nodes[e.b].clone(), graph.nodes[e.a].clone())
            };
            KeptEdge {
                a,
                b,
                weight: e.weight,
            }
        })
        .collect();
    kept_edges.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));

    Ok(FunctionalGroups { groups, kept_edges })
}
