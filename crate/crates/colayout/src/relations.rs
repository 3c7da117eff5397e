//! Pairwise object relations: semantic strength from an offline table,
//! spatial co-occurrence statistics mined from a scene corpus, and the
//! normalized edge weights of the scene graph built from their product.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{count, real, Real};
use crate::scene::{check_version, default_version, to_f64, Scene, FORMAT_VERSION};

/// Unordered label pair key.
fn pair_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

// ---------------------------------------------------------------------------
// Semantic table

/// Offline pairwise semantic strengths `h in [0, 1]` plus synonym flags.
/// Two objects with the same label always count as synonyms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SemanticTable<R> {
    strength: BTreeMap<(String, String), R>,
    is_a: BTreeSet<(String, String)>,
    labels: BTreeSet<String>,
}

#[derive(Serialize, Deserialize)]
struct SemanticDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    pairs: Vec<SemanticPairDoc>,
}

#[derive(Serialize, Deserialize)]
struct SemanticPairDoc {
    a: String,
    b: String,
    h: f64,
    #[serde(default)]
    is_a: bool,
}

impl<R: Real> SemanticTable<R> {
    pub fn insert(&mut self, a: &str, b: &str, h: R, is_a: bool) -> Result<()> {
        if !(h >= R::zero() && h <= R::one()) {
            return Err(Error::Validation(format!(
                "semantic strength h must be in [0, 1] for pair ({a}, {b})"
            )));
        }
        let key = pair_key(a, b);
        self.labels.insert(key.0.clone());
        self.labels.insert(key.1.clone());
        if is_a {
            self.is_a.insert(key.clone());
        }
        self.strength.insert(key, h);
        Ok(())
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.labels.contains(label)
    }

    /// Raw strength for a pair; zero when the pair has no entry.
    pub fn strength(&self, a: &str, b: &str) -> R {
        self.strength
            .get(&pair_key(a, b))
            .copied()
            .unwrap_or_else(R::zero)
    }

    /// Synonym test: flagged `is_a` pairs and identical labels.
    pub fn is_synonym(&self, a: &str, b: &str) -> bool {
        a == b || self.is_a.contains(&pair_key(a, b))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SemanticDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: SemanticDoc) -> Result<Self> {
        check_version(doc.format_version)?;
        let mut table = Self::default();
        for p in doc.pairs {
            table.insert(&p.a, &p.b, real(p.h), p.is_a)?;
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let doc = SemanticDoc {
            format_version: FORMAT_VERSION,
            pairs: self
                .strength
                .iter()
                .map(|((a, b), h)| SemanticPairDoc {
                    a: a.clone(),
                    b: b.clone(),
                    h: to_f64(*h),
                    is_a: self.is_a.contains(&(a.clone(), b.clone())),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("semantic table serializes");
        s.push('\n');
        s
    }
}

pub fn load_semantic_table<R: Real>(path: impl AsRef<Path>) -> Result<SemanticTable<R>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    let doc: SemanticDoc = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.into(),
        source,
    })?;
    SemanticTable::from_doc(doc)
}

pub fn save_semantic_table<R: Real>(
    table: &SemanticTable<R>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, table.to_json()).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Relation statistics

/// Per-pair counts mined from a corpus: co-occurrence totals and a histogram
/// of center-to-center distances.
#[derive(Clone, Debug, PartialEq)]
pub struct PairStats {
    pub n: u64,
    pub hist: Vec<u64>,
}

/// Spatial co-occurrence statistics over unordered label pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationStats<R> {
    pub bin_width: R,
    pairs: BTreeMap<(String, String), PairStats>,
    marginal: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct StatsDoc {
    #[serde(default = "default_version")]
    format_version: u32,
    bin_width: f64,
    pairs: Vec<StatsPairDoc>,
}

#[derive(Serialize, Deserialize)]
struct StatsPairDoc {
    a: String,
    b: String,
    n: u64,
    hist: Vec<u64>,
}

impl<R: Real> RelationStats<R> {
    pub fn new(bin_width: R) -> Result<Self> {
        if !(bin_width.is_finite() && bin_width > R::zero()) {
            return Err(Error::Validation(
                "bin_width must be finite and positive".into(),
            ));
        }
        Ok(Self {
            bin_width,
            pairs: BTreeMap::new(),
            marginal: BTreeMap::new(),
        })
    }

    /// Record one observed pair at center distance `d`.
    pub fn record(&mut self, a: &str, b: &str, d: R) {
        debug_assert!(d >= R::zero());
        let bin = (d.max(R::zero()) / self.bin_width)
            .floor()
            .to_usize()
            .expect("distance bin index fits in usize");
        let entry = self.pairs.entry(pair_key(a, b)).or_insert(PairStats {
            n: 0,
            hist: Vec::new(),
        });
        if entry.hist.len() <= bin {
            entry.hist.resize(bin + 1, 0);
        }
        entry.hist[bin] += 1;
        entry.n += 1;
        // marginal[o] = sum over k of N(o, k); a same-label pair contributes once
        *self.marginal.entry(a.to_string()).or_insert(0) += 1;
        if a != b {
            *self.marginal.entry(b.to_string()).or_insert(0) += 1;
        }
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.marginal.contains_key(label)
    }

    pub fn marginal(&self, label: &str) -> u64 {
        self.marginal.get(label).copied().unwrap_or(0)
    }

    pub fn cooccurrences(&self, a: &str, b: &str) -> u64 {
        self.pairs.get(&pair_key(a, b)).map(|p| p.n).unwrap_or(0)
    }

    pub fn pair(&self, a: &str, b: &str) -> Option<&PairStats> {
        self.pairs.get(&pair_key(a, b))
    }

    /// Histogram density at distance `d` for a pair: `count / (n * bin_width)`.
    /// Zero for unseen pairs and for distances beyond the recorded bins.
    pub fn density(&self, a: &str, b: &str, d: R) -> R {
        let Some(p) = self.pairs.get(&pair_key(a, b)) else {
            return R::zero();
        };
        if p.n == 0 || d < R::zero() {
            return R::zero();
        }
        let bin = (d / self.bin_width).floor();
        let Some(bin) = bin.to_usize() else {
            return R::zero();
        };
        let Some(&c) = p.hist.get(bin) else {
            return R::zero();
        };
        real::<R>(c as f64) / (real::<R>(p.n as f64) * self.bin_width)
    }

    /// The maximal histogram density over all bins for a pair, if recorded.
    pub fn peak_density(&self, a: &str, b: &str) -> Option<R> {
        let p = self.pairs.get(&pair_key(a, b))?;
        if p.n == 0 {
            return None;
        }
        let max = *p.hist.iter().max()?;
        Some(real::<R>(max as f64) / (real::<R>(p.n as f64) * self.bin_width))
    }

    /// The bin index with the largest count for a pair (ties: lowest index).
    pub fn modal_bin(&self, a: &str, b: &str) -> Option<usize> {
        let p = self.pairs.get(&pair_key(a, b))?;
        if p.n == 0 {
            return None;
        }
        let max = *p.hist.iter().max()?;
        p.hist.iter().position(|&c| c == max)
    }

    fn from_doc(doc: StatsDoc) -> Result<Self> {
        check_version(doc.format_version)?;
        let mut stats = Self::new(real(doc.bin_width))?;
        for p in doc.pairs {
            let total: u64 = p.hist.iter().sum();
            if total != p.n {
                return Err(Error::Validation(format!(
                    "pair ({}, {}): histogram total {} does not equal n = {}",
                    p.a, p.b, total, p.n
                )));
            }
            let key = pair_key(&p.a, &p.b);
            *stats.marginal.entry(key.0.clone()).or_insert(0) += p.n;
            if key.0 != key.1 {
                *stats.marginal.entry(key.1.clone()).or_insert(0) += p.n;
            }
            stats.pairs.insert(key, PairStats { n: p.n, hist: p.hist });
        }
        Ok(stats)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StatsDoc = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<string>".into(),
            source,
        })?;
        Self::from_doc(doc)
    }

    pub fn to_json(&self) -> String {
        let doc = StatsDoc {
            format_version: FORMAT_VERSION,
            bin_width: to_f64(self.bin_width),
            pairs: self
                .pairs
                .iter()
                .map(|((a, b), p)| StatsPairDoc {
                    a: a.clone(),
                    b: b.clone(),
                    n: p.n,
                    hist: p.hist.clone(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("stats serialize");
        s.push('\n');
        s
    }
}

pub fn load_stats<R: Real>(path: impl AsRef<Path>) -> Result<RelationStats<R>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    let doc: StatsDoc = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.into(),
        source,
    })?;
    RelationStats::from_doc(doc)
}

pub fn save_stats<R: Real>(stats: &RelationStats<R>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, stats.to_json()).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

/// Mine pairwise statistics from a corpus: every unordered object pair of
/// every scene increments the pair count and its distance histogram. Pure
/// counting, so the result is independent of corpus order.
pub fn stats_build<R: Real>(corpus: &[Scene<R>], bin_width: R) -> Result<RelationStats<R>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut stats = RelationStats::new(bin_width)?;
    for scene in corpus {
        for i in 0..scene.objects.len() {
            for j in (i + 1)..scene.objects.len() {
                let a = &scene.objects[i];
                let b = &scene.objects[j];
                let d = a.footprint.center().distance(b.footprint.center());
                stats.record(&a.label, &b.label, d);
            }
        }
    }
    Ok(stats)
}

// ---------------------------------------------------------------------------
// Relation probabilities

/// Semantic relation probability for a label pair within a scene: the
/// synonym-overridden strength, normalized by the sum of overridden strengths
/// over all unordered object pairs of the scene. Outputs over all scene pairs
/// sum to one.
pub fn semantic_rel<R: Real>(
    table: &SemanticTable<R>,
    scene_labels: &[String],
    o_i: &str,
    o_j: &str,
) -> Result<R> {
    if scene_labels.len() < 2 {
        return Err(Error::SceneTooSmall);
    }
    for l in scene_labels.iter().map(String::as_str).chain([o_i, o_j]) {
        if !table.contains_label(l) {
            return Err(Error::UnknownLabel(l.to_string()));
        }
    }

    // Mean strength over the scene's non-synonym pairs; substituted for
    // synonym pairs so near-identical labels read as a neutral relation.
    let mut non_syn_sum = R::zero();
    let mut non_syn_count = 0usize;
    for i in 0..scene_labels.len() {
        for j in (i + 1)..scene_labels.len() {
            let (a, b) = (&scene_labels[i], &scene_labels[j]);
            if !table.is_synonym(a, b) {
                non_syn_sum = non_syn_sum + table.strength(a, b);
                non_syn_count += 1;
            }
        }
    }
    let neutral = if non_syn_count > 0 {
        non_syn_sum / count(non_syn_count)
    } else {
        // Every pair is synonymous; any constant yields uniform weights.
        real(0.5)
    };
    let h_star = |a: &str, b: &str| -> R {
        if table.is_synonym(a, b) {
            neutral
        } else {
            table.strength(a, b)
        }
    };

    let mut denom = R::zero();
    let mut pair_count = 0usize;
    for i in 0..scene_labels.len() {
        for j in (i + 1)..scene_labels.len() {
            denom = denom + h_star(&scene_labels[i], &scene_labels[j]);
            pair_count += 1;
        }
    }
    if denom == R::zero() {
        // Degenerate: all strengths zero; fall back to uniform.
        return Ok(R::one() / count(pair_count));
    }
    Ok(h_star(o_i, o_j) / denom)
}

/// Co-occurrence probability `N_ij / min(marginal_i, marginal_j)`, the bias
/// correction for rarely co-occurring pairs. Symmetric, in `[0, 1]`.
pub fn cooccur_prob<R: Real>(stats: &RelationStats<R>, o_i: &str, o_j: &str) -> Result<R> {
    for l in [o_i, o_j] {
        if !stats.contains_label(l) {
            return Err(Error::UnknownLabel(l.to_string()));
        }
        if stats.marginal(l) == 0 {
            return Err(Error::ZeroMarginal(l.to_string()));
        }
    }
    let n = stats.cooccurrences(o_i, o_j);
    let m = stats.marginal(o_i).min(stats.marginal(o_j));
    Ok(real::<R>(n as f64) / real::<R>(m as f64))
}

/// Unnormalized spatial relation score: histogram density at distance `d`
/// times the co-occurrence probability. Zero for pairs the corpus never saw.
pub fn spatial_rel<R: Real>(stats: &RelationStats<R>, o_i: &str, o_j: &str, d: R) -> R {
    debug_assert!(d >= R::zero());
    let density = stats.density(o_i, o_j, d);
    if density == R::zero() {
        return R::zero();
    }
    let m = stats.marginal(o_i).min(stats.marginal(o_j));
    if m == 0 {
        return R::zero();
    }
    let n = stats.cooccurrences(o_i, o_j);
    density * real::<R>(n as f64) / real::<R>(m as f64)
}

// ---------------------------------------------------------------------------
// Scene graph

/// An edge between objects `a` and `b` (indices into [`SceneGraph::nodes`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphEdge<R> {
    pub a: usize,
    pub b: usize,
    pub weight: R,
}

/// Complete weighted graph over the scene's objects; weights sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneGraph<R> {
    /// Object ids in scene order.
    pub nodes: Vec<String>,
    pub edges: Vec<GraphEdge<R>>,
}

/// Build the scene graph: each unordered object pair gets weight proportional
/// to `P_sem * P_spa` at the pair's current center distance, normalized to sum
/// to one. When every product is zero the weights fall back to uniform.
pub fn build_graph<R: Real>(
    scene: &Scene<R>,
    table: &SemanticTable<R>,
    stats: &RelationStats<R>,
) -> Result<SceneGraph<R>> {
    if scene.objects.len() < 2 {
        return Err(Error::SceneTooSmall);
    }
    let labels: Vec<String> = scene.objects.iter().map(|o| o.label.clone()).collect();
    let mut edges = Vec::new();
    let mut total = R::zero();
    for i in 0..scene.objects.len() {
        for j in (i + 1)..scene.objects.len() {
            let p_sem = semantic_rel(table, &labels, &labels[i], &labels[j])?;
            let d = scene.objects[i]
                .footprint
                .center()
                .distance(scene.objects[j].footprint.center());
            let p_spa = spatial_rel(stats, &labels[i], &labels[j], d);
            let product = p_sem * p_spa;
            total = total + product;
            edges.push(GraphEdge {
                a: i,
                b: j,
                weight: product,
            });
        }
    }
    if total == R::zero() {
        let uniform = R::one() / count(edges.len());
        for e in &mut edges {
            e.weight = uniform;
        }
    } else {
        for e in &mut edges {
            e.weight = e.weight / total;
        }
    }
    Ok(SceneGraph {
        nodes: scene.objects.iter().map(|o| o.id.clone()).collect(),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table_chair_armchair_bed() -> SemanticTable<f64> {
        let mut t = SemanticTable::default();
        t.insert("chair", "armchair", 0.95, true).unwrap();
        t.insert("chair", "bed", 0.2, false).unwrap();
        t.insert("armchair", "bed", 0.4, false).unwrap();
        t.insert("bed", "bed", 0.0, true).unwrap();
        t
    }

    #[test]
    fn semantic_uniform_when_equal_strengths() {
        let mut t = SemanticTable::default();
        t.insert("a", "b", 0.5, false).unwrap();
        t.insert("a", "c", 0.5, false).unwrap();
        t.insert("b", "c", 0.5, false).unwrap();
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        for (i, j) in [("a", "b"), ("a", "c"), ("b", "c")] {
            assert_relative_eq!(
                semantic_rel(&t, &labels, i, j).unwrap(),
                1.0 / 3.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn semantic_synonym_override_matches_hand_evaluation() {
        let t = table_chair_armchair_bed();
        let labels: Vec<String> = ["chair", "armchair", "bed"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        // Non-synonym strengths are 0.2 and 0.4, so the synonym pair reads
        // their mean 0.3 and the normalizer is 0.9.
        assert_relative_eq!(
            semantic_rel(&t, &labels, "chair", "bed").unwrap(),
            0.2 / 0.9,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            semantic_rel(&t, &labels, "armchair", "bed").unwrap(),
            0.4 / 0.9,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            semantic_rel(&t, &labels, "chair", "armchair").unwrap(),
            0.3 / 0.9,
            epsilon = 1e-14
        );
    }

    #[test]
    fn semantic_single_pair_is_one() {
        let mut t = SemanticTable::default();
        t.insert("a", "b", 0.37, false).unwrap();
        let labels: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_relative_eq!(semantic_rel(&t, &labels, "a", "b").unwrap(), 1.0);
    }

    #[test]
    fn semantic_synonym_override_constant_property() {
        // All non-synonym strengths equal c, so every synonym pair gets exactly c.
        let mut t = SemanticTable::default();
        let c = 0.34;
        t.insert("x", "y", 0.9, true).unwrap();
        t.insert("x", "z", c, false).unwrap();
        t.insert("y", "z", c, false).unwrap();
        let labels: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let p_syn = semantic_rel(&t, &labels, "x", "y").unwrap();
        let p_plain = semantic_rel(&t, &labels, "x", "z").unwrap();
        assert_relative_eq!(p_syn, p_plain, epsilon = 1e-14);
    }

    #[test]
    fn semantic_unknown_label_errors() {
        let t = table_chair_armchair_bed();
        let labels: Vec<String> = ["chair", "bed"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(
            semantic_rel(&t, &labels, "chair", "sofa"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn cooccur_direct_arithmetic() {
        let mut stats = RelationStats::<f64>::new(0.5).unwrap();
        // N(a,b) = 5, N(a,c) = 5, so marginal(a) = 10, marginal(b) = 5.
        for _ in 0..5 {
            stats.record("a", "b", 1.0);
            stats.record("a", "c", 2.0);
        }
        assert_relative_eq!(cooccur_prob(&stats, "a", "b").unwrap(), 1.0);
        assert_relative_eq!(cooccur_prob(&stats, "b", "a").unwrap(), 1.0);
        assert_relative_eq!(cooccur_prob(&stats, "a", "c").unwrap(), 1.0);
        assert_relative_eq!(cooccur_prob(&stats, "b", "c").unwrap(), 0.0);
    }

    #[test]
    fn cooccur_single_pair_type_is_one() {
        let mut stats = RelationStats::<f64>::new(0.5).unwrap();
        for _ in 0..7 {
            stats.record("a", "b", 1.2);
        }
        assert_relative_eq!(cooccur_prob(&stats, "a", "b").unwrap(), 1.0);
    }

    #[test]
    fn spatial_density_arithmetic() {
        // Uniform histogram over [0, 4) with bin width 1 and P_co = 0.5.
        let mut stats = RelationStats::<f64>::new(1.0).unwrap();
        for d in [0.5, 1.5, 2.5, 3.5] {
            stats.record("a", "b", d);
        }
        for d in [0.5, 1.5, 2.5, 3.5] {
            stats.record("a", "c", d);
        }
        // marginal(a) = 8, marginal(b) = 4 -> P_co(a,b) = 1. Force 0.5 by
        // doubling b's marginal with a self-pair.
        for d in [0.5, 1.5, 2.5, 3.5] {
            stats.record("b", "b", d);
        }
        assert_relative_eq!(cooccur_prob(&stats, "a", "b").unwrap(), 0.5);
        assert_relative_eq!(spatial_rel(&stats, "a", "b", 1.5), 0.25 * 0.5, epsilon = 1e-12);
        // Beyond the last recorded bin.
        assert_relative_eq!(spatial_rel(&stats, "a", "b", 9.0), 0.0);
        // Unseen pair.
        assert_relative_eq!(spatial_rel(&stats, "a", "zzz", 1.0), 0.0);
    }

    #[test]
    fn stats_build_counts_and_permutation_invariance() {
        let scene_a = crate::scene::tests::demo_scene();
        let corpus = vec![scene_a.clone(), scene_a.clone()];
        let stats = stats_build(&corpus, 0.5).unwrap();
        assert_eq!(stats.cooccurrences("bed", "cabinet"), 2);
        let d = scene_a.objects[0]
            .footprint
            .center()
            .distance(scene_a.objects[1].footprint.center());
        let bin = (d / 0.5).floor() as usize;
        assert_eq!(stats.pair("bed", "cabinet").unwrap().hist[bin], 2);

        let mut ten = Vec::new();
        for _ in 0..10 {
            ten.push(scene_a.clone());
        }
        let s10 = stats_build(&ten, 0.5).unwrap();
        assert_eq!(s10.cooccurrences("bed", "cabinet"), 10);
    }

    #[test]
    fn stats_round_trip() {
        let mut stats = RelationStats::<f64>::new(0.25).unwrap();
        stats.record("a", "b", 1.0);
        stats.record("a", "b", 1.1);
        stats.record("b", "c", 0.2);
        let again = RelationStats::<f64>::from_json(&stats.to_json()).unwrap();
        assert_eq!(stats, again);
    }

    #[test]
    fn stats_rejects_inconsistent_histogram() {
        let text = r#"{"format_version":1,"bin_width":0.25,
            "pairs":[{"a":"a","b":"b","n":3,"hist":[1,1]}]}"#;
        assert!(matches!(
            RelationStats::<f64>::from_json(text),
            Err(Error::Validation(_))
        ));
    }

    fn graph_scene() -> (Scene<f64>, SemanticTable<f64>, RelationStats<f64>) {
        let scene = Scene::from_json(
            r#"{
                "room": {"width": 6.0, "height": 6.0},
                "robot": {"r_b": 0.3, "d_max": 0.8},
                "objects": [
                    {"id": "bed", "label": "bed", "pose": [2.0, 2.0, 0.0], "half_extents": [1.0, 0.7]},
                    {"id": "ns", "label": "nightstand", "pose": [3.5, 2.0, 0.0], "half_extents": [0.2, 0.2]},
                    {"id": "chair", "label": "chair", "pose": [2.0, 5.0, 0.0], "half_extents": [0.25, 0.25]}
                ]
            }"#,
        )
        .unwrap();
        let mut table = SemanticTable::default();
        table.insert("bed", "nightstand", 0.9, false).unwrap();
        table.insert("bed", "chair", 0.2, false).unwrap();
        table.insert("nightstand", "chair", 0.1, false).unwrap();
        let mut stats = RelationStats::new(0.5).unwrap();
        for _ in 0..5 {
            stats.record("bed", "nightstand", 1.5);
            stats.record("bed", "chair", 3.0);
            stats.record("nightstand", "chair", 3.3);
        }
        (scene, table, stats)
    }

    #[test]
    fn graph_weights_sum_to_one() {
        let (scene, table, stats) = graph_scene();
        let graph = build_graph(&scene, &table, &stats).unwrap();
        let sum: f64 = graph.edges.iter().map(|e| e.weight).sum();
        assert_relative_eq!(sum, 1.0, epsilon = 1e-9);
        assert_eq!(graph.edges.len(), 3);
    }

    #[test]
    fn graph_normalization_ratios() {
        // One pair with product 3x, two with 1x -> weights 0.6 / 0.2 / 0.2.
        let mut table = SemanticTable::default();
        table.insert("a", "b", 0.6, false).unwrap();
        table.insert("a", "c", 0.2, false).unwrap();
        table.insert("b", "c", 0.2, false).unwrap();
        let mut stats = RelationStats::new(1.0).unwrap();
        stats.record("a", "b", 0.5);
        stats.record("a", "c", 0.5);
        stats.record("b", "c", 0.5);
        let scene = Scene::from_json(
            r#"{
                "room": {"width": 4.0, "height": 4.0},
                "robot": {"r_b": 0.3, "d_max": 0.8},
                "objects": [
                    {"id": "a", "label": "a", "pose": [1.0, 2.0, 0.0], "half_extents": [0.2, 0.2]},
                    {"id": "b", "label": "b", "pose": [1.5, 2.0, 0.0], "half_extents": [0.2, 0.2]},
                    {"id": "c", "label": "c", "pose": [1.25, 2.4, 0.0], "half_extents": [0.2, 0.2]}
                ]
            }"#,
        )
        .unwrap();
        // All pairwise distances fall in bin 0, densities equal; the product
        // ratio is carried by the semantic strengths alone. P_co is 1 for all.
        let graph = build_graph(&scene, &table, &stats).unwrap();
        let w: BTreeMap<(usize, usize), f64> =
            graph.edges.iter().map(|e| ((e.a, e.b), e.weight)).collect();
        assert_relative_eq!(w[&(0, 1)], 0.6, epsilon = 1e-12);
        assert_relative_eq!(w[&(0, 2)], 0.2, epsilon = 1e-12);
        assert_relative_eq!(w[&(1, 2)], 0.2, epsilon = 1e-12);
    }

    #[test]
    fn graph_zero_products_fall_back_to_uniform() {
        let (scene, table, _) = graph_scene();
        // Stats from a corpus that never saw these labels together at any
        // distance: record them far outside the scene's current distances.
        let mut stats = RelationStats::new(0.25).unwrap();
        stats.record("bed", "nightstand", 30.0);
        stats.record("bed", "chair", 30.0);
        stats.record("nightstand", "chair", 30.0);
        let graph = build_graph(&scene, &table, &stats).unwrap();
        for e in &graph.edges {
            assert_relative_eq!(e.weight, 1.0 / 3.0, epsilon = 1e-12);
        }
    }
}
