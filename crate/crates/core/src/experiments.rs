//! Config-driven studies over generated and ingested networks.
//!
//! Every study derives its randomness from one master seed: sample `i` of
//! sweep point `k` draws from `stream(seed, (k << 32) | i)`, so results do not
//! depend on evaluation order and any single sample can be replayed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::edgelist;
use crate::error::{Error, Result};
use crate::evolution::{
    self, heuristic_hits, increment_lists, node_growth, trace_statistics, EntropyVariant, Heuristic, Objective,
    Pairing, StepRecord, TieBreak,
};
use crate::generators::{self, Model};
use crate::graph::Graph;
use crate::ingest::{self, CorrNetParams};
use crate::netstats::{self, pearson, spearman, OmegaConfig, StatVector};
use crate::quad::{self, EdgeSumConvention};

/// Mixed into the master seed for streams that must not collide with graph streams.
const TIE_SALT: u64 = 0x5851_f42d_4c95_7f2d;
const PICK_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// Attempts per sample before a model is declared unable to meet a study's preconditions.
const MAX_RESAMPLES: usize = 1000;

/// Where an output came from; written at the top of every CSV and JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    pub seed: Option<u64>,
    pub version: String,
}

impl Provenance {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Provenance {
            command: command.into(),
            seed,
            version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }

    fn csv_header(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!("# command: {}\n# seed: {seed}\n# version: {}\n", self.command, self.version)
    }
}

/// Serializes `rows` as CSV behind the provenance header.
pub fn to_csv<T: Serialize>(prov: &Provenance, rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let body = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(prov.csv_header() + &String::from_utf8(body).expect("csv output is UTF-8"))
}

/// Pretty JSON with the provenance under a `provenance` key.
pub fn to_json<T: Serialize>(prov: &Provenance, body: &T) -> Result<String> {
    let mut v = serde_json::to_value(body).map_err(|e| Error::Io(e.to_string()))?;
    match &mut v {
        serde_json::Value::Object(map) => {
            map.insert("provenance".into(), serde_json::to_value(prov).expect("provenance serializes"));
        }
        other => {
            *other = serde_json::json!({ "provenance": prov, "data": other.take() });
        }
    }
    Ok(serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))? + "\n")
}

fn sample_stream(seed: u64, point: usize, sample: usize) -> generators::StreamRng {
    generators::stream(seed, ((point as u64) << 32) | sample as u64)
}

/// Draws from `model` until `accept` holds; returns the graph and the number of rejections.
fn sample_until<R: Rng + ?Sized>(model: &Model, rng: &mut R, accept: impl Fn(&Graph) -> bool) -> Result<(Graph, usize)> {
    for rejected in 0..MAX_RESAMPLES {
        let g = model.sample(rng)?;
        if accept(&g) {
            return Ok((g, rejected));
        }
    }
    Err(Error::BadParam(format!(
        "{} produced no admissible graph in {MAX_RESAMPLES} draws",
        model.label()
    )))
}

/// `(mean, sample sd / sqrt(len))`; `None` where undefined.
pub fn mean_se(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (Some(mean), None);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

fn sweep_models(model: &Model, sweep: &[f64]) -> Result<Vec<(f64, Model)>> {
    if sweep.is_empty() {
        model.validate()?;
        let v = match *model {
            Model::Er { p, .. } => p,
            Model::Ws { k, .. } => k as f64,
            Model::Ba { m, .. } => m as f64,
        };
        return Ok(vec![(v, *model)]);
    }
    sweep.iter().map(|&v| Ok((v, model.with_sweep_value(v)?))).collect()
}

// ---------------------------------------------------------------------------
// Single-graph entropy report

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub m: usize,
    pub exact_l: Option<f64>,
    pub approx_l: Option<f64>,
    pub exact_n: Option<f64>,
    pub approx_n: Option<f64>,
    /// Error code for every field reported as null.
    pub reasons: BTreeMap<String, String>,
}

pub fn entropy_report(g: &Graph) -> EntropyReport {
    let mut reasons = BTreeMap::new();
    let mut field = |name: &str, r: Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            reasons.insert(name.to_string(), e.code().to_string());
            None
        }
    };
    let exact_l = field("exact_l", EntropyVariant::ExactL.entropy(g));
    let approx_l = field("approx_l", EntropyVariant::ApproxL.entropy(g));
    let exact_n = field("exact_n", EntropyVariant::ExactN.entropy(g));
    let approx_n = field("approx_n", EntropyVariant::ApproxN.entropy(g));
    EntropyReport {
        n: g.n(),
        m: g.m(),
        exact_l,
        approx_l,
        exact_n,
        approx_n,
        reasons,
    }
}

pub fn run_entropy(input: &Path) -> Result<EntropyReport> {
    Ok(entropy_report(&edgelist::read(input)?))
}

// ---------------------------------------------------------------------------
// Correlation study

/// The four entropies of one graph plus its size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySample {
    pub m: usize,
    /// Non-isolated node count.
    pub n_active: usize,
    pub exact_l: f64,
    pub approx_l: f64,
    pub exact_n: f64,
    pub approx_n: f64,
}

impl EntropySample {
    pub fn of(g: &Graph, convention: EdgeSumConvention) -> Result<Self> {
        Ok(EntropySample {
            m: g.m(),
            n_active: g.non_isolated_count(),
            exact_l: EntropyVariant::ExactL.entropy(g)?,
            approx_l: quad::approx_entropy_laplacian(g)?,
            exact_n: EntropyVariant::ExactN.entropy(g)?,
            approx_n: quad::approx_entropy_normalized_with(g, convention)?,
        })
    }

    fn value(&self, v: EntropyVariant) -> f64 {
        match v {
            EntropyVariant::ExactL => self.exact_l,
            EntropyVariant::ApproxL => self.approx_l,
            EntropyVariant::ExactN => self.exact_n,
            EntropyVariant::ApproxN => self.approx_n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeCorrelation {
    pub variant: EntropyVariant,
    pub pearson_edges: Option<f64>,
    pub spearman_edges: Option<f64>,
    pub pearson_nodes: Option<f64>,
    pub spearman_nodes: Option<f64>,
}

/// Correlations for one parameter setting. Coefficients are `None` where a
/// series has zero variance (for instance node counts at fixed `n`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub label: String,
    pub graphs: usize,
    /// Draws rejected for violating a variant's preconditions.
    pub resampled: usize,
    /// Row/column order: exact_l, approx_l, exact_n, approx_n.
    pub variants: [EntropyVariant; 4],
    pub matrix: [[Option<f64>; 4]; 4],
    pub versus_size: Vec<SizeCorrelation>,
}

impl CorrelationReport {
    pub fn from_samples(label: String, samples: &[EntropySample], resampled: usize) -> Self {
        let variants = EntropyVariant::ALL;
        let series: Vec<Vec<f64>> = variants.iter().map(|&v| samples.iter().map(|s| s.value(v)).collect()).collect();
        let mut matrix = [[None; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                matrix[i][j] = if i == j {
                    pearson(&series[i], &series[i]).ok().map(|_| 1.0)
                } else {
                    pearson(&series[i], &series[j]).ok()
                };
            }
        }
        let edges: Vec<f64> = samples.iter().map(|s| s.m as f64).collect();
        let nodes: Vec<f64> = samples.iter().map(|s| s.n_active as f64).collect();
        let versus_size = variants
            .iter()
            .zip(&series)
            .map(|(&variant, s)| SizeCorrelation {
                variant,
                pearson_edges: pearson(s, &edges).ok(),
                spearman_edges: spearman(s, &edges).ok(),
                pearson_nodes: pearson(s, &nodes).ok(),
                spearman_nodes: spearman(s, &nodes).ok(),
            })
            .collect();
        CorrelationReport {
            label,
            graphs: samples.len(),
            resampled,
            variants,
            matrix,
            versus_size,
        }
    }

    pub fn coefficient(&self, a: EntropyVariant, b: EntropyVariant) -> Option<f64> {
        let idx = |v| self.variants.iter().position(|&w| w == v).expect("all variants present");
        self.matrix[idx(a)][idx(b)]
    }

    pub fn versus(&self, v: EntropyVariant) -> &SizeCorrelation {
        self.versus_size.iter().find(|s| s.variant == v).expect("all variants present")
    }
}

/// Entropy samples for `graphs` draws from `model`; draws with isolated nodes
/// (where the normalized entropies are undefined) are redrawn.
pub fn sample_entropies(model: &Model, graphs: usize, seed: u64, point: usize, convention: EdgeSumConvention) -> Result<(Vec<EntropySample>, usize)> {
    let mut resampled = 0;
    let mut out = Vec::with_capacity(graphs);
    for i in 0..graphs {
        let mut rng = sample_stream(seed, point, i);
        let (g, r) = sample_until(model, &mut rng, |g| g.m() > 0 && g.isolated_node().is_none())?;
        resampled += r;
        out.push(EntropySample::of(&g, convention)?);
    }
    Ok((out, resampled))
}

pub fn run_correlation_study(model: &Model, sweep: &[f64], graphs: usize, seed: u64, convention: EdgeSumConvention) -> Result<Vec<CorrelationReport>> {
    if graphs < 2 {
        return Err(Error::BadParam("correlations need at least two graphs per setting".into()));
    }
    sweep_models(model, sweep)?
        .into_iter()
        .enumerate()
        .map(|(k, (_, m))| {
            let (samples, resampled) = sample_entropies(&m, graphs, seed, k, convention)?;
            Ok(CorrelationReport::from_samples(m.label(), &samples, resampled))
        })
        .collect()
}

/// One row per graph: the entropy-versus-edges scatter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyVsEdgesRow {
    pub param: f64,
    pub graph: usize,
    pub m: usize,
    pub n_active: usize,
    pub exact_l: f64,
    pub approx_l: f64,
    pub exact_n: f64,
    pub approx_n: f64,
}

pub fn run_entropy_vs_edges(model: &Model, sweep: &[f64], graphs: usize, seed: u64) -> Result<Vec<EntropyVsEdgesRow>> {
    let mut rows = Vec::new();
    for (k, (param, m)) in sweep_models(model, sweep)?.into_iter().enumerate() {
        let (samples, _) = sample_entropies(&m, graphs, seed, k, EdgeSumConvention::default())?;
        rows.extend(samples.iter().enumerate().map(|(i, s)| EntropyVsEdgesRow {
            param,
            graph: i,
            m: s.m,
            n_active: s.n_active,
            exact_l: s.exact_l,
            approx_l: s.approx_l,
            exact_n: s.exact_n,
            approx_n: s.approx_n,
        }));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Predictability study

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictabilityRow {
    pub param: f64,
    pub pairing: Pairing,
    pub ties: TieBreak,
    pub trials: usize,
    pub mean_prd_max: Option<f64>,
    pub se_prd_max: Option<f64>,
    /// Trials excluded from the Prd_M mean for a non-positive denominator.
    pub degenerate_max: usize,
    pub mean_prd_min: Option<f64>,
    pub se_prd_min: Option<f64>,
    pub degenerate_min: usize,
    pub resampled: usize,
}

/// Per sweep value and pairing, mean predictability errors over `trials` graphs.
/// Both pairings score the same graphs. A graph with a single absent edge
/// contributes zero error to both means.
pub fn run_predictability_study(
    model: &Model,
    sweep: &[f64],
    trials: usize,
    pairings: &[Pairing],
    ties: TieBreak,
    seed: u64,
) -> Result<Vec<PredictabilityRow>> {
    if trials == 0 {
        return Err(Error::BadParam("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for (k, (param, m)) in sweep_models(model, sweep)?.into_iter().enumerate() {
        let mut acc: Vec<(Vec<f64>, Vec<f64>, usize, usize)> = vec![Default::default(); pairings.len()];
        let mut resampled = 0;
        for t in 0..trials {
            let mut rng = sample_stream(seed, k, t);
            let (g, r) = sample_until(&m, &mut rng, |g| {
                g.m() > 0 && g.isolated_node().is_none() && !g.complement_edges().is_empty()
            })?;
            resampled += r;
            for (pairing, a) in pairings.iter().zip(acc.iter_mut()) {
                let lists = increment_lists(&g, *pairing)?;
                if lists.candidates.len() == 1 {
                    a.0.push(0.0);
                    a.1.push(0.0);
                    continue;
                }
                // Tie draws get their own stream per pairing, independent of the graph stream.
                let mut tie_rng = generators::stream(seed ^ TIE_SALT ^ *pairing as u64, ((k as u64) << 32) | t as u64);
                let (prd_max, prd_min) = lists.errors(ties, &mut tie_rng);
                match prd_max {
                    Ok(v) => a.0.push(v),
                    Err(Error::DegenerateRatio(_)) => a.2 += 1,
                    Err(e) => return Err(e),
                }
                match prd_min {
                    Ok(v) => a.1.push(v),
                    Err(Error::DegenerateRatio(_)) => a.3 += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        for (pairing, (maxs, mins, dmax, dmin)) in pairings.iter().zip(acc) {
            let (mean_prd_max, se_prd_max) = mean_se(&maxs);
            let (mean_prd_min, se_prd_min) = mean_se(&mins);
            rows.push(PredictabilityRow {
                param,
                pairing: *pairing,
                ties,
                trials,
                mean_prd_max,
                se_prd_max,
                degenerate_max: dmax,
                mean_prd_min,
                se_prd_min,
                degenerate_min: dmin,
                resampled,
            });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Heuristic accuracy

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicRow {
    pub param: f64,
    pub heuristic: Heuristic,
    pub trials: usize,
    pub accuracy: f64,
    pub se: Option<f64>,
}

/// Accuracy of each heuristic against the exact Laplacian argmax set. All
/// heuristics are scored on the same graphs with the same pick stream.
pub fn run_heuristic_study(model: &Model, sweep: &[f64], trials: usize, heuristics: &[Heuristic], seed: u64) -> Result<Vec<HeuristicRow>> {
    if trials == 0 {
        return Err(Error::BadParam("trials must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for (k, (param, m)) in sweep_models(model, sweep)?.into_iter().enumerate() {
        let mut hits = vec![Vec::with_capacity(trials); heuristics.len()];
        for t in 0..trials {
            let mut rng = sample_stream(seed, k, t);
            let (g, _) = sample_until(&m, &mut rng, |g| g.m() > 0 && !g.complement_edges().is_empty())?;
            let pick = (seed ^ PICK_SALT, ((k as u64) << 32) | t as u64);
            for (h, hit) in hits.iter_mut().zip(heuristic_hits(&g, heuristics, pick)?) {
                h.push(if hit { 1.0 } else { 0.0 });
            }
        }
        for (&heuristic, h) in heuristics.iter().zip(&hits) {
            let (mean, se) = mean_se(h);
            rows.push(HeuristicRow {
                param,
                heuristic,
                trials,
                accuracy: mean.unwrap_or(0.0),
                se,
            });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Small-worldness sweep

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallWorldRow {
    pub p: f64,
    pub instances: usize,
    pub omega: f64,
    pub omega_se: Option<f64>,
    pub avg_path_length: f64,
    pub clustering: f64,
}

/// `ω` of WS(n, k, p) averaged over `instances` connected draws per `p`.
pub fn run_smallworld(n: usize, k: usize, ps: &[f64], instances: usize, cfg: &OmegaConfig, seed: u64) -> Result<Vec<SmallWorldRow>> {
    if instances == 0 {
        return Err(Error::BadParam("instances must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for (idx, &p) in ps.iter().enumerate() {
        let model = Model::Ws { n, k, p };
        let (mut omegas, mut lens, mut clust) = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..instances {
            let mut rng = sample_stream(seed, idx, i);
            let (g, _) = sample_until(&model, &mut rng, Graph::is_connected)?;
            let ref_seed = rng.random();
            omegas.push(netstats::small_worldness_omega(&g, cfg, ref_seed)?);
            lens.push(netstats::avg_shortest_path_length(&g)?);
            clust.push(netstats::avg_clustering_coefficient(&g));
        }
        let (omega, omega_se) = mean_se(&omegas);
        rows.push(SmallWorldRow {
            p,
            instances,
            omega: omega.expect("instances >= 1"),
            omega_se,
            avg_path_length: mean_se(&lens).0.expect("instances >= 1"),
            clustering: mean_se(&clust).0.expect("instances >= 1"),
        });
    }
    Ok(rows)
}

/// First `p` (linearly interpolated between sweep points) where `ω` turns non-negative.
pub fn omega_zero_crossing(rows: &[SmallWorldRow]) -> Option<f64> {
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        (a.omega < 0.0 && b.omega >= 0.0).then(|| {
            // Interpolate in log p, matching the sweep spacing.
            let t = -a.omega / (b.omega - a.omega);
            (a.p.ln() + t * (b.p.ln() - a.p.ln())).exp()
        })
    })
}

/// `count` values log-spaced from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Growth

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    Edge,
    Node,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub mode: GrowthMode,
    pub variant: EntropyVariant,
    pub objective: Objective,
    pub steps: Vec<GrowthStepReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthStepReport {
    #[serde(flatten)]
    pub record: StepRecord,
    pub stats: StatVector,
}

pub fn growth_report(mode: GrowthMode, trace: &evolution::GrowthTrace) -> GrowthReport {
    GrowthReport {
        mode,
        variant: trace.variant,
        objective: trace.objective,
        steps: trace
            .records()
            .into_iter()
            .zip(trace_statistics(trace))
            .map(|(record, stats)| GrowthStepReport { record, stats })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Ingestion

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestRow {
    pub window_end: usize,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestReport {
    pub networks: usize,
    /// Networks that are connected over all assets.
    pub retained: usize,
    pub manifest: Vec<ManifestRow>,
    /// Correlations over the retained networks, when requested and defined.
    pub analysis: Option<CorrelationReport>,
}

/// Builds every window network; files are written by [`write_ingest`].
pub fn run_ingest(prices: &Path, params: &CorrNetParams, analyze: bool) -> Result<(IngestReport, Vec<(usize, Graph)>)> {
    params.validate()?;
    let panel = ingest::load_price_csv(prices)?;
    let ends: Vec<usize> = ingest::window_ends(&panel, params)?.collect();
    let graphs = ingest::network_sequence(&panel, params)?;
    let a = panel.n_assets();
    let manifest: Vec<ManifestRow> = ends
        .iter()
        .zip(&graphs)
        .map(|(&t, g)| ManifestRow {
            window_end: t,
            n: g.n(),
            m: g.m(),
            connected: ingest::is_connected_fullsize(g, a),
        })
        .collect();
    let kept: Vec<&Graph> = graphs.iter().filter(|g| ingest::is_connected_fullsize(g, a)).collect();
    let analysis = if analyze && kept.len() >= 2 {
        let samples = kept
            .iter()
            .map(|g| EntropySample::of(g, EdgeSumConvention::default()))
            .collect::<Result<Vec<_>>>()?;
        Some(CorrelationReport::from_samples(format!("{}", prices.display()), &samples, 0))
    } else {
        None
    };
    let report = IngestReport {
        networks: graphs.len(),
        retained: kept.len(),
        manifest,
        analysis,
    };
    Ok((report, ends.into_iter().zip(graphs).collect()))
}

/// Writes `window_<end>.edges` per network and `manifest.csv` into `dir`.
pub fn write_ingest(dir: &Path, prov: &Provenance, report: &IngestReport, graphs: &[(usize, Graph)]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let comments = [format!("command: {}", prov.command), format!("version: {}", prov.version)];
    for (t, g) in graphs {
        let mut c = comments.to_vec();
        c.push(format!("window_end: {t}"));
        edgelist::write(&dir.join(format!("window_{t:05}.edges")), g, &c)?;
    }
    std::fs::write(dir.join("manifest.csv"), to_csv(prov, &report.manifest)?)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Config-driven dispatch

fn default_trials() -> usize {
    50
}

fn default_attach() -> usize {
    1
}

fn default_instances() -> usize {
    10
}

fn all_heuristics() -> Vec<Heuristic> {
    Heuristic::ALL.to_vec()
}

fn both_pairings() -> Vec<Pairing> {
    vec![Pairing::Laplacian, Pairing::Normalized]
}

fn default_ps() -> Vec<f64> {
    log_space(1e-3, 1.0, 16)
}

fn default_window() -> usize {
    CorrNetParams::DEFAULT_WINDOW
}

/// One experiment, as parsed from a TOML config or assembled by the CLI.
/// Stochastic experiments require `seed`; there is no clock-based fallback.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentConfig {
    Entropy {
        input: PathBuf,
    },
    Generate {
        model: Model,
        seed: u64,
    },
    Grow {
        mode: GrowthMode,
        variant: EntropyVariant,
        objective: Objective,
        steps: usize,
        #[serde(default = "default_attach")]
        attach: usize,
        /// Edge-mode seed graph; a path on 8 nodes when absent.
        #[serde(default)]
        input: Option<PathBuf>,
        seed: u64,
    },
    Heuristics {
        model: Model,
        #[serde(default)]
        sweep: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "all_heuristics")]
        heuristics: Vec<Heuristic>,
        seed: u64,
    },
    Predictability {
        model: Model,
        #[serde(default)]
        sweep: Vec<f64>,
        #[serde(default = "default_trials")]
        trials: usize,
        #[serde(default = "both_pairings")]
        pairings: Vec<Pairing>,
        #[serde(default)]
        ties: TieBreak,
        seed: u64,
    },
    Correlate {
        model: Model,
        #[serde(default)]
        sweep: Vec<f64>,
        graphs: usize,
        #[serde(default)]
        convention: EdgeSumConvention,
        seed: u64,
    },
    EntropyVsEdges {
        model: Model,
        #[serde(default)]
        sweep: Vec<f64>,
        graphs: usize,
        seed: u64,
    },
    Smallworld {
        n: usize,
        k: usize,
        #[serde(default = "default_ps")]
        ps: Vec<f64>,
        #[serde(default = "default_instances")]
        instances: usize,
        #[serde(default)]
        omega: OmegaConfigToml,
        seed: u64,
    },
    IngestAnalyze {
        prices: PathBuf,
        #[serde(default = "default_window")]
        window: usize,
        threshold: f64,
        out_dir: PathBuf,
        #[serde(default)]
        analyze: bool,
    },
}

/// TOML-facing mirror of [`OmegaConfig`] with per-field defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OmegaConfigToml {
    pub references: usize,
    pub swaps_per_edge: usize,
}

impl Default for OmegaConfigToml {
    fn default() -> Self {
        let d = OmegaConfig::default();
        OmegaConfigToml {
            references: d.references,
            swaps_per_edge: d.swaps_per_edge,
        }
    }
}

impl From<OmegaConfigToml> for OmegaConfig {
    fn from(c: OmegaConfigToml) -> Self {
        OmegaConfig {
            references: c.references,
            swaps_per_edge: c.swaps_per_edge,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::BadParam(format!("config: {}", e.message())))
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ExperimentConfig::Entropy { .. } | ExperimentConfig::IngestAnalyze { .. } => None,
            ExperimentConfig::Generate { seed, .. }
            | ExperimentConfig::Grow { seed, .. }
            | ExperimentConfig::Heuristics { seed, .. }
            | ExperimentConfig::Predictability { seed, .. }
            | ExperimentConfig::Correlate { seed, .. }
            | ExperimentConfig::EntropyVsEdges { seed, .. }
            | ExperimentConfig::Smallworld { seed, .. } => Some(*seed),
        }
    }

    /// Runs the experiment and renders its primary output. Ingestion also
    /// writes its network files as a side effect.
    pub fn execute(&self, prov: &Provenance) -> Result<String> {
        match self {
            ExperimentConfig::Entropy { input } => to_json(prov, &run_entropy(input)?),
            ExperimentConfig::Generate { model, seed } => {
                let g = model.sample(&mut generators::stream(*seed, 0))?;
                let comments = [
                    format!("command: {}", prov.command),
                    format!("seed: {seed}"),
                    format!("version: {}", prov.version),
                    format!("model: {}", model.label()),
                ];
                Ok(edgelist::to_string(&g, &comments))
            }
            ExperimentConfig::Grow {
                mode,
                variant,
                objective,
                steps,
                attach,
                input,
                seed,
            } => {
                let trace = match mode {
                    GrowthMode::Edge => {
                        let g = match input {
                            Some(p) => edgelist::read(p)?,
                            None => generators::path_graph(8),
                        };
                        evolution::edge_growth(&g, *steps, *objective, *variant, *seed)?
                    }
                    GrowthMode::Node => node_growth(*steps, *attach, *objective, *variant, *seed)?,
                };
                to_json(prov, &growth_report(*mode, &trace))
            }
            ExperimentConfig::Heuristics {
                model,
                sweep,
                trials,
                heuristics,
                seed,
            } => to_csv(prov, &run_heuristic_study(model, sweep, *trials, heuristics, *seed)?),
            ExperimentConfig::Predictability {
                model,
                sweep,
                trials,
                pairings,
                ties,
                seed,
            } => to_csv(prov, &run_predictability_study(model, sweep, *trials, pairings, *ties, *seed)?),
            ExperimentConfig::Correlate {
                model,
                sweep,
                graphs,
                convention,
                seed,
            } => {
                let reports = run_correlation_study(model, sweep, *graphs, *seed, *convention)?;
                to_json(prov, &serde_json::json!({ "settings": reports }))
            }
            ExperimentConfig::EntropyVsEdges {
                model,
                sweep,
                graphs,
                seed,
            } => to_csv(prov, &run_entropy_vs_edges(model, sweep, *graphs, *seed)?),
            ExperimentConfig::Smallworld {
                n,
                k,
                ps,
                instances,
                omega,
                seed,
            } => to_csv(prov, &run_smallworld(*n, *k, ps, *instances, &(*omega).into(), *seed)?),
            ExperimentConfig::IngestAnalyze {
                prices,
                window,
                threshold,
                out_dir,
                analyze,
            } => {
                let params = CorrNetParams::new(*window, *threshold)?;
                let (report, graphs) = run_ingest(prices, &params, *analyze)?;
                write_ingest(out_dir, prov, &report, &graphs)?;
                to_json(prov, &report)
            }
        }
    }
}
