use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use viralcm::analytic::{analyze, bernoulli_threshold, branching_crosscheck, build_genfns, AnalyticResult, BranchingCheck};
use viralcm::diffusion::all_reach;
use viralcm::estimators::{estimate_fractions, evaluate_campaign, CampaignConfig, EstimationReport};
use viralcm::graph::{DegreeChecksums, EnhancedGraph};
use viralcm::population::{JointDegreeLaw, Moments};
use viralcm::sample::DegreeSample;

use crate::config::{RunConfig, TransKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: String,
    schema_version: u32,
    seed: u64,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn write_json<T: Serialize>(path: &Path, command: &str, cfg: &RunConfig, body: T) -> Result<()> {
    let env = Envelope { schema: format!("viralcm.{command}"), schema_version: SCHEMA_VERSION, seed: cfg.seed, config: cfg, body };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `#` lines carrying the schema and the full configuration.
fn csv_provenance(command: &str, cfg: &RunConfig) -> String {
    let mut s = format!("# viralcm.{command} schema_version={SCHEMA_VERSION}\n");
    for line in cfg.to_file_text().lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    s
}

fn out_dir(cfg: &RunConfig) -> Result<&Path> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    Ok(&cfg.out)
}

#[derive(Serialize)]
struct SimulateBody {
    n: usize,
    alpha_hat_sim: f64,
    alpha_bar_hat_sim: f64,
    good_pioneers: usize,
    good_reach_cv: Option<f64>,
    checksums: DegreeChecksums,
    histogram: Vec<(f64, u64)>,
    params: Params,
}

#[derive(Serialize)]
struct Params {
    gamma: f64,
    floor: f64,
}

/// Builds one graph, computes every pioneer's reach and writes
/// `simulate.json` and `reach_histogram.csv` (plus `edges.txt` on request).
pub fn simulate(cfg: &RunConfig, dump_edges: bool) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let joint = cfg.joint_law()?;
    let sample = joint.sample(cfg.n, cfg.seed)?;
    let graph = EnhancedGraph::build(&sample, cfg.seed)?;
    let outcome = all_reach(graph.digraph(), cfg.gamma, cfg.floor)?;
    let dir = out_dir(cfg)?;
    let mut written = Vec::new();

    let json = dir.join("simulate.json");
    write_json(
        &json,
        "simulate",
        cfg,
        SimulateBody {
            n: outcome.n,
            alpha_hat_sim: outcome.alpha_hat_sim,
            alpha_bar_hat_sim: outcome.alpha_bar_hat_sim,
            good_pioneers: outcome.good_pioneers.len(),
            good_reach_cv: outcome.good_reach_cv(),
            checksums: graph.degree_checksums(),
            histogram: outcome.reach_histogram.clone(),
            params: Params { gamma: cfg.gamma, floor: cfg.floor },
        },
    )?;
    written.push(json);

    let csv = dir.join("reach_histogram.csv");
    let mut text = csv_provenance("simulate", cfg);
    text.push_str("size_fraction,count\n");
    for (f, c) in &outcome.reach_histogram {
        text.push_str(&format!("{f},{c}\n"));
    }
    fs::write(&csv, text).with_context(|| format!("writing {}", csv.display()))?;
    written.push(csv);

    if dump_edges {
        let path = dir.join("edges.txt");
        let mut w = std::io::BufWriter::new(fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        graph.write_edge_list(&mut w)?;
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub alpha_sim: f64,
    pub alpha_bar_sim: f64,
    pub alpha_semianalytic: Option<f64>,
    pub alpha_bar_semianalytic: Option<f64>,
    pub alpha_analytic: Option<f64>,
    pub alpha_bar_analytic: Option<f64>,
}

pub const SWEEP_COLUMNS: &str =
    "param,alpha_sim,alpha_bar_sim,alpha_semianalytic,alpha_bar_semianalytic,alpha_analytic,alpha_bar_analytic";

/// Rows in grid order. Point `i` uses seed `seed ^ i` for both the sample
/// and the matching.
pub fn sweep_rows(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let degree = cfg.degree_law()?;
    let points = cfg.grid_or_default().points();
    points
        .par_iter()
        .enumerate()
        .map(|(i, &param)| {
            let joint = JointDegreeLaw::new(degree.clone(), cfg.transmission_at(Some(param)))?;
            let seed = cfg.seed ^ i as u64;
            let sample = joint.sample(cfg.n, seed)?;
            let graph = EnhancedGraph::build(&sample, seed)?;
            let sim = all_reach(graph.digraph(), cfg.gamma, cfg.floor)?;
            let semi = estimate_fractions(&sample).ok();
            let analytic = match cfg.trans {
                TransKind::Coupon => None,
                _ => Some(analyze(&build_genfns(&joint))?),
            };
            Ok(SweepRow {
                param,
                alpha_sim: sim.alpha_hat_sim,
                alpha_bar_sim: sim.alpha_bar_hat_sim,
                alpha_semianalytic: semi.map(|e| e.alpha_hat),
                alpha_bar_semianalytic: semi.map(|e| e.alpha_bar_hat),
                alpha_analytic: analytic.as_ref().map(|r| r.alpha),
                alpha_bar_analytic: analytic.as_ref().map(|r| r.alpha_bar),
            })
        })
        .collect()
}

/// Writes `sweep.csv`.
pub fn sweep(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let rows = sweep_rows(cfg)?;
    let dir = out_dir(cfg)?;
    let path = dir.join("sweep.csv");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let mut text = csv_provenance("sweep", cfg);
    text.push_str(SWEEP_COLUMNS);
    text.push('\n');
    for r in &rows {
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.param,
            r.alpha_sim,
            r.alpha_bar_sim,
            opt(r.alpha_semianalytic),
            opt(r.alpha_bar_semianalytic),
            opt(r.alpha_analytic),
            opt(r.alpha_bar_analytic)
        ));
    }
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(vec![path])
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub moments: Moments,
    /// Bernoulli probability above which the degree law can go viral.
    pub bernoulli_threshold: f64,
    pub result: AnalyticResult,
    pub branching: Option<BranchingCheck>,
    /// Why the branching cross-check is missing, when it is.
    pub branching_note: Option<String>,
}

pub fn analysis_report(cfg: &RunConfig) -> Result<AnalysisReport> {
    cfg.validate()?;
    let joint = cfg.joint_law()?;
    let result = analyze(&build_genfns(&joint))?;
    let (branching, branching_note) = match branching_crosscheck(&joint) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(AnalysisReport {
        moments: joint.moments(),
        bernoulli_threshold: bernoulli_threshold(joint.degree()),
        result,
        branching,
        branching_note,
    })
}

/// Writes `analytic.json`.
pub fn analytic(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let report = analysis_report(cfg)?;
    let path = out_dir(cfg)?.join("analytic.json");
    write_json(&path, "analytic", cfg, &report)?;
    Ok(vec![path])
}

#[derive(Serialize)]
struct EvaluateBody<'a> {
    input: &'a Path,
    report: EstimationReport,
}

pub fn campaign_config(cfg: &RunConfig) -> CampaignConfig {
    CampaignConfig {
        z: cfg.z,
        cost_per_pioneer: cfg.cost_per_pioneer,
        value_per_influenced: cfg.value_per_influenced,
        ..CampaignConfig::default()
    }
}

/// Reads a pioneer CSV and writes `evaluate.json`.
pub fn evaluate(cfg: &RunConfig, csv: &Path) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    let file = fs::File::open(csv).with_context(|| format!("opening {}", csv.display()))?;
    let sample = DegreeSample::read_csv(file).with_context(|| format!("reading {}", csv.display()))?;
    let report = evaluate_campaign(&sample, &campaign_config(cfg));
    let path = out_dir(cfg)?.join("evaluate.json");
    write_json(&path, "evaluate", cfg, EvaluateBody { input: csv, report })?;
    Ok(vec![path])
}
