//! The `pbc` command line: `synth`, `build-index`, `rerank`, `evaluate`.
//!
//! Every subcommand accepts `--config <file>` with `key=value` lines whose
//! keys are long flag names (`L=100`, `stages=second`). Flags given on the
//! command line win over the file. The resolved configuration is echoed to
//! stderr before any work starts.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use crate::baseline::{Depth, Metric, RankingList, SimilarityMatrix, SCORES_MAGIC};
use crate::context::Weighting;
use crate::dataset::{generate_synthetic, load_features, save_features, FeatureSet, FileFormat, SynthConfig};
use crate::eval::{load_rankings, timing_report, EvalReport, GroundTruth, TimingReport};
use crate::index::{build_index, build_index_from_scores, ContextSide, GalleryIndex, PbcParams, SelfRank, Stages};
use crate::ranksim::MeasureKind;
use crate::rerank::{QueryResult, Reranker};

pub const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (index format 1, feature format 1, score format 1)"
);

#[derive(Debug, Parser)]
#[command(name = "pbc", version = LONG_VERSION, about = "Progressive bilateral-context re-ranking")]
pub struct Cli {
    /// `key=value` file of defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Worker threads for index build and batch queries (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic gallery, probe set and ground truth.
    Synth(SynthArgs),
    /// Build the offline gallery index.
    BuildIndex(BuildArgs),
    /// Re-rank probes against an index.
    Rerank(RerankArgs),
    /// Score ranking files against ground truth.
    Evaluate(EvalArgs),
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SynthArgs {
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = SynthConfig::default().num_ids)]
    pub num_ids: usize,
    #[arg(long, default_value_t = SynthConfig::default().gallery_per_id)]
    pub gallery_per_id: usize,
    #[arg(long, default_value_t = SynthConfig::default().probes_per_id)]
    pub probes_per_id: usize,
    #[arg(long, default_value_t = SynthConfig::default().dim)]
    pub dim: usize,
    #[arg(long, default_value_t = SynthConfig::default().intra_id_noise)]
    pub noise: f64,
    #[arg(long, default_value_t = SynthConfig::default().camera_offset_scale)]
    pub camera_offset: f64,
    #[arg(long, default_value_t = SynthConfig::default().num_cameras)]
    pub num_cameras: usize,
    #[arg(long, default_value_t = SynthConfig::default().seed)]
    pub seed: u64,
    /// Output feature format: csv or binary.
    #[arg(long, default_value = "csv")]
    pub format: FileFormat,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BuildArgs {
    /// Gallery feature file (CSV or binary).
    #[arg(
        long,
        value_name = "FILE",
        required_unless_present = "scores",
        conflicts_with = "scores"
    )]
    pub gallery: Option<PathBuf>,
    /// Precomputed `N × N` gallery score matrix instead of features.
    #[arg(long, value_name = "FILE")]
    pub scores: Option<PathBuf>,
    /// Gallery ids for `--scores`, one per line (default g0, g1, ...).
    #[arg(long, value_name = "FILE", requires = "scores")]
    pub gallery_ids: Option<PathBuf>,
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    #[arg(long, default_value_t = PbcParams::default().k)]
    pub k: usize,
    #[arg(long, default_value_t = PbcParams::default().k0)]
    pub k0: usize,
    /// `full` or a cap `D` on stored rank positions.
    #[arg(long, default_value = "full")]
    pub depth: Depth,
    #[arg(long, default_value = "reliability")]
    pub weighting: Weighting,
    /// Whether a gallery sample counts as its own nearest neighbor:
    /// included or excluded.
    #[arg(long, default_value = "included")]
    pub self_rank: SelfRank,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct RerankArgs {
    #[arg(long, value_name = "FILE")]
    pub index: PathBuf,
    /// Probe features, or a `probes × N` score matrix.
    #[arg(long, value_name = "FILE")]
    pub queries: PathBuf,
    /// Gallery features; needed when the queries are features.
    #[arg(long, value_name = "FILE")]
    pub gallery: Option<PathBuf>,
    /// Probe ids for score-matrix queries, one per line (default q0, q1, ...).
    #[arg(long, value_name = "FILE")]
    pub query_ids: Option<PathBuf>,
    #[arg(long = "L", alias = "top-l", default_value_t = PbcParams::default().top_l)]
    pub top_l: usize,
    #[arg(long, default_value = "progressive")]
    pub stages: Stages,
    #[arg(long, default_value = "combined")]
    pub measure: MeasureKind,
    #[arg(long, default_value = "bilateral")]
    pub context_side: ContextSide,
    /// Must match the index; defaults to the index's value.
    #[arg(long)]
    pub weighting: Option<Weighting>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub k0: Option<usize>,
    #[arg(long)]
    pub depth: Option<Depth>,
    #[arg(long)]
    pub self_rank: Option<SelfRank>,
    /// Gallery ids written per probe (default: the whole list).
    #[arg(long, value_name = "K")]
    pub topk_out: Option<usize>,
    /// Rankings output (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Per-candidate `probe_id g_id stage1 stage2` dump.
    #[arg(long, value_name = "FILE")]
    pub scores_out: Option<PathBuf>,
    /// Per-query `probe_id online_us total_us` lines.
    #[arg(long, value_name = "FILE")]
    pub timing_out: Option<PathBuf>,
    /// Emit the initial lists without re-ranking.
    #[arg(long)]
    pub baseline_only: bool,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EvalArgs {
    /// Rankings to score.
    #[arg(long, value_name = "FILE")]
    pub rankings: PathBuf,
    /// Baseline rankings to report alongside.
    #[arg(long, value_name = "FILE")]
    pub baseline: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub ground_truth: PathBuf,
    /// Source of gallery ids: a feature file, or an index with `--index`.
    #[arg(long, value_name = "FILE", required_unless_present = "index")]
    pub gallery: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub max_k: usize,
    /// Per-query timing file written by `rerank --timing-out`.
    #[arg(long, value_name = "FILE")]
    pub timing: Option<PathBuf>,
    #[arg(long)]
    pub build_seconds: Option<f64>,
    /// table, kv or both.
    #[arg(long, default_value = "both")]
    pub format: String,
    /// Report output (default: stdout).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// Entry point for the binary: parses `argv` (with config injection) and
/// runs the subcommand.
pub fn main_with_args(argv: Vec<String>) -> anyhow::Result<()> {
    let argv = inject_config(argv)?;
    let cli = Cli::try_parse_from(&argv).unwrap_or_else(|e| e.exit());
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::BuildIndex(a) => cmd_build_index(a),
        Command::Rerank(a) => cmd_rerank(a),
        Command::Evaluate(a) => cmd_evaluate(a),
    }
}

/// Splices `--key value` pairs from the `--config` file right after the
/// subcommand name, so that later command-line flags override them.
pub fn inject_config(argv: Vec<String>) -> anyhow::Result<Vec<String>> {
    let mut config = None;
    let mut sub_at = None;
    let mut i = 1;
    while i < argv.len() {
        let a = &argv[i];
        if let Some(v) = a.strip_prefix("--config=") {
            config = Some(PathBuf::from(v));
        } else if a == "--config" {
            config = argv.get(i + 1).map(PathBuf::from);
            i += 1;
        } else if a == "--threads" {
            i += 1;
        } else if sub_at.is_none() && !a.starts_with('-') {
            sub_at = Some(i);
        }
        i += 1;
    }
    let (Some(path), Some(at)) = (config, sub_at) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let mut injected = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}: line {}: expected key=value", path.display(), n + 1);
        };
        let (key, value) = (key.trim(), value.trim());
        match value {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => {
                injected.push(format!("--{key}"));
                injected.push(value.to_string());
            }
        }
    }
    let mut out = argv[..=at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[at + 1..]);
    Ok(out)
}

fn echo(cmd: &str, pairs: &[(&str, String)]) {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("pbc {cmd}: {}", body.join(" "));
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or_else(|| "-".into(), |p| p.display().to_string())
}

fn load_any_features(path: &Path) -> anyhow::Result<FeatureSet> {
    let fmt = FileFormat::detect(path)?;
    load_features(path, fmt).with_context(|| format!("loading features from {}", path.display()))
}

fn is_score_file(path: &Path) -> anyhow::Result<bool> {
    let mut magic = [0u8; 4];
    let mut f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let n = f.read(&mut magic)?;
    Ok(n == 4 && &magic == SCORES_MAGIC)
}

fn read_ids(path: &Path) -> anyhow::Result<Vec<String>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut ids = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() {
            ids.push(t.to_string());
        }
    }
    Ok(ids)
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn cmd_synth(a: &SynthArgs) -> anyhow::Result<()> {
    let cfg = SynthConfig {
        num_ids: a.num_ids,
        gallery_per_id: a.gallery_per_id,
        probes_per_id: a.probes_per_id,
        dim: a.dim,
        intra_id_noise: a.noise,
        camera_offset_scale: a.camera_offset,
        num_cameras: a.num_cameras,
        seed: a.seed,
    };
    echo(
        "synth",
        &[
            ("out-dir", a.out_dir.display().to_string()),
            ("num-ids", cfg.num_ids.to_string()),
            ("gallery-per-id", cfg.gallery_per_id.to_string()),
            ("probes-per-id", cfg.probes_per_id.to_string()),
            ("dim", cfg.dim.to_string()),
            ("noise", cfg.intra_id_noise.to_string()),
            ("camera-offset", cfg.camera_offset_scale.to_string()),
            ("num-cameras", cfg.num_cameras.to_string()),
            ("seed", cfg.seed.to_string()),
            ("format", format!("{:?}", a.format).to_lowercase()),
        ],
    );
    let (gallery, probes) = generate_synthetic(&cfg)?;
    std::fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let ext = match a.format {
        FileFormat::Csv => "csv",
        FileFormat::Binary => "bin",
    };
    let gpath = a.out_dir.join(format!("gallery.{ext}"));
    let ppath = a.out_dir.join(format!("probes.{ext}"));
    let tpath = a.out_dir.join("ground_truth.txt");
    save_features(&gallery, &gpath, a.format)?;
    save_features(&probes, &ppath, a.format)?;
    GroundTruth::from_metadata(&probes, &gallery, true)?.save(&tpath, &gallery.ids())?;
    eprintln!(
        "wrote {} gallery and {} probe samples to {}",
        gallery.len(),
        probes.len(),
        a.out_dir.display()
    );
    Ok(())
}

pub fn cmd_build_index(a: &BuildArgs) -> anyhow::Result<()> {
    let params = PbcParams {
        k: a.k,
        k0: a.k0,
        depth: a.depth,
        weighting: a.weighting,
        self_rank: a.self_rank,
        top_l: PbcParams::default().top_l.max(a.k),
        ..PbcParams::default()
    };
    echo(
        "build-index",
        &[
            ("gallery", opt_path(&a.gallery)),
            ("scores", opt_path(&a.scores)),
            ("gallery-ids", opt_path(&a.gallery_ids)),
            (
                "metric",
                if a.scores.is_some() {
                    Metric::Precomputed
                } else {
                    a.metric
                }
                .to_string(),
            ),
            ("k", a.k.to_string()),
            ("k0", a.k0.to_string()),
            ("depth", a.depth.to_string()),
            ("weighting", a.weighting.to_string()),
            ("self-rank", a.self_rank.to_string()),
            ("out", a.out.display().to_string()),
        ],
    );
    params.validate()?;
    let started = Instant::now();
    let index = if let Some(path) = &a.scores {
        let m = SimilarityMatrix::load(path)?;
        let ids = match &a.gallery_ids {
            Some(p) => read_ids(p)?,
            None => (0..m.rows()).map(|i| format!("g{i}")).collect(),
        };
        build_index_from_scores(ids, &m, &params)?
    } else {
        let path = a.gallery.as_ref().expect("clap enforces --gallery or --scores");
        if a.metric == Metric::Precomputed {
            bail!("--metric precomputed needs --scores instead of --gallery");
        }
        build_index(&load_any_features(path)?, a.metric, &params)?
    };
    let secs = started.elapsed().as_secs_f64();
    index.save(&a.out)?;
    eprintln!("indexed {} gallery samples in {secs:.3} s", index.len());
    println!("build_seconds={secs:.6}");
    Ok(())
}

pub fn cmd_rerank(a: &RerankArgs) -> anyhow::Result<()> {
    let index = GalleryIndex::load(&a.index).with_context(|| format!("loading index {}", a.index.display()))?;
    let built = *index.params();
    let params = PbcParams {
        k0: a.k0.unwrap_or(built.k0),
        k: a.k.unwrap_or(built.k),
        top_l: a.top_l,
        measure: a.measure,
        weighting: a.weighting.unwrap_or(built.weighting),
        context_side: a.context_side,
        stages: a.stages,
        depth: a.depth.unwrap_or(built.depth),
        self_rank: a.self_rank.unwrap_or(built.self_rank),
    };
    echo(
        "rerank",
        &[
            ("index", a.index.display().to_string()),
            ("queries", a.queries.display().to_string()),
            ("gallery", opt_path(&a.gallery)),
            ("query-ids", opt_path(&a.query_ids)),
            ("L", params.top_l.to_string()),
            ("stages", params.stages.to_string()),
            ("measure", params.measure.to_string()),
            ("context-side", params.context_side.to_string()),
            ("weighting", params.weighting.to_string()),
            ("k", params.k.to_string()),
            ("k0", params.k0.to_string()),
            ("depth", params.depth.to_string()),
            ("self-rank", params.self_rank.to_string()),
            ("topk-out", a.topk_out.map_or_else(|| "all".into(), |k| k.to_string())),
            ("out", opt_path(&a.out)),
            ("scores-out", opt_path(&a.scores_out)),
            ("timing-out", opt_path(&a.timing_out)),
            ("baseline-only", a.baseline_only.to_string()),
        ],
    );
    let reranker = Reranker::new(&index, params)?;

    let results: Vec<QueryResult> = if is_score_file(&a.queries)? {
        let m = SimilarityMatrix::load(&a.queries)?;
        if m.cols() != index.len() {
            bail!(
                "score matrix has {} columns, index has {} gallery samples",
                m.cols(),
                index.len()
            );
        }
        let ids = match &a.query_ids {
            Some(p) => read_ids(p)?,
            None => (0..m.rows()).map(|i| format!("q{i}")).collect(),
        };
        if ids.len() != m.rows() {
            bail!("{} query ids for {} score rows", ids.len(), m.rows());
        }
        use rayon::prelude::*;
        (0..m.rows())
            .into_par_iter()
            .map(|r| {
                if a.baseline_only {
                    let initial = RankingList::from_scores(m.row(r), None)?;
                    Ok(baseline_result(&ids[r], &initial))
                } else {
                    reranker.rerank_scores(&ids[r], m.row(r))
                }
            })
            .collect::<crate::Result<_>>()?
    } else {
        let gpath = a
            .gallery
            .as_ref()
            .context("feature queries need --gallery with the gallery features")?;
        let gallery = load_any_features(gpath)?;
        let probes = load_any_features(&a.queries)?;
        let reranker = reranker.with_gallery(&gallery)?;
        use rayon::prelude::*;
        probes
            .samples()
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                if a.baseline_only {
                    reranker.baseline_features(&s.id, probes.row(i))
                } else {
                    reranker.rerank_features(&s.id, probes.row(i))
                }
            })
            .collect::<crate::Result<_>>()?
    };

    let ids = index.ids();
    let mut out = output(&a.out)?;
    crate::eval::write_rankings(&mut out, &results, ids, a.topk_out)?;
    out.flush()?;

    if let Some(p) = &a.scores_out {
        let mut w = output(&Some(p.clone()))?;
        for r in &results {
            for c in &r.candidates {
                let s2 = c.stage2_score.map_or_else(|| "-".to_string(), |s| format!("{s:.12}"));
                writeln!(
                    w,
                    "{} {} {:.12} {s2}",
                    r.probe_id, ids[c.gallery_index as usize], c.stage1_score
                )?;
            }
        }
        w.flush()?;
    }
    if let Some(p) = &a.timing_out {
        let mut w = output(&Some(p.clone()))?;
        for r in &results {
            writeln!(w, "{} {} {}", r.probe_id, r.online_micros, r.total_micros())?;
        }
        w.flush()?;
    }
    let online: Vec<u64> = results.iter().map(|r| r.online_micros).collect();
    let total: Vec<u64> = results.iter().map(QueryResult::total_micros).collect();
    if let (Some(o), Some(t)) = (timing_report(None, &online).online, timing_report(None, &total).online) {
        eprintln!(
            "{} queries: online median {:.3} ms (with initial ranking {:.3} ms), online total {:.3} s",
            o.count,
            o.median_micros / 1e3,
            t.median_micros / 1e3,
            o.total_micros / 1e6
        );
    }
    Ok(())
}

fn baseline_result(probe_id: &str, initial: &RankingList) -> QueryResult {
    QueryResult {
        probe_id: probe_id.to_string(),
        final_order: initial.order().to_vec(),
        candidates: Vec::new(),
        online_micros: 0,
        ranking_micros: 0,
    }
}

fn read_timing(path: &Path) -> anyhow::Result<Vec<u64>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let v = fields.get(1).and_then(|s| s.parse().ok()).with_context(|| {
            format!(
                "{}: line {}: expected `probe_id online_us total_us`",
                path.display(),
                i + 1
            )
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn cmd_evaluate(a: &EvalArgs) -> anyhow::Result<()> {
    echo(
        "evaluate",
        &[
            ("rankings", a.rankings.display().to_string()),
            ("baseline", opt_path(&a.baseline)),
            ("ground-truth", a.ground_truth.display().to_string()),
            ("gallery", opt_path(&a.gallery)),
            ("index", opt_path(&a.index)),
            ("max-k", a.max_k.to_string()),
            ("timing", opt_path(&a.timing)),
            (
                "build-seconds",
                a.build_seconds.map_or_else(|| "-".into(), |s| s.to_string()),
            ),
            ("format", a.format.clone()),
            ("out", opt_path(&a.out)),
        ],
    );
    if !matches!(a.format.as_str(), "table" | "kv" | "both") {
        bail!("--format must be table, kv or both, got `{}`", a.format);
    }
    if a.max_k == 0 {
        bail!("--max-k must be at least 1");
    }
    let gallery_ids = match (&a.gallery, &a.index) {
        (Some(g), _) => load_any_features(g)?.ids(),
        (None, Some(i)) => GalleryIndex::load(i)?.ids().to_vec(),
        (None, None) => unreachable!("clap enforces --gallery or --index"),
    };
    let gt = GroundTruth::load(&a.ground_truth, &gallery_ids)?;
    let timing = match &a.timing {
        Some(p) => timing_report(a.build_seconds, &read_timing(p)?),
        None => TimingReport {
            build_seconds: a.build_seconds,
            online: None,
        },
    };
    let mut reports = Vec::new();
    if let Some(b) = &a.baseline {
        let r = load_rankings(b, &gallery_ids)?;
        reports.push(EvalReport::compute(
            "baseline",
            &r,
            &gt,
            a.max_k,
            TimingReport {
                build_seconds: None,
                online: None,
            },
        )?);
    }
    let r = load_rankings(&a.rankings, &gallery_ids)?;
    reports.push(EvalReport::compute("pbc", &r, &gt, a.max_k, timing)?);

    let mut out = output(&a.out)?;
    for rep in &reports {
        if a.format != "kv" {
            write!(out, "{}", rep.to_table())?;
        }
        if a.format != "table" {
            write!(out, "{}", rep.to_key_values())?;
        }
    }
    if let [base, pbc] = reports.as_slice() {
        writeln!(out, "delta.rank1={:+.6}", pbc.cmc.rank(1) - base.cmc.rank(1))?;
        writeln!(out, "delta.map={:+.6}", pbc.map - base.map)?;
    }
    out.flush()?;
    Ok(())
}
