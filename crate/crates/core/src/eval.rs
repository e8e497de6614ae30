//! Retrieval quality and latency.
//!
//! Ground-truth file, one probe per line:
//!
//! ```text
//! probe_id | pos: g_id,g_id,... | junk: g_id,...
//! ```
//!
//! Rankings file (as written by `pbc rerank`):
//!
//! ```text
//! probe_id: g_id1 g_id2 ...
//! ```
//!
//! Junk entries are dropped from a list before any position is counted. A
//! probe with no positives is skipped and counted.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::dataset::FeatureSet;
use crate::error::{Error, Result};
use crate::rerank::QueryResult;

/// Anything that carries a probe id and a ranked list of gallery indices.
pub trait Ranked {
    fn probe_id(&self) -> &str;
    fn order(&self) -> &[u32];
}

impl Ranked for QueryResult {
    fn probe_id(&self) -> &str {
        &self.probe_id
    }

    fn order(&self) -> &[u32] {
        &self.final_order
    }
}

impl Ranked for (String, Vec<u32>) {
    fn probe_id(&self) -> &str {
        &self.0
    }

    fn order(&self) -> &[u32] {
        &self.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeTruth {
    pub probe_id: String,
    pub positives: Vec<u32>,
    pub junk: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    probes: Vec<ProbeTruth>,
    by_id: HashMap<String, usize>,
}

impl GroundTruth {
    /// Errors on duplicate probe ids or overlapping positive/junk sets.
    pub fn new(probes: Vec<ProbeTruth>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(probes.len());
        for (i, p) in probes.iter().enumerate() {
            if by_id.insert(p.probe_id.clone(), i).is_some() {
                return Err(Error::InvalidParam(format!(
                    "duplicate probe `{}` in ground truth",
                    p.probe_id
                )));
            }
            let pos: HashSet<u32> = p.positives.iter().copied().collect();
            if let Some(g) = p.junk.iter().find(|g| pos.contains(g)) {
                return Err(Error::InvalidParam(format!(
                    "probe `{}`: gallery index {g} is both positive and junk",
                    p.probe_id
                )));
            }
        }
        Ok(Self { probes, by_id })
    }

    /// Positives share the probe's label. With `same_camera_junk`, gallery
    /// samples with the probe's label and camera are junk instead.
    pub fn from_metadata(probes: &FeatureSet, gallery: &FeatureSet, same_camera_junk: bool) -> Result<Self> {
        let mut truths = Vec::with_capacity(probes.len());
        for p in probes.samples() {
            let label = p
                .label
                .as_ref()
                .ok_or_else(|| Error::InvalidParam(format!("probe `{}` has no label", p.id)))?;
            let mut positives = Vec::new();
            let mut junk = Vec::new();
            for (g, s) in gallery.samples().iter().enumerate() {
                if s.label.as_ref() != Some(label) {
                    continue;
                }
                if same_camera_junk && p.camera.is_some() && s.camera == p.camera {
                    junk.push(g as u32);
                } else {
                    positives.push(g as u32);
                }
            }
            truths.push(ProbeTruth {
                probe_id: p.id.clone(),
                positives,
                junk,
            });
        }
        Self::new(truths)
    }

    pub fn get(&self, probe_id: &str) -> Option<&ProbeTruth> {
        self.by_id.get(probe_id).map(|&i| &self.probes[i])
    }

    pub fn probes(&self) -> &[ProbeTruth] {
        &self.probes
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn read<R: BufRead>(reader: R, source_name: &str, gallery_ids: &[String]) -> Result<Self> {
        let lookup = id_lookup(gallery_ids);
        let mut truths = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let loc = format!("line {}", i + 1);
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('|').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::format(
                    source_name,
                    loc,
                    "expected `probe_id | pos: ... | junk: ...`",
                ));
            }
            let list = |part: &str, key: &str| -> Result<Vec<u32>> {
                let rest = part
                    .strip_prefix(key)
                    .ok_or_else(|| Error::format(source_name, &loc, format!("expected `{key}`")))?;
                rest.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|id| {
                        lookup
                            .get(id)
                            .copied()
                            .ok_or_else(|| Error::format(source_name, &loc, format!("unknown gallery id `{id}`")))
                    })
                    .collect()
            };
            truths.push(ProbeTruth {
                probe_id: parts[0].to_string(),
                positives: list(parts[1], "pos:")?,
                junk: list(parts[2], "junk:")?,
            });
        }
        Self::new(truths).map_err(|e| Error::format(source_name, "ground truth", e.to_string()))
    }

    pub fn write<W: Write>(&self, w: &mut W, gallery_ids: &[String]) -> Result<()> {
        let names = |v: &[u32]| {
            v.iter()
                .map(|&g| gallery_ids[g as usize].as_str())
                .collect::<Vec<_>>()
                .join(",")
        };
        for p in &self.probes {
            writeln!(
                w,
                "{} | pos: {} | junk: {}",
                p.probe_id,
                names(&p.positives),
                names(&p.junk)
            )?;
        }
        Ok(())
    }

    pub fn load(path: &Path, gallery_ids: &[String]) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io_at(path, e))?;
        Self::read(BufReader::new(f), &path.display().to_string(), gallery_ids)
    }

    pub fn save(&self, path: &Path, gallery_ids: &[String]) -> Result<()> {
        let mut f = std::io::BufWriter::new(File::create(path).map_err(|e| Error::io_at(path, e))?);
        self.write(&mut f, gallery_ids)?;
        f.flush().map_err(|e| Error::io_at(path, e))
    }
}

fn id_lookup(ids: &[String]) -> HashMap<&str, u32> {
    ids.iter().enumerate().map(|(i, s)| (s.as_str(), i as u32)).collect()
}

/// Relevance of each kept entry of `order` after junk removal.
pub fn cleaned_relevance(order: &[u32], truth: &ProbeTruth) -> Vec<bool> {
    let pos: HashSet<u32> = truth.positives.iter().copied().collect();
    let junk: HashSet<u32> = truth.junk.iter().copied().collect();
    order
        .iter()
        .filter(|g| !junk.contains(g))
        .map(|g| pos.contains(g))
        .collect()
}

/// Mean over positives of precision at each positive's position. Positives
/// missing from a truncated list contribute 0.
pub fn average_precision(relevance: &[bool], num_positives: usize) -> f64 {
    if num_positives == 0 {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, &rel) in relevance.iter().enumerate() {
        if rel {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / num_positives as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cmc {
    /// `rates[k - 1]` is the rank-`k` rate.
    pub rates: Vec<f64>,
    pub evaluated: usize,
    pub skipped: usize,
}

impl Cmc {
    /// Rank-`k` rate, 1-based.
    pub fn rank(&self, k: usize) -> f64 {
        self.rates[k - 1]
    }
}

fn truth_for<'g, T: Ranked>(r: &T, gt: &'g GroundTruth) -> Result<&'g ProbeTruth> {
    gt.get(r.probe_id())
        .ok_or_else(|| Error::InvalidParam(format!("no ground truth for probe `{}`", r.probe_id())))
}

pub fn cmc_curve<T: Ranked>(results: &[T], gt: &GroundTruth, max_k: usize) -> Result<Cmc> {
    let mut hits = vec![0usize; max_k];
    let (mut evaluated, mut skipped) = (0, 0);
    for r in results {
        let truth = truth_for(r, gt)?;
        if truth.positives.is_empty() {
            skipped += 1;
            continue;
        }
        evaluated += 1;
        if let Some(first) = cleaned_relevance(r.order(), truth).iter().position(|&x| x) {
            if first < max_k {
                hits[first] += 1;
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} probe(s) without positives skipped");
    }
    let mut acc = 0;
    let rates = hits
        .iter()
        .map(|&h| {
            acc += h;
            if evaluated == 0 {
                0.0
            } else {
                acc as f64 / evaluated as f64
            }
        })
        .collect();
    Ok(Cmc {
        rates,
        evaluated,
        skipped,
    })
}

/// Per-probe AP in input order; `None` for probes without positives.
pub fn average_precisions<T: Ranked>(results: &[T], gt: &GroundTruth) -> Result<Vec<Option<f64>>> {
    results
        .iter()
        .map(|r| {
            let truth = truth_for(r, gt)?;
            Ok((!truth.positives.is_empty())
                .then(|| average_precision(&cleaned_relevance(r.order(), truth), truth.positives.len())))
        })
        .collect()
}

/// Mean AP over probes that have positives; 0 if none do.
pub fn mean_average_precision<T: Ranked>(results: &[T], gt: &GroundTruth) -> Result<f64> {
    let aps: Vec<f64> = average_precisions(results, gt)?.into_iter().flatten().collect();
    Ok(if aps.is_empty() {
        0.0
    } else {
        aps.iter().sum::<f64>() / aps.len() as f64
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnlineStats {
    pub count: usize,
    pub mean_micros: f64,
    pub median_micros: f64,
    pub p95_micros: f64,
    pub total_micros: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingReport {
    pub build_seconds: Option<f64>,
    /// `None` when there were no queries.
    pub online: Option<OnlineStats>,
}

/// Median averages the two middle values; p95 is nearest-rank.
pub fn timing_report(build_seconds: Option<f64>, per_query_micros: &[u64]) -> TimingReport {
    let online = (!per_query_micros.is_empty()).then(|| {
        let mut v: Vec<f64> = per_query_micros.iter().map(|&x| x as f64).collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let total: f64 = v.iter().sum();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        let p95_rank = ((0.95 * n as f64).ceil() as usize).clamp(1, n);
        OnlineStats {
            count: n,
            mean_micros: total / n as f64,
            median_micros: median,
            p95_micros: v[p95_rank - 1],
            total_micros: total,
        }
    });
    TimingReport { build_seconds, online }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub name: String,
    pub cmc: Cmc,
    pub map: f64,
    pub per_query_ap: Vec<(String, Option<f64>)>,
    pub timing: TimingReport,
}

/// Ranks reported in the table and key=value output.
pub const REPORT_RANKS: [usize; 4] = [1, 5, 10, 20];

impl EvalReport {
    pub fn compute<T: Ranked>(
        name: &str,
        results: &[T],
        gt: &GroundTruth,
        max_k: usize,
        timing: TimingReport,
    ) -> Result<Self> {
        let cmc = cmc_curve(results, gt, max_k)?;
        let aps = average_precisions(results, gt)?;
        let scored: Vec<f64> = aps.iter().flatten().copied().collect();
        let map = if scored.is_empty() {
            0.0
        } else {
            scored.iter().sum::<f64>() / scored.len() as f64
        };
        Ok(Self {
            name: name.to_string(),
            cmc,
            map,
            per_query_ap: results.iter().map(|r| r.probe_id().to_string()).zip(aps).collect(),
            timing,
        })
    }

    fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        REPORT_RANKS.into_iter().filter(|&k| k <= self.cmc.rates.len())
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {} ==", self.name);
        let _ = writeln!(
            s,
            "probes evaluated: {} (skipped {})",
            self.cmc.evaluated, self.cmc.skipped
        );
        for k in self.ranks() {
            let _ = writeln!(s, "  Rank-{k:<3} {:6.2}%", 100.0 * self.cmc.rank(k));
        }
        let _ = writeln!(s, "  mAP      {:6.2}%", 100.0 * self.map);
        if let Some(b) = self.timing.build_seconds {
            let _ = writeln!(s, "  offline build      {b:.3} s");
        }
        if let Some(o) = self.timing.online {
            let _ = writeln!(
                s,
                "  online per query   mean {:.3} ms, median {:.3} ms, p95 {:.3} ms",
                o.mean_micros / 1e3,
                o.median_micros / 1e3,
                o.p95_micros / 1e3
            );
            let _ = writeln!(
                s,
                "  online total       {:.3} s over {} queries",
                o.total_micros / 1e6,
                o.count
            );
        }
        s
    }

    pub fn to_key_values(&self) -> String {
        let p = &self.name;
        let mut s = String::new();
        let _ = writeln!(s, "{p}.evaluated={}", self.cmc.evaluated);
        let _ = writeln!(s, "{p}.skipped={}", self.cmc.skipped);
        for k in self.ranks() {
            let _ = writeln!(s, "{p}.rank{k}={:.6}", self.cmc.rank(k));
        }
        let _ = writeln!(s, "{p}.map={:.6}", self.map);
        if let Some(b) = self.timing.build_seconds {
            let _ = writeln!(s, "{p}.build_seconds={b:.6}");
        }
        if let Some(o) = self.timing.online {
            let _ = writeln!(s, "{p}.online_mean_ms={:.6}", o.mean_micros / 1e3);
            let _ = writeln!(s, "{p}.online_median_ms={:.6}", o.median_micros / 1e3);
            let _ = writeln!(s, "{p}.online_p95_ms={:.6}", o.p95_micros / 1e3);
            let _ = writeln!(s, "{p}.online_total_s={:.6}", o.total_micros / 1e6);
        }
        s
    }
}

/// Writes the top `topk` (all when `None`) of each result as `probe_id: g ...`.
pub fn write_rankings<W: Write, T: Ranked>(
    w: &mut W,
    results: &[T],
    gallery_ids: &[String],
    topk: Option<usize>,
) -> Result<()> {
    for r in results {
        let order = r.order();
        let order = &order[..topk.unwrap_or(order.len()).min(order.len())];
        write!(w, "{}:", r.probe_id())?;
        for &g in order {
            write!(w, " {}", gallery_ids[g as usize])?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_rankings<R: BufRead>(
    reader: R,
    source_name: &str,
    gallery_ids: &[String],
) -> Result<Vec<(String, Vec<u32>)>> {
    let lookup = id_lookup(gallery_ids);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let loc = format!("line {}", i + 1);
        let (probe, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::format(source_name, &loc, "expected `probe_id: g_id ...`"))?;
        let order = rest
            .split_whitespace()
            .map(|id| {
                lookup
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::format(source_name, &loc, format!("unknown gallery id `{id}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((probe.trim().to_string(), order));
    }
    Ok(out)
}

pub fn load_rankings(path: &Path, gallery_ids: &[String]) -> Result<Vec<(String, Vec<u32>)>> {
    let f = File::open(path).map_err(|e| Error::io_at(path, e))?;
    read_rankings(BufReader::new(f), &path.display().to_string(), gallery_ids)
}
