//! Offline gallery index.
//!
//! Everything that depends only on the gallery is computed here once: the
//! gallery position table, every gallery sample's first- and second-order
//! context with its weights, and every sample's reliability. The online
//! engine only reads from it.
//!
//! File layout (little-endian):
//!
//! ```text
//! "PBCI" | u32 version
//! params   : u32 k0 | u32 k | u32 L | u8 measure | u8 weighting | u8 side | u8 stages | u8 self rank | u32 depth (0 = full)
//! u8 metric | [u8; 32] gallery fingerprint | u32 N | u32 dim
//! ids      : N × (u32 len | UTF-8)
//! u32 neighbor depth | N × depth u32 neighbors
//! contexts1: N × k      × (u32 index | f64 weight)
//! contexts2: N × k0 × k × (u32 index | f64 weight | u32 block)
//! kappa    : N × f64
//! positions: u8 width (2 | 4) | N × N values, row b = R_b
//! "IEND"
//! ```

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::baseline::{
    rank_gallery, Depth, GallerySource, Metric, PosStore, PositionTable, RankingList, SimilarityMatrix,
};
use crate::context::{ContextEntry, ContextOrder, ContextSet, NeighborLists, ReliabilityTable, Weighting};
use crate::dataset::FeatureSet;
use crate::error::{Error, Result};
use crate::ranksim::{r_combined, MeasureKind, RankPair};

pub const INDEX_MAGIC: &[u8; 4] = b"PBCI";
pub const INDEX_VERSION: u32 = 1;
const INDEX_END: &[u8; 4] = b"IEND";

/// Which context sets enter the pair score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ContextSide {
    /// Only the probe's context: candidate vs. probe context.
    ProbeOnly,
    /// Only the candidate's context: probe vs. candidate context.
    GalleryOnly,
    #[default]
    Bilateral,
}

impl fmt::Display for ContextSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextSide::ProbeOnly => "probe",
            ContextSide::GalleryOnly => "gallery",
            ContextSide::Bilateral => "bilateral",
        })
    }
}

impl FromStr for ContextSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "probe" => Ok(ContextSide::ProbeOnly),
            "gallery" => Ok(ContextSide::GalleryOnly),
            "bilateral" => Ok(ContextSide::Bilateral),
            other => Err(Error::InvalidParam(format!(
                "unknown context side `{other}` (expected probe|gallery|bilateral)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Stages {
    FirstOnly,
    SecondOnly,
    /// Second-order stage, then first-order stage on its output.
    #[default]
    Progressive,
}

impl fmt::Display for Stages {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stages::FirstOnly => "first",
            Stages::SecondOnly => "second",
            Stages::Progressive => "progressive",
        })
    }
}

impl FromStr for Stages {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Stages::FirstOnly),
            "second" => Ok(Stages::SecondOnly),
            "progressive" => Ok(Stages::Progressive),
            other => Err(Error::InvalidParam(format!(
                "unknown stages `{other}` (expected first|second|progressive)"
            ))),
        }
    }
}

/// Where a gallery sample stands in its own neighborhood.
///
/// The position table always leaves a sample out of its own list. With
/// `Included`, contexts, neighbor lists and rank pairs are read as if each
/// sample ranked itself first: `C¹(g, k)` is `g` plus its `k - 1` nearest
/// others, and every other position moves down by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SelfRank {
    #[default]
    Included,
    Excluded,
}

impl fmt::Display for SelfRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfRank::Included => "included",
            SelfRank::Excluded => "excluded",
        })
    }
}

impl FromStr for SelfRank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "included" => Ok(SelfRank::Included),
            "excluded" => Ok(SelfRank::Excluded),
            other => Err(Error::InvalidParam(format!(
                "unknown self rank `{other}` (expected included|excluded)"
            ))),
        }
    }
}

/// Re-ranking parameters.
///
/// `k0`, `k`, `weighting`, `depth` and `self_rank` shape the offline index;
/// the rest may change from query to query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PbcParams {
    pub k0: usize,
    pub k: usize,
    /// Number of initial candidates that are re-scored.
    pub top_l: usize,
    pub measure: MeasureKind,
    pub weighting: Weighting,
    pub context_side: ContextSide,
    pub stages: Stages,
    pub depth: Depth,
    pub self_rank: SelfRank,
}

impl Default for PbcParams {
    fn default() -> Self {
        Self {
            k0: 2,
            k: 10,
            top_l: 200,
            measure: MeasureKind::Combined,
            weighting: Weighting::Reliability,
            context_side: ContextSide::Bilateral,
            stages: Stages::Progressive,
            depth: Depth::Full,
            self_rank: SelfRank::Included,
        }
    }
}

impl PbcParams {
    pub fn validate(&self) -> Result<()> {
        if self.k0 < 1 {
            return Err(Error::InvalidParam(format!("k0 must be >= 1, got {}", self.k0)));
        }
        if self.k < 1 {
            return Err(Error::InvalidParam(format!("k must be >= 1, got {}", self.k)));
        }
        if self.top_l < self.k {
            return Err(Error::InvalidParam(format!(
                "L must be >= k, got L = {} and k = {}",
                self.top_l, self.k
            )));
        }
        if let Depth::Capped(d) = self.depth {
            if (d as usize) < self.k.max(self.k0) {
                return Err(Error::InvalidParam(format!(
                    "depth cap {d} must be >= max(k, k0) = {}",
                    self.k.max(self.k0)
                )));
            }
        }
        Ok(())
    }

    /// Errors unless `self` and `built` agree on the offline parameters.
    pub fn check_compatible(&self, built: &PbcParams) -> Result<()> {
        let mut diffs = Vec::new();
        if self.k0 != built.k0 {
            diffs.push(format!("k0 {} vs {}", self.k0, built.k0));
        }
        if self.k != built.k {
            diffs.push(format!("k {} vs {}", self.k, built.k));
        }
        if self.weighting != built.weighting {
            diffs.push(format!("weighting {} vs {}", self.weighting, built.weighting));
        }
        if self.depth != built.depth {
            diffs.push(format!("depth {} vs {}", self.depth, built.depth));
        }
        if self.self_rank != built.self_rank {
            diffs.push(format!("self rank {} vs {}", self.self_rank, built.self_rank));
        }
        if diffs.is_empty() {
            Ok(())
        } else {
            Err(Error::ParamMismatch(diffs.join(", ")))
        }
    }
}

/// All gallery-only artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct GalleryIndex {
    params: PbcParams,
    fingerprint: [u8; 32],
    metric: Metric,
    dim: usize,
    ids: Vec<String>,
    positions: PositionTable,
    neighbor_depth: usize,
    neighbors: Vec<u32>,
    contexts1: Vec<ContextEntry>,
    contexts2: Vec<ContextEntry>,
    kappa: ReliabilityTable,
}

/// Builds the index from gallery features. Never touches probe data.
pub fn build_index(gallery: &FeatureSet, metric: Metric, params: &PbcParams) -> Result<GalleryIndex> {
    let source = GallerySource::features(gallery, metric)?;
    build(
        &source,
        gallery.ids(),
        gallery.fingerprint(),
        metric,
        gallery.dim(),
        params,
    )
}

/// Builds the index from an external `N × N` gallery score matrix.
pub fn build_index_from_scores(
    ids: Vec<String>,
    scores: &SimilarityMatrix,
    params: &PbcParams,
) -> Result<GalleryIndex> {
    if ids.len() != scores.rows() {
        return Err(Error::InvalidParam(format!(
            "{} ids for a {}×{} score matrix",
            ids.len(),
            scores.rows(),
            scores.cols()
        )));
    }
    let source = GallerySource::matrix(scores)?;
    let fp = scores.fingerprint(&ids);
    build(&source, ids, fp, Metric::Precomputed, 0, params)
}

fn build(
    source: &GallerySource<'_>,
    ids: Vec<String>,
    fingerprint: [u8; 32],
    metric: Metric,
    dim: usize,
    params: &PbcParams,
) -> Result<GalleryIndex> {
    params.validate()?;
    let n = source.len();
    if n < 2 {
        return Err(Error::TooFewSamples { n, min: 2 });
    }
    let (k0, k) = (params.k0, params.k);
    let neighbor_depth = k.max(k0);
    let include = params.self_rank == SelfRank::Included;
    let others = neighbor_depth - usize::from(include);
    if others > n - 1 {
        return Err(Error::InvalidParam(format!(
            "max(k, k0) = {neighbor_depth} needs a gallery of at least {} samples, got {n}",
            others + 1
        )));
    }
    let started = Instant::now();
    let ranks = rank_gallery(source, params.depth, others)?;
    let neighbors = if include {
        let mut v = Vec::with_capacity(n * neighbor_depth);
        for g in 0..n {
            v.push(g as u32);
            v.extend_from_slice(&ranks.top[g * others..(g + 1) * others]);
        }
        v
    } else {
        ranks.top
    };
    log::info!("ranked {n} gallery samples in {:.2?}", started.elapsed());

    let mut index = GalleryIndex {
        params: *params,
        fingerprint,
        metric,
        dim,
        ids,
        positions: ranks.table,
        neighbor_depth,
        neighbors,
        contexts1: Vec::new(),
        contexts2: Vec::new(),
        kappa: ReliabilityTable { kappa: Vec::new(), k },
    };
    index.kappa = ReliabilityTable::compute(&index, n, k)?;

    let mut contexts1 = Vec::with_capacity(n * k);
    for g in 0..n as u32 {
        for &rho in &index.neighbor_row(g)[..k] {
            let weight = match params.weighting {
                Weighting::Uniform => 1.0,
                Weighting::Rank | Weighting::Reliability => r_combined(index.rank_pair(rho, g))?,
            };
            contexts1.push(ContextEntry {
                index: rho,
                weight,
                block: None,
            });
        }
    }
    let mut contexts2 = Vec::with_capacity(n * k0 * k);
    for g in 0..n as u32 {
        for j in 0..k0 {
            let anchor = index.neighbor_row(g)[j];
            let block = Some(j as u32 + 1);
            for e in &contexts1[anchor as usize * k..(anchor as usize + 1) * k] {
                let weight = match params.weighting {
                    Weighting::Reliability => index.kappa.kappa[anchor as usize],
                    Weighting::Rank => e.weight,
                    Weighting::Uniform => 1.0,
                };
                contexts2.push(ContextEntry {
                    index: e.index,
                    weight,
                    block,
                });
            }
        }
    }
    index.contexts1 = contexts1;
    index.contexts2 = contexts2;
    log::info!("built index for {n} gallery samples in {:.2?}", started.elapsed());
    Ok(index)
}

impl NeighborLists for GalleryIndex {
    fn top_k(&self, g: u32, k: usize) -> Result<&[u32]> {
        if g as usize >= self.len() {
            return Err(Error::MissingRanking(g));
        }
        if k > self.neighbor_depth {
            return Err(Error::DepthExceeded {
                k,
                available: self.neighbor_depth,
            });
        }
        Ok(&self.neighbor_row(g)[..k])
    }
}

impl GalleryIndex {
    /// `(l_a(R_b), l_b(R_a))` under the index's [`SelfRank`].
    #[inline]
    pub fn rank_pair(&self, a: u32, b: u32) -> RankPair {
        match self.params.self_rank {
            SelfRank::Excluded => self.positions.pair(a, b),
            SelfRank::Included if a == b => RankPair::new(1, 1),
            SelfRank::Included => RankPair::new(self.positions.get(a, b) + 1, self.positions.get(b, a) + 1),
        }
    }

    #[inline]
    fn neighbor_row(&self, g: u32) -> &[u32] {
        let d = self.neighbor_depth;
        &self.neighbors[g as usize * d..(g as usize + 1) * d]
    }

    pub fn params(&self) -> &PbcParams {
        &self.params
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    /// Feature dimension; 0 for an index built from scores.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn fingerprint(&self) -> &[u8; 32] {
        &self.fingerprint
    }

    pub fn positions(&self) -> &PositionTable {
        &self.positions
    }

    pub fn reliability(&self) -> &ReliabilityTable {
        &self.kappa
    }

    /// Weighted `C¹(g, k)` entries.
    #[inline]
    pub fn context1(&self, g: u32) -> &[ContextEntry] {
        let k = self.params.k;
        &self.contexts1[g as usize * k..(g as usize + 1) * k]
    }

    /// Weighted `C²(g, k0, k)` entries.
    #[inline]
    pub fn context2(&self, g: u32) -> &[ContextEntry] {
        let w = self.params.k * self.params.k0;
        &self.contexts2[g as usize * w..(g as usize + 1) * w]
    }

    pub fn context(&self, g: u32, order: ContextOrder) -> ContextSet {
        let (entries, k0) = match order {
            ContextOrder::First => (self.context1(g), None),
            ContextOrder::Second => (self.context2(g), Some(self.params.k0)),
        };
        ContextSet {
            anchor: Some(g),
            order,
            k: self.params.k,
            k0,
            entries: entries.to_vec(),
        }
    }

    /// `R_g`, recovered from the position table (full depth only).
    pub fn ranking(&self, g: u32) -> Result<RankingList> {
        self.positions.ranking(g)
    }

    /// Errors with [`Error::FingerprintMismatch`] unless `gallery` is the
    /// feature set the index was built from.
    pub fn check_gallery(&self, gallery: &FeatureSet) -> Result<()> {
        if gallery.fingerprint() != self.fingerprint {
            return Err(Error::FingerprintMismatch);
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io_at(path, e))?;
        let mut w = BufWriter::new(f);
        self.write(&mut w)?;
        w.flush().map_err(|e| Error::io_at(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io_at(path, e))?;
        Self::read(BufReader::new(f))
    }

    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        let p = &self.params;
        w.write_all(INDEX_MAGIC)?;
        put_u32(w, INDEX_VERSION)?;
        put_u32(w, p.k0 as u32)?;
        put_u32(w, p.k as u32)?;
        put_u32(w, p.top_l as u32)?;
        w.write_all(&[
            measure_code(p.measure),
            weighting_code(p.weighting),
            side_code(p.context_side),
            stages_code(p.stages),
            code_of(p.self_rank, &SELF_RANKS),
        ])?;
        put_u32(
            w,
            match p.depth {
                Depth::Full => 0,
                Depth::Capped(d) => d,
            },
        )?;
        w.write_all(&[metric_code(self.metric)])?;
        w.write_all(&self.fingerprint)?;
        put_u32(w, self.ids.len() as u32)?;
        put_u32(w, self.dim as u32)?;
        for id in &self.ids {
            put_u32(w, id.len() as u32)?;
            w.write_all(id.as_bytes())?;
        }
        put_u32(w, self.neighbor_depth as u32)?;
        let mut buf = Vec::new();
        for &g in &self.neighbors {
            buf.extend_from_slice(&g.to_le_bytes());
        }
        w.write_all(&buf)?;
        buf.clear();
        for e in &self.contexts1 {
            buf.extend_from_slice(&e.index.to_le_bytes());
            buf.extend_from_slice(&e.weight.to_le_bytes());
        }
        for e in &self.contexts2 {
            buf.extend_from_slice(&e.index.to_le_bytes());
            buf.extend_from_slice(&e.weight.to_le_bytes());
            buf.extend_from_slice(&e.block.unwrap_or(0).to_le_bytes());
        }
        for v in &self.kappa.kappa {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;

        let n = self.ids.len();
        match self.positions.store() {
            PosStore::Narrow(v) => {
                w.write_all(&[2])?;
                for row in v.chunks(n) {
                    buf.clear();
                    row.iter().for_each(|x| buf.extend_from_slice(&x.to_le_bytes()));
                    w.write_all(&buf)?;
                }
            }
            PosStore::Wide(v) => {
                w.write_all(&[4])?;
                for row in v.chunks(n) {
                    buf.clear();
                    row.iter().for_each(|x| buf.extend_from_slice(&x.to_le_bytes()));
                    w.write_all(&buf)?;
                }
            }
        }
        w.write_all(INDEX_END)?;
        Ok(())
    }

    pub fn read<R: Read>(r: R) -> Result<Self> {
        let mut r = Reader(r);
        let mut magic = [0u8; 4];
        r.bytes(&mut magic)?;
        if &magic != INDEX_MAGIC {
            return Err(Error::CorruptIndex("bad magic, expected `PBCI`".into()));
        }
        let version = r.u32()?;
        if version != INDEX_VERSION {
            return Err(Error::IndexVersion {
                found: version,
                expected: INDEX_VERSION,
            });
        }
        let k0 = r.u32()? as usize;
        let k = r.u32()? as usize;
        let top_l = r.u32()? as usize;
        let mut codes = [0u8; 5];
        r.bytes(&mut codes)?;
        let depth = match r.u32()? {
            0 => Depth::Full,
            d => Depth::Capped(d),
        };
        let params = PbcParams {
            k0,
            k,
            top_l,
            measure: decode(codes[0], &MEASURES)?,
            weighting: decode(codes[1], &WEIGHTINGS)?,
            context_side: decode(codes[2], &SIDES)?,
            stages: decode(codes[3], &STAGES)?,
            depth,
            self_rank: decode(codes[4], &SELF_RANKS)?,
        };
        params
            .validate()
            .map_err(|e| Error::CorruptIndex(format!("stored parameters invalid: {e}")))?;
        let metric = decode(r.u8()?, &METRICS)?;
        let mut fingerprint = [0u8; 32];
        r.bytes(&mut fingerprint)?;
        let n = r.u32()? as usize;
        let dim = r.u32()? as usize;
        if n < 2 {
            return Err(Error::CorruptIndex(format!("gallery size {n}")));
        }
        let mut ids = Vec::with_capacity(n.min(1 << 20));
        for _ in 0..n {
            let len = r.u32()? as usize;
            if len > 1 << 16 {
                return Err(Error::CorruptIndex("id length out of range".into()));
            }
            let mut b = vec![0u8; len];
            r.bytes(&mut b)?;
            ids.push(String::from_utf8(b).map_err(|_| Error::CorruptIndex("id is not UTF-8".into()))?);
        }
        let neighbor_depth = r.u32()? as usize;
        if neighbor_depth != k.max(k0) || neighbor_depth > n {
            return Err(Error::CorruptIndex(format!("neighbor depth {neighbor_depth}")));
        }
        let idx = |v: u32| -> Result<u32> {
            if (v as usize) < n {
                Ok(v)
            } else {
                Err(Error::CorruptIndex(format!("gallery index {v} out of range")))
            }
        };
        let mut neighbors = Vec::with_capacity(n * neighbor_depth);
        for _ in 0..n * neighbor_depth {
            neighbors.push(idx(r.u32()?)?);
        }
        let mut contexts1 = Vec::with_capacity(n * k);
        for _ in 0..n * k {
            let index = idx(r.u32()?)?;
            let weight = r.f64()?;
            contexts1.push(ContextEntry {
                index,
                weight,
                block: None,
            });
        }
        let mut contexts2 = Vec::with_capacity(n * k0 * k);
        for _ in 0..n * k0 * k {
            let index = idx(r.u32()?)?;
            let weight = r.f64()?;
            let block = r.u32()?;
            if block == 0 || block as usize > k0 {
                return Err(Error::CorruptIndex(format!("context block {block} out of range")));
            }
            contexts2.push(ContextEntry {
                index,
                weight,
                block: Some(block),
            });
        }
        if contexts1
            .iter()
            .chain(&contexts2)
            .any(|e| !(e.weight >= 0.0 && e.weight.is_finite()))
        {
            return Err(Error::CorruptIndex("invalid context weight".into()));
        }
        let mut kappa = Vec::with_capacity(n);
        for _ in 0..n {
            let v = r.f64()?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::CorruptIndex(format!("reliability {v} outside [0, 1]")));
            }
            kappa.push(v);
        }
        let width = r.u8()?;
        let mut row = vec![0u8; n * width as usize];
        let store = match width {
            2 => {
                let mut v = Vec::with_capacity(n * n);
                for _ in 0..n {
                    r.bytes(&mut row)?;
                    v.extend(row.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])));
                }
                PosStore::Narrow(v)
            }
            4 => {
                let mut v = Vec::with_capacity(n * n);
                for _ in 0..n {
                    r.bytes(&mut row)?;
                    v.extend(
                        row.chunks_exact(4)
                            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])),
                    );
                }
                PosStore::Wide(v)
            }
            w => return Err(Error::CorruptIndex(format!("position width {w}"))),
        };
        let mut end = [0u8; 4];
        r.bytes(&mut end)?;
        if &end != INDEX_END {
            return Err(Error::CorruptIndex("missing end marker".into()));
        }
        let mut rest = [0u8; 1];
        if r.0.read(&mut rest)? != 0 {
            return Err(Error::CorruptIndex("trailing bytes after end marker".into()));
        }
        Ok(GalleryIndex {
            params,
            fingerprint,
            metric,
            dim,
            ids,
            positions: PositionTable::from_parts(n, depth, store)?,
            neighbor_depth,
            neighbors,
            contexts1,
            contexts2,
            kappa: ReliabilityTable { kappa, k },
        })
    }
}

struct Reader<R>(R);

impl<R: Read> Reader<R> {
    fn bytes(&mut self, buf: &mut [u8]) -> Result<()> {
        self.0.read_exact(buf).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::CorruptIndex("file is truncated".into()),
            _ => Error::Io(e),
        })
    }

    fn u8(&mut self) -> Result<u8> {
        let mut b = [0u8; 1];
        self.bytes(&mut b)?;
        Ok(b[0])
    }

    fn u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.bytes(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn f64(&mut self) -> Result<f64> {
        let mut b = [0u8; 8];
        self.bytes(&mut b)?;
        Ok(f64::from_le_bytes(b))
    }
}

fn put_u32<W: Write>(w: &mut W, v: u32) -> Result<()> {
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

const MEASURES: [MeasureKind; 4] = MeasureKind::ALL;
const WEIGHTINGS: [Weighting; 3] = [Weighting::Uniform, Weighting::Rank, Weighting::Reliability];
const SIDES: [ContextSide; 3] = [ContextSide::ProbeOnly, ContextSide::GalleryOnly, ContextSide::Bilateral];
const STAGES: [Stages; 3] = [Stages::FirstOnly, Stages::SecondOnly, Stages::Progressive];
const SELF_RANKS: [SelfRank; 2] = [SelfRank::Included, SelfRank::Excluded];
const METRICS: [Metric; 3] = [Metric::Euclidean, Metric::Cosine, Metric::Precomputed];

fn code_of<T: PartialEq>(v: T, table: &[T]) -> u8 {
    table.iter().position(|t| *t == v).expect("every variant is listed") as u8
}

fn measure_code(m: MeasureKind) -> u8 {
    code_of(m, &MEASURES)
}

fn weighting_code(w: Weighting) -> u8 {
    code_of(w, &WEIGHTINGS)
}

fn side_code(s: ContextSide) -> u8 {
    code_of(s, &SIDES)
}

fn stages_code(s: Stages) -> u8 {
    code_of(s, &STAGES)
}

fn metric_code(m: Metric) -> u8 {
    code_of(m, &METRICS)
}

fn decode<T: Copy>(code: u8, table: &[T]) -> Result<T> {
    table
        .get(code as usize)
        .copied()
        .ok_or_else(|| Error::CorruptIndex(format!("unknown enum code {code}")))
}
