//! Content-based initial rankings.
//!
//! Every score in this crate is "greater is more similar"; Euclidean
//! distances are negated at the boundary. Ties are broken by ascending
//! gallery index, and a gallery sample never appears in its own list: its
//! position there is the sentinel `0`.

use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::dataset::FeatureSet;
use crate::error::{Error, Result};
use crate::ranksim::RankPair;

pub const SCORES_MAGIC: &[u8; 4] = b"PBCS";
pub const SCORES_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Euclidean,
    Cosine,
    /// Scores come from an external baseline as a [`SimilarityMatrix`].
    Precomputed,
}

impl Metric {
    /// Similarity of two feature vectors. `None` for [`Metric::Precomputed`].
    pub fn similarity(self, a: &[f32], b: &[f32]) -> Option<f32> {
        match self {
            Metric::Euclidean => Some(-sq_euclidean(a, b).sqrt()),
            Metric::Cosine => Some(cosine(a, b, norm(a), norm(b))),
            Metric::Precomputed => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
            Metric::Precomputed => "precomputed",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" => Ok(Metric::Cosine),
            "precomputed" => Ok(Metric::Precomputed),
            other => Err(Error::InvalidParam(format!("unknown metric `{other}`"))),
        }
    }
}

#[inline]
fn sq_euclidean(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0f32; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            let d = x[i] - y[i];
            acc[i] += d * d;
        }
    }
    let mut tail = 0f32;
    for (x, y) in ra.iter().zip(rb) {
        let d = x - y;
        tail += d * d;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

#[inline]
fn dot(a: &[f32], b: &[f32]) -> f32 {
    let mut acc = [0f32; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for i in 0..8 {
            acc[i] += x[i] * y[i];
        }
    }
    let mut tail = 0f32;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

fn norm(a: &[f32]) -> f32 {
    dot(a, a).sqrt()
}

#[inline]
fn cosine(a: &[f32], b: &[f32], na: f32, nb: f32) -> f32 {
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

/// Maps a score to a key whose ascending order is descending score.
#[inline]
fn descending_key(s: f32) -> u32 {
    // -0.0 and 0.0 tie.
    let s = if s == 0.0 { 0.0 } else { s };
    let b = s.to_bits();
    let ascending = if b & 0x8000_0000 != 0 { !b } else { b | 0x8000_0000 };
    !ascending
}

/// Indices sorted by descending score, ascending index on ties, optionally
/// leaving out one index.
pub(crate) fn rank_order(scores: &[f32], exclude: Option<usize>) -> Vec<u32> {
    let mut keys: Vec<u64> = scores
        .iter()
        .enumerate()
        .filter(|&(i, _)| Some(i) != exclude)
        .map(|(i, &s)| ((descending_key(s) as u64) << 32) | i as u64)
        .collect();
    keys.sort_unstable();
    keys.into_iter().map(|k| k as u32).collect()
}

/// An anchor's ordered list over the gallery plus its inverse.
///
/// For a probe anchor the list covers all `N` gallery samples. For a gallery
/// anchor `g` it covers the other `N - 1`, and `position(g) == 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingList {
    anchor: Option<u32>,
    order: Vec<u32>,
    positions: Vec<u32>,
}

impl RankingList {
    /// Ranks `scores` (one per gallery sample). `anchor` is the gallery index
    /// of the anchor itself, excluded from the list; `None` for probes.
    pub fn from_scores(scores: &[f32], anchor: Option<u32>) -> Result<Self> {
        if let Some(col) = scores
            .iter()
            .enumerate()
            .position(|(i, s)| !s.is_finite() && Some(i as u32) != anchor)
        {
            return Err(Error::NonFinite { row: 0, col });
        }
        if let Some(a) = anchor {
            if a as usize >= scores.len() {
                return Err(Error::InvalidParam(format!("anchor {a} out of range")));
            }
        }
        let order = rank_order(scores, anchor.map(|a| a as usize));
        Ok(Self::from_valid_order(order, scores.len(), anchor))
    }

    /// Wraps an explicit order. It must be a permutation of `0..n` minus the
    /// anchor.
    pub fn from_order(order: Vec<u32>, n: usize, anchor: Option<u32>) -> Result<Self> {
        let expected = n - usize::from(anchor.is_some());
        if order.len() != expected {
            return Err(Error::InvalidParam(format!(
                "ranking has {} entries, expected {expected}",
                order.len()
            )));
        }
        let mut seen = vec![false; n];
        for &g in &order {
            let g_usize = g as usize;
            if g_usize >= n || seen[g_usize] || Some(g) == anchor {
                return Err(Error::InvalidParam(format!("ranking is not a permutation (entry {g})")));
            }
            seen[g_usize] = true;
        }
        Ok(Self::from_valid_order(order, n, anchor))
    }

    pub(crate) fn from_valid_order(order: Vec<u32>, n: usize, anchor: Option<u32>) -> Self {
        let mut positions = vec![0u32; n];
        for (i, &g) in order.iter().enumerate() {
            positions[g as usize] = i as u32 + 1;
        }
        Self {
            anchor,
            order,
            positions,
        }
    }

    pub fn anchor(&self) -> Option<u32> {
        self.anchor
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn positions(&self) -> &[u32] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Gallery size the list was built over.
    pub fn gallery_len(&self) -> usize {
        self.positions.len()
    }

    /// 1-based position of gallery sample `g`; 0 when `g` is the anchor.
    #[inline]
    pub fn position(&self, g: u32) -> u32 {
        self.positions[g as usize]
    }

    pub fn top(&self, k: usize) -> Result<&[u32]> {
        self.order.get(..k).ok_or(Error::DepthExceeded {
            k,
            available: self.order.len(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Depth {
    #[default]
    Full,
    /// Positions beyond the cap are stored as `cap + 1`.
    Capped(u32),
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::Full => f.write_str("full"),
            Depth::Capped(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for Depth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Depth::Full),
            d => match d.parse::<u32>() {
                Ok(d) if d >= 1 => Ok(Depth::Capped(d)),
                _ => Err(Error::InvalidParam(format!(
                    "depth must be `full` or a positive integer, got `{d}`"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum PosStore {
    Narrow(Vec<u16>),
    Wide(Vec<u32>),
}

/// Dense table of `l_a(R_b)`, the position of gallery sample `a` in gallery
/// sample `b`'s ranking list. Row `b` is `R_b`'s inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionTable {
    n: usize,
    depth: Depth,
    store: PosStore,
}

impl PositionTable {
    fn empty(n: usize, depth: Depth) -> Self {
        let max_value = match depth {
            Depth::Full => n.saturating_sub(1) as u64,
            Depth::Capped(d) => (n.saturating_sub(1) as u64).min(d as u64 + 1),
        };
        let store = if max_value <= u16::MAX as u64 {
            PosStore::Narrow(vec![0; n * n])
        } else {
            PosStore::Wide(vec![0; n * n])
        };
        Self { n, depth, store }
    }

    /// Wraps a stored table after checking it is well formed: every
    /// off-diagonal value in `1..=max`, a zero diagonal.
    pub(crate) fn from_parts(n: usize, depth: Depth, store: PosStore) -> Result<Self> {
        let max_value = Self::empty(0, depth).cap().min(n.saturating_sub(1) as u32);
        let check = |values: &mut dyn Iterator<Item = u32>| -> Result<()> {
            let mut count = 0;
            for (i, v) in values.enumerate() {
                count += 1;
                let diagonal = i / n == i % n;
                if diagonal != (v == 0) || v > max_value {
                    return Err(Error::CorruptIndex(format!(
                        "position {v} at row {}, column {}",
                        i / n,
                        i % n
                    )));
                }
            }
            if count != n * n {
                return Err(Error::CorruptIndex("position table has the wrong size".into()));
            }
            Ok(())
        };
        match &store {
            PosStore::Narrow(v) => check(&mut v.iter().map(|&x| x as u32))?,
            PosStore::Wide(v) => check(&mut v.iter().copied())?,
        }
        Ok(Self { n, depth, store })
    }

    pub(crate) fn store(&self) -> &PosStore {
        &self.store
    }

    /// Builds the table from explicit gallery ranking lists (list `b` must be
    /// anchored at `b`).
    pub fn from_rankings(lists: &[RankingList], depth: Depth) -> Result<Self> {
        let n = lists.len();
        let mut table = Self::empty(n, depth);
        for (b, list) in lists.iter().enumerate() {
            if list.anchor() != Some(b as u32) || list.gallery_len() != n {
                return Err(Error::InvalidParam(format!(
                    "ranking list {b} is not anchored at gallery sample {b}"
                )));
            }
            let cap = table.cap();
            let row = list.positions().iter().map(|&p| p.min(cap));
            match &mut table.store {
                PosStore::Narrow(v) => v[b * n..(b + 1) * n]
                    .iter_mut()
                    .zip(row)
                    .for_each(|(o, p)| *o = p as u16),
                PosStore::Wide(v) => v[b * n..(b + 1) * n].iter_mut().zip(row).for_each(|(o, p)| *o = p),
            }
        }
        Ok(table)
    }

    /// Largest stored value.
    fn cap(&self) -> u32 {
        match self.depth {
            Depth::Full => u32::MAX,
            Depth::Capped(d) => d + 1,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    /// `l_a(R_b)`: 0 when `a == b`, `D + 1` beyond a depth cap.
    #[inline]
    pub fn get(&self, a: u32, b: u32) -> u32 {
        let i = b as usize * self.n + a as usize;
        match &self.store {
            PosStore::Narrow(v) => v[i] as u32,
            PosStore::Wide(v) => v[i],
        }
    }

    /// `(l_a(R_b), l_b(R_a))`.
    #[inline]
    pub fn pair(&self, a: u32, b: u32) -> RankPair {
        RankPair::new(self.get(a, b), self.get(b, a))
    }

    /// Row `b` as owned positions.
    pub fn row(&self, b: u32) -> Vec<u32> {
        (0..self.n as u32).map(|a| self.get(a, b)).collect()
    }

    /// Recovers `R_b` from its row. Needs a full-depth table.
    pub fn ranking(&self, b: u32) -> Result<RankingList> {
        if self.depth != Depth::Full {
            return Err(Error::InvalidParam(
                "a depth-capped table cannot reproduce full ranking lists".into(),
            ));
        }
        let mut order = vec![0u32; self.n - 1];
        for a in 0..self.n as u32 {
            let p = self.get(a, b);
            if p > 0 {
                order[p as usize - 1] = a;
            }
        }
        Ok(RankingList::from_valid_order(order, self.n, Some(b)))
    }
}

/// Where gallery-to-gallery scores come from.
pub(crate) enum GallerySource<'a> {
    Features {
        fs: &'a FeatureSet,
        metric: Metric,
        norms: Vec<f32>,
    },
    Matrix(&'a SimilarityMatrix),
}

impl<'a> GallerySource<'a> {
    pub(crate) fn features(fs: &'a FeatureSet, metric: Metric) -> Result<Self> {
        if metric == Metric::Precomputed {
            return Err(Error::InvalidParam(
                "the precomputed metric needs a similarity matrix, not features".into(),
            ));
        }
        let norms = if metric == Metric::Cosine {
            fs.rows().map(norm).collect()
        } else {
            Vec::new()
        };
        Ok(GallerySource::Features { fs, metric, norms })
    }

    pub(crate) fn matrix(m: &'a SimilarityMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::InvalidParam(format!(
                "gallery similarity matrix must be square, got {}×{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(GallerySource::Matrix(m))
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            GallerySource::Features { fs, .. } => fs.len(),
            GallerySource::Matrix(m) => m.rows(),
        }
    }

    fn fill_row(&self, anchor: usize, out: &mut [f32]) {
        match self {
            GallerySource::Features { fs, metric, norms } => {
                let a = fs.row(anchor);
                match metric {
                    Metric::Euclidean => {
                        for (o, b) in out.iter_mut().zip(fs.rows()) {
                            *o = -sq_euclidean(a, b).sqrt();
                        }
                    }
                    Metric::Cosine => {
                        let na = norms[anchor];
                        for ((o, b), &nb) in out.iter_mut().zip(fs.rows()).zip(norms) {
                            *o = cosine(a, b, na, nb);
                        }
                    }
                    Metric::Precomputed => unreachable!("rejected in GallerySource::features"),
                }
            }
            GallerySource::Matrix(m) => out.copy_from_slice(m.row(anchor)),
        }
    }
}

/// Gallery position table plus each sample's top-`keep` neighbors.
pub(crate) struct GalleryRanks {
    pub(crate) table: PositionTable,
    pub(crate) top: Vec<u32>,
}

/// Ranks every gallery sample against the others, one row at a time; the
/// full `N × N` score matrix is never materialized.
pub(crate) fn rank_gallery(source: &GallerySource<'_>, depth: Depth, keep: usize) -> Result<GalleryRanks> {
    let n = source.len();
    if n < 2 {
        return Err(Error::TooFewSamples { n, min: 2 });
    }
    if keep > n - 1 {
        return Err(Error::DepthExceeded {
            k: keep,
            available: n - 1,
        });
    }
    let mut table = PositionTable::empty(n, depth);
    let cap = table.cap();
    // Chunks of at least one so the row and neighbor iterators stay in step.
    let stride = keep.max(1);
    let mut top = vec![0u32; n * stride];

    fn fill<T: Copy + Send>(
        source: &GallerySource<'_>,
        store: &mut [T],
        top: &mut [u32],
        n: usize,
        keep: usize,
        cap: u32,
        conv: impl Fn(u32) -> T + Sync,
    ) {
        let stride = keep.max(1);
        store
            .par_chunks_mut(n)
            .zip(top.par_chunks_mut(stride))
            .enumerate()
            .for_each(|(b, (row, top_row))| {
                let mut scores = vec![0f32; n];
                source.fill_row(b, &mut scores);
                let order = rank_order(&scores, Some(b));
                row[b] = conv(0);
                for (i, &a) in order.iter().enumerate() {
                    row[a as usize] = conv((i as u32 + 1).min(cap));
                }
                top_row[..keep].copy_from_slice(&order[..keep]);
            });
    }

    match &mut table.store {
        PosStore::Narrow(v) => fill(source, v, &mut top, n, keep, cap, |p| p as u16),
        PosStore::Wide(v) => fill(source, v, &mut top, n, keep, cap, |p| p),
    }
    if keep == 0 {
        top.clear();
    }
    Ok(GalleryRanks { table, top })
}

/// Every gallery sample's ranking list over the other gallery samples, with
/// the matching full-depth position table.
pub fn compute_gallery_rankings(gallery: &FeatureSet, metric: Metric) -> Result<(Vec<RankingList>, PositionTable)> {
    gallery_rankings_from(&GallerySource::features(gallery, metric)?)
}

fn gallery_rankings_from(source: &GallerySource<'_>) -> Result<(Vec<RankingList>, PositionTable)> {
    let ranks = rank_gallery(source, Depth::Full, 0)?;
    let lists = (0..ranks.table.len() as u32)
        .map(|b| ranks.table.ranking(b))
        .collect::<Result<Vec<_>>>()?;
    Ok((lists, ranks.table))
}

/// A probe's full initial ranking list over the gallery.
pub fn compute_probe_ranking(probe: &[f32], gallery: &FeatureSet, metric: Metric) -> Result<RankingList> {
    if probe.len() != gallery.dim() {
        return Err(Error::DimensionMismatch {
            expected: gallery.dim(),
            got: probe.len(),
        });
    }
    if let Some(col) = probe.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: 0, col });
    }
    let scores = probe_scores(probe, gallery, metric)?;
    RankingList::from_scores(&scores, None)
}

pub(crate) fn probe_scores(probe: &[f32], gallery: &FeatureSet, metric: Metric) -> Result<Vec<f32>> {
    Ok(match metric {
        Metric::Euclidean => gallery.rows().map(|g| -sq_euclidean(probe, g).sqrt()).collect(),
        Metric::Cosine => {
            let np = norm(probe);
            gallery.rows().map(|g| cosine(probe, g, np, norm(g))).collect()
        }
        Metric::Precomputed => {
            return Err(Error::InvalidParam(
                "the precomputed metric needs probe scores, not features".into(),
            ))
        }
    })
}

/// Gallery ranking lists from an `N × N` score matrix; the diagonal is ignored.
pub fn rankings_from_gallery_matrix(m: &SimilarityMatrix) -> Result<(Vec<RankingList>, PositionTable)> {
    gallery_rankings_from(&GallerySource::matrix(m)?)
}

/// One initial ranking list per row of a `probes × N` score matrix.
pub fn rankings_from_probe_matrix(m: &SimilarityMatrix) -> Result<Vec<RankingList>> {
    (0..m.rows())
        .map(|r| RankingList::from_scores(m.row(r), None))
        .collect()
}

/// Dense row-major `f32` score matrix supplied by an external baseline.
///
/// File form: `"PBCS" | u32 version = 1 | u32 rows | u32 cols | rows × cols f32`,
/// little-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl SimilarityMatrix {
    /// Rejects non-finite entries except on the diagonal of a square matrix,
    /// which no ranking ever reads.
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidParam(format!(
                "matrix of {rows}×{cols} cannot hold {} values",
                data.len()
            )));
        }
        for (i, v) in data.iter().enumerate() {
            let (r, c) = (i / cols, i % cols);
            if !v.is_finite() && !(rows == cols && r == c) {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Applies `f` to every entry; used to check rank-only behaviour.
    pub fn map(&self, f: impl Fn(f32) -> f32) -> Result<Self> {
        Self::new(self.rows, self.cols, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Pairwise gallery scores of a feature set under `metric`.
    pub fn gallery_from_features(fs: &FeatureSet, metric: Metric) -> Result<Self> {
        let source = GallerySource::features(fs, metric)?;
        let n = fs.len();
        let mut data = vec![0f32; n * n];
        for (b, row) in data.chunks_exact_mut(n).enumerate() {
            source.fill_row(b, row);
        }
        Self::new(n, n, data)
    }

    /// Probe-to-gallery scores under `metric`.
    pub fn probes_from_features(probes: &FeatureSet, gallery: &FeatureSet, metric: Metric) -> Result<Self> {
        if probes.dim() != gallery.dim() {
            return Err(Error::DimensionMismatch {
                expected: gallery.dim(),
                got: probes.dim(),
            });
        }
        let mut data = Vec::with_capacity(probes.len() * gallery.len());
        for p in probes.rows() {
            data.extend(probe_scores(p, gallery, metric)?);
        }
        Self::new(probes.len(), gallery.len(), data)
    }

    pub fn fingerprint(&self, ids: &[String]) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"scores");
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        for id in ids {
            h.update((id.len() as u64).to_le_bytes());
            h.update(id.as_bytes());
        }
        for v in &self.data {
            h.update(v.to_le_bytes());
        }
        h.finalize().into()
    }

    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(SCORES_MAGIC)?;
        w.write_all(&SCORES_VERSION.to_le_bytes())?;
        w.write_all(&(self.rows as u32).to_le_bytes())?;
        w.write_all(&(self.cols as u32).to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.cols * 4);
        for row in self.data.chunks_exact(self.cols) {
            buf.clear();
            for v in row {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn read<R: Read>(mut r: R, source_name: &str) -> Result<Self> {
        let err = |loc: &str, msg: &str| Error::format(source_name, loc, msg);
        let mut head = [0u8; 16];
        r.read_exact(&mut head).map_err(|_| err("header", "truncated header"))?;
        if &head[..4] != SCORES_MAGIC {
            return Err(err("header", "bad magic, expected `PBCS`"));
        }
        let word = |i: usize| u32::from_le_bytes([head[i], head[i + 1], head[i + 2], head[i + 3]]);
        if word(4) != SCORES_VERSION {
            return Err(err("header", &format!("unsupported version {}", word(4))));
        }
        let (rows, cols) = (word(8) as usize, word(12) as usize);
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != rows * cols * 4 {
            return Err(err(
                "body",
                &format!("expected {} bytes of scores, found {}", rows * cols * 4, bytes.len()),
            ));
        }
        let data = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Self::new(rows, cols, data)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io_at(path, e))?;
        Self::read(BufReader::new(f), &path.display().to_string())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io_at(path, e))?;
        let mut w = BufWriter::new(f);
        self.write(&mut w)?;
        w.flush().map_err(|e| Error::io_at(path, e))
    }
}

/// Debug dump: one `anchor_id: id1 id2 ...` line per list.
pub fn write_ranking_dump<W: Write>(
    w: &mut W,
    anchor_ids: &[String],
    lists: &[RankingList],
    gallery_ids: &[String],
) -> Result<()> {
    for (anchor, list) in anchor_ids.iter().zip(lists) {
        write!(w, "{anchor}:")?;
        for &g in list.order() {
            write!(w, " {}", gallery_ids[g as usize])?;
        }
        writeln!(w)?;
    }
    Ok(())
}
