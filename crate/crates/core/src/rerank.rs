//! Online re-ranking.
//!
//! For a candidate `g` and probe `p` the pair score is
//!
//! ```text
//! S(p, g) = Σ_{ϱ ∈ C_g} w_ϱ · r(p, ϱ)  +  Σ_{ρ ∈ C_p} w_ρ · r(g, ρ)
//! ```
//!
//! The first term compares the probe with the candidate's context using the
//! nonreciprocal `1 / l_ϱ(R_p)` from the probe's current list. The second
//! compares the candidate with the probe's context through the gallery
//! position table and the configured measure. Stage one uses second-order
//! contexts over the initial top-`L`; stage two uses first-order contexts on
//! the list produced by stage one, over the same candidates.

use std::time::Instant;

use rayon::prelude::*;

use crate::baseline::{probe_scores, Metric, RankingList};
use crate::context::{ContextEntry, ContextOrder, Weighting};
use crate::dataset::FeatureSet;
use crate::error::{Error, Result};
use crate::index::{ContextSide, GalleryIndex, PbcParams, Stages};
use crate::ranksim::MeasureKind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredCandidate {
    pub gallery_index: u32,
    /// 1-based position in the initial list, within `1..=L`.
    pub initial_position: u32,
    /// Score of the first stage that ran.
    pub stage1_score: f64,
    /// Score of the first-order stage of a progressive run.
    pub stage2_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub probe_id: String,
    /// Permutation of all gallery indices: re-ranked top-`L`, then the
    /// untouched tail.
    pub final_order: Vec<u32>,
    /// The re-scored candidates in final order.
    pub candidates: Vec<ScoredCandidate>,
    /// Re-ranking time, excluding the initial ranking.
    pub online_micros: u64,
    /// Time spent computing the initial ranking; 0 when it was supplied.
    pub ranking_micros: u64,
}

impl QueryResult {
    pub fn total_micros(&self) -> u64 {
        self.online_micros + self.ranking_micros
    }
}

/// `Σ w · r(entry)` over every context entry, duplicates included.
#[inline]
pub fn point_to_set_score(context: &[ContextEntry], r: impl Fn(u32) -> f64) -> f64 {
    context.iter().map(|e| e.weight * r(e.index)).sum()
}

/// Probe vs. a gallery context, `r = 1 / l_ϱ(R_p)`.
#[inline]
pub fn probe_side_score(probe: &RankingList, gallery_context: &[ContextEntry]) -> f64 {
    point_to_set_score(gallery_context, |rho| 1.0 / probe.position(rho) as f64)
}

/// Candidate `g` vs. the probe's context, `r` from the gallery positions.
/// With [`SelfRank::Excluded`](crate::index::SelfRank::Excluded) a context entry equal to `g` contributes its
/// weight times 1.
#[inline]
pub fn gallery_side_score(g: u32, probe_context: &[ContextEntry], index: &GalleryIndex, measure: MeasureKind) -> f64 {
    point_to_set_score(probe_context, |rho| {
        let p = index.rank_pair(rho, g);
        measure.eval_table(p.l_ab, p.l_ba)
    })
}

/// Combines the two one-sided scores.
#[inline]
pub fn bilateral_score(probe_side: f64, gallery_side: f64, side: ContextSide) -> f64 {
    match side {
        ContextSide::Bilateral => probe_side + gallery_side,
        ContextSide::GalleryOnly => probe_side,
        ContextSide::ProbeOnly => gallery_side,
    }
}

/// The probe's context of the given order, built from its current list.
pub fn probe_context(probe: &RankingList, index: &GalleryIndex, order: ContextOrder) -> Result<Vec<ContextEntry>> {
    let p = index.params();
    match order {
        ContextOrder::First => Ok(probe
            .top(p.k)?
            .iter()
            .enumerate()
            .map(|(i, &index)| ContextEntry {
                index,
                weight: match p.weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Rank | Weighting::Reliability => 1.0 / (i + 1) as f64,
                },
                block: None,
            })
            .collect()),
        ContextOrder::Second => {
            let mut out = Vec::with_capacity(p.k0 * p.k);
            for (j, &anchor) in probe.top(p.k0)?.iter().enumerate() {
                let kappa = index
                    .reliability()
                    .get(anchor)
                    .ok_or(Error::MissingReliability(anchor))?;
                let block = Some(j as u32 + 1);
                out.extend(index.context1(anchor).iter().map(|e| ContextEntry {
                    index: e.index,
                    weight: match p.weighting {
                        Weighting::Reliability => kappa,
                        Weighting::Rank => e.weight,
                        Weighting::Uniform => 1.0,
                    },
                    block,
                }));
            }
            Ok(out)
        }
    }
}

/// Scores `candidates` against the probe and returns `(candidate, score)`
/// sorted by descending score; ties keep the incoming order.
pub fn stage_rerank(
    probe: &RankingList,
    index: &GalleryIndex,
    candidates: &[u32],
    order: ContextOrder,
    measure: MeasureKind,
    side: ContextSide,
) -> Result<Vec<(u32, f64)>> {
    let pc = probe_context(probe, index, order)?;
    let mut scored: Vec<(u32, f64)> = candidates
        .iter()
        .map(|&g| {
            let gallery_context = match order {
                ContextOrder::First => index.context1(g),
                ContextOrder::Second => index.context2(g),
            };
            let ps = match side {
                ContextSide::ProbeOnly => 0.0,
                _ => probe_side_score(probe, gallery_context),
            };
            let gs = match side {
                ContextSide::GalleryOnly => 0.0,
                _ => gallery_side_score(g, &pc, index, measure),
            };
            (g, bilateral_score(ps, gs, side))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(scored)
}

/// `initial` with its first `new_top.len()` entries replaced by `new_top`.
fn merge(initial: &RankingList, new_top: &[u32]) -> RankingList {
    let mut order = Vec::with_capacity(initial.len());
    order.extend_from_slice(new_top);
    order.extend_from_slice(&initial.order()[new_top.len()..]);
    RankingList::from_valid_order(order, initial.gallery_len(), None)
}

/// Runs the configured stages on a probe's initial list.
///
/// `params` must agree with the index on the offline parameters; `L` is
/// clamped to the gallery size.
pub fn progressive_rerank(
    probe_id: &str,
    initial: &RankingList,
    index: &GalleryIndex,
    params: &PbcParams,
) -> Result<QueryResult> {
    let started = Instant::now();
    let n = index.len();
    if initial.anchor().is_some() || initial.gallery_len() != n || initial.len() != n {
        return Err(Error::InvalidParam(format!(
            "probe ranking must cover all {n} gallery samples"
        )));
    }
    let l = if params.top_l > n {
        log::warn!("L = {} exceeds the gallery size; clamping to {n}", params.top_l);
        n
    } else {
        params.top_l
    };
    let candidates = &initial.order()[..l];
    let (measure, side) = (params.measure, params.context_side);

    let (stage1, stage2) = match params.stages {
        Stages::FirstOnly => (
            stage_rerank(initial, index, candidates, ContextOrder::First, measure, side)?,
            None,
        ),
        Stages::SecondOnly => (
            stage_rerank(initial, index, candidates, ContextOrder::Second, measure, side)?,
            None,
        ),
        Stages::Progressive => {
            let s1 = stage_rerank(initial, index, candidates, ContextOrder::Second, measure, side)?;
            let s1_order: Vec<u32> = s1.iter().map(|c| c.0).collect();
            let current = merge(initial, &s1_order);
            let s2 = stage_rerank(&current, index, &s1_order, ContextOrder::First, measure, side)?;
            (s1, Some(s2))
        }
    };

    // stage-1 scores keyed by initial position
    let mut s1_by_pos = vec![0.0f64; l];
    for &(g, s) in &stage1 {
        s1_by_pos[initial.position(g) as usize - 1] = s;
    }
    let last = stage2.as_ref().unwrap_or(&stage1);
    let candidates = last
        .iter()
        .map(|&(g, s)| {
            let pos = initial.position(g);
            ScoredCandidate {
                gallery_index: g,
                initial_position: pos,
                stage1_score: s1_by_pos[pos as usize - 1],
                stage2_score: stage2.as_ref().map(|_| s),
            }
        })
        .collect::<Vec<_>>();
    let mut final_order = Vec::with_capacity(n);
    final_order.extend(candidates.iter().map(|c| c.gallery_index));
    final_order.extend_from_slice(&initial.order()[l..]);

    Ok(QueryResult {
        probe_id: probe_id.to_string(),
        final_order,
        candidates,
        online_micros: started.elapsed().as_micros() as u64,
        ranking_micros: 0,
    })
}

/// Online front end over a built index.
#[derive(Debug, Clone)]
pub struct Reranker<'a> {
    index: &'a GalleryIndex,
    params: PbcParams,
    gallery: Option<&'a FeatureSet>,
}

impl<'a> Reranker<'a> {
    /// Errors if `params` disagree with the index on `k0`, `k`, weighting or
    /// depth.
    pub fn new(index: &'a GalleryIndex, params: PbcParams) -> Result<Self> {
        params.validate()?;
        params.check_compatible(index.params())?;
        Ok(Self {
            index,
            params,
            gallery: None,
        })
    }

    /// Attaches the gallery features needed to rank raw probe features.
    pub fn with_gallery(mut self, gallery: &'a FeatureSet) -> Result<Self> {
        self.index.check_gallery(gallery)?;
        self.gallery = Some(gallery);
        Ok(self)
    }

    pub fn index(&self) -> &GalleryIndex {
        self.index
    }

    pub fn params(&self) -> &PbcParams {
        &self.params
    }

    /// The probe's initial list from its feature vector.
    pub fn initial_ranking(&self, probe: &[f32]) -> Result<RankingList> {
        let gallery = self
            .gallery
            .ok_or_else(|| Error::InvalidParam("ranking raw features needs the gallery features attached".into()))?;
        if self.index.metric() == Metric::Precomputed {
            return Err(Error::InvalidParam(
                "index was built from scores; pass probe scores instead".into(),
            ));
        }
        if probe.len() != gallery.dim() {
            return Err(Error::DimensionMismatch {
                expected: gallery.dim(),
                got: probe.len(),
            });
        }
        if let Some(col) = probe.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        RankingList::from_scores(&probe_scores(probe, gallery, self.index.metric())?, None)
    }

    pub fn rerank_features(&self, probe_id: &str, probe: &[f32]) -> Result<QueryResult> {
        let started = Instant::now();
        let initial = self.initial_ranking(probe)?;
        let ranking_micros = started.elapsed().as_micros() as u64;
        let mut r = progressive_rerank(probe_id, &initial, self.index, &self.params)?;
        r.ranking_micros = ranking_micros;
        Ok(r)
    }

    /// Re-ranks from one row of probe-to-gallery scores.
    pub fn rerank_scores(&self, probe_id: &str, scores: &[f32]) -> Result<QueryResult> {
        if scores.len() != self.index.len() {
            return Err(Error::DimensionMismatch {
                expected: self.index.len(),
                got: scores.len(),
            });
        }
        let started = Instant::now();
        let initial = RankingList::from_scores(scores, None)?;
        let ranking_micros = started.elapsed().as_micros() as u64;
        let mut r = progressive_rerank(probe_id, &initial, self.index, &self.params)?;
        r.ranking_micros = ranking_micros;
        Ok(r)
    }

    pub fn rerank_ranking(&self, probe_id: &str, initial: &RankingList) -> Result<QueryResult> {
        progressive_rerank(probe_id, initial, self.index, &self.params)
    }

    /// Every probe of `probes`, in parallel; output order follows input order.
    pub fn rerank_all(&self, probes: &FeatureSet) -> Result<Vec<QueryResult>> {
        probes
            .samples()
            .par_iter()
            .zip(probes.data().par_chunks(probes.dim()))
            .map(|(s, row)| self.rerank_features(&s.id, row))
            .collect()
    }

    /// Baseline result: the initial list, nothing re-scored.
    pub fn baseline_features(&self, probe_id: &str, probe: &[f32]) -> Result<QueryResult> {
        let started = Instant::now();
        let initial = self.initial_ranking(probe)?;
        Ok(QueryResult {
            probe_id: probe_id.to_string(),
            final_order: initial.order().to_vec(),
            candidates: Vec::new(),
            online_micros: 0,
            ranking_micros: started.elapsed().as_micros() as u64,
        })
    }
}
