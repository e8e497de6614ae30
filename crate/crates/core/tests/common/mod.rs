//! Literal reference implementations used as oracles by the integration tests.
//!
//! Everything here is written from the definitions with plain loops and
//! sorts, sharing nothing with the library beyond its parameter types.

#![allow(dead_code)]

use pbc_rerank::context::Weighting;
use pbc_rerank::dataset::{FeatureSet, SampleMeta};
use pbc_rerank::index::{ContextSide, PbcParams, SelfRank, Stages};
use pbc_rerank::ranksim::MeasureKind;
use rand::seq::SliceRandom;
use rand::Rng;

/// Indices `0..scores.len()` minus `skip`, by descending score then index.
pub fn naive_order(scores: &[f32], skip: Option<usize>) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..scores.len()).filter(|&i| Some(i) != skip).collect();
    idx.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    idx.into_iter().map(|i| i as u32).collect()
}

/// Gallery ranking lists under one self convention, plus naive lookups.
pub struct Oracle {
    pub n: usize,
    pub self_rank: SelfRank,
    /// `lists[b]` is `R_b`; it starts with `b` when self is included.
    pub lists: Vec<Vec<u32>>,
}

impl Oracle {
    /// `gallery` is an `n × n` row-major score matrix; row `b` scores anchor `b`.
    pub fn new(gallery: &[f32], n: usize, self_rank: SelfRank) -> Self {
        let lists = (0..n)
            .map(|b| {
                let others = naive_order(&gallery[b * n..(b + 1) * n], Some(b));
                match self_rank {
                    SelfRank::Excluded => others,
                    SelfRank::Included => std::iter::once(b as u32).chain(others).collect(),
                }
            })
            .collect();
        Self { n, self_rank, lists }
    }

    /// `l_a(R_b)`, 1-based; 0 for `a == b` when self is excluded.
    pub fn pos(&self, a: u32, b: u32) -> u32 {
        match self.lists[b as usize].iter().position(|&x| x == a) {
            Some(i) => i as u32 + 1,
            None => {
                assert_eq!(a, b);
                0
            }
        }
    }

    pub fn top(&self, b: u32, k: usize) -> &[u32] {
        &self.lists[b as usize][..k]
    }

    /// Cohesion of the anchor's top-`k`, membership extended to the anchor.
    pub fn kappa(&self, q: u32, k: usize) -> f64 {
        let top = self.top(q, k);
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 1..=k {
            let qi = top[i - 1];
            for j in 1..=k {
                let qij = self.top(qi, k)[j - 1];
                let l = 1.0 / i as f64;
                den += l;
                if qij == q || top.contains(&qij) {
                    num += l;
                }
            }
        }
        num / den
    }

    /// `r(ρ, g)` from `(l_ρ(R_g), l_g(R_ρ))`.
    pub fn r(&self, measure: MeasureKind, rho: u32, g: u32) -> f64 {
        let (a, b) = (self.pos(rho, g), self.pos(g, rho));
        rank_similarity(measure, a, b)
    }

    /// `(entry, weight)` of `C¹(g, k)` as stored offline.
    pub fn gallery_context1(&self, g: u32, p: &PbcParams) -> Vec<(u32, f64)> {
        self.top(g, p.k)
            .iter()
            .map(|&rho| {
                let w = match p.weighting {
                    Weighting::Uniform => 1.0,
                    _ => self.r(MeasureKind::Combined, rho, g),
                };
                (rho, w)
            })
            .collect()
    }

    /// `(entry, weight)` of `C²(g, k0, k)`, duplicates kept.
    pub fn gallery_context2(&self, g: u32, p: &PbcParams) -> Vec<(u32, f64)> {
        self.second_order(self.top(g, p.k0), p)
    }

    fn second_order(&self, anchors: &[u32], p: &PbcParams) -> Vec<(u32, f64)> {
        let mut out = Vec::new();
        for &a in anchors {
            for &rho in self.top(a, p.k) {
                let w = match p.weighting {
                    Weighting::Reliability => self.kappa(a, p.k),
                    Weighting::Rank => self.r(MeasureKind::Combined, rho, a),
                    Weighting::Uniform => 1.0,
                };
                out.push((rho, w));
            }
        }
        out
    }

    /// Scores every candidate against the probe whose current list is
    /// `probe_list`; returns `(candidate, score)` sorted by descending score,
    /// ties in candidate order.
    pub fn stage(&self, probe_list: &[u32], candidates: &[u32], second: bool, p: &PbcParams) -> Vec<(u32, f64)> {
        let probe_pos = |g: u32| probe_list.iter().position(|&x| x == g).unwrap() as f64 + 1.0;
        let probe_ctx: Vec<(u32, f64)> = if second {
            self.second_order(&probe_list[..p.k0], p)
        } else {
            probe_list[..p.k]
                .iter()
                .enumerate()
                .map(|(i, &rho)| {
                    let w = match p.weighting {
                        Weighting::Uniform => 1.0,
                        _ => 1.0 / (i + 1) as f64,
                    };
                    (rho, w)
                })
                .collect()
        };
        let mut scored: Vec<(u32, f64)> = Vec::new();
        for &g in candidates {
            let gallery_ctx = if second {
                self.gallery_context2(g, p)
            } else {
                self.gallery_context1(g, p)
            };
            let mut probe_side = 0.0;
            for &(rho, w) in &gallery_ctx {
                probe_side += w * (1.0 / probe_pos(rho));
            }
            let mut gallery_side = 0.0;
            for &(rho, w) in &probe_ctx {
                gallery_side += w * self.r(p.measure, rho, g);
            }
            let s = match p.context_side {
                ContextSide::Bilateral => probe_side + gallery_side,
                ContextSide::GalleryOnly => probe_side,
                ContextSide::ProbeOnly => gallery_side,
            };
            scored.push((g, s));
        }
        // insertion sort: stable, descending
        for i in 1..scored.len() {
            let mut j = i;
            while j > 0 && scored[j - 1].1 < scored[j].1 {
                scored.swap(j - 1, j);
                j -= 1;
            }
        }
        scored
    }

    /// Full run: `(final_order, stage-1 scores, stage-2 scores)` with scores
    /// indexed by gallery sample.
    pub fn rerank(&self, probe_scores: &[f32], p: &PbcParams) -> (Vec<u32>, Vec<Option<f64>>, Vec<Option<f64>>) {
        let initial = naive_order(probe_scores, None);
        let l = p.top_l.min(self.n);
        let candidates = initial[..l].to_vec();
        let mut s1 = vec![None; self.n];
        let mut s2 = vec![None; self.n];
        let splice =
            |top: &[(u32, f64)]| -> Vec<u32> { top.iter().map(|c| c.0).chain(initial[l..].iter().copied()).collect() };
        let order = match p.stages {
            Stages::FirstOnly | Stages::SecondOnly => {
                let r = self.stage(&initial, &candidates, p.stages == Stages::SecondOnly, p);
                for &(g, s) in &r {
                    s1[g as usize] = Some(s);
                }
                splice(&r)
            }
            Stages::Progressive => {
                let r1 = self.stage(&initial, &candidates, true, p);
                for &(g, s) in &r1 {
                    s1[g as usize] = Some(s);
                }
                let current = splice(&r1);
                let stage1_order: Vec<u32> = r1.iter().map(|c| c.0).collect();
                let r2 = self.stage(&current, &stage1_order, false, p);
                for &(g, s) in &r2 {
                    s2[g as usize] = Some(s);
                }
                splice(&r2)
            }
        };
        (order, s1, s2)
    }
}

/// The four rank similarities, with `(0, 0)` giving 1.
pub fn rank_similarity(measure: MeasureKind, a: u32, b: u32) -> f64 {
    if a == 0 && b == 0 {
        return 1.0;
    }
    let (a, b) = (a as f64, b as f64);
    match measure {
        MeasureKind::Nonreciprocal => 1.0 / a,
        MeasureKind::ReciprocalMax => 1.0 / a.max(b),
        MeasureKind::ReciprocalSum => 1.0 / (a + b),
        MeasureKind::Combined => 1.0 / (a + b + a.max(b)),
    }
}

/// Rank-`k` hit counts, `k = 1..=max_k`, over probes that have positives.
pub fn naive_cmc(orders: &[Vec<u32>], positives: &[Vec<u32>], junk: &[Vec<u32>], max_k: usize) -> (Vec<usize>, usize) {
    let mut hits = vec![0; max_k];
    let mut evaluated = 0;
    for q in 0..orders.len() {
        if positives[q].is_empty() {
            continue;
        }
        evaluated += 1;
        let kept: Vec<u32> = orders[q].iter().copied().filter(|g| !junk[q].contains(g)).collect();
        for k in 1..=max_k {
            if kept.iter().take(k).any(|g| positives[q].contains(g)) {
                hits[k - 1] += 1;
            }
        }
    }
    (hits, evaluated)
}

/// AP as the mean of precision@rank over positives; missing positives count 0.
pub fn naive_ap(order: &[u32], positives: &[u32], junk: &[u32]) -> f64 {
    let kept: Vec<u32> = order.iter().copied().filter(|g| !junk.contains(g)).collect();
    let mut total = 0.0;
    for &p in positives {
        if let Some(i) = kept.iter().position(|&g| g == p) {
            let relevant_above = kept[..=i].iter().filter(|g| positives.contains(g)).count();
            total += relevant_above as f64 / (i + 1) as f64;
        }
    }
    total / positives.len() as f64
}

/// A square gallery score matrix and one probe row of distinct random values.
pub fn random_scores(rng: &mut impl Rng, n: usize) -> (Vec<f32>, Vec<f32>) {
    let mut values: Vec<u32> = (0..(n * n + n) as u32).collect();
    values.shuffle(rng);
    let to_score = |v: u32| v as f32 / 8.0;
    let gallery = values[..n * n].iter().map(|&v| to_score(v)).collect();
    let probe = values[n * n..].iter().map(|&v| to_score(v)).collect();
    (gallery, probe)
}

pub fn random_params(rng: &mut impl Rng, n: usize) -> PbcParams {
    PbcParams {
        k0: rng.gen_range(1..=2),
        k: rng.gen_range(1..=3),
        top_l: n,
        measure: MeasureKind::ALL[rng.gen_range(0..4)],
        weighting: [Weighting::Reliability, Weighting::Rank, Weighting::Uniform][rng.gen_range(0..3)],
        context_side: [ContextSide::Bilateral, ContextSide::ProbeOnly, ContextSide::GalleryOnly][rng.gen_range(0..3)],
        stages: [Stages::Progressive, Stages::SecondOnly, Stages::FirstOnly][rng.gen_range(0..3)],
        self_rank: [SelfRank::Included, SelfRank::Excluded][rng.gen_range(0..2)],
        ..PbcParams::default()
    }
}

/// Points on a line, one sample each.
pub fn line_features(xs: &[f32]) -> FeatureSet {
    let samples = (0..xs.len()).map(|i| SampleMeta::new(format!("s{i}"))).collect();
    FeatureSet::new(samples, 1, xs.to_vec()).unwrap()
}

/// Relative difference, scaled by the larger magnitude.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
