//! Neighbor contexts, ranking-list reliability and context weights.
//!
//! The first-order context of `x` is the top-`k` of its ranking list. The
//! second-order context concatenates the first-order contexts of `x`'s
//! top-`k0` neighbors, block by block, keeping duplicates: a sample that
//! shows up in several blocks contributes once per block.

use std::fmt;
use std::str::FromStr;

use crate::baseline::{PositionTable, RankingList};
use crate::error::{Error, Result};
use crate::ranksim::r_combined;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContextOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextEntry {
    pub index: u32,
    pub weight: f64,
    /// 1-based block of a second-order entry: which of the anchor's top-`k0`
    /// neighbors contributed it.
    pub block: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextSet {
    /// Gallery index of the anchor; `None` for a probe.
    pub anchor: Option<u32>,
    pub order: ContextOrder,
    pub k: usize,
    pub k0: Option<usize>,
    pub entries: Vec<ContextEntry>,
}

impl ContextSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn indices(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.weight).collect()
    }
}

/// Weighting of context samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Weighting {
    /// Every entry weighs 1.
    Uniform,
    /// Rank-based weights in both orders: a second-order entry keeps the
    /// weight it has in the first-order context it was copied from.
    Rank,
    /// Rank-based first-order weights; second-order entries carry the
    /// reliability of the neighbor whose list contributed them.
    #[default]
    Reliability,
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Uniform => "uniform",
            Weighting::Rank => "rank",
            Weighting::Reliability => "reliability",
        })
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Weighting::Uniform),
            "rank" => Ok(Weighting::Rank),
            "reliability" => Ok(Weighting::Reliability),
            other => Err(Error::InvalidParam(format!(
                "unknown weighting `{other}` (expected uniform|rank|reliability)"
            ))),
        }
    }
}

/// Top-`k` neighbor lookup for gallery samples.
pub trait NeighborLists {
    fn top_k(&self, g: u32, k: usize) -> Result<&[u32]>;
}

impl NeighborLists for [RankingList] {
    fn top_k(&self, g: u32, k: usize) -> Result<&[u32]> {
        let list = self.get(g as usize).ok_or(Error::MissingRanking(g))?;
        if list.anchor() != Some(g) {
            return Err(Error::MissingRanking(g));
        }
        list.top(k)
    }
}

impl NeighborLists for Vec<RankingList> {
    fn top_k(&self, g: u32, k: usize) -> Result<&[u32]> {
        self.as_slice().top_k(g, k)
    }
}

/// `C¹(x, k)`: the top-`k` of `ranking`, all weights 1.
pub fn first_order_context(ranking: &RankingList, k: usize) -> Result<ContextSet> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    let entries = ranking
        .top(k)?
        .iter()
        .map(|&index| ContextEntry {
            index,
            weight: 1.0,
            block: None,
        })
        .collect();
    Ok(ContextSet {
        anchor: ranking.anchor(),
        order: ContextOrder::First,
        k,
        k0: None,
        entries,
    })
}

/// `C²(x, k0, k)`: block `j` holds the top-`k` of the `j`-th neighbor's list.
pub fn second_order_context<N: NeighborLists + ?Sized>(
    ranking: &RankingList,
    neighbors: &N,
    k0: usize,
    k: usize,
) -> Result<ContextSet> {
    if k0 == 0 || k == 0 {
        return Err(Error::InvalidParam("k0 and k must be at least 1".into()));
    }
    let mut entries = Vec::with_capacity(k0 * k);
    for (j, &g) in ranking.top(k0)?.iter().enumerate() {
        let block = Some(j as u32 + 1);
        entries.extend(neighbors.top_k(g, k)?.iter().map(|&index| ContextEntry {
            index,
            weight: 1.0,
            block,
        }));
    }
    Ok(ContextSet {
        anchor: ranking.anchor(),
        order: ContextOrder::Second,
        k,
        k0: Some(k0),
        entries,
    })
}

/// Per-gallery-sample reliability `κ ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityTable {
    pub kappa: Vec<f64>,
    pub k: usize,
}

impl ReliabilityTable {
    pub fn get(&self, g: u32) -> Option<f64> {
        self.kappa.get(g as usize).copied()
    }

    /// κ for every gallery sample.
    pub fn compute<N: NeighborLists + ?Sized>(neighbors: &N, n: usize, k: usize) -> Result<Self> {
        let kappa = (0..n as u32)
            .map(|q| kappa_of(Some(q), neighbors.top_k(q, k)?, neighbors, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { kappa, k })
    }
}

/// Cohesion of the top-`k` of `ranking`.
///
/// With `q_1..q_k` the top-`k` of the anchor `q` and `q_i1..q_ik` the top-`k`
/// of `q_i`, the numerator adds `1/i` for every `q_ij` that is in the
/// anchor's top-`k` or is `q` itself; the denominator adds `1/i` for every
/// `q_ij`.
pub fn reliability_kappa<N: NeighborLists + ?Sized>(ranking: &RankingList, neighbors: &N, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    kappa_of(ranking.anchor(), ranking.top(k)?, neighbors, k)
}

fn kappa_of<N: NeighborLists + ?Sized>(anchor: Option<u32>, top: &[u32], neighbors: &N, k: usize) -> Result<f64> {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (i, &qi) in top.iter().enumerate() {
        let w = 1.0 / (i + 1) as f64;
        for &qij in neighbors.top_k(qi, k)? {
            den += w;
            if Some(qij) == anchor || top.contains(&qij) {
                num += w;
            }
        }
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// Offline first-order weights for a gallery anchor `g`: each entry `ρ` gets
/// the combined rank similarity of `(l_ρ(R_g), l_g(R_ρ))`.
pub fn weight_first_order_offline(c: &ContextSet, positions: &PositionTable) -> Result<ContextSet> {
    let g = c
        .anchor
        .ok_or_else(|| Error::InvalidParam("offline weights need a gallery anchor".into()))?;
    let mut out = c.clone();
    for e in &mut out.entries {
        e.weight = r_combined(positions.pair(e.index, g))?;
    }
    Ok(out)
}

/// Online first-order weights for a probe: the entry at position `i` of the
/// probe's current list weighs `1/i`.
pub fn weight_first_order_online(c: &ContextSet) -> ContextSet {
    let mut out = c.clone();
    for (i, e) in out.entries.iter_mut().enumerate() {
        e.weight = 1.0 / (i + 1) as f64;
    }
    out
}

/// Second-order weights: every entry of block `j` takes the reliability of
/// the block's anchor `top_k0[j - 1]`.
pub fn weight_second_order(c: &ContextSet, reliability: &ReliabilityTable, top_k0: &[u32]) -> Result<ContextSet> {
    let mut out = c.clone();
    for e in &mut out.entries {
        let block = e
            .block
            .ok_or_else(|| Error::InvalidParam("second-order weighting needs block-tagged entries".into()))?;
        let anchor = *top_k0
            .get(block as usize - 1)
            .ok_or_else(|| Error::InvalidParam(format!("no block anchor for block {block}")))?;
        e.weight = reliability.get(anchor).ok_or(Error::MissingReliability(anchor))?;
    }
    Ok(out)
}

pub fn weight_uniform(c: &ContextSet) -> ContextSet {
    let mut out = c.clone();
    for e in &mut out.entries {
        e.weight = 1.0;
    }
    out
}
