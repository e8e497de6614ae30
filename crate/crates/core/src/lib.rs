//! Progressive bilateral-context re-ranking.
//!
//! A post-processing step for content-based retrieval (person
//! re-identification in particular). Given feature vectors or similarity
//! scores for a gallery and a probe, the probe's initial ranking list is
//! refined by comparing each candidate against the probe's neighborhood
//! and the probe against each candidate's neighborhood, using only rank
//! positions.
//!
//! The work is split in two:
//!
//! - **Offline** ([`index::build_index`]): gallery-to-gallery rank positions,
//!   first- and second-order contexts with their weights, and the
//!   per-sample ranking-list reliability. Nothing here touches probe data.
//! - **Online** ([`rerank::Reranker`]): one initial ranking per probe, then a
//!   second-order stage followed by a first-order stage over the top-`L`
//!   candidates. Every probe-side quantity is a table lookup.
//!
//! ```no_run
//! use pbc_rerank::prelude::*;
//!
//! let (gallery, probes) = generate_synthetic(&SynthConfig::default())?;
//! let params = PbcParams::default();
//! let index = build_index(&gallery, Metric::Euclidean, &params)?;
//! let reranker = Reranker::new(&index, params)?.with_gallery(&gallery)?;
//! let result = reranker.rerank_features(&probes.samples()[0].id, probes.row(0))?;
//! println!("top-5: {:?}", &result.final_order[..5]);
//! # Ok::<(), pbc_rerank::Error>(())
//! ```
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`dataset`] | feature files (CSV / binary) and the synthetic generator |
//! | [`baseline`] | initial ranking lists, position tables, score matrices |
//! | [`ranksim`] | rank-based pairwise similarity, four variants |
//! | [`context`] | first/second-order contexts, reliability, weights |
//! | [`index`] | offline gallery index and its file format |
//! | [`rerank`] | the online two-stage engine |
//! | [`eval`] | CMC, mAP, ground-truth files, timing summaries |
//! | [`cli`] | the `pbc` command line |

pub mod baseline;
pub mod cli;
pub mod context;
pub mod dataset;
mod error;
pub mod eval;
pub mod index;
pub mod ranksim;
pub mod rerank;

pub use error::{Error, Result};

/// Version of the command-line artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod prelude {
    pub use crate::baseline::{
        compute_gallery_rankings, compute_probe_ranking, Depth, Metric, PositionTable, RankingList, SimilarityMatrix,
    };
    pub use crate::context::{ContextEntry, ContextOrder, ContextSet, ReliabilityTable, Weighting};
    pub use crate::dataset::{
        generate_synthetic, load_features, save_features, FeatureSet, FileFormat, SampleMeta, SynthConfig,
    };
    pub use crate::eval::{cmc_curve, mean_average_precision, timing_report, GroundTruth};
    pub use crate::index::{
        build_index, build_index_from_scores, ContextSide, GalleryIndex, PbcParams, SelfRank, Stages,
    };
    pub use crate::ranksim::{MeasureKind, RankPair};
    pub use crate::rerank::{QueryResult, Reranker, ScoredCandidate};
    pub use crate::{Error, Result};
}
