//! Compare stage, context-side, measure and weighting variants against the
//! baseline on the synthetic dataset.

use pbc_rerank::eval::{EvalReport, TimingReport};
use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let (gallery, probes) = generate_synthetic(&SynthConfig::default())?;
    let gt = GroundTruth::from_metadata(&probes, &gallery, true)?;
    let base = PbcParams::default();
    let no_timing = TimingReport {
        build_seconds: None,
        online: None,
    };

    let index = build_index(&gallery, Metric::Euclidean, &base)?;
    let rr = Reranker::new(&index, base)?.with_gallery(&gallery)?;
    let baseline = (0..probes.len())
        .map(|i| rr.baseline_features(&probes.samples()[i].id, probes.row(i)))
        .collect::<pbc_rerank::Result<Vec<_>>>()?;
    let rep = EvalReport::compute("baseline", &baseline, &gt, 20, no_timing)?;
    println!("{:<28}{:>8}{:>8}", "variant", "Rank-1", "mAP");
    println!(
        "{:<28}{:>8.1}{:>8.1}",
        "baseline",
        100.0 * rep.cmc.rank(1),
        100.0 * rep.map
    );

    let variants = [
        ("progressive", base),
        (
            "second order only",
            PbcParams {
                stages: Stages::SecondOnly,
                ..base
            },
        ),
        (
            "first order only",
            PbcParams {
                stages: Stages::FirstOnly,
                ..base
            },
        ),
        (
            "probe-side context only",
            PbcParams {
                context_side: ContextSide::ProbeOnly,
                ..base
            },
        ),
        (
            "gallery-side context only",
            PbcParams {
                context_side: ContextSide::GalleryOnly,
                ..base
            },
        ),
        (
            "nonreciprocal r",
            PbcParams {
                measure: MeasureKind::Nonreciprocal,
                ..base
            },
        ),
        (
            "reciprocal-max r",
            PbcParams {
                measure: MeasureKind::ReciprocalMax,
                ..base
            },
        ),
        (
            "reciprocal-sum r",
            PbcParams {
                measure: MeasureKind::ReciprocalSum,
                ..base
            },
        ),
        (
            "no reliability",
            PbcParams {
                weighting: Weighting::Rank,
                ..base
            },
        ),
        (
            "uniform weights",
            PbcParams {
                weighting: Weighting::Uniform,
                ..base
            },
        ),
        (
            "self excluded",
            PbcParams {
                self_rank: SelfRank::Excluded,
                ..base
            },
        ),
    ];
    for (name, params) in variants {
        // weighting and self rank are baked into the index
        let index = build_index(&gallery, Metric::Euclidean, &params)?;
        let rr = Reranker::new(&index, params)?.with_gallery(&gallery)?;
        let results = rr.rerank_all(&probes)?;
        let rep = EvalReport::compute(name, &results, &gt, 20, no_timing)?;
        println!("{:<28}{:>8.1}{:>8.1}", name, 100.0 * rep.cmc.rank(1), 100.0 * rep.map);
    }
    Ok(())
}
