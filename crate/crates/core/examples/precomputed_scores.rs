//! Re-rank from similarity matrices exported by an external model instead of
//! raw features.
//!
//! Any strictly increasing rescaling of the scores yields the same result,
//! which this example checks by also running on `exp(score)`.

use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let (gallery, probes) = generate_synthetic(&SynthConfig {
        num_ids: 30,
        ..SynthConfig::default()
    })?;
    let gallery_scores = SimilarityMatrix::gallery_from_features(&gallery, Metric::Cosine)?;
    let probe_scores = SimilarityMatrix::probes_from_features(&probes, &gallery, Metric::Cosine)?;

    let dir = std::env::temp_dir().join("pbc-precomputed");
    std::fs::create_dir_all(&dir)?;
    gallery_scores.save(&dir.join("gallery.pbcs"))?;
    let gallery_scores = SimilarityMatrix::load(&dir.join("gallery.pbcs"))?;

    let params = PbcParams::default();
    let run = |g: &SimilarityMatrix, p: &SimilarityMatrix| -> pbc_rerank::Result<Vec<Vec<u32>>> {
        let index = build_index_from_scores(gallery.ids(), g, &params)?;
        let rr = Reranker::new(&index, params)?;
        (0..p.rows())
            .map(|i| Ok(rr.rerank_scores(&probes.samples()[i].id, p.row(i))?.final_order))
            .collect()
    };
    let plain = run(&gallery_scores, &probe_scores)?;
    let rescaled = run(&gallery_scores.map(f32::exp)?, &probe_scores.map(f32::exp)?)?;
    println!(
        "{} probes re-ranked from a {}×{} score matrix",
        plain.len(),
        gallery_scores.rows(),
        gallery_scores.cols()
    );
    println!("first probe top-5: {:?}", &plain[0][..5]);
    println!("identical under exp rescaling: {}", plain == rescaled);
    Ok(())
}
