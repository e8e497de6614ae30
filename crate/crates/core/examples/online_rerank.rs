//! Re-rank one probe and show how its top of the list moves.

use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let (gallery, probes) = generate_synthetic(&SynthConfig::default())?;
    let params = PbcParams::default();
    let index = build_index(&gallery, Metric::Euclidean, &params)?;
    let reranker = Reranker::new(&index, params)?.with_gallery(&gallery)?;

    let q = 3;
    let probe = &probes.samples()[q];
    let label = probe.label.as_deref().unwrap();
    let result = reranker.rerank_features(&probe.id, probes.row(q))?;
    let baseline = reranker.baseline_features(&probe.id, probes.row(q))?;

    let show = |g: u32| {
        let s = &gallery.samples()[g as usize];
        let hit = if s.label.as_deref() == Some(label) { "*" } else { " " };
        format!("{hit}{}", s.id)
    };
    println!("probe {} (identity {label}), * marks a true match", probe.id);
    println!(
        "{:>4}  {:<14}{:<14}{:>10}{:>10}",
        "pos", "baseline", "re-ranked", "stage 1", "stage 2"
    );
    for i in 0..10 {
        let c = &result.candidates[i];
        println!(
            "{:>4}  {:<14}{:<14}{:>10.4}{:>10.4}",
            i + 1,
            show(baseline.final_order[i]),
            show(c.gallery_index),
            c.stage1_score,
            c.stage2_score.unwrap_or(f64::NAN)
        );
    }
    println!(
        "online {} µs after {} µs of initial ranking",
        result.online_micros, result.ranking_micros
    );
    Ok(())
}
