//! CMC and mAP on a hand-made example, then a full report.

use pbc_rerank::eval::{average_precision, cleaned_relevance, EvalReport, ProbeTruth};
use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    // gallery 0..6; probe a matches 2 and 5, gallery 1 is junk
    let gt = GroundTruth::new(vec![
        ProbeTruth {
            probe_id: "a".into(),
            positives: vec![2, 5],
            junk: vec![1],
        },
        ProbeTruth {
            probe_id: "b".into(),
            positives: vec![0],
            junk: vec![],
        },
    ])?;
    let results = vec![
        ("a".to_string(), vec![2u32, 1, 0, 5, 3, 4]),
        ("b".to_string(), vec![3u32, 4, 0, 1, 2, 5]),
    ];

    let relevance = cleaned_relevance(&results[0].1, &gt.probes()[0]);
    println!("probe a relevance after junk removal: {relevance:?}");
    println!("AP(a) = {:.4}", average_precision(&relevance, 2));

    let cmc = cmc_curve(&results, &gt, 5)?;
    println!("CMC: {:?}", cmc.rates);
    println!("mAP = {:.4}", mean_average_precision(&results, &gt)?);

    let timing = timing_report(Some(0.5), &[900, 1100, 1000, 4000]);
    let report = EvalReport::compute("example", &results, &gt, 5, timing)?;
    print!("{}", report.to_table());
    print!("{}", report.to_key_values());
    Ok(())
}
