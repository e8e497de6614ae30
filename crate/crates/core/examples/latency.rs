//! Offline build time and per-query online latency on a large synthetic gallery.
//!
//! ```text
//! cargo run --release --example latency -- [num_ids] [gallery_per_id] [dim] [queries]
//! ```
//!
//! Defaults give a 16 000-sample, 128-dimensional gallery.

use std::time::Instant;

use pbc_rerank::prelude::*;

fn arg(i: usize, default: usize) -> usize {
    std::env::args().nth(i).and_then(|s| s.parse().ok()).unwrap_or(default)
}

fn main() -> pbc_rerank::Result<()> {
    let cfg = SynthConfig {
        num_ids: arg(1, 4000),
        gallery_per_id: arg(2, 4),
        dim: arg(3, 128),
        ..SynthConfig::default()
    };
    let queries = arg(4, 200);
    let (gallery, probes) = generate_synthetic(&cfg)?;
    println!("gallery: {} × {}", gallery.len(), gallery.dim());

    let params = PbcParams::default();
    let started = Instant::now();
    let index = build_index(&gallery, Metric::Euclidean, &params)?;
    let build_seconds = started.elapsed().as_secs_f64();

    let reranker = Reranker::new(&index, params)?.with_gallery(&gallery)?;
    let (mut online, mut total) = (Vec::new(), Vec::new());
    for i in 0..queries.min(probes.len()) {
        let r = reranker.rerank_features(&probes.samples()[i].id, probes.row(i))?;
        online.push(r.online_micros);
        total.push(r.total_micros());
    }
    let online = timing_report(Some(build_seconds), &online);
    let total = timing_report(None, &total);
    let (o, t) = (online.online.unwrap(), total.online.unwrap());
    println!("build: {build_seconds:.2} s");
    println!(
        "re-rank only:      median {:.0} µs, p95 {:.0} µs",
        o.median_micros, o.p95_micros
    );
    println!(
        "with initial rank: median {:.0} µs, p95 {:.0} µs",
        t.median_micros, t.p95_micros
    );
    Ok(())
}
