//! Build a gallery index, save it, load it back, and inspect one sample.
//!
//! ```text
//! cargo run --release --example offline_index -- [index_path]
//! ```

use std::time::Instant;

use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "gallery.pbci".into());
    let (gallery, _) = generate_synthetic(&SynthConfig::default())?;

    let params = PbcParams::default();
    let started = Instant::now();
    let index = build_index(&gallery, Metric::Euclidean, &params)?;
    println!("built index for {} samples in {:.2?}", index.len(), started.elapsed());

    index.save(path.as_ref())?;
    let loaded = GalleryIndex::load(path.as_ref())?;
    assert_eq!(loaded, index);
    loaded.check_gallery(&gallery)?;
    println!("saved and reloaded {path} ({} bytes)", std::fs::metadata(&path)?.len());

    let g = 0;
    println!("{}: first-order context", loaded.ids()[g as usize]);
    for e in loaded.context1(g) {
        println!("  {:<8} weight {:.4}", loaded.ids()[e.index as usize], e.weight);
    }
    println!("reliability {:.3}", loaded.reliability().get(g).unwrap());

    let (other, _) = generate_synthetic(&SynthConfig {
        seed: 99,
        ..SynthConfig::default()
    })?;
    match loaded.check_gallery(&other) {
        Err(e) => println!("different gallery rejected: {e}"),
        Ok(()) => unreachable!(),
    }
    Ok(())
}
