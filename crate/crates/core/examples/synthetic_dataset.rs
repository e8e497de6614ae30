//! Generate a synthetic identity/camera dataset and write it in both file
//! formats.
//!
//! ```text
//! cargo run --example synthetic_dataset -- [out_dir]
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use pbc_rerank::eval::GroundTruth;
use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "synthetic-out".into()));
    std::fs::create_dir_all(&out)?;

    let cfg = SynthConfig {
        num_ids: 20,
        ..SynthConfig::default()
    };
    let (gallery, probes) = generate_synthetic(&cfg)?;
    println!("gallery {} × {}, probes {}", gallery.len(), gallery.dim(), probes.len());

    let mut per_camera = BTreeMap::new();
    for s in gallery.samples() {
        *per_camera.entry(s.camera.unwrap()).or_insert(0) += 1;
    }
    println!("gallery images per camera: {per_camera:?}");

    save_features(&gallery, &out.join("gallery.csv"), FileFormat::Csv)?;
    save_features(&gallery, &out.join("gallery.bin"), FileFormat::Binary)?;
    save_features(&probes, &out.join("probes.csv"), FileFormat::Csv)?;

    let back = load_features(&out.join("gallery.bin"), FileFormat::Binary)?;
    assert_eq!(back, gallery);

    let gt = GroundTruth::from_metadata(&probes, &gallery, true)?;
    gt.save(&out.join("ground_truth.txt"), &gallery.ids())?;
    let first = &gt.probes()[0];
    println!(
        "probe {}: {} positives, {} junk (same identity, same camera)",
        first.probe_id,
        first.positives.len(),
        first.junk.len()
    );
    println!("wrote {}", out.display());
    Ok(())
}
