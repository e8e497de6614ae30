//! First- and second-order contexts and the reliability of a ranking list,
//! on a toy one-dimensional gallery with two tight groups and a loose one.

use pbc_rerank::context::{first_order_context, reliability_kappa, second_order_context, weight_first_order_offline};
use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let xs = [0.0f32, 0.1, 0.2, 5.0, 5.1, 5.2, 9.0, 11.0, 14.0];
    let samples = (0..xs.len()).map(|i| SampleMeta::new(format!("x{i}"))).collect();
    let gallery = FeatureSet::new(samples, 1, xs.to_vec())?;
    let (lists, table) = compute_gallery_rankings(&gallery, Metric::Euclidean)?;

    let (k0, k) = (2, 2);
    for g in [0u32, 4, 7] {
        let list = &lists[g as usize];
        let c1 = weight_first_order_offline(&first_order_context(list, k)?, &table)?;
        let c2 = second_order_context(list, &lists, k0, k)?;
        let kappa = reliability_kappa(list, &lists, k)?;
        println!("x{g} = {}", xs[g as usize]);
        println!("  ranking      {:?}", list.order());
        println!("  C1           {:?}  weights {:.3?}", c1.indices(), c1.weights());
        println!("  C2           {:?}", c2.indices());
        println!("  reliability  {kappa:.3}");
    }

    let kappa = ReliabilityTable::compute(&lists, lists.len(), k)?;
    println!("all κ: {:.2?}", kappa.kappa);
    Ok(())
}
