//! The four rank-based similarities on the pairs where the simpler ones tie.

use pbc_rerank::prelude::*;

fn main() -> pbc_rerank::Result<()> {
    let pairs = [(1, 3), (2, 3), (1, 7), (4, 4), (1, 1)];
    print!("{:<10}", "pair");
    for m in MeasureKind::ALL {
        print!("{:>16}", m.to_string());
    }
    println!();
    for (a, b) in pairs {
        print!("{:<10}", format!("({a},{b})"));
        for m in MeasureKind::ALL {
            print!("{:>16.6}", m.eval(RankPair::new(a, b))?);
        }
        println!();
    }
    // a sample compared with itself
    println!("self pair: {}", MeasureKind::Combined.eval(RankPair::new(0, 0))?);
    Ok(())
}
