//! Prints kappa(lambda) and the limiting reduction ratio across degrees of freedom.

use priorinfo::closedform::{kappa, kappa_ratio};

fn main() -> priorinfo::Result<()> {
    println!("{:>8} {:>10} {:>14}", "lambda", "kappa", "ratio(0.05)");
    for lambda in [0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0] {
        println!("{lambda:>8} {:>10.6} {:>14.6}", kappa(lambda)?, kappa_ratio(lambda, 0.05)?);
    }
    Ok(())
}
