//! Hierarchical priors for a normal linear model, checked component-wise.

use nalgebra::DMatrix;
use priorinfo::closedform::{regression_compose, RegressionDesign, RegressionPrior};

fn main() -> priorinfo::Result<()> {
    let design = RegressionDesign { n: 50, k: 2 };
    let base = RegressionPrior { alpha: 3.0, tau: 2.0, sigma: DMatrix::identity(2, 2), lambda: f64::INFINITY };
    let alts = [
        ("normal, same scale", RegressionPrior { lambda: f64::INFINITY, ..base.clone() }),
        ("t_3, scale 3", RegressionPrior { alpha: 2.0, tau: 1.5, sigma: DMatrix::identity(2, 2) * 3.0, lambda: 3.0 }),
        ("t_3, scale 0.5", RegressionPrior { alpha: 2.0, tau: 1.5, sigma: DMatrix::identity(2, 2) * 0.5, lambda: 3.0 }),
    ];
    for (name, alt) in alts {
        let v = regression_compose(design, &base, &alt)?;
        println!("{name:>16}: variance {:?}, coefficients {:?}, both {}", v.variance, v.coefficients, v.both_wi());
    }
    Ok(())
}
