//! Multivariate normal priors: the dominance condition and Monte-Carlo
//! conflict probabilities for a few covariance pairs.

use nalgebra::DMatrix;
use priorinfo::closedform::{mvn_conflict_mc, normal_dominance_check, t_scale_check, tau_lambda_sq};
use priorinfo::distmath::Rng;
use priorinfo::modelprior::SampleSize;

fn main() -> priorinfo::Result<()> {
    let s1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]);
    let mut rng = Rng::new(11);
    for (name, s2) in [("2 x base", &s1 * 2.0), ("identity", DMatrix::identity(2, 2)), ("base / 2", &s1 * 0.5)] {
        let dom = normal_dominance_check(&s1, &s2)?;
        let mc = mvn_conflict_mc(&s1, &s2, 0.05, SampleSize::Finite(10), 200_000, &mut rng)?;
        println!("{name:>9}: dominates {dom}, conflict prob {:.4} +/- {:.4}", mc.value, mc.stderr);
    }
    println!("tau^2 for k = 2, lambda = 3: {:.4}", tau_lambda_sq(2, 3.0)?);
    println!("t_3 at 3 x base: {:?}", t_scale_check(&s1, &(&s1 * 3.0), 3.0)?);
    Ok(())
}
